//! Quantum search for list colorings.
//!
//! Given a graph where each vertex carries its own list of allowed colors,
//! this crate synthesizes a Grover search that runs entirely inside the
//! subspace spanned by the allowed assignments: per-vertex initialization
//! unitaries, parity-minimized edge oracles over GF(2), and a diffusion
//! operator that reflects about the restricted uniform superposition. A
//! dense statevector simulator executes the circuits, and classical
//! enumeration cross-checks the results.
//!
//! The modules layer bottom-up:
//!
//! - [`problem`]: graphs, color lists, register layout, classical checking
//! - [`gf2`]: parity systems and minimum-cost solutions over GF(2)
//! - [`circuit`]: the gate set, cost metric, lowering, and export formats
//! - [`synth`]: circuit synthesis and the iteration plan
//! - [`sim`]: statevector simulation and seeded sampling
//! - [`cli`]: the command layer behind the `listgrover` binary

pub mod circuit;
pub mod cli;
pub mod gf2;
pub mod problem;
pub mod sim;
pub mod synth;
