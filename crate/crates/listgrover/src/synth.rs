//! Synthesis of the restricted Grover list-coloring circuit: per-vertex
//! initialization unitaries, parity-minimized edge oracles, the full
//! compute/uncompute oracle, the restricted diffusion, and the assembled
//! search circuit with its iteration plan.

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, Polarity};
use crate::gf2::{gaussian_eliminate, min_cost_solution, Gf2System, TermVariable};
use crate::problem::{bit_width, enumerate_valid_colorings, Problem, ProblemError};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("color {color} does not fit in {width} qubits")]
    ColorOutOfRange { color: u32, width: usize },
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

/// The operator taking |0> to the uniform superposition over a color list.
#[derive(Debug, Clone)]
pub struct InitUnitary {
    pub width: usize,
    pub matrix: Array2<Complex64>,
}

/// Builds the initialization unitary by Gram-Schmidt.
///
/// The ordered basis starts with the uniform superposition over the list,
/// followed by the standard basis with |max(list)> removed; orthonormalizing
/// it and taking the vectors as columns yields a unitary whose first column
/// (the image of |0>) is the superposition.
pub fn build_init_unitary(list: &[u32], width: usize) -> Result<InitUnitary, SynthError> {
    let dim = 1usize << width;
    for &c in list {
        if (c as usize) >= dim {
            return Err(SynthError::ColorOutOfRange { color: c, width });
        }
    }
    let max = *list.iter().max().expect("non-empty list") as usize;
    let amp = 1.0 / (list.len() as f64).sqrt();
    let mut chi = vec![0.0f64; dim];
    for &c in list {
        chi[c as usize] = amp;
    }
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(dim);
    basis.push(chi);
    for i in 0..dim {
        if i != max {
            let mut e = vec![0.0f64; dim];
            e[i] = 1.0;
            basis.push(e);
        }
    }
    // Gram-Schmidt; the leading vector is already normalized
    let mut ortho: Vec<Vec<f64>> = Vec::with_capacity(dim);
    for mut v in basis {
        for u in &ortho {
            let dot: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
            for (x, &y) in v.iter_mut().zip(u) {
                *x -= dot * y;
            }
        }
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!(norm > 1e-9, "basis degenerated during Gram-Schmidt");
        for x in v.iter_mut() {
            *x /= norm;
        }
        ortho.push(v);
    }
    let mut matrix = Array2::zeros((dim, dim));
    for (col, v) in ortho.iter().enumerate() {
        for (row, &x) in v.iter().enumerate() {
            matrix[(row, col)] = Complex64::new(x, 0.0);
        }
    }
    Ok(InitUnitary { width, matrix })
}

fn dagger(m: &Array2<Complex64>) -> Array2<Complex64> {
    let (r, c) = m.dim();
    let mut d = Array2::zeros((c, r));
    for i in 0..r {
        for j in 0..c {
            d[(j, i)] = m[(i, j)].conj();
        }
    }
    d
}

fn vertex_blocks(p: &Problem, adjoint: bool) -> Vec<Gate> {
    let layout = p.layout();
    p.graph()
        .vertices()
        .iter()
        .enumerate()
        .map(|(v, name)| {
            let (start, w) = layout.vertex_ranges[v];
            let init = build_init_unitary(p.list(v), w).expect("layout widths fit all colors");
            let (label, matrix) = if adjoint {
                (format!("U_{name}^dag"), dagger(&init.matrix))
            } else {
                (format!("U_{name}"), init.matrix)
            };
            Gate::Block {
                label,
                qubits: (start..start + w).collect(),
                matrix,
            }
        })
        .collect()
}

/// Full initialization: each vertex register gets its list unitary, edge
/// qubits stay |0>, and the phase ancilla becomes |-> via H then Z.
pub fn build_full_initialization(p: &Problem) -> Circuit {
    let layout = p.layout();
    let mut c = Circuit::new(layout.total);
    c.extend(vertex_blocks(p, false));
    c.push(Gate::H(layout.phase_ancilla));
    c.push(Gate::Z(layout.phase_ancilla));
    c
}

/// The synthesized edge-oracle description: control patterns whose joint
/// parity of matches flips the target exactly on the differing-color strings.
#[derive(Debug, Clone)]
pub struct TermSet {
    pub terms: Vec<TermVariable>,
    /// Total implementation cost, the sum of control counts.
    pub cost: usize,
    /// Whether the cost was certified minimal by a full coset scan.
    pub certified: bool,
    /// The subset-size bound at which the parity system first became feasible.
    pub feasible_k: usize,
}

/// Expresses the edge predicate as a parity of control patterns.
///
/// For growing pattern size `k`, builds the GF(2) system requiring an odd
/// number of matching patterns on every differing-color string of
/// `L_u x L_v` and an even number on every equal-color string, and returns a
/// minimum-cost solution at the first feasible `k`. Always feasible at
/// `k = j_u + j_v` (one full-width pattern per marked string).
pub fn oracle_reduction(list_u: &[u32], list_v: &[u32]) -> TermSet {
    let ju = bit_width(list_u);
    let jv = bit_width(list_v);
    let w = ju + jv;
    for k in 1..=w {
        let variables = pattern_variables(w, k);
        // per-variable (wire mask, required value) over the integer string
        let masks: Vec<(u64, u64)> = variables
            .iter()
            .map(|var| {
                let mut mask = 0u64;
                let mut value = 0u64;
                for (&wire, &bit) in var.wires.iter().zip(&var.pattern) {
                    mask |= 1 << (w - wire);
                    if bit {
                        value |= 1 << (w - wire);
                    }
                }
                (mask, value)
            })
            .collect();
        let mut sys = Gf2System::new(variables);
        for &a in list_u {
            for &b in list_v {
                let t = ((a as u64) << jv) | b as u64;
                let support: Vec<usize> = masks
                    .iter()
                    .enumerate()
                    .filter(|&(_, &(m, v))| t & m == v)
                    .map(|(i, _)| i)
                    .collect();
                sys.add_row(support, a != b);
            }
        }
        // interchangeable and unused patterns only inflate the coset scan
        let (reduced, keep) = sys.dedup_columns();
        let Some(sol) = gaussian_eliminate(&reduced) else {
            continue;
        };
        let costs: Vec<usize> = reduced.variables.iter().map(|v| v.cost()).collect();
        let res = min_cost_solution(&sol, &costs, crate::gf2::DEFAULT_FREE_BUDGET);
        let terms: Vec<TermVariable> = res
            .assignment
            .iter_ones()
            .map(|i| sys.variables[keep[i]].clone())
            .collect();
        return TermSet {
            cost: terms.iter().map(|t| t.cost()).sum(),
            terms,
            certified: res.certified,
            feasible_k: k,
        };
    }
    unreachable!("the system is always feasible at k = j_u + j_v");
}

/// All control-pattern variables with at most `k` wires over `w` wires,
/// ordered by (pattern size, wire set, bit string) for deterministic
/// pivoting and tie-breaking.
fn pattern_variables(w: usize, k: usize) -> Vec<TermVariable> {
    let mut subsets: Vec<Vec<usize>> = (1u64..(1 << w))
        .filter(|m| (m.count_ones() as usize) <= k)
        .map(|m| (1..=w).filter(|i| (m >> (i - 1)) & 1 == 1).collect())
        .collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut vars = Vec::new();
    for wires in subsets {
        let len = wires.len();
        for v in 0..(1u64 << len) {
            let pattern: Vec<bool> = (0..len).map(|b| (v >> (len - 1 - b)) & 1 == 1).collect();
            vars.push(TermVariable::new(wires.clone(), pattern));
        }
    }
    vars
}

/// One multi-controlled NOT per term: controls where the pattern bit is one,
/// anticontrols where it is zero, all targeting `target`.
fn term_gate(term: &TermVariable, wire_to_qubit: &[usize], target: usize) -> Gate {
    Gate::Mcx {
        controls: term
            .wires
            .iter()
            .zip(&term.pattern)
            .map(|(&wire, &bit)| {
                (
                    wire_to_qubit[wire - 1],
                    if bit { Polarity::Control } else { Polarity::AntiControl },
                )
            })
            .collect(),
        target,
    }
}

/// A per-edge oracle over wires `q_1..q_{j_u+j_v}` plus a target wire.
#[derive(Debug, Clone)]
pub struct EdgeOracle {
    pub width_u: usize,
    pub width_v: usize,
    pub terms: TermSet,
    /// Fragment over `width_u + width_v + 1` wires, target last.
    pub fragment: Circuit,
}

pub fn build_edge_oracle(list_u: &[u32], list_v: &[u32]) -> EdgeOracle {
    let ju = bit_width(list_u);
    let jv = bit_width(list_v);
    let terms = oracle_reduction(list_u, list_v);
    let wires: Vec<usize> = (0..ju + jv).collect();
    let mut fragment = Circuit::new(ju + jv + 1);
    for term in &terms.terms {
        fragment.push(term_gate(term, &wires, ju + jv));
    }
    EdgeOracle {
        width_u: ju,
        width_v: jv,
        terms,
        fragment,
    }
}

/// Full phase oracle: each edge oracle computes its validity bit onto the
/// edge qubit, one NOT controlled on all edge qubits kicks the phase off the
/// ancilla, and the edge oracles run again to restore the edge register to
/// |0>.
pub fn build_full_oracle(p: &Problem) -> Circuit {
    let layout = p.layout();
    assert!(p.graph().edge_count() >= 1, "oracle needs at least one edge");
    let mut compute: Vec<Gate> = Vec::new();
    for (e, &(u, v)) in p.graph().edges().iter().enumerate() {
        let oracle = build_edge_oracle(p.list(u), p.list(v));
        let (su, wu) = layout.vertex_ranges[u];
        let (sv, wv) = layout.vertex_ranges[v];
        let wire_to_qubit: Vec<usize> =
            (su..su + wu).chain(sv..sv + wv).collect();
        for term in &oracle.terms.terms {
            compute.push(term_gate(term, &wire_to_qubit, layout.edge_qubits[e]));
        }
    }
    let mut c = Circuit::new(layout.total);
    c.extend(compute.iter().cloned());
    c.push(Gate::Mcx {
        controls: layout
            .edge_qubits
            .iter()
            .map(|&q| (q, Polarity::Control))
            .collect(),
        target: layout.phase_ancilla,
    });
    c.extend(compute.into_iter().rev());
    c
}

/// Restricted diffusion A D A^dag: undo the initialization, reflect about
/// the all-zeros vertex string via an anticontrolled NOT onto the phase
/// ancilla, and re-apply the initialization.
pub fn build_diffusion(p: &Problem) -> Circuit {
    let layout = p.layout();
    let mut c = Circuit::new(layout.total);
    c.extend(vertex_blocks(p, true));
    c.push(Gate::Mcx {
        controls: (0..layout.vertex_bits())
            .map(|q| (q, Polarity::AntiControl))
            .collect(),
        target: layout.phase_ancilla,
    });
    c.extend(vertex_blocks(p, false));
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanMode {
    /// Count solutions classically and use the optimal iteration count.
    ExactCount,
    /// Use the given iteration count as-is.
    Fixed(u32),
    /// Drive iteration counts from the randomized unknown-count schedule.
    UnknownCount,
}

#[derive(Debug, Clone)]
pub struct GroverPlan {
    pub problem: Problem,
    pub mode: PlanMode,
    pub iterations: u32,
    /// Number of proper colorings |S'|, known in exact mode.
    pub solution_count: Option<u64>,
    /// Restricted space size |S|, the product of the list sizes.
    pub space_size: u64,
    pub unsatisfiable: bool,
}

/// Iteration count `floor(pi/4 * sqrt(|S| / |S'|))` over the restricted
/// space.
pub fn optimal_iterations(space_size: u64, solution_count: u64) -> u32 {
    assert!(solution_count > 0);
    (std::f64::consts::FRAC_PI_4 * (space_size as f64 / solution_count as f64).sqrt()).floor()
        as u32
}

pub fn grover_plan(p: &Problem, mode: PlanMode, cap: u64) -> Result<GroverPlan, ProblemError> {
    let space_size = p.restricted_space_size();
    let plan = match mode {
        PlanMode::Fixed(r) => GroverPlan {
            problem: p.clone(),
            mode,
            iterations: r,
            solution_count: None,
            space_size,
            unsatisfiable: false,
        },
        PlanMode::UnknownCount => GroverPlan {
            problem: p.clone(),
            mode,
            iterations: 0,
            solution_count: None,
            space_size,
            unsatisfiable: false,
        },
        PlanMode::ExactCount => {
            let (count, _) = enumerate_valid_colorings(p, cap, false)?;
            let unsatisfiable = count == 0;
            // amplification is vacuous with no edges or with everything
            // marked: the oracle degenerates to a global phase
            let iterations = if unsatisfiable
                || p.graph().edge_count() == 0
                || count == space_size
            {
                0
            } else {
                optimal_iterations(space_size, count)
            };
            GroverPlan {
                problem: p.clone(),
                mode,
                iterations,
                solution_count: Some(count),
                space_size,
                unsatisfiable,
            }
        }
    };
    Ok(plan)
}

/// Randomized iteration schedule for unknown solution counts: r is drawn
/// uniformly below a bound that grows by 6/5 per failed attempt, capped at
/// sqrt(|S|).
#[derive(Debug, Clone)]
pub struct UnknownSchedule {
    bound: f64,
    limit: f64,
}

impl UnknownSchedule {
    const GROWTH: f64 = 1.2;

    pub fn new(space_size: u64) -> Self {
        UnknownSchedule {
            bound: 1.0,
            limit: (space_size as f64).sqrt().max(1.0),
        }
    }

    /// Draws the next iteration count and advances the bound.
    pub fn next_iterations(&mut self, rng: &mut impl Rng) -> u32 {
        let r = rng.random_range(0..self.bound.ceil() as u64) as u32;
        self.bound = (self.bound * Self::GROWTH).min(self.limit);
        r
    }
}

/// Initialization followed by `iterations` repetitions of oracle then
/// diffusion. Measurement targets are the vertex-register qubits only.
pub fn build_grover_circuit(plan: &GroverPlan) -> Circuit {
    assert!(!plan.unsatisfiable, "refusing to build a circuit for an unsatisfiable plan");
    let p = &plan.problem;
    let mut c = build_full_initialization(p);
    if plan.iterations > 0 {
        let oracle = build_full_oracle(p);
        let diffusion = build_diffusion(p);
        for _ in 0..plan.iterations {
            c.append_circuit(&oracle);
            c.append_circuit(&diffusion);
        }
    }
    c
}

/// Textbook unrestricted Grover circuit on `num_qubits` search qubits plus a
/// phase ancilla: Hadamard initialization, one multi-controlled NOT per
/// marked state, and reflection about the uniform superposition.
pub fn build_unrestricted_grover(num_qubits: usize, marked: &[u64], iterations: u32) -> Circuit {
    let ancilla = num_qubits;
    let mut c = Circuit::new(num_qubits + 1);
    for q in 0..num_qubits {
        c.push(Gate::H(q));
    }
    c.push(Gate::H(ancilla));
    c.push(Gate::Z(ancilla));
    for _ in 0..iterations {
        for &m in marked {
            c.push(Gate::Mcx {
                controls: (0..num_qubits)
                    .map(|q| {
                        let bit = (m >> (num_qubits - 1 - q)) & 1 == 1;
                        (q, if bit { Polarity::Control } else { Polarity::AntiControl })
                    })
                    .collect(),
                target: ancilla,
            });
        }
        for q in 0..num_qubits {
            c.push(Gate::H(q));
        }
        c.push(Gate::Mcx {
            controls: (0..num_qubits).map(|q| (q, Polarity::AntiControl)).collect(),
            target: ancilla,
        });
        for q in 0..num_qubits {
            c.push(Gate::H(q));
        }
    }
    c
}

/// Parity-cover counts of a term set on a full-width string.
pub fn cover_count(terms: &TermSet, ju: usize, jv: usize, t: u64) -> usize {
    let w = ju + jv;
    terms
        .terms
        .iter()
        .filter(|term| {
            term.wires
                .iter()
                .zip(&term.pattern)
                .all(|(&wire, &bit)| ((t >> (w - wire)) & 1 == 1) == bit)
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::DEFAULT_ENUMERATION_CAP;
    use crate::sim::{run, vertex_marginal, StateVector, DEFAULT_WIDTH_CAP};
    use std::collections::BTreeMap;

    pub fn problem(
        vertices: &[&str],
        edges: &[(&str, &str)],
        lists: &[(&str, &[u32])],
    ) -> Problem {
        let edges: Vec<(String, String)> = edges
            .iter()
            .map(|&(a, b)| (a.to_string(), b.to_string()))
            .collect();
        let lists: BTreeMap<String, Vec<u32>> = lists
            .iter()
            .map(|&(v, l)| (v.to_string(), l.to_vec()))
            .collect();
        Problem::new(vertices.iter().map(|s| s.to_string()).collect(), &edges, &lists).unwrap()
    }

    pub fn k3() -> Problem {
        problem(
            &["1", "2", "3"],
            &[("1", "2"), ("2", "3"), ("1", "3")],
            &[("1", &[1, 2, 3]), ("2", &[1, 2, 3]), ("3", &[1, 2, 3])],
        )
    }

    pub fn k4() -> Problem {
        problem(
            &["1", "2", "3", "4"],
            &[
                ("1", "2"),
                ("1", "3"),
                ("1", "4"),
                ("2", "3"),
                ("2", "4"),
                ("3", "4"),
            ],
            &[
                ("1", &[0, 1, 2, 3]),
                ("2", &[0, 1, 2, 3]),
                ("3", &[0, 1, 2, 3]),
                ("4", &[0, 1, 2, 3]),
            ],
        )
    }

    fn assert_close(a: Complex64, b: Complex64, tol: f64) {
        assert!((a - b).norm() < tol, "{a} vs {b}");
    }

    #[test]
    fn init_unitary_for_list_123() {
        let u = build_init_unitary(&[1, 2, 3], 2).unwrap().matrix;
        let s3 = 1.0 / 3.0f64.sqrt();
        let s6 = 1.0 / 6.0f64.sqrt();
        let s2 = std::f64::consts::FRAC_1_SQRT_2;
        // columns: chi, |0>, the Gram-Schmidt images of |1> and |2>
        let expected = [
            [0.0, 1.0, 0.0, 0.0],
            [s3, 0.0, 2.0 * s6, 0.0],
            [s3, 0.0, -s6, s2],
            [s3, 0.0, -s6, -s2],
        ];
        for r in 0..4 {
            for c in 0..4 {
                assert_close(u[(r, c)], Complex64::new(expected[r][c], 0.0), 1e-10);
            }
        }
        assert!(crate::circuit::unitary_deviation(&u) < 1e-10);
    }

    #[test]
    fn init_unitary_binary_list_is_hadamard_like() {
        let u = build_init_unitary(&[0, 1], 1).unwrap().matrix;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_close(u[(0, 0)], Complex64::new(s, 0.0), 1e-10);
        assert_close(u[(1, 0)], Complex64::new(s, 0.0), 1e-10);
    }

    #[test]
    fn init_unitary_full_list_is_uniform() {
        let u = build_init_unitary(&[0, 1, 2, 3], 2).unwrap().matrix;
        for r in 0..4 {
            assert_close(u[(r, 0)], Complex64::new(0.5, 0.0), 1e-10);
        }
        assert!(crate::circuit::unitary_deviation(&u) < 1e-10);
    }

    #[test]
    fn init_unitary_rejects_out_of_range_color() {
        assert!(matches!(
            build_init_unitary(&[0, 2], 1),
            Err(SynthError::ColorOutOfRange { color: 2, width: 1 })
        ));
    }

    #[test]
    fn full_initialization_k3_state() {
        let p = k3();
        let layout = p.layout();
        let c = build_full_initialization(&p);
        assert_eq!(c.qubit_count, 10);
        let sv = run(&c, None, DEFAULT_WIDTH_CAP).unwrap();
        let amp = 1.0 / 27.0f64.sqrt() / 2.0f64.sqrt();
        for idx in 0..(1usize << 10) {
            let vertex = (idx >> 4) as u64;
            let edge_bits = (idx >> 1) & 0b111;
            let anc = idx & 1;
            let colors = layout.decode_vertex_string(vertex);
            let restricted = colors.iter().all(|c| (1..=3).contains(c));
            let expected = if restricted && edge_bits == 0 {
                if anc == 0 { amp } else { -amp }
            } else {
                0.0
            };
            assert_close(sv.amplitude(idx), Complex64::new(expected, 0.0), 1e-10);
        }
    }

    #[test]
    fn full_initialization_trivial_problem() {
        let p = problem(&["a"], &[], &[("a", &[0])]);
        let c = build_full_initialization(&p);
        let sv = run(&c, None, DEFAULT_WIDTH_CAP).unwrap();
        // |0> |-> over (vertex qubit, ancilla)
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_close(sv.amplitude(0b00), Complex64::new(s, 0.0), 1e-10);
        assert_close(sv.amplitude(0b01), Complex64::new(-s, 0.0), 1e-10);
        assert_close(sv.amplitude(0b10), Complex64::new(0.0, 0.0), 1e-10);
    }

    #[test]
    fn oracle_reduction_k3_lists() {
        let terms = oracle_reduction(&[1, 2, 3], &[1, 2, 3]);
        assert_eq!(terms.cost, 4);
        assert_eq!(terms.feasible_k, 2);
        assert!(terms.certified);
        // parity cover: odd on differing pairs, even on equal pairs
        for a in 1..=3u64 {
            for b in 1..=3u64 {
                let t = (a << 2) | b;
                let parity = cover_count(&terms, 2, 2, t) % 2;
                assert_eq!(parity == 1, a != b, "cover parity wrong on {t:b}");
            }
        }
    }

    #[test]
    fn oracle_reduction_k4_lists() {
        let terms = oracle_reduction(&[0, 1, 2, 3], &[0, 1, 2, 3]);
        assert_eq!(terms.cost, 8);
        assert!(terms.certified);
        assert_eq!(terms.terms.len(), 4);
        assert!(terms.terms.iter().all(|t| t.cost() == 2));
    }

    #[test]
    fn oracle_reduction_singletons() {
        let terms = oracle_reduction(&[0], &[1]);
        assert_eq!(terms.cost, 1);
        assert_eq!(terms.feasible_k, 1);
        assert!(terms.certified);
        // a single weight-1 pattern matching the lone differing string
        assert_eq!(terms.terms.len(), 1);
        assert_eq!(cover_count(&terms, 1, 1, 0b01) % 2, 1);
    }

    #[test]
    fn edge_oracle_phase_action_matches_predicate() {
        let oracle = build_edge_oracle(&[1, 2, 3], &[1, 2, 3]);
        let w = oracle.width_u + oracle.width_v;
        for a in [1u64, 2, 3] {
            for b in [1u64, 2, 3] {
                let t = ((a << 2) | b) as usize;
                // prepare |t> |->
                let mut sv = StateVector::from_basis_state(w + 1, t << 1);
                sv.apply(&Gate::X(w)).unwrap();
                sv.apply(&Gate::H(w)).unwrap();
                let before = sv.amplitude(t << 1);
                sv.apply_circuit(&oracle.fragment).unwrap();
                let after = sv.amplitude(t << 1);
                let sign = if a != b { -1.0 } else { 1.0 };
                assert_close(after, before * sign, 1e-10);
            }
        }
    }

    #[test]
    fn edge_oracle_computes_validity_bit() {
        let oracle = build_edge_oracle(&[1, 2, 3], &[1, 2, 3]);
        // equal colors |01>|01>: target stays |0>
        let mut sv = StateVector::from_basis_state(5, 0b0101_0);
        sv.apply_circuit(&oracle.fragment).unwrap();
        assert!((sv.probability(0b0101_0) - 1.0).abs() < 1e-12);
        // differing colors |01>|10>: target flips to |1>
        let mut sv = StateVector::from_basis_state(5, 0b0110_0);
        sv.apply_circuit(&oracle.fragment).unwrap();
        assert!((sv.probability(0b0110_1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn full_oracle_k3_marks_six_states() {
        let p = k3();
        let layout = p.layout();
        let init = run(&build_full_initialization(&p), None, DEFAULT_WIDTH_CAP).unwrap();
        let mut sv = init.clone();
        sv.apply_circuit(&build_full_oracle(&p)).unwrap();
        let mut marked = 0;
        for idx in 0..(1usize << layout.total) {
            let before = init.amplitude(idx);
            let after = sv.amplitude(idx);
            if before.norm() < 1e-14 {
                assert!(after.norm() < 1e-10, "support grew at {idx}");
                continue;
            }
            let colors = layout.decode_vertex_string((idx >> 4) as u64);
            if crate::problem::is_proper_coloring(&p, &colors) {
                assert_close(after, -before, 1e-10);
                if idx & 1 == 0 {
                    marked += 1;
                }
            } else {
                assert_close(after, before, 1e-10);
            }
        }
        assert_eq!(marked, 6);
    }

    #[test]
    fn full_oracle_with_no_valid_coloring_flips_nothing() {
        let p = problem(&["u", "v"], &[("u", "v")], &[("u", &[1]), ("v", &[1])]);
        let init = run(&build_full_initialization(&p), None, DEFAULT_WIDTH_CAP).unwrap();
        let mut sv = init.clone();
        sv.apply_circuit(&build_full_oracle(&p)).unwrap();
        for idx in 0..init.amplitudes().len() {
            assert_close(sv.amplitude(idx), init.amplitude(idx), 1e-10);
        }
    }

    #[test]
    fn full_oracle_restores_edge_register() {
        let p = k3();
        let layout = p.layout();
        let mut sv = run(&build_full_initialization(&p), None, DEFAULT_WIDTH_CAP).unwrap();
        sv.apply_circuit(&build_full_oracle(&p)).unwrap();
        let mut off_mass = 0.0;
        for idx in 0..(1usize << layout.total) {
            if (idx >> 1) & 0b111 != 0 {
                off_mass += sv.probability(idx);
            }
        }
        assert!(off_mass < 1e-12);
    }

    #[test]
    fn diffusion_squares_to_identity_and_fixes_chi() {
        let p = k3();
        let init = run(&build_full_initialization(&p), None, DEFAULT_WIDTH_CAP).unwrap();
        let diffusion = build_diffusion(&p);
        // the initialized state lies on the reflection axis: sign flips only
        let mut once = init.clone();
        once.apply_circuit(&diffusion).unwrap();
        for idx in 0..init.amplitudes().len() {
            assert_close(once.amplitude(idx), -init.amplitude(idx), 1e-10);
        }
        let mut twice = once;
        twice.apply_circuit(&diffusion).unwrap();
        for idx in 0..init.amplitudes().len() {
            assert_close(twice.amplitude(idx), init.amplitude(idx), 1e-10);
        }
    }

    #[test]
    fn grover_plan_arithmetic() {
        let plan = grover_plan(&k3(), PlanMode::ExactCount, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(plan.space_size, 27);
        assert_eq!(plan.solution_count, Some(6));
        assert_eq!(plan.iterations, 1);

        let plan = grover_plan(&k4(), PlanMode::ExactCount, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(plan.space_size, 256);
        assert_eq!(plan.solution_count, Some(24));
        assert_eq!(plan.iterations, 2);

        // figure-one style ratio: |S| = 8, |S'| = 2
        assert_eq!(optimal_iterations(8, 2), 1);

        let unsat = problem(&["u", "v"], &[("u", "v")], &[("u", &[1]), ("v", &[1])]);
        let plan = grover_plan(&unsat, PlanMode::ExactCount, DEFAULT_ENUMERATION_CAP).unwrap();
        assert!(plan.unsatisfiable);
        assert_eq!(plan.iterations, 0);

        // no edges: sample the initialization directly
        let free = problem(&["a"], &[], &[("a", &[0, 1])]);
        let plan = grover_plan(&free, PlanMode::ExactCount, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(plan.iterations, 0);
    }

    #[test]
    fn k3_single_iteration_probabilities() {
        let p = k3();
        let plan = grover_plan(&p, PlanMode::ExactCount, DEFAULT_ENUMERATION_CAP).unwrap();
        let circuit = build_grover_circuit(&plan);
        let sv = run(&circuit, None, DEFAULT_WIDTH_CAP).unwrap();
        let dist = vertex_marginal(&sv, &p.layout());
        let marked = [0b011011usize, 0b011110, 0b100111, 0b101101, 0b110110, 0b111001];
        for m in marked {
            assert!(
                (dist.prob(m) - 0.165066).abs() < 1e-4,
                "probability {} at {m:06b}",
                dist.prob(m)
            );
        }
    }

    #[test]
    fn unknown_schedule_grows_and_caps() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut sched = UnknownSchedule::new(27);
        let mut max_seen = 0;
        for _ in 0..50 {
            let r = sched.next_iterations(&mut rng);
            assert!((r as f64) < 27f64.sqrt().ceil());
            max_seen = max_seen.max(r);
        }
        assert!(max_seen >= 1);
    }

    #[test]
    fn figure_one_unrestricted_grover() {
        let c = build_unrestricted_grover(3, &[0b010, 0b011], 1);
        let sv = run(&c, None, DEFAULT_WIDTH_CAP).unwrap();
        // marginal over the three search qubits
        let mut probs = [0.0f64; 8];
        for idx in 0..16 {
            probs[idx >> 1] += sv.probability(idx);
        }
        assert!((probs[0b010] - 0.5).abs() < 1e-10);
        assert!((probs[0b011] - 0.5).abs() < 1e-10);
        for (i, p) in probs.iter().enumerate() {
            if i != 0b010 && i != 0b011 {
                assert!(*p < 1e-10);
            }
        }
    }
}
