//! The textbook (unrestricted) Grover search on three qubits with two
//! marked states, simulated exactly. With |S| = 8 and two solutions, a
//! single iteration rotates all amplitude onto the marked states.

use listgrover::sim::{run, DEFAULT_WIDTH_CAP};
use listgrover::synth::{build_unrestricted_grover, optimal_iterations};

fn main() {
    let marked = [0b010u64, 0b011];
    let r = optimal_iterations(8, marked.len() as u64);
    println!("iterations: {r}");

    let circuit = build_unrestricted_grover(3, &marked, r);
    let state = run(&circuit, None, DEFAULT_WIDTH_CAP).unwrap();

    // marginal over the three search qubits (the last qubit is the phase
    // ancilla, left in |->)
    for idx in 0..8usize {
        let p = state.probability(idx << 1) + state.probability((idx << 1) | 1);
        println!("|{idx:03b}>  {p:.6}");
    }
}
