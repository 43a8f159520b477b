//! End-to-end solve of the triangle with lists {1,2,3} on every vertex:
//! plan the iteration count from the exact solution count, simulate the
//! synthesized circuit, sample, and verify the result classically.

use listgrover::cli::{cmd_solve, SolveOptions};
use listgrover::problem::{Problem, ProblemFile};

fn main() {
    let problem: Problem = serde_json::from_str::<ProblemFile>(
        r#"{
            "vertices": ["1", "2", "3"],
            "edges": [["1", "2"], ["2", "3"], ["1", "3"]],
            "lists": {"1": [1, 2, 3], "2": [1, 2, 3], "3": [1, 2, 3]}
        }"#,
    )
    .unwrap()
    .into_problem()
    .unwrap();

    let opts = SolveOptions {
        seed: 42,
        ..SolveOptions::default()
    };
    let report = cmd_solve(&problem, &opts).unwrap();
    println!("{report}");
}
