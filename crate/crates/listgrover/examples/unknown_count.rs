//! Solving without counting solutions first: the randomized iteration
//! schedule draws an iteration count below a growing bound, runs the
//! circuit, and verifies the modal sample classically, repeating until a
//! proper coloring is found.

use listgrover::cli::{cmd_solve, SolveMode, SolveOptions};
use listgrover::problem::{Problem, ProblemFile};

fn main() {
    let problem: Problem = serde_json::from_str::<ProblemFile>(
        r#"{
            "vertices": ["1", "2", "3", "4"],
            "edges": [
                ["1", "2"], ["1", "3"], ["1", "4"],
                ["2", "3"], ["2", "4"], ["3", "4"]
            ],
            "lists": {
                "1": [0, 1, 2, 3], "2": [0, 1, 2, 3],
                "3": [0, 1, 2, 3], "4": [0, 1, 2, 3]
            }
        }"#,
    )
    .unwrap()
    .into_problem()
    .unwrap();

    let opts = SolveOptions {
        mode: SolveMode::Unknown,
        seed: 3,
        ..SolveOptions::default()
    };
    let report = cmd_solve(&problem, &opts).unwrap();
    println!("{report}");
}
