//! Exports the exact measurement distribution of the triangle search as
//! semicolon-separated CSV. Six strings carry probability ~0.165 each; the
//! remaining mass spreads thinly over the other allowed assignments, and
//! strings outside the restricted space never appear.

use listgrover::cli::{cmd_histogram, HistogramOptions, SolveOptions};
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

    let opts = HistogramOptions {
        solve: SolveOptions::default(),
        exact: true,
    };
    let (csv, _) = cmd_histogram(&problem, &opts).unwrap();
    print!("{csv}");
}
