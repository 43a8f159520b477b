//! Synthesizes the components of the search circuit for a single edge with
//! binary lists and prints them as netlists, both with native
//! multi-controlled gates and lowered to 1- and 2-qubit gates (the lowered
//! oracle also exports to OpenQASM 2.0).

use listgrover::circuit::{lower, to_netlist, to_qasm, LoweringMode};
use listgrover::problem::{Problem, ProblemFile};
use listgrover::synth::{build_diffusion, build_full_initialization, build_full_oracle};

fn main() {
    let problem: Problem = serde_json::from_str::<ProblemFile>(
        r#"{
            "vertices": ["u", "v"],
            "edges": [["u", "v"]],
            "lists": {"u": [0, 1], "v": [0, 1]}
        }"#,
    )
    .unwrap()
    .into_problem()
    .unwrap();

    println!("== initialization ==");
    print!("{}", to_netlist(&build_full_initialization(&problem)));

    let oracle = build_full_oracle(&problem);
    println!("\n== oracle (native) ==");
    print!("{}", to_netlist(&oracle));

    let lowered = lower(&oracle, LoweringMode::Elementary);
    println!("\n== oracle (elementary) ==");
    print!("{}", to_netlist(&lowered));

    println!("\n== oracle (elementary, OpenQASM 2.0) ==");
    print!("{}", to_qasm(&lowered).unwrap());

    println!("\n== diffusion ==");
    print!("{}", to_netlist(&build_diffusion(&problem)));
}
