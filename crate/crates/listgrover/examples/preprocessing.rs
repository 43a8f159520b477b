//! Classical preprocessing: singleton lists force colors and propagate
//! through the graph, and sparse color values compact onto a dense range,
//! both of which shrink the quantum register before synthesis.

use listgrover::problem::{reduce_singletons, remap_colors, Problem, ProblemFile};

fn main() {
    let problem: Problem = serde_json::from_str::<ProblemFile>(
        r#"{
            "vertices": ["a", "b", "c"],
            "edges": [["a", "b"], ["b", "c"]],
            "lists": {"a": [5], "b": [5, 9, 12], "c": [9, 12]}
        }"#,
    )
    .unwrap()
    .into_problem()
    .unwrap();

    println!("original layout: {} qubits", problem.layout().total);

    let (residual, forced) = reduce_singletons(&problem).unwrap();
    for (vertex, color) in &forced {
        println!("forced: {vertex} = {color}");
    }
    let residual = residual.expect("not everything is forced here");
    println!(
        "residual: {} vertices, layout {} qubits",
        residual.graph().vertex_count(),
        residual.layout().total
    );

    let (compact, map) = remap_colors(&residual);
    for (orig, new) in &map {
        println!("color {orig} -> {new}");
    }
    println!("compact layout: {} qubits", compact.layout().total);
}
