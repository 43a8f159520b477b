//! List coloring instances: graphs, per-vertex color lists, register layout,
//! classical preprocessing and brute-force enumeration.
//!
//! Everything here is classical; it supplies the instances the synthesizer
//! consumes and the ground truth the simulator output is verified against.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap on the restricted space size for brute-force enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 24;

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("problem has no vertices")]
    EmptyVertexSet,
    #[error("vertex {0:?} declared more than once")]
    DuplicateVertex(String),
    #[error("edge endpoint {0:?} is not a declared vertex")]
    UnknownEndpoint(String),
    #[error("self-loop on vertex {0:?}")]
    SelfLoop(String),
    #[error("vertex {0:?} has no color list")]
    MissingList(String),
    #[error("vertex {0:?} has an empty color list")]
    EmptyList(String),
    #[error("color {color} out of range for vertex {vertex:?} ({width} qubits)")]
    ColorOutOfRange {
        vertex: String,
        color: u32,
        width: usize,
    },
    #[error("restricted space size {size} exceeds enumeration cap {cap}")]
    EnumerationCap { size: u64, cap: u64 },
    #[error("unsatisfiable by propagation: list of vertex {0:?} emptied")]
    PropagationEmptied(String),
}

/// Undirected simple graph over named vertices.
///
/// Vertex declaration order is significant: it fixes the register order of the
/// synthesized circuit and hence the layout of measured bit strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    /// Edges as index pairs with `u < v`, sorted and deduplicated.
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertices: Vec<String>, edges: &[(String, String)]) -> Result<Self, ProblemError> {
        if vertices.is_empty() {
            return Err(ProblemError::EmptyVertexSet);
        }
        let mut index = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(ProblemError::DuplicateVertex(v.clone()));
            }
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            let ia = *index
                .get(a)
                .ok_or_else(|| ProblemError::UnknownEndpoint(a.clone()))?;
            let ib = *index
                .get(b)
                .ok_or_else(|| ProblemError::UnknownEndpoint(b.clone()))?;
            if ia == ib {
                return Err(ProblemError::SelfLoop(a.clone()));
            }
            set.insert((ia.min(ib), ia.max(ib)));
        }
        Ok(Graph {
            vertices,
            edges: set.into_iter().collect(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }
}

/// A list coloring instance: a graph plus one admissible-color list per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    graph: Graph,
    /// Per-vertex sorted color lists, index-aligned with `graph.vertices`.
    lists: Vec<Vec<u32>>,
}

/// Number of qubits needed to represent every color of a non-empty list:
/// `max(1, ceil(log2(max + 1)))`, i.e. the bit length of the largest color.
pub fn bit_width(list: &[u32]) -> usize {
    let max = list.iter().copied().max().expect("non-empty list");
    ((32 - max.leading_zeros()) as usize).max(1)
}

impl Problem {
    /// Validates and normalizes an instance: edges deduplicated, self-loops
    /// rejected, lists sorted and non-empty.
    pub fn new(
        vertices: Vec<String>,
        edges: &[(String, String)],
        lists: &BTreeMap<String, Vec<u32>>,
    ) -> Result<Self, ProblemError> {
        let graph = Graph::new(vertices, edges)?;
        let mut per_vertex = Vec::with_capacity(graph.vertex_count());
        for v in graph.vertices() {
            let list = lists
                .get(v)
                .ok_or_else(|| ProblemError::MissingList(v.clone()))?;
            if list.is_empty() {
                return Err(ProblemError::EmptyList(v.clone()));
            }
            let set: BTreeSet<u32> = list.iter().copied().collect();
            per_vertex.push(set.into_iter().collect::<Vec<u32>>());
        }
        Ok(Problem {
            graph,
            lists: per_vertex,
        })
    }

    fn from_parts(graph: Graph, lists: Vec<Vec<u32>>) -> Self {
        Problem { graph, lists }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn lists(&self) -> &[Vec<u32>] {
        &self.lists
    }

    pub fn list(&self, vertex: usize) -> &[u32] {
        &self.lists[vertex]
    }

    /// Size of the restricted search space `S`, the product of all list sizes.
    pub fn restricted_space_size(&self) -> u64 {
        self.lists
            .iter()
            .fold(1u64, |acc, l| acc.saturating_mul(l.len() as u64))
    }

    pub fn layout(&self) -> RegisterLayout {
        RegisterLayout::for_problem(self)
    }
}

/// Qubit index assignment for a problem.
///
/// Vertex registers come first in vertex order (`bit_width` qubits each, most
/// significant color bit first), then one qubit per edge, then the phase
/// ancilla. Scratch ancillas introduced by gate decomposition are appended
/// after `total` and accounted separately.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    /// Per-vertex `(start, width)` qubit ranges.
    pub vertex_ranges: Vec<(usize, usize)>,
    /// Edge qubit indices, aligned with `Graph::edges`.
    pub edge_qubits: Vec<usize>,
    pub phase_ancilla: usize,
    /// Total qubit count: sum of vertex widths + edge count + 1.
    pub total: usize,
}

impl RegisterLayout {
    pub fn for_problem(p: &Problem) -> Self {
        let mut vertex_ranges = Vec::with_capacity(p.graph.vertex_count());
        let mut next = 0;
        for list in &p.lists {
            let w = bit_width(list);
            vertex_ranges.push((next, w));
            next += w;
        }
        let edge_qubits: Vec<usize> = (0..p.graph.edge_count()).map(|i| next + i).collect();
        next += p.graph.edge_count();
        RegisterLayout {
            vertex_ranges,
            edge_qubits,
            phase_ancilla: next,
            total: next + 1,
        }
    }

    /// Total width of the vertex register.
    pub fn vertex_bits(&self) -> usize {
        self.vertex_ranges.iter().map(|&(_, w)| w).sum()
    }

    /// Decodes a vertex-register bit string (most significant bit first) into
    /// per-vertex colors.
    pub fn decode_vertex_string(&self, bits: u64) -> Vec<u32> {
        let total = self.vertex_bits();
        self.vertex_ranges
            .iter()
            .map(|&(start, w)| ((bits >> (total - start - w)) & ((1 << w) - 1)) as u32)
            .collect()
    }

    /// Encodes per-vertex colors into a vertex-register bit string.
    pub fn encode_coloring(&self, colors: &[u32]) -> u64 {
        let total = self.vertex_bits();
        self.vertex_ranges
            .iter()
            .zip(colors)
            .fold(0u64, |acc, (&(start, w), &c)| {
                acc | ((c as u64) << (total - start - w))
            })
    }
}

/// A total color assignment, keyed by vertex name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coloring(pub BTreeMap<String, u32>);

impl Coloring {
    pub fn from_indexed(p: &Problem, colors: &[u32]) -> Self {
        Coloring(
            p.graph
                .vertices()
                .iter()
                .cloned()
                .zip(colors.iter().copied())
                .collect(),
        )
    }

    /// Index-aligned colors, or `None` if some vertex is unassigned.
    pub fn to_indexed(&self, p: &Problem) -> Option<Vec<u32>> {
        p.graph
            .vertices()
            .iter()
            .map(|v| self.0.get(v).copied())
            .collect()
    }
}

/// True iff every vertex color is in its list and every edge is bichromatic.
/// `colors` is index-aligned with the problem's vertices.
pub fn is_proper_coloring(p: &Problem, colors: &[u32]) -> bool {
    violated_constraint(p, colors).is_none()
}

/// First violated constraint, if any, for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotInList { vertex: String, color: u32 },
    MonochromaticEdge { u: String, v: String, color: u32 },
}

pub fn violated_constraint(p: &Problem, colors: &[u32]) -> Option<Violation> {
    assert_eq!(colors.len(), p.graph.vertex_count(), "coloring must be total");
    for (i, &c) in colors.iter().enumerate() {
        if !p.lists[i].contains(&c) {
            return Some(Violation::NotInList {
                vertex: p.graph.vertices()[i].clone(),
                color: c,
            });
        }
    }
    for &(u, v) in p.graph.edges() {
        if colors[u] == colors[v] {
            return Some(Violation::MonochromaticEdge {
                u: p.graph.vertices()[u].clone(),
                v: p.graph.vertices()[v].clone(),
                color: colors[u],
            });
        }
    }
    None
}

/// Brute-force enumeration over the restricted space `prod L_v`.
///
/// Returns the exact count of proper list colorings, and the colorings
/// themselves when `collect` is set. Errors when the restricted space exceeds
/// `cap`.
pub fn enumerate_valid_colorings(
    p: &Problem,
    cap: u64,
    collect: bool,
) -> Result<(u64, Option<Vec<Vec<u32>>>), ProblemError> {
    let size = p.restricted_space_size();
    if size > cap {
        return Err(ProblemError::EnumerationCap { size, cap });
    }
    let n = p.graph.vertex_count();
    let mut count = 0u64;
    let mut found = if collect { Some(Vec::new()) } else { None };
    let mut choice = vec![0usize; n];
    loop {
        let colors: Vec<u32> = choice.iter().enumerate().map(|(v, &i)| p.lists[v][i]).collect();
        if is_proper_coloring(p, &colors) {
            count += 1;
            if let Some(ref mut f) = found {
                f.push(colors);
            }
        }
        // odometer over list indices
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok((count, found));
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < p.lists[pos].len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}

/// Repeatedly colors singleton-list vertices, removing the forced color from
/// neighbors' lists and deleting the vertex. Returns the residual problem
/// (`None` when everything was forced) and the forced partial assignment.
pub fn reduce_singletons(
    p: &Problem,
) -> Result<(Option<Problem>, Vec<(String, u32)>), ProblemError> {
    let n = p.graph.vertex_count();
    let mut lists: Vec<Vec<u32>> = p.lists.clone();
    let mut alive = vec![true; n];
    let mut forced: Vec<(String, u32)> = Vec::new();

    let adjacency: Vec<Vec<usize>> = {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in p.graph.edges() {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    };

    loop {
        let Some(v) = (0..n).find(|&v| alive[v] && lists[v].len() == 1) else {
            break;
        };
        let color = lists[v][0];
        alive[v] = false;
        forced.push((p.graph.vertices()[v].clone(), color));
        for &u in &adjacency[v] {
            if alive[u] {
                lists[u].retain(|&c| c != color);
                if lists[u].is_empty() {
                    return Err(ProblemError::PropagationEmptied(
                        p.graph.vertices()[u].clone(),
                    ));
                }
            }
        }
    }

    let keep: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    if keep.is_empty() {
        return Ok((None, forced));
    }
    let remap: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let vertices: Vec<String> = keep.iter().map(|&v| p.graph.vertices()[v].clone()).collect();
    let edges: Vec<(usize, usize)> = p
        .graph
        .edges()
        .iter()
        .filter(|&&(u, v)| alive[u] && alive[v])
        .map(|&(u, v)| (remap[&u], remap[&v]))
        .collect();
    let residual_lists: Vec<Vec<u32>> = keep.iter().map(|&v| lists[v].clone()).collect();
    Ok((
        Some(Problem::from_parts(
            Graph {
                vertices,
                edges,
            },
            residual_lists,
        )),
        forced,
    ))
}

/// Remaps the union of all used colors order-preservingly onto `{0..k-1}`,
/// compacting the lists. Returns the remapped problem and the forward map
/// (original color -> compact color).
pub fn remap_colors(p: &Problem) -> (Problem, BTreeMap<u32, u32>) {
    let used: BTreeSet<u32> = p.lists.iter().flatten().copied().collect();
    let map: BTreeMap<u32, u32> = used.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();
    let lists: Vec<Vec<u32>> = p
        .lists
        .iter()
        .map(|l| l.iter().map(|c| map[c]).collect())
        .collect();
    (Problem::from_parts(p.graph.clone(), lists), map)
}

/// On-disk JSON schema for a problem:
/// `{"vertices": [..], "edges": [["u","v"], ..], "lists": {"u": [..], ..}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemFile {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
    pub lists: BTreeMap<String, Vec<u32>>,
}

impl ProblemFile {
    pub fn into_problem(self) -> Result<Problem, ProblemError> {
        let edges: Vec<(String, String)> = self
            .edges
            .into_iter()
            .map(|[a, b]| (a, b))
            .collect();
        Problem::new(self.vertices, &edges, &self.lists)
    }

    pub fn from_problem(p: &Problem) -> Self {
        ProblemFile {
            vertices: p.graph.vertices().to_vec(),
            edges: p
                .graph
                .edges()
                .iter()
                .map(|&(u, v)| {
                    [
                        p.graph.vertices()[u].clone(),
                        p.graph.vertices()[v].clone(),
                    ]
                })
                .collect(),
            lists: p
                .graph
                .vertices()
                .iter()
                .cloned()
                .zip(p.lists.iter().cloned())
                .collect(),
        }
    }
}

/// Test-only convenience constructor from string literals.
#[cfg(test)]
pub(crate) fn test_problem(
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

#[cfg(test)]
mod tests {
    use super::*;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    fn edge(a: &str, b: &str) -> (String, String) {
        (a.to_string(), b.to_string())
    }

    pub fn make_problem(
        vertices: &[&str],
        edges: &[(&str, &str)],
        lists: &[(&str, &[u32])],
    ) -> Result<Problem, ProblemError> {
        let edges: Vec<(String, String)> = edges.iter().map(|&(a, b)| edge(a, b)).collect();
        let lists: BTreeMap<String, Vec<u32>> = lists
            .iter()
            .map(|&(v, l)| (v.to_string(), l.to_vec()))
            .collect();
        Problem::new(names(vertices), &edges, &lists)
    }

    fn k3() -> Problem {
        make_problem(
            &["1", "2", "3"],
            &[("1", "2"), ("2", "3"), ("1", "3")],
            &[("1", &[1, 2, 3]), ("2", &[1, 2, 3]), ("3", &[1, 2, 3])],
        )
        .unwrap()
    }

    #[test]
    fn k4_duplicate_edge_is_deduplicated() {
        // the paper's own K4 edge set lists "14" twice
        let p = make_problem(
            &["1", "2", "3", "4"],
            &[
                ("1", "2"),
                ("1", "3"),
                ("1", "4"),
                ("2", "3"),
                ("2", "4"),
                ("3", "4"),
                ("1", "4"),
            ],
            &[
                ("1", &[0, 1, 2, 3]),
                ("2", &[0, 1, 2, 3]),
                ("3", &[0, 1, 2, 3]),
                ("4", &[0, 1, 2, 3]),
            ],
        )
        .unwrap();
        assert_eq!(p.graph().edge_count(), 6);
    }

    #[test]
    fn single_vertex_is_identity() {
        let p = make_problem(&["a"], &[], &[("a", &[0])]).unwrap();
        assert_eq!(p.graph().vertex_count(), 1);
        assert_eq!(p.lists(), &[vec![0]]);
    }

    #[test]
    fn self_loop_rejected() {
        let err = make_problem(&["a"], &[("a", "a")], &[("a", &[0])]).unwrap_err();
        assert!(matches!(err, ProblemError::SelfLoop(_)));
    }

    #[test]
    fn empty_list_rejected() {
        let err = make_problem(&["a"], &[], &[("a", &[])]).unwrap_err();
        assert!(matches!(err, ProblemError::EmptyList(_)));
    }

    #[test]
    fn unknown_endpoint_rejected() {
        let err = make_problem(&["a"], &[("a", "b")], &[("a", &[0])]).unwrap_err();
        assert!(matches!(err, ProblemError::UnknownEndpoint(_)));
    }

    #[test]
    fn bit_width_cases() {
        assert_eq!(bit_width(&[1, 2, 3]), 2);
        assert_eq!(bit_width(&[0]), 1);
        // 4 = 0b100 needs three bits even though ceil(log2 4) = 2
        assert_eq!(bit_width(&[0, 1, 2, 3, 4]), 3);
    }

    #[test]
    fn proper_coloring_cases() {
        let p = k3();
        assert!(is_proper_coloring(&p, &[1, 2, 3]));
        assert!(!is_proper_coloring(&p, &[1, 1, 2]));
        assert!(!is_proper_coloring(&p, &[0, 1, 2]));
        assert!(matches!(
            violated_constraint(&p, &[1, 1, 2]),
            Some(Violation::MonochromaticEdge { .. })
        ));
        assert!(matches!(
            violated_constraint(&p, &[0, 1, 2]),
            Some(Violation::NotInList { .. })
        ));
    }

    #[test]
    fn enumeration_counts() {
        let (count, sols) = enumerate_valid_colorings(&k3(), DEFAULT_ENUMERATION_CAP, true).unwrap();
        assert_eq!(count, 6);
        assert_eq!(sols.unwrap().len(), 6);

        let k4 = make_problem(
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
        .unwrap();
        assert_eq!(
            enumerate_valid_colorings(&k4, DEFAULT_ENUMERATION_CAP, false)
                .unwrap()
                .0,
            24
        );

        let forced = make_problem(&["u", "v"], &[("u", "v")], &[("u", &[1]), ("v", &[1])]).unwrap();
        assert_eq!(
            enumerate_valid_colorings(&forced, DEFAULT_ENUMERATION_CAP, false)
                .unwrap()
                .0,
            0
        );
    }

    #[test]
    fn enumeration_cap_enforced() {
        let p = make_problem(&["a"], &[], &[("a", &[0, 1, 2, 3])]).unwrap();
        let err = enumerate_valid_colorings(&p, 3, false).unwrap_err();
        assert!(matches!(err, ProblemError::EnumerationCap { size: 4, cap: 3 }));
    }

    #[test]
    fn singleton_reduction_forces_chain() {
        let p = make_problem(&["u", "v"], &[("u", "v")], &[("u", &[2]), ("v", &[1, 2])]).unwrap();
        let (residual, forced) = reduce_singletons(&p).unwrap();
        assert!(residual.is_none());
        assert_eq!(
            forced,
            vec![("u".to_string(), 2), ("v".to_string(), 1)]
        );
    }

    #[test]
    fn singleton_reduction_fixed_point() {
        let p = k3();
        let (residual, forced) = reduce_singletons(&p).unwrap();
        assert_eq!(residual.unwrap(), p);
        assert!(forced.is_empty());
    }

    #[test]
    fn singleton_reduction_detects_unsat() {
        let p = make_problem(&["u", "v"], &[("u", "v")], &[("u", &[1]), ("v", &[1])]).unwrap();
        let err = reduce_singletons(&p).unwrap_err();
        assert!(matches!(err, ProblemError::PropagationEmptied(_)));
    }

    #[test]
    fn color_remap_compacts() {
        let p = make_problem(
            &["u", "v"],
            &[("u", "v")],
            &[("u", &[5, 9]), ("v", &[9, 12])],
        )
        .unwrap();
        let (q, map) = remap_colors(&p);
        assert_eq!(q.lists(), &[vec![0, 1], vec![1, 2]]);
        assert_eq!(map, BTreeMap::from([(5, 0), (9, 1), (12, 2)]));
    }

    #[test]
    fn color_remap_identity_when_compact() {
        let p = k3();
        // {1,2,3} is not compact: remap takes it to {0,1,2}
        let (q, _) = remap_colors(&p);
        assert_eq!(q.lists()[0], vec![0, 1, 2]);
        assert_eq!(
            enumerate_valid_colorings(&q, DEFAULT_ENUMERATION_CAP, false)
                .unwrap()
                .0,
            6
        );

        let compact = make_problem(&["a", "b"], &[("a", "b")], &[("a", &[0, 1]), ("b", &[0, 1])])
            .unwrap();
        let (q, map) = remap_colors(&compact);
        assert_eq!(q, compact);
        assert_eq!(map, BTreeMap::from([(0, 0), (1, 1)]));
    }

    #[test]
    fn layout_arithmetic() {
        let p = k3();
        let layout = p.layout();
        assert_eq!(layout.total, 6 + 3 + 1);
        assert_eq!(layout.vertex_ranges, vec![(0, 2), (2, 2), (4, 2)]);
        assert_eq!(layout.edge_qubits, vec![6, 7, 8]);
        assert_eq!(layout.phase_ancilla, 9);
    }

    #[test]
    fn layout_encode_decode_roundtrip() {
        let p = k3();
        let layout = p.layout();
        let bits = layout.encode_coloring(&[1, 2, 3]);
        assert_eq!(bits, 0b011011);
        assert_eq!(layout.decode_vertex_string(bits), vec![1, 2, 3]);
    }

    #[test]
    fn preprocessing_preserves_solution_sets() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.random_range(1..=5usize);
            let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let mut edges = Vec::new();
            for a in 0..n {
                for b in (a + 1)..n {
                    if rng.random_bool(0.5) {
                        edges.push((names[a].clone(), names[b].clone()));
                    }
                }
            }
            let lists: BTreeMap<String, Vec<u32>> = names
                .iter()
                .map(|v| {
                    let len = rng.random_range(1..=4usize);
                    let mut l: Vec<u32> =
                        (0..len).map(|_| rng.random_range(0..6u32)).collect();
                    l.sort_unstable();
                    l.dedup();
                    (v.clone(), l)
                })
                .collect();
            let p = Problem::new(names.clone(), &edges, &lists).unwrap();
            let (_, sols) = enumerate_valid_colorings(&p, 1 << 20, true).unwrap();
            let before: BTreeSet<BTreeMap<String, u32>> = sols
                .unwrap()
                .into_iter()
                .map(|c| Coloring::from_indexed(&p, &c).0)
                .collect();

            // singleton reduction, with forced assignments re-attached
            let after_reduce: BTreeSet<BTreeMap<String, u32>> = match reduce_singletons(&p) {
                Err(ProblemError::PropagationEmptied(_)) => BTreeSet::new(),
                Err(e) => panic!("{e}"),
                Ok((None, forced)) => {
                    let full: BTreeMap<String, u32> = forced.into_iter().collect();
                    let colors: Vec<u32> =
                        names.iter().map(|v| full[v]).collect();
                    if is_proper_coloring(&p, &colors) {
                        BTreeSet::from([full])
                    } else {
                        BTreeSet::new()
                    }
                }
                Ok((Some(residual), forced)) => {
                    let (_, rsols) = enumerate_valid_colorings(&residual, 1 << 20, true).unwrap();
                    rsols
                        .unwrap()
                        .into_iter()
                        .map(|c| {
                            let mut full = Coloring::from_indexed(&residual, &c).0;
                            full.extend(forced.iter().cloned());
                            full
                        })
                        .collect()
                }
            };
            assert_eq!(before, after_reduce, "singleton reduction changed solutions");

            // color remapping, composing the bijection back
            let (q, map) = remap_colors(&p);
            let inverse: BTreeMap<u32, u32> = map.iter().map(|(&a, &b)| (b, a)).collect();
            let (_, qsols) = enumerate_valid_colorings(&q, 1 << 20, true).unwrap();
            let after_remap: BTreeSet<BTreeMap<String, u32>> = qsols
                .unwrap()
                .into_iter()
                .map(|c| {
                    let orig: Vec<u32> = c.iter().map(|x| inverse[x]).collect();
                    Coloring::from_indexed(&p, &orig).0
                })
                .collect();
            assert_eq!(before, after_remap, "color remap changed solutions");
        }
    }
}
