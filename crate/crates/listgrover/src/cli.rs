//! Command layer behind the `listgrover` binary: end-to-end solve with
//! classical verification, oracle-reduction inspection, circuit export, CSV
//! histograms, and coloring verification. The binary itself only parses
//! arguments and maps results to exit codes.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{lower, to_netlist, to_qasm, Circuit, ExportError, Gate, LoweringMode};
use crate::problem::{
    reduce_singletons, remap_colors, violated_constraint, Problem, ProblemError, ProblemFile,
    Violation, DEFAULT_ENUMERATION_CAP,
};
use crate::sim::{run, vertex_marginal, Distribution, SimError, DEFAULT_WIDTH_CAP, SAMPLER_ID};
use crate::synth::{
    build_diffusion, build_full_initialization, build_full_oracle, build_grover_circuit,
    grover_plan, oracle_reduction, GroverPlan, PlanMode, SynthError, TermSet, UnknownSchedule,
};

pub const DEFAULT_SHOTS: u64 = 2000;
pub const DEFAULT_SEED: u64 = 1;
/// Maximum circuit builds in unknown-count mode before giving up.
pub const DEFAULT_RETRY_CAP: u32 = 20;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid JSON in {path}: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Export(#[from] ExportError),
    #[error("coloring file does not assign vertex {0:?}")]
    IncompleteColoring(String),
    #[error("{0}")]
    BadArgument(String),
}

impl CliError {
    /// 2 for input errors, 3 for resource caps.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Problem(ProblemError::EnumerationCap { .. })
            | CliError::Sim(SimError::WidthCap { .. }) => 3,
            _ => 2,
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_problem(path: &Path) -> Result<Problem, CliError> {
    let file: ProblemFile = read_json(path)?;
    Ok(file.into_problem()?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterationsFlag {
    Auto,
    Fixed(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    Exact,
    Unknown,
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub shots: u64,
    pub seed: u64,
    pub iterations: IterationsFlag,
    pub mode: SolveMode,
    pub lowering: LoweringMode,
    pub reduce: bool,
    pub width_cap: usize,
    pub enumeration_cap: u64,
    pub retry_cap: u32,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            shots: DEFAULT_SHOTS,
            seed: DEFAULT_SEED,
            iterations: IterationsFlag::Auto,
            mode: SolveMode::Exact,
            lowering: LoweringMode::Native,
            reduce: true,
            width_cap: DEFAULT_WIDTH_CAP,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            retry_cap: DEFAULT_RETRY_CAP,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub enum Outcome {
    /// A classically verified proper list coloring.
    Coloring(BTreeMap<String, u32>),
    /// Proven unsatisfiable (exact count zero, or propagation emptied a list).
    Unsatisfiable,
    /// The randomized schedule exhausted its retry cap without a verified hit.
    LikelyUnsatisfiable,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub vertices: usize,
    pub edges: usize,
    pub mode: String,
    pub space_size: u64,
    pub solution_count: Option<u64>,
    pub iterations: u32,
    pub layout_qubits: usize,
    pub scratch_qubits: usize,
    pub gate_counts: BTreeMap<String, usize>,
    pub oracle_cost: usize,
    /// Sampled vertex-register strings and their frequencies.
    pub histogram: BTreeMap<String, u64>,
    pub outcome: Outcome,
    pub shots: u64,
    pub seed: u64,
    pub sampler: String,
    pub elapsed_ms: u128,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        match self.outcome {
            Outcome::Coloring(_) => 0,
            Outcome::Unsatisfiable | Outcome::LikelyUnsatisfiable => 1,
        }
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "problem: {} vertices, {} edges", self.vertices, self.edges)?;
        write!(
            f,
            "plan: |S| = {}, |S'| = {}, r = {}, mode = {}",
            self.space_size,
            self.solution_count
                .map_or_else(|| "?".to_string(), |c| c.to_string()),
            self.iterations,
            self.mode
        )?;
        writeln!(f)?;
        writeln!(
            f,
            "qubits: {} layout + {} scratch",
            self.layout_qubits, self.scratch_qubits
        )?;
        let gates: Vec<String> = self
            .gate_counts
            .iter()
            .map(|(k, n)| format!("{k}: {n}"))
            .collect();
        writeln!(f, "gates: {}", gates.join(", "))?;
        writeln!(f, "oracle cost: {}", self.oracle_cost)?;
        writeln!(
            f,
            "sampling: {} shots, seed {}, sampler {}",
            self.shots, self.seed, self.sampler
        )?;
        for (state, freq) in &self.histogram {
            writeln!(f, "  |{state}>  {freq}")?;
        }
        match &self.outcome {
            Outcome::Coloring(c) => {
                let parts: Vec<String> = c.iter().map(|(v, col)| format!("{v}={col}")).collect();
                writeln!(f, "coloring: {} (verified)", parts.join(" "))?;
            }
            Outcome::Unsatisfiable => writeln!(f, "verdict: unsatisfiable")?,
            Outcome::LikelyUnsatisfiable => {
                writeln!(f, "verdict: no coloring found (likely unsatisfiable)")?
            }
        }
        write!(f, "elapsed: {} ms", self.elapsed_ms)
    }
}

fn gate_kind(g: &Gate) -> &'static str {
    match g {
        Gate::H(_) => "h",
        Gate::X(_) => "x",
        Gate::Z(_) => "z",
        Gate::S(_) => "s",
        Gate::Sdg(_) => "sdg",
        Gate::T(_) => "t",
        Gate::Tdg(_) => "tdg",
        Gate::Ry { .. } => "ry",
        Gate::Mcx { .. } => "mcx",
        Gate::Block { .. } => "block",
    }
}

fn gate_counts(c: &Circuit) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for g in &c.gates {
        *counts.entry(gate_kind(g).to_string()).or_insert(0usize) += 1;
    }
    counts
}

/// Total reduced oracle cost: the sum of the per-edge term costs.
fn total_oracle_cost(p: &Problem) -> usize {
    p.graph()
        .edges()
        .iter()
        .map(|&(u, v)| oracle_reduction(p.list(u), p.list(v)).cost)
        .sum()
}

/// Decodes a sampled histogram into colorings of the *original* problem,
/// most frequent first, undoing the color remap and re-attaching forced
/// assignments.
fn candidates_by_frequency(
    histogram: &BTreeMap<String, u64>,
    residual: &Problem,
    inverse_colors: &BTreeMap<u32, u32>,
    forced: &[(String, u32)],
) -> Vec<BTreeMap<String, u32>> {
    let layout = residual.layout();
    let mut entries: Vec<(&String, &u64)> = histogram.iter().collect();
    entries.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
    entries
        .iter()
        .map(|(state, _)| {
            let bits = u64::from_str_radix(state, 2).expect("histogram labels are binary");
            let colors = layout.decode_vertex_string(bits);
            let mut full: BTreeMap<String, u32> = forced.iter().cloned().collect();
            for (v, name) in residual.graph().vertices().iter().enumerate() {
                full.insert(name.clone(), inverse_colors[&colors[v]]);
            }
            full
        })
        .collect()
}

fn verify_map(p: &Problem, coloring: &BTreeMap<String, u32>) -> Result<Option<Violation>, CliError> {
    let mut colors = Vec::with_capacity(p.graph().vertex_count());
    for name in p.graph().vertices() {
        let Some(&c) = coloring.get(name) else {
            return Err(CliError::IncompleteColoring(name.clone()));
        };
        colors.push(c);
    }
    Ok(violated_constraint(p, &colors))
}

struct Prepared {
    /// Residual problem after preprocessing, colors compacted; `None` when
    /// propagation either solved or refuted the instance outright.
    residual: Option<Problem>,
    forced: Vec<(String, u32)>,
    /// Compact color -> original color.
    inverse_colors: BTreeMap<u32, u32>,
    refuted: bool,
}

/// Compacts sparse colors only when that shrinks the register layout, so
/// that measured bit strings keep the declared colors whenever possible.
fn compact_if_smaller(p: &Problem) -> (Problem, BTreeMap<u32, u32>) {
    let (compact, map) = remap_colors(p);
    if compact.layout().total < p.layout().total {
        (compact, map.into_iter().map(|(orig, c)| (c, orig)).collect())
    } else {
        let identity = p.lists().iter().flatten().map(|&c| (c, c)).collect();
        (p.clone(), identity)
    }
}

fn prepare(p: &Problem, reduce: bool) -> Prepared {
    if !reduce {
        let (compact, inverse_colors) = compact_if_smaller(p);
        return Prepared {
            residual: Some(compact),
            forced: Vec::new(),
            inverse_colors,
            refuted: false,
        };
    }
    match reduce_singletons(p) {
        Err(ProblemError::PropagationEmptied(_)) => Prepared {
            residual: None,
            forced: Vec::new(),
            inverse_colors: BTreeMap::new(),
            refuted: true,
        },
        Err(_) => unreachable!("reduce_singletons only fails by emptying a list"),
        Ok((None, forced)) => Prepared {
            residual: None,
            forced,
            inverse_colors: BTreeMap::new(),
            refuted: false,
        },
        Ok((Some(residual), forced)) => {
            let (compact, inverse_colors) = compact_if_smaller(&residual);
            Prepared {
                residual: Some(compact),
                forced,
                inverse_colors,
                refuted: false,
            }
        }
    }
}

fn simulate_and_sample(
    plan: &GroverPlan,
    opts: &SolveOptions,
    seed: u64,
) -> Result<(Circuit, BTreeMap<String, u64>), CliError> {
    let mut circuit = build_grover_circuit(plan);
    if opts.lowering == LoweringMode::Elementary {
        circuit = lower(&circuit, LoweringMode::Elementary);
    }
    let state = run(&circuit, None, opts.width_cap)?;
    let dist = vertex_marginal(&state, &plan.problem.layout());
    let histogram = dist.sample(opts.shots, seed);
    Ok((circuit, histogram))
}

pub fn cmd_solve(p: &Problem, opts: &SolveOptions) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let prep = prepare(p, opts.reduce);

    let mut report = RunReport {
        vertices: p.graph().vertex_count(),
        edges: p.graph().edge_count(),
        mode: match opts.mode {
            SolveMode::Exact => "exact",
            SolveMode::Unknown => "unknown",
        }
        .to_string(),
        space_size: p.restricted_space_size(),
        solution_count: None,
        iterations: 0,
        layout_qubits: 0,
        scratch_qubits: 0,
        gate_counts: BTreeMap::new(),
        oracle_cost: 0,
        histogram: BTreeMap::new(),
        outcome: Outcome::Unsatisfiable,
        shots: opts.shots,
        seed: opts.seed,
        sampler: SAMPLER_ID.to_string(),
        elapsed_ms: 0,
    };

    if prep.refuted {
        report.elapsed_ms = start.elapsed().as_millis();
        return Ok(report);
    }
    let Some(residual) = prep.residual else {
        // everything was forced by propagation; no circuit needed
        let coloring: BTreeMap<String, u32> = prep.forced.iter().cloned().collect();
        report.outcome = match verify_map(p, &coloring)? {
            None => Outcome::Coloring(coloring),
            Some(_) => Outcome::Unsatisfiable,
        };
        report.elapsed_ms = start.elapsed().as_millis();
        return Ok(report);
    };

    let layout = residual.layout();
    report.layout_qubits = layout.total;
    report.oracle_cost = total_oracle_cost(&residual);

    let attempt = |plan: &GroverPlan, seed: u64| simulate_and_sample(plan, opts, seed);

    let finish = |mut report: RunReport,
                  plan: &GroverPlan,
                  circuit: Circuit,
                  histogram: BTreeMap<String, u64>|
     -> Result<RunReport, CliError> {
        report.iterations = plan.iterations;
        report.scratch_qubits = circuit.scratch_ancillas;
        report.gate_counts = gate_counts(&circuit);
        let candidates =
            candidates_by_frequency(&histogram, &residual, &prep.inverse_colors, &prep.forced);
        report.histogram = histogram;
        report.outcome = candidates
            .into_iter()
            .find(|c| matches!(verify_map(p, c), Ok(None)))
            .map_or(Outcome::LikelyUnsatisfiable, Outcome::Coloring);
        report.elapsed_ms = Instant::now().duration_since(start).as_millis();
        Ok(report)
    };

    match (opts.mode, opts.iterations) {
        (SolveMode::Exact, flag) => {
            let plan = grover_plan(&residual, PlanMode::ExactCount, opts.enumeration_cap)?;
            report.solution_count = plan.solution_count;
            if plan.unsatisfiable {
                report.elapsed_ms = start.elapsed().as_millis();
                return Ok(report);
            }
            let plan = match flag {
                IterationsFlag::Auto => plan,
                IterationsFlag::Fixed(r) => GroverPlan {
                    mode: PlanMode::Fixed(r),
                    iterations: r,
                    ..plan
                },
            };
            let (circuit, histogram) = attempt(&plan, opts.seed)?;
            finish(report, &plan, circuit, histogram)
        }
        (SolveMode::Unknown, IterationsFlag::Fixed(r)) => {
            let plan = grover_plan(&residual, PlanMode::Fixed(r), opts.enumeration_cap)?;
            let (circuit, histogram) = attempt(&plan, opts.seed)?;
            finish(report, &plan, circuit, histogram)
        }
        (SolveMode::Unknown, IterationsFlag::Auto) => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(opts.seed);
            let mut schedule = UnknownSchedule::new(residual.restricted_space_size());
            let mut last: Option<(GroverPlan, Circuit, BTreeMap<String, u64>)> = None;
            for round in 0..opts.retry_cap {
                let r = schedule.next_iterations(&mut rng);
                let plan = GroverPlan {
                    problem: residual.clone(),
                    mode: PlanMode::UnknownCount,
                    iterations: r,
                    solution_count: None,
                    space_size: residual.restricted_space_size(),
                    unsatisfiable: false,
                };
                let (circuit, histogram) = attempt(&plan, opts.seed.wrapping_add(round as u64))?;
                let candidates = candidates_by_frequency(
                    &histogram,
                    &residual,
                    &prep.inverse_colors,
                    &prep.forced,
                );
                // unknown mode only trusts the modal string per attempt
                if let Some(best) = candidates.into_iter().next() {
                    if matches!(verify_map(p, &best), Ok(None)) {
                        report.iterations = plan.iterations;
                        report.scratch_qubits = circuit.scratch_ancillas;
                        report.gate_counts = gate_counts(&circuit);
                        report.histogram = histogram;
                        report.outcome = Outcome::Coloring(best);
                        report.elapsed_ms = start.elapsed().as_millis();
                        return Ok(report);
                    }
                }
                last = Some((plan, circuit, histogram));
            }
            let (plan, circuit, histogram) = last.expect("retry cap is at least 1");
            report.iterations = plan.iterations;
            report.scratch_qubits = circuit.scratch_ancillas;
            report.gate_counts = gate_counts(&circuit);
            report.histogram = histogram;
            report.outcome = Outcome::LikelyUnsatisfiable;
            report.elapsed_ms = start.elapsed().as_millis();
            Ok(report)
        }
    }
}

/// Parses a comma-separated color list, e.g. "1,2,3".
pub fn parse_color_list(text: &str) -> Result<Vec<u32>, CliError> {
    let list: Result<Vec<u32>, _> = text
        .split(',')
        .map(|s| s.trim().parse::<u32>())
        .collect();
    let list = list.map_err(|_| CliError::BadArgument(format!("invalid color list {text:?}")))?;
    if list.is_empty() {
        return Err(CliError::BadArgument("empty color list".to_string()));
    }
    Ok(list)
}

/// Renders a reduced oracle as the paper-style (wires, pattern) term list.
pub fn format_term_set(terms: &TermSet) -> String {
    let mut out = String::new();
    for term in &terms.terms {
        let wires: Vec<String> = term.wires.iter().map(|w| w.to_string()).collect();
        let pattern: String = term
            .pattern
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        out.push_str(&format!("term: J = {{{}}}, s = {}\n", wires.join(","), pattern));
    }
    out.push_str(&format!(
        "cost: {} ({}), feasible at k = {}\n",
        terms.cost,
        if terms.certified {
            "certified minimal"
        } else {
            "search budget exceeded; upper bound"
        },
        terms.feasible_k
    ));
    out
}

pub fn cmd_oracle_reduce(list_u: &str, list_v: &str) -> Result<String, CliError> {
    let u = parse_color_list(list_u)?;
    let v = parse_color_list(list_v)?;
    Ok(format_term_set(&oracle_reduction(&u, &v)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircuitPart {
    Init,
    Oracle,
    Diffusion,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Netlist,
    Qasm,
}

pub fn cmd_synth(
    p: &Problem,
    part: CircuitPart,
    lowering: LoweringMode,
    format: ExportFormat,
) -> Result<String, CliError> {
    let circuit = match part {
        CircuitPart::Init => build_full_initialization(p),
        CircuitPart::Oracle => {
            if p.graph().edge_count() == 0 {
                return Err(CliError::BadArgument(
                    "the problem has no edges; there is no oracle to synthesize".to_string(),
                ));
            }
            build_full_oracle(p)
        }
        CircuitPart::Diffusion => build_diffusion(p),
        CircuitPart::Full => {
            let plan = grover_plan(p, PlanMode::ExactCount, DEFAULT_ENUMERATION_CAP)?;
            if plan.unsatisfiable {
                return Err(CliError::BadArgument(
                    "the instance is unsatisfiable; no search circuit exists".to_string(),
                ));
            }
            build_grover_circuit(&plan)
        }
    };
    let circuit = match lowering {
        LoweringMode::Native => circuit,
        LoweringMode::Elementary => lower(&circuit, LoweringMode::Elementary),
    };
    match format {
        ExportFormat::Netlist => Ok(to_netlist(&circuit)),
        ExportFormat::Qasm => Ok(to_qasm(&circuit)?),
    }
}

#[derive(Debug, Clone)]
pub struct HistogramOptions {
    pub solve: SolveOptions,
    /// Write exact marginal probabilities instead of sampled frequencies.
    pub exact: bool,
}

/// Renders the vertex-register distribution as semicolon-separated CSV with
/// header `State;Probability`, one row per string with nonzero probability,
/// most-significant bit first, ascending.
pub fn render_histogram_csv(dist: &Distribution, shots: u64, seed: u64, exact: bool) -> String {
    let mut out = String::from("State;Probability\n");
    if exact {
        for (idx, p) in dist.iter() {
            if p > 1e-15 {
                out.push_str(&format!("{};{:.10}\n", dist.label(idx), p));
            }
        }
    } else {
        let freqs = dist.sample(shots, seed);
        // sample() only reports states that were actually hit
        for (state, n) in &freqs {
            out.push_str(&format!("{};{:.10}\n", state, *n as f64 / shots as f64));
        }
    }
    out
}

/// Builds the search circuit, simulates it, and returns the CSV text.
/// Preprocessing is skipped so that rows match the declared register layout.
pub fn cmd_histogram(p: &Problem, opts: &HistogramOptions) -> Result<(String, RunReport), CliError> {
    let mut solve_opts = opts.solve.clone();
    solve_opts.reduce = false;
    let start = Instant::now();
    let (compact, _) = compact_if_smaller(p);
    let plan = match solve_opts.iterations {
        IterationsFlag::Auto => {
            grover_plan(&compact, PlanMode::ExactCount, solve_opts.enumeration_cap)?
        }
        IterationsFlag::Fixed(r) => {
            grover_plan(&compact, PlanMode::Fixed(r), solve_opts.enumeration_cap)?
        }
    };
    let mut report = cmd_solve(p, &solve_opts)?;
    if plan.unsatisfiable {
        report.elapsed_ms = start.elapsed().as_millis();
        return Ok((String::from("State;Probability\n"), report));
    }
    let mut circuit = build_grover_circuit(&plan);
    if solve_opts.lowering == LoweringMode::Elementary {
        circuit = lower(&circuit, LoweringMode::Elementary);
    }
    let state = run(&circuit, None, solve_opts.width_cap)?;
    let dist = vertex_marginal(&state, &compact.layout());
    let csv = render_histogram_csv(&dist, solve_opts.shots, solve_opts.seed, opts.exact);
    Ok((csv, report))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(Violation),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid => write!(f, "valid"),
            Verdict::Invalid(Violation::NotInList { vertex, color }) => write!(
                f,
                "invalid: color {color} is not in the list of vertex {vertex:?}"
            ),
            Verdict::Invalid(Violation::MonochromaticEdge { u, v, color }) => write!(
                f,
                "invalid: edge ({u:?}, {v:?}) has both endpoints colored {color}"
            ),
        }
    }
}

/// Checks a coloring file (JSON object mapping vertex name to color) against
/// a problem.
pub fn cmd_verify(problem_path: &Path, coloring_path: &Path) -> Result<Verdict, CliError> {
    let p = load_problem(problem_path)?;
    let coloring: BTreeMap<String, u32> = read_json(coloring_path)?;
    Ok(match verify_map(&p, &coloring)? {
        None => Verdict::Valid,
        Some(v) => Verdict::Invalid(v),
    })
}
