//! Circuit intermediate representation.
//!
//! Gates carry explicit control polarities; multi-controlled NOTs are kept
//! native until `lower` rewrites them into the standard Toffoli network and
//! clean-ancilla constructions. Unitary blocks (used for the initialization
//! operators) stay opaque and are applied densely by the simulator.

use std::fmt::Write as _;

use ndarray::Array2;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Control,
    AntiControl,
}

#[derive(Debug, Clone)]
pub enum Gate {
    H(usize),
    X(usize),
    Z(usize),
    S(usize),
    Sdg(usize),
    T(usize),
    Tdg(usize),
    /// Rotation about Y: [[cos(a/2), -sin(a/2)], [sin(a/2), cos(a/2)]].
    Ry { target: usize, angle: f64 },
    /// Multi-controlled NOT; zero controls is a plain X.
    Mcx {
        controls: Vec<(usize, Polarity)>,
        target: usize,
    },
    /// Dense unitary applied to the listed qubits, first qubit most
    /// significant in the block's basis labels.
    Block {
        label: String,
        qubits: Vec<usize>,
        matrix: Array2<Complex64>,
    },
}

impl Gate {
    pub fn cx(control: usize, target: usize) -> Gate {
        Gate::Mcx {
            controls: vec![(control, Polarity::Control)],
            target,
        }
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Gate {
        Gate::Mcx {
            controls: vec![(c1, Polarity::Control), (c2, Polarity::Control)],
            target,
        }
    }

    /// All qubit indices the gate touches.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q)
            | Gate::X(q)
            | Gate::Z(q)
            | Gate::S(q)
            | Gate::Sdg(q)
            | Gate::T(q)
            | Gate::Tdg(q) => vec![*q],
            Gate::Ry { target, .. } => vec![*target],
            Gate::Mcx { controls, target } => {
                let mut qs: Vec<usize> = controls.iter().map(|&(q, _)| q).collect();
                qs.push(*target);
                qs
            }
            Gate::Block { qubits, .. } => qubits.clone(),
        }
    }

    /// 2x2 matrix for single-qubit gate kinds.
    pub fn single_qubit_matrix(&self) -> Option<[[Complex64; 2]; 2]> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Gate::H(_) => Some([[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]]),
            Gate::X(_) => Some([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]),
            Gate::Z(_) => Some([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]),
            Gate::S(_) => Some([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]]),
            Gate::Sdg(_) => Some([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, -1.0)]]),
            Gate::T(_) => Some([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(s, s)]]),
            Gate::Tdg(_) => Some([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(s, -s)]]),
            Gate::Ry { angle, .. } => {
                let (sin, cos) = (angle / 2.0).sin_cos();
                Some([[c(cos, 0.0), c(-sin, 0.0)], [c(sin, 0.0), c(cos, 0.0)]])
            }
            _ => None,
        }
    }
}

/// Largest entrywise deviation of `m* m` from the identity.
pub fn unitary_deviation(m: &Array2<Complex64>) -> f64 {
    let d = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..d {
                acc += m[(k, i)].conj() * m[(k, j)];
            }
            let expect = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((acc - expect).norm());
        }
    }
    worst
}

#[derive(Debug, Clone)]
pub struct Circuit {
    pub qubit_count: usize,
    pub gates: Vec<Gate>,
    /// Clean decomposition ancillas appended beyond the problem layout.
    pub scratch_ancillas: usize,
}

impl Circuit {
    pub fn new(qubit_count: usize) -> Self {
        Circuit {
            qubit_count,
            gates: Vec::new(),
            scratch_ancillas: 0,
        }
    }

    pub fn push(&mut self, gate: Gate) {
        for q in gate.qubits() {
            assert!(q < self.qubit_count, "gate qubit {q} out of range");
        }
        if let Gate::Mcx { controls, target } = &gate {
            assert!(
                controls.iter().all(|&(q, _)| q != *target),
                "control equals target"
            );
        }
        self.gates.push(gate);
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) {
        for g in gates {
            self.push(g);
        }
    }

    pub fn append_circuit(&mut self, other: &Circuit) {
        assert_eq!(self.qubit_count, other.qubit_count);
        self.gates.extend(other.gates.iter().cloned());
        self.scratch_ancillas = self.scratch_ancillas.max(other.scratch_ancillas);
    }

    /// Oracle cost metric: a k-controlled NOT costs k, everything else 0.
    pub fn cost(&self) -> usize {
        self.gates
            .iter()
            .map(|g| match g {
                Gate::Mcx { controls, .. } => controls.len(),
                _ => 0,
            })
            .sum()
    }
}

/// Allocates clean scratch qubits above a base index, reusing freed ones.
#[derive(Debug)]
pub struct ScratchAllocator {
    base: usize,
    free: Vec<usize>,
    pub high_water: usize,
}

impl ScratchAllocator {
    pub fn new(base: usize) -> Self {
        ScratchAllocator {
            base,
            free: Vec::new(),
            high_water: 0,
        }
    }

    pub fn alloc(&mut self) -> usize {
        if let Some(q) = self.free.pop() {
            q
        } else {
            let q = self.base + self.high_water;
            self.high_water += 1;
            q
        }
    }

    pub fn release(&mut self, q: usize) {
        self.free.push(q);
    }
}

fn conjugate_anticontrols(
    controls: &[(usize, Polarity)],
    inner: Vec<Gate>,
) -> Vec<Gate> {
    let anti: Vec<usize> = controls
        .iter()
        .filter(|&&(_, p)| p == Polarity::AntiControl)
        .map(|&(q, _)| q)
        .collect();
    let mut gates: Vec<Gate> = anti.iter().map(|&q| Gate::X(q)).collect();
    gates.extend(inner);
    gates.extend(anti.iter().map(|&q| Gate::X(q)));
    gates
}

/// The standard 15-gate H/T/CX network for a (possibly anti-)controlled
/// controlled-X; anticontrols are handled by conjugating that control with X.
/// The fragment's unitary equals the source gate exactly, with no global
/// phase.
pub fn decompose_toffoli(
    c1: (usize, Polarity),
    c2: (usize, Polarity),
    target: usize,
) -> Vec<Gate> {
    let (a, b) = (c1.0, c2.0);
    assert!(a != b && a != target && b != target);
    let core = vec![
        Gate::H(target),
        Gate::cx(b, target),
        Gate::Tdg(target),
        Gate::cx(a, target),
        Gate::T(target),
        Gate::cx(b, target),
        Gate::Tdg(target),
        Gate::cx(a, target),
        Gate::T(b),
        Gate::T(target),
        Gate::H(target),
        Gate::cx(a, b),
        Gate::T(a),
        Gate::Tdg(b),
        Gate::cx(a, b),
    ];
    conjugate_anticontrols(&[c1, c2], core)
}

/// Rewrites an MCX with at least three controls into Toffoli-level gates
/// using clean ancillas.
///
/// Three controls produce the compute/use/uncompute network of three
/// Toffolis over one ancilla; more controls split the control set in half
/// recursively, each half AND-ed into its own clean ancilla. Every ancilla
/// is returned to |0> within the emitted fragment.
pub fn decompose_mcx(
    controls: &[(usize, Polarity)],
    target: usize,
    alloc: &mut ScratchAllocator,
) -> Vec<Gate> {
    assert!(controls.len() >= 3, "use decompose_toffoli below 3 controls");
    to_toffolis(controls, target, alloc)
}

fn to_toffolis(
    controls: &[(usize, Polarity)],
    target: usize,
    alloc: &mut ScratchAllocator,
) -> Vec<Gate> {
    match controls.len() {
        1 => vec![Gate::Mcx {
            controls: controls.to_vec(),
            target,
        }],
        2 => vec![Gate::Mcx {
            controls: controls.to_vec(),
            target,
        }],
        n => {
            let (left, right) = controls.split_at(n.div_ceil(2));
            let mut compute: Vec<Gate> = Vec::new();
            let mut ancillas: Vec<usize> = Vec::new();
            let as_control = |half: &[(usize, Polarity)],
                                  compute: &mut Vec<Gate>,
                                  ancillas: &mut Vec<usize>,
                                  alloc: &mut ScratchAllocator| {
                if half.len() == 1 {
                    half[0]
                } else {
                    let anc = alloc.alloc();
                    ancillas.push(anc);
                    compute.extend(to_toffolis(half, anc, alloc));
                    (anc, Polarity::Control)
                }
            };
            let lc = as_control(left, &mut compute, &mut ancillas, alloc);
            let rc = as_control(right, &mut compute, &mut ancillas, alloc);
            let mut gates = compute.clone();
            gates.push(Gate::Mcx {
                controls: vec![lc, rc],
                target,
            });
            // every emitted gate is self-inverse, so reversing uncomputes
            gates.extend(compute.into_iter().rev());
            for anc in ancillas {
                alloc.release(anc);
            }
            gates
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoweringMode {
    /// Keep MCX gates native (the simulator applies them directly).
    Native,
    /// Rewrite every MCX with two or more controls into 1- and 2-qubit gates.
    Elementary,
}

/// Lowers a circuit. Elementary mode replaces multi-controlled NOTs via the
/// Toffoli and clean-ancilla decompositions; unitary blocks are left intact.
pub fn lower(c: &Circuit, mode: LoweringMode) -> Circuit {
    match mode {
        LoweringMode::Native => c.clone(),
        LoweringMode::Elementary => {
            let mut alloc = ScratchAllocator::new(c.qubit_count);
            let mut gates: Vec<Gate> = Vec::new();
            for gate in &c.gates {
                match gate {
                    Gate::Mcx { controls, target } => match controls.len() {
                        0 => gates.push(Gate::X(*target)),
                        1 => {
                            gates.extend(conjugate_anticontrols(
                                controls,
                                vec![Gate::cx(controls[0].0, *target)],
                            ));
                        }
                        2 => gates.extend(decompose_toffoli(controls[0], controls[1], *target)),
                        _ => {
                            let toffolis = decompose_mcx(controls, *target, &mut alloc);
                            for t in toffolis {
                                match &t {
                                    Gate::Mcx { controls, target } if controls.len() == 2 => {
                                        gates.extend(decompose_toffoli(
                                            controls[0],
                                            controls[1],
                                            *target,
                                        ));
                                    }
                                    _ => gates.push(t),
                                }
                            }
                        }
                    },
                    g => gates.push(g.clone()),
                }
            }
            let mut lowered = Circuit::new(c.qubit_count + alloc.high_water);
            lowered.extend(gates);
            lowered.scratch_ancillas = alloc.high_water;
            lowered
        }
    }
}

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("OpenQASM export requires MCX gates with at most 2 controls, found {0}; lower the circuit first")]
    UnsupportedMcx(usize),
    #[error("OpenQASM export cannot express unitary block {0:?}")]
    UnsupportedBlock(String),
}

/// Text netlist: one gate per line, `GATE target [+q|-q ...] [angle]`.
/// Unitary blocks are emitted as `UNITARY q...` with their label.
pub fn to_netlist(c: &Circuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# qubits {}", c.qubit_count);
    let _ = writeln!(out, "# scratch {}", c.scratch_ancillas);
    for g in &c.gates {
        match g {
            Gate::H(q) => drop(writeln!(out, "H {q}")),
            Gate::X(q) => drop(writeln!(out, "X {q}")),
            Gate::Z(q) => drop(writeln!(out, "Z {q}")),
            Gate::S(q) => drop(writeln!(out, "S {q}")),
            Gate::Sdg(q) => drop(writeln!(out, "SDG {q}")),
            Gate::T(q) => drop(writeln!(out, "T {q}")),
            Gate::Tdg(q) => drop(writeln!(out, "TDG {q}")),
            Gate::Ry { target, angle } => drop(writeln!(out, "RY {target} {angle:.15}")),
            Gate::Mcx { controls, target } => {
                let _ = write!(out, "MCX {target}");
                for &(q, p) in controls {
                    let sign = if p == Polarity::Control { '+' } else { '-' };
                    let _ = write!(out, " {sign}{q}");
                }
                let _ = writeln!(out);
            }
            Gate::Block { label, qubits, .. } => {
                let qs: Vec<String> = qubits.iter().map(|q| q.to_string()).collect();
                let _ = writeln!(out, "UNITARY {} # {label}", qs.join(" "));
            }
        }
    }
    out
}

/// OpenQASM 2.0 export for elementary-mode circuits.
pub fn to_qasm(c: &Circuit) -> Result<String, ExportError> {
    let mut out = String::new();
    let _ = writeln!(out, "OPENQASM 2.0;");
    let _ = writeln!(out, "include \"qelib1.inc\";");
    let _ = writeln!(out, "qreg q[{}];", c.qubit_count);
    for g in &c.gates {
        match g {
            Gate::H(q) => drop(writeln!(out, "h q[{q}];")),
            Gate::X(q) => drop(writeln!(out, "x q[{q}];")),
            Gate::Z(q) => drop(writeln!(out, "z q[{q}];")),
            Gate::S(q) => drop(writeln!(out, "s q[{q}];")),
            Gate::Sdg(q) => drop(writeln!(out, "sdg q[{q}];")),
            Gate::T(q) => drop(writeln!(out, "t q[{q}];")),
            Gate::Tdg(q) => drop(writeln!(out, "tdg q[{q}];")),
            Gate::Ry { target, angle } => {
                let _ = writeln!(out, "ry({angle:.15}) q[{target}];");
            }
            Gate::Mcx { controls, target } => {
                if controls.len() > 2 {
                    return Err(ExportError::UnsupportedMcx(controls.len()));
                }
                let anti: Vec<usize> = controls
                    .iter()
                    .filter(|&&(_, p)| p == Polarity::AntiControl)
                    .map(|&(q, _)| q)
                    .collect();
                for &q in &anti {
                    let _ = writeln!(out, "x q[{q}];");
                }
                match controls.len() {
                    0 => drop(writeln!(out, "x q[{target}];")),
                    1 => drop(writeln!(out, "cx q[{}],q[{target}];", controls[0].0)),
                    _ => drop(writeln!(
                        out,
                        "ccx q[{}],q[{}],q[{target}];",
                        controls[0].0, controls[1].0
                    )),
                }
                for &q in &anti {
                    let _ = writeln!(out, "x q[{q}];");
                }
            }
            Gate::Block { label, .. } => {
                return Err(ExportError::UnsupportedBlock(label.clone()));
            }
        }
    }
    Ok(out)
}
