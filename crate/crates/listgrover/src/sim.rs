//! Dense statevector simulation.
//!
//! Basis labels are printed most significant bit first with qubit 0 leftmost,
//! so a label reads as the concatenated registers in layout order, matching
//! the measured bit strings reported for the coloring circuits.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::circuit::{unitary_deviation, Circuit, Gate, Polarity};
use crate::problem::RegisterLayout;

/// Default cap on simulated circuit width.
pub const DEFAULT_WIDTH_CAP: usize = 26;

/// Identifier of the sampling generator, reported in run metadata so counts
/// are reproducible across builds.
pub const SAMPLER_ID: &str = "chacha8";

#[derive(Debug, Error)]
pub enum SimError {
    #[error("circuit width {width} exceeds simulator cap {cap}")]
    WidthCap { width: usize, cap: usize },
    #[error("unitary block {label:?} deviates from unitarity by {deviation:.3e}")]
    NonUnitaryBlock { label: String, deviation: f64 },
    #[error("state norm drifted to {norm_sqr} after gate {gate_index}")]
    NormDrift { norm_sqr: f64, gate_index: usize },
}

#[derive(Debug, Clone)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero_state(num_qubits: usize) -> Self {
        Self::from_basis_state(num_qubits, 0)
    }

    pub fn from_basis_state(num_qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Qubit `q` occupies bit `n-1-q` of the amplitude index, so printed
    /// labels read left to right in qubit order.
    fn qubit_mask(&self, q: usize) -> usize {
        debug_assert!(q < self.num_qubits);
        1 << (self.num_qubits - 1 - q)
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<(), SimError> {
        if let Some(m) = gate.single_qubit_matrix() {
            let target = gate.qubits()[0];
            let mask = self.qubit_mask(target);
            for i in 0..self.amps.len() {
                if i & mask == 0 {
                    let a = self.amps[i];
                    let b = self.amps[i | mask];
                    self.amps[i] = m[0][0] * a + m[0][1] * b;
                    self.amps[i | mask] = m[1][0] * a + m[1][1] * b;
                }
            }
            return Ok(());
        }
        match gate {
            Gate::Mcx { controls, target } => {
                let tmask = self.qubit_mask(*target);
                let mut pos = 0usize;
                let mut neg = 0usize;
                for &(q, p) in controls {
                    match p {
                        Polarity::Control => pos |= self.qubit_mask(q),
                        Polarity::AntiControl => neg |= self.qubit_mask(q),
                    }
                }
                for i in 0..self.amps.len() {
                    if i & tmask == 0 && i & pos == pos && i & neg == 0 {
                        self.amps.swap(i, i | tmask);
                    }
                }
                Ok(())
            }
            Gate::Block {
                label,
                qubits,
                matrix,
            } => {
                let deviation = unitary_deviation(matrix);
                if deviation > 1e-10 {
                    return Err(SimError::NonUnitaryBlock {
                        label: label.clone(),
                        deviation,
                    });
                }
                let k = qubits.len();
                let dim = 1usize << k;
                assert_eq!(matrix.nrows(), dim);
                // scatter table: block label j -> index bits in the full register
                let masks: Vec<usize> = qubits.iter().map(|&q| self.qubit_mask(q)).collect();
                let block_mask: usize = masks.iter().sum();
                let scatter: Vec<usize> = (0..dim)
                    .map(|j| {
                        masks
                            .iter()
                            .enumerate()
                            .filter(|&(b, _)| (j >> (k - 1 - b)) & 1 == 1)
                            .map(|(_, &m)| m)
                            .sum()
                    })
                    .collect();
                let mut gathered = vec![Complex64::new(0.0, 0.0); dim];
                for base in 0..self.amps.len() {
                    if base & block_mask != 0 {
                        continue;
                    }
                    for j in 0..dim {
                        gathered[j] = self.amps[base | scatter[j]];
                    }
                    for (row, &sc) in scatter.iter().enumerate() {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for col in 0..dim {
                            acc += matrix[(row, col)] * gathered[col];
                        }
                        self.amps[base | sc] = acc;
                    }
                }
                Ok(())
            }
            _ => unreachable!("single-qubit kinds handled above"),
        }
    }

    pub fn apply_circuit(&mut self, c: &Circuit) -> Result<(), SimError> {
        assert_eq!(c.qubit_count, self.num_qubits, "circuit width mismatch");
        for (i, gate) in c.gates.iter().enumerate() {
            self.apply(gate)?;
            let norm_sqr = self.norm_sqr();
            if (norm_sqr - 1.0).abs() > 1e-10 {
                return Err(SimError::NormDrift {
                    norm_sqr,
                    gate_index: i,
                });
            }
        }
        Ok(())
    }
}

/// Runs a circuit from `initial` (the all-zeros state when `None`).
pub fn run(c: &Circuit, initial: Option<StateVector>, width_cap: usize) -> Result<StateVector, SimError> {
    if c.qubit_count > width_cap {
        return Err(SimError::WidthCap {
            width: c.qubit_count,
            cap: width_cap,
        });
    }
    let mut state = initial.unwrap_or_else(|| StateVector::zero_state(c.qubit_count));
    state.apply_circuit(c)?;
    Ok(state)
}

/// Full unitary of a circuit, assembled column by column through the
/// simulator. Intended for verification at small widths.
pub fn circuit_unitary(c: &Circuit) -> ndarray::Array2<Complex64> {
    let dim = 1usize << c.qubit_count;
    let mut m = ndarray::Array2::zeros((dim, dim));
    for col in 0..dim {
        let mut sv = StateVector::from_basis_state(c.qubit_count, col);
        sv.apply_circuit(c).expect("unitary assembly failed");
        for row in 0..dim {
            m[(row, col)] = sv.amplitude(row);
        }
    }
    m
}

/// Probabilities over vertex-register bit strings, traced over edge, ancilla
/// and scratch qubits.
#[derive(Debug, Clone)]
pub struct Distribution {
    /// Width of the vertex register in bits.
    pub bits: usize,
    probs: Vec<f64>,
}

impl Distribution {
    pub fn from_probs(bits: usize, probs: Vec<f64>) -> Self {
        assert_eq!(probs.len(), 1 << bits);
        debug_assert!(probs.iter().all(|&p| p >= -1e-12));
        Distribution { bits, probs }
    }

    pub fn point(bits: usize, index: usize) -> Self {
        let mut probs = vec![0.0; 1 << bits];
        probs[index] = 1.0;
        Distribution { bits, probs }
    }

    pub fn prob(&self, index: usize) -> f64 {
        self.probs[index]
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn label(&self, index: usize) -> String {
        format!("{index:0width$b}", width = self.bits)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.probs.iter().copied().enumerate()
    }

    /// Seeded multinomial sampling; identical inputs give identical counts.
    pub fn sample(&self, shots: u64, seed: u64) -> BTreeMap<String, u64> {
        assert!(shots >= 1);
        let mut cumulative = Vec::with_capacity(self.probs.len());
        let mut acc = 0.0f64;
        for &p in &self.probs {
            acc += p.max(0.0);
            cumulative.push(acc);
        }
        let total = acc;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for _ in 0..shots {
            let x: f64 = rng.random::<f64>() * total;
            let idx = cumulative.partition_point(|&c| c < x).min(self.probs.len() - 1);
            *counts.entry(self.label(idx)).or_insert(0) += 1;
        }
        counts
    }
}

pub fn vertex_marginal(state: &StateVector, layout: &RegisterLayout) -> Distribution {
    let nv = layout.vertex_bits();
    let shift = state.num_qubits() - nv;
    let mut probs = vec![0.0f64; 1 << nv];
    for (i, a) in state.amplitudes().iter().enumerate() {
        probs[i >> shift] += a.norm_sqr();
    }
    Distribution::from_probs(nv, probs)
}
