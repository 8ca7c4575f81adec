//! The named operators behind storage and recall: the single-qubit
//! Walsh/Hadamard transform, phase inversion over a set of basis states,
//! inversion about the mean amplitude, and the two-qubit splitting matrix
//! that carves one pattern's worth of amplitude off a generator state.
//!
//! Phase inversion takes an explicit [`MarkSet`] rather than a single basis
//! state so the same oracle covers exact targets, wildcard queries, and the
//! stored-pattern flip used by recall. No ancilla qubits are involved; the
//! sign changes are applied directly to the state vector.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::QuantumState;

/// Tolerance on max|G†G − I| for every constructed gate.
pub const UNITARITY_TOLERANCE: f64 = 1e-12;

/// A 2×2 or 4×4 unitary, validated at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct GateMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl GateMatrix {
    pub fn one_qubit(rows: [[Complex64; 2]; 2]) -> Result<Self> {
        Self::checked(2, rows.iter().flatten().copied().collect())
    }

    pub fn two_qubit(rows: [[Complex64; 4]; 4]) -> Result<Self> {
        Self::checked(4, rows.iter().flatten().copied().collect())
    }

    fn checked(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        let gate = GateMatrix { dim, entries };
        let defect = gate.unitarity_defect();
        if defect > UNITARITY_TOLERANCE {
            return Err(Error::input(format!(
                "matrix is not unitary: max|G†G − I| = {defect:.3e}"
            )));
        }
        Ok(gate)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn adjoint(&self) -> Self {
        let mut entries = vec![Complex64::ZERO; self.entries.len()];
        for r in 0..self.dim {
            for c in 0..self.dim {
                entries[c * self.dim + r] = self.entry(r, c).conj();
            }
        }
        GateMatrix {
            dim: self.dim,
            entries,
        }
    }

    /// max-norm entry of G†G − I.
    pub fn unitarity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in 0..self.dim {
                let mut dot = Complex64::ZERO;
                for k in 0..self.dim {
                    dot += self.entry(k, r).conj() * self.entry(k, c);
                }
                let expected = if r == c { Complex64::ONE } else { Complex64::ZERO };
                worst = worst.max((dot - expected).norm());
            }
        }
        worst
    }
}

/// The Walsh/Hadamard transform (1/√2)·[[1, 1], [1, −1]].
pub fn hadamard() -> GateMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    GateMatrix {
        dim: 2,
        entries: vec![
            Complex64::new(h, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(-h, 0.0),
        ],
    }
}

pub fn pauli_x() -> GateMatrix {
    GateMatrix {
        dim: 2,
        entries: vec![Complex64::ZERO, Complex64::ONE, Complex64::ONE, Complex64::ZERO],
    }
}

pub fn swap() -> GateMatrix {
    let mut entries = vec![Complex64::ZERO; 16];
    for (r, c) in [(0usize, 0usize), (1, 2), (2, 1), (3, 3)] {
        entries[r * 4 + c] = Complex64::ONE;
    }
    GateMatrix { dim: 4, entries }
}

/// The two-qubit splitting matrix used by the storage loop, with `p` the
/// number of patterns still to process. On the control-register basis
/// |00⟩, |01⟩, |10⟩, |11⟩ it keeps the first two states fixed and rotates
/// the last two by the angle that moves amplitude 1/√p onto |11⟩.
pub fn s_matrix(p: u64) -> Result<GateMatrix> {
    if p < 1 {
        return Err(Error::input("splitting matrix needs p ≥ 1"));
    }
    let p = p as f64;
    let keep = ((p - 1.0) / p).sqrt();
    let carve = 1.0 / p.sqrt();
    let mut entries = vec![Complex64::ZERO; 16];
    entries[0] = Complex64::ONE;
    entries[5] = Complex64::ONE;
    entries[10] = Complex64::new(keep, 0.0);
    entries[11] = Complex64::new(-carve, 0.0);
    entries[14] = Complex64::new(carve, 0.0);
    entries[15] = Complex64::new(keep, 0.0);
    // Exact algebra keeps the defect at rounding level for any p.
    GateMatrix::checked(4, entries)
}

/// A set of basis indices whose phases an oracle inverts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MarkSet {
    indices: Vec<usize>,
}

impl MarkSet {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        MarkSet { indices }
    }

    pub fn union(&self, other: &MarkSet) -> MarkSet {
        let mut indices = self.indices.clone();
        indices.extend_from_slice(&other.indices);
        MarkSet::new(indices)
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }
}

impl FromIterator<usize> for MarkSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        MarkSet::new(iter.into_iter().collect())
    }
}

/// Apply the Hadamard transform to every qubit of the register.
pub fn walsh_all(state: &mut QuantumState) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let dim = state.dimension();
    let amps = state.amplitudes_mut();
    let mut stride = dim >> 1;
    while stride >= 1 {
        let mut block = 0;
        while block < dim {
            for i in block..block + stride {
                let j = i + stride;
                let a = amps[i];
                let b = amps[j];
                amps[i] = (a + b) * h;
                amps[j] = (a - b) * h;
            }
            block += stride << 1;
        }
        stride >>= 1;
    }
}

/// Negate the amplitude of every marked basis state.
pub fn phase_invert(state: &mut QuantumState, marks: &MarkSet) -> Result<()> {
    if let Some(&last) = marks.indices().last() {
        if last >= state.dimension() {
            return Err(Error::input(format!(
                "mark index {last} out of range for dimension {}",
                state.dimension()
            )));
        }
    }
    let amps = state.amplitudes_mut();
    for &i in marks.indices() {
        amps[i] = -amps[i];
    }
    Ok(())
}

/// Replace every amplitude c by 2m − c, where m is the mean amplitude.
pub fn invert_about_mean(state: &mut QuantumState) {
    let pivot = state.mean_amplitude() * 2.0;
    for amp in state.amplitudes_mut() {
        *amp = pivot - *amp;
    }
}
