//! Writing a pattern set into a register as an equal superposition.
//!
//! Two routes produce the same memory state. The fast path writes the
//! amplitudes directly. The circuit path simulates the storage loop over an
//! x register (the pattern qubits) extended by a two-qubit control register:
//! for each pattern it flips the generator's x qubits to match, carves off
//! amplitude 1/√p with the splitting matrix, and makes the carved piece
//! permanent. The garbage register that a gate-level construction would need
//! is omitted; the save step is implemented as the equivalent register-level
//! amplitude transfer, which acts identically on every state the loop can
//! reach when patterns are distinct.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates;
use crate::state::{BasisPattern, ControlSpec, QuantumState, MAX_QUBITS};

/// Largest pattern length the circuit path will simulate (n + 2 qubits).
pub const MAX_CIRCUIT_QUBITS: usize = 12;

/// Tolerance on the rank-1 check used to split off the control register.
const PRODUCT_TOLERANCE: f64 = 1e-10;

/// An ordered set of distinct binary patterns of a common length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSet {
    patterns: Vec<BasisPattern>,
    pattern_len: usize,
}

impl PatternSet {
    pub fn new(patterns: Vec<BasisPattern>) -> Result<Self> {
        let first = patterns
            .first()
            .ok_or_else(|| Error::data("pattern set must contain at least one pattern"))?;
        let pattern_len = first.len();
        for p in &patterns {
            if p.len() != pattern_len {
                return Err(Error::data(format!(
                    "pattern {p} has length {}, expected {pattern_len}",
                    p.len()
                )));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for p in &patterns {
            if !seen.insert(p.as_str()) {
                return Err(Error::data(format!("duplicate pattern {p}")));
            }
        }
        Ok(PatternSet {
            patterns,
            pattern_len,
        })
    }

    pub fn from_strings<I, S>(strings: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let patterns = strings
            .into_iter()
            .map(|s| BasisPattern::new(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        PatternSet::new(patterns)
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn pattern_len(&self) -> usize {
        self.pattern_len
    }

    pub fn patterns(&self) -> &[BasisPattern] {
        &self.patterns
    }

    pub fn iter(&self) -> impl Iterator<Item = &BasisPattern> {
        self.patterns.iter()
    }

    pub fn contains(&self, pattern: &BasisPattern) -> bool {
        self.patterns.iter().any(|p| p == pattern)
    }

    /// Basis indices of the patterns, in set order.
    pub fn indices(&self) -> Vec<usize> {
        self.patterns.iter().map(BasisPattern::index).collect()
    }
}

/// Write the superposition directly: amplitude 1/√m at each pattern index.
pub fn store_fast(patterns: &PatternSet) -> Result<QuantumState> {
    let n = patterns.pattern_len();
    if n > MAX_QUBITS {
        return Err(Error::input(format!(
            "pattern length {n} exceeds the {MAX_QUBITS}-qubit register limit"
        )));
    }
    let amplitude = Complex64::new(1.0 / (patterns.len() as f64).sqrt(), 0.0);
    let mut amps = vec![Complex64::ZERO; 1 << n];
    for index in patterns.indices() {
        amps[index] = amplitude;
    }
    QuantumState::from_amplitudes(amps)
}

/// State of the x register (qubits 1…n) plus the two control qubits
/// (c₁ = n+1, c₂ = n+2) used while the storage circuit is running.
#[derive(Debug, Clone, PartialEq)]
pub struct StorageState {
    state: QuantumState,
    pattern_len: usize,
}

impl StorageState {
    /// |0…0, 00⟩ over n + 2 qubits.
    pub fn initial(pattern_len: usize) -> Result<Self> {
        if pattern_len > MAX_CIRCUIT_QUBITS {
            return Err(Error::input(format!(
                "pattern length {pattern_len} exceeds the {MAX_CIRCUIT_QUBITS}-qubit circuit limit"
            )));
        }
        Ok(StorageState {
            state: QuantumState::zero(pattern_len + 2)?,
            pattern_len,
        })
    }

    /// Wrap an existing register of n + 2 qubits.
    pub fn from_state(state: QuantumState, pattern_len: usize) -> Result<Self> {
        if state.qubit_count() != pattern_len + 2 {
            return Err(Error::input(format!(
                "state has {} qubits, expected pattern length {pattern_len} + 2 controls",
                state.qubit_count()
            )));
        }
        Ok(StorageState { state, pattern_len })
    }

    pub fn pattern_len(&self) -> usize {
        self.pattern_len
    }

    pub fn state(&self) -> &QuantumState {
        &self.state
    }

    pub fn into_state(self) -> QuantumState {
        self.state
    }

    fn first_control(&self) -> usize {
        self.pattern_len + 1
    }

    fn second_control(&self) -> usize {
        self.pattern_len + 2
    }
}

/// Move the generator to the next pattern: on the subspace where the second
/// control qubit is 0, flip every x qubit named by `diff_mask`, then flip
/// the first control qubit to stage the generator for the splitting matrix.
pub fn flip_step(storage: &mut StorageState, diff_mask: &BasisPattern) -> Result<()> {
    if diff_mask.len() != storage.pattern_len() {
        return Err(Error::input(format!(
            "difference mask has length {}, expected {}",
            diff_mask.len(),
            storage.pattern_len()
        )));
    }
    let when_unsaved = ControlSpec::new(vec![(storage.second_control(), false)])?;
    let x = gates::pauli_x();
    for q in 1..=storage.pattern_len() {
        if diff_mask.bit(q) {
            storage.state.apply_1q(&x, q, &when_unsaved)?;
        }
    }
    storage
        .state
        .apply_1q(&x, storage.first_control(), &when_unsaved)
}

/// Make the carved-off piece permanent: every basis state with the first
/// control qubit set hands its amplitude to the state with identical x and
/// second-control bits but the first control cleared.
pub fn save_step(storage: &mut StorageState) -> Result<()> {
    // c₁ is the second-least-significant bit of the index, c₂ the least.
    let c1_mask = 2usize;
    let amps = storage.state.amplitudes_mut();
    for i in 0..amps.len() {
        if i & c1_mask != 0 && amps[i].norm_sqr() > 0.0 {
            let dest = i & !c1_mask;
            if amps[dest].norm() > 1e-12 {
                return Err(Error::invariant(format!(
                    "save collision: destination index {dest} already carries amplitude"
                )));
            }
            amps[dest] = amps[i];
            amps[i] = Complex64::ZERO;
        }
    }
    Ok(())
}

/// Result of running the storage circuit.
#[derive(Debug, Clone)]
pub struct CircuitRun {
    pub state: StorageState,
    /// Elementary register operations performed (controlled flips, one
    /// splitting matrix and one save transfer per pattern).
    pub op_count: u64,
}

/// Run the storage loop over all patterns, calling `observe` after every
/// elementary stage (flip, split, save).
fn run_circuit(
    patterns: &PatternSet,
    mut observe: impl FnMut(&StorageState),
) -> Result<CircuitRun> {
    let n = patterns.pattern_len();
    let mut storage = StorageState::initial(n)?;
    let mut op_count = 0u64;
    let m = patterns.len();
    let all_zero = BasisPattern::new("0".repeat(n))?;
    let mut previous = &all_zero;
    for (i, pattern) in patterns.iter().enumerate() {
        let remaining = (m - i) as u64;
        let diff_mask = pattern.xor(previous)?;
        flip_step(&mut storage, &diff_mask)?;
        op_count += diff_mask.as_str().bytes().filter(|&b| b == b'1').count() as u64 + 1;
        observe(&storage);

        let split = gates::s_matrix(remaining)?;
        storage.state.apply_2q(
            &split,
            (storage.first_control(), storage.second_control()),
            &ControlSpec::none(),
        )?;
        op_count += 1;
        observe(&storage);

        save_step(&mut storage)?;
        op_count += 1;
        observe(&storage);

        previous = pattern;
    }
    Ok(CircuitRun {
        state: storage,
        op_count,
    })
}

/// Run the storage circuit and return the final register state.
pub fn store_circuit(patterns: &PatternSet) -> Result<CircuitRun> {
    run_circuit(patterns, |_| {})
}

/// Run the storage circuit, also returning a snapshot of the register after
/// every elementary stage (the first snapshot is the initial state).
pub fn store_circuit_trace(patterns: &PatternSet) -> Result<(CircuitRun, Vec<QuantumState>)> {
    let mut snapshots = vec![StorageState::initial(patterns.pattern_len())?.into_state()];
    let run = run_circuit(patterns, |s| snapshots.push(s.state().clone()))?;
    Ok((run, snapshots))
}

/// Elementary operations the circuit path performs for `patterns`, without
/// running it. Each pattern costs its difference-mask popcount, the control
/// flip, the splitting matrix, and the save transfer — at most 2n + 2.
pub fn circuit_op_count(patterns: &PatternSet) -> u64 {
    let n = patterns.pattern_len();
    let mut previous = vec![b'0'; n];
    let mut ops = 0u64;
    for pattern in patterns.iter() {
        let bytes = pattern.as_str().as_bytes();
        ops += bytes
            .iter()
            .zip(&previous)
            .filter(|&(a, b)| a != b)
            .count() as u64
            + 3;
        previous.copy_from_slice(bytes);
    }
    ops
}

/// Drop the control register once it is no longer entangled with the x
/// register, returning the x-register state with the dominant amplitude
/// rotated to be real and positive.
pub fn reduce_registers(storage: &StorageState) -> Result<QuantumState> {
    let n = storage.pattern_len();
    let amps = storage.state().amplitudes();
    let x_dim = 1usize << n;

    // Rank-1 check on the 2ⁿ×4 amplitude matrix A[x][c]: with the pivot at
    // the largest-magnitude entry, every 2×2 minor through the pivot must
    // vanish.
    let (pivot, _) = amps
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| a.norm_sqr().total_cmp(&b.norm_sqr()))
        .expect("state is non-empty");
    let (pivot_x, pivot_c) = (pivot >> 2, pivot & 3);
    let pivot_amp = amps[pivot];
    for x in 0..x_dim {
        for c in 0..4usize {
            let minor = amps[(x << 2) | c] * pivot_amp
                - amps[(x << 2) | pivot_c] * amps[(pivot_x << 2) | c];
            if minor.norm() > PRODUCT_TOLERANCE {
                return Err(Error::invariant(
                    "control register is entangled with the pattern register",
                ));
            }
        }
    }

    let mut x_amps: Vec<Complex64> = (0..x_dim).map(|x| amps[(x << 2) | pivot_c]).collect();
    let norm = x_amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let dominant = x_amps[pivot_x];
    let phase = dominant / dominant.norm();
    for amp in &mut x_amps {
        *amp /= phase * norm;
    }
    QuantumState::from_amplitudes(x_amps)
}
