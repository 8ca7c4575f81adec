//! Dense complex state vectors for n-qubit registers, with controlled gate
//! application, probability queries, and seeded Born-rule sampling.
//!
//! Qubit 1 is the most significant bit of the basis index: for n = 4 the
//! amplitude vector is indexed |0000⟩, |0001⟩, …, |1111⟩. All reductions
//! (norm, mean, cumulative weights) sum in ascending index order so that
//! results are bit-for-bit reproducible for a given build.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::gates::GateMatrix;

/// Largest register the dense representation will allocate (16M amplitudes).
pub const MAX_QUBITS: usize = 24;

/// Tolerance on |Σ|cᵢ|² − 1| after construction and after every unitary.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// The deterministic generator used everywhere a seed is accepted.
pub fn seeded_rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// A classical bit string naming one basis state of a register.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisPattern {
    bits: String,
}

impl BasisPattern {
    pub fn new(bits: impl Into<String>) -> Result<Self> {
        let bits = bits.into();
        if bits.is_empty() {
            return Err(Error::input("basis pattern must not be empty"));
        }
        if let Some(c) = bits.chars().find(|&c| c != '0' && c != '1') {
            return Err(Error::input(format!(
                "invalid character {c:?} in basis pattern {bits:?}"
            )));
        }
        Ok(BasisPattern { bits })
    }

    /// Label of basis index `index` in an `n`-qubit register.
    pub fn from_index(n: usize, index: usize) -> Self {
        assert!(n >= 1 && n < usize::BITS as usize && index < (1 << n));
        let bits = (0..n)
            .map(|q| if (index >> (n - 1 - q)) & 1 == 1 { '1' } else { '0' })
            .collect();
        BasisPattern { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn as_str(&self) -> &str {
        &self.bits
    }

    /// Basis index of this pattern, qubit 1 as the most significant bit.
    pub fn index(&self) -> usize {
        debug_assert!(self.bits.len() < usize::BITS as usize);
        self.bits
            .bytes()
            .fold(0usize, |acc, b| (acc << 1) | usize::from(b == b'1'))
    }

    /// Value of the 1-based qubit `q`.
    pub fn bit(&self, q: usize) -> bool {
        self.bits.as_bytes()[q - 1] == b'1'
    }

    /// Positionwise difference mask: '1' where the two patterns disagree.
    pub fn xor(&self, other: &BasisPattern) -> Result<BasisPattern> {
        if self.len() != other.len() {
            return Err(Error::input(format!(
                "pattern lengths differ: {} vs {}",
                self.len(),
                other.len()
            )));
        }
        let bits = self
            .bits
            .bytes()
            .zip(other.bits.bytes())
            .map(|(a, b)| if a == b { '0' } else { '1' })
            .collect();
        Ok(BasisPattern { bits })
    }
}

impl fmt::Display for BasisPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bits)
    }
}

/// A partial pattern over {0, 1, ?}; '?' positions match either bit value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Query {
    symbols: String,
}

impl Query {
    pub fn new(symbols: impl Into<String>) -> Result<Self> {
        let symbols = symbols.into();
        if symbols.is_empty() {
            return Err(Error::input("query must not be empty"));
        }
        if let Some(c) = symbols.chars().find(|&c| c != '0' && c != '1' && c != '?') {
            return Err(Error::input(format!(
                "invalid character {c:?} in query {symbols:?}"
            )));
        }
        Ok(Query { symbols })
    }

    pub fn from_pattern(pattern: &BasisPattern) -> Self {
        Query {
            symbols: pattern.as_str().to_owned(),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn as_str(&self) -> &str {
        &self.symbols
    }

    pub fn wildcard_count(&self) -> usize {
        self.symbols.bytes().filter(|&b| b == b'?').count()
    }

    pub fn is_all_wildcard(&self) -> bool {
        self.wildcard_count() == self.len()
    }

    pub fn matches(&self, pattern: &BasisPattern) -> bool {
        self.len() == pattern.len()
            && self
                .symbols
                .bytes()
                .zip(pattern.as_str().bytes())
                .all(|(q, p)| q == b'?' || q == p)
    }

    /// Whether basis index `index` of a register of `self.len()` qubits
    /// matches this query.
    pub fn matches_index(&self, index: usize) -> bool {
        let (mask, bits) = self.match_mask();
        index & mask == bits
    }

    /// (mask, bits) such that an index matches iff `index & mask == bits`.
    fn match_mask(&self) -> (usize, usize) {
        let n = self.len();
        debug_assert!(n < usize::BITS as usize);
        let mut mask = 0usize;
        let mut bits = 0usize;
        for (q, b) in self.symbols.bytes().enumerate() {
            let offset = n - 1 - q;
            match b {
                b'0' => mask |= 1 << offset,
                b'1' => {
                    mask |= 1 << offset;
                    bits |= 1 << offset;
                }
                _ => {}
            }
        }
        (mask, bits)
    }

    /// All basis indices matching this query, ascending.
    pub fn matching_indices(&self) -> Vec<usize> {
        let n = self.len();
        let (_, base) = self.match_mask();
        let wildcard_offsets: Vec<usize> = self
            .symbols
            .bytes()
            .enumerate()
            .filter(|&(_, b)| b == b'?')
            .map(|(q, _)| n - 1 - q)
            .collect();
        let mut out = Vec::with_capacity(1 << wildcard_offsets.len());
        for combo in 0..(1usize << wildcard_offsets.len()) {
            let mut index = base;
            for (w, &offset) in wildcard_offsets.iter().enumerate() {
                if (combo >> w) & 1 == 1 {
                    index |= 1 << offset;
                }
            }
            out.push(index);
        }
        out.sort_unstable();
        out
    }

    /// Fill every wildcard with a random bit.
    pub fn resolve(&self, rng: &mut impl Rng) -> BasisPattern {
        let bits = self
            .symbols
            .chars()
            .map(|c| {
                if c == '?' {
                    if rng.random::<bool>() {
                        '1'
                    } else {
                        '0'
                    }
                } else {
                    c
                }
            })
            .collect();
        BasisPattern { bits }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbols)
    }
}

/// Conditioning for a controlled gate: (1-based qubit, required value) pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ControlSpec {
    pairs: Vec<(usize, bool)>,
}

impl ControlSpec {
    pub fn none() -> Self {
        ControlSpec::default()
    }

    pub fn new(pairs: Vec<(usize, bool)>) -> Result<Self> {
        for (i, &(q, _)) in pairs.iter().enumerate() {
            if pairs[..i].iter().any(|&(other, _)| other == q) {
                return Err(Error::input(format!("duplicate control qubit {q}")));
            }
        }
        Ok(ControlSpec { pairs })
    }

    pub fn pairs(&self) -> &[(usize, bool)] {
        &self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// (mask, required bits) over basis indices of an `n`-qubit register.
    /// `excluded` are the gate's own target qubits.
    fn masks(&self, n: usize, excluded: &[usize]) -> Result<(usize, usize)> {
        let mut mask = 0usize;
        let mut bits = 0usize;
        for &(q, value) in &self.pairs {
            if q < 1 || q > n {
                return Err(Error::input(format!(
                    "control qubit {q} out of range for {n}-qubit register"
                )));
            }
            if excluded.contains(&q) {
                return Err(Error::input(format!(
                    "control qubit {q} collides with a target qubit"
                )));
            }
            let offset = n - q;
            mask |= 1 << offset;
            if value {
                bits |= 1 << offset;
            }
        }
        Ok((mask, bits))
    }
}

/// Complex state vector of an n-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    qubit_count: usize,
    amps: Vec<Complex64>,
}

impl QuantumState {
    /// The |0…0⟩ state.
    pub fn zero(n: usize) -> Result<Self> {
        check_register_size(n)?;
        let mut amps = vec![Complex64::ZERO; 1 << n];
        amps[0] = Complex64::ONE;
        Ok(QuantumState {
            qubit_count: n,
            amps,
        })
    }

    /// The basis state named by `label`.
    pub fn basis(n: usize, label: &BasisPattern) -> Result<Self> {
        check_register_size(n)?;
        if label.len() != n {
            return Err(Error::input(format!(
                "basis label {label} has length {}, register has {n} qubits",
                label.len()
            )));
        }
        let mut amps = vec![Complex64::ZERO; 1 << n];
        amps[label.index()] = Complex64::ONE;
        Ok(QuantumState {
            qubit_count: n,
            amps,
        })
    }

    /// Build a state from raw amplitudes; the length must be a power of two
    /// and the norm must already be 1 within [`NORM_TOLERANCE`].
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::input(format!(
                "amplitude vector length {dim} is not a power of two ≥ 2"
            )));
        }
        let n = dim.trailing_zeros() as usize;
        check_register_size(n)?;
        let norm_sqr: f64 = amps.iter().map(Complex64::norm_sqr).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::input(format!(
                "amplitude vector is not normalized: Σ|c|² = {norm_sqr}"
            )));
        }
        Ok(QuantumState {
            qubit_count: n,
            amps,
        })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn dimension(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// Σ|cᵢ|², summed in ascending index order.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    /// Mean amplitude (Σcᵢ)/N, summed in ascending index order.
    pub fn mean_amplitude(&self) -> Complex64 {
        let sum: Complex64 = self.amps.iter().sum();
        sum / self.amps.len() as f64
    }

    /// `|cᵢ|²` for every basis index.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Apply a 2×2 unitary to `target` on the subspace where all `controls`
    /// hold their required values.
    pub fn apply_1q(
        &mut self,
        gate: &GateMatrix,
        target: usize,
        controls: &ControlSpec,
    ) -> Result<()> {
        if gate.dim() != 2 {
            return Err(Error::input(format!(
                "expected a 2×2 gate, got {0}×{0}",
                gate.dim()
            )));
        }
        self.check_qubit(target)?;
        let (cmask, cbits) = controls.masks(self.qubit_count, &[target])?;
        let tmask = 1usize << (self.qubit_count - target);
        let u00 = gate.entry(0, 0);
        let u01 = gate.entry(0, 1);
        let u10 = gate.entry(1, 0);
        let u11 = gate.entry(1, 1);
        for i in 0..self.amps.len() {
            if i & tmask == 0 && i & cmask == cbits {
                let j = i | tmask;
                let a = self.amps[i];
                let b = self.amps[j];
                self.amps[i] = u00 * a + u01 * b;
                self.amps[j] = u10 * a + u11 * b;
            }
        }
        Ok(())
    }

    /// Apply a 4×4 unitary to the ordered qubit pair (`qa` = high bit,
    /// `qb` = low bit) on the subspace where all `controls` hold.
    pub fn apply_2q(
        &mut self,
        gate: &GateMatrix,
        qubits: (usize, usize),
        controls: &ControlSpec,
    ) -> Result<()> {
        if gate.dim() != 4 {
            return Err(Error::input(format!(
                "expected a 4×4 gate, got {0}×{0}",
                gate.dim()
            )));
        }
        let (qa, qb) = qubits;
        self.check_qubit(qa)?;
        self.check_qubit(qb)?;
        if qa == qb {
            return Err(Error::input(format!("target qubits collide: {qa}")));
        }
        let (cmask, cbits) = controls.masks(self.qubit_count, &[qa, qb])?;
        let amask = 1usize << (self.qubit_count - qa);
        let bmask = 1usize << (self.qubit_count - qb);
        for i in 0..self.amps.len() {
            if i & amask == 0 && i & bmask == 0 && i & cmask == cbits {
                let idx = [i, i | bmask, i | amask, i | amask | bmask];
                let mut out = [Complex64::ZERO; 4];
                for (r, slot) in out.iter_mut().enumerate() {
                    for (c, &k) in idx.iter().enumerate() {
                        *slot += gate.entry(r, c) * self.amps[k];
                    }
                }
                for (&k, &v) in idx.iter().zip(out.iter()) {
                    self.amps[k] = v;
                }
            }
        }
        Ok(())
    }

    /// Total probability of observing a basis state matching `query`.
    pub fn probability_of(&self, query: &Query) -> Result<f64> {
        if query.len() != self.qubit_count {
            return Err(Error::input(format!(
                "query {query} has length {}, register has {} qubits",
                query.len(),
                self.qubit_count
            )));
        }
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|&(i, _)| query.matches_index(i))
            .map(|(_, c)| c.norm_sqr())
            .sum())
    }

    /// Observe every qubit and collapse to the observed basis state.
    pub fn measure(&mut self, rng: &mut impl Rng) -> BasisPattern {
        let cumulative = self.cumulative_weights();
        let index = draw(&cumulative, rng);
        for amp in &mut self.amps {
            *amp = Complex64::ZERO;
        }
        self.amps[index] = Complex64::ONE;
        BasisPattern::from_index(self.qubit_count, index)
    }

    /// Repeated non-collapsing Born sampling; counts sum to `shots`.
    pub fn sample(&self, shots: u64, rng: &mut impl Rng) -> Result<BTreeMap<BasisPattern, u64>> {
        if shots == 0 {
            return Err(Error::input("shot count must be at least 1"));
        }
        let cumulative = self.cumulative_weights();
        let mut histogram: BTreeMap<BasisPattern, u64> = BTreeMap::new();
        for _ in 0..shots {
            let index = draw(&cumulative, rng);
            *histogram
                .entry(BasisPattern::from_index(self.qubit_count, index))
                .or_insert(0) += 1;
        }
        Ok(histogram)
    }

    pub fn sample_seeded(&self, shots: u64, seed: u64) -> Result<BTreeMap<BasisPattern, u64>> {
        self.sample(shots, &mut seeded_rng(seed))
    }

    fn cumulative_weights(&self) -> Vec<f64> {
        let mut cumulative = Vec::with_capacity(self.amps.len());
        let mut total = 0.0;
        for amp in &self.amps {
            total += amp.norm_sqr();
            cumulative.push(total);
        }
        cumulative
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q < 1 || q > self.qubit_count {
            return Err(Error::input(format!(
                "qubit {q} out of range for {}-qubit register",
                self.qubit_count
            )));
        }
        Ok(())
    }
}

fn check_register_size(n: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::input("register needs at least one qubit"));
    }
    if n > MAX_QUBITS {
        return Err(Error::input(format!(
            "register of {n} qubits exceeds the {MAX_QUBITS}-qubit limit"
        )));
    }
    Ok(())
}

fn draw(cumulative: &[f64], rng: &mut impl Rng) -> usize {
    let total = *cumulative.last().expect("state has at least 2 amplitudes");
    let target = rng.random::<f64>() * total;
    cumulative.partition_point(|&c| c <= target).min(cumulative.len() - 1)
}
