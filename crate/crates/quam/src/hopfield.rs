//! Classical Hopfield associative memory baseline.
//!
//! Hebbian weights, asynchronous sign updates in seeded random order, and a
//! capacity sweep reporting the exact-recall fraction as the pattern count
//! grows. Exact recall of every bit is the success criterion, matching the
//! exact-completion semantics of the quantum memory it is compared against.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::{seeded_rng, BasisPattern, Query};
use crate::storage::PatternSet;

/// A fully connected network with symmetric weights and zero diagonal.
#[derive(Debug, Clone)]
pub struct HopfieldNet {
    size: usize,
    weights: Vec<f64>,
}

fn to_spins(pattern: &BasisPattern) -> Vec<i8> {
    pattern
        .as_str()
        .bytes()
        .map(|b| if b == b'1' { 1 } else { -1 })
        .collect()
}

fn to_pattern(spins: &[i8]) -> BasisPattern {
    let bits: String = spins.iter().map(|&s| if s > 0 { '1' } else { '0' }).collect();
    BasisPattern::new(bits).expect("spin vector is non-empty")
}

/// Hebbian training: w_ij = (1/n)·Σ_p x_i x_j off the diagonal.
pub fn train(patterns: &PatternSet) -> HopfieldNet {
    let n = patterns.pattern_len();
    let mut weights = vec![0.0; n * n];
    for pattern in patterns.iter() {
        let spins = to_spins(pattern);
        for i in 0..n {
            for j in (i + 1)..n {
                let w = f64::from(spins[i] * spins[j]) / n as f64;
                weights[i * n + j] += w;
                weights[j * n + i] += w;
            }
        }
    }
    HopfieldNet { size: n, weights }
}

/// Result of letting the network settle from a probe.
#[derive(Debug, Clone)]
pub struct SettleResult {
    pub pattern: BasisPattern,
    /// False when the sweep budget ran out before a fixed point.
    pub converged: bool,
    pub sweeps: u32,
}

impl HopfieldNet {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.size + j]
    }

    fn local_field(&self, spins: &[i8], i: usize) -> f64 {
        let row = &self.weights[i * self.size..(i + 1) * self.size];
        row.iter()
            .zip(spins)
            .map(|(&w, &s)| w * f64::from(s))
            .sum()
    }

    /// −½·xᵀWx for a ±1 spin vector.
    pub fn energy(&self, spins: &[i8]) -> f64 {
        let mut total = 0.0;
        for i in 0..self.size {
            total += f64::from(spins[i]) * self.local_field(spins, i);
        }
        -0.5 * total
    }

    /// Update unit `i` to the sign of its local field (zero keeps the
    /// current value). Returns true when the spin changed.
    pub fn update_unit(&self, spins: &mut [i8], i: usize) -> bool {
        let field = self.local_field(spins, i);
        let next = if field > 0.0 {
            1
        } else if field < 0.0 {
            -1
        } else {
            spins[i]
        };
        let changed = next != spins[i];
        spins[i] = next;
        changed
    }

    /// Settle from `probe` (wildcards filled randomly) by asynchronous
    /// updates in a fresh random order each sweep, until a full sweep
    /// changes nothing or the sweep budget runs out.
    pub fn recall(&self, probe: &Query, max_sweeps: u32, rng: &mut impl Rng) -> Result<SettleResult> {
        if probe.len() != self.size {
            return Err(Error::input(format!(
                "probe has length {}, network has {} units",
                probe.len(),
                self.size
            )));
        }
        let mut spins = to_spins(&probe.resolve(rng));
        let mut order: Vec<usize> = (0..self.size).collect();
        for sweep in 1..=max_sweeps {
            order.shuffle(rng);
            let mut changed = false;
            for &i in &order {
                changed |= self.update_unit(&mut spins, i);
            }
            if !changed {
                return Ok(SettleResult {
                    pattern: to_pattern(&spins),
                    converged: true,
                    sweeps: sweep,
                });
            }
        }
        Ok(SettleResult {
            pattern: to_pattern(&spins),
            converged: false,
            sweeps: max_sweeps,
        })
    }
}

/// One row of a capacity sweep.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CapacityPoint {
    pub pattern_count: usize,
    pub recall_fraction: f64,
}

/// For each pattern count, train on random ±1 patterns and report the
/// fraction of stored patterns recalled exactly from an unperturbed probe.
pub fn capacity_sweep(
    n: usize,
    pattern_counts: &[usize],
    trials: u64,
    seed: u64,
) -> Result<Vec<CapacityPoint>> {
    if n == 0 {
        return Err(Error::input("network needs at least one unit"));
    }
    if trials == 0 {
        return Err(Error::input("trial count must be at least 1"));
    }
    let mut rng = seeded_rng(seed);
    let mut table = Vec::with_capacity(pattern_counts.len());
    for &m in pattern_counts {
        if m == 0 {
            return Err(Error::input("pattern count must be at least 1"));
        }
        let mut recalled = 0u64;
        for _ in 0..trials {
            let patterns = random_pattern_set(n, m, &mut rng);
            let net = train(&patterns);
            for pattern in patterns.iter() {
                let probe = Query::from_pattern(pattern);
                let settled = net.recall(&probe, 50, &mut rng)?;
                if settled.converged && settled.pattern == *pattern {
                    recalled += 1;
                }
            }
        }
        table.push(CapacityPoint {
            pattern_count: m,
            recall_fraction: recalled as f64 / (m as u64 * trials) as f64,
        });
    }
    Ok(table)
}

/// Random distinct patterns; rejection-samples duplicates.
pub fn random_pattern_set(n: usize, m: usize, rng: &mut impl Rng) -> PatternSet {
    assert!(n >= 64 || m <= 1 << n.min(63), "more patterns than bit strings");
    let mut seen = std::collections::BTreeSet::new();
    while seen.len() < m {
        let bits: String = (0..n)
            .map(|_| if rng.random::<bool>() { '1' } else { '0' })
            .collect();
        seen.insert(bits);
    }
    PatternSet::from_strings(seen).expect("distinct patterns of uniform length")
}
