//! Closed-form accuracy model for recall.
//!
//! After the priming double-reflection the state has exactly four amplitude
//! classes, determined by whether a basis state is marked by the query and
//! whether it is a stored pattern. The model tracks the class values (in
//! units of the initial stored-pattern amplitude 1/√p), their averages, the
//! success ceiling set by the within-class variance, the success probability
//! after t further amplification rounds, and the integer round count that
//! lands closest to the ceiling. Every quantity here is cross-checked against
//! full state-vector simulation in the test suites.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gates::MarkSet;
use crate::state::{Query, QuantumState, MAX_QUBITS};
use crate::storage::PatternSet;

/// Problem-size counts for one recall instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RecallParameters {
    /// Total basis states N = 2ⁿ.
    pub state_count: u64,
    /// Stored pattern count p.
    pub stored_count: u64,
    /// Marked states that are not stored patterns (r₀).
    pub marked_spurious: u64,
    /// Marked states that are stored patterns (r₁).
    pub marked_stored: u64,
}

impl RecallParameters {
    pub fn new(
        state_count: u64,
        stored_count: u64,
        marked_spurious: u64,
        marked_stored: u64,
    ) -> Result<Self> {
        if stored_count == 0 || stored_count > state_count {
            return Err(Error::input(format!(
                "stored count {stored_count} out of range for {state_count} states"
            )));
        }
        if marked_stored > stored_count {
            return Err(Error::input(format!(
                "marked stored count {marked_stored} exceeds stored count {stored_count}"
            )));
        }
        if marked_spurious + marked_stored > state_count {
            return Err(Error::input("marked counts exceed the state count"));
        }
        Ok(RecallParameters {
            state_count,
            stored_count,
            marked_spurious,
            marked_stored,
        })
    }

    pub fn marked_total(&self) -> u64 {
        self.marked_spurious + self.marked_stored
    }

    fn n(&self) -> f64 {
        self.state_count as f64
    }
}

/// Count the marked/stored overlaps for a pattern set and query.
pub fn derive_parameters(patterns: &PatternSet, query: &Query) -> Result<RecallParameters> {
    let n = patterns.pattern_len();
    if query.len() != n {
        return Err(Error::input(format!(
            "query {query} has length {}, patterns have length {n}",
            query.len()
        )));
    }
    if n > MAX_QUBITS {
        return Err(Error::input(format!(
            "pattern length {n} exceeds the {MAX_QUBITS}-qubit register limit"
        )));
    }
    let marked_total = 1u64 << query.wildcard_count();
    let marked_stored = patterns.iter().filter(|p| query.matches(p)).count() as u64;
    RecallParameters::new(
        1u64 << n,
        patterns.len() as u64,
        marked_total - marked_stored,
        marked_stored,
    )
}

/// The four class amplitudes right after the priming double-reflection, in
/// units of the initial stored-pattern amplitude 1/√p, together with the two
/// coefficients they are built from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FirstRound {
    pub coeff_a: f64,
    pub coeff_b: f64,
    pub marked_spurious: f64,
    pub marked_stored: f64,
    pub unmarked_spurious: f64,
    pub unmarked_stored: f64,
}

pub fn first_round(params: &RecallParameters) -> FirstRound {
    let n = params.n();
    let p = params.stored_count as f64;
    let r0 = params.marked_spurious as f64;
    let r1 = params.marked_stored as f64;
    let a = 2.0 * (p - 2.0 * r1) / n;
    let b = 4.0 * (p + r0) / n;
    FirstRound {
        coeff_a: a,
        coeff_b: b,
        marked_spurious: 4.0 * a - a * b,
        marked_stored: 4.0 * a - a * b + 1.0,
        unmarked_spurious: 2.0 * a - a * b,
        unmarked_stored: 4.0 * a - a * b - 1.0,
    }
}

/// Average amplitude of the marked and unmarked classes after the priming
/// double-reflection, in units of 1/√p.
pub fn class_averages(params: &RecallParameters) -> Result<(f64, f64)> {
    let marked = params.marked_total();
    if marked == 0 {
        return Err(Error::input("no marked states: class averages undefined"));
    }
    if marked == params.state_count {
        return Err(Error::input(
            "every state is marked: unmarked average undefined",
        ));
    }
    let n = params.n();
    let p = params.stored_count as f64;
    let r0 = params.marked_spurious as f64;
    let r1 = params.marked_stored as f64;
    let a = 2.0 * (p - 2.0 * r1) / n;
    let b = 4.0 * (p + r0) / n;
    let marked_mean = 4.0 * a - a * b + r1 / (r0 + r1);
    let unmarked_mean = -a * b + 2.0 * a * (n + p - r0 - 2.0 * r1) / (n - r0 - r1)
        - (p - r1) / (n - r0 - r1);
    Ok((marked_mean, unmarked_mean))
}

fn variance_floor(params: &RecallParameters) -> Result<f64> {
    let fr = first_round(params);
    let (_, unmarked_mean) = class_averages(params)?;
    let p = params.stored_count as f64;
    let spurious = (params.state_count - params.stored_count - params.marked_spurious) as f64;
    let stored = (params.stored_count - params.marked_stored) as f64;
    Ok((spurious * (fr.unmarked_spurious - unmarked_mean).powi(2)
        + stored * (fr.unmarked_stored - unmarked_mean).powi(2))
        / p)
}

/// Success ceiling: one minus the within-class variance of the unmarked
/// amplitudes, which no number of amplification rounds can remove.
pub fn max_success(params: &RecallParameters) -> Result<f64> {
    Ok((1.0 - variance_floor(params)?).clamp(0.0, 1.0))
}

/// Success ceiling for amplifying `desired` out of an arbitrary normalized
/// starting state: one minus the summed squared deviation of the non-desired
/// amplitudes from their mean.
pub fn biron_bound(state: &QuantumState, desired: &MarkSet) -> f64 {
    let others: Vec<Complex64> = state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|&(i, _)| !desired.contains(i))
        .map(|(_, &a)| a)
        .collect();
    if others.is_empty() {
        return 1.0;
    }
    let mean = others.iter().sum::<Complex64>() / others.len() as f64;
    1.0 - others.iter().map(|&a| (a - mean).norm_sqr()).sum::<f64>()
}

/// Advance the class averages through `rounds` amplification rounds (phase
/// flip of the marked class, then inversion about the mean), simultaneously.
pub fn evolve_averages(
    params: &RecallParameters,
    marked_mean: f64,
    unmarked_mean: f64,
    rounds: u64,
) -> (f64, f64) {
    let n = params.n();
    let r = params.marked_total() as f64;
    let (mut k, mut l) = (marked_mean, unmarked_mean);
    for _ in 0..rounds {
        let next_k = (1.0 - 2.0 * r / n) * k + 2.0 * (n - r) / n * l;
        let next_l = (n - 2.0 * r) / n * l - 2.0 * r / n * k;
        k = next_k;
        l = next_l;
    }
    (k, l)
}

/// Success probability after `rounds` amplification rounds beyond the
/// priming double-reflection.
pub fn success_at(params: &RecallParameters, rounds: u64) -> Result<f64> {
    let (marked_mean, unmarked_mean) = class_averages(params)?;
    let (_, l) = evolve_averages(params, marked_mean, unmarked_mean, rounds);
    let unmarked = (params.state_count - params.marked_total()) as f64;
    Ok(1.0 - variance_floor(params)? - unmarked * l * l / params.stored_count as f64)
}

/// The integer round count whose success probability is closest to the
/// ceiling: the rounded zero crossing of the unmarked-class average.
pub fn optimal_rounds(params: &RecallParameters) -> Result<u32> {
    let r = params.marked_total();
    if r == 0 || r == params.state_count {
        return Err(Error::input(format!(
            "round count undefined for {r} marked states out of {}",
            params.state_count
        )));
    }
    let (marked_mean, unmarked_mean) = class_averages(params)?;
    let n = params.n();
    let r = r as f64;
    let angle = if unmarked_mean == 0.0 {
        if marked_mean >= 0.0 {
            std::f64::consts::FRAC_PI_2
        } else {
            -std::f64::consts::FRAC_PI_2
        }
    } else {
        (marked_mean / unmarked_mean * (r / (n - r)).sqrt()).atan()
    };
    let raw = (std::f64::consts::FRAC_PI_2 - angle) / (1.0 - 2.0 * r / n).acos();
    Ok(raw.round().max(0.0) as u32)
}

/// Number of rounds a sweep tabulates: ⌈(π/2)·√N⌉, which covers at least one
/// full oscillation period for any non-empty mark set.
pub fn sweep_horizon(state_count: u64) -> u64 {
    (std::f64::consts::FRAC_PI_2 * (state_count as f64).sqrt()).ceil() as u64
}

/// Everything the model says about one recall instance.
#[derive(Debug, Clone, Serialize)]
pub struct TheoryReport {
    pub state_count: u64,
    pub stored_count: u64,
    pub marked_spurious: u64,
    pub marked_stored: u64,
    pub coeff_a: f64,
    pub coeff_b: f64,
    pub amp_marked_spurious: f64,
    pub amp_marked_stored: f64,
    pub amp_unmarked_spurious: f64,
    pub amp_unmarked_stored: f64,
    pub mean_marked: f64,
    pub mean_unmarked: f64,
    pub max_success: f64,
    pub max_success_clamped: bool,
    pub optimal_rounds: u32,
    /// Success probability at round t, for t = 0 ..= sweep horizon.
    pub success_by_round: Vec<f64>,
}

pub fn theory_report(patterns: &PatternSet, query: &Query) -> Result<TheoryReport> {
    let params = derive_parameters(patterns, query)?;
    let fr = first_round(&params);
    let (mean_marked, mean_unmarked) = class_averages(&params)?;
    let raw_max = 1.0 - variance_floor(&params)?;
    let optimal = optimal_rounds(&params)?;
    let horizon = sweep_horizon(params.state_count);
    let success_by_round = (0..=horizon)
        .map(|t| success_at(&params, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(TheoryReport {
        state_count: params.state_count,
        stored_count: params.stored_count,
        marked_spurious: params.marked_spurious,
        marked_stored: params.marked_stored,
        coeff_a: fr.coeff_a,
        coeff_b: fr.coeff_b,
        amp_marked_spurious: fr.marked_spurious,
        amp_marked_stored: fr.marked_stored,
        amp_unmarked_spurious: fr.unmarked_spurious,
        amp_unmarked_stored: fr.unmarked_stored,
        mean_marked,
        mean_unmarked,
        max_success: raw_max.clamp(0.0, 1.0),
        max_success_clamped: !(0.0..=1.0).contains(&raw_max),
        optimal_rounds: optimal,
        success_by_round,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u64, p: u64, r0: u64, r1: u64) -> RecallParameters {
        RecallParameters::new(n, p, r0, r1).unwrap()
    }

    fn six_pattern_set() -> PatternSet {
        PatternSet::from_strings(["0000", "0011", "0110", "1001", "1100", "1111"]).unwrap()
    }

    #[test]
    fn derive_counts_marked_overlaps() {
        let p = derive_parameters(&six_pattern_set(), &Query::new("011?").unwrap()).unwrap();
        assert_eq!(p, params(16, 6, 1, 1));

        let p = derive_parameters(&six_pattern_set(), &Query::new("0110").unwrap()).unwrap();
        assert_eq!(p, params(16, 6, 0, 1));

        let p = derive_parameters(&six_pattern_set(), &Query::new("????").unwrap()).unwrap();
        assert_eq!(p, params(16, 6, 10, 6));
    }

    #[test]
    fn first_round_matches_hand_computed_values() {
        let fr = first_round(&params(16, 6, 1, 1));
        assert_eq!(fr.coeff_a, 0.5);
        assert_eq!(fr.coeff_b, 1.75);
        assert_eq!(fr.marked_spurious, 1.125);
        assert_eq!(fr.marked_stored, 2.125);
        assert_eq!(fr.unmarked_spurious, 0.125);
        assert_eq!(fr.unmarked_stored, 0.125);

        let fr = first_round(&params(16, 6, 0, 1));
        assert_eq!(fr.coeff_a, 0.5);
        assert_eq!(fr.coeff_b, 1.5);
        assert_eq!(fr.marked_stored, 2.25);
        assert_eq!(fr.unmarked_spurious, 0.25);
        assert_eq!(fr.unmarked_stored, 0.25);

        // Stored count equal to twice the marked stored count collapses the
        // spurious classes to zero.
        let fr = first_round(&params(16, 2, 0, 1));
        assert_eq!(fr.coeff_a, 0.0);
        assert_eq!(fr.marked_spurious, 0.0);
        assert_eq!(fr.unmarked_spurious, 0.0);
    }

    #[test]
    fn class_averages_match_hand_computed_values() {
        let (k, l) = class_averages(&params(16, 6, 1, 1)).unwrap();
        assert_eq!(k, 1.625);
        assert!((l - 0.125).abs() < 1e-15);

        let (k, l) = class_averages(&params(16, 6, 0, 1)).unwrap();
        assert_eq!(k, 2.25);
        assert!((l - 0.25).abs() < 1e-15);

        // With every pattern stored there is a single unmarked class.
        let p = params(16, 16, 0, 1);
        let fr = first_round(&p);
        let (_, l) = class_averages(&p).unwrap();
        assert!((l - fr.unmarked_stored).abs() < 1e-12);

        assert!(class_averages(&params(16, 6, 0, 0)).is_err());
        assert!(class_averages(&params(4, 2, 2, 2)).is_err());
    }

    #[test]
    fn max_success_is_one_when_unmarked_classes_coincide() {
        assert!((max_success(&params(16, 6, 1, 1)).unwrap() - 1.0).abs() < 1e-15);
        assert!((max_success(&params(16, 6, 0, 1)).unwrap() - 1.0).abs() < 1e-15);
        // Distinct unmarked class values leave a variance floor.
        assert!(max_success(&params(16, 5, 0, 1)).unwrap() < 1.0);
    }

    #[test]
    fn biron_bound_is_exactly_one_for_uniform_start() {
        let uniform =
            QuantumState::from_amplitudes(vec![Complex64::new(0.25, 0.0); 16]).unwrap();
        assert_eq!(biron_bound(&uniform, &MarkSet::new(vec![6])), 1.0);
        // Desired set covering every state leaves nothing to miss.
        assert_eq!(
            biron_bound(&uniform, &MarkSet::new((0..16).collect())),
            1.0
        );
    }

    #[test]
    fn biron_bound_on_sparse_start_is_four_ninths() {
        let stored = crate::storage::store_fast(&six_pattern_set()).unwrap();
        let bound = biron_bound(&stored, &MarkSet::new(vec![6]));
        assert!((bound - 4.0 / 9.0).abs() < 1e-12);
        assert!((bound - 0.44).abs() < 0.01);
    }

    #[test]
    fn evolve_identity_at_zero_rounds() {
        let p = params(16, 6, 1, 1);
        assert_eq!(evolve_averages(&p, 1.625, 0.125, 0), (1.625, 0.125));
    }

    #[test]
    fn evolve_one_round_matches_hand_computation() {
        let p = params(16, 6, 1, 1);
        let (k, l) = evolve_averages(&p, 1.625, 0.125, 1);
        assert!((k - 1.4375).abs() < 1e-15);
        assert!((l + 0.3125).abs() < 1e-15);
    }

    #[test]
    fn evolve_with_half_marked_flips_sign_every_two_rounds() {
        let p = params(16, 8, 4, 4);
        let (k, l) = evolve_averages(&p, 0.7, 0.3, 2);
        assert!((k + 0.7).abs() < 1e-12);
        assert!((l + 0.3).abs() < 1e-12);
    }

    #[test]
    fn success_at_matches_known_instances() {
        let p = params(16, 6, 1, 1);
        assert!((success_at(&p, 0).unwrap() - 370.0 / 384.0).abs() < 1e-12);

        let p = params(16, 6, 0, 1);
        assert!((success_at(&p, 1).unwrap() - 1521.0 / 1536.0).abs() < 1e-12);
    }

    #[test]
    fn success_never_exceeds_the_ceiling() {
        for &(n, p, r0, r1) in &[(16, 6, 1, 1), (16, 5, 0, 1), (64, 10, 3, 2), (256, 40, 0, 4)] {
            let params = params(n, p, r0, r1);
            let ceiling = max_success(&params).unwrap();
            for t in 0..=sweep_horizon(n) {
                assert!(success_at(&params, t).unwrap() <= ceiling + 1e-9);
            }
        }
    }

    #[test]
    fn optimal_rounds_matches_known_instances() {
        assert_eq!(optimal_rounds(&params(16, 6, 1, 1)).unwrap(), 0);
        assert_eq!(optimal_rounds(&params(16, 6, 0, 1)).unwrap(), 1);
        let t = optimal_rounds(&params(1 << 16, 1 << 14, 2, 2)).unwrap();
        assert!(t < 1000, "round count {t}");
        assert!(optimal_rounds(&params(16, 6, 0, 0)).is_err());
        assert!(optimal_rounds(&params(4, 2, 2, 2)).is_err());
    }

    #[test]
    fn report_collects_consistent_fields() {
        let report = theory_report(&six_pattern_set(), &Query::new("011?").unwrap()).unwrap();
        assert_eq!(report.optimal_rounds, 0);
        assert!((report.max_success - 1.0).abs() < 1e-12);
        assert!(!report.max_success_clamped);
        assert!((report.success_by_round[0] - 370.0 / 384.0).abs() < 1e-12);
        assert_eq!(
            report.success_by_round.len() as u64,
            sweep_horizon(16) + 1
        );
        for &p in &report.success_by_round {
            assert!(p <= report.max_success + 1e-9);
        }
    }
}
