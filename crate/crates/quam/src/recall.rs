//! Pattern recall by amplitude amplification.
//!
//! `grover_classic` is the textbook search from a uniform start. Recall from
//! a stored pattern set primes the state first: it phase-flips the states
//! matching the query, inverts about the mean, phase-flips the stored
//! patterns together with the query matches, and inverts about the mean
//! again. That double reflection leaves the two kinds of non-target states
//! with aligned phases, after which ordinary amplification rounds can run.
//! The round count defaults to the closed-form optimum from [`crate::analysis`].

use std::collections::BTreeMap;

use serde::Serialize;

use crate::analysis;
use crate::error::{Error, Result};
use crate::gates::{self, MarkSet};
use crate::state::{seeded_rng, BasisPattern, QuantumState, Query};
use crate::storage::{self, PatternSet};

/// All basis indices of an n-qubit register matching the query.
pub fn query_marks(query: &Query, n: usize) -> Result<MarkSet> {
    if query.len() != n {
        return Err(Error::input(format!(
            "query {query} has length {}, register has {n} qubits",
            query.len()
        )));
    }
    Ok(MarkSet::new(query.matching_indices()))
}

/// Total probability mass on the marked states.
pub fn mark_mass(state: &QuantumState, marks: &MarkSet) -> f64 {
    marks
        .indices()
        .iter()
        .map(|&i| state.amplitude(i).norm_sqr())
        .sum()
}

/// Run `rounds` amplification rounds (phase-flip the marks, invert about the
/// mean) in place. Returns the mark mass before the loop and after every
/// round, so the result has `rounds + 1` entries.
pub fn amplify(state: &mut QuantumState, marks: &MarkSet, rounds: u64) -> Result<Vec<f64>> {
    let mut success = Vec::with_capacity(rounds as usize + 1);
    success.push(mark_mass(state, marks));
    for _ in 0..rounds {
        gates::phase_invert(state, marks)?;
        gates::invert_about_mean(state);
        success.push(mark_mass(state, marks));
    }
    Ok(success)
}

/// Default round count for a uniform-start search: round(π/4·√N).
pub fn default_grover_rounds(state_count: u64) -> u64 {
    (std::f64::consts::FRAC_PI_4 * (state_count as f64).sqrt()).round() as u64
}

#[derive(Debug, Clone)]
pub struct GroverRun {
    pub state: QuantumState,
    /// Mark mass before the loop and after each round.
    pub success_by_round: Vec<f64>,
}

/// Textbook search: uniform superposition, then amplification rounds against
/// a single target, defaulting to round(π/4·√N) rounds.
pub fn grover_classic(
    n: usize,
    target: &BasisPattern,
    rounds: Option<u64>,
) -> Result<GroverRun> {
    let mut state = QuantumState::zero(n)?;
    if target.len() != n {
        return Err(Error::input(format!(
            "target {target} has length {}, register has {n} qubits",
            target.len()
        )));
    }
    gates::walsh_all(&mut state);
    let rounds = rounds.unwrap_or_else(|| default_grover_rounds(state.dimension() as u64));
    let marks = MarkSet::new(vec![target.index()]);
    let success_by_round = amplify(&mut state, &marks, rounds)?;
    Ok(GroverRun {
        state,
        success_by_round,
    })
}

#[derive(Debug, Clone)]
pub struct RecalledState {
    pub state: QuantumState,
    /// Amplification rounds run after the priming double-reflection.
    pub rounds: u32,
}

/// Evolve a stored superposition through recall for `query`: the priming
/// double-reflection, then the optimal (or overridden) number of
/// amplification rounds.
pub fn recall_state(
    stored: &QuantumState,
    patterns: &PatternSet,
    query: &Query,
    rounds_override: Option<u32>,
) -> Result<RecalledState> {
    let n = patterns.pattern_len();
    if query.len() != n {
        return Err(Error::input(format!(
            "query {query} has length {}, patterns have length {n}",
            query.len()
        )));
    }
    if query.is_all_wildcard() {
        return Err(Error::input("recall needs at least one fixed query bit"));
    }
    check_stored_state(stored, patterns)?;

    let marks = query_marks(query, n)?;
    let stored_marks: MarkSet = patterns.indices().into_iter().collect();
    let both = stored_marks.union(&marks);

    let mut state = stored.clone();
    gates::phase_invert(&mut state, &marks)?;
    gates::invert_about_mean(&mut state);
    gates::phase_invert(&mut state, &both)?;
    gates::invert_about_mean(&mut state);

    let rounds = match rounds_override {
        Some(rounds) => rounds,
        None => analysis::optimal_rounds(&analysis::derive_parameters(patterns, query)?)?,
    };
    amplify(&mut state, &marks, rounds as u64)?;
    Ok(RecalledState { state, rounds })
}

fn check_stored_state(stored: &QuantumState, patterns: &PatternSet) -> Result<()> {
    if stored.qubit_count() != patterns.pattern_len() {
        return Err(Error::input(format!(
            "stored state has {} qubits, patterns have length {}",
            stored.qubit_count(),
            patterns.pattern_len()
        )));
    }
    let expected = 1.0 / (patterns.len() as f64).sqrt();
    for index in patterns.indices() {
        let amp = stored.amplitude(index);
        if (amp.re - expected).abs() > 1e-9 || amp.im.abs() > 1e-9 {
            return Err(Error::input(
                "stored state is not the equal positive superposition of the pattern set",
            ));
        }
    }
    if (stored.norm_sqr() - 1.0).abs() > 1e-9 {
        return Err(Error::input("stored state is not normalized"));
    }
    Ok(())
}

/// Elementary operation tallies for one end-to-end recall.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OpCounts {
    /// Storage operations (pattern writes on the fast path, circuit
    /// operations on the circuit path).
    pub storage: u64,
    /// Phase-inversion oracle applications.
    pub oracle: u64,
    /// Inversions about the mean.
    pub diffusion: u64,
}

impl OpCounts {
    pub fn total(&self) -> u64 {
        self.storage + self.oracle + self.diffusion
    }
}

/// Everything observed in one end-to-end recall.
#[derive(Debug, Clone)]
pub struct RecallOutcome {
    pub qubit_count: usize,
    pub pattern_count: usize,
    pub query: Query,
    /// Amplification rounds run after the priming double-reflection.
    pub rounds: u32,
    /// Exact probability per basis index in the final state.
    pub distribution: Vec<f64>,
    /// Exact probability mass on query-matching states.
    pub success_probability: f64,
    /// Sampled observations that matched the query, per candidate.
    pub votes: BTreeMap<BasisPattern, u64>,
    /// Majority candidate among matching observations; ties go to the
    /// lexicographically smallest pattern.
    pub answer: Option<BasisPattern>,
    /// True when no sampled observation matched the query.
    pub recall_failed: bool,
    pub ops: OpCounts,
}

/// Store the patterns on the fast path and recall `query` from them.
pub fn recall(
    patterns: &PatternSet,
    query: &Query,
    shots: u64,
    seed: u64,
    rounds_override: Option<u32>,
) -> Result<RecallOutcome> {
    let stored = storage::store_fast(patterns)?;
    recall_with_stored(
        &stored,
        patterns,
        query,
        shots,
        seed,
        rounds_override,
        patterns.len() as u64,
    )
}

/// Recall from an already-prepared stored state. `storage_ops` is the
/// operation count of whichever storage route produced it.
#[allow(clippy::too_many_arguments)]
pub fn recall_with_stored(
    stored: &QuantumState,
    patterns: &PatternSet,
    query: &Query,
    shots: u64,
    seed: u64,
    rounds_override: Option<u32>,
    storage_ops: u64,
) -> Result<RecallOutcome> {
    let recalled = recall_state(stored, patterns, query, rounds_override)?;
    let distribution = recalled.state.probabilities();
    let success_probability = recalled.state.probability_of(query)?;

    let histogram = recalled.state.sample(shots, &mut seeded_rng(seed))?;
    let mut votes = BTreeMap::new();
    for (pattern, count) in histogram {
        if query.matches(&pattern) {
            votes.insert(pattern, count);
        }
    }
    let mut answer: Option<(&BasisPattern, u64)> = None;
    for (pattern, &count) in &votes {
        if answer.is_none_or(|(_, best)| count > best) {
            answer = Some((pattern, count));
        }
    }
    let answer = answer.map(|(pattern, _)| pattern.clone());

    let rounds = recalled.rounds as u64;
    Ok(RecallOutcome {
        qubit_count: patterns.pattern_len(),
        pattern_count: patterns.len(),
        query: query.clone(),
        rounds: recalled.rounds,
        distribution,
        success_probability,
        recall_failed: answer.is_none(),
        answer,
        votes,
        ops: OpCounts {
            storage: storage_ops,
            oracle: 2 + rounds,
            diffusion: 2 + rounds,
        },
    })
}
