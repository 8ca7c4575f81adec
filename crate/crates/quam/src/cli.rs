//! Command implementations and output rendering for the `quam` binary.
//!
//! Kept separate from argument parsing so every command can run in-process:
//! each command takes a [`RunConfig`] and returns the rendered output. Output
//! is byte-identical for identical inputs, seeds, and flags; lines end with
//! LF.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::analysis::{self, TheoryReport};
use crate::error::{Error, Result};
use crate::gates;
use crate::recall::{self, OpCounts, RecallOutcome};
use crate::state::{QuantumState, Query};
use crate::storage::{self, PatternSet, MAX_CIRCUIT_QUBITS};
use crate::{hopfield, state};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Store,
    Recall,
    Theory,
    Sweep,
    Hopfield,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StorageMethod {
    #[default]
    Fast,
    Circuit,
}

impl StorageMethod {
    pub fn name(self) -> &'static str {
        match self {
            StorageMethod::Fast => "fast",
            StorageMethod::Circuit => "circuit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

/// One fully resolved command invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub patterns: Option<PathBuf>,
    pub query: Option<String>,
    pub shots: u64,
    pub seed: u64,
    /// Override of the amplification round count.
    pub iterations: Option<u32>,
    pub method: StorageMethod,
    pub format: OutputFormat,
    /// Sweep from a uniform start instead of a stored pattern set.
    pub grover: bool,
    /// Register size for uniform-start sweeps.
    pub register_size: Option<usize>,
    pub net_size: usize,
    pub pattern_counts: Vec<usize>,
    pub trials: u64,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            patterns: None,
            query: None,
            shots: 1000,
            seed: 0,
            iterations: None,
            method: StorageMethod::Fast,
            format: OutputFormat::Text,
            grover: false,
            register_size: None,
            net_size: 16,
            pattern_counts: vec![1, 2, 3, 4, 6, 8, 12, 16],
            trials: 50,
        }
    }
}

/// Parse a pattern file: one pattern per line, blank lines and lines starting
/// with '#' ignored, CR tolerated.
pub fn parse_pattern_file(path: &Path) -> Result<PatternSet> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::data(format!("cannot read {}: {e}", path.display())))?;
    parse_patterns(&text)
}

/// Parse pattern-file text.
pub fn parse_patterns(text: &str) -> Result<PatternSet> {
    let mut patterns: Vec<&str> = Vec::new();
    let mut first_seen: BTreeMap<&str, usize> = BTreeMap::new();
    let mut expected_len: Option<(usize, usize)> = None;
    for (index, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = index + 1;
        if let Some(c) = line.chars().find(|&c| c != '0' && c != '1') {
            return Err(Error::data(format!(
                "line {lineno}: invalid character {c:?} in pattern {line:?}"
            )));
        }
        match expected_len {
            None => expected_len = Some((line.len(), lineno)),
            Some((len, first_line)) if len != line.len() => {
                return Err(Error::data(format!(
                    "line {lineno}: pattern length {} differs from length {len} on line {first_line}",
                    line.len()
                )));
            }
            _ => {}
        }
        if let Some(first_line) = first_seen.insert(line, lineno) {
            return Err(Error::data(format!(
                "line {lineno}: duplicate pattern {line:?} (first on line {first_line})"
            )));
        }
        patterns.push(line);
    }
    if patterns.is_empty() {
        return Err(Error::data("pattern file contains no patterns"));
    }
    PatternSet::from_strings(patterns)
}

/// Run one command and return its rendered output.
pub fn execute(cfg: &RunConfig) -> Result<String> {
    match cfg.command {
        Command::Store => cmd_store(cfg),
        Command::Recall => cmd_recall(cfg),
        Command::Theory => cmd_theory(cfg),
        Command::Sweep => cmd_sweep(cfg),
        Command::Hopfield => cmd_hopfield(cfg),
    }
}

fn require_patterns(cfg: &RunConfig) -> Result<PatternSet> {
    let path = cfg
        .patterns
        .as_ref()
        .ok_or_else(|| Error::input("--patterns is required"))?;
    parse_pattern_file(path)
}

fn require_query(cfg: &RunConfig, n: usize) -> Result<Query> {
    let raw = cfg
        .query
        .as_ref()
        .ok_or_else(|| Error::input("--query is required"))?;
    let query = Query::new(raw.clone())?;
    if query.len() != n {
        return Err(Error::input(format!(
            "query {query} has length {}, patterns have length {n}",
            query.len()
        )));
    }
    Ok(query)
}

/// Build the stored state along the configured route, returning it with the
/// storage operation count.
fn prepare_storage(patterns: &PatternSet, method: StorageMethod) -> Result<(QuantumState, u64)> {
    match method {
        StorageMethod::Fast => Ok((storage::store_fast(patterns)?, patterns.len() as u64)),
        StorageMethod::Circuit => {
            if patterns.pattern_len() > MAX_CIRCUIT_QUBITS {
                return Err(Error::input(format!(
                    "circuit method supports at most {MAX_CIRCUIT_QUBITS}-bit patterns, got {}",
                    patterns.pattern_len()
                )));
            }
            let run = storage::store_circuit(patterns)?;
            Ok((storage::reduce_registers(&run.state)?, run.op_count))
        }
    }
}

// ---------------------------------------------------------------- store

#[derive(Serialize)]
struct StoreReport {
    n: usize,
    m: usize,
    method: &'static str,
    storage_ops: u64,
    distribution: BTreeMap<String, f64>,
}

fn cmd_store(cfg: &RunConfig) -> Result<String> {
    let patterns = require_patterns(cfg)?;
    let (stored, storage_ops) = prepare_storage(&patterns, cfg.method)?;
    let report = StoreReport {
        n: patterns.pattern_len(),
        m: patterns.len(),
        method: cfg.method.name(),
        storage_ops,
        distribution: support_map(&stored.probabilities(), patterns.pattern_len()),
    };
    Ok(match cfg.format {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => {
            let mut out = String::from("pattern,probability\n");
            for (pattern, p) in &report.distribution {
                let _ = writeln!(out, "{pattern},{p}");
            }
            out
        }
        OutputFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "stored {} patterns of length {}", report.m, report.n);
            let _ = writeln!(out, "method:      {}", report.method);
            let _ = writeln!(out, "storage ops: {}", report.storage_ops);
            let _ = writeln!(out, "amplitude per pattern: {:.6}", (1.0 / (report.m as f64).sqrt()));
            for (pattern, p) in &report.distribution {
                let _ = writeln!(out, "  {pattern}  {p:.6}");
            }
            out
        }
    })
}

// --------------------------------------------------------------- recall

#[derive(Serialize)]
struct RecallReport<'a> {
    n: usize,
    m: usize,
    query: &'a str,
    #[serde(rename = "T")]
    rounds: u32,
    p_max: f64,
    p_success: f64,
    distribution: BTreeMap<String, f64>,
    answer: Option<String>,
    votes: BTreeMap<String, u64>,
    op_counts: OpCounts,
    recall_failed: bool,
    shots: u64,
    seed: u64,
    method: &'static str,
}

fn cmd_recall(cfg: &RunConfig) -> Result<String> {
    if cfg.shots == 0 {
        return Err(Error::input("--shots must be at least 1"));
    }
    let patterns = require_patterns(cfg)?;
    let query = require_query(cfg, patterns.pattern_len())?;
    let (stored, storage_ops) = prepare_storage(&patterns, cfg.method)?;
    let outcome = recall::recall_with_stored(
        &stored,
        &patterns,
        &query,
        cfg.shots,
        cfg.seed,
        cfg.iterations,
        storage_ops,
    )?;
    let theory = analysis::theory_report(&patterns, &query)?;
    let report = RecallReport {
        n: outcome.qubit_count,
        m: outcome.pattern_count,
        query: query.as_str(),
        rounds: outcome.rounds,
        p_max: theory.max_success,
        p_success: outcome.success_probability,
        distribution: support_map(&outcome.distribution, outcome.qubit_count),
        answer: outcome.answer.as_ref().map(|a| a.as_str().to_owned()),
        votes: outcome
            .votes
            .iter()
            .map(|(pattern, &count)| (pattern.as_str().to_owned(), count))
            .collect(),
        op_counts: outcome.ops,
        recall_failed: outcome.recall_failed,
        shots: cfg.shots,
        seed: cfg.seed,
        method: cfg.method.name(),
    };
    Ok(match cfg.format {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => recall_csv(&report),
        OutputFormat::Text => recall_text(&report, &outcome),
    })
}

fn recall_csv(report: &RecallReport<'_>) -> String {
    let mut out = String::from("pattern,probability,votes\n");
    for (pattern, p) in &report.distribution {
        let votes = report.votes.get(pattern).copied().unwrap_or(0);
        let _ = writeln!(out, "{pattern},{p},{votes}");
    }
    out
}

fn recall_text(report: &RecallReport<'_>, outcome: &RecallOutcome) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "recall {} over {} patterns (n={})",
        report.query, report.m, report.n
    );
    let _ = writeln!(out, "method:     {}", report.method);
    let _ = writeln!(out, "rounds (T): {}", report.rounds);
    let _ = writeln!(out, "p_max:      {:.6}", report.p_max);
    let _ = writeln!(out, "p_success:  {:.6}", report.p_success);
    match &report.answer {
        Some(answer) => {
            let _ = writeln!(out, "answer:     {answer}");
        }
        None => {
            let _ = writeln!(out, "answer:     (recall failed: no matching observation)");
        }
    }
    let votes = report
        .votes
        .iter()
        .map(|(p, c)| format!("{p}={c}"))
        .collect::<Vec<_>>()
        .join(" ");
    let _ = writeln!(out, "votes:      {votes}");
    let _ = writeln!(
        out,
        "op counts:  storage={} oracle={} diffusion={}",
        report.op_counts.storage, report.op_counts.oracle, report.op_counts.diffusion
    );
    let _ = writeln!(out, "top outcomes:");
    let mut ranked: Vec<(usize, f64)> = outcome
        .distribution
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, p)| p > 1e-15)
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    for (index, p) in ranked.into_iter().take(8) {
        let pattern = state::BasisPattern::from_index(outcome.qubit_count, index);
        let _ = writeln!(out, "  {pattern}  {p:.6}");
    }
    out
}

// --------------------------------------------------------------- theory

fn cmd_theory(cfg: &RunConfig) -> Result<String> {
    let patterns = require_patterns(cfg)?;
    let query = require_query(cfg, patterns.pattern_len())?;
    let report = analysis::theory_report(&patterns, &query)?;
    Ok(match cfg.format {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => theory_csv(&report),
        OutputFormat::Text => theory_text(&report),
    })
}

fn theory_csv(report: &TheoryReport) -> String {
    let mut out = String::from("key,value\n");
    let _ = writeln!(out, "n_states,{}", report.state_count);
    let _ = writeln!(out, "stored,{}", report.stored_count);
    let _ = writeln!(out, "marked_spurious,{}", report.marked_spurious);
    let _ = writeln!(out, "marked_stored,{}", report.marked_stored);
    let _ = writeln!(out, "coeff_a,{}", report.coeff_a);
    let _ = writeln!(out, "coeff_b,{}", report.coeff_b);
    let _ = writeln!(out, "amp_marked_spurious,{}", report.amp_marked_spurious);
    let _ = writeln!(out, "amp_marked_stored,{}", report.amp_marked_stored);
    let _ = writeln!(out, "amp_unmarked_spurious,{}", report.amp_unmarked_spurious);
    let _ = writeln!(out, "amp_unmarked_stored,{}", report.amp_unmarked_stored);
    let _ = writeln!(out, "mean_marked,{}", report.mean_marked);
    let _ = writeln!(out, "mean_unmarked,{}", report.mean_unmarked);
    let _ = writeln!(out, "p_max,{}", report.max_success);
    let _ = writeln!(out, "p_max_clamped,{}", report.max_success_clamped);
    let _ = writeln!(out, "T,{}", report.optimal_rounds);
    for (t, p) in report.success_by_round.iter().enumerate() {
        let _ = writeln!(out, "success_round_{t},{p}");
    }
    out
}

fn theory_text(report: &TheoryReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "states: {}   stored: {}   marked: {} spurious + {} stored",
        report.state_count, report.stored_count, report.marked_spurious, report.marked_stored
    );
    let _ = writeln!(
        out,
        "coefficients: a={:.6} b={:.6}",
        report.coeff_a, report.coeff_b
    );
    let _ = writeln!(
        out,
        "class amplitudes (units of 1/sqrt(p)): k0={:.6} k1={:.6} l0={:.6} l1={:.6}",
        report.amp_marked_spurious,
        report.amp_marked_stored,
        report.amp_unmarked_spurious,
        report.amp_unmarked_stored
    );
    let _ = writeln!(
        out,
        "class means: marked={:.6} unmarked={:.6}",
        report.mean_marked, report.mean_unmarked
    );
    let _ = writeln!(
        out,
        "p_max: {:.6}{}",
        report.max_success,
        if report.max_success_clamped { " (clamped)" } else { "" }
    );
    let _ = writeln!(out, "optimal rounds (T): {}", report.optimal_rounds);
    let _ = writeln!(out, "success by round:");
    let shown = report.success_by_round.len().min(12);
    for (t, p) in report.success_by_round.iter().take(shown).enumerate() {
        let _ = writeln!(out, "  t={t}  {p:.6}");
    }
    if shown < report.success_by_round.len() {
        let _ = writeln!(
            out,
            "  ({} further rounds omitted)",
            report.success_by_round.len() - shown
        );
    }
    out
}

// ---------------------------------------------------------------- sweep

#[derive(Serialize)]
struct SweepRow {
    t: u64,
    p_success: f64,
}

fn cmd_sweep(cfg: &RunConfig) -> Result<String> {
    let curve: Vec<f64> = if cfg.grover {
        let n = cfg
            .register_size
            .ok_or_else(|| Error::input("--grover sweeps need --n"))?;
        let raw = cfg
            .query
            .as_ref()
            .ok_or_else(|| Error::input("--query is required"))?;
        let query = Query::new(raw.clone())?;
        if query.len() != n {
            return Err(Error::input(format!(
                "query {query} has length {}, register has {n} qubits",
                query.len()
            )));
        }
        let mut state = QuantumState::zero(n)?;
        gates::walsh_all(&mut state);
        let marks = recall::query_marks(&query, n)?;
        let horizon = analysis::sweep_horizon(state.dimension() as u64);
        recall::amplify(&mut state, &marks, horizon)?
    } else {
        let patterns = require_patterns(cfg)?;
        let query = require_query(cfg, patterns.pattern_len())?;
        let stored = storage::store_fast(&patterns)?;
        let primed = recall::recall_state(&stored, &patterns, &query, Some(0))?;
        let marks = recall::query_marks(&query, patterns.pattern_len())?;
        let mut state = primed.state;
        let horizon = analysis::sweep_horizon(state.dimension() as u64);
        recall::amplify(&mut state, &marks, horizon)?
    };
    let rows: Vec<SweepRow> = curve
        .into_iter()
        .enumerate()
        .map(|(t, p_success)| SweepRow {
            t: t as u64,
            p_success,
        })
        .collect();
    Ok(match cfg.format {
        OutputFormat::Json => to_json(&rows),
        OutputFormat::Csv => {
            let mut out = String::from("t,p_success\n");
            for row in &rows {
                let _ = writeln!(out, "{},{}", row.t, row.p_success);
            }
            out
        }
        OutputFormat::Text => {
            let mut out = String::from("t   p_success\n");
            for row in &rows {
                let _ = writeln!(out, "{:<3} {:.6}", row.t, row.p_success);
            }
            out
        }
    })
}

// ------------------------------------------------------------- hopfield

fn cmd_hopfield(cfg: &RunConfig) -> Result<String> {
    if cfg.trials == 0 {
        return Err(Error::input("--trials must be at least 1"));
    }
    let table = hopfield::capacity_sweep(cfg.net_size, &cfg.pattern_counts, cfg.trials, cfg.seed)?;
    Ok(match cfg.format {
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Row {
                m: usize,
                recall_fraction: f64,
            }
            let rows: Vec<Row> = table
                .iter()
                .map(|point| Row {
                    m: point.pattern_count,
                    recall_fraction: point.recall_fraction,
                })
                .collect();
            to_json(&rows)
        }
        OutputFormat::Csv => {
            let mut out = String::from("m,recall_fraction\n");
            for point in &table {
                let _ = writeln!(out, "{},{}", point.pattern_count, point.recall_fraction);
            }
            out
        }
        OutputFormat::Text => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "Hopfield capacity sweep: n={} trials={} seed={}",
                cfg.net_size, cfg.trials, cfg.seed
            );
            let _ = writeln!(out, "m    exact-recall fraction");
            for point in &table {
                let _ = writeln!(out, "{:<4} {:.4}", point.pattern_count, point.recall_fraction);
            }
            out
        }
    })
}

// -------------------------------------------------------------- helpers

fn support_map(distribution: &[f64], n: usize) -> BTreeMap<String, f64> {
    distribution
        .iter()
        .enumerate()
        .filter(|&(_, &p)| p > 1e-15)
        .map(|(i, &p)| (state::BasisPattern::from_index(n, i).to_string(), p))
        .collect()
}

fn to_json(value: &impl Serialize) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("reports serialize");
    out.push('\n');
    out
}
