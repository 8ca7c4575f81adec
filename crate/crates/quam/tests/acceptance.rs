//! Acceptance suite: one test per release criterion, each printing a
//! PASS line when its checks hold. Run with
//! `cargo test -p quam --test acceptance -- --nocapture` to see the lines.

use std::time::Instant;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

use quam::analysis;
use quam::gates::{self, MarkSet};
use quam::hopfield;
use quam::recall;
use quam::state::{seeded_rng, BasisPattern, QuantumState, Query};
use quam::storage::{self, PatternSet};

fn six_pattern_set() -> PatternSet {
    PatternSet::from_strings(["0000", "0011", "0110", "1001", "1100", "1111"]).unwrap()
}

/// Assert the state equals `values`·`scale` entrywise (real amplitudes).
fn assert_vector(state: &QuantumState, values: &[i64], scale: f64, tol: f64, context: &str) {
    assert_eq!(state.dimension(), values.len(), "{context}: dimension");
    for (i, (amp, &v)) in state.amplitudes().iter().zip(values).enumerate() {
        let want = v as f64 * scale;
        assert!(
            (amp.re - want).abs() < tol && amp.im.abs() < tol,
            "{context}: index {i} is {amp}, want {want}"
        );
    }
}

fn uniform_with_flip(flip_at: usize) -> Vec<i64> {
    let mut v = vec![1i64; 16];
    v[flip_at] = -1;
    v
}

#[test]
fn criterion_01_classic_search_golden_trace() {
    let target = BasisPattern::new("0110").unwrap();
    let marks = MarkSet::new(vec![6]);

    let mut state = QuantumState::zero(4).unwrap();
    assert_vector(&state, &{
        let mut v = vec![0i64; 16];
        v[0] = 1;
        v
    }, 1.0, 1e-12, "initial");

    gates::walsh_all(&mut state);
    assert_vector(&state, &[1; 16], 0.25, 1e-12, "uniform");

    // Round 1: flip, check the mean, diffuse.
    gates::phase_invert(&mut state, &marks).unwrap();
    assert_vector(&state, &uniform_with_flip(6), 0.25, 1e-12, "round 1 flip");
    assert!((state.mean_amplitude().re - 7.0 / 32.0).abs() < 1e-12);
    gates::invert_about_mean(&mut state);
    let mut round1 = vec![3i64; 16];
    round1[6] = 11;
    assert_vector(&state, &round1, 1.0 / 16.0, 1e-12, "round 1");

    // Round 2.
    gates::phase_invert(&mut state, &marks).unwrap();
    assert!((state.mean_amplitude().re - 17.0 / 128.0).abs() < 1e-12);
    gates::invert_about_mean(&mut state);
    let mut round2 = vec![5i64; 16];
    round2[6] = 61;
    assert_vector(&state, &round2, 1.0 / 64.0, 1e-12, "round 2");

    // Round 3.
    gates::phase_invert(&mut state, &marks).unwrap();
    gates::invert_about_mean(&mut state);
    let mut round3 = vec![-13i64; 16];
    round3[6] = 251;
    assert_vector(&state, &round3, 1.0 / 256.0, 1e-12, "round 3");

    // The packaged search reports the same success probabilities.
    let run = recall::grover_classic(4, &target, Some(4)).unwrap();
    let success = &run.success_by_round;
    assert!((success[2] - 0.91).abs() < 0.005, "t=2: {}", success[2]);
    assert!((success[3] - 0.96).abs() < 0.005, "t=3: {}", success[3]);
    assert!((success[4] - 0.58).abs() < 0.005, "t=4: {}", success[4]);
    assert!((success[3] - (251.0f64 / 256.0).powi(2)).abs() < 1e-12);
    assert_eq!(recall::default_grover_rounds(16), 3);

    println!(
        "criterion 1: PASS — classic search trace exact; success t=2/3/4 = {:.4}/{:.4}/{:.4}",
        success[2], success[3], success[4]
    );
}

#[test]
fn criterion_02_classic_search_fails_on_sparse_start() {
    let stored = storage::store_fast(&six_pattern_set()).unwrap();
    let marks = MarkSet::new(vec![6]);
    let mut state = stored;
    let success = recall::amplify(&mut state, &marks, 2).unwrap();

    let expected = 169.0 / 384.0;
    assert!((success[2] - expected).abs() < 1e-12);
    assert!((success[2] - 0.44).abs() < 0.005);

    let mut final_values = vec![0i64; 16];
    for (i, v) in [
        (0, 5), (1, -3), (2, -3), (3, 5), (4, -3), (5, -3), (6, 13), (7, -3),
        (8, -3), (9, 5), (10, -3), (11, -3), (12, 5), (13, -3), (14, -3), (15, 5),
    ] {
        final_values[i] = v;
    }
    assert_vector(&state, &final_values, 1.0 / (8.0 * 6.0f64.sqrt()), 1e-12, "t=2");

    println!(
        "criterion 2: PASS — sparse-start classic search stalls at {:.6} (= 169/384)",
        success[2]
    );
}

#[test]
fn criterion_03_modified_search_golden_trace() {
    let patterns = six_pattern_set();
    let mut state = storage::store_fast(&patterns).unwrap();
    let marks = MarkSet::new(vec![6]);
    let stored_marks: MarkSet = patterns.indices().into_iter().collect();
    let both = stored_marks.union(&marks);

    let s6 = 6.0f64.sqrt();
    let start = [1i64, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1];
    assert_vector(&state, &start, 1.0 / s6, 1e-12, "stored");

    gates::phase_invert(&mut state, &marks).unwrap();
    let mut flipped = start;
    flipped[6] = -1;
    assert_vector(&state, &flipped, 1.0 / s6, 1e-12, "flip");

    gates::invert_about_mean(&mut state);
    let after_diffuse = [-1i64, 1, 1, -1, 1, 1, 3, 1, 1, -1, 1, 1, -1, 1, 1, -1];
    assert_vector(&state, &after_diffuse, 1.0 / (2.0 * s6), 1e-12, "diffuse");

    gates::phase_invert(&mut state, &both).unwrap();
    let mut aligned = vec![1i64; 16];
    aligned[6] = -3;
    assert_vector(&state, &aligned, 1.0 / (2.0 * s6), 1e-12, "align");

    gates::invert_about_mean(&mut state);
    let mut primed = vec![1i64; 16];
    primed[6] = 9;
    assert_vector(&state, &primed, 1.0 / (4.0 * s6), 1e-12, "primed");

    gates::phase_invert(&mut state, &marks).unwrap();
    gates::invert_about_mean(&mut state);
    let mut final_values = vec![-1i64; 16];
    final_values[6] = 39;
    assert_vector(&state, &final_values, 1.0 / (16.0 * s6), 1e-12, "final");

    let success = state.probability_of(&Query::new("0110").unwrap()).unwrap();
    assert!((success - 0.99).abs() < 0.005);

    // The recall pipeline runs the same sequence on its own: one round.
    let stored = storage::store_fast(&patterns).unwrap();
    let recalled =
        recall::recall_state(&stored, &patterns, &Query::new("0110").unwrap(), None).unwrap();
    assert_eq!(recalled.rounds, 1);
    assert_vector(
        &recalled.state,
        &final_values,
        1.0 / (16.0 * s6),
        1e-12,
        "pipeline",
    );

    println!("criterion 3: PASS — modified search trace exact; success {success:.6}");
}

#[test]
fn criterion_04_storage_circuit_golden_trace() {
    let patterns = PatternSet::from_strings(["01", "10", "11"]).unwrap();
    let (run, snapshots) = storage::store_circuit_trace(&patterns).unwrap();

    let third = 1.0 / 3.0f64.sqrt();
    let two_thirds = (2.0f64 / 3.0).sqrt();
    let expected: [&[(usize, f64)]; 10] = [
        &[(0b0000, 1.0)],
        &[(0b0110, 1.0)],
        &[(0b0110, two_thirds), (0b0111, third)],
        &[(0b0100, two_thirds), (0b0101, third)],
        &[(0b1010, two_thirds), (0b0101, third)],
        &[(0b1010, third), (0b1011, third), (0b0101, third)],
        &[(0b1000, third), (0b1001, third), (0b0101, third)],
        &[(0b1110, third), (0b1001, third), (0b0101, third)],
        &[(0b1111, third), (0b1001, third), (0b0101, third)],
        &[(0b1101, third), (0b1001, third), (0b0101, third)],
    ];
    assert_eq!(snapshots.len(), expected.len());
    for (step, (snapshot, want)) in snapshots.iter().zip(expected.iter()).enumerate() {
        let mut full = vec![0.0; 16];
        for &(i, v) in *want {
            full[i] = v;
        }
        for (i, amp) in snapshot.amplitudes().iter().enumerate() {
            assert!(
                (amp.norm() - full[i]).abs() < 1e-12,
                "step {step}, index {i}: |amp| = {}, want {}",
                amp.norm(),
                full[i]
            );
        }
    }

    let reduced = storage::reduce_registers(&run.state).unwrap();
    for index in [1usize, 2, 3] {
        assert!((reduced.amplitude(index).norm() - third).abs() < 1e-12);
    }
    assert!(reduced.amplitude(0).norm() < 1e-12);

    println!("criterion 4: PASS — storage circuit reproduces all trace states; memory at 1/sqrt(3)");
}

#[test]
fn criterion_05_end_to_end_partial_recall() {
    let patterns = six_pattern_set();
    let query = Query::new("011?").unwrap();
    let stored = storage::store_fast(&patterns).unwrap();
    let recalled = recall::recall_state(&stored, &patterns, &query, None).unwrap();

    let mut values = vec![1i64; 16];
    values[6] = 17;
    values[7] = 9;
    assert_vector(
        &recalled.state,
        &values,
        1.0 / (8.0 * 6.0f64.sqrt()),
        1e-12,
        "final",
    );

    let success = recalled.state.probability_of(&query).unwrap();
    assert!((success - 0.9635).abs() < 0.001, "success {success}");

    let p_completion = recalled.state.amplitude(6).norm_sqr();
    let p_alternate = recalled.state.amplitude(7).norm_sqr();
    assert!((p_completion - 0.753).abs() < 0.001);
    assert!((p_alternate - 0.211).abs() < 0.001);
    assert!((p_completion / success - 0.781).abs() < 0.01);
    assert!((p_alternate / success - 0.219).abs() < 0.01);

    let params = analysis::derive_parameters(&patterns, &query).unwrap();
    assert_eq!(analysis::optimal_rounds(&params).unwrap(), 0);
    assert_eq!(recalled.rounds, 0);

    println!(
        "criterion 5: PASS — partial recall: success {success:.4}, split {p_completion:.3}/{p_alternate:.3}, T=0"
    );
}

/// Deterministic random (patterns, query) instances over n in 3..=8.
fn random_instances(count: usize) -> Vec<(PatternSet, Query)> {
    let mut rng = seeded_rng(0x5eed);
    let mut instances = Vec::with_capacity(count);
    while instances.len() < count {
        let n = rng.random_range(3..=8usize);
        let dim = 1usize << n;
        let m = rng.random_range(1..=dim);
        let mut indices: Vec<usize> = (0..dim).collect();
        indices.shuffle(&mut rng);
        indices.truncate(m);
        let patterns = PatternSet::new(
            indices
                .iter()
                .map(|&i| BasisPattern::from_index(n, i))
                .collect(),
        )
        .unwrap();
        let symbols: String = (0..n)
            .map(|_| match rng.random_range(0..10u8) {
                0..=3 => '?',
                4..=6 => '0',
                _ => '1',
            })
            .collect();
        let Ok(query) = Query::new(symbols) else {
            continue;
        };
        if query.is_all_wildcard() {
            continue;
        }
        instances.push((patterns, query));
    }
    instances
}

#[test]
fn criterion_06_model_matches_simulation_exactly() {
    let instances = random_instances(240);
    for (patterns, query) in &instances {
        let n = patterns.pattern_len();
        let params = analysis::derive_parameters(patterns, query).unwrap();
        let fr = analysis::first_round(&params);
        let scale = 1.0 / (patterns.len() as f64).sqrt();

        let stored = storage::store_fast(patterns).unwrap();
        let primed = recall::recall_state(&stored, patterns, query, Some(0)).unwrap();
        let pattern_indices = patterns.indices();

        for (i, amp) in primed.state.amplitudes().iter().enumerate() {
            let marked = query.matches_index(i);
            let is_stored = pattern_indices.contains(&i);
            let class_value = match (marked, is_stored) {
                (true, true) => fr.marked_stored,
                (true, false) => fr.marked_spurious,
                (false, true) => fr.unmarked_stored,
                (false, false) => fr.unmarked_spurious,
            };
            assert!(
                (amp.re - class_value * scale).abs() < 1e-9 && amp.im.abs() < 1e-12,
                "n={n} m={} query={query} index={i}: {amp} vs {}",
                patterns.len(),
                class_value * scale
            );
        }

        let marks = recall::query_marks(query, n).unwrap();
        let horizon = 2 * recall::default_grover_rounds(1 << n as u64);
        let mut state = primed.state;
        let simulated = recall::amplify(&mut state, &marks, horizon).unwrap();
        for (t, &sim) in simulated.iter().enumerate() {
            let predicted = analysis::success_at(&params, t as u64).unwrap();
            assert!(
                (sim - predicted).abs() < 1e-9,
                "n={n} query={query} t={t}: simulated {sim} vs predicted {predicted}"
            );
        }
    }
    println!(
        "criterion 6: PASS — class amplitudes and success curve match simulation (1e-9) on {} instances",
        instances.len()
    );
}

#[test]
fn criterion_07_round_count_is_near_optimal() {
    // The worked-example round counts hold exactly.
    let six = six_pattern_set();
    let exact = analysis::derive_parameters(&six, &Query::new("0110").unwrap()).unwrap();
    assert_eq!(analysis::optimal_rounds(&exact).unwrap(), 1);
    let partial = analysis::derive_parameters(&six, &Query::new("011?").unwrap()).unwrap();
    assert_eq!(analysis::optimal_rounds(&partial).unwrap(), 0);
    println!("criterion 7 (worked examples): T=1 exact query, T=0 partial query — hold");

    let instances = random_instances(240);
    let mut worst_gap = 0.0f64;
    let mut worst_detail = String::new();
    let mut violations = 0usize;
    for (patterns, query) in &instances {
        let n = patterns.pattern_len();
        let params = analysis::derive_parameters(patterns, query).unwrap();
        let chosen = analysis::optimal_rounds(&params).unwrap() as usize;

        let stored = storage::store_fast(patterns).unwrap();
        let primed = recall::recall_state(&stored, patterns, query, Some(0)).unwrap();
        let marks = recall::query_marks(query, n).unwrap();
        let horizon = analysis::sweep_horizon(1 << n as u64);
        let mut state = primed.state;
        let curve = recall::amplify(&mut state, &marks, horizon).unwrap();
        assert!(chosen < curve.len());
        let best = curve.iter().copied().fold(f64::MIN, f64::max);
        let gap = best - curve[chosen];
        if gap > 0.02 {
            violations += 1;
        }
        if gap > worst_gap {
            worst_gap = gap;
            worst_detail = format!(
                "n={n} m={} query={query}: success {:.4} at T={chosen}, best {best:.4}",
                patterns.len(),
                curve[chosen]
            );
        }
    }
    println!(
        "criterion 7 (suite): {violations}/{} instances exceed the 0.02 gap; worst {worst_gap:.4} ({worst_detail})",
        instances.len()
    );
    // The chosen round count targets the first zero crossing of the
    // unmarked-class average. When that crossing falls near the midpoint
    // between two integers, an integer adjacent to a later crossing can beat
    // it by more than 0.02, so this bound fails on a few percent of random
    // instances.
    assert!(
        worst_gap <= 0.02,
        "round count missed the best success by {worst_gap:.4} on {violations}/{} instances ({worst_detail})",
        instances.len()
    );
    println!("criterion 7: PASS — chosen round count within 0.02 of best (worst gap {worst_gap:.5})");
}

#[test]
fn criterion_08_success_ceiling_for_arbitrary_starts() {
    let mut uniform = QuantumState::zero(4).unwrap();
    gates::walsh_all(&mut uniform);
    let bound = analysis::biron_bound(&uniform, &MarkSet::new(vec![6]));
    assert_eq!(bound, 1.0);

    let stored = storage::store_fast(&six_pattern_set()).unwrap();
    let sparse = analysis::biron_bound(&stored, &MarkSet::new(vec![6]));
    assert!((sparse - 4.0 / 9.0).abs() < 1e-12);
    assert!((sparse - 0.44).abs() < 0.01);

    println!("criterion 8: PASS — ceiling 1 for uniform start, {sparse:.6} (= 4/9) for the sparse start");
}

#[test]
fn criterion_09_desk_scale_run() {
    let started = Instant::now();
    let n = 16usize;
    let m = 1usize << 14;

    let mut rng = seeded_rng(2024);
    let mut indices: Vec<usize> = (0..(1usize << n)).collect();
    indices.shuffle(&mut rng);
    indices.truncate(m);
    let patterns = PatternSet::new(
        indices
            .iter()
            .map(|&i| BasisPattern::from_index(n, i))
            .collect(),
    )
    .unwrap();

    // Query one stored pattern with its last bit unknown.
    let mut symbols = patterns.patterns()[0].as_str().to_owned();
    symbols.replace_range(n - 1..n, "?");
    let query = Query::new(symbols).unwrap();

    let params = analysis::derive_parameters(&patterns, &query).unwrap();
    let rounds = analysis::optimal_rounds(&params).unwrap();
    assert!(rounds < 1000, "computed round count {rounds}");

    let outcome = recall::recall(&patterns, &query, 1000, 7, None).unwrap();
    assert_eq!(outcome.rounds, rounds);
    assert!(outcome.answer.is_some());

    let circuit_ops = storage::circuit_op_count(&patterns);
    let bound = (2 * n as u64 + 2) * m as u64;
    assert!(circuit_ops <= bound, "{circuit_ops} > {bound}");

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");

    println!(
        "criterion 9: PASS — n=16, m=2^14: T={rounds} (<1000), circuit ops {circuit_ops} <= {bound}, elapsed {elapsed:?}"
    );
}

#[test]
fn criterion_10_hopfield_capacity_baseline() {
    let table = hopfield::capacity_sweep(16, &[2, 8], 50, 11).unwrap();
    let at_two = table[0].recall_fraction;
    let at_eight = table[1].recall_fraction;
    assert!(at_two >= 0.9, "recall fraction {at_two} at m=2");
    assert!(at_eight < 0.5, "recall fraction {at_eight} at m=8");

    // Energy is monotone under 1e5 asynchronous updates.
    let mut rng = seeded_rng(3);
    let mut updates = 0u64;
    while updates < 100_000 {
        let patterns = hopfield::random_pattern_set(20, 5, &mut rng);
        let net = hopfield::train(&patterns);
        let mut spins: Vec<i8> = (0..20)
            .map(|_| if rng.random::<bool>() { 1 } else { -1 })
            .collect();
        let mut energy = net.energy(&spins);
        for _ in 0..5000 {
            let unit = rng.random_range(0..20);
            net.update_unit(&mut spins, unit);
            let next = net.energy(&spins);
            assert!(next <= energy + 1e-9, "energy rose: {energy} -> {next}");
            energy = next;
            updates += 1;
        }
    }

    println!(
        "criterion 10: PASS — exact recall {at_two:.3} at m=2, {at_eight:.3} at m=8; energy monotone over {updates} updates"
    );
}

#[test]
fn criterion_11_property_suites() {
    // Gate unitarity.
    assert!(gates::hadamard().unitarity_defect() < 1e-12);
    assert!(gates::pauli_x().unitarity_defect() < 1e-12);
    assert!(gates::swap().unitarity_defect() < 1e-12);
    for p in [1u64, 2, 3, 7, 100, 10_000, 1_000_000] {
        assert!(gates::s_matrix(p).unwrap().unitarity_defect() < 1e-12);
    }

    // Normalization through a storage + recall pipeline.
    let patterns = six_pattern_set();
    let stored = storage::store_fast(&patterns).unwrap();
    assert!((stored.norm_sqr() - 1.0).abs() < 1e-10);
    let recalled =
        recall::recall_state(&stored, &patterns, &Query::new("011?").unwrap(), Some(5)).unwrap();
    assert!((recalled.state.norm_sqr() - 1.0).abs() < 1e-10);

    // Diffusion identity: inversion about the mean equals the negated
    // Walsh-conjugated flip of |0…0⟩, entrywise, for n <= 4.
    for n in 1..=4usize {
        for col in 0..(1usize << n) {
            let label = BasisPattern::from_index(n, col);
            let mut via_mean = QuantumState::basis(n, &label).unwrap();
            gates::invert_about_mean(&mut via_mean);
            let mut via_walsh = QuantumState::basis(n, &label).unwrap();
            gates::walsh_all(&mut via_walsh);
            gates::phase_invert(&mut via_walsh, &MarkSet::new(vec![0])).unwrap();
            gates::walsh_all(&mut via_walsh);
            for (a, b) in via_mean.amplitudes().iter().zip(via_walsh.amplitudes()) {
                assert!((a + b).norm() < 1e-12);
            }
        }
    }

    // After the priming double-reflection the unmarked amplitudes are equal
    // within each class, and outright equal on the two walkthrough
    // instances (where the class values coincide).
    for (patterns, query) in random_instances(60) {
        let params = analysis::derive_parameters(&patterns, &query).unwrap();
        let fr = analysis::first_round(&params);
        let stored = storage::store_fast(&patterns).unwrap();
        let primed = recall::recall_state(&stored, &patterns, &query, Some(0)).unwrap();
        let indices = patterns.indices();
        let mut spurious: Option<f64> = None;
        let mut stored_unmarked: Option<f64> = None;
        for (i, amp) in primed.state.amplitudes().iter().enumerate() {
            if query.matches_index(i) {
                continue;
            }
            let slot = if indices.contains(&i) {
                &mut stored_unmarked
            } else {
                &mut spurious
            };
            match *slot {
                None => *slot = Some(amp.re),
                Some(seen) => assert!((amp.re - seen).abs() < 1e-10),
            }
        }
        let _ = fr;
    }
    for query in ["011?", "0110"] {
        let patterns = six_pattern_set();
        let query = Query::new(query).unwrap();
        let stored = storage::store_fast(&patterns).unwrap();
        let primed = recall::recall_state(&stored, &patterns, &query, Some(0)).unwrap();
        let mut unmarked: Option<f64> = None;
        for (i, amp) in primed.state.amplitudes().iter().enumerate() {
            if query.matches_index(i) {
                continue;
            }
            match unmarked {
                None => unmarked = Some(amp.re),
                Some(seen) => assert!((amp.re - seen).abs() < 1e-10),
            }
        }
    }

    println!("criterion 11: PASS — unitarity, normalization, diffusion identity, and post-priming class structure hold");
}
