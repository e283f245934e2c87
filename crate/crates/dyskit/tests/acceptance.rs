//! Acceptance suite: one test per shipped guarantee. Each test prints a
//! single `criterion NN [PASS|FAIL]` line (visible with
//! `cargo test --test acceptance -- --nocapture`) and then asserts.
//!
//! Heavyweight fixtures (the 50-per-class synthetic corpus) are built
//! once and shared across tests through a `OnceLock`.

use std::collections::BTreeSet;
use std::process::Command;
use std::sync::OnceLock;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dyskit::corpus::{build_synthetic_dataset, Dataset, SynthParams};
use dyskit::eval::{
    render_report_table, round2_half_up, run_trials, split_dataset, ClassifierSpec,
    ConfusionCounts, EvalReport, SplitConfig, TrialOutcome,
};
use dyskit::features::{AggregationStrategy, FeatureVector};
use dyskit::knn::{knn_classify, knn_train, ClassLabel};
use dyskit::mfcc::{
    dct_cepstrum, frame_signal, inverse_mel, mel_scale, power_spectrum,
    power_spectrum_dft_oracle, FrontendConfig,
};
use dyskit::svm::{svm_classify, svm_decision, svm_train, KernelSpec, SvmTrainConfig};

fn report(number: usize, name: &str, failures: &[String]) {
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {number:02} [{verdict}] {name}");
    assert!(
        failures.is_empty(),
        "criterion {number} ({name}) failed:\n{}",
        failures.join("\n")
    );
}

fn fv(values: Vec<f64>) -> FeatureVector {
    FeatureVector {
        values,
        aggregation: AggregationStrategy::Mean,
    }
}

/// Seed-0, 50-per-class synthetic corpus shared by the protocol tests.
fn corpus() -> &'static Dataset {
    static CORPUS: OnceLock<Dataset> = OnceLock::new();
    CORPUS.get_or_init(|| {
        build_synthetic_dataset(
            &SynthParams {
                seed: 0,
                ..SynthParams::default()
            },
            50,
            &FrontendConfig::default(),
            AggregationStrategy::Mean,
        )
        .expect("synthetic corpus builds")
    })
}

#[test]
fn criterion_01_power_spectrum_matches_dft_oracle() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..100 {
        let len: usize = rng.gen_range(1..=64);
        let frame: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n_fft = len.next_power_of_two();
        let fast = power_spectrum(&frame, n_fft).expect("power spectrum computes");
        let slow = power_spectrum_dft_oracle(&frame, n_fft);
        assert_eq!(fast.len(), slow.len());
        for (bin, (a, b)) in fast.iter().zip(&slow).enumerate() {
            let err = (a - b).abs() / b.abs().max(1.0);
            if err > 1e-9 {
                failures.push(format!(
                    "case {case} bin {bin}: fft {a:e} vs dft {b:e} (relative {err:e})"
                ));
            }
        }
    }
    report(1, "power spectrum matches O(n^2) DFT oracle", &failures);
}

#[test]
fn criterion_02_parseval_identity_on_zero_padded_frames() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let n_fft = 128usize;
    for case in 0..100 {
        let len: usize = rng.gen_range(2..=64);
        let frame: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let spectrum = power_spectrum(&frame, n_fft).expect("power spectrum computes");
        // One-sided bins: DC and Nyquist appear once in the full
        // spectrum, everything between twice.
        let mut spectral_sum = spectrum[0] + spectrum[n_fft / 2];
        for bin in &spectrum[1..n_fft / 2] {
            spectral_sum += 2.0 * bin;
        }
        let time_sum: f64 = frame.iter().map(|s| s * s).sum();
        let expected = n_fft as f64 * time_sum;
        let err = (spectral_sum - expected).abs() / expected.abs().max(1.0);
        if err > 1e-9 {
            failures.push(format!(
                "case {case}: spectral sum {spectral_sum} vs N*energy {expected} (relative {err:e})"
            ));
        }
    }
    report(2, "Parseval identity on zero-padded frames", &failures);
}

#[test]
fn criterion_03_mel_anchor_values_and_inverse_identity() {
    let mut failures = Vec::new();
    let at_zero = mel_scale(0.0).expect("mel(0) computes");
    if at_zero != 0.0 {
        failures.push(format!("mel(0) = {at_zero}, want exactly 0"));
    }
    let at_1k = mel_scale(1000.0).expect("mel(1000) computes");
    if (at_1k - 999.99).abs() > 0.01 {
        failures.push(format!("mel(1000) = {at_1k}, want 999.99 +/- 0.01"));
    }
    for i in 0..1000 {
        let f = 8000.0 * i as f64 / 999.0;
        let back = inverse_mel(mel_scale(f).unwrap()).unwrap();
        let err = (back - f).abs() / f.max(1.0);
        if err > 1e-6 {
            failures.push(format!(
                "inverse_mel(mel({f})) = {back} (relative error {err:e})"
            ));
        }
    }
    report(3, "mel anchors and inverse identity", &failures);
}

#[test]
fn criterion_04_dct_kills_constants_and_is_linear() {
    let mut failures = Vec::new();
    let n_filters = 26;
    let n_ceps = 12;
    let constant = vec![3.7; n_filters];
    let coeffs = dct_cepstrum(&constant, n_ceps).expect("dct computes");
    for (i, c) in coeffs.iter().enumerate() {
        if c.abs() >= 1e-10 {
            failures.push(format!("constant input: |c{}| = {:e} >= 1e-10", i + 1, c));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for case in 0..50 {
        let x: Vec<f64> = (0..n_filters).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let y: Vec<f64> = (0..n_filters).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let (a, b): (f64, f64) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let mixed: Vec<f64> = x.iter().zip(&y).map(|(xv, yv)| a * xv + b * yv).collect();
        let direct = dct_cepstrum(&mixed, n_ceps).unwrap();
        let dx = dct_cepstrum(&x, n_ceps).unwrap();
        let dy = dct_cepstrum(&y, n_ceps).unwrap();
        for i in 0..n_ceps {
            let combined = a * dx[i] + b * dy[i];
            if (direct[i] - combined).abs() > 1e-10 {
                failures.push(format!(
                    "case {case} c{}: dct(ax+by) = {} vs a*dct(x)+b*dct(y) = {}",
                    i + 1,
                    direct[i],
                    combined
                ));
            }
        }
    }
    report(4, "DCT orthogonality to constants and linearity", &failures);
}

#[test]
fn criterion_05_frame_count_formula() {
    let mut failures = Vec::new();
    let config = FrontendConfig::default();
    let one_second = frame_signal(&vec![0.25; 16000], &config, 16000)
        .expect("framing computes")
        .n_frames();
    if one_second != 98 {
        failures.push(format!("16000 samples at 16 kHz: {one_second} frames, want 98"));
    }
    let short = frame_signal(&vec![0.25; 1600], &config, 16000)
        .expect("framing computes")
        .n_frames();
    if short != 8 {
        failures.push(format!("1600 samples at 16 kHz: {short} frames, want 8"));
    }
    report(5, "frame-count formula on 25 ms / 10 ms defaults", &failures);
}

#[test]
fn criterion_06_knn_matches_full_sort_oracle() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    for case in 0..50 {
        let n: usize = rng.gen_range(6..=200);
        let d: usize = rng.gen_range(1..=16);
        let k = [1usize, 3, 5][rng.gen_range(0..3)];
        let points: Vec<FeatureVector> = (0..n)
            .map(|_| fv((0..d).map(|_| rng.gen_range(-5.0..5.0)).collect()))
            .collect();
        let mut labels: Vec<ClassLabel> = (0..n)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    ClassLabel::Dysfluent
                } else {
                    ClassLabel::Fluent
                }
            })
            .collect();
        labels[0] = ClassLabel::Dysfluent;
        labels[1] = ClassLabel::Fluent;
        let query = fv((0..d).map(|_| rng.gen_range(-5.0..5.0)).collect());

        let model = knn_train(&points, &labels).expect("knn trains");
        let prediction = knn_classify(&model, &query, k).expect("knn classifies");

        // Oracle: sort every training point by distance, take the first
        // k, majority-vote their labels (k is odd, so no vote ties).
        let mut order: Vec<(f64, usize)> = points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let dist = p
                    .values
                    .iter()
                    .zip(&query.values)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                (dist, i)
            })
            .collect();
        order.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let oracle_set: BTreeSet<usize> = order[..k].iter().map(|&(_, i)| i).collect();
        let dys_votes = order[..k]
            .iter()
            .filter(|&&(_, i)| labels[i] == ClassLabel::Dysfluent)
            .count();
        let oracle_label = if 2 * dys_votes > k {
            ClassLabel::Dysfluent
        } else {
            ClassLabel::Fluent
        };

        let got_set: BTreeSet<usize> = prediction.neighbors.iter().map(|n| n.index).collect();
        if got_set != oracle_set {
            failures.push(format!(
                "case {case} (n={n}, d={d}, k={k}): neighbor set {got_set:?} vs oracle {oracle_set:?}"
            ));
        }
        if prediction.label != oracle_label {
            failures.push(format!(
                "case {case} (n={n}, d={d}, k={k}): label {} vs oracle {oracle_label}",
                prediction.label
            ));
        }
    }
    report(6, "k-NN neighbor set and label match full-sort oracle", &failures);
}

/// Maximizes the dual objective by multi-resolution grid search over the
/// feasible polytope. The last multiplier is eliminated through the
/// equality constraint; each zoom level re-centers on the best grid
/// point and shrinks the window, which is sound because the objective is
/// concave.
fn grid_qp_max(points: &[Vec<f64>], y: &[f64], c: f64) -> f64 {
    let n = points.len();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, z)| x * z).sum::<f64>();
    let gram: Vec<Vec<f64>> = points
        .iter()
        .map(|p| points.iter().map(|q| dot(p, q)).collect())
        .collect();
    let objective = |alpha: &[f64]| {
        let linear: f64 = alpha.iter().sum();
        let mut quad = 0.0;
        for i in 0..n {
            for j in 0..n {
                quad += alpha[i] * alpha[j] * y[i] * y[j] * gram[i][j];
            }
        }
        linear - 0.5 * quad
    };

    let free = n - 1;
    let steps: i64 = 10;
    let mut center = vec![c / 2.0; free];
    let mut half = c / 2.0;
    let mut best = f64::NEG_INFINITY;
    let mut alpha = vec![0.0; n];
    for _level in 0..9 {
        let mut best_center = center.clone();
        let mut idx = vec![-steps; free];
        'grid: loop {
            for d in 0..free {
                alpha[d] = (center[d] + idx[d] as f64 * half / steps as f64).clamp(0.0, c);
            }
            // y_i is +/-1, so dividing by y[n-1] is multiplying by it.
            let tail: f64 = (0..free).map(|d| alpha[d] * y[d]).sum();
            let last = -tail * y[n - 1];
            if (-1e-9..=c + 1e-9).contains(&last) {
                alpha[n - 1] = last.clamp(0.0, c);
                let value = objective(&alpha);
                if value > best {
                    best = value;
                    best_center = alpha[..free].to_vec();
                }
            }
            let mut d = 0;
            loop {
                if d == free {
                    break 'grid;
                }
                idx[d] += 1;
                if idx[d] <= steps {
                    break;
                }
                idx[d] = -steps;
                d += 1;
            }
        }
        center = best_center;
        half /= 5.0;
    }
    best
}

#[test]
fn criterion_07_svm_analytic_qp_kkt_and_xor() {
    let mut failures = Vec::new();
    let dys = ClassLabel::Dysfluent;
    let flu = ClassLabel::Fluent;

    // (a) Two points on a line: the maximum-margin separator of x=0
    // (negative) and x=2 (positive) is f(x) = x - 1.
    let features = [fv(vec![0.0]), fv(vec![2.0])];
    let labels = [flu, dys];
    let result = svm_train(&features, &labels, &SvmTrainConfig::default()).expect("svm trains");
    let w: f64 = result
        .model
        .support_vectors
        .iter()
        .zip(&result.model.dual_coeffs)
        .map(|(sv, coeff)| coeff * sv[0])
        .sum();
    if (w - 1.0).abs() > 1e-2 || (result.model.bias + 1.0).abs() > 1e-2 {
        failures.push(format!(
            "analytic 1-D case: w = {w}, b = {}, want w = 1, b = -1",
            result.model.bias
        ));
    }

    // (b) Dual objective vs. brute-force grid QP on small linear cases.
    // Hand-derived optima double-check the grid oracle itself.
    let tight = SvmTrainConfig {
        tolerance: 1e-6,
        max_passes: 200,
        ..SvmTrainConfig::default()
    };
    let cases: Vec<(&str, Vec<Vec<f64>>, Vec<ClassLabel>, f64)> = vec![
        (
            "two-point line",
            vec![vec![0.0], vec![2.0]],
            vec![flu, dys],
            0.5,
        ),
        (
            "three-point line with interior extra",
            vec![vec![0.0], vec![2.0], vec![3.0]],
            vec![flu, dys, dys],
            0.5,
        ),
        (
            "four-point separable strips",
            vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![2.0, 0.0], vec![2.0, 1.0]],
            vec![flu, flu, dys, dys],
            0.5,
        ),
        (
            "xor, not linearly separable",
            vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![1.0, 0.0]],
            vec![dys, dys, flu, flu],
            4.0,
        ),
    ];
    for (name, raw_points, labels, known_optimum) in &cases {
        let y: Vec<f64> = labels
            .iter()
            .map(|l| if *l == dys { 1.0 } else { -1.0 })
            .collect();
        let grid_best = grid_qp_max(raw_points, &y, tight.c);
        if (grid_best - known_optimum).abs() > 1e-4 {
            failures.push(format!(
                "{name}: grid QP found {grid_best}, hand-derived optimum {known_optimum}"
            ));
        }
        let features: Vec<FeatureVector> = raw_points.iter().map(|p| fv(p.clone())).collect();
        let result = svm_train(&features, labels, &tight).expect("svm trains");
        let solver = result.model.dual_objective();
        if (solver - grid_best).abs() > 1e-3 {
            failures.push(format!(
                "{name}: solver dual objective {solver} vs grid QP {grid_best}"
            ));
        }
    }

    // (c) KKT conditions rechecked independently on converged models:
    // recover each training point's multiplier by matching it against
    // the stored support vectors, then test the three-case conditions
    // through the public decision function.
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let config = SvmTrainConfig::default();
    let mut converged_models = 0;
    for blob_case in 0..10 {
        let d: usize = rng.gen_range(1..=4);
        let per_class: usize = rng.gen_range(5..=15);
        let separation: f64 = rng.gen_range(1.5..4.0);
        let mut features = Vec::new();
        let mut labels = Vec::new();
        for i in 0..2 * per_class {
            let center = if i < per_class { 0.0 } else { separation };
            features.push(fv((0..d).map(|_| center + rng.gen_range(-1.0..1.0)).collect()));
            labels.push(if i < per_class { dys } else { flu });
        }
        let result = svm_train(&features, &labels, &config).expect("svm trains");
        if !result.converged {
            continue;
        }
        converged_models += 1;
        for (i, feature) in features.iter().enumerate() {
            let alpha = result
                .model
                .support_vectors
                .iter()
                .position(|sv| sv == &feature.values)
                .map_or(0.0, |p| result.model.dual_coeffs[p].abs());
            let y_i = if labels[i] == dys { 1.0 } else { -1.0 };
            let margin = y_i * svm_decision(&result.model, feature).expect("decision computes");
            let violation = if alpha == 0.0 {
                (1.0 - margin).max(0.0)
            } else if alpha == config.c {
                (margin - 1.0).max(0.0)
            } else {
                (margin - 1.0).abs()
            };
            if violation > config.tolerance + 1e-9 {
                failures.push(format!(
                    "blob case {blob_case} point {i}: KKT violation {violation:e} > tolerance"
                ));
            }
        }
    }
    if converged_models == 0 {
        failures.push("no blob model converged; KKT check was vacuous".to_string());
    }

    // (d) RBF solves XOR with 4/4 training accuracy.
    let xor_features = [
        fv(vec![0.0, 0.0]),
        fv(vec![1.0, 1.0]),
        fv(vec![0.0, 1.0]),
        fv(vec![1.0, 0.0]),
    ];
    let xor_labels = [dys, dys, flu, flu];
    let rbf = svm_train(
        &xor_features,
        &xor_labels,
        &SvmTrainConfig {
            kernel: KernelSpec::Rbf { gamma: 2.0 },
            c: 10.0,
            ..SvmTrainConfig::default()
        },
    )
    .expect("rbf svm trains");
    for (feature, want) in xor_features.iter().zip(&xor_labels) {
        let got = svm_classify(&rbf.model, feature).expect("classifies");
        if got != *want {
            failures.push(format!("rbf xor: {:?} classified {got}, want {want}", feature.values));
        }
    }

    report(7, "SVM analytic case, grid QP, KKT recheck, rbf xor", &failures);
}

#[test]
fn criterion_08_protocol_shape_split_table_and_averaging() {
    let mut failures = Vec::new();

    // 50 per class splits 80:20 stratified into exactly 40/40 + 10/10.
    let dataset = corpus();
    let (train, test) = split_dataset(dataset, &SplitConfig::default()).expect("split works");
    let counts = (
        train.class_count(ClassLabel::Dysfluent),
        train.class_count(ClassLabel::Fluent),
        test.class_count(ClassLabel::Dysfluent),
        test.class_count(ClassLabel::Fluent),
    );
    if counts != (40, 40, 10, 10) {
        failures.push(format!("split counts {counts:?}, want (40, 40, 10, 10)"));
    }

    // Three trials render as a per-set table plus an average row.
    let report_data =
        run_trials(dataset, &ClassifierSpec::Knn { k: 3 }, 3, 0).expect("trials run");
    let table = render_report_table(&[report_data]);
    for needle in [
        "Speech samples",
        "dysfluent",
        "fluent",
        "Set 1",
        "Set 2",
        "Set 3",
        "Average classification (%)",
    ] {
        if !table.contains(needle) {
            failures.push(format!("rendered table is missing `{needle}`:\n{table}"));
        }
    }

    // Averaging arithmetic: mean(80, 90, 90) renders as 86.67.
    let mean = (80.0 + 90.0 + 90.0) / 3.0;
    if round2_half_up(mean) != 86.67 {
        failures.push(format!(
            "round2_half_up(mean(80,90,90)) = {}, want 86.67",
            round2_half_up(mean)
        ));
    }
    let trial = |t: usize, acc: f64| TrialOutcome {
        trial: t,
        accuracy_dysfluent: acc,
        accuracy_fluent: acc,
        confusion: ConfusionCounts {
            true_positive: 0,
            false_negative: 0,
            false_positive: 0,
            true_negative: 0,
        },
        converged: true,
        svm_max_kkt_violation: None,
    };
    let synthetic_report = EvalReport {
        classifier_id: "knn(k=3)".to_string(),
        trials: vec![trial(1, 80.0), trial(2, 90.0), trial(3, 90.0)],
        average_dysfluent: mean,
        average_fluent: mean,
    };
    let rendered = render_report_table(&[synthetic_report]);
    let average_row = rendered
        .lines()
        .find(|l| l.starts_with("Average classification"))
        .unwrap_or("");
    if !average_row.contains("86.67") {
        failures.push(format!("average row renders `{average_row}`, want 86.67"));
    }

    report(8, "protocol shape: 40/40 + 10/10 split, set table, averaging", &failures);
}

#[test]
fn criterion_09_end_to_end_desk_scale_accuracy() {
    let mut failures = Vec::new();
    let dataset = corpus();
    let classifiers = [
        ClassifierSpec::Knn { k: 3 },
        ClassifierSpec::Svm(SvmTrainConfig::default()),
    ];
    for classifier in &classifiers {
        let report_data = run_trials(dataset, classifier, 3, 0).expect("trials run");
        if !report_data.all_converged() {
            failures.push(format!("{}: a trial did not converge", report_data.classifier_id));
        }
        if report_data.average_dysfluent < 90.0 || report_data.average_fluent < 90.0 {
            failures.push(format!(
                "{}: averages {:.2}/{:.2} below the 90% floor",
                report_data.classifier_id,
                report_data.average_dysfluent,
                report_data.average_fluent
            ));
        }
    }
    report(9, "seed-0 corpus: k-NN and linear SVM average >= 90%", &failures);
}

#[test]
fn criterion_10_evaluate_is_byte_deterministic() {
    let mut failures = Vec::new();
    let dir = tempfile::tempdir().expect("tempdir");
    // Both runs use the identical command line (the csv path is echoed
    // on stdout); the csv is snapshotted between runs.
    let csv = dir.path().join("eval.csv");
    let mut outputs = Vec::new();
    for run in 0..2 {
        let output = Command::new(env!("CARGO_BIN_EXE_dyskit"))
            .args([
                "evaluate",
                "--synth",
                "--per-class",
                "10",
                "--trials",
                "3",
                "--seed",
                "0",
                "--csv-out",
            ])
            .arg(&csv)
            .output()
            .expect("evaluate runs");
        if !output.status.success() {
            failures.push(format!(
                "run {run} exited {:?}: {}",
                output.status.code(),
                String::from_utf8_lossy(&output.stderr)
            ));
        }
        outputs.push((output.stdout, std::fs::read(&csv).unwrap_or_default()));
    }
    if outputs[0].0 != outputs[1].0 {
        failures.push("stdout reports differ between identical runs".to_string());
    }
    if outputs[0].1 != outputs[1].1 {
        failures.push("csv reports differ between identical runs".to_string());
    }
    report(10, "evaluate with fixed seed is byte-identical across runs", &failures);
}
