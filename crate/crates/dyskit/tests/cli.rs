//! Process-level tests of the `dyskit` binary: the exit-code contract,
//! output determinism, and agreement between the CLI pipeline and the
//! same operations performed through the library.

use std::path::Path;
use std::process::{Command, Output};

use dyskit::corpus::{build_synthetic_dataset, load_manifest, Dataset, SynthParams};
use dyskit::features::AggregationStrategy;
use dyskit::knn::{knn_classify, knn_train};
use dyskit::mfcc::FrontendConfig;
use dyskit::svm::{svm_classify, svm_decision, svm_train, SvmTrainConfig};

fn dyskit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dyskit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("process exited normally")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

/// Non-config stdout lines: one `<source_id> <label> <score>` per query.
fn prediction_lines(output: &Output) -> Vec<String> {
    String::from_utf8_lossy(&output.stdout)
        .lines()
        .filter(|l| !l.starts_with("config:") && !l.is_empty())
        .map(str::to_string)
        .collect()
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).expect("fixture writes");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(exit_code(&dyskit(&["no-such-command"])), 2);
    assert_eq!(exit_code(&dyskit(&["train", "--clf", "knn"])), 2);
    assert_eq!(exit_code(&dyskit(&["extract"])), 2);
}

#[test]
fn invalid_synth_params_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("corpus");
    let output = dyskit(&["synth", "--out-dir", out.to_str().unwrap(), "--per-class", "1"]);
    assert_eq!(exit_code(&output), 2, "stderr: {}", stderr_of(&output));
}

#[test]
fn malformed_manifest_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("manifest.csv");
    write(
        &manifest,
        "file,start_s,end_s,label,dysfluency_type\na.wav,zero,1,dysfluent,repetition\n",
    );
    let output = dyskit(&[
        "extract",
        "--manifest",
        manifest.to_str().unwrap(),
        "--out",
        dir.path().join("f.csv").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 2, "stderr: {}", stderr_of(&output));
}

#[test]
fn malformed_wav_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.wav"), b"RIFF not actually a wav").unwrap();
    let manifest = dir.path().join("manifest.csv");
    write(
        &manifest,
        "file,start_s,end_s,label,dysfluency_type\n\
         bad.wav,0,1,dysfluent,repetition\n\
         bad.wav,0,1,fluent,\n",
    );
    let output = dyskit(&[
        "extract",
        "--manifest",
        manifest.to_str().unwrap(),
        "--out",
        dir.path().join("f.csv").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 3, "stderr: {}", stderr_of(&output));
}

#[test]
fn missing_input_file_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let output = dyskit(&[
        "train",
        "--clf",
        "knn",
        "--features",
        dir.path().join("nope.csv").to_str().unwrap(),
        "--model-out",
        dir.path().join("m").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 4, "stderr: {}", stderr_of(&output));
}

#[test]
fn single_class_dataset_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let full = build_synthetic_dataset(
        &SynthParams::default(),
        2,
        &FrontendConfig::default(),
        AggregationStrategy::Mean,
    )
    .unwrap();
    let one_class = Dataset {
        items: full
            .items
            .into_iter()
            .filter(|i| i.label == dyskit::knn::ClassLabel::Dysfluent)
            .collect(),
        aggregation: full.aggregation,
        frontend: full.frontend,
    };
    let features = dir.path().join("features.csv");
    write(&features, &one_class.to_feature_csv_string());
    let output = dyskit(&[
        "train",
        "--clf",
        "knn",
        "--features",
        features.to_str().unwrap(),
        "--model-out",
        dir.path().join("m").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 5, "stderr: {}", stderr_of(&output));
}

#[test]
fn incompatible_features_exit_7() {
    let dir = tempfile::tempdir().unwrap();
    let params = SynthParams::default();
    let frontend = FrontendConfig::default();
    let mean = build_synthetic_dataset(&params, 2, &frontend, AggregationStrategy::Mean).unwrap();
    let mean_std =
        build_synthetic_dataset(&params, 2, &frontend, AggregationStrategy::MeanStd).unwrap();
    let mean_csv = dir.path().join("mean.csv");
    let mean_std_csv = dir.path().join("mean_std.csv");
    write(&mean_csv, &mean.to_feature_csv_string());
    write(&mean_std_csv, &mean_std.to_feature_csv_string());

    let model = dir.path().join("knn.model");
    let trained = dyskit(&[
        "train",
        "--clf",
        "knn",
        "--features",
        mean_csv.to_str().unwrap(),
        "--model-out",
        model.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&trained), 0, "stderr: {}", stderr_of(&trained));

    let output = dyskit(&[
        "classify",
        "--model",
        model.to_str().unwrap(),
        "--features",
        mean_std_csv.to_str().unwrap(),
        "--k",
        "3",
    ]);
    assert_eq!(exit_code(&output), 7, "stderr: {}", stderr_of(&output));
}

#[test]
fn synth_is_deterministic_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (d1, d2) = (dir.path().join("one"), dir.path().join("two"));
    for d in [&d1, &d2] {
        let output = dyskit(&[
            "synth",
            "--out-dir",
            d.to_str().unwrap(),
            "--per-class",
            "2",
            "--seed",
            "7",
        ]);
        assert_eq!(exit_code(&output), 0, "stderr: {}", stderr_of(&output));
    }
    let names: Vec<String> = {
        let mut names: Vec<String> = std::fs::read_dir(&d1)
            .unwrap()
            .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
            .collect();
        names.sort();
        names
    };
    assert!(names.contains(&"manifest.csv".to_string()));
    assert_eq!(names.iter().filter(|n| n.ends_with(".wav")).count(), 4);
    for name in names {
        let a = std::fs::read(d1.join(&name)).unwrap();
        let b = std::fs::read(d2.join(&name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical synth runs");
    }
}

/// The composability contract: `synth -> extract -> train -> classify`
/// through the binary must reproduce, line for line, what the library
/// produces on the same data.
#[test]
fn cli_pipeline_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    let features = dir.path().join("features.csv");
    let knn_model = dir.path().join("knn.model");
    let svm_model = dir.path().join("svm.model");

    for args in [
        vec!["synth", "--out-dir", corpus.to_str().unwrap(), "--per-class", "3", "--seed", "5"],
        vec![
            "extract",
            "--manifest",
            corpus.join("manifest.csv").to_str().unwrap(),
            "--out",
            features.to_str().unwrap(),
        ],
        vec![
            "train",
            "--clf",
            "knn",
            "--features",
            features.to_str().unwrap(),
            "--model-out",
            knn_model.to_str().unwrap(),
        ],
        vec![
            "train",
            "--clf",
            "svm",
            "--features",
            features.to_str().unwrap(),
            "--model-out",
            svm_model.to_str().unwrap(),
        ],
    ] {
        let output = dyskit(&args);
        assert_eq!(exit_code(&output), 0, "{args:?}: {}", stderr_of(&output));
    }

    // Library side, same inputs, same defaults.
    let dataset = load_manifest(
        corpus.join("manifest.csv"),
        &FrontendConfig::default(),
        AggregationStrategy::Mean,
    )
    .unwrap();
    let knn = knn_train(&dataset.features(), &dataset.labels()).unwrap();
    let svm = svm_train(&dataset.features(), &dataset.labels(), &SvmTrainConfig::default())
        .unwrap();
    assert!(svm.converged);

    let classified = dyskit(&[
        "classify",
        "--model",
        knn_model.to_str().unwrap(),
        "--features",
        features.to_str().unwrap(),
        "--k",
        "3",
    ]);
    assert_eq!(exit_code(&classified), 0, "stderr: {}", stderr_of(&classified));
    let expected: Vec<String> = dataset
        .items
        .iter()
        .map(|item| {
            let pred = knn_classify(&knn, &item.features, 3).unwrap();
            let votes = match pred.label {
                dyskit::knn::ClassLabel::Dysfluent => pred.votes_dysfluent,
                dyskit::knn::ClassLabel::Fluent => pred.votes_fluent,
            };
            format!("{} {} {:.6}", item.source_id, pred.label, votes as f64 / 3.0)
        })
        .collect();
    assert_eq!(prediction_lines(&classified), expected);

    let classified = dyskit(&[
        "classify",
        "--model",
        svm_model.to_str().unwrap(),
        "--features",
        features.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&classified), 0, "stderr: {}", stderr_of(&classified));
    let expected: Vec<String> = dataset
        .items
        .iter()
        .map(|item| {
            let label = svm_classify(&svm.model, &item.features).unwrap();
            let score = svm_decision(&svm.model, &item.features).unwrap();
            format!("{} {} {:.6}", item.source_id, label, score)
        })
        .collect();
    assert_eq!(prediction_lines(&classified), expected);
}
