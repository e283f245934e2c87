//! Run the full evaluation protocol on a synthetic corpus.
//!
//! Run with (release recommended; it synthesizes 60 clips):
//!
//! ```text
//! cargo run --release --example evaluate_protocol
//! ```
//!
//! Protocol: three trials, each splitting the dataset 80:20 stratified by
//! class with a per-trial seed, training on the 80% and scoring per-class
//! accuracy on the held-out 20%. The rendered table shows one row per
//! trial set plus the averaged percentages; the flat CSV carries the
//! confusion counts for downstream tooling.

use dyskit::corpus::{build_synthetic_dataset, SynthParams};
use dyskit::eval::{render_machine_csv, render_report_table, run_trials, ClassifierSpec};
use dyskit::features::AggregationStrategy;
use dyskit::knn::ClassLabel;
use dyskit::mfcc::FrontendConfig;
use dyskit::svm::{KernelSpec, SvmTrainConfig};

fn main() -> dyskit::Result<()> {
    let params = SynthParams {
        seed: 0,
        ..SynthParams::default()
    };
    let dataset = build_synthetic_dataset(
        &params,
        30,
        &FrontendConfig::default(),
        AggregationStrategy::Mean,
    )?;
    println!(
        "dataset: {} items ({} dysfluent, {} fluent), dimension {}",
        dataset.len(),
        dataset.class_count(ClassLabel::Dysfluent),
        dataset.class_count(ClassLabel::Fluent),
        dataset.dimension()
    );

    let classifiers = [
        ClassifierSpec::Knn { k: 3 },
        ClassifierSpec::Svm(SvmTrainConfig::default()),
        ClassifierSpec::Svm(SvmTrainConfig {
            kernel: KernelSpec::rbf_default(dataset.dimension()),
            ..SvmTrainConfig::default()
        }),
    ];

    let mut reports = Vec::new();
    for classifier in &classifiers {
        let report = run_trials(&dataset, classifier, 3, 0)?;
        for trial in &report.trials {
            if let Some(violation) = trial.svm_max_kkt_violation {
                println!(
                    "{} trial {}: converged={}, worst KKT violation {:.2e}",
                    report.classifier_id, trial.trial, trial.converged, violation
                );
            }
        }
        reports.push(report);
    }

    println!();
    println!("{}", render_report_table(&reports));
    println!("machine-readable form:");
    print!("{}", render_machine_csv(&reports));
    Ok(())
}
