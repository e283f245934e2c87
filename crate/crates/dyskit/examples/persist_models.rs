//! Save trained models and feature sets to disk and load them back.
//!
//! Run with:
//!
//! ```text
//! cargo run --example persist_models
//! ```
//!
//! Both model formats and the feature CSV are plain text with a magic
//! first line, so artifacts written by one tool run are readable by the
//! next (and by the `dyskit` CLI). Loaded models remember the feature
//! aggregation and dimension they were trained on and refuse
//! incompatible queries.

use std::error::Error;

use dyskit::corpus::{build_synthetic_dataset, Dataset, SynthParams};
use dyskit::features::AggregationStrategy;
use dyskit::knn::{knn_classify, knn_train};
use dyskit::mfcc::FrontendConfig;
use dyskit::model_io::{load_model, save_knn_model, save_svm_model, AnyModel};
use dyskit::svm::{svm_classify, svm_train, SvmTrainConfig};

fn main() -> Result<(), Box<dyn Error>> {
    let dir = tempfile::tempdir()?;
    let dataset = build_synthetic_dataset(
        &SynthParams::default(),
        5,
        &FrontendConfig::default(),
        AggregationStrategy::Mean,
    )?;

    // Feature CSV round-trip.
    let features_path = dir.path().join("features.csv");
    std::fs::write(&features_path, dataset.to_feature_csv_string())?;
    let reloaded = Dataset::from_feature_csv_str(&std::fs::read_to_string(&features_path)?)?;
    assert_eq!(reloaded, dataset);
    println!(
        "features.csv round-trips: {} items, dimension {}",
        reloaded.len(),
        reloaded.dimension()
    );

    // Train both classifiers and persist them.
    let knn = knn_train(&dataset.features(), &dataset.labels())?;
    let knn_path = dir.path().join("knn.model");
    save_knn_model(&knn_path, &knn)?;

    let svm = svm_train(&dataset.features(), &dataset.labels(), &SvmTrainConfig::default())?;
    let svm_path = dir.path().join("svm.model");
    save_svm_model(&svm_path, &svm.model)?;

    for path in [&knn_path, &svm_path] {
        let first_line = std::fs::read_to_string(path)?
            .lines()
            .next()
            .unwrap_or_default()
            .to_string();
        println!("{}: header `{first_line}`", path.file_name().unwrap().to_string_lossy());
    }

    // Loading dispatches on the header; predictions survive the round
    // trip exactly.
    let query = &dataset.items[0].features;
    for path in [&knn_path, &svm_path] {
        match load_model(path)? {
            AnyModel::Knn(model) => {
                assert_eq!(model, knn);
                println!(
                    "loaded k-NN ({} points) -> item 0 classified {}",
                    model.len(),
                    knn_classify(&model, query, 3)?.label
                );
            }
            AnyModel::Svm(model) => {
                assert_eq!(model, svm.model);
                println!(
                    "loaded SVM ({} support vectors) -> item 0 classified {}",
                    model.n_support_vectors(),
                    svm_classify(&model, query)?
                );
            }
        }
    }
    Ok(())
}
