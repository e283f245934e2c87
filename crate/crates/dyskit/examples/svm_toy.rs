//! Support-vector machine training on small hand-made problems.
//!
//! Run with:
//!
//! ```text
//! cargo run --example svm_toy
//! ```
//!
//! The trainer solves the soft-margin dual with sequential minimal
//! optimization: repeatedly pick a multiplier that violates the KKT
//! conditions, pair it with a random partner, and solve that
//! two-variable subproblem analytically. The first problem below is
//! linearly separable; the second (XOR) is not, and shows why the RBF
//! kernel exists.

use dyskit::features::{AggregationStrategy, FeatureVector};
use dyskit::knn::ClassLabel;
use dyskit::svm::{svm_classify, svm_decision, svm_train, KernelSpec, SvmTrainConfig};

fn point(x: f64, y: f64) -> FeatureVector {
    FeatureVector {
        values: vec![x, y],
        aggregation: AggregationStrategy::Mean,
    }
}

fn main() -> dyskit::Result<()> {
    // --- Linearly separable blobs -------------------------------------
    let features = vec![
        point(0.0, 0.2),
        point(0.4, -0.3),
        point(-0.2, 0.1),
        point(3.0, 3.2),
        point(2.8, 2.6),
        point(3.3, 2.9),
    ];
    let labels = vec![
        ClassLabel::Dysfluent,
        ClassLabel::Dysfluent,
        ClassLabel::Dysfluent,
        ClassLabel::Fluent,
        ClassLabel::Fluent,
        ClassLabel::Fluent,
    ];
    let config = SvmTrainConfig::default(); // linear kernel, C = 1
    let result = svm_train(&features, &labels, &config)?;
    println!(
        "linear: converged={} after {} sweeps, worst KKT violation {:.2e}",
        result.converged, result.sweeps, result.max_kkt_violation
    );
    println!(
        "        {} support vectors, bias {:.4}, dual objective {:.4}",
        result.model.n_support_vectors(),
        result.model.bias,
        result.model.dual_objective()
    );

    // For a linear kernel the weight vector is recoverable from the
    // support vectors: w = sum_i coeff_i * sv_i, margin width = 2/|w|.
    let mut w = vec![0.0f64; 2];
    for (sv, coeff) in result
        .model
        .support_vectors
        .iter()
        .zip(&result.model.dual_coeffs)
    {
        for (wd, xd) in w.iter_mut().zip(sv) {
            *wd += coeff * xd;
        }
    }
    let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    println!(
        "        w = ({:.4}, {:.4}), margin width 2/|w| = {:.4}",
        w[0],
        w[1],
        2.0 / norm
    );

    for (x, y) in [(0.0, 0.0), (3.0, 3.0), (1.5, 1.5)] {
        let q = point(x, y);
        println!(
            "        f({x:.1}, {y:.1}) = {:+.4} -> {}",
            svm_decision(&result.model, &q)?,
            svm_classify(&result.model, &q)?
        );
    }

    // --- XOR: not linearly separable ----------------------------------
    let xor_features = vec![
        point(0.0, 0.0),
        point(1.0, 1.0),
        point(0.0, 1.0),
        point(1.0, 0.0),
    ];
    let xor_labels = vec![
        ClassLabel::Dysfluent,
        ClassLabel::Dysfluent,
        ClassLabel::Fluent,
        ClassLabel::Fluent,
    ];

    let linear = svm_train(&xor_features, &xor_labels, &config)?;
    let linear_errors = count_errors(&linear.model, &xor_features, &xor_labels)?;
    println!("xor with linear kernel: {linear_errors}/4 training errors");

    let rbf_config = SvmTrainConfig {
        kernel: KernelSpec::Rbf { gamma: 2.0 },
        c: 10.0,
        ..SvmTrainConfig::default()
    };
    let rbf = svm_train(&xor_features, &xor_labels, &rbf_config)?;
    let rbf_errors = count_errors(&rbf.model, &xor_features, &xor_labels)?;
    println!(
        "xor with rbf(gamma=2) kernel: {rbf_errors}/4 training errors, {} support vectors",
        rbf.model.n_support_vectors()
    );
    Ok(())
}

fn count_errors(
    model: &dyskit::svm::SvmModel,
    features: &[FeatureVector],
    labels: &[ClassLabel],
) -> dyskit::Result<usize> {
    let mut errors = 0;
    for (f, want) in features.iter().zip(labels) {
        if svm_classify(model, f)? != *want {
            errors += 1;
        }
    }
    Ok(errors)
}
