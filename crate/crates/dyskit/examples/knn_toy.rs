//! k-nearest-neighbor classification on a tiny hand-made feature space.
//!
//! Run with:
//!
//! ```text
//! cargo run --example knn_toy
//! ```
//!
//! Feature vectors normally come out of the MFCC front-end (see the
//! `extract_mfcc` example); here they are written by hand so the classifier
//! mechanics are easy to follow: majority vote among the k nearest training
//! points by Euclidean distance, with distance-sum and then dysfluent-first
//! tie-breaking.

use dyskit::features::{AggregationStrategy, FeatureVector};
use dyskit::knn::{knn_classify, knn_train, ClassLabel};

fn point(x: f64, y: f64) -> FeatureVector {
    FeatureVector {
        values: vec![x, y],
        aggregation: AggregationStrategy::Mean,
    }
}

fn main() -> dyskit::Result<()> {
    // Two clusters: dysfluent near (0, 0), fluent near (4, 4).
    let features = vec![
        point(0.0, 0.0),
        point(0.5, 0.4),
        point(0.2, 0.9),
        point(4.0, 4.0),
        point(3.6, 4.2),
        point(4.3, 3.7),
    ];
    let labels = vec![
        ClassLabel::Dysfluent,
        ClassLabel::Dysfluent,
        ClassLabel::Dysfluent,
        ClassLabel::Fluent,
        ClassLabel::Fluent,
        ClassLabel::Fluent,
    ];
    // "Training" stores the points verbatim; k is chosen per query.
    let model = knn_train(&features, &labels)?;
    println!(
        "model: {} points, dimension {}",
        model.len(),
        model.dimension
    );

    for (qx, qy) in [(0.4, 0.5), (3.9, 3.9), (2.0, 2.0)] {
        let query = point(qx, qy);
        let prediction = knn_classify(&model, &query, 3)?;
        println!(
            "query ({qx:.1}, {qy:.1}) -> {} (votes: {} dysfluent, {} fluent)",
            prediction.label, prediction.votes_dysfluent, prediction.votes_fluent
        );
        for n in &prediction.neighbors {
            println!(
                "    neighbor #{} at distance {:.3} is {}",
                n.index, n.distance, n.label
            );
        }
    }

    // k = 1 degenerates to nearest-neighbor; k must not exceed the
    // training size.
    let nearest = knn_classify(&model, &point(3.0, 3.0), 1)?;
    println!("k=1 near the fluent cluster -> {}", nearest.label);

    let err = knn_classify(&model, &point(0.0, 0.0), 7).unwrap_err();
    println!("k=7 on 6 points is rejected: {err}");
    Ok(())
}
