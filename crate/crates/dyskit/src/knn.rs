//! k-nearest-neighbor classifier over feature vectors.
//!
//! Training just stores the labeled points (a lazy learner); classification
//! finds the k nearest by Euclidean distance and takes a majority vote.
//! All ties are broken deterministically so repeat runs agree bit-for-bit.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::features::{euclidean_distance, AggregationStrategy, FeatureVector};

/// The two segment classes. `Dysfluent` orders before `Fluent`; that
/// ordering is the last tie-breaker in voting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassLabel {
    Dysfluent,
    Fluent,
}

impl ClassLabel {
    pub const ALL: [ClassLabel; 2] = [ClassLabel::Dysfluent, ClassLabel::Fluent];
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::Dysfluent => write!(f, "dysfluent"),
            ClassLabel::Fluent => write!(f, "fluent"),
        }
    }
}

impl FromStr for ClassLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dysfluent" => Ok(ClassLabel::Dysfluent),
            "fluent" => Ok(ClassLabel::Fluent),
            other => Err(Error::InvalidConfig(format!(
                "unknown class label: {other} (expected dysfluent or fluent)"
            ))),
        }
    }
}

/// A stored training set: parallel points and labels, plus the
/// aggregation the features were built with.
#[derive(Debug, Clone, PartialEq)]
pub struct KnnModel {
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<ClassLabel>,
    pub dimension: usize,
    pub aggregation: AggregationStrategy,
}

impl KnnModel {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// One scored neighbor of a query point.
#[derive(Debug, Clone, PartialEq)]
pub struct Neighbor {
    /// Index into the model's training points.
    pub index: usize,
    pub distance: f64,
    pub label: ClassLabel,
}

/// Classification outcome: the winning label, the vote split, and the
/// neighbors that produced it (sorted nearest first).
#[derive(Debug, Clone, PartialEq)]
pub struct KnnPrediction {
    pub label: ClassLabel,
    pub votes_dysfluent: usize,
    pub votes_fluent: usize,
    pub neighbors: Vec<Neighbor>,
}

/// Validates and stores the training set verbatim.
pub fn knn_train(features: &[FeatureVector], labels: &[ClassLabel]) -> Result<KnnModel> {
    if features.len() != labels.len() {
        return Err(Error::LengthMismatch {
            expected: features.len(),
            got: labels.len(),
        });
    }
    if features.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let dimension = features[0].dimension();
    let aggregation = features[0].aggregation;
    for fv in features {
        if fv.dimension() != dimension {
            return Err(Error::DimensionMismatch {
                expected: dimension,
                got: fv.dimension(),
            });
        }
        if fv.aggregation != aggregation {
            return Err(Error::InvalidConfig(
                "mixed aggregation strategies in one training set".into(),
            ));
        }
    }
    if !labels.contains(&ClassLabel::Dysfluent) || !labels.contains(&ClassLabel::Fluent) {
        return Err(Error::SingleClassDataset(labels[0].to_string()));
    }
    Ok(KnnModel {
        points: features.iter().map(|f| f.values.clone()).collect(),
        labels: labels.to_vec(),
        dimension,
        aggregation,
    })
}

/// Candidate ordering for the selection heap: greater distance first, and
/// among equal distances the larger training index, so the heap keeps the
/// k candidates with the smallest (distance, index) pairs.
#[derive(Debug, PartialEq)]
struct Candidate {
    distance: f64,
    index: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.distance
            .partial_cmp(&other.distance)
            .unwrap_or(Ordering::Equal)
            .then(self.index.cmp(&other.index))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Classifies one query point against the model with a k-neighbor vote.
///
/// Neighbor selection takes the k smallest (distance, training index)
/// pairs. A tied vote goes to the class with the smaller summed neighbor
/// distance; if that also ties, `Dysfluent` wins by label order.
pub fn knn_classify(model: &KnnModel, query: &FeatureVector, k: usize) -> Result<KnnPrediction> {
    if k == 0 || k > model.len() {
        return Err(Error::KTooLarge { k, size: model.len() });
    }
    if query.dimension() != model.dimension {
        return Err(Error::DimensionMismatch {
            expected: model.dimension,
            got: query.dimension(),
        });
    }
    let mut heap: BinaryHeap<Candidate> = BinaryHeap::with_capacity(k + 1);
    for (index, point) in model.points.iter().enumerate() {
        let distance = euclidean_distance(&query.values, point)?;
        heap.push(Candidate { distance, index });
        if heap.len() > k {
            heap.pop();
        }
    }
    let mut neighbors: Vec<Neighbor> = heap
        .into_iter()
        .map(|c| Neighbor {
            index: c.index,
            distance: c.distance,
            label: model.labels[c.index],
        })
        .collect();
    neighbors.sort_by(|a, b| {
        a.distance
            .partial_cmp(&b.distance)
            .unwrap_or(Ordering::Equal)
            .then(a.index.cmp(&b.index))
    });

    let mut votes = [0usize; 2];
    let mut dist_sums = [0f64; 2];
    for nb in &neighbors {
        let slot = match nb.label {
            ClassLabel::Dysfluent => 0,
            ClassLabel::Fluent => 1,
        };
        votes[slot] += 1;
        dist_sums[slot] += nb.distance;
    }
    let label = match votes[0].cmp(&votes[1]) {
        Ordering::Greater => ClassLabel::Dysfluent,
        Ordering::Less => ClassLabel::Fluent,
        Ordering::Equal => match dist_sums[0].partial_cmp(&dist_sums[1]) {
            Some(Ordering::Less) => ClassLabel::Dysfluent,
            Some(Ordering::Greater) => ClassLabel::Fluent,
            _ => ClassLabel::Dysfluent,
        },
    };
    Ok(KnnPrediction {
        label,
        votes_dysfluent: votes[0],
        votes_fluent: votes[1],
        neighbors,
    })
}
