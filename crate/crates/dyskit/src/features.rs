//! Per-segment feature vectors: collapsing a variable-length MFCC matrix
//! into one fixed-length vector a classifier can consume.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mfcc::MfccMatrix;

/// How frame-level cepstra are pooled over time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AggregationStrategy {
    /// Coefficient-wise mean: dimension `n_ceps`.
    Mean,
    /// Mean followed by population standard deviation: dimension `2 * n_ceps`.
    MeanStd,
}

impl fmt::Display for AggregationStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AggregationStrategy::Mean => write!(f, "mean"),
            AggregationStrategy::MeanStd => write!(f, "mean-std"),
        }
    }
}

impl FromStr for AggregationStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean" => Ok(AggregationStrategy::Mean),
            "mean-std" => Ok(AggregationStrategy::MeanStd),
            other => Err(Error::InvalidConfig(format!(
                "unknown aggregation strategy: {other} (expected mean or mean-std)"
            ))),
        }
    }
}

/// A fixed-length representation of one segment.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub aggregation: AggregationStrategy,
}

impl FeatureVector {
    pub fn dimension(&self) -> usize {
        self.values.len()
    }
}

/// Pools an MFCC matrix into a single vector.
///
/// With [`AggregationStrategy::MeanStd`] the layout is all means first,
/// then all standard deviations (population form, divisor `n_frames`);
/// a meaningful deviation needs at least two frames.
pub fn aggregate(mfcc: &MfccMatrix, strategy: AggregationStrategy) -> Result<FeatureVector> {
    let n_frames = mfcc.n_frames();
    let need = match strategy {
        AggregationStrategy::Mean => 1,
        AggregationStrategy::MeanStd => 2,
    };
    if n_frames < need {
        return Err(Error::TooFewFrames {
            got: n_frames,
            need,
        });
    }
    let n_ceps = mfcc.n_ceps();
    let mut means = vec![0.0; n_ceps];
    for row in &mfcc.coeffs {
        for (m, &c) in means.iter_mut().zip(row) {
            *m += c;
        }
    }
    for m in &mut means {
        *m /= n_frames as f64;
    }

    let values = match strategy {
        AggregationStrategy::Mean => means,
        AggregationStrategy::MeanStd => {
            let mut variances = vec![0.0; n_ceps];
            for row in &mfcc.coeffs {
                for ((v, &c), &m) in variances.iter_mut().zip(row).zip(&means) {
                    let d = c - m;
                    *v += d * d;
                }
            }
            let mut out = means;
            for v in &variances {
                out.push((v / n_frames as f64).sqrt());
            }
            out
        }
    };
    Ok(FeatureVector {
        values,
        aggregation: strategy,
    })
}

/// Plain Euclidean distance between equal-length vectors.
pub fn euclidean_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}
