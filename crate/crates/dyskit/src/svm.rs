//! Two-class soft-margin SVM trained by sequential minimal optimization.
//!
//! The solver works on the dual problem: maximize
//! `W(a) = sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j K(x_i, x_j)`
//! subject to `0 <= a_i <= C` and `sum_i a_i y_i = 0`, updating one pair
//! of multipliers at a time with analytic clipping so both constraints
//! hold exactly throughout. The second index of each pair is drawn from a
//! seeded generator, making training fully deterministic.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::features::{AggregationStrategy, FeatureVector};
use crate::knn::ClassLabel;

/// Kernel selection. `Linear` is the plain inner product; `Rbf` is
/// `exp(-gamma * ||a - b||^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    Linear,
    Rbf { gamma: f64 },
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            KernelSpec::Linear => Ok(()),
            KernelSpec::Rbf { gamma } if *gamma > 0.0 && gamma.is_finite() => Ok(()),
            KernelSpec::Rbf { gamma } => Err(Error::InvalidTrainConfig(format!(
                "RBF gamma must be positive and finite, got {gamma}"
            ))),
        }
    }

    /// Scale-free default width for RBF: 1/d for feature dimension d.
    pub fn rbf_default(dimension: usize) -> KernelSpec {
        KernelSpec::Rbf {
            gamma: 1.0 / dimension.max(1) as f64,
        }
    }
}

/// Evaluates the kernel on two equal-length vectors.
pub fn kernel_eval(spec: KernelSpec, a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(match spec {
        KernelSpec::Linear => a.iter().zip(b).map(|(x, y)| x * y).sum(),
        KernelSpec::Rbf { gamma } => {
            let sq: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
            (-gamma * sq).exp()
        }
    })
}

/// Training knobs. Defaults follow common SMO practice; everything is
/// overridable.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmTrainConfig {
    /// Box constraint: soft-margin penalty weight.
    pub c: f64,
    /// Dual-update threshold and KKT slack for convergence.
    pub tolerance: f64,
    /// Consecutive no-change sweeps required before stopping.
    pub max_passes: usize,
    pub kernel: KernelSpec,
    /// Seeds the second-index draws; same seed, same model.
    pub seed: u64,
}

impl Default for SvmTrainConfig {
    fn default() -> Self {
        Self {
            c: 1.0,
            tolerance: 1e-3,
            max_passes: 100,
            kernel: KernelSpec::Linear,
            seed: 0,
        }
    }
}

impl SvmTrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidTrainConfig(format!(
                "C must be positive and finite, got {}",
                self.c
            )));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidTrainConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_passes == 0 {
            return Err(Error::InvalidTrainConfig("max_passes must be >= 1".into()));
        }
        self.kernel.validate()
    }
}

/// A trained model: only the points with nonzero multipliers are kept.
///
/// `dual_coeffs[i]` stores `a_i * y_i`, so the decision function is
/// `f(x) = sum_i dual_coeffs[i] * K(sv_i, x) + bias`. The class encoded
/// as +1 is recorded in `positive_label`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    pub support_vectors: Vec<Vec<f64>>,
    pub dual_coeffs: Vec<f64>,
    pub bias: f64,
    pub kernel: KernelSpec,
    pub positive_label: ClassLabel,
    pub dimension: usize,
    pub aggregation: AggregationStrategy,
}

impl SvmModel {
    pub fn n_support_vectors(&self) -> usize {
        self.support_vectors.len()
    }

    /// Dual objective value of this solution,
    /// `W = sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j K(x_i, x_j)`,
    /// computed from the stored coefficients (`a_i = |dual_coeffs[i]|`).
    /// Points with zero multiplier contribute nothing, so restricting the
    /// sums to support vectors is exact.
    pub fn dual_objective(&self) -> f64 {
        let linear: f64 = self.dual_coeffs.iter().map(|c| c.abs()).sum();
        let mut quad = 0.0;
        for (i, sv_i) in self.support_vectors.iter().enumerate() {
            for (j, sv_j) in self.support_vectors.iter().enumerate() {
                let k = kernel_eval(self.kernel, sv_i, sv_j)
                    .expect("support vectors share one dimension");
                quad += self.dual_coeffs[i] * self.dual_coeffs[j] * k;
            }
        }
        linear - 0.5 * quad
    }
}

/// Outcome of a training run. The model is always usable; `converged`
/// reports whether the KKT conditions hold within the configured
/// tolerance, and `max_kkt_violation` quantifies the worst miss.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmTrainResult {
    pub model: SvmModel,
    pub converged: bool,
    pub max_kkt_violation: f64,
    pub sweeps: usize,
}

/// Rounds a multiplier sitting within `1e-12 * C` of either box bound
/// onto that bound. Kept well below the `1e-9` budget the dual equality
/// constraint is tested against.
fn snap_to_box(a: f64, c: f64) -> f64 {
    const SNAP: f64 = 1e-12;
    if a <= c * SNAP {
        0.0
    } else if a >= c * (1.0 - SNAP) {
        c
    } else {
        a
    }
}

/// Bias consistent with the current multipliers: the average of
/// `y_i - g_i` over free support vectors (`0 < a_i < C`), falling back
/// to the midpoint of the interval the KKT inequalities leave feasible
/// when none are free. `g_all[i]` is the decision value without bias.
fn anchored_bias(alpha: &[f64], y: &[f64], g_all: &[f64], c: f64) -> f64 {
    let n = alpha.len();
    let free: Vec<usize> = (0..n)
        .filter(|&i| alpha[i] > 0.0 && alpha[i] < c)
        .collect();
    if !free.is_empty() {
        return free.iter().map(|&i| y[i] - g_all[i]).sum::<f64>() / free.len() as f64;
    }
    let mut b_low = f64::NEG_INFINITY;
    let mut b_high = f64::INFINITY;
    for i in 0..n {
        // y=+1, a=0 needs b >= 1 - g; y=-1, a=C needs b >= -1 - g;
        // y=+1, a=C needs b <= 1 - g; y=-1, a=0 needs b <= -1 - g
        let bound = y[i] - g_all[i];
        let is_lower = (y[i] > 0.0) == (alpha[i] == 0.0);
        if is_lower {
            b_low = b_low.max(bound);
        } else {
            b_high = b_high.min(bound);
        }
    }
    match (b_low.is_finite(), b_high.is_finite()) {
        (true, true) => (b_low + b_high) / 2.0,
        (true, false) => b_low,
        (false, true) => b_high,
        (false, false) => 0.0,
    }
}

/// Trains a model with SMO. The `Dysfluent` class is bound to +1.
///
/// Termination: stops early once a sweep finds no KKT violator, otherwise
/// after `max_passes` consecutive sweeps in which no multiplier moved by
/// more than `tolerance` (with a generous hard sweep cap as a backstop).
/// The working bias is re-anchored to the multipliers at every sweep and
/// the final bias is the mean of `y_i - g(x_i)` over free support vectors
/// (`0 < a_i < C`), falling back to the midpoint of the KKT-feasible bias
/// interval when none are free.
pub fn svm_train(
    features: &[FeatureVector],
    labels: &[ClassLabel],
    config: &SvmTrainConfig,
) -> Result<SvmTrainResult> {
    config.validate()?;
    if features.len() != labels.len() {
        return Err(Error::LengthMismatch {
            expected: features.len(),
            got: labels.len(),
        });
    }
    if features.len() < 2 {
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
    }
    if !labels.contains(&ClassLabel::Dysfluent) || !labels.contains(&ClassLabel::Fluent) {
        return Err(Error::SingleClassDataset(labels[0].to_string()));
    }

    let n = features.len();
    let y: Vec<f64> = labels
        .iter()
        .map(|l| match l {
            ClassLabel::Dysfluent => 1.0,
            ClassLabel::Fluent => -1.0,
        })
        .collect();
    let points: Vec<&[f64]> = features.iter().map(|f| f.values.as_slice()).collect();

    // Gram matrix: n stays small here (hundreds), so n^2 storage buys
    // O(1) kernel lookups everywhere below.
    let mut gram = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let k = kernel_eval(config.kernel, points[i], points[j])?;
            gram[i * n + j] = k;
            gram[j * n + i] = k;
        }
    }
    let kmat = |i: usize, j: usize| gram[i * n + j];

    let c = config.c;
    let tol = config.tolerance;
    let mut alpha = vec![0.0f64; n];
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    // g(x_i) without bias; f(x_i) = g_i + b
    let g = |alpha: &[f64], i: usize| -> f64 {
        let mut acc = 0.0;
        for j in 0..n {
            if alpha[j] != 0.0 {
                acc += alpha[j] * y[j] * kmat(j, i);
            }
        }
        acc
    };

    // Steps below this are pure floating-point churn and are dropped;
    // genuinely small productive steps still go through, so the quiet
    // counter below (not this guard) decides termination.
    const MIN_STEP: f64 = 1e-12;

    let mut quiet_sweeps = 0usize;
    let mut sweeps = 0usize;
    let sweep_cap = config.max_passes.saturating_mul(200).max(1000);
    while quiet_sweeps < config.max_passes && sweeps < sweep_cap {
        sweeps += 1;
        // Re-anchor the working bias to the current multipliers each
        // sweep. The pairwise step itself is bias-independent, but
        // violator *selection* is not: left to the running b1/b2
        // estimate alone it drifts, hides true violators, and stalls.
        let g_now: Vec<f64> = (0..n).map(|i| g(&alpha, i)).collect();
        let mut b = anchored_bias(&alpha, &y, &g_now, c);
        let mut max_delta = 0.0f64;
        let mut any_violator = false;
        for i in 0..n {
            let e_i = g(&alpha, i) + b - y[i];
            let r_i = y[i] * e_i;
            if !((r_i < -tol && alpha[i] < c) || (r_i > tol && alpha[i] > 0.0)) {
                continue;
            }
            any_violator = true;
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let e_j = g(&alpha, j) + b - y[j];
            let (a_i_old, a_j_old) = (alpha[i], alpha[j]);
            let (low, high) = if y[i] != y[j] {
                ((a_j_old - a_i_old).max(0.0), (c + a_j_old - a_i_old).min(c))
            } else {
                ((a_i_old + a_j_old - c).max(0.0), (a_i_old + a_j_old).min(c))
            };
            if low >= high {
                continue;
            }
            let eta = 2.0 * kmat(i, j) - kmat(i, i) - kmat(j, j);
            if eta >= 0.0 {
                continue;
            }
            let a_j_new = (a_j_old - y[j] * (e_i - e_j) / eta).clamp(low, high);
            if (a_j_new - a_j_old).abs() < MIN_STEP {
                continue;
            }
            let a_i_new = a_i_old + y[i] * y[j] * (a_j_old - a_j_new);
            // Snap to the box: shedding a multiplier cancels exactly in
            // real arithmetic, but roundoff leaves ~1e-19 residues that
            // would otherwise masquerade as free support vectors and
            // poison both the bias anchor and the KKT classification.
            alpha[j] = snap_to_box(a_j_new.clamp(0.0, c), c);
            alpha[i] = snap_to_box(a_i_new.clamp(0.0, c), c);

            let b1 = b - e_i
                - y[i] * (alpha[i] - a_i_old) * kmat(i, i)
                - y[j] * (alpha[j] - a_j_old) * kmat(i, j);
            let b2 = b - e_j
                - y[i] * (alpha[i] - a_i_old) * kmat(i, j)
                - y[j] * (alpha[j] - a_j_old) * kmat(j, j);
            b = if alpha[i] > 0.0 && alpha[i] < c {
                b1
            } else if alpha[j] > 0.0 && alpha[j] < c {
                b2
            } else {
                (b1 + b2) / 2.0
            };
            max_delta = max_delta.max((a_j_new - a_j_old).abs());
        }
        if !any_violator {
            break;
        }
        if max_delta <= tol {
            quiet_sweeps += 1;
        } else {
            quiet_sweeps = 0;
        }
    }

    let g_all: Vec<f64> = (0..n).map(|i| g(&alpha, i)).collect();
    let bias = anchored_bias(&alpha, &y, &g_all, c);

    let max_kkt_violation = (0..n)
        .map(|i| {
            let margin = y[i] * (g_all[i] + bias);
            if alpha[i] == 0.0 {
                (1.0 - margin).max(0.0)
            } else if alpha[i] == c {
                (margin - 1.0).max(0.0)
            } else {
                (margin - 1.0).abs()
            }
        })
        .fold(0.0, f64::max);

    let mut support_vectors = Vec::new();
    let mut dual_coeffs = Vec::new();
    for i in 0..n {
        if alpha[i] > 0.0 {
            support_vectors.push(points[i].to_vec());
            dual_coeffs.push(alpha[i] * y[i]);
        }
    }

    Ok(SvmTrainResult {
        model: SvmModel {
            support_vectors,
            dual_coeffs,
            bias,
            kernel: config.kernel,
            positive_label: ClassLabel::Dysfluent,
            dimension,
            aggregation,
        },
        converged: max_kkt_violation <= tol,
        max_kkt_violation,
        sweeps,
    })
}

/// Un-signed margin value `sum_i dual_coeffs[i] * K(sv_i, x) + bias`.
pub fn svm_decision(model: &SvmModel, x: &FeatureVector) -> Result<f64> {
    if x.dimension() != model.dimension {
        return Err(Error::DimensionMismatch {
            expected: model.dimension,
            got: x.dimension(),
        });
    }
    let mut acc = model.bias;
    for (sv, coeff) in model.support_vectors.iter().zip(&model.dual_coeffs) {
        acc += coeff * kernel_eval(model.kernel, sv, &x.values)?;
    }
    Ok(acc)
}

/// Sign of the decision value, mapped through the stored label binding.
/// A decision of exactly 0 goes to the positive class.
pub fn svm_classify(model: &SvmModel, x: &FeatureVector) -> Result<ClassLabel> {
    let value = svm_decision(model, x)?;
    let negative_label = match model.positive_label {
        ClassLabel::Dysfluent => ClassLabel::Fluent,
        ClassLabel::Fluent => ClassLabel::Dysfluent,
    };
    Ok(match value.partial_cmp(&0.0) {
        Some(Ordering::Less) => negative_label,
        _ => model.positive_label,
    })
}
