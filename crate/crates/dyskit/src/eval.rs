//! Evaluation protocol: stratified 80:20 splits, repeated trials,
//! per-class accuracy, and averaged reports.
//!
//! A trial splits the dataset with a per-trial seed, trains the chosen
//! classifier on the train side, and scores the test side per class.
//! Reports render both as a human-readable table (one row per trial plus
//! an average row) and as a flat CSV.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::Dataset;
use crate::error::{Error, Result};
use crate::knn::{knn_classify, knn_train, ClassLabel};
use crate::svm::{svm_classify, svm_train, KernelSpec, SvmTrainConfig};

/// How to partition a dataset into train and test sides.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitConfig {
    /// Fraction of each class (stratified) or of the whole set that goes
    /// to the train side, split at `round(fraction * size)`.
    pub train_fraction: f64,
    pub seed: u64,
    pub stratified: bool,
}

impl Default for SplitConfig {
    fn default() -> Self {
        Self {
            train_fraction: 0.8,
            seed: 0,
            stratified: true,
        }
    }
}

impl SplitConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::InvalidTrainConfig(format!(
                "train_fraction must lie in (0, 1), got {}",
                self.train_fraction
            )));
        }
        Ok(())
    }
}

/// Splits a dataset into disjoint train and test sides, deterministically
/// in the seed. Stratified mode shuffles and splits each class
/// independently, so a 50/50 corpus at 0.8 yields exactly 40/40 + 10/10.
pub fn split_dataset(dataset: &Dataset, config: &SplitConfig) -> Result<(Dataset, Dataset)> {
    config.validate()?;
    dataset.validate()?;
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut train_idx: Vec<usize> = Vec::new();
    let mut test_idx: Vec<usize> = Vec::new();

    let mut split_group = |mut indices: Vec<usize>, class: &str| -> Result<()> {
        let size = indices.len();
        let n_train = (config.train_fraction * size as f64).round() as usize;
        if n_train == 0 || n_train >= size {
            return Err(Error::ClassTooSmall {
                class: class.to_string(),
                size,
                train_fraction: config.train_fraction,
            });
        }
        indices.shuffle(&mut rng);
        train_idx.extend(&indices[..n_train]);
        test_idx.extend(&indices[n_train..]);
        Ok(())
    };

    if config.stratified {
        for class in ClassLabel::ALL {
            let indices: Vec<usize> = dataset
                .items
                .iter()
                .enumerate()
                .filter(|(_, item)| item.label == class)
                .map(|(i, _)| i)
                .collect();
            if indices.is_empty() {
                return Err(Error::MissingClass(class.to_string()));
            }
            split_group(indices, &class.to_string())?;
        }
    } else {
        split_group((0..dataset.len()).collect(), "all")?;
    }

    let take = |idx: &[usize]| Dataset {
        items: idx.iter().map(|&i| dataset.items[i].clone()).collect(),
        aggregation: dataset.aggregation,
        frontend: dataset.frontend.clone(),
    };
    Ok((take(&train_idx), take(&test_idx)))
}

/// Confusion counts with Dysfluent as the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub true_positive: usize,
    pub false_negative: usize,
    pub false_positive: usize,
    pub true_negative: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.true_positive + self.false_negative + self.false_positive + self.true_negative
    }
}

/// Per-class accuracy in percent plus the confusion counts behind it.
pub fn per_class_accuracy(
    predictions: &[ClassLabel],
    truth: &[ClassLabel],
) -> Result<(f64, f64, ConfusionCounts)> {
    if predictions.len() != truth.len() {
        return Err(Error::LengthMismatch {
            expected: truth.len(),
            got: predictions.len(),
        });
    }
    if truth.is_empty() {
        return Err(Error::EmptyDataset);
    }
    for class in ClassLabel::ALL {
        if !truth.contains(&class) {
            return Err(Error::MissingClass(class.to_string()));
        }
    }
    let mut counts = ConfusionCounts {
        true_positive: 0,
        false_negative: 0,
        false_positive: 0,
        true_negative: 0,
    };
    for (pred, actual) in predictions.iter().zip(truth) {
        match (actual, pred) {
            (ClassLabel::Dysfluent, ClassLabel::Dysfluent) => counts.true_positive += 1,
            (ClassLabel::Dysfluent, ClassLabel::Fluent) => counts.false_negative += 1,
            (ClassLabel::Fluent, ClassLabel::Dysfluent) => counts.false_positive += 1,
            (ClassLabel::Fluent, ClassLabel::Fluent) => counts.true_negative += 1,
        }
    }
    let dys_total = counts.true_positive + counts.false_negative;
    let flu_total = counts.false_positive + counts.true_negative;
    Ok((
        100.0 * counts.true_positive as f64 / dys_total as f64,
        100.0 * counts.true_negative as f64 / flu_total as f64,
        counts,
    ))
}

/// Which classifier a trial run trains.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassifierSpec {
    Knn { k: usize },
    Svm(SvmTrainConfig),
}

impl ClassifierSpec {
    /// Stable identifier used in report headers and the machine CSV.
    pub fn id(&self) -> String {
        match self {
            ClassifierSpec::Knn { k } => format!("knn(k={k})"),
            ClassifierSpec::Svm(config) => match config.kernel {
                KernelSpec::Linear => format!("svm(linear,C={})", config.c),
                KernelSpec::Rbf { gamma } => {
                    format!("svm(rbf,gamma={gamma},C={})", config.c)
                }
            },
        }
    }
}

/// One trial's outcome. `converged` is always true for k-NN and reports
/// the SVM solver's KKT convergence otherwise; `svm_max_kkt_violation`
/// carries the solver's worst violation for SVM trials.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub trial: usize,
    pub accuracy_dysfluent: f64,
    pub accuracy_fluent: f64,
    pub confusion: ConfusionCounts,
    pub converged: bool,
    pub svm_max_kkt_violation: Option<f64>,
}

/// All trials of one classifier on one dataset, plus per-class averages
/// (raw arithmetic means; rounding happens only at rendering).
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub classifier_id: String,
    pub trials: Vec<TrialOutcome>,
    pub average_dysfluent: f64,
    pub average_fluent: f64,
}

impl EvalReport {
    pub fn all_converged(&self) -> bool {
        self.trials.iter().all(|t| t.converged)
    }
}

/// Runs the full protocol: for trial `t`, split with seed
/// `base_seed + t` (80:20, stratified), train, and score the test side.
/// The SVM's internal seed is also offset per trial so "different
/// training and testing sets" stay reproducible.
pub fn run_trials(
    dataset: &Dataset,
    classifier: &ClassifierSpec,
    n_trials: usize,
    base_seed: u64,
) -> Result<EvalReport> {
    if n_trials == 0 {
        return Err(Error::InvalidTrainConfig("n_trials must be >= 1".into()));
    }
    if let ClassifierSpec::Knn { k: 0 } = classifier {
        return Err(Error::KTooLarge {
            k: 0,
            size: dataset.len(),
        });
    }
    if let ClassifierSpec::Svm(config) = classifier {
        config.validate()?;
    }
    let mut trials = Vec::with_capacity(n_trials);
    for t in 0..n_trials {
        let split_config = SplitConfig {
            seed: base_seed.wrapping_add(t as u64),
            ..SplitConfig::default()
        };
        let (train, test) = split_dataset(dataset, &split_config)?;
        let truth: Vec<ClassLabel> = test.labels();
        let (predictions, converged, svm_max_kkt_violation) = match classifier {
            ClassifierSpec::Knn { k } => {
                let model = knn_train(&train.features(), &train.labels())?;
                let preds = test
                    .items
                    .iter()
                    .map(|item| Ok(knn_classify(&model, &item.features, *k)?.label))
                    .collect::<Result<Vec<_>>>()?;
                (preds, true, None)
            }
            ClassifierSpec::Svm(config) => {
                let trial_config = SvmTrainConfig {
                    seed: config.seed.wrapping_add(t as u64),
                    ..config.clone()
                };
                let result = svm_train(&train.features(), &train.labels(), &trial_config)?;
                let preds = test
                    .items
                    .iter()
                    .map(|item| svm_classify(&result.model, &item.features))
                    .collect::<Result<Vec<_>>>()?;
                (preds, result.converged, Some(result.max_kkt_violation))
            }
        };
        let (accuracy_dysfluent, accuracy_fluent, confusion) =
            per_class_accuracy(&predictions, &truth)?;
        trials.push(TrialOutcome {
            trial: t + 1,
            accuracy_dysfluent,
            accuracy_fluent,
            confusion,
            converged,
            svm_max_kkt_violation,
        });
    }
    let mean = |f: fn(&TrialOutcome) -> f64| {
        trials.iter().map(f).sum::<f64>() / trials.len() as f64
    };
    let average_dysfluent = mean(|t| t.accuracy_dysfluent);
    let average_fluent = mean(|t| t.accuracy_fluent);
    Ok(EvalReport {
        classifier_id: classifier.id(),
        trials,
        average_dysfluent,
        average_fluent,
    })
}

/// Rounds to 2 decimals, halves away from zero: mean(80,90,90) -> 86.67.
pub fn round2_half_up(x: f64) -> f64 {
    (x * 100.0 + 0.5).floor() / 100.0
}

/// Renders one table over any number of reports (side by side): one row
/// per trial set, one average row, and per-classifier dysfluent/fluent
/// percentage columns.
pub fn render_report_table(reports: &[EvalReport]) -> String {
    let mut out = String::new();
    let label_width = 26;
    let col_width = 14;

    out.push_str(&format!("{:<label_width$}", "Speech samples"));
    for report in reports {
        let group = format!("{} (%)", report.classifier_id);
        out.push_str(&format!("{:^width$}", group, width = 2 * col_width));
    }
    out.push('\n');
    out.push_str(&format!("{:<label_width$}", ""));
    for _ in reports {
        out.push_str(&format!("{:>col_width$}", "dysfluent"));
        out.push_str(&format!("{:>col_width$}", "fluent"));
    }
    out.push('\n');

    let n_trials = reports.first().map_or(0, |r| r.trials.len());
    for t in 0..n_trials {
        out.push_str(&format!("{:<label_width$}", format!("Set {}", t + 1)));
        for report in reports {
            let trial = &report.trials[t];
            out.push_str(&format!(
                "{:>col_width$.2}",
                round2_half_up(trial.accuracy_dysfluent)
            ));
            out.push_str(&format!(
                "{:>col_width$.2}",
                round2_half_up(trial.accuracy_fluent)
            ));
        }
        out.push('\n');
    }
    out.push_str(&format!("{:<label_width$}", "Average classification (%)"));
    for report in reports {
        out.push_str(&format!(
            "{:>col_width$.2}",
            round2_half_up(report.average_dysfluent)
        ));
        out.push_str(&format!(
            "{:>col_width$.2}",
            round2_half_up(report.average_fluent)
        ));
    }
    out.push('\n');
    out
}

/// Flat CSV with one row per trial and class:
/// `trial,classifier,class,accuracy,tp,fn,fp,tn`.
pub fn render_machine_csv(reports: &[EvalReport]) -> String {
    let mut out = String::from("trial,classifier,class,accuracy,tp,fn,fp,tn\n");
    for report in reports {
        for trial in &report.trials {
            let c = &trial.confusion;
            out.push_str(&format!(
                "{},{},dysfluent,{:.2},{},{},{},{}\n",
                trial.trial,
                report.classifier_id,
                round2_half_up(trial.accuracy_dysfluent),
                c.true_positive,
                c.false_negative,
                c.false_positive,
                c.true_negative
            ));
            out.push_str(&format!(
                "{},{},fluent,{:.2},{},{},{},{}\n",
                trial.trial,
                report.classifier_id,
                round2_half_up(trial.accuracy_fluent),
                c.true_positive,
                c.false_negative,
                c.false_positive,
                c.true_negative
            ));
        }
    }
    out
}
