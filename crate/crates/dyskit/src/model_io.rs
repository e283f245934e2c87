//! Model persistence: versioned, line-oriented text documents.
//!
//! Both formats open with a magic line (`DYSKIT-KNN-v1` /
//! `DYSKIT-SVM-v1`) followed by `key value` metadata lines and one data
//! row per stored vector. Floats are written with 17 significant digits,
//! which round-trips every f64 exactly.

use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::features::AggregationStrategy;
use crate::knn::{ClassLabel, KnnModel};
use crate::svm::{KernelSpec, SvmModel};

pub const KNN_MAGIC: &str = "DYSKIT-KNN-v1";
pub const SVM_MAGIC: &str = "DYSKIT-SVM-v1";

/// Either trained model, as found in a model file.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyModel {
    Knn(KnnModel),
    Svm(SvmModel),
}

impl AnyModel {
    pub fn dimension(&self) -> usize {
        match self {
            AnyModel::Knn(m) => m.dimension,
            AnyModel::Svm(m) => m.dimension,
        }
    }

    pub fn aggregation(&self) -> AggregationStrategy {
        match self {
            AnyModel::Knn(m) => m.aggregation,
            AnyModel::Svm(m) => m.aggregation,
        }
    }
}

fn bad(reason: impl Into<String>) -> Error {
    Error::ModelFormat(reason.into())
}

pub fn knn_model_to_string(model: &KnnModel) -> String {
    let mut out = format!(
        "{KNN_MAGIC}\ndimension {}\naggregation {}\npoints {}\n",
        model.dimension,
        model.aggregation,
        model.points.len()
    );
    for (point, label) in model.points.iter().zip(&model.labels) {
        out.push_str(&label.to_string());
        for v in point {
            out.push_str(&format!(" {v:.16e}"));
        }
        out.push('\n');
    }
    out
}

pub fn svm_model_to_string(model: &SvmModel) -> String {
    let kernel = match model.kernel {
        KernelSpec::Linear => "linear".to_string(),
        KernelSpec::Rbf { gamma } => format!("rbf {gamma:.16e}"),
    };
    let mut out = format!(
        "{SVM_MAGIC}\ndimension {}\naggregation {}\nkernel {}\npositive-label {}\nbias {:.16e}\nsupport-vectors {}\n",
        model.dimension,
        model.aggregation,
        kernel,
        model.positive_label,
        model.bias,
        model.support_vectors.len()
    );
    for (sv, coeff) in model.support_vectors.iter().zip(&model.dual_coeffs) {
        out.push_str(&format!("{coeff:.16e}"));
        for v in sv {
            out.push_str(&format!(" {v:.16e}"));
        }
        out.push('\n');
    }
    out
}

/// Reads `key` + the rest of the line from an expected metadata line.
fn metadata_line<'a>(
    lines: &mut impl Iterator<Item = &'a str>,
    key: &str,
) -> Result<&'a str> {
    let line = lines
        .next()
        .ok_or_else(|| bad(format!("unexpected end of file, expected `{key}`")))?;
    line.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix(' '))
        .ok_or_else(|| bad(format!("expected `{key} <value>`, got `{line}`")))
}

fn parse_floats(tokens: &[&str], row_desc: &str) -> Result<Vec<f64>> {
    tokens
        .iter()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| bad(format!("bad number `{t}` in {row_desc}")))
        })
        .collect()
}

pub fn knn_model_from_str(text: &str) -> Result<KnnModel> {
    let mut lines = text.lines();
    match lines.next() {
        Some(KNN_MAGIC) => {}
        Some(other) => return Err(bad(format!("expected `{KNN_MAGIC}`, got `{other}`"))),
        None => return Err(bad("empty model file")),
    }
    let dimension: usize = metadata_line(&mut lines, "dimension")?
        .parse()
        .map_err(|_| bad("bad dimension"))?;
    if dimension == 0 {
        return Err(bad("dimension must be >= 1"));
    }
    let aggregation = AggregationStrategy::from_str(metadata_line(&mut lines, "aggregation")?)?;
    let n_points: usize = metadata_line(&mut lines, "points")?
        .parse()
        .map_err(|_| bad("bad point count"))?;

    let mut points = Vec::with_capacity(n_points);
    let mut labels = Vec::with_capacity(n_points);
    for i in 0..n_points {
        let line = lines
            .next()
            .ok_or_else(|| bad(format!("expected {n_points} points, found {i}")))?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != dimension + 1 {
            return Err(bad(format!(
                "point row {} has {} fields, expected {}",
                i + 1,
                tokens.len(),
                dimension + 1
            )));
        }
        labels.push(ClassLabel::from_str(tokens[0])?);
        points.push(parse_floats(&tokens[1..], &format!("point row {}", i + 1))?);
    }
    if lines.any(|l| !l.trim().is_empty()) {
        return Err(bad("trailing content after the declared points"));
    }
    if n_points == 0 {
        return Err(bad("model stores no points"));
    }
    if !labels.contains(&ClassLabel::Dysfluent) || !labels.contains(&ClassLabel::Fluent) {
        return Err(bad("model must store points of both classes"));
    }
    Ok(KnnModel {
        points,
        labels,
        dimension,
        aggregation,
    })
}

pub fn svm_model_from_str(text: &str) -> Result<SvmModel> {
    let mut lines = text.lines();
    match lines.next() {
        Some(SVM_MAGIC) => {}
        Some(other) => return Err(bad(format!("expected `{SVM_MAGIC}`, got `{other}`"))),
        None => return Err(bad("empty model file")),
    }
    let dimension: usize = metadata_line(&mut lines, "dimension")?
        .parse()
        .map_err(|_| bad("bad dimension"))?;
    if dimension == 0 {
        return Err(bad("dimension must be >= 1"));
    }
    let aggregation = AggregationStrategy::from_str(metadata_line(&mut lines, "aggregation")?)?;
    let kernel_field = metadata_line(&mut lines, "kernel")?;
    let kernel = match kernel_field.split_whitespace().collect::<Vec<_>>()[..] {
        ["linear"] => KernelSpec::Linear,
        ["rbf", gamma] => KernelSpec::Rbf {
            gamma: gamma
                .parse()
                .map_err(|_| bad(format!("bad rbf gamma `{gamma}`")))?,
        },
        _ => return Err(bad(format!("unknown kernel spec `{kernel_field}`"))),
    };
    kernel
        .validate()
        .map_err(|e| bad(format!("invalid kernel: {e}")))?;
    let positive_label = ClassLabel::from_str(metadata_line(&mut lines, "positive-label")?)?;
    let bias: f64 = metadata_line(&mut lines, "bias")?
        .parse()
        .map_err(|_| bad("bad bias"))?;
    let n_svs: usize = metadata_line(&mut lines, "support-vectors")?
        .parse()
        .map_err(|_| bad("bad support-vector count"))?;

    let mut support_vectors = Vec::with_capacity(n_svs);
    let mut dual_coeffs = Vec::with_capacity(n_svs);
    for i in 0..n_svs {
        let line = lines
            .next()
            .ok_or_else(|| bad(format!("expected {n_svs} support vectors, found {i}")))?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != dimension + 1 {
            return Err(bad(format!(
                "support-vector row {} has {} fields, expected {}",
                i + 1,
                tokens.len(),
                dimension + 1
            )));
        }
        let values = parse_floats(&tokens, &format!("support-vector row {}", i + 1))?;
        dual_coeffs.push(values[0]);
        support_vectors.push(values[1..].to_vec());
    }
    if lines.any(|l| !l.trim().is_empty()) {
        return Err(bad("trailing content after the declared support vectors"));
    }
    Ok(SvmModel {
        support_vectors,
        dual_coeffs,
        bias,
        kernel,
        positive_label,
        dimension,
        aggregation,
    })
}

/// Parses either model kind, dispatching on the magic line.
pub fn model_from_str(text: &str) -> Result<AnyModel> {
    match text.lines().next() {
        Some(KNN_MAGIC) => Ok(AnyModel::Knn(knn_model_from_str(text)?)),
        Some(SVM_MAGIC) => Ok(AnyModel::Svm(svm_model_from_str(text)?)),
        Some(other) => Err(bad(format!(
            "unrecognized model header `{other}` (expected {KNN_MAGIC} or {SVM_MAGIC})"
        ))),
        None => Err(bad("empty model file")),
    }
}

pub fn save_knn_model(path: impl AsRef<Path>, model: &KnnModel) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, knn_model_to_string(model)).map_err(|e| Error::io(path, e))
}

pub fn save_svm_model(path: impl AsRef<Path>, model: &SvmModel) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, svm_model_to_string(model)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<AnyModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    model_from_str(&text)
}
