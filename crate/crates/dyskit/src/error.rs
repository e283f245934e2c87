//! Crate-wide error type.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    // audio ingest
    #[error("malformed WAV file: {0}")]
    MalformedWav(String),
    #[error("unsupported WAV encoding: {0}")]
    UnsupportedEncoding(String),
    #[error("WAV file contains no audio frames")]
    EmptyAudio,
    #[error("segment [{start_s}, {end_s}) out of range for a clip of {duration_s} s")]
    OutOfRange {
        start_s: f64,
        end_s: f64,
        duration_s: f64,
    },
    #[error("segment [{start_s}, {end_s}) rounds to zero samples")]
    EmptySegment { start_s: f64, end_s: f64 },
    #[error("invalid audio clip: {0}")]
    InvalidClip(String),
    #[error("invalid segment spec: {0}")]
    InvalidSegment(String),

    // MFCC front-end
    #[error("signal is empty")]
    EmptySignal,
    #[error("signal of {len} samples is shorter than one frame ({frame_len} samples)")]
    SignalTooShort { len: usize, frame_len: usize },
    #[error("window length must be at least 2, got {0}")]
    InvalidLength(usize),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("bad FFT size {n_fft}: {reason}")]
    BadFftSize { n_fft: usize, reason: String },
    #[error("negative frequency: {0} Hz")]
    NegativeFrequency(f64),
    #[error("negative mel value: {0}")]
    NegativeMel(f64),
    #[error("mel band too narrow: boundary points {left} and {right} collapse to FFT bin {bin}")]
    BandTooNarrow { left: f64, right: f64, bin: usize },
    #[error("requested {n_ceps} cepstral coefficients from only {n_filters} filter energies")]
    TooManyCoefficients { n_ceps: usize, n_filters: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    // feature space
    #[error("too few frames for aggregation: have {got}, need {need}")]
    TooFewFrames { got: usize, need: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    // classifiers
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("dataset contains only one class ({0})")]
    SingleClassDataset(String),
    #[error("k = {k} is out of range for a model of {size} training points")]
    KTooLarge { k: usize, size: usize },
    #[error("invalid train config: {0}")]
    InvalidTrainConfig(String),

    // corpus
    #[error("manifest parse error at row {row}: {reason}")]
    ManifestParseError { row: usize, reason: String },
    #[error("missing audio file: {0}")]
    MissingAudio(PathBuf),
    #[error("segment error at manifest row {row} ({source_id}): {source}")]
    SegmentError {
        row: usize,
        source_id: String,
        source: Box<Error>,
    },
    #[error("unsupported dysfluency type for synthesis: {0}")]
    UnsupportedType(String),
    #[error("invalid synth params: {0}")]
    InvalidSynthParams(String),

    // evaluation
    #[error("class {class} too small to split: {size} items with train fraction {train_fraction}")]
    ClassTooSmall {
        class: String,
        size: usize,
        train_fraction: f64,
    },
    #[error("class {0} missing from ground truth")]
    MissingClass(String),

    // model files
    #[error("model file error: {0}")]
    ModelFormat(String),

    // cli
    #[error(
        "SVM training did not converge: max KKT violation {max_kkt_violation:.6} \
         exceeds 10x tolerance {tolerance}"
    )]
    DidNotConverge {
        max_kkt_violation: f64,
        tolerance: f64,
    },
    #[error("incompatible features: {0}")]
    IncompatibleFeatures(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
