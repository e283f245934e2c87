//! Command-line front door: `extract`, `synth`, `train`, `classify`,
//! and `evaluate` subcommands over the library pipeline.
//!
//! Every run prints its resolved configuration before acting, and every
//! subcommand that takes `--seed` is end-to-end deterministic: the same
//! arguments produce byte-identical files and stdout. Exit codes are
//! stable so scripts can branch on failures: 0 success, 2 usage or
//! malformed manifest/model documents, 3 audio decoding/segmentation,
//! 4 file I/O, 5 class balance, 6 SVM non-convergence, 7 feature/model
//! mismatch, 1 anything else.

use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};

use crate::audio::{extract_segment, read_wav, write_wav, SegmentSpec};
use crate::corpus::{
    build_synthetic_dataset, corpus_item_params, load_manifest, synth_dysfluent, synth_fluent,
    write_manifest, Dataset, SynthParams,
};
use crate::error::{Error, Result};
use crate::eval::{
    render_machine_csv, render_report_table, run_trials, ClassifierSpec, EvalReport,
};
use crate::features::{aggregate, AggregationStrategy, FeatureVector};
use crate::knn::{knn_classify, knn_train, ClassLabel};
use crate::mfcc::{compute_mfcc, FrontendConfig};
use crate::model_io::{load_model, save_knn_model, save_svm_model, AnyModel};
use crate::svm::{svm_classify, svm_decision, svm_train, KernelSpec, SvmTrainConfig, SvmTrainResult};

/// Parses the process arguments, runs the chosen subcommand, and
/// returns the process exit code. `main` should do nothing but
/// `std::process::exit(cli::run())`.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage errors land on stderr with code 2 (the same bucket
            // as malformed manifests); --help/--version exit cleanly.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Extract(args) => cmd_extract(args),
        Command::Synth(args) => cmd_synth(args),
        Command::Train(args) => cmd_train(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Evaluate(args) => cmd_evaluate(args),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Stable mapping from library errors to process exit codes.
fn exit_code(err: &Error) -> i32 {
    match err {
        // usage and malformed documents
        Error::ManifestParseError { .. }
        | Error::EmptyDataset
        | Error::InvalidSegment(_)
        | Error::InvalidConfig(_)
        | Error::InvalidTrainConfig(_)
        | Error::InvalidSynthParams(_)
        | Error::UnsupportedType(_)
        | Error::KTooLarge { .. }
        | Error::ModelFormat(_) => 2,
        // audio decoding and segmentation
        Error::MalformedWav(_)
        | Error::UnsupportedEncoding(_)
        | Error::EmptyAudio
        | Error::OutOfRange { .. }
        | Error::EmptySegment { .. }
        | Error::InvalidClip(_)
        | Error::MissingAudio(_)
        | Error::SegmentError { .. }
        | Error::EmptySignal
        | Error::SignalTooShort { .. } => 3,
        Error::Io { .. } => 4,
        // class balance
        Error::SingleClassDataset(_) | Error::ClassTooSmall { .. } | Error::MissingClass(_) => 5,
        Error::DidNotConverge { .. } => 6,
        // feature/model mismatch
        Error::DimensionMismatch { .. } | Error::IncompatibleFeatures(_) => 7,
        _ => 1,
    }
}

/// Classify speech segments as dysfluent or fluent from MFCC features.
#[derive(Parser, Debug)]
#[command(name = "dyskit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute features for every manifest row and write a feature CSV
    Extract(ExtractArgs),
    /// Generate a synthetic labeled corpus: WAV files plus a manifest
    Synth(SynthArgs),
    /// Train a classifier and save it as a model file
    Train(TrainArgs),
    /// Classify segments with a saved model
    Classify(ClassifyArgs),
    /// Run repeated stratified split/train/test trials and report
    Evaluate(EvaluateArgs),
}

/// Front-end parameters, shared by every subcommand that reads audio.
#[derive(Args, Debug)]
struct FrontendArgs {
    /// Pre-emphasis coefficient a in s2(n) = s(n) - a*s(n-1)
    #[arg(long, default_value_t = FrontendConfig::default().pre_emphasis_a)]
    pre_emphasis: f64,
    /// Frame length in seconds
    #[arg(long, default_value_t = FrontendConfig::default().frame_len_s)]
    frame_len: f64,
    /// Frame hop in seconds
    #[arg(long, default_value_t = FrontendConfig::default().frame_hop_s)]
    frame_hop: f64,
    /// FFT size, a power of two >= the frame length [default: next power of two]
    #[arg(long)]
    n_fft: Option<usize>,
    /// Number of triangular Mel filters
    #[arg(long, default_value_t = FrontendConfig::default().n_mel_filters)]
    n_mels: usize,
    /// Number of cepstral coefficients c1..cN per frame
    #[arg(long, default_value_t = FrontendConfig::default().n_ceps)]
    n_ceps: usize,
    /// Filterbank lower edge in Hz
    #[arg(long, default_value_t = FrontendConfig::default().f_low_hz)]
    f_low: f64,
    /// Filterbank upper edge in Hz [default: Nyquist]
    #[arg(long)]
    f_high: Option<f64>,
    /// Floor applied to filterbank energies before the log
    #[arg(long, default_value_t = FrontendConfig::default().log_floor)]
    log_floor: f64,
}

impl FrontendArgs {
    fn to_config(&self) -> Result<FrontendConfig> {
        let config = FrontendConfig {
            pre_emphasis_a: self.pre_emphasis,
            frame_len_s: self.frame_len,
            frame_hop_s: self.frame_hop,
            n_fft: self.n_fft,
            n_mel_filters: self.n_mels,
            n_ceps: self.n_ceps,
            f_low_hz: self.f_low,
            f_high_hz: self.f_high,
            log_floor: self.log_floor,
        };
        config.validate()?;
        Ok(config)
    }
}

/// SVM solver flags; only consulted when the SVM path is selected.
#[derive(Args, Debug)]
struct SvmArgs {
    /// SVM kernel: linear or rbf
    #[arg(long, default_value = "linear", value_parser = parse_kernel)]
    kernel: KernelKind,
    /// RBF kernel width [default: 1 / feature dimension]
    #[arg(long)]
    gamma: Option<f64>,
    /// Soft-margin penalty C
    #[arg(long, default_value_t = SvmTrainConfig::default().c)]
    c: f64,
    /// KKT tolerance for the solver's convergence test
    #[arg(long, default_value_t = SvmTrainConfig::default().tolerance)]
    tol: f64,
    /// Update-free sweeps over the training set before the solver stops
    #[arg(long, default_value_t = SvmTrainConfig::default().max_passes)]
    max_passes: usize,
}

impl SvmArgs {
    fn to_config(&self, dimension: usize, seed: u64) -> Result<SvmTrainConfig> {
        let kernel = match (self.kernel, self.gamma) {
            (KernelKind::Linear, None) => KernelSpec::Linear,
            (KernelKind::Linear, Some(_)) => {
                return Err(Error::InvalidConfig(
                    "--gamma only applies to the rbf kernel".into(),
                ))
            }
            (KernelKind::Rbf, Some(gamma)) => KernelSpec::Rbf { gamma },
            (KernelKind::Rbf, None) => KernelSpec::rbf_default(dimension),
        };
        let config = SvmTrainConfig {
            c: self.c,
            tolerance: self.tol,
            max_passes: self.max_passes,
            kernel,
            seed,
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum KernelKind {
    Linear,
    Rbf,
}

fn parse_kernel(s: &str) -> std::result::Result<KernelKind, String> {
    match s {
        "linear" => Ok(KernelKind::Linear),
        "rbf" => Ok(KernelKind::Rbf),
        other => Err(format!("unknown kernel: {other} (expected linear or rbf)")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ClfKind {
    Knn,
    Svm,
}

fn parse_clf(s: &str) -> std::result::Result<ClfKind, String> {
    match s {
        "knn" => Ok(ClfKind::Knn),
        "svm" => Ok(ClfKind::Svm),
        other => Err(format!("unknown classifier: {other} (expected knn or svm)")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ClfChoice {
    Knn,
    Svm,
    Both,
}

fn parse_clf_choice(s: &str) -> std::result::Result<ClfChoice, String> {
    match s {
        "knn" => Ok(ClfChoice::Knn),
        "svm" => Ok(ClfChoice::Svm),
        "both" => Ok(ClfChoice::Both),
        other => Err(format!(
            "unknown classifier: {other} (expected knn, svm, or both)"
        )),
    }
}

fn parse_agg(s: &str) -> std::result::Result<AggregationStrategy, String> {
    s.parse::<AggregationStrategy>().map_err(|e| e.to_string())
}

fn kernel_desc(kernel: KernelSpec) -> String {
    match kernel {
        KernelSpec::Linear => "linear".into(),
        KernelSpec::Rbf { gamma } => format!("rbf(gamma={gamma})"),
    }
}

/// Loads a dataset from exactly one of a feature CSV or a manifest, and
/// returns it with a short description for the config line.
fn load_dataset(
    features: Option<&PathBuf>,
    manifest: Option<&PathBuf>,
    frontend: &FrontendArgs,
    agg: AggregationStrategy,
) -> Result<(Dataset, String)> {
    match (features, manifest) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            let dataset = Dataset::from_feature_csv_str(&text)?;
            Ok((dataset, format!("features={}", path.display())))
        }
        (None, Some(path)) => {
            let config = frontend.to_config()?;
            let dataset = load_manifest(path, &config, agg)?;
            Ok((dataset, format!("manifest={}", path.display())))
        }
        _ => unreachable!("the argument group enforces exactly one source"),
    }
}

/// Hard non-convergence (violations above 10x tolerance) aborts unless
/// --allow-unconverged; milder misses only warn on stderr.
fn enforce_convergence(result: &SvmTrainResult, tolerance: f64, allow: bool) -> Result<()> {
    if result.converged {
        return Ok(());
    }
    eprintln!(
        "warning: solver stopped after {} sweeps with max KKT violation {:.6}",
        result.sweeps, result.max_kkt_violation
    );
    if result.max_kkt_violation > 10.0 * tolerance && !allow {
        return Err(Error::DidNotConverge {
            max_kkt_violation: result.max_kkt_violation,
            tolerance,
        });
    }
    Ok(())
}

/// Per-trial version of [`enforce_convergence`] for evaluation runs.
fn enforce_report_convergence(report: &EvalReport, tolerance: f64, allow: bool) -> Result<()> {
    for trial in &report.trials {
        let Some(violation) = trial.svm_max_kkt_violation else {
            continue;
        };
        if trial.converged {
            continue;
        }
        eprintln!(
            "warning: trial {} solver stopped with max KKT violation {violation:.6}",
            trial.trial
        );
        if violation > 10.0 * tolerance && !allow {
            return Err(Error::DidNotConverge {
                max_kkt_violation: violation,
                tolerance,
            });
        }
    }
    Ok(())
}

#[derive(Args, Debug)]
struct ExtractArgs {
    /// Segment manifest CSV (file,start_s,end_s,label,dysfluency_type)
    #[arg(long)]
    manifest: PathBuf,
    /// Output feature CSV path
    #[arg(long)]
    out: PathBuf,
    /// Frame aggregation: mean or mean-std
    #[arg(long, default_value = "mean", value_parser = parse_agg)]
    agg: AggregationStrategy,
    #[command(flatten)]
    frontend: FrontendArgs,
}

fn cmd_extract(args: &ExtractArgs) -> Result<()> {
    let frontend = args.frontend.to_config()?;
    println!(
        "config: extract manifest={} out={} agg={} {}",
        args.manifest.display(),
        args.out.display(),
        args.agg,
        frontend.to_kv_string()
    );
    let dataset = load_manifest(&args.manifest, &frontend, args.agg)?;
    std::fs::write(&args.out, dataset.to_feature_csv_string())
        .map_err(|e| Error::io(&args.out, e))?;
    println!(
        "extracted {} items, dimension {} -> {}",
        dataset.len(),
        dataset.dimension(),
        args.out.display()
    );
    Ok(())
}

#[derive(Args, Debug)]
struct SynthArgs {
    /// Output directory for the WAV files plus manifest.csv
    #[arg(long)]
    out_dir: PathBuf,
    /// Utterances per class
    #[arg(long, default_value_t = 50)]
    per_class: usize,
    /// Base RNG seed; every output byte is a pure function of it
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sample rate in Hz
    #[arg(long, default_value_t = SynthParams::default().sample_rate_hz)]
    sample_rate: u32,
    /// Syllables per utterance
    #[arg(long, default_value_t = SynthParams::default().syllable_count)]
    syllables: usize,
    /// Nominal voice pitch in Hz
    #[arg(long, default_value_t = SynthParams::default().base_pitch_hz)]
    base_pitch: f64,
    /// Fraction of syllables carrying a dysfluency event
    #[arg(long, default_value_t = SynthParams::default().dysfluency_rate)]
    dysfluency_rate: f64,
}

fn cmd_synth(args: &SynthArgs) -> Result<()> {
    let params = SynthParams {
        seed: args.seed,
        sample_rate_hz: args.sample_rate,
        syllable_count: args.syllables,
        base_pitch_hz: args.base_pitch,
        dysfluency_rate: args.dysfluency_rate,
    };
    params.validate()?;
    if args.per_class < 2 {
        return Err(Error::InvalidSynthParams(format!(
            "per-class must be >= 2 so the corpus can be split, got {}",
            args.per_class
        )));
    }
    println!(
        "config: synth out_dir={} per_class={} seed={} sample_rate_hz={} syllable_count={} \
         base_pitch_hz={} dysfluency_rate={}",
        args.out_dir.display(),
        args.per_class,
        params.seed,
        params.sample_rate_hz,
        params.syllable_count,
        params.base_pitch_hz,
        params.dysfluency_rate
    );
    std::fs::create_dir_all(&args.out_dir).map_err(|e| Error::io(&args.out_dir, e))?;
    let mut rows = Vec::with_capacity(2 * args.per_class);
    for index in 0..2 * args.per_class {
        let (item_params, label, dys_type, source_id) =
            corpus_item_params(&params, args.per_class, index);
        let clip = match dys_type {
            Some(t) => synth_dysfluent(&item_params, t)?,
            None => synth_fluent(&item_params)?,
        };
        let file = format!("{source_id}.wav");
        write_wav(args.out_dir.join(&file), &clip)?;
        rows.push(SegmentSpec::new(
            PathBuf::from(file),
            0.0,
            clip.duration_s(),
            label,
            dys_type,
        )?);
    }
    let manifest_path = args.out_dir.join("manifest.csv");
    write_manifest(&manifest_path, &rows)?;
    println!("wrote {} wav files and {}", rows.len(), manifest_path.display());
    Ok(())
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("source").required(true)))]
struct TrainArgs {
    /// Feature CSV produced by `extract`
    #[arg(long, group = "source")]
    features: Option<PathBuf>,
    /// Segment manifest CSV; features are computed on the fly
    #[arg(long, group = "source")]
    manifest: Option<PathBuf>,
    /// Classifier to train: knn or svm
    #[arg(long, value_parser = parse_clf)]
    clf: ClfKind,
    /// Output model file path
    #[arg(long)]
    model_out: PathBuf,
    /// Frame aggregation when reading a manifest: mean or mean-std
    #[arg(long, default_value = "mean", value_parser = parse_agg)]
    agg: AggregationStrategy,
    /// RNG seed for the SMO working-pair selection
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Save an SVM model even if the solver did not converge
    #[arg(long)]
    allow_unconverged: bool,
    #[command(flatten)]
    frontend: FrontendArgs,
    #[command(flatten)]
    svm: SvmArgs,
}

fn cmd_train(args: &TrainArgs) -> Result<()> {
    let (dataset, source_desc) = load_dataset(
        args.features.as_ref(),
        args.manifest.as_ref(),
        &args.frontend,
        args.agg,
    )?;
    match args.clf {
        ClfKind::Knn => {
            println!(
                "config: train clf=knn {} model_out={} agg={} {}",
                source_desc,
                args.model_out.display(),
                dataset.aggregation,
                dataset.frontend.to_kv_string()
            );
            let model = knn_train(&dataset.features(), &dataset.labels())?;
            save_knn_model(&args.model_out, &model)?;
            println!(
                "trained knn model storing {} points, dimension {} -> {}",
                model.len(),
                model.dimension,
                args.model_out.display()
            );
        }
        ClfKind::Svm => {
            let config = args.svm.to_config(dataset.dimension(), args.seed)?;
            println!(
                "config: train clf=svm {} model_out={} agg={} kernel={} c={} tol={} \
                 max_passes={} seed={} {}",
                source_desc,
                args.model_out.display(),
                dataset.aggregation,
                kernel_desc(config.kernel),
                config.c,
                config.tolerance,
                config.max_passes,
                config.seed,
                dataset.frontend.to_kv_string()
            );
            let result = svm_train(&dataset.features(), &dataset.labels(), &config)?;
            enforce_convergence(&result, config.tolerance, args.allow_unconverged)?;
            save_svm_model(&args.model_out, &result.model)?;
            println!(
                "trained svm model: {} support vectors, dimension {}, bias {:.6}, \
                 converged={} -> {}",
                result.model.n_support_vectors(),
                result.model.dimension,
                result.model.bias,
                result.converged,
                args.model_out.display()
            );
        }
    }
    Ok(())
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("input").required(true)))]
struct ClassifyArgs {
    /// Model file written by `train`
    #[arg(long)]
    model: PathBuf,
    /// Feature CSV with query rows
    #[arg(long, group = "input")]
    features: Option<PathBuf>,
    /// WAV file to classify (whole file unless --start/--end are given)
    #[arg(long, group = "input")]
    wav: Option<PathBuf>,
    /// Segment start in seconds
    #[arg(long, requires = "wav")]
    start: Option<f64>,
    /// Segment end in seconds
    #[arg(long, requires = "wav")]
    end: Option<f64>,
    /// Neighbors consulted per query (k-NN models only) [default: 3]
    #[arg(long)]
    k: Option<usize>,
    #[command(flatten)]
    frontend: FrontendArgs,
}

fn cmd_classify(args: &ClassifyArgs) -> Result<()> {
    let model = load_model(&args.model)?;
    let k = match (&model, args.k) {
        (AnyModel::Svm(_), Some(_)) => {
            return Err(Error::InvalidConfig(
                "--k only applies to k-NN models".into(),
            ))
        }
        (AnyModel::Svm(_), None) => 0,
        (AnyModel::Knn(_), k) => k.unwrap_or(3),
    };
    let input_desc = match (&args.features, &args.wav) {
        (Some(path), None) => format!("features={}", path.display()),
        (None, Some(path)) => format!("wav={}", path.display()),
        _ => unreachable!("the argument group enforces exactly one input"),
    };
    let clf_desc = match &model {
        AnyModel::Knn(m) => format!("clf=knn k={k} points={}", m.len()),
        AnyModel::Svm(m) => format!(
            "clf=svm kernel={} support_vectors={}",
            kernel_desc(m.kernel),
            m.n_support_vectors()
        ),
    };
    println!(
        "config: classify model={} {} {} agg={} dimension={}",
        args.model.display(),
        input_desc,
        clf_desc,
        model.aggregation(),
        model.dimension()
    );

    let queries: Vec<(String, FeatureVector)> = if let Some(path) = &args.features {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let dataset = Dataset::from_feature_csv_str(&text)?;
        if dataset.aggregation != model.aggregation() {
            return Err(Error::IncompatibleFeatures(format!(
                "model aggregates {} but the feature file aggregates {}",
                model.aggregation(),
                dataset.aggregation
            )));
        }
        if dataset.dimension() != model.dimension() {
            return Err(Error::DimensionMismatch {
                expected: model.dimension(),
                got: dataset.dimension(),
            });
        }
        dataset
            .items
            .into_iter()
            .map(|item| (item.source_id, item.features))
            .collect()
    } else {
        let path = args.wav.as_ref().unwrap();
        let frontend = args.frontend.to_config()?;
        let clip = read_wav(path)?;
        let start = args.start.unwrap_or(0.0);
        let end = args.end.unwrap_or_else(|| clip.duration_s());
        let segment = extract_segment(&clip, start, end)?;
        let mfcc = compute_mfcc(&segment, &frontend)?;
        let features = aggregate(&mfcc, model.aggregation())?;
        if features.dimension() != model.dimension() {
            return Err(Error::DimensionMismatch {
                expected: model.dimension(),
                got: features.dimension(),
            });
        }
        let source_id = if args.start.is_some() || args.end.is_some() {
            format!("{}[{start:.3}-{end:.3}]", path.display())
        } else {
            path.display().to_string()
        };
        vec![(source_id, features)]
    };

    // One line per query: `<source_id> <label> <score>`. The score is
    // the vote fraction for the predicted class (k-NN) or the raw
    // decision value (SVM), so downstream thresholds stay meaningful.
    for (source_id, features) in &queries {
        let (label, score) = match &model {
            AnyModel::Knn(m) => {
                let pred = knn_classify(m, features, k)?;
                let votes = match pred.label {
                    ClassLabel::Dysfluent => pred.votes_dysfluent,
                    ClassLabel::Fluent => pred.votes_fluent,
                };
                (pred.label, votes as f64 / k as f64)
            }
            AnyModel::Svm(m) => (svm_classify(m, features)?, svm_decision(m, features)?),
        };
        println!("{source_id} {label} {score:.6}");
    }
    Ok(())
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("source").required(true)))]
struct EvaluateArgs {
    /// Feature CSV produced by `extract`
    #[arg(long, group = "source")]
    features: Option<PathBuf>,
    /// Segment manifest CSV; features are computed on the fly
    #[arg(long, group = "source")]
    manifest: Option<PathBuf>,
    /// Evaluate on the built-in synthetic corpus instead of files
    #[arg(long, group = "source")]
    synth: bool,
    /// Classifiers to run: knn, svm, or both
    #[arg(long, default_value = "both", value_parser = parse_clf_choice)]
    clf: ClfChoice,
    /// Number of repeated split/train/test trials
    #[arg(long, default_value_t = 3)]
    trials: usize,
    /// Base seed driving splits, the SMO solver, and --synth generation
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Neighbors consulted per k-NN query
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Utterances per class when --synth is used
    #[arg(long, default_value_t = 50)]
    per_class: usize,
    /// Output path for the per-trial machine-readable CSV
    #[arg(long, default_value = "evaluation.csv")]
    csv_out: PathBuf,
    /// Frame aggregation for manifest and --synth inputs: mean or mean-std
    #[arg(long, default_value = "mean", value_parser = parse_agg)]
    agg: AggregationStrategy,
    /// Keep going when the SVM solver reports hard non-convergence
    #[arg(long)]
    allow_unconverged: bool,
    #[command(flatten)]
    frontend: FrontendArgs,
    #[command(flatten)]
    svm: SvmArgs,
}

fn cmd_evaluate(args: &EvaluateArgs) -> Result<()> {
    let (dataset, source_desc) = if args.synth {
        let params = SynthParams {
            seed: args.seed,
            ..SynthParams::default()
        };
        let frontend = args.frontend.to_config()?;
        let dataset = build_synthetic_dataset(&params, args.per_class, &frontend, args.agg)?;
        (dataset, format!("synth per_class={}", args.per_class))
    } else {
        load_dataset(
            args.features.as_ref(),
            args.manifest.as_ref(),
            &args.frontend,
            args.agg,
        )?
    };

    let mut classifiers = Vec::new();
    if matches!(args.clf, ClfChoice::Knn | ClfChoice::Both) {
        classifiers.push(ClassifierSpec::Knn { k: args.k });
    }
    if matches!(args.clf, ClfChoice::Svm | ClfChoice::Both) {
        classifiers.push(ClassifierSpec::Svm(args.svm.to_config(
            dataset.dimension(),
            args.seed,
        )?));
    }
    println!(
        "config: evaluate {} trials={} seed={} classifiers=[{}] csv_out={} agg={} {}",
        source_desc,
        args.trials,
        args.seed,
        classifiers
            .iter()
            .map(|c| c.id())
            .collect::<Vec<_>>()
            .join(", "),
        args.csv_out.display(),
        dataset.aggregation,
        dataset.frontend.to_kv_string()
    );

    let mut reports = Vec::new();
    for classifier in &classifiers {
        let report = run_trials(&dataset, classifier, args.trials, args.seed)?;
        if let ClassifierSpec::Svm(config) = classifier {
            enforce_report_convergence(&report, config.tolerance, args.allow_unconverged)?;
        }
        reports.push(report);
    }
    print!("{}", render_report_table(&reports));
    std::fs::write(&args.csv_out, render_machine_csv(&reports))
        .map_err(|e| Error::io(&args.csv_out, e))?;
    println!("wrote {}", args.csv_out.display());
    Ok(())
}
