//! Dataset plumbing and the synthetic corpus generator.
//!
//! Real audio enters through CSV manifests that declare labeled time
//! spans inside WAV files. Because no labeled stuttered-speech recordings
//! can ship with this repository, the module also synthesizes a stylized
//! corpus: fluent "utterances" are sequences of enveloped harmonic tone
//! bursts ("syllables"), and dysfluent ones start from the same rendering
//! and inject repetitions, prolongations, or interjections. The synthetic
//! classes are deliberately easy to separate — they exercise the pipeline
//! end to end but say nothing about performance on real speech.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::audio::{extract_segment, read_wav, AudioClip, SegmentSpec};
use crate::error::{Error, Result};
use crate::features::{aggregate, AggregationStrategy, FeatureVector};
use crate::knn::ClassLabel;
use crate::mfcc::{compute_mfcc, FrontendConfig};

/// The dysfluency taxonomy. `Pause` is representable in manifests but the
/// synthesizer never produces it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DysfluencyType {
    Repetition,
    Prolongation,
    Interjection,
    Pause,
}

impl DysfluencyType {
    pub const ALL: [DysfluencyType; 4] = [
        DysfluencyType::Repetition,
        DysfluencyType::Prolongation,
        DysfluencyType::Interjection,
        DysfluencyType::Pause,
    ];

    /// The types the synthesizer can produce, in cycling order.
    pub const SYNTHESIZABLE: [DysfluencyType; 3] = [
        DysfluencyType::Repetition,
        DysfluencyType::Prolongation,
        DysfluencyType::Interjection,
    ];
}

impl fmt::Display for DysfluencyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DysfluencyType::Repetition => write!(f, "repetition"),
            DysfluencyType::Prolongation => write!(f, "prolongation"),
            DysfluencyType::Interjection => write!(f, "interjection"),
            DysfluencyType::Pause => write!(f, "pause"),
        }
    }
}

impl FromStr for DysfluencyType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "repetition" => Ok(DysfluencyType::Repetition),
            "prolongation" => Ok(DysfluencyType::Prolongation),
            "interjection" => Ok(DysfluencyType::Interjection),
            "pause" => Ok(DysfluencyType::Pause),
            other => Err(Error::InvalidConfig(format!(
                "unknown dysfluency type: {other}"
            ))),
        }
    }
}

/// One labeled feature vector with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetItem {
    pub features: FeatureVector,
    pub label: ClassLabel,
    pub dysfluency_type: Option<DysfluencyType>,
    pub source_id: String,
}

/// A labeled feature collection plus the extraction snapshot that
/// produced it, so incompatible features are never mixed.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub items: Vec<DatasetItem>,
    pub aggregation: AggregationStrategy,
    pub frontend: FrontendConfig,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.items.first().map_or(0, |i| i.features.dimension())
    }

    pub fn class_count(&self, label: ClassLabel) -> usize {
        self.items.iter().filter(|i| i.label == label).count()
    }

    pub fn features(&self) -> Vec<FeatureVector> {
        self.items.iter().map(|i| i.features.clone()).collect()
    }

    pub fn labels(&self) -> Vec<ClassLabel> {
        self.items.iter().map(|i| i.label).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dimension();
        for item in &self.items {
            if item.features.dimension() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: item.features.dimension(),
                });
            }
        }
        Ok(())
    }

    /// Feature dump CSV. The first line is a comment carrying the magic
    /// tag plus the aggregation and front-end snapshot; the second is the
    /// column header; each item follows as one row.
    pub fn to_feature_csv_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# {FEATURES_MAGIC} agg={} {}\n",
            self.aggregation,
            self.frontend.to_kv_string()
        ));
        out.push_str("label,type,source_id");
        for i in 1..=self.dimension() {
            out.push_str(&format!(",f{i}"));
        }
        out.push('\n');
        for item in &self.items {
            let type_str = item
                .dysfluency_type
                .map(|t| t.to_string())
                .unwrap_or_default();
            out.push_str(&format!("{},{},{}", item.label, type_str, item.source_id));
            for v in &item.features.values {
                out.push_str(&format!(",{v:.16e}"));
            }
            out.push('\n');
        }
        out
    }

    /// Parses the [`to_feature_csv_string`](Self::to_feature_csv_string)
    /// form, restoring the snapshot from the comment line.
    pub fn from_feature_csv_str(text: &str) -> Result<Dataset> {
        let mut lines = text.lines().enumerate();
        let (_, first) = lines
            .next()
            .ok_or_else(|| Error::ManifestParseError {
                row: 1,
                reason: "empty feature CSV".into(),
            })?;
        let snapshot = first
            .strip_prefix(&format!("# {FEATURES_MAGIC} agg="))
            .ok_or_else(|| Error::ManifestParseError {
                row: 1,
                reason: format!("missing `# {FEATURES_MAGIC}` snapshot comment"),
            })?;
        let (agg_str, kv) = snapshot.split_once(' ').ok_or_else(|| {
            Error::ManifestParseError {
                row: 1,
                reason: "snapshot comment lacks front-end parameters".into(),
            }
        })?;
        let aggregation: AggregationStrategy = agg_str.parse()?;
        let frontend = FrontendConfig::from_kv_str(kv)?;

        let (_, header) = lines.next().ok_or_else(|| Error::ManifestParseError {
            row: 2,
            reason: "missing column header".into(),
        })?;
        if !header.starts_with("label,type,source_id") {
            return Err(Error::ManifestParseError {
                row: 2,
                reason: format!("bad column header: {header}"),
            });
        }

        let mut items = Vec::new();
        for (idx, line) in lines {
            let row = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() < 4 {
                return Err(Error::ManifestParseError {
                    row,
                    reason: format!("expected at least 4 fields, got {}", fields.len()),
                });
            }
            let label: ClassLabel =
                fields[0]
                    .parse()
                    .map_err(|e: Error| Error::ManifestParseError {
                        row,
                        reason: e.to_string(),
                    })?;
            let dysfluency_type = if fields[1].is_empty() {
                None
            } else {
                Some(fields[1].parse::<DysfluencyType>().map_err(|e| {
                    Error::ManifestParseError {
                        row,
                        reason: e.to_string(),
                    }
                })?)
            };
            if label == ClassLabel::Fluent && dysfluency_type.is_some() {
                return Err(Error::ManifestParseError {
                    row,
                    reason: "a fluent row cannot carry a dysfluency type".into(),
                });
            }
            let values: Vec<f64> = fields[3..]
                .iter()
                .map(|s| {
                    s.parse::<f64>().map_err(|_| Error::ManifestParseError {
                        row,
                        reason: format!("bad feature value: {s}"),
                    })
                })
                .collect::<Result<_>>()?;
            items.push(DatasetItem {
                features: FeatureVector {
                    values,
                    aggregation,
                },
                label,
                dysfluency_type,
                source_id: fields[2].to_string(),
            });
        }
        if items.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let dataset = Dataset {
            items,
            aggregation,
            frontend,
        };
        dataset.validate()?;
        Ok(dataset)
    }
}

pub const FEATURES_MAGIC: &str = "DYSKIT-FEATURES-v1";
pub const MANIFEST_HEADER: &str = "file,start_s,end_s,label,dysfluency_type";

/// Renders manifest rows back into the CSV form `load_manifest` reads.
pub fn manifest_to_string(rows: &[SegmentSpec]) -> String {
    let mut out = String::from(MANIFEST_HEADER);
    out.push('\n');
    for row in rows {
        let type_str = row
            .dysfluency_type
            .map(|t| t.to_string())
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.source_path.display(),
            row.start_s,
            row.end_s,
            row.label,
            type_str
        ));
    }
    out
}

/// Parses manifest CSV text into validated rows. Row numbers in errors
/// are 1-based file line numbers (the header is line 1).
pub fn parse_manifest_str(text: &str) -> Result<Vec<SegmentSpec>> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| Error::ManifestParseError {
        row: 1,
        reason: "empty manifest".into(),
    })?;
    if header.trim() != MANIFEST_HEADER {
        return Err(Error::ManifestParseError {
            row: 1,
            reason: format!("expected header `{MANIFEST_HEADER}`, got `{}`", header.trim()),
        });
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let row = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::ManifestParseError {
                row,
                reason: format!("expected 5 fields, got {}", fields.len()),
            });
        }
        let parse_err = |reason: String| Error::ManifestParseError { row, reason };
        let start_s: f64 = fields[1]
            .parse()
            .map_err(|_| parse_err(format!("bad start_s: {}", fields[1])))?;
        let end_s: f64 = fields[2]
            .parse()
            .map_err(|_| parse_err(format!("bad end_s: {}", fields[2])))?;
        let label: ClassLabel = fields[3]
            .parse()
            .map_err(|e: Error| parse_err(e.to_string()))?;
        let dysfluency_type = if fields[4].is_empty() {
            None
        } else {
            Some(
                fields[4]
                    .parse::<DysfluencyType>()
                    .map_err(|e| parse_err(e.to_string()))?,
            )
        };
        let spec = SegmentSpec::new(
            PathBuf::from(fields[0]),
            start_s,
            end_s,
            label,
            dysfluency_type,
        )
        .map_err(|e| parse_err(e.to_string()))?;
        rows.push(spec);
    }
    Ok(rows)
}

/// Writes a manifest file.
pub fn write_manifest(path: impl AsRef<Path>, rows: &[SegmentSpec]) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, manifest_to_string(rows)).map_err(|e| Error::io(path, e))
}

/// Loads a manifest and extracts features for every row, in file order.
/// Audio paths are resolved relative to the manifest's directory; each
/// referenced file is decoded once and reused across rows.
pub fn load_manifest(
    path: impl AsRef<Path>,
    frontend: &FrontendConfig,
    strategy: AggregationStrategy,
) -> Result<Dataset> {
    let path = path.as_ref();
    frontend.validate()?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let rows = parse_manifest_str(&text)?;
    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let base_dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut cache: BTreeMap<PathBuf, AudioClip> = BTreeMap::new();
    let mut items = Vec::with_capacity(rows.len());
    for (idx, row) in rows.iter().enumerate() {
        let line_no = idx + 2;
        let wav_path = base_dir.join(&row.source_path);
        if !cache.contains_key(&wav_path) {
            cache.insert(wav_path.clone(), read_wav(&wav_path)?);
        }
        let clip = &cache[&wav_path];
        let source_id = format!(
            "{}[{:.3}-{:.3}]",
            row.source_path.display(),
            row.start_s,
            row.end_s
        );
        let features = extract_segment(clip, row.start_s, row.end_s)
            .and_then(|segment| compute_mfcc(&segment, frontend))
            .and_then(|mfcc| aggregate(&mfcc, strategy))
            .map_err(|e| Error::SegmentError {
                row: line_no,
                source_id: source_id.clone(),
                source: Box::new(e),
            })?;
        items.push(DatasetItem {
            features,
            label: row.label,
            dysfluency_type: row.dysfluency_type,
            source_id,
        });
    }
    let dataset = Dataset {
        items,
        aggregation: strategy,
        frontend: frontend.clone(),
    };
    dataset.validate()?;
    Ok(dataset)
}

/// Synthesis parameters. The seed fully determines every sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthParams {
    pub seed: u64,
    pub sample_rate_hz: u32,
    pub syllable_count: usize,
    pub base_pitch_hz: f64,
    /// Fraction of syllables affected by a dysfluency event; at least
    /// one syllable is always affected in a dysfluent rendering.
    pub dysfluency_rate: f64,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            seed: 0,
            sample_rate_hz: 16000,
            syllable_count: 8,
            base_pitch_hz: 140.0,
            dysfluency_rate: 0.4,
        }
    }
}

impl SynthParams {
    pub fn validate(&self) -> Result<()> {
        if self.sample_rate_hz == 0 {
            return Err(Error::InvalidSynthParams("sample rate must be > 0".into()));
        }
        if self.syllable_count == 0 {
            return Err(Error::InvalidSynthParams(
                "syllable_count must be >= 1".into(),
            ));
        }
        if !(self.base_pitch_hz > 0.0) {
            return Err(Error::InvalidSynthParams(
                "base_pitch_hz must be positive".into(),
            ));
        }
        // highest rendered partial: 3rd harmonic with 1.1x pitch jitter
        if 3.3 * self.base_pitch_hz >= self.sample_rate_hz as f64 / 2.0 {
            return Err(Error::InvalidSynthParams(format!(
                "base_pitch_hz {} too high for sample rate {} (harmonics alias)",
                self.base_pitch_hz, self.sample_rate_hz
            )));
        }
        if !(self.dysfluency_rate > 0.0 && self.dysfluency_rate <= 1.0) {
            return Err(Error::InvalidSynthParams(format!(
                "dysfluency_rate must lie in (0, 1], got {}",
                self.dysfluency_rate
            )));
        }
        Ok(())
    }
}

// Timbre profiles: relative harmonic amplitudes. Fluent syllables are
// bright; dysfluent events are darker with a lowered fundamental, giving
// the two classes distinct spectral envelopes.
const FLUENT_HARMONICS: [f64; 3] = [1.0, 0.5, 0.25];
const DYSFLUENT_HARMONICS: [f64; 3] = [1.0, 0.15, 0.04];
const DYSFLUENT_PITCH_FACTOR: f64 = 0.7;
const LEAD_TRAIL_SILENCE_S: f64 = 0.030;

/// What happens at one syllable of a dysfluent rendering.
#[derive(Debug, Clone, PartialEq)]
enum EventPlan {
    /// Extra renditions of the syllable inserted before it.
    Repetition { copies: usize, gap_s: f64 },
    /// The syllable's duration is multiplied by this factor.
    Prolongation { stretch: f64 },
    /// A schwa-like filler inserted before the syllable.
    Interjection { duration_s: f64, gap_s: f64 },
}

#[derive(Debug, Clone, PartialEq)]
struct SyllablePlan {
    duration_s: f64,
    gap_after_s: f64,
    f0_hz: f64,
    amplitude: f64,
    event: Option<EventPlan>,
}

/// A fully planned utterance; rendering is a pure function of this.
#[derive(Debug, Clone, PartialEq)]
struct UtterancePlan {
    syllables: Vec<SyllablePlan>,
    sample_rate_hz: u32,
}

/// Plans an utterance. The base syllable draws happen first and do not
/// depend on the dysfluency type, so a dysfluent rendering shares its
/// fluent skeleton with `synth_fluent` at the same seed.
fn plan_utterance(params: &SynthParams, dys: Option<DysfluencyType>) -> Result<UtterancePlan> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut syllables: Vec<SyllablePlan> = (0..params.syllable_count)
        .map(|_| SyllablePlan {
            duration_s: rng.gen_range(0.150..0.250),
            gap_after_s: rng.gen_range(0.040..0.090),
            f0_hz: params.base_pitch_hz * rng.gen_range(0.9..1.1),
            amplitude: rng.gen_range(0.25..0.35),
            event: None,
        })
        .collect();

    if let Some(dys_type) = dys {
        if !DysfluencyType::SYNTHESIZABLE.contains(&dys_type) {
            return Err(Error::UnsupportedType(dys_type.to_string()));
        }
        let n_events = ((params.dysfluency_rate * params.syllable_count as f64).round()
            as usize)
            .clamp(1, params.syllable_count);
        let mut indices: Vec<usize> = (0..params.syllable_count).collect();
        indices.shuffle(&mut rng);
        indices.truncate(n_events);
        indices.sort_unstable();
        for i in indices {
            syllables[i].event = Some(match dys_type {
                DysfluencyType::Repetition => EventPlan::Repetition {
                    copies: rng.gen_range(2..=3),
                    gap_s: rng.gen_range(0.060..0.120),
                },
                DysfluencyType::Prolongation => EventPlan::Prolongation {
                    stretch: rng.gen_range(3.0..6.0),
                },
                DysfluencyType::Interjection => EventPlan::Interjection {
                    duration_s: 1.5 * syllables[i].duration_s,
                    gap_s: rng.gen_range(0.040..0.080),
                },
                DysfluencyType::Pause => unreachable!("filtered above"),
            });
        }
    }

    Ok(UtterancePlan {
        syllables,
        sample_rate_hz: params.sample_rate_hz,
    })
}

/// One harmonic tone burst under a raised-cosine envelope.
fn render_tone(
    out: &mut Vec<f64>,
    fs: u32,
    f0_hz: f64,
    harmonics: &[f64],
    amplitude: f64,
    duration_s: f64,
) {
    let n = (duration_s * fs as f64).round() as usize;
    let norm: f64 = harmonics.iter().sum();
    for i in 0..n {
        let t = i as f64 / fs as f64;
        let envelope = if n > 1 {
            0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / (n - 1) as f64).cos()
        } else {
            1.0
        };
        let mut s = 0.0;
        for (h, &gain) in harmonics.iter().enumerate() {
            s += gain * (2.0 * std::f64::consts::PI * f0_hz * (h + 1) as f64 * t).sin();
        }
        out.push((amplitude * envelope * s / norm).clamp(-1.0, 1.0));
    }
}

fn push_silence(out: &mut Vec<f64>, fs: u32, duration_s: f64) {
    let n = (duration_s * fs as f64).round() as usize;
    out.extend(std::iter::repeat(0.0).take(n));
}

fn render(plan: &UtterancePlan) -> AudioClip {
    let fs = plan.sample_rate_hz;
    let mut samples = Vec::new();
    push_silence(&mut samples, fs, LEAD_TRAIL_SILENCE_S);
    for syl in &plan.syllables {
        let mut duration_s = syl.duration_s;
        let mut dysfluent_voice = false;
        match &syl.event {
            Some(EventPlan::Repetition { copies, gap_s }) => {
                dysfluent_voice = true;
                for _ in 0..*copies {
                    render_tone(
                        &mut samples,
                        fs,
                        syl.f0_hz * DYSFLUENT_PITCH_FACTOR,
                        &DYSFLUENT_HARMONICS,
                        syl.amplitude,
                        syl.duration_s,
                    );
                    push_silence(&mut samples, fs, *gap_s);
                }
            }
            Some(EventPlan::Prolongation { stretch }) => {
                dysfluent_voice = true;
                duration_s = syl.duration_s * stretch;
            }
            Some(EventPlan::Interjection { duration_s, gap_s }) => {
                // the filler is dysfluent-voiced; the syllable itself
                // stays fluent
                render_tone(
                    &mut samples,
                    fs,
                    syl.f0_hz * DYSFLUENT_PITCH_FACTOR,
                    &DYSFLUENT_HARMONICS,
                    syl.amplitude * 0.5,
                    *duration_s,
                );
                push_silence(&mut samples, fs, *gap_s);
            }
            None => {}
        }
        let (f0, harmonics) = if dysfluent_voice {
            (syl.f0_hz * DYSFLUENT_PITCH_FACTOR, &DYSFLUENT_HARMONICS)
        } else {
            (syl.f0_hz, &FLUENT_HARMONICS)
        };
        render_tone(&mut samples, fs, f0, harmonics, syl.amplitude, duration_s);
        push_silence(&mut samples, fs, syl.gap_after_s);
    }
    push_silence(&mut samples, fs, LEAD_TRAIL_SILENCE_S);
    AudioClip::new(samples, fs).expect("rendered samples are finite and clamped")
}

/// Synthesizes a fluent utterance: enveloped harmonic syllables with
/// short gaps. Bit-identical for equal params.
pub fn synth_fluent(params: &SynthParams) -> Result<AudioClip> {
    Ok(render(&plan_utterance(params, None)?))
}

/// Synthesizes a dysfluent utterance of the given type by injecting
/// events into the fluent rendering for the same seed.
pub fn synth_dysfluent(params: &SynthParams, dys_type: DysfluencyType) -> Result<AudioClip> {
    Ok(render(&plan_utterance(params, Some(dys_type))?))
}

/// Stable per-item seed mixing (a splitmix64 finalizer over the base
/// seed and item index), so item i's audio never depends on how many
/// other items were generated before it.
pub fn derive_item_seed(base_seed: u64, item_index: u64) -> u64 {
    let mut z = base_seed.wrapping_add(
        item_index
            .wrapping_add(1)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15),
    );
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The type assigned to dysfluent item `i` (cycled in declaration order).
pub fn cycled_type(i: usize) -> DysfluencyType {
    DysfluencyType::SYNTHESIZABLE[i % DysfluencyType::SYNTHESIZABLE.len()]
}

/// Per-item synthesis plan of the standard corpus layout: dysfluent
/// items first (types cycled), then fluent items. Item index is global,
/// so every clip is reproducible in isolation.
pub fn corpus_item_params(
    params: &SynthParams,
    n_per_class: usize,
    index: usize,
) -> (SynthParams, ClassLabel, Option<DysfluencyType>, String) {
    let item_params = SynthParams {
        seed: derive_item_seed(params.seed, index as u64),
        ..params.clone()
    };
    if index < n_per_class {
        let dys_type = cycled_type(index);
        (
            item_params,
            ClassLabel::Dysfluent,
            Some(dys_type),
            format!("synth-dysfluent-{index:03}-{dys_type}"),
        )
    } else {
        (
            item_params,
            ClassLabel::Fluent,
            None,
            format!("synth-fluent-{:03}", index - n_per_class),
        )
    }
}

/// Builds a balanced synthetic dataset: `n_per_class` dysfluent items
/// (types cycled repetition, prolongation, interjection) followed by
/// `n_per_class` fluent items, all run through the MFCC front-end.
pub fn build_synthetic_dataset(
    params: &SynthParams,
    n_per_class: usize,
    frontend: &FrontendConfig,
    strategy: AggregationStrategy,
) -> Result<Dataset> {
    params.validate()?;
    frontend.validate()?;
    if n_per_class < 2 {
        return Err(Error::InvalidSynthParams(format!(
            "n_per_class must be >= 2, got {n_per_class}"
        )));
    }
    let mut items = Vec::with_capacity(2 * n_per_class);
    for index in 0..2 * n_per_class {
        let (item_params, label, dys_type, source_id) =
            corpus_item_params(params, n_per_class, index);
        let clip = match dys_type {
            Some(t) => synth_dysfluent(&item_params, t)?,
            None => synth_fluent(&item_params)?,
        };
        let mfcc = compute_mfcc(&clip, frontend)?;
        let features = aggregate(&mfcc, strategy)?;
        items.push(DatasetItem {
            features,
            label,
            dysfluency_type: dys_type,
            source_id,
        });
    }
    let dataset = Dataset {
        items,
        aggregation: strategy,
        frontend: frontend.clone(),
    };
    dataset.validate()?;
    Ok(dataset)
}
