//! Audio ingestion: WAV decoding, normalization, and segment slicing.
//!
//! Everything downstream of this module sees a uniform representation: a
//! mono sequence of `f64` amplitudes in `[-1, 1]` plus a sample rate.

use std::path::{Path, PathBuf};

use crate::corpus::DysfluencyType;
use crate::error::{Error, Result};
use crate::knn::ClassLabel;

/// Mono audio signal with its sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioClip {
    pub samples: Vec<f64>,
    pub sample_rate_hz: u32,
}

impl AudioClip {
    /// Builds a clip, rejecting empty signals, a zero sample rate, and
    /// non-finite or out-of-range amplitudes.
    pub fn new(samples: Vec<f64>, sample_rate_hz: u32) -> Result<Self> {
        if sample_rate_hz == 0 {
            return Err(Error::InvalidClip("sample rate must be positive".into()));
        }
        if samples.is_empty() {
            return Err(Error::InvalidClip("clip has no samples".into()));
        }
        if let Some(s) = samples.iter().find(|s| !s.is_finite() || s.abs() > 1.0) {
            return Err(Error::InvalidClip(format!(
                "sample {s} outside the normalized range [-1, 1]"
            )));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz as f64
    }
}

/// One labeled time span inside an audio file, as declared by a manifest row.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentSpec {
    pub source_path: PathBuf,
    pub start_s: f64,
    pub end_s: f64,
    pub label: ClassLabel,
    pub dysfluency_type: Option<DysfluencyType>,
}

impl SegmentSpec {
    pub fn new(
        source_path: PathBuf,
        start_s: f64,
        end_s: f64,
        label: ClassLabel,
        dysfluency_type: Option<DysfluencyType>,
    ) -> Result<Self> {
        if !(start_s >= 0.0 && end_s > start_s) {
            return Err(Error::InvalidSegment(format!(
                "need 0 <= start < end, got start={start_s}, end={end_s}"
            )));
        }
        if label == ClassLabel::Fluent && dysfluency_type.is_some() {
            return Err(Error::InvalidSegment(
                "a fluent segment cannot carry a dysfluency type".into(),
            ));
        }
        Ok(Self {
            source_path,
            start_s,
            end_s,
            label,
            dysfluency_type,
        })
    }
}

// WAVE format codes accepted by the reader.
const WAVE_FORMAT_PCM: u16 = 1;
const WAVE_FORMAT_IEEE_FLOAT: u16 = 3;

/// Reads a RIFF/WAVE file into a normalized mono clip.
///
/// Accepts 16-bit signed PCM (format code 1) and 32-bit IEEE float
/// (format code 3). Multichannel audio is downmixed by averaging the
/// channels; integer samples are divided by 32768.
pub fn read_wav(path: impl AsRef<Path>) -> Result<AudioClip> {
    let path = path.as_ref();
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(Error::MissingAudio(path.to_path_buf()))
        }
        Err(e) => return Err(Error::io(path, e)),
    };
    decode_wav(&bytes)
}

/// Decodes WAV bytes already in memory. See [`read_wav`].
pub fn decode_wav(bytes: &[u8]) -> Result<AudioClip> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(Error::MalformedWav("missing RIFF/WAVE header".into()));
    }

    let mut fmt: Option<FmtChunk> = None;
    let mut data: Option<&[u8]> = None;
    let mut pos = 12;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32::from_le_bytes(bytes[pos + 4..pos + 8].try_into().unwrap()) as usize;
        let body_start = pos + 8;
        let body_end = body_start
            .checked_add(size)
            .filter(|&e| e <= bytes.len())
            .ok_or_else(|| Error::MalformedWav(format!("chunk {} overruns the file", fourcc(id))))?;
        let body = &bytes[body_start..body_end];
        match id {
            b"fmt " => fmt = Some(parse_fmt(body)?),
            b"data" => data = Some(body),
            _ => {} // skip LIST, fact, cue, ...
        }
        // chunks are word-aligned
        pos = body_end + (size & 1);
    }

    let fmt = fmt.ok_or_else(|| Error::MalformedWav("no fmt chunk".into()))?;
    let data = data.ok_or_else(|| Error::MalformedWav("no data chunk".into()))?;

    let bytes_per_sample = fmt.bits_per_sample as usize / 8;
    let frame_size = bytes_per_sample * fmt.channels as usize;
    if frame_size == 0 {
        return Err(Error::MalformedWav("zero-size sample frame".into()));
    }
    let n_frames = data.len() / frame_size;
    if n_frames == 0 {
        return Err(Error::EmptyAudio);
    }

    let mut samples = Vec::with_capacity(n_frames);
    let inv_channels = 1.0 / fmt.channels as f64;
    for frame in 0..n_frames {
        let mut acc = 0.0;
        for ch in 0..fmt.channels as usize {
            let off = frame * frame_size + ch * bytes_per_sample;
            let v = match fmt.format_code {
                WAVE_FORMAT_PCM => {
                    i16::from_le_bytes(data[off..off + 2].try_into().unwrap()) as f64 / 32768.0
                }
                WAVE_FORMAT_IEEE_FLOAT => {
                    f32::from_le_bytes(data[off..off + 4].try_into().unwrap()) as f64
                }
                _ => unreachable!("rejected in parse_fmt"),
            };
            acc += v;
        }
        let v = acc * inv_channels;
        samples.push(if v.is_finite() { v.clamp(-1.0, 1.0) } else { 0.0 });
    }

    AudioClip::new(samples, fmt.sample_rate_hz)
}

struct FmtChunk {
    format_code: u16,
    channels: u16,
    sample_rate_hz: u32,
    bits_per_sample: u16,
}

fn parse_fmt(body: &[u8]) -> Result<FmtChunk> {
    if body.len() < 16 {
        return Err(Error::MalformedWav("fmt chunk too short".into()));
    }
    let format_code = u16::from_le_bytes(body[0..2].try_into().unwrap());
    let channels = u16::from_le_bytes(body[2..4].try_into().unwrap());
    let sample_rate_hz = u32::from_le_bytes(body[4..8].try_into().unwrap());
    let bits_per_sample = u16::from_le_bytes(body[14..16].try_into().unwrap());

    match (format_code, bits_per_sample) {
        (WAVE_FORMAT_PCM, 16) | (WAVE_FORMAT_IEEE_FLOAT, 32) => {}
        (WAVE_FORMAT_PCM, bits) => {
            return Err(Error::UnsupportedEncoding(format!(
                "{bits}-bit PCM (only 16-bit PCM is supported)"
            )))
        }
        (WAVE_FORMAT_IEEE_FLOAT, bits) => {
            return Err(Error::UnsupportedEncoding(format!(
                "{bits}-bit float (only 32-bit float is supported)"
            )))
        }
        (code, _) => {
            return Err(Error::UnsupportedEncoding(format!(
                "WAVE format code {code} (only PCM=1 and IEEE float=3 are supported)"
            )))
        }
    }
    if channels == 0 {
        return Err(Error::MalformedWav("zero channels".into()));
    }
    if sample_rate_hz == 0 {
        return Err(Error::MalformedWav("zero sample rate".into()));
    }
    Ok(FmtChunk {
        format_code,
        channels,
        sample_rate_hz,
        bits_per_sample,
    })
}

fn fourcc(id: &[u8]) -> String {
    String::from_utf8_lossy(id).into_owned()
}

/// Encodes a clip as a mono 16-bit PCM WAV file.
///
/// Samples are quantized as `round(s * 32768)` clamped to the i16 range,
/// so a decode round-trip reproduces each sample within 1/32768.
pub fn write_wav(path: impl AsRef<Path>, clip: &AudioClip) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode_wav(clip)).map_err(|e| Error::io(path, e))
}

/// Encodes a clip as mono 16-bit PCM WAV bytes. See [`write_wav`].
pub fn encode_wav(clip: &AudioClip) -> Vec<u8> {
    let data_len = clip.samples.len() * 2;
    let mut out = Vec::with_capacity(44 + data_len);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len as u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&WAVE_FORMAT_PCM.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // mono
    out.extend_from_slice(&clip.sample_rate_hz.to_le_bytes());
    let byte_rate = clip.sample_rate_hz * 2;
    out.extend_from_slice(&byte_rate.to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes()); // block align
    out.extend_from_slice(&16u16.to_le_bytes()); // bits per sample
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    for &s in &clip.samples {
        let q = (s * 32768.0).round().clamp(i16::MIN as f64, i16::MAX as f64) as i16;
        out.extend_from_slice(&q.to_le_bytes());
    }
    out
}

/// Cuts `[start_s, end_s)` out of a clip.
///
/// Boundaries are rounded half-up to sample indices. `end_s` may overshoot
/// the clip duration by up to half a sample period to absorb decimal
/// round-off in manifests; anything beyond that is `OutOfRange`.
pub fn extract_segment(clip: &AudioClip, start_s: f64, end_s: f64) -> Result<AudioClip> {
    let fs = clip.sample_rate_hz as f64;
    let duration = clip.duration_s();
    let half_sample = 0.5 / fs;
    if !(start_s >= 0.0 && start_s < end_s && end_s <= duration + half_sample) {
        return Err(Error::OutOfRange {
            start_s,
            end_s,
            duration_s: duration,
        });
    }
    let start_idx = (start_s * fs).round() as usize;
    let end_idx = ((end_s * fs).round() as usize).min(clip.len());
    if end_idx <= start_idx {
        return Err(Error::EmptySegment { start_s, end_s });
    }
    Ok(AudioClip {
        samples: clip.samples[start_idx..end_idx].to_vec(),
        sample_rate_hz: clip.sample_rate_hz,
    })
}
