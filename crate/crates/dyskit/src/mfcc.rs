//! MFCC front-end: pre-emphasis, framing, Hamming windowing, power
//! spectrum, Mel filterbank, log compression, and DCT cepstrum.
//!
//! The pipeline turns an [`AudioClip`] into a matrix of per-frame cepstral
//! vectors. Stages are exposed individually so each one can be tested
//! against an independent oracle.

use std::f64::consts::PI;

use crate::audio::AudioClip;
use crate::error::{Error, Result};

/// Front-end parameters. Frame geometry is given in seconds and converted
/// to samples against the clip's rate, so one config serves any rate.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontendConfig {
    /// Pre-emphasis coefficient, constrained to [0.9, 1.0].
    pub pre_emphasis_a: f64,
    pub frame_len_s: f64,
    pub frame_hop_s: f64,
    /// FFT size; `None` picks the smallest power of two >= frame length.
    pub n_fft: Option<usize>,
    pub n_mel_filters: usize,
    pub n_ceps: usize,
    pub f_low_hz: f64,
    /// Upper filterbank edge; `None` means the Nyquist frequency.
    pub f_high_hz: Option<f64>,
    /// Energies are floored at this value before the log.
    pub log_floor: f64,
}

impl Default for FrontendConfig {
    fn default() -> Self {
        Self {
            pre_emphasis_a: 0.97,
            frame_len_s: 0.025,
            frame_hop_s: 0.010,
            n_fft: None,
            n_mel_filters: 26,
            n_ceps: 12,
            f_low_hz: 0.0,
            f_high_hz: None,
            log_floor: 1e-10,
        }
    }
}

impl FrontendConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.9..=1.0).contains(&self.pre_emphasis_a) {
            return Err(Error::InvalidConfig(format!(
                "pre_emphasis_a must lie in [0.9, 1.0], got {}",
                self.pre_emphasis_a
            )));
        }
        if !(self.frame_len_s > 0.0 && self.frame_len_s.is_finite()) {
            return Err(Error::InvalidConfig("frame_len_s must be positive".into()));
        }
        if !(self.frame_hop_s > 0.0 && self.frame_hop_s.is_finite()) {
            return Err(Error::InvalidConfig("frame_hop_s must be positive".into()));
        }
        if self.n_mel_filters == 0 {
            return Err(Error::InvalidConfig("n_mel_filters must be >= 1".into()));
        }
        if self.n_ceps == 0 {
            return Err(Error::InvalidConfig("n_ceps must be >= 1".into()));
        }
        if self.n_ceps > self.n_mel_filters {
            return Err(Error::InvalidConfig(format!(
                "n_ceps ({}) must not exceed n_mel_filters ({})",
                self.n_ceps, self.n_mel_filters
            )));
        }
        if let Some(n) = self.n_fft {
            if n == 0 || !n.is_power_of_two() {
                return Err(Error::BadFftSize {
                    n_fft: n,
                    reason: "not a power of two".into(),
                });
            }
        }
        if !(self.f_low_hz >= 0.0) {
            return Err(Error::NegativeFrequency(self.f_low_hz));
        }
        if let Some(f) = self.f_high_hz {
            if !(f > self.f_low_hz) {
                return Err(Error::InvalidConfig(format!(
                    "f_high_hz ({f}) must exceed f_low_hz ({})",
                    self.f_low_hz
                )));
            }
        }
        if !(self.log_floor > 0.0) {
            return Err(Error::InvalidConfig("log_floor must be positive".into()));
        }
        Ok(())
    }

    pub fn frame_len_samples(&self, fs: u32) -> usize {
        (self.frame_len_s * fs as f64).round() as usize
    }

    pub fn frame_hop_samples(&self, fs: u32) -> usize {
        (self.frame_hop_s * fs as f64).round() as usize
    }

    pub fn resolve_n_fft(&self, fs: u32) -> Result<usize> {
        let frame_len = self.frame_len_samples(fs);
        match self.n_fft {
            Some(n) if n < frame_len => Err(Error::BadFftSize {
                n_fft: n,
                reason: format!("smaller than the frame length ({frame_len} samples)"),
            }),
            Some(n) => Ok(n),
            None => Ok(frame_len.next_power_of_two()),
        }
    }

    pub fn resolve_f_high(&self, fs: u32) -> Result<f64> {
        let nyquist = fs as f64 / 2.0;
        match self.f_high_hz {
            Some(f) if f > nyquist => Err(Error::InvalidConfig(format!(
                "f_high_hz ({f}) exceeds the Nyquist frequency ({nyquist})"
            ))),
            Some(f) => Ok(f),
            None => Ok(nyquist),
        }
    }

    /// Flat `key=value` rendering, one pair per token, stable order.
    pub fn to_kv_string(&self) -> String {
        let n_fft = match self.n_fft {
            Some(n) => n.to_string(),
            None => "auto".to_string(),
        };
        let f_high = match self.f_high_hz {
            Some(f) => f.to_string(),
            None => "nyquist".to_string(),
        };
        format!(
            "pre_emphasis_a={} frame_len_s={} frame_hop_s={} n_fft={} n_mel_filters={} \
             n_ceps={} f_low_hz={} f_high_hz={} log_floor={}",
            self.pre_emphasis_a,
            self.frame_len_s,
            self.frame_hop_s,
            n_fft,
            self.n_mel_filters,
            self.n_ceps,
            self.f_low_hz,
            f_high,
            self.log_floor
        )
    }

    /// Parses the [`to_kv_string`](Self::to_kv_string) form. Unknown keys
    /// are rejected so stale documents fail loudly.
    pub fn from_kv_str(text: &str) -> Result<Self> {
        let mut cfg = FrontendConfig::default();
        for token in text.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| Error::InvalidConfig(format!("bad key=value token: {token}")))?;
            let bad =
                |k: &str, v: &str| Error::InvalidConfig(format!("bad value for {k}: {v}"));
            match key {
                "pre_emphasis_a" => {
                    cfg.pre_emphasis_a = value.parse().map_err(|_| bad(key, value))?
                }
                "frame_len_s" => cfg.frame_len_s = value.parse().map_err(|_| bad(key, value))?,
                "frame_hop_s" => cfg.frame_hop_s = value.parse().map_err(|_| bad(key, value))?,
                "n_fft" => {
                    cfg.n_fft = if value == "auto" {
                        None
                    } else {
                        Some(value.parse().map_err(|_| bad(key, value))?)
                    }
                }
                "n_mel_filters" => {
                    cfg.n_mel_filters = value.parse().map_err(|_| bad(key, value))?
                }
                "n_ceps" => cfg.n_ceps = value.parse().map_err(|_| bad(key, value))?,
                "f_low_hz" => cfg.f_low_hz = value.parse().map_err(|_| bad(key, value))?,
                "f_high_hz" => {
                    cfg.f_high_hz = if value == "nyquist" {
                        None
                    } else {
                        Some(value.parse().map_err(|_| bad(key, value))?)
                    }
                }
                "log_floor" => cfg.log_floor = value.parse().map_err(|_| bad(key, value))?,
                _ => return Err(Error::InvalidConfig(format!("unknown config key: {key}"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Frames cut from a signal; every row has the same length.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameMatrix {
    pub frames: Vec<Vec<f64>>,
    pub sample_rate_hz: u32,
}

impl FrameMatrix {
    pub fn n_frames(&self) -> usize {
        self.frames.len()
    }

    pub fn frame_len(&self) -> usize {
        self.frames.first().map_or(0, Vec::len)
    }
}

/// Triangular Mel filterbank over one-sided FFT bins.
///
/// Filter centers are equidistant on the Mel scale; each row peaks at
/// exactly 1.0 on its center bin and falls linearly to zero at the
/// center bins of its neighbors.
#[derive(Debug, Clone, PartialEq)]
pub struct MelFilterBank {
    /// `n_filters` rows of `n_fft/2 + 1` weights in [0, 1].
    pub weights: Vec<Vec<f64>>,
    /// Ideal (un-snapped) center frequencies in Hz, strictly increasing.
    pub center_freqs_hz: Vec<f64>,
}

impl MelFilterBank {
    pub fn n_filters(&self) -> usize {
        self.weights.len()
    }

    pub fn n_bins(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }
}

/// Per-frame cepstral coefficients plus the config that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct MfccMatrix {
    /// `n_frames` rows of `config.n_ceps` coefficients.
    pub coeffs: Vec<Vec<f64>>,
    pub config: FrontendConfig,
}

impl MfccMatrix {
    pub fn n_frames(&self) -> usize {
        self.coeffs.len()
    }

    pub fn n_ceps(&self) -> usize {
        self.config.n_ceps
    }

    /// CSV rendering: header `c1..cN`, one row per frame, 17 significant
    /// digits per value.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = (1..=self.n_ceps()).map(|i| format!("c{i}")).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.coeffs {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// First-order high-pass filter `out[n] = in[n] - a * in[n-1]`, with the
/// convention `in[-1] = 0` so the output keeps the input's length.
pub fn pre_emphasize(signal: &[f64], a: f64) -> Result<Vec<f64>> {
    if signal.is_empty() {
        return Err(Error::EmptySignal);
    }
    let mut out = Vec::with_capacity(signal.len());
    out.push(signal[0]);
    for n in 1..signal.len() {
        out.push(signal[n] - a * signal[n - 1]);
    }
    Ok(out)
}

/// Splits a signal into frames of `frame_len_s` every `frame_hop_s`.
/// Trailing samples that do not fill a whole frame are dropped.
pub fn frame_signal(signal: &[f64], config: &FrontendConfig, fs: u32) -> Result<FrameMatrix> {
    config.validate()?;
    let frame_len = config.frame_len_samples(fs);
    let hop = config.frame_hop_samples(fs);
    if frame_len == 0 || hop == 0 {
        return Err(Error::InvalidConfig(format!(
            "frame geometry rounds to zero samples at {fs} Hz"
        )));
    }
    if signal.len() < frame_len {
        return Err(Error::SignalTooShort {
            len: signal.len(),
            frame_len,
        });
    }
    let n_frames = 1 + (signal.len() - frame_len) / hop;
    let mut frames = Vec::with_capacity(n_frames);
    for i in 0..n_frames {
        let start = i * hop;
        frames.push(signal[start..start + frame_len].to_vec());
    }
    Ok(FrameMatrix {
        frames,
        sample_rate_hz: fs,
    })
}

/// `w(n) = 0.54 - 0.46 cos(2 pi n / (N - 1))` for `0 <= n <= N-1`.
pub fn hamming_window(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidLength(n));
    }
    Ok((0..n)
        .map(|i| 0.54 - 0.46 * (2.0 * PI * i as f64 / (n - 1) as f64).cos())
        .collect())
}

/// Multiplies every frame row pointwise by the window.
pub fn apply_window(frames: &FrameMatrix, window: &[f64]) -> Result<FrameMatrix> {
    if frames.frame_len() != window.len() {
        return Err(Error::LengthMismatch {
            expected: frames.frame_len(),
            got: window.len(),
        });
    }
    let windowed = frames
        .frames
        .iter()
        .map(|row| row.iter().zip(window).map(|(x, w)| x * w).collect())
        .collect();
    Ok(FrameMatrix {
        frames: windowed,
        sample_rate_hz: frames.sample_rate_hz,
    })
}

/// One-sided power spectrum `|X[k]|^2` for `k = 0..n_fft/2`, with the
/// frame zero-padded to `n_fft`. No 1/N normalization is applied.
pub fn power_spectrum(frame: &[f64], n_fft: usize) -> Result<Vec<f64>> {
    if n_fft == 0 || !n_fft.is_power_of_two() {
        return Err(Error::BadFftSize {
            n_fft,
            reason: "not a power of two".into(),
        });
    }
    if n_fft < frame.len() {
        return Err(Error::BadFftSize {
            n_fft,
            reason: format!("smaller than the frame ({} samples)", frame.len()),
        });
    }
    let mut re = vec![0.0; n_fft];
    let mut im = vec![0.0; n_fft];
    re[..frame.len()].copy_from_slice(frame);
    fft_in_place(&mut re, &mut im);
    Ok((0..=n_fft / 2).map(|k| re[k] * re[k] + im[k] * im[k]).collect())
}

/// Iterative radix-2 Cooley-Tukey FFT. Lengths are powers of two by the
/// callers' checks.
fn fft_in_place(re: &mut [f64], im: &mut [f64]) {
    let n = re.len();
    if n <= 1 {
        return;
    }
    // bit-reversal permutation
    let mut j = 0usize;
    for i in 0..n - 1 {
        if i < j {
            re.swap(i, j);
            im.swap(i, j);
        }
        let mut mask = n >> 1;
        while j & mask != 0 {
            j &= !mask;
            mask >>= 1;
        }
        j |= mask;
    }
    let mut len = 2;
    while len <= n {
        let angle = -2.0 * PI / len as f64;
        let (w_re, w_im) = (angle.cos(), angle.sin());
        for start in (0..n).step_by(len) {
            let mut cur_re = 1.0;
            let mut cur_im = 0.0;
            for offset in 0..len / 2 {
                let a = start + offset;
                let b = a + len / 2;
                let t_re = cur_re * re[b] - cur_im * im[b];
                let t_im = cur_re * im[b] + cur_im * re[b];
                re[b] = re[a] - t_re;
                im[b] = im[a] - t_im;
                re[a] += t_re;
                im[a] += t_im;
                let next_re = cur_re * w_re - cur_im * w_im;
                cur_im = cur_re * w_im + cur_im * w_re;
                cur_re = next_re;
            }
        }
        len <<= 1;
    }
}

/// `mel(f) = 2595 log10(1 + f/700)`.
pub fn mel_scale(f_hz: f64) -> Result<f64> {
    if !(f_hz >= 0.0) {
        return Err(Error::NegativeFrequency(f_hz));
    }
    Ok(2595.0 * (1.0 + f_hz / 700.0).log10())
}

/// Inverse of [`mel_scale`]: `f = 700 (10^(m/2595) - 1)`.
pub fn inverse_mel(m: f64) -> Result<f64> {
    if !(m >= 0.0) {
        return Err(Error::NegativeMel(m));
    }
    Ok(700.0 * (10f64.powf(m / 2595.0) - 1.0))
}

/// Builds the triangular filterbank for the given config and sample rate.
pub fn build_mel_filterbank(config: &FrontendConfig, fs: u32) -> Result<MelFilterBank> {
    config.validate()?;
    let n_fft = config.resolve_n_fft(fs)?;
    let f_high = config.resolve_f_high(fs)?;
    let f_low = config.f_low_hz;
    let n_filters = config.n_mel_filters;
    let n_bins = n_fft / 2 + 1;

    let mel_low = mel_scale(f_low)?;
    let mel_high = mel_scale(f_high)?;
    // n_filters + 2 boundary points, equidistant in mels
    let n_points = n_filters + 2;
    let hz_points: Vec<f64> = (0..n_points)
        .map(|i| {
            let m = mel_low + (mel_high - mel_low) * i as f64 / (n_points - 1) as f64;
            inverse_mel(m)
        })
        .collect::<Result<_>>()?;
    let bins: Vec<usize> = hz_points
        .iter()
        .map(|&hz| ((hz / fs as f64 * n_fft as f64).round() as usize).min(n_bins - 1))
        .collect();

    for j in 0..n_points - 1 {
        if bins[j] >= bins[j + 1] {
            return Err(Error::BandTooNarrow {
                left: hz_points[j],
                right: hz_points[j + 1],
                bin: bins[j],
            });
        }
    }

    let mut weights = Vec::with_capacity(n_filters);
    for f in 0..n_filters {
        let (left, center, right) = (bins[f], bins[f + 1], bins[f + 2]);
        let mut row = vec![0.0; n_bins];
        for k in left..=center {
            row[k] = (k - left) as f64 / (center - left) as f64;
        }
        for k in center..=right {
            row[k] = (right - k) as f64 / (right - center) as f64;
        }
        row[center] = 1.0;
        weights.push(row);
    }

    Ok(MelFilterBank {
        weights,
        center_freqs_hz: hz_points[1..=n_filters].to_vec(),
    })
}

/// `out[j] = sum_k weights[j][k] * spectrum[k]`.
pub fn apply_filterbank(spectrum: &[f64], bank: &MelFilterBank) -> Result<Vec<f64>> {
    if spectrum.len() != bank.n_bins() {
        return Err(Error::LengthMismatch {
            expected: bank.n_bins(),
            got: spectrum.len(),
        });
    }
    Ok(bank
        .weights
        .iter()
        .map(|row| row.iter().zip(spectrum).map(|(w, s)| w * s).sum())
        .collect())
}

/// Natural log with a floor: `ln(max(e, floor))`.
pub fn log_compress(energies: &[f64], floor: f64) -> Vec<f64> {
    energies.iter().map(|&e| e.max(floor).ln()).collect()
}

/// DCT cepstrum starting at coefficient 1 (the energy term is excluded):
/// `c[n] = sum_{k=1..K} log_e[k-1] * cos(n (k - 1/2) pi / K)` for `n = 1..n_ceps`.
pub fn dct_cepstrum(log_energies: &[f64], n_ceps: usize) -> Result<Vec<f64>> {
    let k_total = log_energies.len();
    if n_ceps > k_total {
        return Err(Error::TooManyCoefficients {
            n_ceps,
            n_filters: k_total,
        });
    }
    let mut out = Vec::with_capacity(n_ceps);
    for n in 1..=n_ceps {
        let mut acc = 0.0;
        for (k, &e) in log_energies.iter().enumerate() {
            acc += e * (n as f64 * (k as f64 + 0.5) * PI / k_total as f64).cos();
        }
        out.push(acc);
    }
    Ok(out)
}

/// Runs the whole front-end over a clip. Row `i` of the result is the
/// cepstrum of frame `i`.
pub fn compute_mfcc(clip: &AudioClip, config: &FrontendConfig) -> Result<MfccMatrix> {
    config.validate()?;
    let fs = clip.sample_rate_hz;
    let emphasized = pre_emphasize(&clip.samples, config.pre_emphasis_a)?;
    let frames = frame_signal(&emphasized, config, fs)?;
    let window = hamming_window(frames.frame_len())?;
    let windowed = apply_window(&frames, &window)?;
    let n_fft = config.resolve_n_fft(fs)?;
    let bank = build_mel_filterbank(config, fs)?;

    let mut coeffs = Vec::with_capacity(windowed.n_frames());
    for frame in &windowed.frames {
        let spectrum = power_spectrum(frame, n_fft)?;
        let energies = apply_filterbank(&spectrum, &bank)?;
        let log_energies = log_compress(&energies, config.log_floor);
        coeffs.push(dct_cepstrum(&log_energies, config.n_ceps)?);
    }
    Ok(MfccMatrix {
        coeffs,
        config: config.clone(),
    })
}

/// Direct O(n^2) DFT power spectrum. Test oracle for [`power_spectrum`];
/// kept out of the FFT path on purpose.
pub fn power_spectrum_dft_oracle(frame: &[f64], n_fft: usize) -> Vec<f64> {
    let mut padded = vec![0.0; n_fft];
    padded[..frame.len()].copy_from_slice(frame);
    (0..=n_fft / 2)
        .map(|k| {
            let mut re = 0.0;
            let mut im = 0.0;
            for (n, &x) in padded.iter().enumerate() {
                let angle = -2.0 * PI * k as f64 * n as f64 / n_fft as f64;
                re += x * angle.cos();
                im += x * angle.sin();
            }
            re * re + im * im
        })
        .collect()
}
