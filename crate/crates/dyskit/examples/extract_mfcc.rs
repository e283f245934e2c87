//! Walk a waveform through every stage of the MFCC front-end.
//!
//! Run with:
//!
//! ```text
//! cargo run --example extract_mfcc
//! ```
//!
//! The one-call entry point is [`dyskit::mfcc::compute_mfcc`]; this example
//! also runs the stages one by one so the intermediate shapes are visible:
//! pre-emphasis, framing, Hamming window, power spectrum, mel filterbank,
//! log compression, and the DCT that yields the cepstral coefficients.

use dyskit::corpus::{synth_fluent, SynthParams};
use dyskit::features::{aggregate, AggregationStrategy};
use dyskit::mfcc::{
    apply_filterbank, apply_window, build_mel_filterbank, compute_mfcc, dct_cepstrum,
    frame_signal, hamming_window, log_compress, power_spectrum, pre_emphasize, FrontendConfig,
};

fn main() -> dyskit::Result<()> {
    // Any clip works; a synthesized one keeps the example self-contained.
    let clip = synth_fluent(&SynthParams {
        seed: 42,
        ..SynthParams::default()
    })?;
    let config = FrontendConfig::default();
    let fs = clip.sample_rate_hz;

    println!(
        "input: {} samples at {} Hz ({:.2} s)",
        clip.len(),
        fs,
        clip.duration_s()
    );
    println!("config: {}", config.to_kv_string());

    // Stage 1: pre-emphasis boosts high frequencies, s'[t] = s[t] - a*s[t-1].
    let emphasized = pre_emphasize(&clip.samples, config.pre_emphasis_a)?;

    // Stage 2: slice into overlapping frames (25 ms window, 10 ms hop).
    let frames = frame_signal(&emphasized, &config, fs)?;
    println!(
        "framing: {} frames of {} samples (hop {})",
        frames.n_frames(),
        frames.frame_len(),
        config.frame_hop_samples(fs)
    );

    // Stage 3: taper each frame with a Hamming window.
    let window = hamming_window(frames.frame_len())?;
    let windowed = apply_window(&frames, &window)?;

    // Stages 4-7 on one voiced frame mid-clip (the very first frames sit
    // in onset silence): FFT power spectrum, mel filterbank energies,
    // log compression, DCT.
    let n_fft = config.resolve_n_fft(fs)?;
    let bank = build_mel_filterbank(&config, fs)?;
    println!(
        "spectrum: {} FFT bins -> {} one-sided power bins -> {} mel filters",
        n_fft,
        n_fft / 2 + 1,
        bank.n_filters()
    );

    let mid = windowed.n_frames() / 2;
    let spectrum = power_spectrum(&windowed.frames[mid], n_fft)?;
    let energies = apply_filterbank(&spectrum, &bank)?;
    let log_energies = log_compress(&energies, config.log_floor);
    let ceps = dct_cepstrum(&log_energies, config.n_ceps)?;

    println!("frame {mid}, coefficients 1..{}:", config.n_ceps);
    for (i, c) in ceps.iter().enumerate() {
        println!("  c{:>2} = {:>9.4}", i + 1, c);
    }

    // The same result in one call, for the whole clip.
    let mfcc = compute_mfcc(&clip, &config)?;
    assert_eq!(mfcc.coeffs[mid], ceps);
    println!(
        "compute_mfcc: {} frames x {} coefficients",
        mfcc.n_frames(),
        mfcc.n_ceps()
    );

    // Classifiers consume one fixed-length vector per clip; `aggregate`
    // collapses the frame axis (per-coefficient mean, optionally + stddev).
    let mean_vec = aggregate(&mfcc, AggregationStrategy::Mean)?;
    let mean_std_vec = aggregate(&mfcc, AggregationStrategy::MeanStd)?;
    println!(
        "aggregated: mean -> {} dims, mean-std -> {} dims",
        mean_vec.dimension(),
        mean_std_vec.dimension()
    );
    println!(
        "mean vector: [{}]",
        mean_vec
            .values
            .iter()
            .map(|v| format!("{v:.3}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    Ok(())
}
