//! Mono WAV input/output. 16-bit PCM and 32-bit float are accepted;
//! mismatched sample rates are rejected rather than resampled.

use std::path::Path;

use crate::afe::AudioBuffer;
use crate::error::{Error, Result};

/// Read a mono WAV file, checking the sample rate against the pipeline
/// configuration.
pub fn read_wav_mono(path: &Path, expected_rate_hz: f64) -> Result<AudioBuffer> {
    let reader = hound::WavReader::open(path)
        .map_err(|e| wav_error(path, e))?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(Error::Validation(format!(
            "{}: expected mono audio, got {} channels",
            path.display(),
            spec.channels
        )));
    }
    if (spec.sample_rate as f64 - expected_rate_hz).abs() > 1e-9 {
        return Err(Error::Validation(format!(
            "{}: sample rate {} does not match configured {} (resampling not supported)",
            path.display(),
            spec.sample_rate,
            expected_rate_hz
        )));
    }

    let samples: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (hound::SampleFormat::Int, 16) => reader
            .into_samples::<i16>()
            .map(|s| s.map(|v| v as f64 / 32768.0))
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| wav_error(path, e))?,
        (hound::SampleFormat::Float, 32) => reader
            .into_samples::<f32>()
            .map(|s| s.map(|v| v as f64))
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| wav_error(path, e))?,
        (format, bits) => {
            return Err(Error::Validation(format!(
                "{}: unsupported sample format {format:?}/{bits}-bit (need 16-bit PCM or 32-bit float)",
                path.display()
            )));
        }
    };

    Ok(AudioBuffer {
        samples,
        sample_rate_hz: spec.sample_rate as f64,
    })
}

/// Write mono 16-bit PCM, clamping samples to [-1, 1].
pub fn write_wav_mono16(path: &Path, samples: &[f64], sample_rate_hz: f64) -> Result<()> {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: sample_rate_hz.round() as u32,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut writer = hound::WavWriter::create(path, spec).map_err(|e| wav_error(path, e))?;
    for &s in samples {
        let v = (s.clamp(-1.0, 1.0) * 32767.0).round() as i16;
        writer.write_sample(v).map_err(|e| wav_error(path, e))?;
    }
    writer.finalize().map_err(|e| wav_error(path, e))
}

fn wav_error(path: &Path, e: hound::Error) -> Error {
    match e {
        hound::Error::IoError(io) => Error::io(path, io),
        other => Error::Parse {
            line: 0,
            msg: format!("{}: {other}", path.display()),
        },
    }
}
