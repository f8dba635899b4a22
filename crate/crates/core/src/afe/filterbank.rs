//! Design and streaming evaluation of the 16-band band-pass filterbank.
//!
//! Each band is a single second-order section derived from the 2nd-order
//! Butterworth band-pass prototype H(s) = B*s / (s^2 + B*s + w0^2), whose
//! -3 dB edges sit exactly at f_c*(sqrt(1 + 1/(4Q^2)) -+ 1/(2Q)). Both edge
//! frequencies are prewarped through tan before the bilinear transform, so
//! the digital -3 dB edges land on those targets exactly even for bands
//! close to Nyquist; the peak stays within a fraction of a percent of f_c.

use std::f64::consts::PI;

use crate::afe::AfeConfig;
use crate::error::{Error, Result};

/// Normalized second-order section (a0 = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SosCoeffs {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub a1: f64,
    pub a2: f64,
}

/// Coefficients and center frequencies of all bands, immutable after design.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterbankSpec {
    bands: Vec<SosCoeffs>,
    centers_hz: Vec<f64>,
    sample_rate_hz: f64,
}

impl FilterbankSpec {
    pub fn num_bands(&self) -> usize {
        self.bands.len()
    }

    pub fn band(&self, k: usize) -> &SosCoeffs {
        &self.bands[k]
    }

    pub fn center_hz(&self, k: usize) -> f64 {
        self.centers_hz[k]
    }

    pub fn centers_hz(&self) -> &[f64] {
        &self.centers_hz
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn new_state(&self) -> FilterbankState {
        FilterbankState {
            z: vec![[0.0; 2]; self.bands.len()],
        }
    }

    /// Advance every band by one input sample (direct form II transposed),
    /// writing one output per band.
    pub fn step(&self, state: &mut FilterbankState, sample: f64, outputs: &mut [f64]) {
        debug_assert_eq!(outputs.len(), self.bands.len());
        for (k, c) in self.bands.iter().enumerate() {
            let z = &mut state.z[k];
            let y = c.b0 * sample + z[0];
            z[0] = c.b1 * sample - c.a1 * y + z[1];
            z[1] = c.b2 * sample - c.a2 * y;
            outputs[k] = y;
        }
    }
}

/// Per-band delay memory; one instance per audio stream.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterbankState {
    z: Vec<[f64; 2]>,
}

impl FilterbankState {
    pub fn reset(&mut self) {
        for z in &mut self.z {
            *z = [0.0; 2];
        }
    }
}

/// Log-uniform band centers between `f_low` and `f_high` (geometric mean
/// for a single band).
pub fn band_centers(num_bands: usize, f_low_hz: f64, f_high_hz: f64) -> Vec<f64> {
    if num_bands == 1 {
        return vec![(f_low_hz * f_high_hz).sqrt()];
    }
    let ratio = f_high_hz / f_low_hz;
    (0..num_bands)
        .map(|k| f_low_hz * ratio.powf(k as f64 / (num_bands - 1) as f64))
        .collect()
}

/// Design one second-order band-pass section for a center frequency.
fn design_band(f_c: f64, q: f64, fs: f64) -> Result<SosCoeffs> {
    // Exact analog -3 dB edges of the constant-Q prototype.
    let s = (1.0 + 1.0 / (4.0 * q * q)).sqrt();
    let f1 = f_c * (s - 1.0 / (2.0 * q));
    let f2 = f_c * (s + 1.0 / (2.0 * q));
    let nyquist = fs / 2.0;
    if f2 >= nyquist {
        return Err(Error::Config(format!(
            "band edge {f2:.1} Hz (center {f_c:.1} Hz, Q {q}) reaches Nyquist {nyquist:.1} Hz"
        )));
    }

    // Prewarp both edges; with s = (1 - z^-1) / (1 + z^-1) the analog
    // frequency axis is tan(pi * f / fs).
    let w1 = (PI * f1 / fs).tan();
    let w2 = (PI * f2 / fs).tan();
    let bw = w2 - w1;
    let w0_sq = w1 * w2;

    let a0 = 1.0 + bw + w0_sq;
    let coeffs = SosCoeffs {
        b0: bw / a0,
        b1: 0.0,
        b2: -bw / a0,
        a1: 2.0 * (w0_sq - 1.0) / a0,
        a2: (1.0 - bw + w0_sq) / a0,
    };

    let radius = max_pole_radius(&coeffs);
    if !(radius < 1.0 - 1e-9) {
        return Err(Error::Config(format!(
            "band at {f_c:.1} Hz is unstable after discretization (pole radius {radius})"
        )));
    }
    Ok(coeffs)
}

/// Largest pole magnitude of a normalized section.
pub fn max_pole_radius(c: &SosCoeffs) -> f64 {
    let disc = c.a1 * c.a1 - 4.0 * c.a2;
    if disc < 0.0 {
        // Complex-conjugate pair: |p|^2 = a2.
        c.a2.max(0.0).sqrt()
    } else {
        let root = disc.sqrt();
        let p1 = (-c.a1 + root) / 2.0;
        let p2 = (-c.a1 - root) / 2.0;
        p1.abs().max(p2.abs())
    }
}

/// Design the full filterbank for a validated configuration.
pub fn design_filterbank(config: &AfeConfig) -> Result<FilterbankSpec> {
    config.validate()?;
    let centers = band_centers(config.num_bands, config.f_low_hz, config.f_high_hz);
    let bands = centers
        .iter()
        .map(|&f_c| design_band(f_c, config.q_factor, config.sample_rate_hz))
        .collect::<Result<Vec<_>>>()?;
    Ok(FilterbankSpec {
        bands,
        centers_hz: centers,
        sample_rate_hz: config.sample_rate_hz,
    })
}
