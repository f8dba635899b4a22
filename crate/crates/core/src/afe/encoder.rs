//! LIF event encoding of rectified band signals and 10 ms temporal binning.

use crate::afe::LifEncoderConfig;
use crate::error::{Error, Result};
use crate::raster::EventRaster;

/// Per-band leaky integrator state running at the audio sample rate.
#[derive(Debug, Clone)]
pub struct EncoderState {
    v: Vec<f64>,
    decay: f64,
    threshold: f64,
    max_events_per_step: u32,
}

impl EncoderState {
    pub fn new(config: &LifEncoderConfig, num_bands: usize, sample_rate_hz: f64) -> Result<Self> {
        config.validate(sample_rate_hz)?;
        Ok(Self {
            v: vec![0.0; num_bands],
            decay: (-1.0 / (sample_rate_hz * config.tau_mem_s)).exp(),
            threshold: config.threshold,
            max_events_per_step: config.max_events_per_bin,
        })
    }

    pub fn reset(&mut self) {
        self.v.fill(0.0);
    }

    /// One audio-rate step: leak, integrate the rectified inputs, then emit
    /// an event per threshold crossing (subtract-reset), capped per step.
    pub fn step(&mut self, rectified: &[f64], events_out: &mut [u32]) {
        debug_assert_eq!(rectified.len(), self.v.len());
        debug_assert_eq!(events_out.len(), self.v.len());
        for (k, v) in self.v.iter_mut().enumerate() {
            *v = *v * self.decay + rectified[k];
            let mut events = 0u32;
            while *v >= self.threshold && events < self.max_events_per_step {
                *v -= self.threshold;
                events += 1;
            }
            events_out[k] = events;
        }
    }
}

/// Accumulates per-step events into fixed-width bins; a bin is emitted only
/// when complete, so trailing partial bins are dropped.
#[derive(Debug, Clone)]
pub struct EventBinner {
    acc: Vec<u32>,
    samples_in_bin: usize,
    samples_per_bin: usize,
    max_events_per_bin: u32,
}

impl EventBinner {
    pub fn new(num_channels: usize, samples_per_bin: usize, max_events_per_bin: u32) -> Self {
        Self {
            acc: vec![0; num_channels],
            samples_in_bin: 0,
            samples_per_bin,
            max_events_per_bin,
        }
    }

    pub fn reset(&mut self) {
        self.acc.fill(0);
        self.samples_in_bin = 0;
    }

    /// Add one audio step's events; pushes a saturated bin to `raster` when
    /// the bin fills.
    pub fn push_step(&mut self, events: &[u32], raster: &mut EventRaster) {
        for (a, &e) in self.acc.iter_mut().zip(events) {
            *a = a.saturating_add(e);
        }
        self.samples_in_bin += 1;
        if self.samples_in_bin == self.samples_per_bin {
            let cap = self.max_events_per_bin;
            let bin: Vec<u32> = self.acc.iter().map(|&a| a.min(cap)).collect();
            raster.push_bin(&bin);
            self.reset();
        }
    }
}

/// Number of audio samples per bin; errors unless `fs * bin_dt` is within
/// 1e-6 of an integer.
pub fn samples_per_bin(sample_rate_hz: f64, bin_dt_s: f64) -> Result<usize> {
    let exact = sample_rate_hz * bin_dt_s;
    let rounded = exact.round();
    if (exact - rounded).abs() > 1e-6 || rounded < 1.0 {
        return Err(Error::Config(format!(
            "bin width {bin_dt_s} s is not an integer number of samples at {sample_rate_hz} Hz"
        )));
    }
    Ok(rounded as usize)
}

/// Bin a pre-computed per-step event stream (one slice of channel counts
/// per audio step) into an EventRaster.
pub fn bin_events(
    num_channels: usize,
    steps: &[Vec<u32>],
    bin_dt_s: f64,
    sample_rate_hz: f64,
    max_events_per_bin: u32,
) -> Result<EventRaster> {
    let per_bin = samples_per_bin(sample_rate_hz, bin_dt_s)?;
    let mut raster = EventRaster::new(num_channels, bin_dt_s);
    let mut binner = EventBinner::new(num_channels, per_bin, max_events_per_bin);
    for step in steps {
        if step.len() != num_channels {
            return Err(Error::Shape(format!(
                "event step has {} channels, expected {num_channels}",
                step.len()
            )));
        }
        binner.push_step(step, &mut raster);
    }
    Ok(raster)
}
