//! Shared test oracles, deliberately independent of the library's
//! implementation paths: a naive exact-integer network reference, a float
//! reference simulator, closed-form frequency-response measurement and a
//! scalar re-implementation of the peak-window loss.

#![allow(dead_code)]

pub mod dsp;
pub mod floatsim;
pub mod oracle;
pub mod peakloss;

use spikeline_core::{AudioBuffer, EventRaster};

/// Deterministic splitmix-style generator for test data that must not
/// depend on the library's RNG choices.
#[derive(Clone)]
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(0x5851f42d4c957f2d))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    pub fn range_i64(&mut self, lo: i64, hi_inclusive: i64) -> i64 {
        lo + self.below((hi_inclusive - lo + 1) as u64) as i64
    }

    /// Uniform in [0, 1).
    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range_f64(&mut self, lo: f64, hi: f64) -> f64 {
        lo + self.unit_f64() * (hi - lo)
    }
}

/// A pure sine tone with an initial phase.
pub fn tone(freq_hz: f64, amplitude: f64, phase: f64, duration_s: f64, fs: f64) -> AudioBuffer {
    let n = (duration_s * fs).round() as usize;
    AudioBuffer {
        samples: (0..n)
            .map(|i| amplitude * (2.0 * std::f64::consts::PI * freq_hz * i as f64 / fs + phase).sin())
            .collect(),
        sample_rate_hz: fs,
    }
}

/// Deterministic sparse raster with counts 0..=3 and roughly a quarter of
/// the cells active.
pub fn synthetic_raster(seed: u64, num_bins: usize, num_channels: usize) -> EventRaster {
    let mut rng = TestRng::new(seed);
    let mut counts = Vec::with_capacity(num_bins * num_channels);
    for _ in 0..num_bins * num_channels {
        let cell = rng.below(16);
        counts.push(if cell < 4 { (cell % 3 + 1) as u32 } else { 0 });
    }
    EventRaster::from_counts(num_channels, num_bins, counts, 0.010).expect("sized correctly")
}
