//! Audio front-end: selectable gain, band-pass filterbank, full-wave
//! rectification, LIF event encoding and temporal binning.
//!
//! The whole stage is streaming: [`AfeProcessor`] carries filter, encoder
//! and binning state across arbitrarily chunked input, and produces bins
//! only when they complete. [`encode_audio`] is the single-shot wrapper.

pub mod encoder;
pub mod filterbank;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::EventRaster;

pub use encoder::{bin_events, samples_per_bin, EncoderState, EventBinner};
pub use filterbank::{band_centers, design_filterbank, FilterbankSpec, FilterbankState, SosCoeffs};

/// Amplifier gain setting; only 0, 6 and 12 dB exist in the front-end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum GainDb {
    Db0,
    Db6,
    Db12,
}

impl GainDb {
    pub fn db(self) -> f64 {
        match self {
            GainDb::Db0 => 0.0,
            GainDb::Db6 => 6.0,
            GainDb::Db12 => 12.0,
        }
    }

    /// Linear amplitude factor `10^(dB/20)`.
    pub fn factor(self) -> f64 {
        10f64.powf(self.db() / 20.0)
    }
}

impl TryFrom<u8> for GainDb {
    type Error = String;

    fn try_from(value: u8) -> std::result::Result<Self, String> {
        match value {
            0 => Ok(GainDb::Db0),
            6 => Ok(GainDb::Db6),
            12 => Ok(GainDb::Db12),
            other => Err(format!("gain must be 0, 6 or 12 dB, got {other}")),
        }
    }
}

impl From<GainDb> for u8 {
    fn from(value: GainDb) -> u8 {
        value.db() as u8
    }
}

/// Default encoder threshold: calibrated once so that a full-scale 1 kHz
/// sine at 0 dB gain produces ~100 events/s in its best band with the
/// default filterbank (measured 99 ev/s in band 8). A fixed constant, not
/// runtime auto-tuning.
pub const DEFAULT_ENCODER_THRESHOLD: f64 = 62.5;

/// Parameters of the per-band LIF smoothing/eventing stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LifEncoderConfig {
    pub tau_mem_s: f64,
    pub threshold: f64,
    pub max_events_per_bin: u32,
}

impl Default for LifEncoderConfig {
    fn default() -> Self {
        Self {
            tau_mem_s: 0.002,
            threshold: DEFAULT_ENCODER_THRESHOLD,
            max_events_per_bin: 15,
        }
    }
}

impl LifEncoderConfig {
    pub fn validate(&self, sample_rate_hz: f64) -> Result<()> {
        if !(self.tau_mem_s > 1.0 / sample_rate_hz) {
            return Err(Error::Config(format!(
                "encoder tau_mem_s {} must exceed one sample period",
                self.tau_mem_s
            )));
        }
        if !(self.threshold > 0.0) {
            return Err(Error::Config("encoder threshold must be positive".into()));
        }
        if self.max_events_per_bin < 1 {
            return Err(Error::Config("max_events_per_bin must be >= 1".into()));
        }
        Ok(())
    }
}

/// Full front-end configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AfeConfig {
    pub sample_rate_hz: f64,
    pub num_bands: usize,
    pub f_low_hz: f64,
    pub f_high_hz: f64,
    pub q_factor: f64,
    pub gain_db: GainDb,
    pub bin_dt_s: f64,
    pub encoder: LifEncoderConfig,
}

impl Default for AfeConfig {
    fn default() -> Self {
        Self {
            sample_rate_hz: 48_000.0,
            num_bands: 16,
            f_low_hz: 40.0,
            f_high_hz: 16_940.0,
            q_factor: 4.0,
            gain_db: GainDb::Db0,
            bin_dt_s: 0.010,
            encoder: LifEncoderConfig::default(),
        }
    }
}

impl AfeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_bands < 1 {
            return Err(Error::Config("num_bands must be >= 1".into()));
        }
        if !(self.q_factor > 0.5) {
            return Err(Error::Config(format!("q_factor {} must exceed 0.5", self.q_factor)));
        }
        if !(self.f_low_hz > 0.0) {
            return Err(Error::Config("f_low_hz must be positive".into()));
        }
        // A single band may sit at one frequency; multiple bands need a span.
        if self.num_bands >= 2 && !(self.f_low_hz < self.f_high_hz) {
            return Err(Error::Config(format!(
                "f_low_hz {} must be below f_high_hz {}",
                self.f_low_hz, self.f_high_hz
            )));
        }
        if !(self.f_high_hz >= self.f_low_hz) {
            return Err(Error::Config("f_high_hz must be >= f_low_hz".into()));
        }
        if !(self.f_high_hz < self.sample_rate_hz / 2.0) {
            return Err(Error::Config(format!(
                "f_high_hz {} must be below Nyquist {}",
                self.f_high_hz,
                self.sample_rate_hz / 2.0
            )));
        }
        if !(self.bin_dt_s > 0.0) {
            return Err(Error::Config("bin_dt_s must be positive".into()));
        }
        self.encoder.validate(self.sample_rate_hz)?;
        Ok(())
    }
}

/// Mono PCM samples at a fixed sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    pub samples: Vec<f64>,
    pub sample_rate_hz: f64,
}

impl AudioBuffer {
    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }
}

/// Scale every sample by the gain factor; pure floating-point, no clipping.
pub fn apply_gain(audio: &AudioBuffer, gain_db: GainDb) -> AudioBuffer {
    let factor = gain_db.factor();
    AudioBuffer {
        samples: audio.samples.iter().map(|&s| s * factor).collect(),
        sample_rate_hz: audio.sample_rate_hz,
    }
}

/// Full-wave rectification.
#[inline]
pub fn rectify(x: f64) -> f64 {
    x.abs()
}

/// Streaming encoder carrying all front-end state; feeding the same samples
/// in any chunking produces bit-identical rasters.
#[derive(Debug, Clone)]
pub struct AfeProcessor {
    spec: FilterbankSpec,
    filter_state: FilterbankState,
    encoder_state: EncoderState,
    binner: EventBinner,
    gain_factor: f64,
    band_out: Vec<f64>,
    events: Vec<u32>,
    num_bands: usize,
    bin_dt_s: f64,
    sample_rate_hz: f64,
}

impl AfeProcessor {
    pub fn new(config: &AfeConfig) -> Result<Self> {
        config.validate()?;
        let spec = design_filterbank(config)?;
        let per_bin = samples_per_bin(config.sample_rate_hz, config.bin_dt_s)?;
        let filter_state = spec.new_state();
        let encoder_state =
            EncoderState::new(&config.encoder, config.num_bands, config.sample_rate_hz)?;
        Ok(Self {
            spec,
            filter_state,
            encoder_state,
            binner: EventBinner::new(config.num_bands, per_bin, config.encoder.max_events_per_bin),
            gain_factor: config.gain_db.factor(),
            band_out: vec![0.0; config.num_bands],
            events: vec![0; config.num_bands],
            num_bands: config.num_bands,
            bin_dt_s: config.bin_dt_s,
            sample_rate_hz: config.sample_rate_hz,
        })
    }

    pub fn num_bands(&self) -> usize {
        self.num_bands
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn filterbank(&self) -> &FilterbankSpec {
        &self.spec
    }

    /// An empty raster matching this processor's geometry.
    pub fn new_raster(&self) -> EventRaster {
        EventRaster::new(self.num_bands, self.bin_dt_s)
    }

    /// Feed a chunk of samples, appending any completed bins to `raster`.
    pub fn process(&mut self, samples: &[f64], raster: &mut EventRaster) -> Result<()> {
        if raster.num_channels() != self.num_bands {
            return Err(Error::Shape(format!(
                "raster has {} channels, processor produces {}",
                raster.num_channels(),
                self.num_bands
            )));
        }
        for &sample in samples {
            let amplified = sample * self.gain_factor;
            self.spec.step(&mut self.filter_state, amplified, &mut self.band_out);
            for y in &mut self.band_out {
                *y = rectify(*y);
            }
            self.encoder_state.step(&self.band_out, &mut self.events);
            self.binner.push_step(&self.events, raster);
        }
        Ok(())
    }

    pub fn reset(&mut self) {
        self.filter_state.reset();
        self.encoder_state.reset();
        self.binner.reset();
    }
}

/// Single-shot encoding of a whole buffer: gain, filterbank, rectify, LIF
/// encode, bin. The trailing partial bin is dropped.
pub fn encode_audio(audio: &AudioBuffer, config: &AfeConfig) -> Result<EventRaster> {
    if (audio.sample_rate_hz - config.sample_rate_hz).abs() > 1e-9 {
        return Err(Error::Validation(format!(
            "audio sample rate {} does not match configured {} (resampling not supported)",
            audio.sample_rate_hz, config.sample_rate_hz
        )));
    }
    let mut processor = AfeProcessor::new(config)?;
    let mut raster = processor.new_raster();
    processor.process(&audio.samples, &mut raster)?;
    Ok(raster)
}
