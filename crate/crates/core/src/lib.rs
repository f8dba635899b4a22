//! Bit-exact simulation of an event-driven audio classification pipeline:
//! PCM audio -> 16-band sparse event encoding -> quantized integer LIF
//! network inference -> class decision, with activity telemetry and a
//! parametric energy/latency model.
//!
//! The crate is organized as the pipeline flows:
//!
//! - [`afe`]: gain, Butterworth band-pass filterbank, rectification, LIF
//!   event encoding and temporal binning.
//! - [`raster`]: the binned event grid and its evt-csv interchange format.
//! - [`snn`]: the integer network engine (8-bit weights, 16-bit saturating
//!   state, power-of-two decay).
//! - [`synnet`] and [`quant`]: float network construction and the
//!   deployment quantization pass.
//! - [`loss`]: the peak-window training objective over readout traces.
//! - [`runner`] and [`energy`]: dataset evaluation, activity aggregation
//!   and the calibrated energy/latency proxy.
//! - [`qnet`] and [`wav`]: network and audio file I/O.

// Validation guards use `!(x > 0.0)` so NaN fails the check; the negated
// form is deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod afe;
pub mod energy;
pub mod error;
pub mod loss;
pub mod qnet;
pub mod quant;
pub mod raster;
pub mod runner;
pub mod snn;
pub mod synnet;
pub mod wav;

pub use afe::{encode_audio, AfeConfig, AfeProcessor, AudioBuffer, GainDb};
pub use energy::{
    estimate_energy, simulate_latency, EnergyBreakdown, EnergyModelParams, LatencyMode,
};
pub use error::{Error, Result};
pub use loss::{peak_loss, PeakLossParams, TraceMatrix};
pub use quant::{dash_from_tau, quantize_network, QuantParams, QuantReport};
pub use raster::EventRaster;
pub use runner::{evaluate, load_manifest, EvalOptions, EvalSummary, Manifest, Split};
pub use snn::{InferenceReport, QuantLayer, QuantNetwork, StepTelemetry};
pub use synnet::{assign_time_constants, build_synnet, FloatNetwork, SynNetSpec};
