//! Integer-logic spiking network engine: 8-bit weights, 16-bit saturating
//! state, power-of-two decay, one simulation step per raster bin.

pub mod arith;
pub mod layer;
pub mod network;

pub use arith::{decay16, sat_add16};
pub use layer::{LayerState, QuantLayer, StepTelemetry};
pub use network::{argmax_lowest, InferenceReport, NetworkState, QuantNetwork};
