//! Feed-forward chains of quantized layers and whole-raster inference.

use crate::energy::EnergyBreakdown;
use crate::error::{Error, Result};
use crate::loss::TraceMatrix;
use crate::raster::EventRaster;
use crate::snn::layer::{LayerState, QuantLayer, StepTelemetry};

/// A deployable integer network: hidden layers plus a spiking readout layer
/// whose per-class spike counts drive the decision.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantNetwork {
    hidden: Vec<QuantLayer>,
    readout: QuantLayer,
    dt_s: f64,
}

impl QuantNetwork {
    pub fn new(hidden: Vec<QuantLayer>, readout: QuantLayer, dt_s: f64) -> Result<Self> {
        if !(dt_s > 0.0) {
            return Err(Error::Config(format!("dt_s must be positive, got {dt_s}")));
        }
        let mut width = None;
        for (i, layer) in hidden.iter().chain(std::iter::once(&readout)).enumerate() {
            if let Some(prev) = width {
                if layer.cols() != prev {
                    return Err(Error::Shape(format!(
                        "layer {i} expects {} inputs but previous layer outputs {prev}",
                        layer.cols()
                    )));
                }
            }
            width = Some(layer.rows());
        }
        Ok(Self { hidden, readout, dt_s })
    }

    pub fn input_width(&self) -> usize {
        self.hidden.first().unwrap_or(&self.readout).cols()
    }

    pub fn num_classes(&self) -> usize {
        self.readout.rows()
    }

    pub fn dt_s(&self) -> f64 {
        self.dt_s
    }

    pub fn hidden_layers(&self) -> &[QuantLayer] {
        &self.hidden
    }

    pub fn readout(&self) -> &QuantLayer {
        &self.readout
    }

    /// All layers in feed order, readout last.
    pub fn layers(&self) -> impl Iterator<Item = &QuantLayer> {
        self.hidden.iter().chain(std::iter::once(&self.readout))
    }

    pub fn num_neurons(&self) -> usize {
        self.layers().map(|l| l.rows()).sum()
    }

    pub fn new_state(&self) -> NetworkState {
        NetworkState {
            layers: self.layers().map(|l| l.new_state()).collect(),
            scratch: vec![Vec::new(), Vec::new()],
        }
    }

    /// Advance the whole chain by one step. Spikes propagate through all
    /// layers within the same step; returns the readout spike counts.
    pub fn step(
        &self,
        state: &mut NetworkState,
        input_counts: &[u32],
    ) -> Result<(Vec<u32>, StepTelemetry)> {
        let mut telemetry = StepTelemetry::default();
        let mut current: Vec<u32> = input_counts.to_vec();
        let mut next = std::mem::take(&mut state.scratch[0]);
        for (i, layer) in self.layers().enumerate() {
            telemetry += layer.step(&mut state.layers[i], &current, &mut next)?;
            std::mem::swap(&mut current, &mut next);
        }
        state.scratch[0] = next;
        Ok((current, telemetry))
    }

    /// Run a full raster from zeroed state and report the class decision.
    ///
    /// With `record_traces` the readout membrane is sampled at the end of
    /// every step, after spike subtraction.
    pub fn run_raster(&self, raster: &EventRaster, record_traces: bool) -> Result<InferenceReport> {
        if raster.num_channels() != self.input_width() {
            return Err(Error::Shape(format!(
                "raster has {} channels but the network expects {}",
                raster.num_channels(),
                self.input_width()
            )));
        }
        let mut state = self.new_state();
        let mut counts = vec![0u64; self.num_classes()];
        let mut telemetry = StepTelemetry::default();
        let mut traces = record_traces
            .then(|| TraceMatrix::new(self.num_classes(), self.dt_s));

        for t in 0..raster.num_bins() {
            let (spikes, step_tel) = self.step(&mut state, raster.bin(t))?;
            telemetry += step_tel;
            for (c, s) in counts.iter_mut().zip(&spikes) {
                *c += *s as u64;
            }
            if let Some(tr) = traces.as_mut() {
                let readout_state = state.layers.last().expect("readout state");
                tr.push_step(readout_state.v_mem.iter().map(|&v| v as f64));
            }
        }

        Ok(InferenceReport {
            decision: argmax_lowest(&counts),
            class_spike_counts: counts,
            telemetry,
            simulated_steps: raster.num_bins(),
            readout_traces: traces,
            energy: None,
        })
    }
}

/// Argmax with lowest-index tie-break; 0 for an all-zero (or empty) vector.
pub fn argmax_lowest(counts: &[u64]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

/// Per-layer states for one inference stream (readout state last).
#[derive(Debug, Clone)]
pub struct NetworkState {
    pub layers: Vec<LayerState>,
    scratch: Vec<Vec<u32>>,
}

impl NetworkState {
    pub fn reset(&mut self) {
        for l in &mut self.layers {
            l.reset();
        }
    }
}

/// Outcome of running one raster: the decision, per-class spike counts,
/// activity totals, and optionally the readout membrane traces and an
/// attached energy estimate.
#[derive(Debug, Clone)]
pub struct InferenceReport {
    pub decision: usize,
    pub class_spike_counts: Vec<u64>,
    pub telemetry: StepTelemetry,
    pub simulated_steps: usize,
    pub readout_traces: Option<TraceMatrix>,
    pub energy: Option<EnergyBreakdown>,
}
