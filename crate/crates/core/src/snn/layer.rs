//! A fully-connected layer of integer LIF neurons.
//!
//! State is 16-bit saturating, weights are 8-bit, and both synaptic and
//! membrane decay are realized as per-neuron power-of-two shifts. One call
//! to [`QuantLayer::step`] advances every neuron by one simulation step.

use crate::error::{Error, Result};
use crate::snn::arith::{decay16, sat_add16};

/// Per-output-neuron parameters plus the 8-bit weight matrix of one layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantLayer {
    rows: usize,
    cols: usize,
    /// Row-major `rows x cols`: `weights[out * cols + in]`.
    weights: Vec<i8>,
    syn_dash: Vec<u8>,
    mem_dash: Vec<u8>,
    threshold: Vec<i16>,
    max_spikes_per_step: u32,
}

impl QuantLayer {
    pub fn new(
        rows: usize,
        cols: usize,
        weights: Vec<i8>,
        syn_dash: Vec<u8>,
        mem_dash: Vec<u8>,
        threshold: Vec<i16>,
        max_spikes_per_step: u32,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("layer must be non-empty, got {rows}x{cols}")));
        }
        if weights.len() != rows * cols {
            return Err(Error::Shape(format!(
                "weight count {} does not match {rows}x{cols}",
                weights.len()
            )));
        }
        for (name, v) in [("syn_dash", &syn_dash), ("mem_dash", &mem_dash)] {
            if v.len() != rows {
                return Err(Error::Shape(format!("{name} length {} != rows {rows}", v.len())));
            }
            if let Some(d) = v.iter().find(|&&d| d > 15) {
                return Err(Error::Validation(format!("{name} value {d} outside [0, 15]")));
            }
        }
        if threshold.len() != rows {
            return Err(Error::Shape(format!(
                "threshold length {} != rows {rows}",
                threshold.len()
            )));
        }
        if let Some(t) = threshold.iter().find(|&&t| t < 1) {
            return Err(Error::Validation(format!("threshold {t} outside [1, 32767]")));
        }
        if max_spikes_per_step == 0 {
            return Err(Error::Validation("max_spikes_per_step must be >= 1".into()));
        }
        Ok(Self {
            rows,
            cols,
            weights,
            syn_dash,
            mem_dash,
            threshold,
            max_spikes_per_step,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn weight(&self, out: usize, inp: usize) -> i8 {
        self.weights[out * self.cols + inp]
    }

    pub fn weights(&self) -> &[i8] {
        &self.weights
    }

    pub fn syn_dash(&self) -> &[u8] {
        &self.syn_dash
    }

    pub fn mem_dash(&self) -> &[u8] {
        &self.mem_dash
    }

    pub fn threshold(&self) -> &[i16] {
        &self.threshold
    }

    pub fn max_spikes_per_step(&self) -> u32 {
        self.max_spikes_per_step
    }

    pub fn new_state(&self) -> LayerState {
        LayerState {
            i_syn: vec![0; self.rows],
            v_mem: vec![0; self.rows],
        }
    }

    /// Advance every neuron by one step.
    ///
    /// Per output neuron: decay the synaptic current, accumulate the
    /// weighted input counts (saturating), decay the membrane, integrate
    /// the synaptic current (saturating), then emit
    /// `min(v_mem / threshold, max_spikes_per_step)` spikes and subtract
    /// the spent threshold multiples from the membrane.
    pub fn step(
        &self,
        state: &mut LayerState,
        input_counts: &[u32],
        spikes_out: &mut Vec<u32>,
    ) -> Result<StepTelemetry> {
        if input_counts.len() != self.cols {
            return Err(Error::Shape(format!(
                "input width {} != layer input width {}",
                input_counts.len(),
                self.cols
            )));
        }
        debug_assert_eq!(state.i_syn.len(), self.rows);

        let active_inputs = input_counts.iter().filter(|&&c| c != 0).count() as u64;
        let mut telemetry = StepTelemetry {
            syn_ops: active_inputs * self.rows as u64,
            neuron_updates: self.rows as u64,
            spikes_emitted: 0,
        };

        spikes_out.clear();
        for j in 0..self.rows {
            let row = &self.weights[j * self.cols..(j + 1) * self.cols];
            let mut acc: i64 = 0;
            for (w, &c) in row.iter().zip(input_counts) {
                if c != 0 {
                    acc += *w as i64 * c as i64;
                }
            }
            let acc = acc.clamp(i32::MIN as i64, i32::MAX as i64) as i32;

            state.i_syn[j] = decay16(state.i_syn[j], self.syn_dash[j]);
            state.i_syn[j] = sat_add16(state.i_syn[j], acc);
            state.v_mem[j] = decay16(state.v_mem[j], self.mem_dash[j]);
            state.v_mem[j] = sat_add16(state.v_mem[j], state.i_syn[j] as i32);

            let threshold = self.threshold[j] as i32;
            let v = state.v_mem[j] as i32;
            let spikes = if v >= threshold {
                ((v / threshold) as u32).min(self.max_spikes_per_step)
            } else {
                0
            };
            if spikes > 0 {
                state.v_mem[j] = (v - spikes as i32 * threshold) as i16;
                telemetry.spikes_emitted += spikes as u64;
            }
            spikes_out.push(spikes);
        }
        Ok(telemetry)
    }
}

/// Synaptic current and membrane potential of every neuron in one layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerState {
    pub i_syn: Vec<i16>,
    pub v_mem: Vec<i16>,
}

impl LayerState {
    pub fn reset(&mut self) {
        self.i_syn.fill(0);
        self.v_mem.fill(0);
    }
}

/// Activity counters for one step (or summed over a run).
///
/// `syn_ops` counts one weight accumulation per (nonzero input entry,
/// output neuron) pair; `neuron_updates` counts every neuron once per
/// step regardless of activity.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepTelemetry {
    pub syn_ops: u64,
    pub neuron_updates: u64,
    pub spikes_emitted: u64,
}

impl std::ops::AddAssign for StepTelemetry {
    fn add_assign(&mut self, rhs: Self) {
        self.syn_ops += rhs.syn_ops;
        self.neuron_updates += rhs.neuron_updates;
        self.spikes_emitted += rhs.spikes_emitted;
    }
}
