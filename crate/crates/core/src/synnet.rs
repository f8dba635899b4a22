//! Construction of real-valued feed-forward LIF networks with laddered
//! synaptic time constants.
//!
//! Each hidden layer distributes its neurons over a ladder of synaptic time
//! constants tau_n = 2^n * dt, shortest first; membrane and readout time
//! constants are fixed at one rung (20 ms at the default step).

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hyperparameters of the float network: layer widths, time-constant counts
/// per layer, and the I/O geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynNetSpec {
    pub hidden_widths: Vec<usize>,
    pub tau_counts: Vec<usize>,
    pub num_inputs: usize,
    pub num_classes: usize,
    pub dt_s: f64,
    pub tau_mem_s: f64,
}

impl Default for SynNetSpec {
    fn default() -> Self {
        Self {
            hidden_widths: vec![31, 31, 31],
            tau_counts: vec![3, 7, 7],
            num_inputs: 16,
            num_classes: 4,
            dt_s: 0.010,
            tau_mem_s: 0.020,
        }
    }
}

impl SynNetSpec {
    pub fn validate(&self) -> Result<()> {
        if self.hidden_widths.len() != self.tau_counts.len() {
            return Err(Error::Config(format!(
                "{} hidden widths but {} tau counts",
                self.hidden_widths.len(),
                self.tau_counts.len()
            )));
        }
        for (l, (&w, &c)) in self.hidden_widths.iter().zip(&self.tau_counts).enumerate() {
            if w == 0 {
                return Err(Error::Config(format!("hidden layer {l} has zero width")));
            }
            if c == 0 || c > w {
                return Err(Error::Config(format!(
                    "layer {l}: tau count {c} must be in 1..={w}"
                )));
            }
        }
        if self.num_inputs == 0 || self.num_classes == 0 {
            return Err(Error::Config("num_inputs and num_classes must be positive".into()));
        }
        if !(self.dt_s > 0.0) || !(self.tau_mem_s > 0.0) {
            return Err(Error::Config("dt_s and tau_mem_s must be positive".into()));
        }
        Ok(())
    }
}

/// One real-valued fully-connected LIF layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloatLayer {
    pub rows: usize,
    pub cols: usize,
    /// Row-major `rows x cols`.
    pub weights: Vec<f64>,
    pub tau_syn_s: Vec<f64>,
    pub tau_mem_s: Vec<f64>,
    pub threshold: Vec<f64>,
}

impl FloatLayer {
    pub fn weight(&self, out: usize, inp: usize) -> f64 {
        self.weights[out * self.cols + inp]
    }
}

/// A float SynNet: hidden chain plus readout, the quantizer's input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloatNetwork {
    pub hidden: Vec<FloatLayer>,
    pub readout: FloatLayer,
    pub dt_s: f64,
}

impl FloatNetwork {
    pub fn layers(&self) -> impl Iterator<Item = &FloatLayer> {
        self.hidden.iter().chain(std::iter::once(&self.readout))
    }

    pub fn input_width(&self) -> usize {
        self.hidden.first().unwrap_or(&self.readout).cols
    }

    pub fn num_classes(&self) -> usize {
        self.readout.rows
    }
}

/// Partition `width` neurons into `count` near-equal contiguous groups
/// (earliest groups absorb the remainder) and give group g the time
/// constant 2^(g+1) * dt, ascending.
pub fn assign_time_constants(width: usize, count: usize, dt_s: f64) -> Result<Vec<f64>> {
    if count == 0 || count > width {
        return Err(Error::Config(format!(
            "tau count {count} must be in 1..={width}"
        )));
    }
    let base = width / count;
    let remainder = width % count;
    let mut taus = Vec::with_capacity(width);
    for group in 0..count {
        let size = base + usize::from(group < remainder);
        let tau = 2f64.powi(group as i32 + 1) * dt_s;
        taus.extend(std::iter::repeat_n(tau, size));
    }
    Ok(taus)
}

/// Build a float network from the spec with seeded uniform initialization
/// in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
pub fn build_synnet(spec: &SynNetSpec, init_seed: u64) -> Result<FloatNetwork> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(init_seed);

    let mut build_layer = |rows: usize, cols: usize, tau_syn: Vec<f64>| -> FloatLayer {
        let bound = 1.0 / (cols as f64).sqrt();
        let dist = Uniform::new_inclusive(-bound, bound);
        FloatLayer {
            rows,
            cols,
            weights: (0..rows * cols).map(|_| dist.sample(&mut rng)).collect(),
            tau_syn_s: tau_syn,
            tau_mem_s: vec![spec.tau_mem_s; rows],
            threshold: vec![1.0; rows],
        }
    };

    let mut hidden = Vec::with_capacity(spec.hidden_widths.len());
    let mut in_width = spec.num_inputs;
    for (l, &width) in spec.hidden_widths.iter().enumerate() {
        let taus = assign_time_constants(width, spec.tau_counts[l], spec.dt_s)?;
        hidden.push(build_layer(width, in_width, taus));
        in_width = width;
    }
    let readout = build_layer(
        spec.num_classes,
        in_width,
        vec![spec.tau_mem_s; spec.num_classes],
    );

    Ok(FloatNetwork {
        hidden,
        readout,
        dt_s: spec.dt_s,
    })
}
