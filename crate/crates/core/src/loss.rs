//! Peak-window training objective over readout membrane traces.
//!
//! The target channel is scored by the squared distance between its mean
//! over a window starting at its peak and the target value; every other
//! channel is scored by its mean squared value over the whole trace.

use crate::error::{Error, Result};

/// T x C matrix of readout membrane values, one row per simulation step.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceMatrix {
    values: Vec<f64>,
    num_steps: usize,
    num_channels: usize,
    dt_s: f64,
}

impl TraceMatrix {
    pub fn new(num_channels: usize, dt_s: f64) -> Self {
        Self {
            values: Vec::new(),
            num_steps: 0,
            num_channels,
            dt_s,
        }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>, dt_s: f64) -> Result<Self> {
        let num_channels = rows.first().map_or(0, |r| r.len());
        let mut m = Self::new(num_channels, dt_s);
        for row in &rows {
            if row.len() != num_channels {
                return Err(Error::Shape("ragged trace rows".into()));
            }
            m.push_step(row.iter().copied());
        }
        Ok(m)
    }

    pub fn push_step(&mut self, row: impl IntoIterator<Item = f64>) {
        let before = self.values.len();
        self.values.extend(row);
        debug_assert_eq!(self.values.len() - before, self.num_channels);
        self.num_steps += 1;
    }

    pub fn num_steps(&self) -> usize {
        self.num_steps
    }

    pub fn num_channels(&self) -> usize {
        self.num_channels
    }

    pub fn dt_s(&self) -> f64 {
        self.dt_s
    }

    pub fn value(&self, step: usize, channel: usize) -> f64 {
        self.values[step * self.num_channels + channel]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn channel(&self, c: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.num_steps).map(move |t| self.value(t, c))
    }
}

/// Window length, peak target and off-channel weighting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakLossParams {
    pub window_s: f64,
    pub target_peak: f64,
    pub off_target_weight: f64,
}

impl Default for PeakLossParams {
    fn default() -> Self {
        Self {
            window_s: 0.100,
            target_peak: 1.5,
            off_target_weight: 1.0,
        }
    }
}

/// Evaluate the peak-window loss for a target class.
///
/// The window starts at the target channel's peak step (lowest index on
/// ties), spans `round(window_s / dt)` steps and truncates at the trace
/// end. Off-target channels contribute `weight * mean(x^2)` over all steps.
pub fn peak_loss(traces: &TraceMatrix, target_class: usize, params: &PeakLossParams) -> Result<f64> {
    let (t_len, c_len) = (traces.num_steps(), traces.num_channels());
    if t_len < 1 || c_len < 2 {
        return Err(Error::Shape(format!(
            "traces must be at least 1 step x 2 channels, got {t_len}x{c_len}"
        )));
    }
    if target_class >= c_len {
        return Err(Error::Index(format!(
            "target class {target_class} out of range 0..{c_len}"
        )));
    }
    if traces.values().iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("traces contain non-finite values".into()));
    }
    if !(params.window_s >= traces.dt_s()) {
        return Err(Error::Config(format!(
            "window {} s must be at least one step ({} s)",
            params.window_s,
            traces.dt_s()
        )));
    }

    let mut peak_step = 0;
    for t in 1..t_len {
        if traces.value(t, target_class) > traces.value(peak_step, target_class) {
            peak_step = t;
        }
    }
    let window_len = ((params.window_s / traces.dt_s()).round() as usize).max(1);
    let window_end = (peak_step + window_len).min(t_len);
    let window_mean = (peak_step..window_end)
        .map(|t| traces.value(t, target_class))
        .sum::<f64>()
        / (window_end - peak_step) as f64;

    let mut loss = (window_mean - params.target_peak).powi(2);
    for c in 0..c_len {
        if c == target_class {
            continue;
        }
        let mean_sq = traces.channel(c).map(|v| v * v).sum::<f64>() / t_len as f64;
        loss += params.off_target_weight * mean_sq;
    }
    Ok(loss)
}
