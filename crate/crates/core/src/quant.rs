//! Deployment pass: float network to integer network.
//!
//! Per-layer symmetric max-abs scaling maps weights to 8 bits and
//! thresholds to 16 bits with a configurable headroom factor; time
//! constants map to power-of-two decay shifts. Rounding is
//! half-away-from-zero throughout so the pass is bit-reproducible.

use crate::error::{Error, Result};
use crate::snn::{QuantLayer, QuantNetwork};
use crate::synnet::{FloatLayer, FloatNetwork};

/// Threshold headroom factor and spike cap applied during quantization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantParams {
    /// Multiplies the scaled threshold; 1.0 keeps float and integer spike
    /// behaviour aligned.
    pub threshold_headroom: f64,
    pub max_spikes_per_step: u32,
}

impl Default for QuantParams {
    fn default() -> Self {
        Self {
            threshold_headroom: 1.0,
            max_spikes_per_step: 15,
        }
    }
}

/// Per-layer scaling statistics plus the tau-to-dash mapping actually used.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantReport {
    pub layers: Vec<LayerQuantStats>,
    /// Distinct (tau_s, dash) pairs across the network, ascending tau.
    pub dash_map: Vec<(f64, u8)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerQuantStats {
    pub scale: f64,
    pub max_abs_weight: f64,
    pub mse: f64,
}

impl QuantReport {
    /// Human-readable report text (one layer per line plus the dash table).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, l) in self.layers.iter().enumerate() {
            out.push_str(&format!(
                "layer {i}: scale={:.6} max_abs={:.6} mse={:.3e}\n",
                l.scale, l.max_abs_weight, l.mse
            ));
        }
        out.push_str("tau_s -> dash\n");
        for (tau, dash) in &self.dash_map {
            out.push_str(&format!("{tau:.4} -> {dash}\n"));
        }
        out
    }
}

/// Map a time constant to its decay shift: `round(log2(tau / dt))` clamped
/// to [0, 15]. Values below dt/2 have no representable decay and error.
pub fn dash_from_tau(tau_s: f64, dt_s: f64) -> Result<u8> {
    if !(dt_s > 0.0) {
        return Err(Error::Config(format!("dt_s must be positive, got {dt_s}")));
    }
    if !(tau_s >= dt_s / 2.0) {
        return Err(Error::Config(format!(
            "tau {tau_s} s is below half the step {dt_s} s"
        )));
    }
    let n = (tau_s / dt_s).log2().round();
    Ok(n.clamp(0.0, 15.0) as u8)
}

fn round_half_away(x: f64) -> f64 {
    // f64::round rounds half away from zero, which is the documented rule.
    x.round()
}

fn quantize_layer(
    layer: &FloatLayer,
    dt_s: f64,
    params: &QuantParams,
) -> Result<(QuantLayer, LayerQuantStats)> {
    if layer.weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::Numerical("layer has non-finite weights".into()));
    }
    let max_abs = layer.weights.iter().fold(0.0f64, |m, w| m.max(w.abs()));
    let scale = if max_abs > 0.0 { 127.0 / max_abs } else { 1.0 };

    let mut mse = 0.0;
    let weights: Vec<i8> = layer
        .weights
        .iter()
        .map(|&w| {
            let q = round_half_away(w * scale).clamp(-128.0, 127.0);
            let err = w - q / scale;
            mse += err * err;
            q as i8
        })
        .collect();
    mse /= layer.weights.len() as f64;

    let threshold: Vec<i16> = layer
        .threshold
        .iter()
        .map(|&t| {
            round_half_away(t * scale * params.threshold_headroom).clamp(1.0, 32767.0) as i16
        })
        .collect();

    let syn_dash = layer
        .tau_syn_s
        .iter()
        .map(|&tau| dash_from_tau(tau, dt_s))
        .collect::<Result<Vec<u8>>>()?;
    let mem_dash = layer
        .tau_mem_s
        .iter()
        .map(|&tau| dash_from_tau(tau, dt_s))
        .collect::<Result<Vec<u8>>>()?;

    let quant = QuantLayer::new(
        layer.rows,
        layer.cols,
        weights,
        syn_dash,
        mem_dash,
        threshold,
        params.max_spikes_per_step,
    )?;
    Ok((quant, LayerQuantStats { scale, max_abs_weight: max_abs, mse }))
}

/// Quantize a float network with default parameters.
pub fn quantize_network(net: &FloatNetwork) -> Result<(QuantNetwork, QuantReport)> {
    quantize_network_with(net, &QuantParams::default())
}

pub fn quantize_network_with(
    net: &FloatNetwork,
    params: &QuantParams,
) -> Result<(QuantNetwork, QuantReport)> {
    let mut stats = Vec::new();
    let mut hidden = Vec::with_capacity(net.hidden.len());
    for layer in &net.hidden {
        let (q, s) = quantize_layer(layer, net.dt_s, params)?;
        hidden.push(q);
        stats.push(s);
    }
    let (readout, readout_stats) = quantize_layer(&net.readout, net.dt_s, params)?;
    stats.push(readout_stats);

    let mut dash_map: Vec<(f64, u8)> = Vec::new();
    for layer in net.layers() {
        for &tau in layer.tau_syn_s.iter().chain(&layer.tau_mem_s) {
            if !dash_map.iter().any(|(t, _)| (t - tau).abs() < 1e-12) {
                dash_map.push((tau, dash_from_tau(tau, net.dt_s)?));
            }
        }
    }
    dash_map.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite taus"));

    let quant = QuantNetwork::new(hidden, readout, net.dt_s)?;
    Ok((quant, QuantReport { layers: stats, dash_map }))
}
