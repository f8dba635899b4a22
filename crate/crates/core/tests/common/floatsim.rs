//! Float-domain reference simulator for real-valued networks.
//!
//! Mirrors the deployment target's discrete-time dynamics (per-step
//! retention 1 - 2^(-round(log2(tau/dt))), subtract-reset, per-step spike
//! cap) with real-valued weights, states and thresholds, so quantization
//! error is the only difference from the integer engine.

use spikeline_core::{EventRaster, FloatNetwork};

const MAX_SPIKES_PER_STEP: u64 = 15;

fn retention(tau_s: f64, dt_s: f64) -> f64 {
    let dash = (tau_s / dt_s).log2().round().clamp(0.0, 15.0);
    1.0 - 0.5f64.powf(dash)
}

/// Per-class readout spike counts of the float network over a raster.
pub fn readout_counts(net: &FloatNetwork, raster: &EventRaster) -> Vec<u64> {
    let layers: Vec<_> = net.layers().collect();
    let mut i_syn: Vec<Vec<f64>> = layers.iter().map(|l| vec![0.0; l.rows]).collect();
    let mut v_mem = i_syn.clone();
    let mut counts = vec![0u64; net.num_classes()];

    for t in 0..raster.num_bins() {
        let mut current: Vec<f64> = raster.bin(t).iter().map(|&c| c as f64).collect();
        for (li, layer) in layers.iter().enumerate() {
            let mut spikes = vec![0.0f64; layer.rows];
            for j in 0..layer.rows {
                let mut weighted = 0.0;
                for (i, &c) in current.iter().enumerate() {
                    weighted += layer.weight(j, i) * c;
                }
                i_syn[li][j] = i_syn[li][j] * retention(layer.tau_syn_s[j], net.dt_s) + weighted;
                v_mem[li][j] = v_mem[li][j] * retention(layer.tau_mem_s[j], net.dt_s) + i_syn[li][j];

                let threshold = layer.threshold[j];
                if v_mem[li][j] >= threshold {
                    let k = ((v_mem[li][j] / threshold).floor() as u64).min(MAX_SPIKES_PER_STEP);
                    v_mem[li][j] -= k as f64 * threshold;
                    spikes[j] = k as f64;
                }
            }
            current = spikes;
        }
        for (c, &s) in counts.iter_mut().zip(&current) {
            *c += s as u64;
        }
    }
    counts
}
