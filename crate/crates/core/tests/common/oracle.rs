//! Naive exact-integer reference simulator, written independently of the
//! engine: nested `Vec` weights, i64 arithmetic with explicit clamps, and
//! floor division via `div_euclid` instead of shifts.

#[derive(Clone)]
pub struct OracleLayer {
    /// `[output][input]` weights.
    pub weights: Vec<Vec<i64>>,
    pub syn_dash: Vec<u32>,
    pub mem_dash: Vec<u32>,
    pub threshold: Vec<i64>,
    pub max_spikes_per_step: i64,
}

#[derive(Clone)]
pub struct OracleNet {
    /// Feed order, readout last.
    pub layers: Vec<OracleLayer>,
}

pub struct OracleOutcome {
    pub per_bin_readout: Vec<Vec<i64>>,
    pub class_counts: Vec<i64>,
    pub decision: usize,
    pub syn_ops: u64,
    pub neuron_updates: u64,
    pub spikes_emitted: u64,
    pub final_i_syn: Vec<Vec<i64>>,
    pub final_v_mem: Vec<Vec<i64>>,
}

fn clamp16(x: i64) -> i64 {
    x.clamp(-32768, 32767)
}

fn clamp32(x: i64) -> i64 {
    x.clamp(i32::MIN as i64, i32::MAX as i64)
}

fn decay_floor(value: i64, dash: u32) -> i64 {
    value - value.div_euclid(1i64 << dash)
}

/// Step the whole network over a raster given as per-bin channel counts.
pub fn run(net: &OracleNet, bins: &[Vec<i64>]) -> OracleOutcome {
    let mut i_syn: Vec<Vec<i64>> = net.layers.iter().map(|l| vec![0; l.weights.len()]).collect();
    let mut v_mem = i_syn.clone();

    let mut per_bin_readout = Vec::with_capacity(bins.len());
    let mut syn_ops = 0u64;
    let mut neuron_updates = 0u64;
    let mut spikes_emitted = 0u64;

    for bin in bins {
        let mut current: Vec<i64> = bin.clone();
        for (li, layer) in net.layers.iter().enumerate() {
            let outs = layer.weights.len();
            let active = current.iter().filter(|&&c| c != 0).count() as u64;
            syn_ops += active * outs as u64;
            neuron_updates += outs as u64;

            let mut out_spikes = vec![0i64; outs];
            for j in 0..outs {
                let mut weighted = 0i64;
                for (i, &c) in current.iter().enumerate() {
                    weighted += layer.weights[j][i] * c;
                }
                let weighted = clamp32(weighted);

                i_syn[li][j] = decay_floor(i_syn[li][j], layer.syn_dash[j]);
                i_syn[li][j] = clamp16(i_syn[li][j] + weighted);
                v_mem[li][j] = decay_floor(v_mem[li][j], layer.mem_dash[j]);
                v_mem[li][j] = clamp16(v_mem[li][j] + i_syn[li][j]);

                if v_mem[li][j] >= layer.threshold[j] {
                    let k = (v_mem[li][j] / layer.threshold[j]).min(layer.max_spikes_per_step);
                    v_mem[li][j] -= k * layer.threshold[j];
                    out_spikes[j] = k;
                    spikes_emitted += k as u64;
                }
            }
            current = out_spikes;
        }
        per_bin_readout.push(current);
    }

    let num_classes = net.layers.last().map_or(0, |l| l.weights.len());
    let mut class_counts = vec![0i64; num_classes];
    for bin in &per_bin_readout {
        for (c, &s) in class_counts.iter_mut().zip(bin) {
            *c += s;
        }
    }
    let mut decision = 0;
    for (i, &c) in class_counts.iter().enumerate() {
        if c > class_counts[decision] {
            decision = i;
        }
    }

    OracleOutcome {
        per_bin_readout,
        class_counts,
        decision,
        syn_ops,
        neuron_updates,
        spikes_emitted,
        final_i_syn: i_syn,
        final_v_mem: v_mem,
    }
}
