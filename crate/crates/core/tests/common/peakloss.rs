//! Scalar re-implementation of the peak-window loss, structured around
//! per-channel vectors rather than a matrix, for cross-checking.

/// `traces[c]` is channel c over time; all channels must share a length.
pub fn reference_peak_loss(
    traces: &[Vec<f64>],
    target: usize,
    dt_s: f64,
    window_s: f64,
    g: f64,
    w_l: f64,
) -> f64 {
    let x = &traces[target];
    let t_len = x.len();

    let mut m = 0usize;
    let mut peak = f64::NEG_INFINITY;
    for (t, &v) in x.iter().enumerate() {
        if v > peak {
            peak = v;
            m = t;
        }
    }

    let window = ((window_s / dt_s).round() as usize).max(1);
    let end = (m + window).min(t_len);
    let mut mean = 0.0;
    for &v in &x[m..end] {
        mean += v;
    }
    mean /= (end - m) as f64;
    let mut loss = (mean - g) * (mean - g);

    for (c, channel) in traces.iter().enumerate() {
        if c == target {
            continue;
        }
        let mut mean_sq = 0.0;
        for &v in channel {
            mean_sq += v * v;
        }
        loss += w_l * mean_sq / t_len as f64;
    }
    loss
}
