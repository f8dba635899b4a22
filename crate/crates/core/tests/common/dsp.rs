//! Closed-form frequency-response measurement of designed sections on a
//! dense grid, with bisection refinement of the peak and the -3 dB edges.

use spikeline_core::afe::SosCoeffs;

/// |H(e^{j 2 pi f / fs})| straight from the coefficients.
pub fn magnitude(c: &SosCoeffs, freq_hz: f64, fs: f64) -> f64 {
    let w = 2.0 * std::f64::consts::PI * freq_hz / fs;
    let (c1, s1) = (w.cos(), w.sin());
    let (c2, s2) = ((2.0 * w).cos(), (2.0 * w).sin());
    let num_re = c.b0 + c.b1 * c1 + c.b2 * c2;
    let num_im = -c.b1 * s1 - c.b2 * s2;
    let den_re = 1.0 + c.a1 * c1 + c.a2 * c2;
    let den_im = -c.a1 * s1 - c.a2 * s2;
    ((num_re * num_re + num_im * num_im) / (den_re * den_re + den_im * den_im)).sqrt()
}

pub struct BandMeasurement {
    pub peak_hz: f64,
    pub peak_mag: f64,
    pub lower_edge_hz: f64,
    pub upper_edge_hz: f64,
}

impl BandMeasurement {
    pub fn bandwidth_hz(&self) -> f64 {
        self.upper_edge_hz - self.lower_edge_hz
    }
}

/// Measure peak location and the -3 dB edges relative to the measured peak
/// on a dense log grid spanning [f_c/8, min(8 f_c, 0.999 Nyquist)].
pub fn measure_band(c: &SosCoeffs, f_c: f64, fs: f64) -> BandMeasurement {
    let lo = (f_c / 8.0).max(0.1);
    let hi = (f_c * 8.0).min(0.499 * fs);
    let n = 4096;
    let ratio = (hi / lo).powf(1.0 / (n - 1) as f64);

    let mut best_idx = 0;
    let mut best_mag = 0.0;
    let grid: Vec<f64> = (0..n).map(|i| lo * ratio.powi(i as i32)).collect();
    for (i, &f) in grid.iter().enumerate() {
        let m = magnitude(c, f, fs);
        if m > best_mag {
            best_mag = m;
            best_idx = i;
        }
    }

    // Ternary-search refinement around the grid peak.
    let mut a = grid[best_idx.saturating_sub(1)];
    let mut b = grid[(best_idx + 1).min(n - 1)];
    for _ in 0..80 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if magnitude(c, m1, fs) < magnitude(c, m2, fs) {
            a = m1;
        } else {
            b = m2;
        }
    }
    let peak_hz = 0.5 * (a + b);
    let peak_mag = magnitude(c, peak_hz, fs);
    let target = peak_mag / 2.0f64.sqrt();

    // Walk outward from the peak to bracket each crossing, then bisect.
    let cross = |mut inside: f64, mut outside: f64| -> f64 {
        for _ in 0..80 {
            let mid = 0.5 * (inside + outside);
            if magnitude(c, mid, fs) >= target {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        0.5 * (inside + outside)
    };
    let mut below = peak_hz;
    while below > lo && magnitude(c, below, fs) >= target {
        below /= 1.01;
    }
    let mut above = peak_hz;
    while above < hi && magnitude(c, above, fs) >= target {
        above *= 1.01;
    }
    BandMeasurement {
        peak_hz,
        peak_mag,
        lower_edge_hz: cross(peak_hz, below),
        upper_edge_hz: cross(peak_hz, above),
    }
}
