//! Shared fixtures for the criterion benchmarks: the default-scale network
//! and deterministic synthetic rasters.

use spikeline_core::{build_synnet, quantize_network, EventRaster, QuantNetwork, SynNetSpec};

/// The default 16-31-31-31-4 network, quantized, built from a fixed seed.
pub fn default_scale_net(seed: u64) -> QuantNetwork {
    let float = build_synnet(&SynNetSpec::default(), seed).expect("default spec is valid");
    quantize_network(&float).expect("random weights are finite").0
}

/// A deterministic sparse raster with counts in 0..=3.
pub fn synthetic_raster(seed: u64, num_bins: usize, num_channels: usize) -> EventRaster {
    let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
    let mut counts = Vec::with_capacity(num_bins * num_channels);
    for _ in 0..num_bins * num_channels {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        // ~1/4 of cells active, counts 1..=3.
        let cell = (state >> 33) % 16;
        counts.push(if cell < 4 { (cell % 3 + 1) as u32 } else { 0 });
    }
    EventRaster::from_counts(num_channels, num_bins, counts, 0.010).expect("sized correctly")
}
