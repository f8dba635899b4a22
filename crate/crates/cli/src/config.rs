//! TOML configuration file shared by all subcommands.
//!
//! Every section is optional and falls back to the built-in defaults:
//!
//! ```toml
//! [afe]
//! sample_rate_hz = 48000.0
//! num_bands = 16
//! f_low_hz = 40.0
//! f_high_hz = 16940.0
//! q_factor = 4.0
//! gain_db = 0            # 0, 6 or 12
//! bin_dt_s = 0.010
//!
//! [afe.encoder]
//! tau_mem_s = 0.002
//! threshold = 62.5
//! max_events_per_bin = 15
//!
//! [synnet]
//! hidden_widths = [31, 31, 31]
//! tau_counts = [3, 7, 7]
//! num_inputs = 16
//! num_classes = 4
//! dt_s = 0.010
//! tau_mem_s = 0.020
//!
//! [energy]
//! idle_power_w = 351e-6
//! energy_per_synop_j = 3.3688e-10
//! energy_per_neuron_update_j = 0.0
//! clock_hz = 12.5e6
//!
//! per_step_cost_cycles = 10500
//! ```

use std::path::Path;

use anyhow::Context;
use serde::Deserialize;
use spikeline_core::energy::DEFAULT_PER_STEP_COST_CYCLES;
use spikeline_core::{AfeConfig, EnergyModelParams, SynNetSpec};

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub afe: AfeConfig,
    pub synnet: SynNetSpec,
    pub energy: EnergyModelParams,
    pub per_step_cost_cycles: u64,
}

impl Default for FileConfig {
    fn default() -> Self {
        Self {
            afe: AfeConfig::default(),
            synnet: SynNetSpec::default(),
            energy: EnergyModelParams::default(),
            per_step_cost_cycles: DEFAULT_PER_STEP_COST_CYCLES,
        }
    }
}

impl FileConfig {
    /// Load from a TOML file, or defaults when no path is given.
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let config: FileConfig = toml::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        config.afe.validate()?;
        config.synnet.validate()?;
        config.energy.validate()?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_core() {
        let config = FileConfig::load(None).unwrap();
        assert_eq!(config.afe, AfeConfig::default());
        assert_eq!(config.per_step_cost_cycles, DEFAULT_PER_STEP_COST_CYCLES);
    }

    #[test]
    fn partial_file_fills_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.toml");
        std::fs::write(&path, "[afe]\ngain_db = 12\n\n[synnet]\nnum_classes = 2\n").unwrap();
        let config = FileConfig::load(Some(&path)).unwrap();
        assert_eq!(config.afe.gain_db, spikeline_core::GainDb::Db12);
        assert_eq!(config.afe.num_bands, 16);
        assert_eq!(config.synnet.num_classes, 2);
    }

    #[test]
    fn invalid_gain_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.toml");
        std::fs::write(&path, "[afe]\ngain_db = 3\n").unwrap();
        assert!(FileConfig::load(Some(&path)).is_err());
    }

    #[test]
    fn unknown_key_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.toml");
        std::fs::write(&path, "nonsense = 1\n").unwrap();
        assert!(FileConfig::load(Some(&path)).is_err());
    }
}
