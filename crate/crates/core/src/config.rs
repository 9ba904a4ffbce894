//! Declarative experiment configuration.
//!
//! One TOML file holds a `[scenario]` table and an optional `[sweep]` table;
//! keys mirror the spec struct fields in lower_snake_case and every key is
//! optional (defaults apply). Unknown keys are rejected so typos surface as
//! config errors instead of silently running the defaults.
//!
//! ```toml
//! [scenario]
//! k = 3
//! n = 4
//! l = 3
//! elements_per_irs = 256
//! seed = 1
//!
//! [scenario.radio]
//! tx_power_dbm = 25.0
//!
//! [sweep]
//! variable = "tx_power"
//! values = [5.0, 10.0, 15.0, 20.0, 25.0]
//! trials = 100
//! algorithms = ["proposed", "es", "pes", "gs", "ra", "pra"]
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::{ScenarioSpec, SweepSpec};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: ScenarioSpec,
    pub sweep: SweepSpec,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        self.sweep.validate()?;
        Ok(())
    }
}

/// Parse a config from TOML text.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))
}

/// Load and parse a config file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::Algorithm;
    use crate::experiments::SweepVariable;

    #[test]
    fn empty_config_is_all_defaults() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        cfg.validate().unwrap();
    }

    #[test]
    fn partial_config_overrides_defaults() {
        let cfg = parse_config(
            r#"
            [scenario]
            k = 2
            n = 3
            l = 2
            elements_per_irs = 16
            seed = 99

            [scenario.radio]
            tx_power_dbm = 20.0

            [sweep]
            variable = "elements_per_irs"
            values = [16, 64]
            trials = 5
            algorithms = ["proposed", "ra"]
            "#,
        )
        .unwrap();
        assert_eq!(cfg.scenario.k, 2);
        assert_eq!(cfg.scenario.radio.tx_power_dbm, 20.0);
        assert_eq!(cfg.scenario.radio.bandwidth_hz, 10e9); // default kept
        assert_eq!(cfg.sweep.variable, SweepVariable::ElementsPerIrs);
        assert_eq!(
            cfg.sweep.algorithms,
            vec![Algorithm::Proposed, Algorithm::Ra]
        );
        cfg.validate().unwrap();
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(parse_config("[scenario]\nk = 2\nbogus = 1\n").is_err());
        assert!(parse_config("[scenario.radio]\ntx_power = 25.0\n").is_err());
    }

    #[test]
    fn invalid_shapes_fail_validation() {
        let cfg = parse_config("[scenario]\nk = 4\nl = 4\nn = 2\n").unwrap();
        assert!(matches!(cfg.validate(), Err(Error::Infeasible(_))));
    }
}
