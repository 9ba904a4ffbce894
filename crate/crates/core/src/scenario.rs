//! One concrete network instance: node positions, IRS panels and radio setup.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::propagation::{AtmosphereConfig, IrsPanel, RadioConfig, Vec3};

/// Immutable snapshot of a network to simulate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub sources: Vec<Vec3>,
    pub destinations: Vec<Vec3>,
    pub panels: Vec<IrsPanel>,
    pub radio: RadioConfig,
    pub atmosphere: AtmosphereConfig,
    /// Whether IRSs that end up unmatched still reflect (with zero phase
    /// shift) and therefore appear in the interference sum.
    pub idle_irs_reflect: bool,
}

impl Scenario {
    pub fn num_sources(&self) -> usize {
        self.sources.len()
    }

    pub fn num_panels(&self) -> usize {
        self.panels.len()
    }

    pub fn num_destinations(&self) -> usize {
        self.destinations.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.sources.is_empty() || self.destinations.is_empty() || self.panels.is_empty() {
            return Err(Error::invalid_input(
                "scenario needs at least one source, destination and panel",
            ));
        }
        if self.sources.len() > self.panels.len() {
            return Err(Error::Infeasible(format!(
                "{} sources exceed {} IRSs",
                self.sources.len(),
                self.panels.len()
            )));
        }
        for p in self.sources.iter().chain(self.destinations.iter()) {
            if !p.is_finite() {
                return Err(Error::invalid_input("node positions must be finite"));
            }
        }
        self.radio.validate()?;
        self.atmosphere.validate()?;
        Ok(())
    }
}
