//! Run configurations read from JSON files.
//!
//! Precedence, lowest first: built-in defaults, the `--config` file (which
//! replaces the defaults wholesale), then command-line flags.

use std::path::Path;

use boostwave::fixtures::{self, ModelSpec};
use boostwave::frame_transform::NormalizationMode;
use boostwave::tomography::{AMode, SliceSpec, TomographyConfig};
use boostwave::verify::SuiteConfig;
use boostwave::Boost;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Evenly spaced values from `min` to `max` inclusive; `n = 1` yields `min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lattice {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Lattice {
    pub fn validate(&self, what: &str) -> Result<(), CliError> {
        if self.n == 0 || !self.min.is_finite() || !self.max.is_finite() || self.max < self.min {
            return Err(CliError::Config(format!("{what}: need finite min <= max and n >= 1")));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.n - 1) as f64;
        (0..self.n).map(|i| self.min + step * i as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketConfig {
    pub model: ModelSpec,
    pub t: Lattice,
    pub x: Lattice,
}

impl Default for PacketConfig {
    fn default() -> Self {
        PacketConfig {
            model: fixtures::standard_massless(),
            t: Lattice { min: 0.0, max: 1.0, n: 2 },
            x: Lattice { min: -10.0, max: 10.0, n: 401 },
        }
    }
}

/// The lattices are in primed coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoostConfig {
    pub model: ModelSpec,
    pub v: f64,
    #[serde(default = "default_mode")]
    pub mode: NormalizationMode,
    pub t: Lattice,
    pub x: Lattice,
}

fn default_mode() -> NormalizationMode {
    NormalizationMode::MomentumScalar
}

impl Default for BoostConfig {
    fn default() -> Self {
        BoostConfig {
            model: fixtures::standard_massless(),
            v: 0.5,
            mode: default_mode(),
            t: Lattice { min: 0.0, max: 1.0, n: 2 },
            x: Lattice { min: -20.0, max: 20.0, n: 401 },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TomoConfig {
    pub model: ModelSpec,
    pub tomography: TomographyConfig,
    pub slices: Vec<SliceSpec>,
    #[serde(default = "default_a_mode")]
    pub a_mode: AMode,
}

fn default_a_mode() -> AMode {
    AMode::Estimated
}

impl Default for TomoConfig {
    fn default() -> Self {
        TomoConfig {
            model: fixtures::standard_eigen_gaussian(),
            tomography: fixtures::standard_tomography(1),
            slices: vec![SliceSpec { q: 2, s: -1 }, SliceSpec { q: 2, s: 0 }, SliceSpec { q: 2, s: 1 }],
            a_mode: default_a_mode(),
        }
    }
}

pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, CliError> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn invalid(e: boostwave::Error) -> CliError {
    CliError::Config(e.to_string())
}

impl PacketConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        self.model.build().map_err(invalid)?;
        self.t.validate("t")?;
        self.x.validate("x")
    }
}

impl BoostConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        self.model.build().map_err(invalid)?;
        Boost::new(self.v).map_err(invalid)?;
        if self.model.is_eigen() && self.mode == NormalizationMode::PathNormalized {
            return Err(CliError::Config(
                "path_normalized is undefined for eigen-energy models".into(),
            ));
        }
        self.t.validate("t")?;
        self.x.validate("x")
    }
}

impl TomoConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        self.model.build().map_err(invalid)?;
        self.tomography.validate().map_err(invalid)?;
        if self.slices.is_empty() {
            return Err(CliError::Config("slices must not be empty".into()));
        }
        for s in &self.slices {
            SliceSpec::new(s.q, s.s).map_err(invalid)?;
            s.boost(&self.tomography).map_err(invalid)?;
        }
        if let AMode::Supplied(a) = self.a_mode {
            if !(a > 0.0 && a.is_finite()) {
                return Err(CliError::Config(format!("supplied A must be positive, got {a}")));
            }
        }
        Ok(())
    }
}

pub fn validate_suite(cfg: &SuiteConfig) -> Result<(), CliError> {
    for &v in &cfg.velocities {
        Boost::new(v).map_err(invalid)?;
    }
    let f = &cfg.fixtures;
    for spec in [&f.massless, &f.eigen_two_mode, &f.eigen_gaussian, &f.off_shell] {
        spec.build().map_err(invalid)?;
    }
    if !matches!(f.massless, ModelSpec::Massless { .. }) || !f.eigen_two_mode.is_eigen() || !f.eigen_gaussian.is_eigen()
        || !matches!(f.off_shell, ModelSpec::OffShell { .. })
    {
        return Err(CliError::Config("fixture families do not match their slots".into()));
    }
    if let Some(t) = &cfg.tomography {
        let tc = TomographyConfig {
            samples: t.samples,
            rows: t.rows,
            dt_d: t.dt_d,
            dx: t.dx,
            length: t.length,
            seed: cfg.seed,
        };
        tc.validate().map_err(invalid)?;
        for s in &t.slices {
            s.boost(&tc).map_err(invalid)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_values() {
        assert_eq!(Lattice { min: 2.0, max: 9.0, n: 1 }.values(), vec![2.0]);
        assert_eq!(Lattice { min: 0.0, max: 1.0, n: 3 }.values(), vec![0.0, 0.5, 1.0]);
        assert!(Lattice { min: 1.0, max: 0.0, n: 3 }.validate("t").is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut v = serde_json::to_value(PacketConfig::default()).unwrap();
        v["extra"] = 1.into();
        assert!(serde_json::from_value::<PacketConfig>(v).is_err());
    }

    #[test]
    fn defaults_validate() {
        PacketConfig::default().validate().unwrap();
        BoostConfig::default().validate().unwrap();
        TomoConfig::default().validate().unwrap();
        validate_suite(&SuiteConfig::default()).unwrap();
    }

    #[test]
    fn eigen_path_mode_is_a_config_error() {
        let cfg = BoostConfig {
            model: fixtures::standard_two_mode(),
            mode: NormalizationMode::PathNormalized,
            ..Default::default()
        };
        assert!(matches!(cfg.validate(), Err(CliError::Config(_))));
    }
}
