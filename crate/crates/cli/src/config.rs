//! JSON experiment configuration.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use wavetail::LatticeMode;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentName {
    FourierPair,
    DiracDelocalization,
    KgEnergyConservation,
    KgChargeNegativity,
    H1Check,
    Causality,
    NwContrast,
}

impl ExperimentName {
    pub const ALL: [ExperimentName; 7] = [
        ExperimentName::FourierPair,
        ExperimentName::DiracDelocalization,
        ExperimentName::KgEnergyConservation,
        ExperimentName::KgChargeNegativity,
        ExperimentName::H1Check,
        ExperimentName::Causality,
        ExperimentName::NwContrast,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentName::FourierPair => "fourier-pair",
            ExperimentName::DiracDelocalization => "dirac-delocalization",
            ExperimentName::KgEnergyConservation => "kg-energy-conservation",
            ExperimentName::KgChargeNegativity => "kg-charge-negativity",
            ExperimentName::H1Check => "h1-check",
            ExperimentName::Causality => "causality",
            ExperimentName::NwContrast => "nw-contrast",
        }
    }
}

impl fmt::Display for ExperimentName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ExperimentName::ALL
            .iter()
            .copied()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| format!("unknown experiment {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub mode: LatticeModeSpec,
    pub points: usize,
    pub box_length: f64,
}

// serde wrapper so the core enum stays serialization-free
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeModeSpec {
    Line1d,
    Radial3d,
    Cartesian3d,
}

impl From<LatticeModeSpec> for LatticeMode {
    fn from(m: LatticeModeSpec) -> LatticeMode {
        match m {
            LatticeModeSpec::Line1d => LatticeMode::Line1d,
            LatticeModeSpec::Radial3d => LatticeMode::Radial3d,
            LatticeModeSpec::Cartesian3d => LatticeMode::Cartesian3d,
        }
    }
}

/// Seed profile: a compactly supported bump of the given radius, or the
/// exponential e^(-gamma r) used by the Fourier-pair identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SeedSpec {
    Bump { radius: f64 },
    Exponential { gamma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlopeChoice {
    Plain,
    R2Corrected,
}

impl From<SlopeChoice> for wavetail::analysis::SlopeKind {
    fn from(s: SlopeChoice) -> Self {
        match s {
            SlopeChoice::Plain => wavetail::analysis::SlopeKind::Plain,
            SlopeChoice::R2Corrected => wavetail::analysis::SlopeKind::R2Corrected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub experiment: ExperimentName,
    pub lattice: LatticeSpec,
    pub mass: f64,
    pub seed: SeedSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<SlopeChoice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Desk-scale defaults for a named experiment, in units m = 1.
    pub fn default_for(experiment: ExperimentName) -> ExperimentConfig {
        let radial = |points, box_length| LatticeSpec {
            mode: LatticeModeSpec::Radial3d,
            points,
            box_length,
        };
        let bump = |radius| SeedSpec::Bump { radius };
        let base = ExperimentConfig {
            schema_version: SCHEMA_VERSION,
            experiment,
            lattice: radial(4096, 32.0),
            mass: 1.0,
            seed: bump(1.0),
            window: None,
            epsilon: None,
            times: None,
            slope: None,
            output_dir: None,
        };
        match experiment {
            ExperimentName::FourierPair => ExperimentConfig {
                lattice: radial(4096, 40.0),
                seed: SeedSpec::Exponential { gamma: 1.0 },
                ..base
            },
            ExperimentName::DiracDelocalization => ExperimentConfig {
                window: Some((6.0, 12.0)),
                slope: Some(SlopeChoice::R2Corrected),
                ..base
            },
            ExperimentName::KgEnergyConservation => ExperimentConfig {
                times: Some(vec![0.0, 1.0, 5.0, 10.0]),
                ..base
            },
            // two-packet momentum fixture; the seed field is unused there
            ExperimentName::KgChargeNegativity => base,
            ExperimentName::H1Check => ExperimentConfig {
                window: Some((6.0, 12.0)),
                ..base
            },
            ExperimentName::Causality => ExperimentConfig {
                epsilon: Some(1e-6),
                times: Some((0..=10).map(|i| 0.5 * i as f64).collect()),
                ..base
            },
            ExperimentName::NwContrast => ExperimentConfig {
                seed: bump(2.0),
                times: Some(vec![0.0, 0.1]),
                ..base
            },
        }
    }

    /// Structural validation; resolution adequacy goes through `validate`.
    pub fn check(&self) -> Result<(), String> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(format!(
                "schema_version {} unsupported (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(format!("mass must be positive, got {}", self.mass));
        }
        if !(self.lattice.box_length > 0.0) {
            return Err("box_length must be positive".into());
        }
        match self.seed {
            SeedSpec::Bump { radius } if !(radius > 0.0) => {
                return Err("bump radius must be positive".into());
            }
            SeedSpec::Exponential { gamma } if !(gamma > 0.0) => {
                return Err("gamma must be positive".into());
            }
            _ => {}
        }
        if let Some((lo, hi)) = self.window {
            if !(lo > 0.0 && hi > lo) {
                return Err(format!("window ({lo}, {hi}) must satisfy 0 < lo < hi"));
            }
        }
        if let Some(eps) = self.epsilon {
            if !(eps > 0.0) {
                return Err("epsilon must be positive".into());
            }
        }
        if let Some(times) = &self.times {
            if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
                return Err("times must be finite and non-negative".into());
            }
        }
        Ok(())
    }

    /// Oracle runs multiply the point count; lattice spacing shrinks, box
    /// stays put.
    pub fn scaled(&self, factor: usize) -> ExperimentConfig {
        let mut c = self.clone();
        c.lattice.points *= factor.max(1);
        c
    }
}
