//! Experiment runner: JSON config in, CSV/JSON artifacts out.

pub mod config;
pub mod experiments;
pub mod report;

use std::fmt;
use std::path::Path;
use std::time::Instant;

pub use config::{ExperimentConfig, ExperimentName, SeedSpec, SlopeChoice};
pub use report::{Check, ReportRecord};

#[derive(Debug)]
pub enum RunError {
    /// Bad config or environment; exit code 2.
    Config(String),
    /// The observable sank below the numerical floor; exit code 3.
    Floor(String),
    /// The observable touched the box edge; exit code 4.
    BoxEdge(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Floor(_) => 3,
            RunError::BoxEdge(_) => 4,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config(m) => write!(f, "invalid config: {m}"),
            RunError::Floor(m) => write!(f, "numerical floor: {m}"),
            RunError::BoxEdge(m) => write!(f, "box-edge contamination: {m}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<wavetail::Error> for RunError {
    fn from(e: wavetail::Error) -> RunError {
        use wavetail::Error::*;
        let msg = e.to_string();
        match e {
            WindowOutsideGrid { .. } | RadiusBeyondBox { .. } | FrontHitsBoxEdge { .. } => {
                RunError::BoxEdge(msg)
            }
            BelowFloor { .. }
            | NoFront { .. }
            | ZeroState
            | TooFewBins { .. }
            | NegativeFrequencyPair { .. }
            | NotNormalized(_)
            | NotPositiveEnergy
            | NonCompactInput => RunError::Floor(msg),
            _ => RunError::Config(msg),
        }
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> RunError {
        RunError::Config(format!("io: {e}"))
    }
}

/// Run one experiment and write `report.json` + `profiles.csv` under
/// `out_dir/<experiment>/`.
pub fn run(cfg: &ExperimentConfig, out_dir: &Path) -> Result<ReportRecord, RunError> {
    cfg.check().map_err(RunError::Config)?;
    let start = Instant::now();
    let (scalars, checks, profiles) = experiments::dispatch(cfg)?;
    let report = ReportRecord::new(
        cfg.clone(),
        start.elapsed().as_secs_f64(),
        scalars,
        checks,
    );
    let dir = out_dir.join(cfg.experiment.as_str());
    report::write_artifacts(&dir, &report, &profiles)?;
    Ok(report)
}

/// Dry run: resolution-adequacy warnings without computing anything.
pub fn validate(cfg: &ExperimentConfig) -> Result<Vec<String>, RunError> {
    cfg.check().map_err(RunError::Config)?;
    let m = cfg.mass;
    let compton = 1.0 / m;
    let l = cfg.lattice.box_length;
    let mut warnings = Vec::new();

    // momentum spacing near the branch point at k = 0
    let dk = match cfg.lattice.mode {
        config::LatticeModeSpec::Radial3d => std::f64::consts::PI / l,
        _ => 2.0 * std::f64::consts::PI / l,
    };
    if dk > m / 8.0 {
        warnings.push(format!(
            "dk = {dk:.3e} > m/8 = {:.3e}: branch-point region under-resolved",
            m / 8.0
        ));
    }
    if l < 32.0 * compton {
        warnings.push(format!(
            "box L = {l} < 32 Compton lengths ({}): tails reach the edge",
            32.0 * compton
        ));
    }
    let dx = l / cfg.lattice.points as f64;
    let window = cfg.window.unwrap_or((6.0 * compton, 12.0 * compton));
    let usable = l / 2.0 - 2.0 * dx;
    if window.1 > usable {
        warnings.push(format!(
            "window [{}, {}] infeasible: usable radius is {usable:.3}",
            window.0, window.1
        ));
    }
    if let Some(eps) = cfg.epsilon {
        if !(1e-12..1e-2).contains(&eps) {
            warnings.push(format!(
                "epsilon = {eps:e} outside the trustworthy range (1e-12, 1e-2)"
            ));
        }
    }
    Ok(warnings)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_exit_codes_follow_the_contract() {
        let cases = [
            (wavetail::Error::BadMass(-1.0), 2),
            (
                wavetail::Error::BelowFloor {
                    value: 0.0,
                    radius: 1.0,
                    floor: 1e-250,
                },
                3,
            ),
            (
                wavetail::Error::FrontHitsBoxEdge {
                    radius: 15.0,
                    limit: 16.0,
                },
                4,
            ),
        ];
        for (err, code) in cases {
            assert_eq!(RunError::from(err).exit_code(), code);
        }
    }

    #[test]
    fn validate_flags_inadequate_resolution() {
        let mut cfg = ExperimentConfig::default_for(ExperimentName::H1Check);
        assert!(validate(&cfg).unwrap().is_empty());

        cfg.lattice.box_length = 4.0;
        let warnings = validate(&cfg).unwrap();
        assert!(warnings.iter().any(|w| w.contains("under-resolved")));
        assert!(warnings.iter().any(|w| w.contains("infeasible")));
    }
}
