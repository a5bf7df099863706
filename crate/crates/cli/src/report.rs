//! Run artifacts: the JSON report and the CSV profile tables.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use wavetail::DensityProfile;

use crate::config::ExperimentConfig;

/// One tolerance-checked result. `tolerance` spells out what `value` was
/// compared against so the report is self-contained.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: String,
    pub pass: bool,
}

impl Check {
    pub fn below(name: impl Into<String>, value: f64, limit: f64) -> Check {
        Check {
            name: name.into(),
            value,
            tolerance: format!("< {limit:e}"),
            pass: value < limit,
        }
    }

    pub fn above(name: impl Into<String>, value: f64, floor: f64) -> Check {
        Check {
            name: name.into(),
            value,
            tolerance: format!("> {floor:e}"),
            pass: value > floor,
        }
    }

    pub fn in_band(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Check {
        Check {
            name: name.into(),
            value,
            tolerance: format!("in [{lo}, {hi}]"),
            pass: value >= lo && value <= hi,
        }
    }

    pub fn boolean(name: impl Into<String>, value: bool, expected: bool) -> Check {
        Check {
            name: name.into(),
            value: if value { 1.0 } else { 0.0 },
            tolerance: format!("== {expected}"),
            pass: value == expected,
        }
    }

    pub fn exactly_zero(name: impl Into<String>, value: f64) -> Check {
        Check {
            name: name.into(),
            value,
            tolerance: "== 0 (exact)".into(),
            pass: value == 0.0,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ReportRecord {
    pub config: ExperimentConfig,
    pub version: &'static str,
    pub runtime_seconds: f64,
    /// Scalar results keyed by name; BTreeMap keeps the JSON key order
    /// stable.
    pub scalars: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl ReportRecord {
    pub fn new(
        config: ExperimentConfig,
        runtime_seconds: f64,
        scalars: BTreeMap<String, f64>,
        checks: Vec<Check>,
    ) -> ReportRecord {
        let passed = checks.iter().all(|c| c.pass);
        ReportRecord {
            config,
            version: env!("CARGO_PKG_VERSION"),
            runtime_seconds,
            scalars,
            checks,
            passed,
        }
    }
}

/// Profiles as `(t, r, value, bin_count)` rows. Floats print with Rust's
/// shortest round-trip formatting, so bytes are stable across runs.
pub fn write_profiles_csv<W: Write>(mut w: W, profiles: &[DensityProfile]) -> io::Result<()> {
    writeln!(w, "t,r,value,bin_count")?;
    for p in profiles {
        let t = p.time();
        for ((r, v), c) in p.radii().iter().zip(p.values()).zip(p.counts()) {
            writeln!(w, "{t},{r},{v},{c}")?;
        }
    }
    Ok(())
}

pub fn write_artifacts(
    dir: &Path,
    report: &ReportRecord,
    profiles: &[DensityProfile],
) -> io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let csv = std::fs::File::create(dir.join("profiles.csv"))?;
    write_profiles_csv(io::BufWriter::new(csv), profiles)?;
    let json = serde_json::to_string_pretty(report).map_err(io::Error::other)?;
    std::fs::write(dir.join("report.json"), json + "\n")
}
