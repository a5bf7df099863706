use thiserror::Error;

use crate::lattice::Representation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("points-per-axis must be a power of two >= 32, got {0}")]
    BadPointCount(usize),

    #[error("box length must be positive, got {0}")]
    BadBoxLength(f64),

    #[error("mass must be positive, got {0}")]
    BadMass(f64),

    #[error("field is in {found:?} representation, expected {expected:?}")]
    RepresentationMismatch {
        expected: Representation,
        found: Representation,
    },

    #[error("fields live on different lattices")]
    LatticeMismatch,

    #[error("unsupported omega power {0}; allowed: -1, 1/2, 1, 2")]
    BadOmegaPower(f64),

    #[error("ball radius {radius} exceeds half the box ({limit}); wrap-around would contaminate the result")]
    RadiusBeyondBox { radius: f64, limit: f64 },

    #[error("position/time-derivative pair has negative-frequency content (relative residual {residual:.3e} > {threshold:.3e})")]
    NegativeFrequencyPair { residual: f64, threshold: f64 },

    #[error("cannot normalize a zero state")]
    ZeroState,

    #[error("state is not normalized (norm deviation {0:.3e}); probability interpretation requires normalization")]
    NotNormalized(f64),

    #[error("spinor is not flagged positive-energy; project it first (phase evolution is only exact on h+)")]
    NotPositiveEnergy,

    #[error("fit window [{lo}, {hi}] does not fit on the profile grid (max usable radius {max})")]
    WindowOutsideGrid { lo: f64, hi: f64, max: f64 },

    #[error("only {found} usable bins in the fit window, need at least {needed}")]
    TooFewBins { found: usize, needed: usize },

    #[error("bin value {value:.3e} at r = {radius} is below the hard floor {floor:.0e}")]
    BelowFloor { value: f64, radius: f64, floor: f64 },

    #[error("density has no front at threshold {epsilon:.3e}: {reason}")]
    NoFront { epsilon: f64, reason: String },

    #[error("front radius {radius} reached the box edge ({limit}); run invalidated")]
    FrontHitsBoxEdge { radius: f64, limit: f64 },

    #[error("threshold {0:.3e} is outside the usable range (1e-12, 1e-2)")]
    BadThreshold(f64),

    #[error("input amplitude is not compactly supported inside the probe region")]
    NonCompactInput,
}

pub type Result<T> = std::result::Result<T, Error>;
