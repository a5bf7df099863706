//! Localization diagnostics.
//!
//! The central measurement is a log-linear regression of the shell density
//! over a tail window: `ln rho_shell(r) = 2 ln A - 2 gamma_eff r`. The H1
//! localization premise asks for exterior probability bounded by
//! `A^2 exp(-2 gamma R)` with `gamma > m`; for positive-energy states the
//! fitted rate sits at the Compton rate m and the predicate fails.

use crate::error::{Error, Result};
use crate::field::ComplexField;
use crate::lattice::{PhysicalParams, Representation};
use crate::profile::DensityProfile;
use crate::spectral::{to_momentum, to_position};
use num_complex::Complex64;
use std::sync::Arc;

/// Hard floor: bins below this abort the fit.
pub const HARD_FLOOR: f64 = 1e-250;
/// Soft floor: bins below this are excluded (FFT round-off noise, ~1e-16 in
/// amplitude, ~1e-32 in density).
pub const SOFT_FLOOR: f64 = 1e-30;

const MIN_BINS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlopeKind {
    /// Fit ln(rho_shell) directly.
    Plain,
    /// Fit ln(rho_shell / r^2), removing the geometric shell factor.
    R2Corrected,
}

#[derive(Debug, Clone)]
pub struct TailFit {
    /// Decay rate of the underlying amplitude: -slope/2 of the log fit
    /// (shell densities are quadratic in the field).
    pub gamma_eff: f64,
    /// Amplitude prefactor from the intercept.
    pub amplitude: f64,
    pub window: (f64, f64),
    pub slope_kind: SlopeKind,
    /// RMS residual of the log-linear fit.
    pub residual_rms: f64,
    /// Rate from the plain fit (kept alongside whichever kind was selected).
    pub gamma_plain: f64,
    /// Rate from the r^2-corrected fit.
    pub gamma_r2: f64,
    /// Set when the two half-window slopes differ by more than 20%:
    /// the profile is not a single exponential over the window.
    pub non_exponential: bool,
    /// Bins excluded for sitting below the soft floor.
    pub excluded_bins: usize,
    /// Relative rate change under a box-doubled rerun, when available.
    pub box_doubling_deviation: Option<f64>,
}

impl TailFit {
    /// Fill in the box-doubling diagnostic from a fit on a 2L run.
    pub fn with_doubling_check(mut self, doubled: &TailFit) -> TailFit {
        let dev = (self.gamma_eff - doubled.gamma_eff).abs()
            / self.gamma_eff.abs().max(f64::MIN_POSITIVE);
        self.box_doubling_deviation = Some(dev);
        self
    }
}

struct WindowData {
    r: Vec<f64>,
    lnv: Vec<f64>,
    w: Vec<f64>,
    excluded: usize,
}

fn collect_window(
    profile: &DensityProfile,
    window: (f64, f64),
    kind: SlopeKind,
) -> Result<WindowData> {
    let (lo, hi) = window;
    let max_usable = (profile.half_box() - 2.0 * profile.dr())
        .min(profile.radii().last().copied().unwrap_or(0.0));
    if !(lo < hi) || hi > max_usable {
        return Err(Error::WindowOutsideGrid {
            lo,
            hi,
            max: max_usable,
        });
    }
    let mut data = WindowData {
        r: Vec::new(),
        lnv: Vec::new(),
        w: Vec::new(),
        excluded: 0,
    };
    for ((&r, &v), &c) in profile
        .radii()
        .iter()
        .zip(profile.values())
        .zip(profile.counts())
    {
        if r < lo || r > hi || c == 0 {
            continue;
        }
        if v <= HARD_FLOOR {
            return Err(Error::BelowFloor {
                value: v,
                radius: r,
                floor: HARD_FLOOR,
            });
        }
        if v < SOFT_FLOOR {
            data.excluded += 1;
            continue;
        }
        let val = match kind {
            SlopeKind::Plain => v,
            SlopeKind::R2Corrected => v / (r * r),
        };
        data.r.push(r);
        data.lnv.push(val.ln());
        data.w.push(c as f64);
    }
    if data.r.len() < MIN_BINS {
        return Err(Error::TooFewBins {
            found: data.r.len(),
            needed: MIN_BINS,
        });
    }
    Ok(data)
}

/// Weighted least-squares line; returns (slope, intercept, rms residual).
fn weighted_line(r: &[f64], y: &[f64], w: &[f64]) -> (f64, f64, f64) {
    let sw: f64 = w.iter().sum();
    let mx: f64 = r.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / sw;
    let my: f64 = y.iter().zip(w).map(|(a, b)| a * b).sum::<f64>() / sw;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for i in 0..r.len() {
        sxx += w[i] * (r[i] - mx) * (r[i] - mx);
        sxy += w[i] * (r[i] - mx) * (y[i] - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut ss = 0.0;
    for i in 0..r.len() {
        let e = y[i] - (intercept + slope * r[i]);
        ss += w[i] * e * e;
    }
    (slope, intercept, (ss / sw).sqrt())
}

fn slope_only(profile: &DensityProfile, window: (f64, f64), kind: SlopeKind) -> Result<f64> {
    let d = collect_window(profile, window, kind)?;
    Ok(weighted_line(&d.r, &d.lnv, &d.w).0)
}

/// Exponential tail-rate regression over `window`.
pub fn fit_tail(profile: &DensityProfile, window: (f64, f64), kind: SlopeKind) -> Result<TailFit> {
    let d = collect_window(profile, window, kind)?;
    let (slope, intercept, rms) = weighted_line(&d.r, &d.lnv, &d.w);

    let gamma_for = |k: SlopeKind| -> f64 {
        match collect_window(profile, window, k) {
            Ok(dd) => -weighted_line(&dd.r, &dd.lnv, &dd.w).0 / 2.0,
            Err(_) => f64::NAN,
        }
    };
    let gamma_plain = gamma_for(SlopeKind::Plain);
    let gamma_r2 = gamma_for(SlopeKind::R2Corrected);

    // half-window slope comparison flags curvature (e.g. Gaussian tails)
    let mid = (window.0 + window.1) / 2.0;
    let non_exponential = match (
        slope_only(profile, (window.0, mid), kind),
        slope_only(profile, (mid, window.1), kind),
    ) {
        (Ok(s1), Ok(s2)) => {
            let mean = 0.5 * (s1.abs() + s2.abs());
            mean > 0.0 && (s1 - s2).abs() / mean > 0.2
        }
        _ => false,
    };

    let gamma_eff = -slope / 2.0;
    if !gamma_eff.is_finite() {
        return Err(Error::TooFewBins {
            found: d.r.len(),
            needed: MIN_BINS,
        });
    }
    Ok(TailFit {
        gamma_eff,
        amplitude: (intercept / 2.0).exp(),
        window,
        slope_kind: kind,
        residual_rms: rms,
        gamma_plain,
        gamma_r2,
        non_exponential,
        excluded_bins: d.excluded,
        box_doubling_deviation: None,
    })
}

/// Outcome of the H1 localization predicate.
#[derive(Debug, Clone)]
pub struct H1Evidence {
    pub localized: bool,
    /// max over tested radii of P_out(R) / (A_max^2 e^(-2 gamma R));
    /// <= 1 means the bound holds everywhere.
    pub worst_margin: f64,
    pub worst_radius: f64,
    pub gamma_required: f64,
    pub amplitude_max: f64,
}

/// Does the profile satisfy the exterior bound
/// `P_out(R) <= A_max^2 exp(-2 gamma_required R)` at every grid radius in
/// `window`? The profile is normalized by its own total.
pub fn h1_localized(
    profile: &DensityProfile,
    window: (f64, f64),
    gamma_required: f64,
    amplitude_max: f64,
) -> Result<H1Evidence> {
    let total = profile.total();
    if total <= 0.0 {
        return Err(Error::ZeroState);
    }
    let max_usable = profile.half_box() - 2.0 * profile.dr();
    if window.1 > max_usable {
        return Err(Error::WindowOutsideGrid {
            lo: window.0,
            hi: window.1,
            max: max_usable,
        });
    }
    let mut worst_margin = 0.0;
    let mut worst_radius = window.0;
    let mut tested = 0usize;
    for &r in profile.radii() {
        if r < window.0 || r > window.1 {
            continue;
        }
        tested += 1;
        let p_out = (profile.exterior(r)? / total).max(0.0);
        let bound = amplitude_max * amplitude_max * (-2.0 * gamma_required * r).exp();
        let margin = if bound > 0.0 { p_out / bound } else { f64::INFINITY };
        if margin > worst_margin {
            worst_margin = margin;
            worst_radius = r;
        }
    }
    if tested < MIN_BINS {
        return Err(Error::TooFewBins {
            found: tested,
            needed: MIN_BINS,
        });
    }
    Ok(H1Evidence {
        localized: worst_margin <= 1.0,
        worst_margin,
        worst_radius,
        gamma_required,
        amplitude_max,
    })
}

/// Threshold-front kinematics of a time-dependent density.
#[derive(Debug, Clone)]
pub struct FrontReport {
    pub epsilon: f64,
    pub times: Vec<f64>,
    /// Largest radius where the (normalized) shell density is >= epsilon.
    pub front_radii: Vec<f64>,
    /// Central-difference front speeds (threshold kinematics, not a signal
    /// speed).
    pub speeds: Vec<f64>,
    /// Exterior probability beyond the initial front radius, at t = 0:
    /// nonzero for positive-energy states; the tail precedes the evolution.
    pub initial_exterior: f64,
}

/// Track the outermost epsilon-level radius of a normalized density over
/// `times`. The evaluator maps t to a DensityProfile.
pub fn causality_probe<F>(evaluator: F, times: &[f64], epsilon: f64) -> Result<FrontReport>
where
    F: Fn(f64) -> Result<DensityProfile>,
{
    if !(epsilon > 1e-12 && epsilon < 1e-2) {
        return Err(Error::BadThreshold(epsilon));
    }
    if times.is_empty() || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::NoFront {
            epsilon,
            reason: "times must be nonempty and strictly increasing".into(),
        });
    }
    let mut front_radii = Vec::with_capacity(times.len());
    let mut initial_exterior = 0.0;
    for (i, &t) in times.iter().enumerate() {
        let profile = evaluator(t)?;
        let total = profile.total();
        let edge = profile.half_box() - 2.0 * profile.dr();
        let mut front: Option<f64> = None;
        for (&r, &v) in profile.radii().iter().zip(profile.values()).rev() {
            if v / total >= epsilon {
                front = Some(r);
                break;
            }
        }
        let r_front = front.ok_or_else(|| Error::NoFront {
            epsilon,
            reason: "density is everywhere below the threshold".into(),
        })?;
        if r_front > edge {
            return Err(Error::FrontHitsBoxEdge {
                radius: r_front,
                limit: edge,
            });
        }
        if i == 0 {
            initial_exterior = profile.exterior(r_front.min(profile.half_box()))? / total;
        }
        front_radii.push(r_front);
    }
    let speeds = central_speeds(times, &front_radii);
    Ok(FrontReport {
        epsilon,
        times: times.to_vec(),
        front_radii,
        speeds,
        initial_exterior,
    })
}

fn central_speeds(t: &[f64], r: &[f64]) -> Vec<f64> {
    let n = t.len();
    if n < 2 {
        return vec![0.0; n];
    }
    (0..n)
        .map(|i| {
            let (a, b) = if i == 0 {
                (0, 1)
            } else if i == n - 1 {
                (n - 2, n - 1)
            } else {
                (i - 1, i + 1)
            };
            (r[b] - r[a]) / (t[b] - t[a])
        })
        .collect()
}

/// One sample of the Newton-Wigner contrast probe.
#[derive(Debug, Clone)]
pub struct NwSample {
    pub time: f64,
    /// Initial support radius plus t: outside this ball nothing causal can be.
    pub light_cone_radius: f64,
    /// |a(x,t)|^2 mass strictly outside the light cone.
    pub exterior_mass: f64,
}

#[derive(Debug, Clone)]
pub struct NwReport {
    pub support_radius: f64,
    pub samples: Vec<NwSample>,
    pub profiles: Vec<DensityProfile>,
}

/// Evolve a compact unconstrained amplitude with the relativistic phase
/// e^(-i omega t) and measure |a|^2 outside the light cone of the initial
/// support. If |a|^2 were a probability density (the Newton-Wigner picture),
/// this exterior mass would be superluminal leakage; it is strictly positive
/// for every t > 0.
pub fn nw_probe(
    amplitude: &ComplexField,
    params: PhysicalParams,
    times: &[f64],
) -> Result<NwReport> {
    amplitude.expect_repr(Representation::Position)?;
    let lattice = Arc::clone(amplitude.lattice());
    // exact support radius: outer edge of the outermost cell with a nonzero
    // value, so the whole support bin counts as inside
    let mut support_radius: f64 = 0.0;
    for (i, v) in amplitude.values().iter().enumerate() {
        if v.norm_sqr() > 0.0 {
            support_radius = support_radius.max(lattice.radius(i) + 0.5 * lattice.dx());
        }
    }
    if support_radius == 0.0 || support_radius > lattice.half_box() / 2.0 {
        return Err(Error::NonCompactInput);
    }
    let hat = to_momentum(amplitude)?;
    let mut samples = Vec::with_capacity(times.len());
    let mut profiles = Vec::with_capacity(times.len());
    for &t in times {
        // t = 0 short-circuits: the input itself, so the exterior is exactly
        // zero rather than transform round-off
        let at_t = if t == 0.0 {
            amplitude.clone()
        } else {
            let lat = Arc::clone(&lattice);
            let evolved = hat.map_indexed(|i, v| {
                v * Complex64::from_polar(1.0, -params.omega(lat.momentum_radius(i)) * t)
            });
            to_position(&evolved)?
        };
        let density: Vec<f64> = at_t.values().iter().map(|v| v.norm_sqr()).collect();
        let profile = DensityProfile::from_pointwise(&lattice, t, &density);
        let light_cone_radius = support_radius + t;
        let exterior_mass = profile.exterior(light_cone_radius.min(profile.half_box()))?;
        samples.push(NwSample {
            time: t,
            light_cone_radius,
            exterior_mass,
        });
        profiles.push(profile);
    }
    Ok(NwReport {
        support_radius,
        samples,
        profiles,
    })
}
