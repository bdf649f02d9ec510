//! Two-sided volume and drift bounds for braid groups, inherited from the
//! locally free group through the embedding `σ_i^2 ↦ f_i`.

use serde::Serialize;

use crate::counting::{growth_rate, limit_growth_rate, CountVariant};
use crate::error::{invalid, Result};
use crate::walk::WalkMode;

fn variant(mode: WalkMode) -> CountVariant {
    match mode {
        WalkMode::Group => CountVariant::Group,
        WalkMode::Semigroup => CountVariant::Semigroup,
    }
}

/// Logarithmic volume of the locally free group (or semigroup) on `n`
/// generators, from its exact finite-`n` growth rate.
pub fn lf_volume(n: u32, mode: WalkMode) -> Result<f64> {
    Ok(growth_rate(n, variant(mode))?.ln())
}

/// `(v_LF(n) / 2, v_LF(n))`.
pub fn volume_bounds(n: u32, mode: WalkMode) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(invalid("braid bounds need n >= 2"));
    }
    let v = lf_volume(n, mode)?;
    Ok((v / 2.0, v))
}

/// The `n → ∞` bounds: `(½ log 7, log 7)` and `(log 2, log 4)`.
pub fn limit_volume_bounds(mode: WalkMode) -> (f64, f64) {
    let v = limit_growth_rate(variant(mode)).expect("fixed variants are valid").ln();
    (v / 2.0, v)
}

/// `((2-α)/(2(3-α)), (2-α)/(3-α))` for `|α| < ½`.
pub fn drift_bounds(alpha: f64) -> Result<(f64, f64)> {
    if alpha.is_nan() || alpha.abs() >= 0.5 {
        return Err(invalid(format!("|alpha| must be < 1/2, got {alpha}")));
    }
    Ok(drift_bounds_closed_form(alpha))
}

/// The drift bound formula without the range check on `α`.
pub fn drift_bounds_closed_form(alpha: f64) -> (f64, f64) {
    let upper = (2.0 - alpha) / (3.0 - alpha);
    (upper / 2.0, upper)
}

/// `ε(α) = ((2-α)/(3-α)) log 7 - log(3-α)`.
pub fn epsilon_closed_form(alpha: f64) -> f64 {
    (2.0 - alpha) / (3.0 - alpha) * 7f64.ln() - (3.0 - alpha).ln()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityReport {
    pub v: f64,
    pub l: f64,
    pub h: f64,
    /// `l·v - h`.
    pub epsilon: f64,
    /// Grid `α = -½ + k·10⁻³`, `k = 1..999`.
    pub grid_points: usize,
    pub grid_min_alpha: f64,
    pub grid_min_epsilon: f64,
    pub grid_all_positive: bool,
}

/// `ε = l·v - h`, plus the minimum of [`epsilon_closed_form`] over the
/// open interval `(-½, ½)`.
pub fn inequality_report(v: f64, l: f64, h: f64) -> Result<InequalityReport> {
    if !(v.is_finite() && l.is_finite() && h.is_finite()) {
        return Err(invalid("v, l and h must be finite"));
    }
    if !(l > 0.0 && l <= 1.0) {
        return Err(invalid(format!("drift l = {l} must lie in (0, 1]")));
    }
    if v <= 0.0 {
        return Err(invalid(format!("volume v = {v} must be positive")));
    }
    let grid: Vec<(f64, f64)> = (1..1000)
        .map(|k| {
            let a = -0.5 + k as f64 * 1e-3;
            (a, epsilon_closed_form(a))
        })
        .collect();
    let (grid_min_alpha, grid_min_epsilon) = grid
        .iter()
        .copied()
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();
    Ok(InequalityReport {
        v,
        l,
        h,
        epsilon: l * v - h,
        grid_points: grid.len(),
        grid_min_alpha,
        grid_min_epsilon,
        grid_all_positive: grid.iter().all(|&(_, e)| e > 0.0),
    })
}

/// Bounds at one `n`, with the `(v, l, h)` triple behind `epsilon`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub n: u32,
    #[serde(serialize_with = "crate::numfmt::serialize_sig12")]
    pub v_lf: f64,
    #[serde(serialize_with = "crate::numfmt::serialize_sig12")]
    pub v_limit: f64,
    #[serde(serialize_with = "crate::numfmt::serialize_sig12")]
    pub volume_lower: f64,
    #[serde(serialize_with = "crate::numfmt::serialize_sig12")]
    pub volume_upper: f64,
    #[serde(serialize_with = "crate::numfmt::serialize_sig12")]
    pub drift_lower: f64,
    #[serde(serialize_with = "crate::numfmt::serialize_sig12")]
    pub drift_upper: f64,
    #[serde(serialize_with = "crate::numfmt::serialize_sig12")]
    pub alpha_used: f64,
    #[serde(serialize_with = "crate::numfmt::serialize_sig12")]
    pub drift_used: f64,
    #[serde(serialize_with = "crate::numfmt::serialize_sig12")]
    pub entropy_used: f64,
    #[serde(serialize_with = "crate::numfmt::serialize_sig12")]
    pub epsilon: f64,
}

/// Group bounds at `n`. Without measured values the drift defaults to the
/// upper bound `(2-α)/(3-α)` and the entropy to `log(3-α)`.
pub fn bounds_report(n: u32, alpha: f64, drift: Option<f64>, entropy: Option<f64>) -> Result<BoundsReport> {
    let (volume_lower, volume_upper) = volume_bounds(n, WalkMode::Group)?;
    let (drift_lower, drift_upper) = drift_bounds(alpha)?;
    let l = drift.unwrap_or(drift_upper);
    let h = entropy.unwrap_or_else(|| (3.0 - alpha).ln());
    Ok(BoundsReport {
        n,
        v_lf: volume_upper,
        v_limit: limit_volume_bounds(WalkMode::Group).1,
        volume_lower,
        volume_upper,
        drift_lower,
        drift_upper,
        alpha_used: alpha,
        drift_used: l,
        entropy_used: h,
        epsilon: l * volume_upper - h,
    })
}
