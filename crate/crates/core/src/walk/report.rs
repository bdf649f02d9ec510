use serde::Serialize;

use super::engine::{SnapshotRow, WalkMode, WalkRun};
use super::estimators::{alpha_estimate, drift_estimate, entropy_estimate, heap_profile_stats, roof_density_estimate};
use crate::error::Result;

/// Summary of a walk run. Quantities that do not apply to the mode (or
/// cannot be estimated) serialize as `null`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WalkReport {
    pub mode: WalkMode,
    pub n: u32,
    pub steps: u64,
    pub trials: u32,
    pub seed: u64,
    pub drift_mean: f64,
    pub drift_se: Option<f64>,
    pub roof_density: Option<f64>,
    pub entropy_estimate: Option<f64>,
    pub alpha_hat: Option<f64>,
    pub alpha_se: Option<f64>,
    pub height_coeff: Option<f64>,
    pub heap_density: Option<f64>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl WalkReport {
    pub fn from_run(run: &WalkRun) -> Result<Self> {
        let p = &run.params;
        let drift = drift_estimate(run)?;
        let alpha = match p.mode {
            WalkMode::Group => alpha_estimate(run).ok(),
            WalkMode::Semigroup => None,
        };
        let profile = match p.mode {
            WalkMode::Semigroup => Some(heap_profile_stats(run)?),
            WalkMode::Group => None,
        };
        Ok(WalkReport {
            mode: p.mode,
            n: p.n,
            steps: p.steps,
            trials: p.trials,
            seed: p.seed,
            drift_mean: drift.mean,
            drift_se: finite(drift.se),
            roof_density: roof_density_estimate(run).ok(),
            entropy_estimate: entropy_estimate(run).ok(),
            alpha_hat: alpha.map(|a| a.mean),
            alpha_se: alpha.and_then(|a| finite(a.se)),
            height_coeff: profile.as_ref().map(|h| h.height_coeff),
            heap_density: profile.as_ref().map(|h| h.density),
        })
    }
}

/// `step,column,top_level,in_roof` rows with a header, `in_roof` as 0/1.
pub fn snapshot_csv(rows: &[SnapshotRow]) -> String {
    let mut out = String::from("step,column,top_level,in_roof\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.step, r.column, r.top_level, r.in_roof as u8));
    }
    out
}
