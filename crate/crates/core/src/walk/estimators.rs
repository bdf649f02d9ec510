use serde::Serialize;

use super::engine::{SnapshotRow, WalkMode, WalkRun, WalkStats};
use crate::error::{Error, Result};

/// A mean with its standard error. `se` is NaN when it cannot be estimated
/// (a single trial).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

fn nonempty(run: &WalkRun) -> Result<&[WalkStats]> {
    if run.trials.is_empty() {
        Err(Error::NoTrials)
    } else {
        Ok(&run.trials)
    }
}

fn windowed(run: &WalkRun) -> Result<&[WalkStats]> {
    let trials = nonempty(run)?;
    if trials.iter().any(|t| t.window_steps == 0) {
        return Err(Error::WindowTooLong {
            burn_in: run.params.burn_in,
            steps: run.params.steps,
        });
    }
    Ok(trials)
}

/// Mean of `final_length / N` over trials with the sample standard error.
pub fn drift_estimate(run: &WalkRun) -> Result<Estimate> {
    let trials = nonempty(run)?;
    let xs: Vec<f64> = trials
        .iter()
        .map(|t| t.final_length as f64 / t.steps as f64)
        .collect();
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    let se = if xs.len() < 2 {
        if run.params.mode == WalkMode::Semigroup {
            0.0
        } else {
            f64::NAN
        }
    } else {
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
        (var / k).sqrt()
    };
    Ok(Estimate { mean, se })
}

/// Time-averaged `#T / n` over the stationary window, pooled over trials.
pub fn roof_density_estimate(run: &WalkRun) -> Result<f64> {
    let trials = windowed(run)?;
    let sum: u64 = trials.iter().map(|t| t.roof_size_sum).sum();
    let steps: u64 = trials.iter().map(|t| t.window_steps).sum();
    Ok(sum as f64 / (steps as f64 * run.params.n as f64))
}

/// `E[(#T)^2] / (E #T)^2 - 1` over the window.
pub fn roof_fluctuation(run: &WalkRun) -> Result<f64> {
    let trials = windowed(run)?;
    let steps: f64 = trials.iter().map(|t| t.window_steps).sum::<u64>() as f64;
    let m1 = trials.iter().map(|t| t.roof_size_sum).sum::<u64>() as f64 / steps;
    let m2 = trials.iter().map(|t| t.roof_size_sq_sum).sum::<u64>() as f64 / steps;
    Ok(m2 / (m1 * m1) - 1.0)
}

/// Semigroup: `-(1/W) Σ_j log(#T_j / n)` over the window of `W` steps.
/// Group: the plug-in `log(3 - α̂)`.
pub fn entropy_estimate(run: &WalkRun) -> Result<f64> {
    match run.params.mode {
        WalkMode::Semigroup => {
            let trials = windowed(run)?;
            let sum: f64 = trials.iter().map(|t| t.log_roof_sum).sum();
            assert!(sum.is_finite(), "empty roof inside the window");
            let steps: u64 = trials.iter().map(|t| t.window_steps).sum();
            Ok(-sum / steps as f64)
        }
        WalkMode::Group => Ok((3.0 - alpha_estimate(run)?.mean).ln()),
    }
}

/// `α̂ = ½ (D⁺ - D⁻) / R` over reductions in the window, with the
/// standard error of a mean of `R` independent three-valued outcomes.
pub fn alpha_estimate(run: &WalkRun) -> Result<Estimate> {
    if run.params.mode != WalkMode::Group {
        return Err(Error::WrongMode { expected: "group" });
    }
    let trials = windowed(run)?;
    let r: u64 = trials.iter().map(|t| t.window_reductions).sum();
    if r == 0 {
        return Err(Error::NoReductions);
    }
    let plus = trials.iter().map(|t| t.roof_delta_plus_given_reduction).sum::<u64>() as f64 / r as f64;
    let minus = trials.iter().map(|t| t.roof_delta_minus_given_reduction).sum::<u64>() as f64 / r as f64;
    let mean = 0.5 * (plus - minus);
    let var = 0.25 * (plus + minus - (plus - minus).powi(2));
    Ok(Estimate {
        mean,
        se: (var / r as f64).sqrt(),
    })
}

/// Observed reductions against the expectation `Σ #T/(2n)`; the third value
/// is the standard deviation of the observed count.
pub fn reduction_check(run: &WalkRun) -> Result<(u64, f64, f64)> {
    if run.params.mode != WalkMode::Group {
        return Err(Error::WrongMode { expected: "group" });
    }
    let trials = nonempty(run)?;
    let observed = trials.iter().map(|t| t.reductions).sum();
    let expected = trials.iter().map(|t| t.reduction_prob_sum).sum();
    let var: f64 = trials.iter().map(|t| t.reduction_prob_var).sum();
    Ok((observed, expected, var.sqrt()))
}

/// Mean one-step change of the roof size, keyed by the roof size before the
/// step: `(size, steps observed, mean change)`.
pub fn roof_drift_by_size(run: &WalkRun) -> Result<Vec<(usize, u64, f64)>> {
    let trials = windowed(run)?;
    let len = run.params.n as usize + 1;
    let mut out = Vec::new();
    for s in 0..len {
        let count: u64 = trials.iter().map(|t| t.roof_drift_count[s]).sum();
        if count > 0 {
            let sum: i64 = trials.iter().map(|t| t.roof_drift_sum[s]).sum();
            out.push((s, count, sum as f64 / count as f64));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeapProfile {
    /// `H n / N`, averaged over trials.
    pub height_coeff: f64,
    /// `N / (n H)`, averaged over trials.
    pub density: f64,
    /// Top-level snapshots of trial 0, if requested.
    pub snapshots: Vec<SnapshotRow>,
    pub warning: Option<String>,
}

/// Height and packing density of the deposited heap (semigroup only).
pub fn heap_profile_stats(run: &WalkRun) -> Result<HeapProfile> {
    if run.params.mode != WalkMode::Semigroup {
        return Err(Error::WrongMode { expected: "semigroup" });
    }
    let trials = nonempty(run)?;
    let n = run.params.n as f64;
    let k = trials.len() as f64;
    let height_coeff = trials
        .iter()
        .map(|t| t.height as f64 * n / t.steps as f64)
        .sum::<f64>()
        / k;
    let density = trials
        .iter()
        .map(|t| t.steps as f64 / (n * t.height as f64))
        .sum::<f64>()
        / k;
    let warning = (run.params.steps < 100 * run.params.n as u64).then(|| {
        format!(
            "{} steps is below 100·n = {}; the heap profile may not be stationary",
            run.params.steps,
            100 * run.params.n as u64
        )
    });
    Ok(HeapProfile {
        height_coeff,
        density,
        snapshots: trials[0].snapshots.clone().unwrap_or_default(),
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::engine::{run_walk, WalkParams};

    fn run(mode: WalkMode, n: u32, steps: u64, trials: u32, burn_in: u64) -> WalkRun {
        run_walk(&WalkParams {
            n,
            steps,
            trials,
            seed: 9,
            mode,
            burn_in,
            snapshot_every: None,
            retain_roof_sizes: false,
        })
        .unwrap()
    }

    #[test]
    fn semigroup_drift_exact() {
        let r = run(WalkMode::Semigroup, 10, 1000, 3, 100);
        assert_eq!(drift_estimate(&r).unwrap(), Estimate { mean: 1.0, se: 0.0 });
        let r1 = run(WalkMode::Semigroup, 10, 1000, 1, 100);
        assert_eq!(drift_estimate(&r1).unwrap().se, 0.0);
        assert!(drift_estimate(&run(WalkMode::Group, 10, 1000, 1, 100)).unwrap().se.is_nan());
    }

    #[test]
    fn single_column() {
        let r = run(WalkMode::Semigroup, 1, 500, 2, 10);
        assert_eq!(roof_density_estimate(&r).unwrap(), 1.0);
        assert_eq!(heap_profile_stats(&r).unwrap().density, 1.0);
        assert_eq!(entropy_estimate(&r).unwrap(), 0.0);
    }

    #[test]
    fn free_group_drift() {
        let r = run(WalkMode::Group, 2, 100_000, 1, 20);
        let d = drift_estimate(&r).unwrap().mean;
        assert!((d - 0.5).abs() < 0.02, "{d}");
    }

    #[test]
    fn alpha_bounds_and_modes() {
        let r = run(WalkMode::Group, 20, 50_000, 2, 200);
        let a = alpha_estimate(&r).unwrap();
        assert!(a.mean > -0.5 && a.mean < 0.5);
        assert!(a.se > 0.0);
        let s = run(WalkMode::Semigroup, 20, 1000, 1, 200);
        assert_eq!(alpha_estimate(&s), Err(Error::WrongMode { expected: "group" }));
        assert!(heap_profile_stats(&r).is_err());
    }

    #[test]
    fn window_errors() {
        let r = run(WalkMode::Semigroup, 10, 100, 1, 100);
        assert!(matches!(roof_density_estimate(&r), Err(Error::WindowTooLong { .. })));
        let empty = WalkRun {
            params: r.params.clone(),
            trials: vec![],
        };
        assert_eq!(drift_estimate(&empty), Err(Error::NoTrials));
    }

    #[test]
    fn short_runs_warn() {
        let r = run(WalkMode::Semigroup, 10, 500, 1, 100);
        assert!(heap_profile_stats(&r).unwrap().warning.is_some());
    }

    #[test]
    fn reductions_match_roof_probability() {
        let r = run(WalkMode::Group, 30, 200_000, 2, 300);
        let (obs, exp, sd) = reduction_check(&r).unwrap();
        assert!((obs as f64 - exp).abs() < 4.0 * sd, "{obs} vs {exp} ± {sd}");
    }
}
