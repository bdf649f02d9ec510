use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::{LetterStream, MAX_ALPHABET};
use crate::error::{invalid, Result};
use crate::heap::{ColoredHeap, HeapMode, Letter, Step};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkMode {
    Group,
    Semigroup,
}

impl WalkMode {
    pub fn name(&self) -> &'static str {
        match self {
            WalkMode::Group => "group",
            WalkMode::Semigroup => "semigroup",
        }
    }
}

/// Everything a run depends on. The engine applies no defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkParams {
    pub n: u32,
    pub steps: u64,
    pub trials: u32,
    pub seed: u64,
    pub mode: WalkMode,
    /// Steps discarded before the stationary window starts.
    pub burn_in: u64,
    /// Record the top-level profile of trial 0 every this many steps.
    pub snapshot_every: Option<u64>,
    /// Keep the roof size after every step.
    pub retain_roof_sizes: bool,
}

impl WalkParams {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("n must be >= 1"));
        }
        let alphabet = match self.mode {
            WalkMode::Group => 2 * self.n as u64,
            WalkMode::Semigroup => self.n as u64,
        };
        if alphabet > MAX_ALPHABET {
            return Err(invalid(format!(
                "alphabet of {alphabet} letters exceeds {MAX_ALPHABET}; n must be <= {}",
                match self.mode {
                    WalkMode::Group => MAX_ALPHABET / 2,
                    WalkMode::Semigroup => MAX_ALPHABET,
                }
            )));
        }
        if self.steps == 0 {
            return Err(invalid("steps must be >= 1"));
        }
        if self.trials == 0 {
            return Err(invalid("trials must be >= 1"));
        }
        if self.snapshot_every == Some(0) {
            return Err(invalid("snapshot interval must be >= 1"));
        }
        Ok(())
    }
}

/// One row of a top-level profile snapshot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SnapshotRow {
    pub step: u64,
    pub column: u32,
    pub top_level: u32,
    pub in_roof: bool,
}

/// Accumulators of one trial. Sums prefixed `window_` run over the steps
/// after the burn-in; the rest cover the whole trial.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct WalkStats {
    pub trial_index: u64,
    pub steps: u64,
    pub final_length: u64,
    pub reductions: u64,
    pub growths: u64,
    /// Highest occupied level at the end.
    pub height: u32,
    pub window_steps: u64,
    /// `Σ #T_j` over the window, `#T_j` the roof size after step `j`.
    pub roof_size_sum: u64,
    pub roof_size_sq_sum: u64,
    /// `Σ log(#T_j / n)` over the window.
    pub log_roof_sum: f64,
    pub window_reductions: u64,
    /// Reductions in the window after which the roof grew by one.
    pub roof_delta_plus_given_reduction: u64,
    /// Reductions in the window after which the roof shrank by one.
    pub roof_delta_minus_given_reduction: u64,
    /// `Σ_j #T/(2n)` with `#T` the roof size before step `j`: the expected
    /// number of reductions (group mode; 0 in semigroup mode).
    pub reduction_prob_sum: f64,
    /// `Σ_j p_j (1 - p_j)` for the same probabilities.
    pub reduction_prob_var: f64,
    /// Indexed by roof size `s` before a window step: number of such steps
    /// and the summed roof-size change.
    pub roof_drift_count: Vec<u64>,
    pub roof_drift_sum: Vec<i64>,
    pub roof_sizes: Option<Vec<u32>>,
    pub snapshots: Option<Vec<SnapshotRow>>,
}

/// Top-level profile of a semigroup heap. Ballistic deposition only needs
/// the highest cell per column; the sentinel columns `0` and `n + 1` stay at 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surface {
    tops: Vec<u32>,
}

impl Surface {
    pub fn new(n: u32) -> Self {
        Surface {
            tops: vec![0; n as usize + 2],
        }
    }

    pub fn n(&self) -> u32 {
        self.tops.len() as u32 - 2
    }

    pub fn top_level(&self, i: u32) -> u32 {
        self.tops[i as usize]
    }

    pub fn in_roof(&self, i: u32) -> bool {
        let i = i as usize;
        let t = self.tops[i];
        t > 0 && t > self.tops[i - 1] && t > self.tops[i + 1]
    }

    pub fn drop_cell(&mut self, i: u32) {
        let i = i as usize;
        self.tops[i] = 1 + self.tops[i - 1].max(self.tops[i]).max(self.tops[i + 1]);
    }

    pub fn height(&self) -> u32 {
        self.tops.iter().copied().max().unwrap_or(0)
    }
}

enum State {
    Group(ColoredHeap),
    Semigroup(Surface),
}

impl State {
    fn in_roof(&self, i: u32) -> bool {
        match self {
            State::Group(h) => h.in_roof(i),
            State::Semigroup(s) => s.in_roof(i),
        }
    }

    fn top_level(&self, i: u32) -> u32 {
        match self {
            State::Group(h) => h.top_level(i),
            State::Semigroup(s) => s.top_level(i),
        }
    }

    fn roof_around(&self, r: u32, n: u32) -> i64 {
        let lo = r.saturating_sub(1).max(1);
        let hi = (r + 1).min(n);
        (lo..=hi).filter(|&i| self.in_roof(i)).count() as i64
    }

    fn apply(&mut self, letter: Letter) -> Step {
        match self {
            State::Group(h) => h.push(letter).expect("letter drawn within range"),
            State::Semigroup(s) => {
                s.drop_cell(letter.index);
                Step::Grew
            }
        }
    }

    fn height(&self) -> u32 {
        match self {
            State::Group(h) => h.height(),
            State::Semigroup(s) => s.height(),
        }
    }
}

/// Runs one trial. Deterministic in `(params, trial_index)`.
pub fn run_trial(params: &WalkParams, trial_index: u64) -> Result<WalkStats> {
    params.validate()?;
    let n = params.n;
    let mut stream = LetterStream::new(params.seed, trial_index, n, params.mode == WalkMode::Group);
    let mut state = match params.mode {
        WalkMode::Group => State::Group(ColoredHeap::new(n, HeapMode::Group)?),
        WalkMode::Semigroup => State::Semigroup(Surface::new(n)),
    };
    let snapshot_every = if trial_index == 0 { params.snapshot_every } else { None };
    let mut stats = WalkStats {
        trial_index,
        steps: params.steps,
        roof_drift_count: vec![0; n as usize + 1],
        roof_drift_sum: vec![0; n as usize + 1],
        roof_sizes: params.retain_roof_sizes.then(Vec::new),
        snapshots: snapshot_every.map(|_| Vec::new()),
        ..Default::default()
    };
    let two_n = 2.0 * n as f64;
    let mut length: u64 = 0;
    let mut roof: i64 = 0;
    for step in 1..=params.steps {
        let letter = stream.next_letter();
        let r = letter.index;
        let before = roof;
        if params.mode == WalkMode::Group {
            let p = before as f64 / two_n;
            stats.reduction_prob_sum += p;
            stats.reduction_prob_var += p * (1.0 - p);
        }
        let local_before = state.roof_around(r, n);
        let outcome = state.apply(letter);
        roof += state.roof_around(r, n) - local_before;
        match outcome {
            Step::Grew => {
                length += 1;
                stats.growths += 1;
            }
            Step::Reduced => {
                length -= 1;
                stats.reductions += 1;
            }
            Step::Unchanged => unreachable!("group and semigroup pushes always change the length"),
        }
        if params.mode == WalkMode::Semigroup {
            debug_assert_eq!(length, step);
        }
        if step > params.burn_in {
            let s = roof as u64;
            stats.window_steps += 1;
            stats.roof_size_sum += s;
            stats.roof_size_sq_sum += s * s;
            stats.log_roof_sum += (s as f64 / n as f64).ln();
            stats.roof_drift_count[before as usize] += 1;
            stats.roof_drift_sum[before as usize] += roof - before;
            if outcome == Step::Reduced {
                stats.window_reductions += 1;
                match roof - before {
                    1 => stats.roof_delta_plus_given_reduction += 1,
                    -1 => stats.roof_delta_minus_given_reduction += 1,
                    0 => {}
                    d => unreachable!("roof changed by {d} on a reduction"),
                }
            }
        }
        if let Some(sizes) = stats.roof_sizes.as_mut() {
            sizes.push(roof as u32);
        }
        if let (Some(every), Some(rows)) = (snapshot_every, stats.snapshots.as_mut()) {
            if step % every == 0 {
                rows.extend((1..=n).map(|column| SnapshotRow {
                    step,
                    column,
                    top_level: state.top_level(column),
                    in_roof: state.in_roof(column),
                }));
            }
        }
    }
    stats.final_length = length;
    stats.height = state.height();
    Ok(stats)
}

/// A completed multi-trial run; `trials` is ordered by trial index.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WalkRun {
    pub params: WalkParams,
    pub trials: Vec<WalkStats>,
}

/// Runs all trials in parallel; the result does not depend on scheduling.
pub fn run_walk(params: &WalkParams) -> Result<WalkRun> {
    params.validate()?;
    let trials = (0..params.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(params, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(WalkRun {
        params: params.clone(),
        trials,
    })
}
