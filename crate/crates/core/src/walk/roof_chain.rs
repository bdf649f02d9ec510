//! The roof as a Markov chain on indicator vectors with no two adjacent ones.
//!
//! Dropping a cell in column `r` always makes `r` a roof column and pushes
//! both neighbours out of the roof, whatever the local pattern was. The
//! group variant adds the reduction rule: a letter whose inverse sits on a
//! roof column removes that roof entry. What the removed cell uncovers is
//! not visible from the roof alone, so the chain only clears `ε_r`.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::rng::LetterStream;
use crate::error::{invalid, Error, Result};
use crate::heap::{Letter, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// Columns 1 and n have a single neighbour.
    Open,
    /// Column n neighbours column 1.
    Periodic,
}

fn neighbours(r: usize, n: usize, boundary: Boundary) -> [Option<usize>; 2] {
    match boundary {
        Boundary::Open => [r.checked_sub(1), (r + 1 < n).then_some(r + 1)],
        Boundary::Periodic if n >= 3 => [Some((r + n - 1) % n), Some((r + 1) % n)],
        Boundary::Periodic => [(n == 2).then_some(1 - r), None],
    }
}

fn check_independent<T>(eps: &[Option<T>], boundary: Boundary) -> Result<()> {
    let n = eps.len();
    for r in 0..n {
        if eps[r].is_some() {
            for j in neighbours(r, n, boundary).into_iter().flatten() {
                if eps[j].is_some() {
                    return Err(Error::InvalidRoof(format!("columns {} and {} are both set", r + 1, j + 1)));
                }
            }
        }
    }
    Ok(())
}

fn check_column(r: u32, n: usize) -> Result<usize> {
    if r == 0 || r as usize > n {
        return Err(Error::IndexOutOfRange { index: r, n: n as u32 });
    }
    Ok(r as usize - 1)
}

/// One step of the semigroup chain at 1-based column `r`.
pub fn roof_chain_step(eps: &[bool], r: u32, boundary: Boundary) -> Result<Vec<bool>> {
    let as_opt: Vec<Option<()>> = eps.iter().map(|&e| e.then_some(())).collect();
    check_independent(&as_opt, boundary)?;
    let r = check_column(r, eps.len())?;
    let mut out = eps.to_vec();
    out[r] = true;
    for j in neighbours(r, eps.len(), boundary).into_iter().flatten() {
        out[j] = false;
    }
    Ok(out)
}

/// One step of the signed (group) chain.
pub fn roof_chain_step_signed(eps: &[Option<Sign>], letter: Letter, boundary: Boundary) -> Result<Vec<Option<Sign>>> {
    check_independent(eps, boundary)?;
    let r = check_column(letter.index, eps.len())?;
    let mut out = eps.to_vec();
    if eps[r] == Some(letter.sign.inverse()) {
        out[r] = None;
    } else {
        out[r] = Some(letter.sign);
        for j in neighbours(r, eps.len(), boundary).into_iter().flatten() {
            out[j] = None;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoofChainStats {
    pub n: u32,
    pub steps: u64,
    pub burn_in: u64,
    pub boundary: Boundary,
    /// Mean fraction of set entries over the window.
    pub density: f64,
    /// `(size, steps observed, mean change)` keyed by size before the step.
    pub drift_by_size: Vec<(usize, u64, f64)>,
}

/// Runs the semigroup chain from the empty vector with uniform columns.
pub fn simulate_roof_chain(n: u32, steps: u64, burn_in: u64, seed: u64, boundary: Boundary) -> Result<RoofChainStats> {
    if n == 0 {
        return Err(invalid("n must be >= 1"));
    }
    if burn_in >= steps {
        return Err(Error::WindowTooLong { burn_in, steps });
    }
    let nn = n as usize;
    let mut eps = vec![false; nn];
    let mut size: i64 = 0;
    let mut stream = LetterStream::new(seed, 0, n, false);
    let mut sum: u64 = 0;
    let mut count = vec![0u64; nn + 1];
    let mut delta = vec![0i64; nn + 1];
    for step in 1..=steps {
        let r = stream.next_letter().index as usize - 1;
        let before = size;
        let mut change = if eps[r] { 0 } else { 1 };
        eps[r] = true;
        for j in neighbours(r, nn, boundary).into_iter().flatten() {
            if eps[j] {
                eps[j] = false;
                change -= 1;
            }
        }
        size += change;
        if step > burn_in {
            sum += size as u64;
            count[before as usize] += 1;
            delta[before as usize] += change;
        }
    }
    let window = steps - burn_in;
    let drift_by_size = (0..=nn)
        .filter(|&s| count[s] > 0)
        .map(|s| (s, count[s], delta[s] as f64 / count[s] as f64))
        .collect();
    Ok(RoofChainStats {
        n,
        steps,
        burn_in,
        boundary,
        density: sum as f64 / (window as f64 * n as f64),
        drift_by_size,
    })
}

/// Exhaustive count of roof supports on `n` columns.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoofSupportCount {
    pub n: u32,
    pub colored: bool,
    #[serde(serialize_with = "crate::numfmt::serialize_decimal")]
    pub count: BigUint,
    /// `count(n) / count(n - 1)`; absent for `n = 0`.
    pub growth_ratio: Option<f64>,
}

pub const MAX_SUPPORT_COLUMNS: u32 = 30;

/// Enumerates every set of pairwise non-adjacent columns among `1..=n`
/// (including the empty set); in the colored count each chosen column
/// carries one of two signs.
pub fn roof_support_enumerate(n: u32, colored: bool) -> Result<RoofSupportCount> {
    if n > MAX_SUPPORT_COLUMNS {
        return Err(Error::BudgetExceeded {
            what: "roof support enumeration columns",
            limit: MAX_SUPPORT_COLUMNS as u64,
        });
    }
    let count = enumerate_supports(n, colored);
    let growth_ratio = (n > 0).then(|| {
        let prev = enumerate_supports(n - 1, colored);
        count.to_f64().unwrap() / prev.to_f64().unwrap()
    });
    Ok(RoofSupportCount {
        n,
        colored,
        count,
        growth_ratio,
    })
}

fn enumerate_supports(n: u32, colored: bool) -> BigUint {
    // Depth-first over columns; `stack` holds (next free column, chosen so far).
    let mut total = BigUint::zero();
    let mut stack = vec![(1u32, 0u32)];
    while let Some((next, chosen)) = stack.pop() {
        total += if colored { BigUint::from(1u32) << chosen } else { BigUint::from(1u32) };
        for c in next..=n {
            stack.push((c + 2, chosen + 1));
        }
    }
    total
}
