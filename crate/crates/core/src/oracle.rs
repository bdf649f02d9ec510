//! Brute-force ground truth at small sizes.
//!
//! Everything here works directly on heaps: balls are grown breadth-first
//! from the identity with canonical keys as the deduplication table, and
//! walk distributions are propagated step by step over the same keys. No
//! formula from [`crate::counting`] is used.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::counting::{count_words, ln_big, restricted_syllable_count, CountVariant};
use crate::error::{invalid, Error, Result};
use crate::heap::{ColoredHeap, HeapMode, Letter};
use crate::walk::WalkMode;

/// Default cap on stored states (ball elements or distribution support).
pub const DEFAULT_BUDGET: u64 = 2_000_000;

fn alphabet(n: u32, with_inverses: bool) -> Vec<Letter> {
    let mut out: Vec<Letter> = (1..=n).map(Letter::pos).collect();
    if with_inverses {
        out.extend((1..=n).map(Letter::neg));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BallCensus {
    pub n: u32,
    pub variant: CountVariant,
    pub radius: u32,
    /// `counts[K]` elements at distance `K`, for `K = 0..=radius`.
    pub counts: Vec<u64>,
    /// Canonical key of every element with its distance from the identity.
    #[serde(skip)]
    pub elements: BTreeMap<Vec<u8>, u32>,
}

/// Breadth-first enumeration of the ball of the given radius.
pub fn enumerate_ball(n: u32, radius: u32, variant: CountVariant, budget: u64) -> Result<BallCensus> {
    variant.validate()?;
    let mode = variant.heap_mode();
    let letters = alphabet(n, mode.has_inverses());
    let identity = ColoredHeap::new(n, mode)?;
    let mut elements = BTreeMap::new();
    elements.insert(identity.canonical_key(), 0u32);
    let mut counts = vec![1u64];
    let mut frontier = vec![identity];
    for k in 1..=radius {
        let mut next = Vec::new();
        for heap in &frontier {
            for &l in &letters {
                let h = heap.pushed(l)?;
                let key = h.canonical_key();
                if !elements.contains_key(&key) {
                    if elements.len() as u64 >= budget {
                        return Err(Error::BudgetExceeded {
                            what: "ball elements",
                            limit: budget,
                        });
                    }
                    elements.insert(key, k);
                    next.push(h);
                }
            }
        }
        counts.push(next.len() as u64);
        frontier = next;
    }
    Ok(BallCensus {
        n,
        variant,
        radius,
        counts,
        elements,
    })
}

fn heap_mode(mode: WalkMode) -> HeapMode {
    match mode {
        WalkMode::Group => HeapMode::Group,
        WalkMode::Semigroup => HeapMode::Semigroup,
    }
}

/// Path counts `#L(w)` of all words reachable in exactly `steps` steps.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactDistribution {
    pub n: u32,
    pub mode: WalkMode,
    pub steps: u32,
    /// Canonical key → (reduced length, number of paths).
    pub path_counts: BTreeMap<Vec<u8>, (u32, BigUint)>,
    /// `(2n)^N` in group mode, `n^N` in semigroup mode.
    pub total_paths: BigUint,
}

impl ExactDistribution {
    pub fn probabilities(&self) -> BTreeMap<Vec<u8>, BigRational> {
        let total = BigRational::from_integer(self.total_paths.clone().into());
        self.path_counts
            .iter()
            .map(|(k, (_, c))| (k.clone(), BigRational::from_integer(c.clone().into()) / &total))
            .collect()
    }

    pub fn probability_of(&self, heap: &ColoredHeap) -> BigRational {
        let c = self
            .path_counts
            .get(&heap.canonical_key())
            .map_or_else(BigUint::zero, |(_, c)| c.clone());
        BigRational::new(c.into(), self.total_paths.clone().into())
    }
}

/// Exact law of the walk after `steps` steps, propagated forward over
/// canonical states. At every step the counts are also rebuilt backwards
/// (each state from its possible predecessors) and compared.
pub fn exact_distribution(n: u32, steps: u32, mode: WalkMode, budget: u64) -> Result<ExactDistribution> {
    if n == 0 {
        return Err(invalid("n must be >= 1"));
    }
    let hm = heap_mode(mode);
    let letters = alphabet(n, hm.has_inverses());
    let identity = ColoredHeap::new(n, hm)?;
    let mut level: HashMap<Vec<u8>, (ColoredHeap, BigUint)> = HashMap::new();
    level.insert(identity.canonical_key(), (identity, BigUint::one()));
    for step in 1..=steps {
        let mut next: HashMap<Vec<u8>, (ColoredHeap, BigUint)> = HashMap::new();
        for (heap, count) in level.values() {
            for &l in &letters {
                let h = heap.pushed(l)?;
                let key = h.canonical_key();
                match next.get_mut(&key) {
                    Some(entry) => entry.1 += count,
                    None => {
                        if next.len() as u64 >= budget {
                            return Err(Error::BudgetExceeded {
                                what: "distribution states",
                                limit: budget,
                            });
                        }
                        next.insert(key, (h, count.clone()));
                    }
                }
            }
        }
        check_backward(&level, &next, mode, &letters, step)?;
        level = next;
    }
    let total_paths = BigUint::from(letters.len()).pow(steps);
    let path_counts = level
        .into_iter()
        .map(|(k, (h, c))| (k, (h.len() as u32, c)))
        .collect();
    Ok(ExactDistribution {
        n,
        mode,
        steps,
        path_counts,
        total_paths,
    })
}

/// Semigroup: `#L_N(w) = Σ_{i in roof(w)} #L_{N-1}(w with the top of column i removed)`.
/// Group: `#L_N(w) = Σ_g #L_{N-1}(w g^-1)` over all `2n` letters.
fn check_backward(
    prev: &HashMap<Vec<u8>, (ColoredHeap, BigUint)>,
    next: &HashMap<Vec<u8>, (ColoredHeap, BigUint)>,
    mode: WalkMode,
    letters: &[Letter],
    step: u32,
) -> Result<()> {
    let lookup = |h: &ColoredHeap| prev.get(&h.canonical_key()).map(|e| &e.1);
    for (heap, count) in next.values() {
        let mut sum = BigUint::zero();
        match mode {
            WalkMode::Semigroup => {
                for i in heap.roof().columns() {
                    if let Some(c) = lookup(&heap.without_top(i)) {
                        sum += c;
                    }
                }
            }
            WalkMode::Group => {
                for &l in letters {
                    if let Some(c) = lookup(&heap.pushed(l.inverse())?) {
                        sum += c;
                    }
                }
            }
        }
        if &sum != count {
            return Err(Error::RecursionViolated { step });
        }
    }
    Ok(())
}

/// `H(μ^N) / N` with `H(ν) = -Σ ν log ν`.
pub fn exact_entropy(n: u32, steps: u32, mode: WalkMode, budget: u64) -> Result<f64> {
    if steps == 0 {
        return Err(invalid("entropy per step needs N >= 1"));
    }
    let d = exact_distribution(n, steps, mode, budget)?;
    Ok(entropy_per_step(&d))
}

/// `H = log T - (1/T) Σ c log c` over path counts `c` with total `T`.
pub fn entropy_per_step(d: &ExactDistribution) -> f64 {
    let total = &d.total_paths;
    // Sum c·log c in order of the keys so the result is reproducible.
    let mut weighted = 0.0;
    for (_, c) in d.path_counts.values() {
        let x = ln_big(c);
        weighted += x * ratio(c, total);
    }
    (ln_big(total) - weighted) / d.steps as f64
}

fn ratio(a: &BigUint, b: &BigUint) -> f64 {
    (ln_big(a) - ln_big(b)).exp()
}

/// `Σ_w μ^N(w) |w| / N`, exactly.
pub fn exact_drift(n: u32, steps: u32, mode: WalkMode, budget: u64) -> Result<BigRational> {
    if steps == 0 {
        return Err(invalid("drift needs N >= 1"));
    }
    let d = exact_distribution(n, steps, mode, budget)?;
    Ok(drift_of(&d))
}

pub fn drift_of(d: &ExactDistribution) -> BigRational {
    let mut sum = BigUint::zero();
    for (len, c) in d.path_counts.values() {
        sum += c * *len;
    }
    BigRational::new(sum.into(), (&d.total_paths * d.steps).into())
}

/// Number of tuples `(m_1, …, m_s)` of nonzero classes of `Z/rZ` whose
/// geodesic lengths `min(m, r - m)` sum to `K`, by direct enumeration.
pub fn brute_restricted(r: u32, k: u32, s: u32, budget: u64) -> Result<BigUint> {
    if r < 2 {
        return Err(invalid(format!("restricted order r = {r} must be >= 2")));
    }
    if s == 0 || s > k {
        return Err(invalid(format!("need 1 <= s <= K (got K = {k}, s = {s})")));
    }
    let lengths: Vec<u32> = (1..r).map(|m| m.min(r - m)).collect();
    let max_len = *lengths.iter().max().unwrap();
    let mut visited = 0u64;
    let mut found = 0u64;
    // (slots filled, length so far)
    let mut stack = vec![(0u32, 0u32)];
    while let Some((filled, len)) = stack.pop() {
        visited += 1;
        if visited > budget {
            return Err(Error::BudgetExceeded {
                what: "restricted exponent tuples",
                limit: budget,
            });
        }
        if filled == s {
            if len == k {
                found += 1;
            }
            continue;
        }
        let left = s - filled - 1;
        for &l in &lengths {
            let total = len + l;
            if total + left <= k && total + left * max_len >= k {
                stack.push((filled + 1, total));
            }
        }
    }
    Ok(BigUint::from(found))
}

/// `variant,n,K,count` rows for `K = 1..=radius`.
pub fn census_csv(c: &BallCensus) -> String {
    let mut out = String::from("variant,n,K,count\n");
    for (k, count) in c.counts.iter().enumerate().skip(1) {
        out.push_str(&format!("{},{},{},{}\n", c.variant.label(), c.n, k, count));
    }
    out
}

/// `key_hex,numerator,denominator` rows in key order, fractions reduced.
pub fn distribution_csv(d: &ExactDistribution) -> String {
    let mut out = String::from("key_hex,numerator,denominator\n");
    for (key, p) in d.probabilities() {
        let hex: String = key.iter().map(|b| format!("{b:02x}")).collect();
        out.push_str(&format!("{hex},{},{}\n", p.numer(), p.denom()));
    }
    out
}

/// One oracle-against-formula comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub what: String,
    pub formula: String,
    pub oracle: String,
}

impl Comparison {
    pub fn passed(&self) -> bool {
        self.formula == self.oracle
    }
}

/// Ball counts against `count_words` for every variant on `n <= n_max`,
/// `K <= k_max` (restricted orders 2 to 5 up to `min(k_max, 6)`), and
/// syllable counts against [`brute_restricted`] for `r <= 7`, `K <= 12`.
pub fn verify_counts(n_max: u32, k_max: u32, budget: u64) -> Result<Vec<Comparison>> {
    let mut out = Vec::new();
    let mut variants = vec![
        (CountVariant::Group, k_max),
        (CountVariant::Semigroup, k_max),
        (CountVariant::Projective, k_max),
    ];
    variants.extend((2..=5).map(|r| (CountVariant::Restricted(r), k_max.min(6))));
    for (variant, radius) in variants {
        for n in 1..=n_max {
            let census = enumerate_ball(n, radius, variant, budget)?;
            for k in 1..=radius {
                out.push(Comparison {
                    what: format!("{} n={n} K={k}", variant.label()),
                    formula: count_words(n, k, variant)?.to_string(),
                    oracle: census.counts[k as usize].to_string(),
                });
            }
        }
    }
    for r in 2..=7 {
        for k in 1..=12 {
            for s in 1..=k {
                out.push(Comparison {
                    what: format!("N_{r}(K={k}, s={s})"),
                    formula: restricted_syllable_count(r, k, s)?.to_string(),
                    oracle: brute_restricted(r, k, s, budget)?.to_string(),
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn ball_examples() {
        let c = enumerate_ball(3, 2, CountVariant::Group, DEFAULT_BUDGET).unwrap();
        assert_eq!(c.counts, vec![1, 6, 26]);
        assert_eq!(c.elements.len(), 33);
        let c = enumerate_ball(2, 6, CountVariant::Group, DEFAULT_BUDGET).unwrap();
        for k in 1..=6 {
            assert_eq!(c.counts[k], 4 * 3u64.pow(k as u32 - 1));
        }
        let c = enumerate_ball(2, 8, CountVariant::Semigroup, DEFAULT_BUDGET).unwrap();
        for k in 0..=8 {
            assert_eq!(c.counts[k], 1 << k);
        }
    }

    #[test]
    fn ball_budget() {
        assert!(matches!(
            enumerate_ball(3, 5, CountVariant::Group, 100),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn distribution_examples() {
        let d = exact_distribution(2, 2, WalkMode::Group, DEFAULT_BUDGET).unwrap();
        let id = ColoredHeap::new(2, HeapMode::Group).unwrap();
        assert_eq!(d.probability_of(&id), rat(1, 4));
        let w = id.pushed(Letter::pos(1)).unwrap().pushed(Letter::pos(2)).unwrap();
        assert_eq!(d.probability_of(&w), rat(1, 16));
        let total: BigRational = d.probabilities().values().sum();
        assert_eq!(total, rat(1, 1));
        let s = exact_distribution(3, 3, WalkMode::Semigroup, DEFAULT_BUDGET).unwrap();
        let paths: BigUint = s.path_counts.values().map(|(_, c)| c).sum();
        assert_eq!(paths, BigUint::from(27u32));
    }

    #[test]
    fn drift_examples() {
        for n in 1..4 {
            for steps in 1..6 {
                assert_eq!(exact_drift(n, steps, WalkMode::Semigroup, DEFAULT_BUDGET).unwrap(), rat(1, 1));
            }
        }
        assert_eq!(exact_drift(3, 1, WalkMode::Group, DEFAULT_BUDGET).unwrap(), rat(1, 1));
        // free group on two generators: N=2 gives (12·2 + 4·0)/16/2
        assert_eq!(exact_drift(2, 2, WalkMode::Group, DEFAULT_BUDGET).unwrap(), rat(3, 4));
        for steps in 2..6 {
            let d = exact_drift(3, steps, WalkMode::Group, DEFAULT_BUDGET).unwrap();
            assert!(d > rat(0, 1) && d < rat(1, 1));
        }
    }

    #[test]
    fn one_step_entropy() {
        for n in 1..4 {
            let h = exact_entropy(n, 1, WalkMode::Group, DEFAULT_BUDGET).unwrap();
            assert!((h - (2.0 * n as f64).ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn restricted_examples() {
        for k in 1..8 {
            for s in 1..=k {
                let want = u32::from(k == s);
                assert_eq!(brute_restricted(2, k, s, DEFAULT_BUDGET).unwrap(), BigUint::from(want));
            }
        }
        assert_eq!(brute_restricted(4, 3, 2, DEFAULT_BUDGET).unwrap(), BigUint::from(4u32));
        assert_eq!(brute_restricted(5, 2, 1, DEFAULT_BUDGET).unwrap(), BigUint::from(2u32));
        assert!(brute_restricted(1, 2, 1, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn csv_formats() {
        let c = enumerate_ball(3, 2, CountVariant::Group, DEFAULT_BUDGET).unwrap();
        assert_eq!(census_csv(&c), "variant,n,K,count\ngroup,3,1,6\ngroup,3,2,26\n");
        let d = exact_distribution(1, 1, WalkMode::Group, DEFAULT_BUDGET).unwrap();
        let csv = distribution_csv(&d);
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.lines().all(|l| l.ends_with(",1,2") || l.starts_with("key_hex")));
    }
}
