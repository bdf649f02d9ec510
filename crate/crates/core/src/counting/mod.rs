//! Exact word counts and logarithmic volumes.
//!
//! A normal form is a sequence of syllables `f_{α_1}^{m_1} … f_{α_s}^{m_s}`
//! whose indices walk along the transfer matrix. Counting therefore splits
//! into two independent factors: the number `θ_n(s) = ⟨v T^{s-1} v⟩` of index
//! sequences of length `s`, and the number of ways to distribute the
//! remaining length over the exponents, which depends only on the variant.

pub mod matrix;
pub mod spectrum;

use std::f64::consts::{LN_2, PI};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::heap::HeapMode;

pub use matrix::{BigMatrix, TransferMatrix};

/// Which group or semigroup is being counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CountVariant {
    Group,
    Semigroup,
    /// Semigroup with `f_i^2 = f_i`.
    Projective,
    /// Group with `f_i^r = 1`.
    Restricted(u32),
}

impl CountVariant {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CountVariant::Restricted(r) if r < 2 => Err(invalid(format!("restricted order r = {r} must be >= 2"))),
            _ => Ok(()),
        }
    }

    /// Identifier used in CSV output: `group`, `semigroup`, `projective`,
    /// `restricted:<r>`.
    pub fn label(&self) -> String {
        match self {
            CountVariant::Group => "group".into(),
            CountVariant::Semigroup => "semigroup".into(),
            CountVariant::Projective => "projective".into(),
            CountVariant::Restricted(r) => format!("restricted:{r}"),
        }
    }

    pub fn heap_mode(&self) -> HeapMode {
        match *self {
            CountVariant::Group => HeapMode::Group,
            CountVariant::Semigroup => HeapMode::Semigroup,
            CountVariant::Projective => HeapMode::Projective,
            CountVariant::Restricted(r) => HeapMode::Restricted(r),
        }
    }

    /// Number of distinct syllables `f_i^m` of each geodesic length.
    pub fn syllable_classes(&self) -> SyllableClasses {
        match *self {
            CountVariant::Group => SyllableClasses::Unbounded { per_length: 2 },
            CountVariant::Semigroup => SyllableClasses::Unbounded { per_length: 1 },
            CountVariant::Projective => SyllableClasses::Finite(vec![1]),
            CountVariant::Restricted(r) => {
                let m = r / 2;
                SyllableClasses::Finite(
                    (1..=m)
                        .map(|j| if r % 2 == 0 && j == m { 1 } else { 2 })
                        .collect(),
                )
            }
        }
    }
}

/// Syllable counts by length: `c_j` for `j >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SyllableClasses {
    /// `c_j = per_length` for every `j`.
    Unbounded { per_length: u32 },
    /// `c_1, …, c_d`; zero beyond.
    Finite(Vec<u32>),
}

impl SyllableClasses {
    pub fn count(&self, j: usize) -> u32 {
        match self {
            SyllableClasses::Unbounded { per_length } => {
                if j >= 1 {
                    *per_length
                } else {
                    0
                }
            }
            SyllableClasses::Finite(c) => {
                if j >= 1 {
                    c.get(j - 1).copied().unwrap_or(0)
                } else {
                    0
                }
            }
        }
    }

    /// Growth rate of `Σ_s λ^s φ(z)^s` with `φ(z) = Σ_j c_j z^j`: the
    /// reciprocal of the smallest positive root of `λ φ(z) = 1`.
    pub fn growth_for(&self, lambda: f64) -> f64 {
        if lambda <= 0.0 {
            return 0.0;
        }
        match self {
            SyllableClasses::Unbounded { per_length } => lambda * *per_length as f64 + 1.0,
            SyllableClasses::Finite(c) => {
                let phi = |z: f64| c.iter().rev().fold(0.0, |acc, &cj| (acc + cj as f64) * z);
                let mut hi = 1.0;
                while lambda * phi(hi) < 1.0 {
                    hi *= 2.0;
                }
                let mut lo = 0.0;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if lambda * phi(mid) < 1.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                1.0 / (0.5 * (lo + hi))
            }
        }
    }
}

pub fn transfer_matrix(n: u32) -> Result<TransferMatrix> {
    TransferMatrix::new(n)
}

/// `θ_n(s) = ⟨v T^{s-1} v⟩`, the number of admissible index sequences of length `s`.
pub fn theta_exact(n: u32, s: u32) -> Result<BigUint> {
    if s == 0 {
        return Err(invalid("θ_n(s) needs s >= 1"));
    }
    Ok(TransferMatrix::new(n)?.affine(1, 0).pow(s as u64 - 1).ones_form())
}

/// `θ_n(1), …, θ_n(s_max)`.
pub fn theta_sequence(n: u32, s_max: u32) -> Result<Vec<BigUint>> {
    Ok(TransferMatrix::new(n)?.affine(1, 0).ones_orbit(s_max as usize))
}

fn check_count_args(n: u32, k: u32, variant: CountVariant) -> Result<()> {
    variant.validate()?;
    if n == 0 {
        return Err(invalid("n must be >= 1"));
    }
    if k == 0 {
        return Err(invalid("K must be >= 1"));
    }
    Ok(())
}

/// Exact number `V(n, K)` of elements of reduced length `K`.
///
/// Group: `2⟨v (2T+I)^{K-1} v⟩`; semigroup: `⟨v (T+I)^{K-1} v⟩`;
/// projective: `θ_n(K)`; restricted: `Σ_s N_r(K, s) θ_n(s)`.
pub fn count_words(n: u32, k: u32, variant: CountVariant) -> Result<BigUint> {
    check_count_args(n, k, variant)?;
    let t = TransferMatrix::new(n)?;
    let e = k as u64 - 1;
    Ok(match variant {
        CountVariant::Group => t.affine(2, 1).pow(e).ones_form() * 2u32,
        CountVariant::Semigroup => t.affine(1, 1).pow(e).ones_form(),
        CountVariant::Projective => t.affine(1, 0).pow(e).ones_form(),
        CountVariant::Restricted(r) => {
            let theta = t.affine(1, 0).ones_orbit(k as usize);
            let mut total = BigUint::zero();
            for s in 1..=k {
                let weight = restricted_syllable_count(r, k, s)?;
                if !weight.is_zero() {
                    total += weight * &theta[s as usize - 1];
                }
            }
            total
        }
    })
}

/// `V(n, 1), …, V(n, k_max)` using the cheapest exact route per variant.
pub fn volume_sequence(n: u32, k_max: u32, variant: CountVariant) -> Result<Vec<BigUint>> {
    check_count_args(n, k_max, variant)?;
    let t = TransferMatrix::new(n)?;
    let len = k_max as usize;
    Ok(match variant {
        CountVariant::Group => t.affine(2, 1).ones_orbit(len).into_iter().map(|x| x * 2u32).collect(),
        CountVariant::Semigroup => t.affine(1, 1).ones_orbit(len),
        CountVariant::Projective => t.affine(1, 0).ones_orbit(len),
        CountVariant::Restricted(_) => count_by_syllables(n, k_max, variant)?,
    })
}

/// `V(n, 1), …, V(n, k_max)` by a length recurrence over the last syllable.
///
/// `A_K(x)` counts normal forms of length `K` whose last syllable has index
/// `x`; a new syllable of length `j` can be appended after any index that
/// `x` may follow. This route does not use the `N_r` coefficients.
pub fn count_by_syllables(n: u32, k_max: u32, variant: CountVariant) -> Result<Vec<BigUint>> {
    check_count_args(n, k_max, variant)?;
    let t = TransferMatrix::new(n)?;
    let classes = variant.syllable_classes();
    let n = n as usize;
    let kmax = k_max as usize;
    // succ[K][x] = Σ_y T[y][x] A_K(y); succ[0] is unused.
    let mut succ: Vec<Vec<BigUint>> = vec![vec![BigUint::zero(); n]];
    let mut volumes = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        let mut a = vec![BigUint::from(classes.count(k)); n];
        for j in 1..k {
            let c = classes.count(j);
            if c == 0 {
                continue;
            }
            for (ax, sx) in a.iter_mut().zip(&succ[k - j]) {
                *ax += sx * c;
            }
        }
        volumes.push(a.iter().sum());
        let s = (0..n)
            .map(|x| {
                (0..n)
                    .filter(|&y| t.rows()[y][x] == 1)
                    .map(|y| &a[y])
                    .sum()
            })
            .collect();
        succ.push(s);
    }
    Ok(volumes)
}

/// Per-syllable generating function `g_r(z)`, truncated at `degree`:
/// `g_{2m} = (2 - z^{m-1} - z^m)/(1 - z)`, `g_{2m+1} = 2(1 - z^m)/(1 - z)`.
pub fn syllable_polynomial(r: u32, degree: usize) -> Result<Vec<BigUint>> {
    if r < 2 {
        return Err(invalid(format!("restricted order r = {r} must be >= 2")));
    }
    let m = (r / 2) as usize;
    let mut numerator = vec![0i64; degree + 1];
    let mut add = |d: usize, c: i64| {
        if d <= degree {
            numerator[d] += c;
        }
    };
    if r.is_multiple_of(2) {
        add(0, 2);
        add(m - 1, -1);
        add(m, -1);
    } else {
        add(0, 2);
        add(m, -2);
    }
    // Division by (1 - z) is a prefix sum.
    let mut acc = 0i64;
    Ok(numerator
        .into_iter()
        .map(|c| {
            acc += c;
            debug_assert!(acc >= 0);
            BigUint::from(acc as u64)
        })
        .collect())
}

fn poly_mul_truncated(a: &[BigUint], b: &[BigUint], degree: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); degree + 1];
    for (i, x) in a.iter().enumerate().take(degree + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(degree + 1 - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// `N_r(K, s) = [z^{K-s}] g_r(z)^s`: the number of exponent tuples
/// `(m_1, …, m_s)` of nonzero classes mod `r` whose geodesic lengths sum to `K`.
pub fn restricted_syllable_count(r: u32, k: u32, s: u32) -> Result<BigUint> {
    if s == 0 || s > k {
        return Err(invalid(format!("N_r(K, s) needs 1 <= s <= K (got K = {k}, s = {s})")));
    }
    let degree = (k - s) as usize;
    let g = syllable_polynomial(r, degree)?;
    let mut result = vec![BigUint::zero(); degree + 1];
    result[0] = BigUint::from(1u32);
    let mut base = g;
    let mut e = s;
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mul_truncated(&result, &base, degree);
        }
        e >>= 1;
        if e > 0 {
            base = poly_mul_truncated(&base, &base, degree);
        }
    }
    Ok(result.swap_remove(degree))
}

/// Natural logarithm of a big integer (`-inf` for zero).
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap();
    (top as f64).ln() + shift as f64 * LN_2
}

/// Successive-ratio volume estimate `log(V(n,K)/V(n,K-1))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub n: u32,
    pub k: u32,
    pub variant: CountVariant,
    pub log_ratio: f64,
    /// `log(V(K')/V(K'-1))` for `K' = 2..=K`.
    pub log_ratios: Vec<f64>,
}

pub fn log_volume_estimate(n: u32, k: u32, variant: CountVariant) -> Result<VolumeEstimate> {
    if k < 2 {
        return Err(invalid("volume estimate needs K >= 2"));
    }
    let v = volume_sequence(n, k, variant)?;
    let logs: Vec<f64> = v.iter().map(ln_big).collect();
    let log_ratios: Vec<f64> = logs.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(VolumeEstimate {
        n,
        k,
        variant,
        log_ratio: *log_ratios.last().unwrap(),
        log_ratios,
    })
}

/// Exact `lim_K V(n,K+1)/V(n,K)` at finite `n`, from the largest eigenvalue
/// of the transfer matrix.
pub fn growth_rate(n: u32, variant: CountVariant) -> Result<f64> {
    variant.validate()?;
    let lambda = spectrum::spectral_radius(n)?;
    Ok(variant.syllable_classes().growth_for(lambda))
}

/// `lim_{n→∞}` of [`growth_rate`]: the largest eigenvalue tends to 3.
pub fn limit_growth_rate(variant: CountVariant) -> Result<f64> {
    variant.validate()?;
    Ok(variant.syllable_classes().growth_for(3.0))
}

/// Large-`n` form `C (2^n / n^3) 3^{s-1}` with `C = 16π²/log⁴(2/e)`.
/// Only the growth in `s` is meaningful; the prefactor is not checked.
pub fn theta_asymptotic(n: u32, s: u32) -> Result<f64> {
    if n < 4 || s == 0 {
        return Err(invalid("asymptotic θ needs n >= 4 and s >= 1"));
    }
    let c = 16.0 * PI * PI / (2f64.ln() - 1.0).powi(4);
    let n = n as f64;
    Ok(c * 2f64.powf(n) / n.powi(3) * 3f64.powi(s as i32 - 1))
}
