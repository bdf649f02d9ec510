//! Eigenvalues of the transfer matrix.
//!
//! The eigenvalue `-1` is defective (rows 1 and 2 of `T + I` coincide), so a
//! floating-point dense solver loses roughly half its digits there. Instead
//! the characteristic polynomial is computed exactly from the matrix, every
//! factor `(λ + 1)` is divided out, and the remaining simple roots are
//! isolated and bisected with exact dyadic evaluations.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::TransferMatrix;
use crate::error::{Error, Result};

/// Dyadic precision of the returned eigenvalues (`2^-52`).
const FINAL_LEVEL: u32 = 52;
const MAX_GRID_LEVEL: u32 = 24;

/// Coefficients of `det(T_n - λI)`, lowest degree first, computed from the
/// matrix by the Faddeev–LeVerrier recursion over the integers.
pub fn charpoly_coefficients(n: u32) -> Result<Vec<BigInt>> {
    let t = TransferMatrix::new(n)?;
    let n = n as usize;
    // c[i] is the coefficient of λ^i in det(λI - T).
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    for k in 1..=n {
        let am = times_transfer(&t, &m);
        let trace: BigInt = (0..n).map(|i| &am[i][i]).sum();
        let (q, r) = trace.div_rem(&BigInt::from(k));
        if !r.is_zero() {
            return Err(Error::Spectrum(format!("non-integral trace step {k}")));
        }
        c[n - k] = -q;
        m = am;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += &c[n - k];
        }
    }
    if n % 2 == 1 {
        for x in &mut c {
            *x = -&*x;
        }
    }
    Ok(c)
}

/// `T · M`, using that row `i` of `T` is `e_{i-1} + Σ_{j>i} e_j`.
fn times_transfer(t: &TransferMatrix, m: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = m.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    let mut suffix = vec![BigInt::zero(); n];
    for i in (0..n).rev() {
        for (x, s) in out[i].iter_mut().zip(&suffix) {
            *x += s;
        }
        if i > 0 {
            debug_assert_eq!(t.rows()[i][i - 1], 1);
            for (x, y) in out[i].iter_mut().zip(&m[i - 1]) {
                *x += y;
            }
        }
        for (s, y) in suffix.iter_mut().zip(&m[i]) {
            *s += y;
        }
    }
    out
}

/// Divide out `(λ + 1)` as often as it divides exactly; returns the quotient
/// and the multiplicity.
fn deflate_minus_one(mut p: Vec<BigInt>) -> (Vec<BigInt>, usize) {
    let mut mult = 0;
    while p.len() > 1 {
        // Synthetic division by (λ + 1), highest coefficient first.
        let d = p.len() - 1;
        let mut q = vec![BigInt::zero(); d];
        let mut carry = BigInt::zero();
        for i in (0..=d).rev() {
            let v = &p[i] - &carry;
            if i == 0 {
                carry = v;
            } else {
                q[i - 1] = v.clone();
                carry = v;
            }
        }
        if !carry.is_zero() {
            break;
        }
        p = q;
        mult += 1;
    }
    (p, mult)
}

/// Sign of `p(a / 2^k)`.
fn sign_at(p: &[BigInt], a: &BigInt, k: u32) -> i32 {
    let d = p.len() - 1;
    let mut acc = p[d].clone();
    for i in (0..d).rev() {
        acc = acc * a + (&p[i] << (k as usize * (d - i)));
    }
    if acc.is_zero() {
        0
    } else if acc.is_positive() {
        1
    } else {
        -1
    }
}

/// Integer bound on the spectral radius from a Collatz–Wielandt ratio with
/// the test vector `x_i = 2^{n-i}`.
fn radius_bound(t: &TransferMatrix) -> i64 {
    let n = t.n();
    let x: Vec<BigInt> = (0..n).map(|i| BigInt::one() << (n - 1 - i)).collect();
    let mut bound = 1i64;
    for i in 0..n {
        let tx: BigInt = (0..n).filter(|&j| t.rows()[i][j] == 1).map(|j| &x[j]).sum();
        let (q, r) = tx.div_rem(&x[i]);
        let ceil = q.to_i64().unwrap() + i64::from(!r.is_zero());
        bound = bound.max(ceil);
    }
    bound
}

enum Isolated {
    Exact(BigInt),
    Bracket(BigInt, i32),
}

fn isolate(p: &[BigInt], bound: i64, level: u32) -> Vec<Isolated> {
    let lo = BigInt::from(-bound) << level as usize;
    let hi = BigInt::from(bound) << level as usize;
    let mut found = Vec::new();
    let mut a = lo.clone();
    let mut last_sign = sign_at(p, &a, level);
    if last_sign == 0 {
        found.push(Isolated::Exact(a.clone()));
    }
    let mut zero_since = last_sign == 0;
    while a < hi {
        let next = &a + 1;
        let s = sign_at(p, &next, level);
        if s == 0 {
            found.push(Isolated::Exact(next.clone()));
            zero_since = true;
        } else {
            if last_sign != 0 && s != last_sign && !zero_since {
                found.push(Isolated::Bracket(a.clone(), last_sign));
            }
            last_sign = s;
            zero_since = false;
        }
        a = next;
    }
    found
}

fn refine(p: &[BigInt], mut a: BigInt, sign_lo: i32, mut level: u32) -> f64 {
    while level < FINAL_LEVEL {
        a <<= 1;
        level += 1;
        let mid = &a + 1;
        match sign_at(p, &mid, level) {
            0 => return dyadic(&mid, level),
            s if s == sign_lo => a = mid,
            _ => {}
        }
    }
    // midpoint of the final bracket
    dyadic(&((a << 1) + 1), level + 1)
}

fn dyadic(a: &BigInt, level: u32) -> f64 {
    a.to_f64().unwrap() / 2f64.powi(level as i32)
}

/// All `n` eigenvalues of `T_n` in descending order, accurate to about `1e-15`.
pub fn spectrum_numeric(n: u32) -> Result<Vec<f64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let t = TransferMatrix::new(n)?;
    let (q, minus_one) = deflate_minus_one(charpoly_coefficients(n)?);
    let degree = q.len() - 1;
    let bound = radius_bound(&t);
    let mut eig = vec![-1.0; minus_one];
    if degree > 0 {
        let mut level = 4;
        let roots = loop {
            let found = isolate(&q, bound, level);
            if found.len() == degree {
                break found;
            }
            if level >= MAX_GRID_LEVEL {
                return Err(Error::Spectrum(format!(
                    "isolated {} of {degree} simple roots for n = {n}",
                    found.len()
                )));
            }
            level += 2;
        };
        for r in roots {
            eig.push(match r {
                Isolated::Exact(a) => dyadic(&a, level),
                Isolated::Bracket(a, s) => refine(&q, a, s, level),
            });
        }
    }
    eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(eig)
}

/// Largest eigenvalue of `T_n`.
pub fn spectral_radius(n: u32) -> Result<f64> {
    Ok(spectrum_numeric(n)?.first().copied().unwrap_or(0.0))
}

/// `a_n(λ)` from `a_n = -(λ+1)(a_{n-1} + a_{n-2})`, `a_0 = 1`, `a_1 = -λ`.
pub fn charpoly_eval(n: u32, lambda: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, -lambda);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = -(lambda + 1.0) * (cur + prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// The same recursion with every term replaced by its absolute value. A
/// root of `a_n` evaluated in floating point has error of order
/// `ε · charpoly_scale(n, λ)`.
pub fn charpoly_scale(n: u32, lambda: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, lambda.abs());
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = (lambda + 1.0).abs() * (cur + prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// Closed form of [`charpoly_eval`] for `λ > -1`:
/// `(-1)^n μ^{n-1} U_{n+1}(μ/2)` with `μ = sqrt(λ+1)`.
pub fn charpoly_chebyshev(n: u32, lambda: f64) -> Option<f64> {
    if lambda <= -1.0 {
        return None;
    }
    let mu = (lambda + 1.0).sqrt();
    let x = mu / 2.0;
    let m = n as f64 + 2.0;
    let u = if (x - 1.0).abs() < 1e-12 {
        m
    } else if x < 1.0 {
        let th = x.acos();
        (m * th).sin() / th.sin()
    } else {
        let t = x.acosh();
        (m * t).sinh() / t.sinh()
    };
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Some(sign * mu.powi(n as i32 - 1) * u)
}

/// `4cos²(πk/(n+shift)) - 1` for every `k ≥ 1` with `2k < n + shift`,
/// padded with `-1` to `n` values, descending. `shift = 2` reproduces the
/// spectrum; `shift = 1` is kept as a diagnostic.
pub fn cosine_formula(n: u32, shift: u32) -> Vec<f64> {
    let m = (n + shift) as f64;
    let mut out: Vec<f64> = (1..)
        .take_while(|&k| 2 * k < n + shift)
        .map(|k| 4.0 * (PI * k as f64 / m).cos().powi(2) - 1.0)
        .take(n as usize)
        .collect();
    out.resize(n as usize, -1.0);
    out.sort_by(|a, b| b.partial_cmp(a).unwrap());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn recursion_poly(n: u32) -> Vec<BigInt> {
        // a_0 = 1, a_1 = -λ, a_m = -(λ+1)(a_{m-1} + a_{m-2})
        let mut prev = vec![BigInt::one()];
        let mut cur = vec![BigInt::zero(), -BigInt::one()];
        if n == 0 {
            return prev;
        }
        for _ in 1..n {
            let mut s = cur.clone();
            for (i, x) in prev.iter().enumerate() {
                s[i] += x;
            }
            let mut next = vec![BigInt::zero(); s.len() + 1];
            for (i, x) in s.iter().enumerate() {
                next[i] -= x;
                next[i + 1] -= x;
            }
            prev = cur;
            cur = next;
        }
        cur
    }

    #[test]
    fn matrix_charpoly_matches_recursion() {
        for n in 1..=40 {
            assert_eq!(charpoly_coefficients(n).unwrap(), recursion_poly(n), "n = {n}");
        }
    }

    #[test]
    fn small_spectra() {
        let s2 = spectrum_numeric(2).unwrap();
        assert!((s2[0] - 1.0).abs() < 1e-12 && (s2[1] + 1.0).abs() < 1e-12);
        let s3 = spectrum_numeric(3).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((s3[0] - phi).abs() < 1e-12);
        assert!((s3[1] - (1.0 - phi)).abs() < 1e-12);
        assert!((s3[2] + 1.0).abs() < 1e-12);
        assert_eq!(spectrum_numeric(1).unwrap(), vec![0.0]);
        assert!(spectrum_numeric(0).unwrap().is_empty());
    }

    #[test]
    fn minus_one_multiplicity() {
        for n in 1..30u32 {
            let (_, m) = deflate_minus_one(charpoly_coefficients(n).unwrap());
            assert_eq!(m, (n / 2) as usize, "n = {n}");
        }
    }

    #[test]
    fn radius_below_three() {
        for n in [5u32, 20, 60] {
            let r = spectral_radius(n).unwrap();
            assert!(r < 3.0);
            assert!(radius_bound(&TransferMatrix::new(n).unwrap()) <= 3);
        }
        assert!(spectral_radius(60).unwrap() > spectral_radius(20).unwrap());
    }

    #[test]
    fn cosine_formulas() {
        for n in 1..25u32 {
            let s = spectrum_numeric(n).unwrap();
            let f = cosine_formula(n, 2);
            for (a, b) in s.iter().zip(&f) {
                assert!((a - b).abs() < 1e-12, "n = {n}: {a} vs {b}");
            }
        }
        let wrong = cosine_formula(2, 1);
        assert!(wrong[0].abs() < 1e-12 && wrong[1] == -1.0);
    }

    #[test]
    fn recursion_examples() {
        assert_eq!(charpoly_eval(1, 0.7), -0.7);
        assert_eq!(charpoly_eval(2, 2.0), 3.0);
        assert_eq!(charpoly_eval(3, -1.0), 0.0);
        assert_eq!(charpoly_eval(0, 5.0), 1.0);
    }

    #[test]
    fn chebyshev_agrees() {
        for n in 0..30u32 {
            for &l in &[-0.9, -0.3, 0.0, 0.5, 1.7, 2.9, 3.0, 3.5, 6.0] {
                let a = charpoly_eval(n, l);
                let c = charpoly_chebyshev(n, l).unwrap();
                let scale = charpoly_scale(n, l).max(1.0);
                assert!((a - c).abs() <= 1e-9 * scale, "n={n} λ={l}: {a} vs {c}");
            }
        }
        assert!(charpoly_chebyshev(3, -1.0).is_none());
    }
}
