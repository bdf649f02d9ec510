//! Number formatting shared by reports and CSV output.

use num_bigint::BigUint;
use serde::Serializer;

/// Rounds to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap()
}

/// Shortest decimal that carries 12 significant digits of `x`. Magnitudes
/// below 1e-6 or from 1e15 up use exponent notation; `-0` prints as `0`.
pub fn sig12(x: f64) -> String {
    let r = round_sig(x, 12);
    if r == 0.0 {
        "0".to_string()
    } else if r.is_finite() && (r.abs() < 1e-6 || r.abs() >= 1e15) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

/// Serializes a float rounded to 12 significant digits.
pub fn serialize_sig12<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*x, 12))
}

/// Serializes a big integer as a decimal string, so JSON readers never see
/// a rounded float.
pub fn serialize_decimal<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_str_radix(10))
}
