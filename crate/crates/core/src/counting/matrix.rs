use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};
use crate::heap::may_follow;

/// 0/1 adjacency of normal-form indices: entry `(i, j)` is 1 iff index `j`
/// may follow index `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferMatrix {
    n: usize,
    entries: Vec<Vec<u8>>,
}

impl TransferMatrix {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(invalid("transfer matrix needs n >= 1"));
        }
        let n = n as usize;
        let entries = (1..=n as u32)
            .map(|i| (1..=n as u32).map(|j| may_follow(i, j) as u8).collect())
            .collect();
        Ok(TransferMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.entries
    }

    /// Entry at 1-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i - 1][j - 1]
    }

    pub fn row_sum(&self, i: usize) -> usize {
        self.entries[i - 1].iter().map(|&e| e as usize).sum()
    }

    /// `a·T + b·I` over big integers.
    pub fn affine(&self, a: u32, b: u32) -> BigMatrix {
        let rows = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| BigUint::from(a * self.entries[i][j] as u32 + if i == j { b } else { 0 }))
                    .collect()
            })
            .collect();
        BigMatrix { rows }
    }
}

/// Dense square matrix of nonnegative big integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigMatrix {
    rows: Vec<Vec<BigUint>>,
}

impl BigMatrix {
    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigUint::one() } else { BigUint::zero() }).collect())
            .collect();
        BigMatrix { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.rows[i][j]
    }

    pub fn mul(&self, other: &BigMatrix) -> BigMatrix {
        let n = self.dim();
        let mut rows = vec![vec![BigUint::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            for k in 0..n {
                let a = &self.rows[i][k];
                if a.is_zero() {
                    continue;
                }
                for (j, out) in row.iter_mut().enumerate() {
                    let b = &other.rows[k][j];
                    if !b.is_zero() {
                        *out += a * b;
                    }
                }
            }
        }
        BigMatrix { rows }
    }

    /// `self^e` by repeated squaring.
    pub fn pow(&self, mut e: u64) -> BigMatrix {
        let mut result = BigMatrix::identity(self.dim());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// `⟨v M v⟩` with `v` the all-ones vector: the sum of all entries.
    pub fn ones_form(&self) -> BigUint {
        self.rows.iter().flatten().sum()
    }

    /// `M x`.
    pub fn apply(&self, x: &[BigUint]) -> Vec<BigUint> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `⟨v M^k v⟩` for `k = 0..len`, by repeated matrix-vector products.
    pub fn ones_orbit(&self, len: usize) -> Vec<BigUint> {
        let mut x = vec![BigUint::one(); self.dim()];
        let mut out = Vec::with_capacity(len);
        for k in 0..len {
            if k > 0 {
                x = self.apply(&x);
            }
            out.push(x.iter().sum());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(n: u32) -> Vec<Vec<u8>> {
        TransferMatrix::new(n).unwrap().rows().to_vec()
    }

    #[test]
    fn small_matrices() {
        assert_eq!(dense(1), vec![vec![0]]);
        assert_eq!(dense(2), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(dense(3), vec![vec![0, 1, 1], vec![1, 0, 1], vec![0, 1, 0]]);
        assert!(TransferMatrix::new(0).is_err());
    }

    #[test]
    fn row_sums() {
        for n in 2..12u32 {
            let t = TransferMatrix::new(n).unwrap();
            assert_eq!(t.row_sum(1), n as usize - 1);
            for i in 2..n as usize {
                assert_eq!(t.row_sum(i), n as usize - i + 1);
            }
            assert_eq!(t.row_sum(n as usize), 1);
        }
    }

    #[test]
    fn power_matches_orbit() {
        let m = TransferMatrix::new(6).unwrap().affine(2, 1);
        let orbit = m.ones_orbit(12);
        for (k, v) in orbit.iter().enumerate() {
            assert_eq!(&m.pow(k as u64).ones_form(), v);
        }
    }
}
