//! Per-trial random streams.
//!
//! Every trial owns a ChaCha8 stream keyed by `(seed, trial_index)`: the
//! seed goes through `seed_from_u64` and the trial index selects the stream.
//! Step `t` consumes exactly one 64-bit word, the `t`-th of the stream, so a
//! letter can be regenerated from `(seed, trial_index, t)` alone.
//!
//! A word `x` is mapped to `0..m` by `(x · m) >> 64`. The largest bucket
//! holds at most one extra value, so the bias is below `m / 2^64`; for
//! `m <= 2000` this is under `2^-53`.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::heap::Letter;

/// Largest alphabet for which the bias bound `m / 2^64 < 2^-53` holds.
pub const MAX_ALPHABET: u64 = 2048;

#[derive(Clone, Debug)]
pub struct LetterStream {
    rng: ChaCha8Rng,
    n: u32,
    with_inverses: bool,
}

impl LetterStream {
    pub fn new(seed: u64, trial_index: u64, n: u32, with_inverses: bool) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial_index);
        LetterStream { rng, n, with_inverses }
    }

    pub fn alphabet(&self) -> u64 {
        if self.with_inverses {
            2 * self.n as u64
        } else {
            self.n as u64
        }
    }

    /// Jump to step `t` (0-based).
    pub fn seek(&mut self, step: u64) {
        // one u64 is two 32-bit words
        self.rng.set_word_pos(2 * step as u128);
    }

    /// Uniform value in `0..m`.
    pub fn next_below(&mut self, m: u64) -> u64 {
        ((self.rng.next_u64() as u128 * m as u128) >> 64) as u64
    }

    /// Draws `0..2n` in group mode (`x < n` is `f_{x+1}`, otherwise
    /// `f_{x-n+1}^-1`) or `0..n` in semigroup mode.
    pub fn next_letter(&mut self) -> Letter {
        let x = self.next_below(self.alphabet()) as u32;
        if x < self.n {
            Letter::pos(x + 1)
        } else {
            Letter::neg(x - self.n + 1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heap::Sign;

    #[test]
    fn seek_reproduces_stream() {
        let mut a = LetterStream::new(42, 3, 10, true);
        let seq: Vec<Letter> = (0..100).map(|_| a.next_letter()).collect();
        let mut b = LetterStream::new(42, 3, 10, true);
        b.seek(57);
        assert_eq!(b.next_letter(), seq[57]);
    }

    #[test]
    fn streams_differ_by_trial() {
        let mut a = LetterStream::new(42, 0, 1000, false);
        let mut b = LetterStream::new(42, 1, 1000, false);
        let xa: Vec<_> = (0..16).map(|_| a.next_letter()).collect();
        let xb: Vec<_> = (0..16).map(|_| b.next_letter()).collect();
        assert_ne!(xa, xb);
    }

    #[test]
    fn letters_in_range() {
        let mut s = LetterStream::new(7, 0, 3, true);
        let mut seen = [0u32; 6];
        for _ in 0..6000 {
            let l = s.next_letter();
            assert!((1..=3).contains(&l.index));
            let k = (l.index - 1) as usize + if l.sign == Sign::Minus { 3 } else { 0 };
            seen[k] += 1;
        }
        assert!(seen.iter().all(|&c| c > 850 && c < 1150), "{seen:?}");
        let mut s = LetterStream::new(7, 0, 3, false);
        assert!((0..1000).all(|_| s.next_letter().sign == Sign::Plus));
    }

    #[test]
    fn golden_words() {
        // Pinned output of the generator; changing it changes every run.
        let mut s = LetterStream::new(42, 0, 100, true);
        let got: Vec<u64> = (0..4).map(|_| s.next_below(1 << 20)).collect();
        assert_eq!(got, GOLDEN.to_vec());
    }

    const GOLDEN: [u64; 4] = [715019, 996435, 448283, 657835];
}
