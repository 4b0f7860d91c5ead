//! One-sided sequence spaces over byte alphabets.
//!
//! Sequences are pure index functions; nothing is materialized unless a
//! caller asks for a window with [`Sequence::window`].

mod toeplitz;

use std::fmt;
use std::sync::Arc;

use crate::real::Phase;

pub use toeplitz::{
    essential_period, gcd_reduce, is_d_periodic, per_set, per_set_skeleton, predicted_ac, toeplitz_fill, DensityRow,
    PeriodicStructure, ToeplitzWord, HOLE,
};

type SymbolFn = dyn Fn(u64) -> u8 + Send + Sync;

/// A deterministic symbol-at-index function over `N_0`.
#[derive(Clone)]
pub struct Sequence {
    alphabet: Vec<u8>,
    generator: Arc<SymbolFn>,
    /// `(preperiod, period)` when the sequence is known to be eventually periodic.
    pub eventual_period: Option<(u64, u64)>,
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix: String = self.window(0, 16).iter().map(|&s| symbol_char(s)).collect();
        f.debug_struct("Sequence")
            .field("alphabet", &self.alphabet)
            .field("prefix", &prefix)
            .field("eventual_period", &self.eventual_period)
            .finish()
    }
}

impl Sequence {
    pub fn from_fn<F>(alphabet: Vec<u8>, f: F) -> Sequence
    where
        F: Fn(u64) -> u8 + Send + Sync + 'static,
    {
        Sequence { alphabet, generator: Arc::new(f), eventual_period: None }
    }

    /// The purely periodic sequence `word word word ...`.
    pub fn periodic(word: &[u8]) -> Sequence {
        assert!(!word.is_empty(), "periodic word must be non-empty");
        let mut alphabet = word.to_vec();
        alphabet.sort_unstable();
        alphabet.dedup();
        let w = word.to_vec();
        let p = w.len() as u64;
        Sequence {
            alphabet,
            generator: Arc::new(move |k| w[(k % p) as usize]),
            eventual_period: Some((0, p)),
        }
    }

    /// Constant sequence.
    pub fn constant(symbol: u8) -> Sequence {
        Sequence::periodic(&[symbol])
    }

    /// Sturmian coding of the orbit of `x0` under rotation by `alpha`.
    pub fn sturmian(alpha: Phase, x0: Phase) -> Sequence {
        Sequence::from_fn(vec![0, 1], move |k| sturmian(alpha, x0, k))
    }

    pub fn thue_morse() -> Sequence {
        Sequence::from_fn(vec![0, 1], thue_morse)
    }

    pub fn toeplitz(word: &ToeplitzWord) -> Sequence {
        let w = word.clone();
        Sequence::from_fn(vec![0, 1], move |k| w.symbol_at(k))
    }

    /// Parses a literal over `{0,1,*}` into a periodic sequence.
    pub fn periodic_str(word: &str) -> Sequence {
        Sequence::periodic(&parse_word(word).expect("literal over {0,1,*}"))
    }

    #[inline]
    pub fn symbol_at(&self, k: u64) -> u8 {
        (self.generator)(k)
    }

    pub fn alphabet(&self) -> &[u8] {
        &self.alphabet
    }

    pub fn window(&self, start: u64, len: usize) -> Vec<u8> {
        (0..len as u64).map(|i| self.symbol_at(start + i)).collect()
    }

    /// The shifted sequence `sigma^s(self)`.
    pub fn shift(&self, s: u64) -> Sequence {
        let g = Arc::clone(&self.generator);
        Sequence {
            alphabet: self.alphabet.clone(),
            generator: Arc::new(move |k| g(k + s)),
            eventual_period: self.eventual_period.map(|(pre, p)| (pre.saturating_sub(s), p)),
        }
    }

    /// Subsequence along `start, start+step, ...`; used for powers of the shift.
    pub fn decimate(&self, step: u64) -> Sequence {
        let g = Arc::clone(&self.generator);
        Sequence::from_fn(self.alphabet.clone(), move |k| g(k * step))
    }
}

/// Renders a symbol for display: `0..=9` as digits, the hole as `*`.
pub fn symbol_char(s: u8) -> char {
    match s {
        HOLE => '*',
        0..=9 => (b'0' + s) as char,
        other => other as char,
    }
}

/// Renders a word over small symbols.
pub fn word_string(w: &[u8]) -> String {
    w.iter().map(|&s| symbol_char(s)).collect()
}

/// Parses `0`, `1` and `*` characters into symbols.
pub fn parse_word(text: &str) -> Option<Vec<u8>> {
    text.chars()
        .map(|c| match c {
            '*' => Some(HOLE),
            d if d.is_ascii_digit() => Some(d as u8 - b'0'),
            _ => None,
        })
        .collect()
}

/// Cantor distance `2^-j`, `j` the first index where `x` and `y` differ.
///
/// Returns 0 when no difference occurs in `[0, max_window)`.
pub fn cantor_distance(x: &Sequence, y: &Sequence, max_window: u32) -> f64 {
    assert!(max_window >= 1);
    (0..max_window as u64)
        .find(|&k| x.symbol_at(k) != y.symbol_at(k))
        .map_or(0.0, |j| 2f64.powi(-(j as i32)))
}

/// Largest `j` with `2^-j >= delta`, i.e. the last index that must be inspected
/// to decide `rho(x, y) >= delta`. `None` when `delta > 1` (never separated).
pub fn cantor_depth(delta: f64) -> Option<u32> {
    if delta > 1.0 {
        return None;
    }
    let mut j = 0u32;
    while j < 63 && 2f64.powi(-(j as i32 + 1)) >= delta {
        j += 1;
    }
    Some(j)
}

/// Bit `k` of the Sturmian coding of `x0` under rotation by `alpha`:
/// 0 on `[0, 1-alpha)`, 1 on `[1-alpha, 1)`.
#[inline]
pub fn sturmian(alpha: Phase, x0: Phase, k: u64) -> u8 {
    sturmian_bit(alpha, x0.add(alpha.mul(k)))
}

#[inline]
pub(crate) fn sturmian_bit(alpha: Phase, x: Phase) -> u8 {
    (x.0 >= alpha.neg().0) as u8
}

/// Parity of the binary digit sum of `k`.
#[inline]
pub fn thue_morse(k: u64) -> u8 {
    (k.count_ones() & 1) as u8
}

/// Number of distinct factors of length `n` in `window`.
pub fn factor_complexity(window: &[u8], n: usize) -> usize {
    let mut seen: Vec<&[u8]> = window.windows(n).collect();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::Real;
    use proptest::prelude::*;

    fn word(s: &str) -> Sequence {
        Sequence::periodic_str(s)
    }

    #[test]
    fn cantor_distance_examples() {
        let x = word("0111");
        assert_eq!(cantor_distance(&x, &x, 64), 0.0);
        let x = Sequence::from_fn(vec![0, 1], |k| if k == 0 { 0 } else { 1 });
        let y = Sequence::constant(1);
        assert_eq!(cantor_distance(&x, &y, 64), 1.0);
        let x = Sequence::from_fn(vec![0, 1], |k| if k == 2 { 1 } else { 0 });
        let y = Sequence::constant(0);
        assert_eq!(cantor_distance(&x, &y, 64), 0.25);
    }

    #[test]
    fn cantor_distance_truncates() {
        let x = Sequence::from_fn(vec![0, 1], |k| (k == 100) as u8);
        let y = Sequence::constant(0);
        assert_eq!(cantor_distance(&x, &y, 64), 0.0);
        assert_eq!(cantor_distance(&x, &y, 101), 2f64.powi(-100));
    }

    #[test]
    fn cantor_depth_boundaries() {
        assert_eq!(cantor_depth(1.0), Some(0));
        assert_eq!(cantor_depth(0.75), Some(0));
        assert_eq!(cantor_depth(0.5), Some(1));
        assert_eq!(cantor_depth(0.3), Some(1));
        assert_eq!(cantor_depth(0.25), Some(2));
        assert_eq!(cantor_depth(1.5), None);
    }

    #[test]
    fn sturmian_examples() {
        let g = Real::golden().phase;
        assert_eq!(sturmian(g, Phase::ZERO, 0), 0);
        assert_eq!(sturmian(g, Phase::ZERO, 1), 1);
    }

    #[test]
    fn sturmian_small_alpha_has_isolated_ones() {
        // rational approximant 2/7 < 1/2: no two consecutive ones
        let alpha = Real::parse("2/7").unwrap().phase;
        let s = Sequence::sturmian(alpha, Phase::ZERO);
        let w = s.window(0, 700);
        assert!(w.windows(2).all(|p| p != [1, 1]));
    }

    #[test]
    fn sturmian_has_complexity_n_plus_one() {
        let s = Sequence::sturmian(Real::golden().phase, Phase::ZERO);
        let w = s.window(0, 20_000);
        for n in 1..=24 {
            assert_eq!(factor_complexity(&w, n), n + 1, "n = {n}");
        }
    }

    #[test]
    fn thue_morse_prefix() {
        assert_eq!(thue_morse(0), 0);
        assert_eq!(thue_morse(3), 0);
        let prefix: String = (0..8).map(|k| symbol_char(thue_morse(k))).collect();
        assert_eq!(prefix, "01101001");
    }

    #[test]
    fn shift_and_decimate() {
        let s = Sequence::thue_morse();
        assert_eq!(s.shift(3).window(0, 4), s.window(3, 4));
        assert_eq!(s.decimate(2).window(0, 8), s.window(0, 8), "t(2k) = t(k)");
    }

    proptest! {
        #[test]
        fn cantor_is_ultrametric(a in 0u64..4096, b in 0u64..4096, c in 0u64..4096) {
            let s = Sequence::thue_morse();
            let (x, y, z) = (s.shift(a), s.shift(b), s.shift(c));
            let xz = cantor_distance(&x, &z, 64);
            let xy = cantor_distance(&x, &y, 64);
            let yz = cantor_distance(&y, &z, 64);
            prop_assert!(xz <= xy.max(yz));
        }
    }
}
