//! (p,q)-Toeplitz words: templates with holes that are filled by the word
//! itself, level by level.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;

use super::{word_string, Sequence};
use crate::error::{Error, Result};

/// The hole symbol `*`.
pub const HOLE: u8 = b'*';

/// A Toeplitz template `w` over `{0, 1, *}` and the sequence `T(w)` it generates.
///
/// `T_0 = *^inf`, `T_l = F_w(T_{l-1})`, where `F_w` writes the argument into the
/// holes of the periodic word `w w w ...` in order.
#[derive(Clone, PartialEq, Eq)]
pub struct ToeplitzWord {
    word: Vec<u8>,
    /// Length of the `0^m 1` block when built by [`ToeplitzWord::new`].
    prefix_zeros: Option<usize>,
    /// Number of holes strictly before each position of `word`.
    holes_before: Vec<u64>,
    p: u64,
    q: u64,
    d: u64,
}

impl fmt::Debug for ToeplitzWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ToeplitzWord({}; p={}, q={}, d={})", word_string(&self.word), self.p, self.q, self.d)
    }
}

impl fmt::Display for ToeplitzWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&word_string(&self.word))
    }
}

impl ToeplitzWord {
    /// The word `0^m 1 v` with `1 <= |v|_* <= |v| <= m`.
    pub fn new(m: usize, v: &str) -> Result<ToeplitzWord> {
        let body = super::parse_word(v)
            .filter(|w| w.iter().all(|&s| s == 0 || s == 1 || s == HOLE))
            .ok_or_else(|| Error::Toeplitz(format!("`{v}` is not a word over {{0,1,*}}")))?;
        let holes = body.iter().filter(|&&s| s == HOLE).count();
        if holes < 1 || body.len() > m {
            return Err(Error::Toeplitz(format!(
                "need 1 <= |v|_* <= |v| <= m, got |v|_*={holes}, |v|={}, m={m}",
                body.len()
            )));
        }
        let mut word = vec![0u8; m];
        word.push(1);
        word.extend_from_slice(&body);
        let mut w = ToeplitzWord::from_template(&word)?;
        w.prefix_zeros = Some(m);
        Ok(w)
    }

    /// An arbitrary template. It must contain a hole and must not start with
    /// one, otherwise position 0 is never filled.
    pub fn from_template(word: &[u8]) -> Result<ToeplitzWord> {
        if word.iter().any(|&s| s != 0 && s != 1 && s != HOLE) {
            return Err(Error::Toeplitz("symbols must be 0, 1 or *".into()));
        }
        let q = word.iter().filter(|&&s| s == HOLE).count() as u64;
        if q == 0 {
            return Err(Error::Toeplitz("template has no hole".into()));
        }
        if word[0] == HOLE {
            return Err(Error::Toeplitz("template starts with a hole".into()));
        }
        let mut holes_before = Vec::with_capacity(word.len());
        let mut c = 0u64;
        for &s in word {
            holes_before.push(c);
            c += (s == HOLE) as u64;
        }
        let p = word.len() as u64;
        Ok(ToeplitzWord { word: word.to_vec(), prefix_zeros: None, holes_before, p, q, d: p.gcd(&q) })
    }

    pub fn parse_template(text: &str) -> Result<ToeplitzWord> {
        let w = super::parse_word(text)
            .ok_or_else(|| Error::Toeplitz(format!("`{text}` is not a word over {{0,1,*}}")))?;
        ToeplitzWord::from_template(&w)
    }

    pub fn template(&self) -> &[u8] {
        &self.word
    }

    pub fn prefix_zeros(&self) -> Option<usize> {
        self.prefix_zeros
    }

    /// `|w|`
    pub fn p(&self) -> u64 {
        self.p
    }

    /// `|w|_*`
    pub fn q(&self) -> u64 {
        self.q
    }

    /// `gcd(p, q)`
    pub fn d(&self) -> u64 {
        self.d
    }

    #[inline]
    fn descend(&self, k: u64) -> std::result::Result<u8, u64> {
        let r = (k % self.p) as usize;
        match self.word[r] {
            HOLE => Err((k / self.p) * self.q + self.holes_before[r]),
            s => Ok(s),
        }
    }

    /// Symbol `k` of the limit word `T(w)`.
    pub fn symbol_at(&self, mut k: u64) -> u8 {
        loop {
            match self.descend(k) {
                Ok(s) => return s,
                Err(next) => k = next,
            }
        }
    }

    /// Symbol `k` of the approximant `T_level(w)`; `HOLE` if still unfilled.
    pub fn level_symbol(&self, level: u32, mut k: u64) -> u8 {
        for _ in 0..level {
            match self.descend(k) {
                Ok(s) => return s,
                Err(next) => k = next,
            }
        }
        HOLE
    }

    /// Prefix of `T(w)` of the given length.
    pub fn expand(&self, length: usize) -> Vec<u8> {
        (0..length as u64).map(|k| self.symbol_at(k)).collect()
    }

    /// Prefix of `T_level(w)`.
    pub fn level_prefix(&self, level: u32, length: usize) -> Vec<u8> {
        (0..length as u64).map(|k| self.level_symbol(level, k)).collect()
    }

    /// Period `p^l / d^(l-1)` of the approximant `T_l`.
    pub fn skeleton_period(&self, level: u32) -> Option<u64> {
        assert!(level >= 1);
        let num = self.p.checked_pow(level)?;
        let den = self.d.checked_pow(level - 1)?;
        Some(num / den)
    }

    /// Periods `p_l` and exact skeleton densities `D(p_l) = 1 - q^l/p^l`.
    pub fn density_table(&self, depth: u32) -> Result<PeriodicStructure> {
        if depth < 1 {
            return Err(Error::Toeplitz("depth must be at least 1".into()));
        }
        let mut rows = Vec::with_capacity(depth as usize);
        for l in 1..=depth {
            let overflow = || Error::Toeplitz(format!("level {l} overflows 64-bit periods"));
            let period = self.skeleton_period(l).ok_or_else(overflow)?;
            let pl = self.p.checked_pow(l).ok_or_else(overflow)?;
            let ql = self.q.checked_pow(l).ok_or_else(overflow)?;
            rows.push(DensityRow { period, density: Ratio::new(pl - ql, pl) });
        }
        Ok(PeriodicStructure { rows })
    }

    /// `T(w)` is periodic iff its length-`p` prefix is `d`-periodic.
    pub fn is_periodic(&self) -> bool {
        let prefix = self.expand(self.p as usize);
        is_d_periodic(&prefix, self.d as usize)
    }

    pub fn sequence(&self) -> Sequence {
        Sequence::toeplitz(self)
    }
}

/// `true` when `w[i] == w[i + d]` throughout.
pub fn is_d_periodic(w: &[u8], d: usize) -> bool {
    d > 0 && w.iter().zip(w.iter().skip(d)).all(|(a, b)| a == b)
}

/// Closed-form amorphic complexity `log(p/d) / log(p/q)` of a non-periodic word.
pub fn predicted_ac(w: &ToeplitzWord) -> Result<f64> {
    if w.is_periodic() {
        return Err(Error::PeriodicWord);
    }
    let (p, q, d) = (w.p as f64, w.q as f64, w.d as f64);
    Ok((p / d).ln() / (p / q).ln())
}

/// `F_v(x)`: the periodic word `v v v ...` with its holes filled by `x` in order.
pub fn toeplitz_fill(v: &[u8], x: &Sequence) -> Sequence {
    assert!(v.contains(&HOLE) && v.iter().any(|&s| s != HOLE), "template needs a hole and a letter");
    let v = v.to_vec();
    let p = v.len() as u64;
    let q = v.iter().filter(|&&s| s == HOLE).count() as u64;
    let mut holes_before = Vec::with_capacity(v.len());
    let mut c = 0u64;
    for &s in &v {
        holes_before.push(c);
        c += (s == HOLE) as u64;
    }
    let inner = x.clone();
    let mut alphabet: Vec<u8> = v.iter().copied().filter(|&s| s != HOLE).chain(x.alphabet().iter().copied()).collect();
    alphabet.sort_unstable();
    alphabet.dedup();
    Sequence::from_fn(alphabet, move |k| {
        let r = (k % p) as usize;
        match v[r] {
            HOLE => inner.symbol_at((k / p) * q + holes_before[r]),
            s => s,
        }
    })
}

/// One level of a periodic structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityRow {
    pub period: u64,
    pub density: Ratio<u64>,
}

/// A divisibility chain of periods with their skeleton densities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicStructure {
    pub rows: Vec<DensityRow>,
}

impl PeriodicStructure {
    pub fn periods(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.period).collect()
    }

    pub fn densities(&self) -> Vec<Ratio<u64>> {
        self.rows.iter().map(|r| r.density).collect()
    }

    /// Divisibility, monotone densities and `D(p) <= 1 - 1/p`.
    pub fn is_consistent(&self) -> bool {
        let chain = self.rows.windows(2).all(|w| w[1].period % w[0].period == 0 && w[0].density <= w[1].density);
        let bounded = self.rows.iter().all(|r| r.density <= Ratio::new(r.period - 1, r.period));
        chain && bounded
    }
}

/// Residues `r < p` whose class `r, r+p, r+2p, ...` is constant on `[0, window)`.
///
/// This certifies membership in `Per(p, x)` only up to the window.
pub fn per_set(x: &Sequence, p: u64, window: u64) -> Vec<u64> {
    assert!(p >= 1);
    let data = x.window(0, window.max(p) as usize);
    (0..p)
        .filter(|&r| {
            let first = data[r as usize];
            data.iter().skip(r as usize).step_by(p as usize).all(|&s| s == first)
        })
        .collect()
}

/// Exact `Per(p_l, T(w)) ∩ [0, p_l)` read off the approximant `T_l`.
pub fn per_set_skeleton(w: &ToeplitzWord, level: u32) -> Vec<u64> {
    let period = w.skeleton_period(level).expect("period fits in u64");
    (0..period).filter(|&k| w.level_symbol(level, k) != HOLE).collect()
}

/// Given `Per(p,x) ⊆ Per(q,x)` (checked on the window), returns `gcd(p, q)`,
/// which carries the same periodic part.
pub fn gcd_reduce(p: u64, q: u64, x: &Sequence, window: u64) -> Result<u64> {
    let per_p = per_set(x, p, window);
    let per_q: BTreeSet<u64> = per_set(x, q, window).into_iter().collect();
    for &r in &per_p {
        let mut k = r;
        while k < window {
            if !per_q.contains(&(k % q)) {
                return Err(Error::InclusionViolated { p, q, residue: r, window });
            }
            k += p;
        }
    }
    Ok(p.gcd(&q))
}

/// Smallest `p'` whose periodic part coincides with that of `p` on the window.
pub fn essential_period(x: &Sequence, p: u64, window: u64) -> u64 {
    let target = expand_classes(&per_set(x, p, window), p, window);
    (1..=p)
        .find(|&c| expand_classes(&per_set(x, c, window), c, window) == target)
        .unwrap_or(p)
}

fn expand_classes(residues: &[u64], p: u64, window: u64) -> Vec<u64> {
    let mut out: Vec<u64> = residues.iter().flat_map(|&r| (r..window).step_by(p as usize)).collect();
    out.sort_unstable();
    out
}
