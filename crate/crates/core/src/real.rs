//! Fixed-point circle coordinates and parameter literals.
//!
//! Rotation numbers are kept as 128-bit fractions of a turn so that orbits
//! of length 10^6 and beyond accumulate no rounding drift: adding two phases
//! is exact arithmetic modulo one.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;

use crate::error::{Error, Result};

const TWO_POW_128: f64 = 340_282_366_920_938_463_463_374_607_431_768_211_456.0;

/// A point of the circle `R/Z` stored as `x * 2^128`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Phase(pub u128);

impl Phase {
    pub const ZERO: Phase = Phase(0);

    /// Reduces `x` into `[0,1)` and converts it. Exact for dyadic inputs.
    pub fn from_f64(x: f64) -> Phase {
        let r = wrap_unit(x);
        // r < 1, so the product is below 2^128 unless rounding pushes it up
        let scaled = r * TWO_POW_128;
        if scaled >= TWO_POW_128 {
            Phase(u128::MAX)
        } else {
            Phase(scaled as u128)
        }
    }

    /// `floor(frac(num/den) * 2^128)`.
    pub fn from_ratio(num: &BigUint, den: &BigUint) -> Phase {
        let r = num.mod_floor(den);
        let scaled: BigUint = (r << 128u32) / den;
        Phase(biguint_to_u128(&scaled))
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / TWO_POW_128
    }

    #[inline]
    pub fn add(self, other: Phase) -> Phase {
        Phase(self.0.wrapping_add(other.0))
    }

    #[inline]
    pub fn sub(self, other: Phase) -> Phase {
        Phase(self.0.wrapping_sub(other.0))
    }

    #[inline]
    pub fn neg(self) -> Phase {
        Phase(self.0.wrapping_neg())
    }

    /// `k * self` modulo one.
    #[inline]
    pub fn mul(self, k: u64) -> Phase {
        Phase(self.0.wrapping_mul(k as u128))
    }

    /// Signed multiple, `k * self` modulo one.
    pub fn mul_signed(self, k: i64) -> Phase {
        let p = self.mul(k.unsigned_abs());
        if k < 0 {
            p.neg()
        } else {
            p
        }
    }

    /// Arc distance `min(|x-y|, 1-|x-y|)`, computed exactly before rounding.
    #[inline]
    pub fn arc(self, other: Phase) -> f64 {
        let d = self.0.wrapping_sub(other.0);
        d.min(d.wrapping_neg()) as f64 / TWO_POW_128
    }
}

/// Reduces onto `[0,1)` by truncating division, then shifting negatives up.
pub fn wrap_unit(x: f64) -> f64 {
    let mut r = x % 1.0;
    if r < 0.0 {
        r += 1.0;
    }
    if r >= 1.0 {
        r = 0.0;
    }
    r
}

/// Arc distance on `R/Z` for floating coordinates.
#[inline]
pub fn circle_dist(x: f64, y: f64) -> f64 {
    let d = (x - y).abs() % 1.0;
    d.min(1.0 - d)
}

fn biguint_to_u128(v: &BigUint) -> u128 {
    let digits = v.to_u64_digits();
    let lo = digits.first().copied().unwrap_or(0) as u128;
    let hi = digits.get(1).copied().unwrap_or(0) as u128;
    lo | (hi << 64)
}

/// A real parameter: a working-precision float together with the exact
/// 128-bit phase of its fractional part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real {
    pub value: f64,
    pub phase: Phase,
    /// Exact `(numerator, denominator)` when the literal was rational and
    /// small enough to fit.
    pub ratio: Option<(i64, u64)>,
}

impl Real {
    pub fn from_f64(value: f64) -> Real {
        Real { value, phase: Phase::from_f64(value), ratio: None }
    }

    /// `(sqrt(5) - 1) / 2` to 128 fractional bits.
    pub fn golden() -> Real {
        let five_shifted = BigUint::from(5u32) << 256u32;
        let root = five_shifted.sqrt();
        let one = BigUint::from(1u32) << 128u32;
        let frac: BigUint = (root - one) >> 1u32;
        let phase = Phase(biguint_to_u128(&frac));
        Real { value: (5f64.sqrt() - 1.0) / 2.0, phase, ratio: None }
    }

    /// Parses a decimal literal (`-0.25`, `3`, `0.6180339887`), a fraction
    /// (`1/3`) or the keyword `golden`.
    pub fn parse(text: &str) -> Result<Real> {
        let err = |msg: &str| Error::Syntax { pos: 0, msg: format!("{msg}: `{text}`") };
        let t = text.trim();
        if t == "golden" {
            return Ok(Real::golden());
        }
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        if body.is_empty() {
            return Err(err("empty number"));
        }
        let (num, den) = if let Some((a, b)) = body.split_once('/') {
            let a = parse_digits(a).ok_or_else(|| err("bad numerator"))?;
            let b = parse_digits(b).ok_or_else(|| err("bad denominator"))?;
            if b == BigUint::from(0u32) {
                return Err(err("zero denominator"));
            }
            (a, b)
        } else {
            let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
            if int_part.is_empty() && frac_part.is_empty() {
                return Err(err("empty number"));
            }
            let int_ok = int_part.is_empty() || int_part.bytes().all(|b| b.is_ascii_digit());
            let frac_ok = frac_part.bytes().all(|b| b.is_ascii_digit());
            if !int_ok || !frac_ok {
                return Err(err("not a decimal literal"));
            }
            let digits = format!("{int_part}{frac_part}");
            let num = parse_digits(&digits).ok_or_else(|| err("bad digits"))?;
            let den = BigUint::from(10u32).pow(frac_part.len() as u32);
            (num, den)
        };
        let g = num.gcd(&den);
        let (num, den) = (&num / &g, &den / &g);
        let value = ratio_to_f64(&num, &den);
        let mut phase = Phase::from_ratio(&num, &den);
        let mut value = value;
        if neg {
            value = -value;
            phase = phase.neg();
        }
        let ratio = match (i64::try_from(&num), u64::try_from(&den)) {
            (Ok(n), Ok(d)) => Some((if neg { -n } else { n }, d)),
            _ => None,
        };
        Ok(Real { value, phase, ratio })
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ratio {
            Some((n, 1)) => write!(f, "{n}"),
            Some((n, d)) => match terminating_decimal(n, d) {
                Some(s) => f.write_str(&s),
                None => write!(f, "{n}/{d}"),
            },
            None if self.phase == Real::golden().phase => f.write_str("golden"),
            None => write!(f, "{}", self.value),
        }
    }
}

/// Renders `n/d` as an exact decimal when `d` has no prime factors besides 2 and 5.
fn terminating_decimal(n: i64, d: u64) -> Option<String> {
    let (mut twos, mut fives, mut rest) = (0u32, 0u32, d);
    while rest % 2 == 0 {
        rest /= 2;
        twos += 1;
    }
    while rest % 5 == 0 {
        rest /= 5;
        fives += 1;
    }
    if rest != 1 {
        return None;
    }
    let places = twos.max(fives);
    let scale = 10u128.checked_pow(places)?;
    let scaled = (n.unsigned_abs() as u128).checked_mul(scale)? / d as u128;
    let digits = format!("{:0>width$}", scaled, width = places as usize + 1);
    let (int_part, frac_part) = digits.split_at(digits.len() - places as usize);
    let sign = if n < 0 { "-" } else { "" };
    Some(format!("{sign}{int_part}.{frac_part}"))
}

fn parse_digits(s: &str) -> Option<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigUint::parse_bytes(s.as_bytes(), 10)
}

fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    // scale so the quotient keeps 64 significant bits before rounding
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    let shift = 64 - (nb - db);
    let q: BigUint = if shift >= 0 {
        (num << shift as u32) / den
    } else {
        num / (den << (-shift) as u32)
    };
    let q = biguint_to_u128(&q) as f64;
    q * 2f64.powi(-(shift as i32))
}
