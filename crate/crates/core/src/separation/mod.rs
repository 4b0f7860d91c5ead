//! Separation counts, separation frequencies and the pair-frequency matrix.

mod engine;
pub mod oracle;
mod sets;

use std::io::{Read, Write};

pub use engine::{first_hit_times, pair_frequencies, pair_frequencies_multi, FirstHits, BLOCK};
pub use sets::{
    exact_max_separated, exact_min_spanning, is_separated_set, max_separated_set, min_spanning_set,
    restricted_sep, Restricted, EXACT_CAP,
};

use crate::error::{Error, Result};
use crate::format::g12;
use crate::systems::{Point, System};

/// Finite-horizon surrogate for the limsup in the separation frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Maximum of `S_n / n` over 16 geometric checkpoints in `[T/4, T]`.
    SuffixMax,
    /// `S_T / T`.
    Terminal,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::SuffixMax => "suffix_max",
            Mode::Terminal => "terminal",
        }
    }
}

/// Checkpoint times `n` at which `S_n / n` is read.
pub fn checkpoints(horizon: u64, mode: Mode) -> Vec<u64> {
    assert!(horizon >= 1);
    match mode {
        Mode::Terminal => vec![horizon],
        Mode::SuffixMax => {
            let base = horizon as f64 / 4.0;
            let mut out: Vec<u64> = (0..16)
                .map(|r| ((base * 4f64.powf(r as f64 / 15.0)).round() as u64).clamp(1, horizon))
                .collect();
            out.push(horizon);
            out.sort_unstable();
            out.dedup();
            out
        }
    }
}

/// `#{0 <= k < n : d(f^k x, f^k y) >= delta}`.
pub fn sep_count(sys: &System, delta: f64, x: &Point, y: &Point, n: u64) -> u64 {
    counts_at(sys, delta, x, y, &[n])[0]
}

fn counts_at(sys: &System, delta: f64, x: &Point, y: &Point, at: &[u64]) -> Vec<u64> {
    let (mut sx, mut sy) = (sys.init(x), sys.init(y));
    let d = sys.dimension();
    let (mut fx, mut fy) = (vec![0u64; d], vec![0u64; d]);
    let mut out = Vec::with_capacity(at.len());
    let (mut count, mut k) = (0u64, 0u64);
    for &n in at {
        while k < n {
            sys.features(&sx, &mut fx);
            sys.features(&sy, &mut fy);
            count += sys.separated(&fx, &fy, delta) as u64;
            sys.advance(&mut sx);
            sys.advance(&mut sy);
            k += 1;
        }
        out.push(count);
    }
    out
}

/// Separation frequency of one pair over the horizon.
pub fn sep_frequency(sys: &System, delta: f64, x: &Point, y: &Point, horizon: u64, mode: Mode) -> f64 {
    let cps = checkpoints(horizon, mode);
    counts_at(sys, delta, x, y, &cps)
        .iter()
        .zip(&cps)
        .map(|(&c, &n)| c as f64 / n as f64)
        .fold(0.0, f64::max)
}

/// A symmetric matrix of pair frequencies with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyMatrix {
    n: usize,
    data: Vec<f64>,
}

impl FrequencyMatrix {
    pub fn zeros(n: usize) -> FrequencyMatrix {
        FrequencyMatrix { n, data: vec![0.0; n * n] }
    }

    /// Builds from a symmetric function of index pairs.
    pub fn from_fn<F: Fn(usize, usize) -> f64>(n: usize, f: F) -> FrequencyMatrix {
        let mut m = FrequencyMatrix::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        if i != j {
            self.data[i * self.n + j] = v;
            self.data[j * self.n + i] = v;
        }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// The principal submatrix on `idx`.
    pub fn submatrix(&self, idx: &[usize]) -> FrequencyMatrix {
        FrequencyMatrix::from_fn(idx.len(), |a, b| self.get(idx[a], idx[b]))
    }

    pub(crate) fn from_raw(n: usize, data: Vec<f64>) -> FrequencyMatrix {
        debug_assert_eq!(data.len(), n * n);
        FrequencyMatrix { n, data }
    }

    pub fn is_valid(&self) -> bool {
        (0..self.n).all(|i| {
            self.get(i, i) == 0.0
                && (0..self.n).all(|j| {
                    let v = self.get(i, j);
                    v == self.get(j, i) && (0.0..=1.0).contains(&v)
                })
        })
    }
}

/// Pair frequencies of a sample at one `delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationRecord {
    pub delta: f64,
    pub horizon: u64,
    pub mode: Mode,
    pub frequencies: FrequencyMatrix,
}

impl SeparationRecord {
    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    pub fn frequency(&self, i: usize, j: usize) -> f64 {
        self.frequencies.get(i, j)
    }

    /// Writes `i,j,delta,frequency` for `i < j`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["i", "j", "delta", "frequency"])?;
        let delta = g12(self.delta);
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                w.write_record([i.to_string(), j.to_string(), delta.clone(), g12(self.frequency(i, j))])?;
            }
        }
        w.flush().map_err(|e| Error::Csv(e.to_string()))?;
        Ok(())
    }

    /// Reloads a matrix written by [`SeparationRecord::write_csv`]. The sample
    /// size is one more than the largest index seen.
    pub fn read_csv<R: Read>(input: R, horizon: u64, mode: Mode) -> Result<SeparationRecord> {
        let mut r = csv::Reader::from_reader(input);
        let mut rows = Vec::new();
        let mut delta = None;
        for rec in r.records() {
            let rec = rec?;
            let field = |k: usize| rec.get(k).ok_or_else(|| Error::Csv(format!("missing column {k}")));
            let parse_err = |e: &dyn std::fmt::Display| Error::Csv(e.to_string());
            let i: usize = field(0)?.parse().map_err(|e| parse_err(&e))?;
            let j: usize = field(1)?.parse().map_err(|e| parse_err(&e))?;
            let d: f64 = field(2)?.parse().map_err(|e| parse_err(&e))?;
            let f: f64 = field(3)?.parse().map_err(|e| parse_err(&e))?;
            if delta.is_some_and(|old| old != d) {
                return Err(Error::Csv("mixed delta values in one matrix".into()));
            }
            delta = Some(d);
            rows.push((i, j, f));
        }
        let n = rows.iter().map(|&(i, j, _)| i.max(j) + 1).max().unwrap_or(0);
        let mut m = FrequencyMatrix::zeros(n);
        for (i, j, f) in rows {
            m.set(i, j, f);
        }
        Ok(SeparationRecord { delta: delta.unwrap_or(f64::NAN), horizon, mode, frequencies: m })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::Point;

    #[test]
    fn checkpoint_grid() {
        let cps = checkpoints(1000, Mode::SuffixMax);
        assert_eq!(cps.first(), Some(&250));
        assert_eq!(cps.last(), Some(&1000));
        assert_eq!(cps.len(), 16);
        assert!(cps.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(checkpoints(1000, Mode::Terminal), vec![1000]);
        assert!(checkpoints(64, Mode::SuffixMax).len() <= 16);
    }

    #[test]
    fn rotation_count() {
        let sys = System::parse("rotation:alpha=1/3").unwrap();
        assert_eq!(sep_count(&sys, 0.3, &Point::circle(0.0), &Point::circle(0.4), 10), 10);
    }

    #[test]
    fn equal_points_never_separate() {
        for spec in ["doubling", "torus_shear", "pinched:alpha=3", "denjoy"] {
            let sys = System::parse(spec).unwrap();
            let p = crate::sampling::OrbitSample::build(&sys, 2, 10, 1).points[1].clone();
            assert_eq!(sep_count(&sys, 0.01, &p, &p, 100), 0, "{spec}");
            assert_eq!(sep_frequency(&sys, 0.01, &p, &p, 100, Mode::SuffixMax), 0.0);
        }
    }

    #[test]
    fn doubling_third() {
        let sys = System::parse("doubling").unwrap();
        let third = Point(vec![crate::systems::Coord::Circle(crate::real::Phase::from_ratio(
            &1u32.into(),
            &3u32.into(),
        ))]);
        assert_eq!(sep_count(&sys, 0.25, &Point::circle(0.0), &third, 4), 4);
    }

    #[test]
    fn isometry_frequency_is_one() {
        let sys = System::parse("rotation:alpha=golden").unwrap();
        let f = sep_frequency(&sys, 0.2, &Point::circle(0.1), &Point::circle(0.4), 1000, Mode::SuffixMax);
        assert_eq!(f, 1.0);
    }

    #[test]
    fn monotone_in_n_and_delta() {
        let sys = System::parse("doubling").unwrap();
        let (x, y) = (Point::circle(0.1234), Point::circle(0.5678));
        let counts = counts_at(&sys, 0.2, &x, &y, &[10, 20, 40, 80]);
        assert!(counts.windows(2).all(|w| w[0] <= w[1]));
        let coarse = sep_count(&sys, 0.3, &x, &y, 80);
        assert!(coarse <= counts[3]);
    }

    #[test]
    fn csv_round_trip() {
        let m = FrequencyMatrix::from_fn(4, |i, j| (i + j) as f64 / 8.0);
        let rec = SeparationRecord { delta: 0.25, horizon: 100, mode: Mode::SuffixMax, frequencies: m };
        let mut buf = Vec::new();
        rec.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("i,j,delta,frequency\n0,1,0.25,0.125\n"));
        let back = SeparationRecord::read_csv(buf.as_slice(), 100, Mode::SuffixMax).unwrap();
        assert_eq!(back, rec);
    }
}
