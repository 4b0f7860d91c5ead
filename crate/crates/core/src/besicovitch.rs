//! Besicovitch pseudo-metrics on sequence space and box-counting dimension.
//!
//! `d_delta(x, y)` with `delta = 2^-m` is the upper density of positions `k`
//! at which `x` and `y` differ somewhere in `[k, k+m]`, read through the same
//! checkpoint surrogate as the separation engine.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format::g12;
use crate::scaling::{least_squares, GROWTH_THRESHOLD, LOCAL_WINDOW};
use crate::separation::{checkpoints, max_separated_set, min_spanning_set, FrequencyMatrix, Mode};
use crate::symbolic::Sequence;

/// Shortest horizon accepted by the distance functions.
pub const MIN_HORIZON: u64 = 64;

/// A sequence read up to a fixed horizon.
#[derive(Debug, Clone)]
pub struct BesicovitchPoint {
    pub seq: Sequence,
    pub horizon: u64,
}

impl BesicovitchPoint {
    pub fn new(seq: Sequence, horizon: u64) -> BesicovitchPoint {
        BesicovitchPoint { seq, horizon }
    }

    pub fn distance(&self, other: &BesicovitchPoint, delta: f64) -> Result<f64> {
        besicovitch_distance(&self.seq, &other.seq, delta, self.horizon.min(other.horizon))
    }
}

/// `m` with `delta = 2^-m`.
pub fn dyadic_depth(delta: f64) -> Result<u32> {
    let domain = |msg: &str| Error::Domain { name: "delta".into(), msg: msg.into() };
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(domain("must lie in (0, 1]"));
    }
    let m = (-delta.log2()).round();
    if m > 62.0 || 2f64.powi(-(m as i32)) != delta {
        return Err(domain("must be a power 2^-m"));
    }
    Ok(m as u32)
}

fn check_horizon(horizon: u64) -> Result<()> {
    if horizon < MIN_HORIZON {
        Err(Error::Domain { name: "horizon".into(), msg: format!("must be at least {MIN_HORIZON}") })
    } else {
        Ok(())
    }
}

/// Suffix-max distance between two sequences.
pub fn besicovitch_distance(x: &Sequence, y: &Sequence, delta: f64, horizon: u64) -> Result<f64> {
    let m = dyadic_depth(delta)?;
    check_horizon(horizon)?;
    let len = horizon as usize + m as usize;
    let cps = checkpoints(horizon, Mode::SuffixMax);
    Ok(windowed_frequency(&x.window(0, len), &y.window(0, len), m as usize, horizon, &cps))
}

fn windowed_frequency(a: &[u8], b: &[u8], m: usize, horizon: u64, cps: &[u64]) -> f64 {
    let mut last: Option<usize> = (0..m).rev().find(|&j| a[j] != b[j]);
    let mut count = 0u64;
    let mut best = 0f64;
    let mut cp = cps.iter().peekable();
    for k in 0..horizon as usize {
        if a[k + m] != b[k + m] {
            last = Some(k + m);
        }
        count += last.is_some_and(|j| j >= k) as u64;
        while cp.peek().is_some_and(|&&n| n == k as u64 + 1) {
            best = best.max(count as f64 / (k + 1) as f64);
            cp.next();
        }
    }
    best
}

/// `sigma^0 x, ..., sigma^(count-1) x`.
pub fn orbit_points(seq: &Sequence, count: usize) -> Vec<Sequence> {
    (0..count as u64).map(|s| seq.shift(s)).collect()
}

/// All pairwise distances, computed row-parallel.
pub fn distance_matrix(points: &[Sequence], delta: f64, horizon: u64, mode: Mode) -> Result<FrequencyMatrix> {
    let m = dyadic_depth(delta)? as usize;
    check_horizon(horizon)?;
    let len = horizon as usize + m;
    let cps = checkpoints(horizon, mode);
    let windows: Vec<Vec<u8>> = points.iter().map(|p| p.window(0, len)).collect();
    let rows: Vec<Vec<f64>> = (0..points.len())
        .into_par_iter()
        .map(|i| (i + 1..points.len()).map(|j| windowed_frequency(&windows[i], &windows[j], m, horizon, &cps)).collect())
        .collect();
    let mut out = FrequencyMatrix::zeros(points.len());
    for (i, row) in rows.iter().enumerate() {
        for (k, &v) in row.iter().enumerate() {
            out.set(i, i + 1 + k, v);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxMode {
    /// Greedy `eps`-separated set (`d >= eps`).
    Packing,
    /// Greedy cover by balls `d < eps`.
    Covering,
}

/// Greedy packing or covering count of a finite metric space at one scale.
pub fn box_count(dist: &FrequencyMatrix, eps: f64, mode: BoxMode) -> usize {
    match mode {
        BoxMode::Packing => max_separated_set(dist, eps).len(),
        BoxMode::Covering => min_spanning_set(dist, eps).len(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxDimension {
    pub eps: Vec<f64>,
    pub counts: Vec<usize>,
    /// Slope of `log count` against `-log eps`.
    pub slope: f64,
    pub r2: f64,
    /// Extremes of the slopes over sliding four-point windows.
    pub lower: f64,
    pub upper: f64,
}

pub fn box_dimension(dist: &FrequencyMatrix, eps_grid: &[f64], mode: BoxMode) -> Result<BoxDimension> {
    if eps_grid.len() < LOCAL_WINDOW || eps_grid.windows(2).any(|w| w[0] <= w[1]) || eps_grid.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::Plan(format!("eps grid needs at least {LOCAL_WINDOW} positive descending values")));
    }
    let counts: Vec<usize> = eps_grid.iter().map(|&e| box_count(dist, e, mode)).collect();
    let xs: Vec<f64> = eps_grid.iter().map(|e| -e.ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|&c| (c.max(1) as f64).ln()).collect();
    let (slope, _, r2) = least_squares(&xs, &ys);
    let sliding: Vec<f64> = (0..=xs.len() - LOCAL_WINDOW)
        .map(|s| least_squares(&xs[s..s + LOCAL_WINDOW], &ys[s..s + LOCAL_WINDOW]).0)
        .collect();
    Ok(BoxDimension {
        eps: eps_grid.to_vec(),
        counts,
        slope,
        r2,
        lower: sliding.iter().copied().fold(f64::INFINITY, f64::min),
        upper: sliding.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundednessProbe {
    pub samples: Vec<usize>,
    pub counts: Vec<usize>,
    pub growth: Vec<f64>,
    /// The last sample-size step still grew by more than 10%.
    pub not_totally_bounded: bool,
}

/// Packing counts under `d_1` of growing orbit samples of `seq`.
pub fn total_boundedness_probe(seq: &Sequence, eps: f64, samples: &[usize], horizon: u64) -> Result<BoundednessProbe> {
    if samples.len() < 3 || samples.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Plan("probe needs at least 3 strictly ascending sample sizes".into()));
    }
    let mut counts = Vec::with_capacity(samples.len());
    for &m in samples {
        let dist = distance_matrix(&orbit_points(seq, m), 1.0, horizon, Mode::SuffixMax)?;
        counts.push(box_count(&dist, eps, BoxMode::Packing));
    }
    let growth: Vec<f64> = counts.windows(2).map(|w| w[1] as f64 / w[0].max(1) as f64 - 1.0).collect();
    let not_totally_bounded = growth.last().is_some_and(|&g| g > GROWTH_THRESHOLD);
    Ok(BoundednessProbe { samples: samples.to_vec(), counts, growth, not_totally_bounded })
}

/// Writes `i,j,delta,frequency,metric` for `i < j`.
pub fn write_csv<W: Write>(dist: &FrequencyMatrix, delta: f64, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["i", "j", "delta", "frequency", "metric"])?;
    let d = g12(delta);
    let metric = format!("besicovitch:{d}");
    for i in 0..dist.len() {
        for j in i + 1..dist.len() {
            w.write_record([i.to_string(), j.to_string(), d.clone(), g12(dist.get(i, j)), metric.clone()])?;
        }
    }
    w.flush().map_err(|e| Error::Csv(e.to_string()))
}
