//! Least-squares scaling exponents of `log Sep` against `-log nu`.

use super::SweepRow;
use crate::error::{Error, Result};

/// Per-step growth above which a sample-size doubling counts as unsaturated.
pub const GROWTH_THRESHOLD: f64 = 0.10;

/// Slopes up to this value count as a bounded (zero-exponent) regime.
pub const BOUNDED_SLOPE: f64 = 0.05;

/// Width of the sliding windows used for the lower and upper exponents.
pub const LOCAL_WINDOW: usize = 4;

/// Ordinary least squares `y = a + b x`; returns `(b, a, R^2)`.
pub fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    assert_eq!(x.len(), y.len());
    assert!(x.len() >= 2);
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let intercept = my - slope * mx;
    let ss_tot: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let r2 = if ss_tot <= 1e-300 { 1.0 } else { 1.0 - ss_res / ss_tot };
    (slope, intercept, r2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaFit {
    pub delta: f64,
    pub sample_size: usize,
    /// `None` when fewer than four usable cells remain.
    pub slope: Option<f64>,
    pub intercept: f64,
    pub r2: f64,
    /// `nu` values of the fitted window, descending.
    pub window: Vec<f64>,
    /// Slopes between adjacent cells of the window.
    pub local_slopes: Vec<f64>,
    /// Smallest and largest slope over sliding four-point windows.
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    /// Slope of the last four-point window (smallest `nu`).
    pub tail: Option<f64>,
    /// `nu` values dropped for breaking monotonicity by more than one.
    pub dropped: Vec<f64>,
    pub saturated_cells: usize,
    pub cells: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Flags {
    pub bounded: bool,
    pub saturated_by_sample: bool,
    pub infinite_suspected: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingEstimate {
    pub per_delta: Vec<DeltaFit>,
    /// Maximum per-delta slope.
    pub slope: Option<f64>,
    /// R^2 of the fit attaining `slope`.
    pub r2: Option<f64>,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    /// Maximum per-delta tail slope.
    pub tail: Option<f64>,
    pub flags: Flags,
}

impl ScalingEstimate {
    pub fn summary_lines(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map_or("none".to_string(), |s| format!("{s:.4}"));
        let mut out = Vec::new();
        for f in &self.per_delta {
            out.push(format!(
                "delta={} M={} slope={} r2={:.4} lower={} upper={} tail={} window={} dropped={} saturated={}/{}",
                crate::format::g12(f.delta),
                f.sample_size,
                opt(f.slope),
                f.r2,
                opt(f.lower),
                opt(f.upper),
                opt(f.tail),
                f.window.len(),
                f.dropped.len(),
                f.saturated_cells,
                f.cells
            ));
        }
        out.push(format!(
            "slope={} r2={} lower={} upper={} tail={} bounded={} saturated_by_sample={} infinite_suspected={}",
            opt(self.slope),
            opt(self.r2),
            opt(self.lower),
            opt(self.upper),
            opt(self.tail),
            self.flags.bounded as u8,
            self.flags.saturated_by_sample as u8,
            self.flags.infinite_suspected as u8
        ));
        out
    }
}

/// Fits one group of cells (same delta and sample size).
fn fit_group(delta: f64, mut cells: Vec<&SweepRow>) -> DeltaFit {
    cells.sort_by(|a, b| b.nu.total_cmp(&a.nu));
    let mut dropped = Vec::new();
    let mut usable = Vec::with_capacity(cells.len());
    let mut running_max = 0usize;
    for c in &cells {
        let violates = c.sep_est + 1 < running_max;
        if violates {
            dropped.push(c.nu);
        }
        running_max = running_max.max(c.sep_est);
        usable.push(!violates && !c.saturated && c.sep_est >= 1);
    }
    // longest contiguous run of usable cells, earliest on ties
    let (mut best, mut start) = ((0usize, 0usize), None);
    for (k, &u) in usable.iter().chain(std::iter::once(&false)).enumerate() {
        match (u, start) {
            (true, None) => start = Some(k),
            (false, Some(s)) => {
                if k - s > best.1 - best.0 {
                    best = (s, k);
                }
                start = None;
            }
            _ => {}
        }
    }
    let window: Vec<&SweepRow> = cells[best.0..best.1].to_vec();
    let xs: Vec<f64> = window.iter().map(|c| -c.nu.ln()).collect();
    let ys: Vec<f64> = window.iter().map(|c| (c.sep_est as f64).ln()).collect();
    let mut fit = DeltaFit {
        delta,
        sample_size: cells.first().map_or(0, |c| c.m),
        slope: None,
        intercept: 0.0,
        r2: 0.0,
        window: window.iter().map(|c| c.nu).collect(),
        local_slopes: xs.windows(2).zip(ys.windows(2)).map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0])).collect(),
        lower: None,
        upper: None,
        tail: None,
        dropped,
        saturated_cells: cells.iter().filter(|c| c.saturated).count(),
        cells: cells.len(),
    };
    if window.len() >= LOCAL_WINDOW {
        let (b, a, r2) = least_squares(&xs, &ys);
        fit.slope = Some(b);
        fit.intercept = a;
        fit.r2 = r2;
        let sliding: Vec<f64> = (0..=xs.len() - LOCAL_WINDOW)
            .map(|s| least_squares(&xs[s..s + LOCAL_WINDOW], &ys[s..s + LOCAL_WINDOW]).0)
            .collect();
        fit.lower = sliding.iter().copied().reduce(f64::min);
        fit.upper = sliding.iter().copied().reduce(f64::max);
        fit.tail = sliding.last().copied();
    }
    fit
}

/// Scaling estimate from sweep rows; each delta uses its largest sample size.
pub fn fit_exponent(rows: &[SweepRow]) -> Result<ScalingEstimate> {
    if rows.is_empty() {
        return Err(Error::Fit("no rows".into()));
    }
    let mut deltas: Vec<f64> = rows.iter().map(|r| r.delta).collect();
    deltas.sort_by(|a, b| b.total_cmp(a));
    deltas.dedup();
    let mut per_delta = Vec::new();
    for &d in &deltas {
        let m = rows.iter().filter(|r| r.delta == d).map(|r| r.m).max().expect("non-empty group");
        per_delta.push(fit_group(d, rows.iter().filter(|r| r.delta == d && r.m == m).collect()));
    }
    let best = per_delta
        .iter()
        .filter(|f| f.slope.is_some())
        .max_by(|a, b| a.slope.unwrap().total_cmp(&b.slope.unwrap()));
    let max_of = |get: fn(&DeltaFit) -> Option<f64>| per_delta.iter().filter_map(get).reduce(f64::max);
    let slope = best.and_then(|f| f.slope);
    let flags = Flags {
        bounded: slope.is_some_and(|s| s <= BOUNDED_SLOPE),
        saturated_by_sample: per_delta.iter().any(|f| f.saturated_cells > 0),
        infinite_suspected: per_delta.iter().any(|f| f.cells > 0 && f.saturated_cells == f.cells),
    };
    Ok(ScalingEstimate {
        slope,
        r2: best.map(|f| f.r2),
        lower: max_of(|f| f.lower),
        upper: max_of(|f| f.upper),
        tail: max_of(|f| f.tail),
        per_delta,
        flags,
    })
}
