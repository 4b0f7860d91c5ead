//! `(delta, nu)` sweeps of separation numbers and their scaling exponents.

mod fit;
mod probes;

use std::io::{Read, Write};

pub use fit::{fit_exponent, least_squares, DeltaFit, Flags, ScalingEstimate, BOUNDED_SLOPE, GROWTH_THRESHOLD, LOCAL_WINDOW};
pub use probes::{
    power_entropy_est, product_check, power_check, saturation_probe, toeplitz_bound_check, BoundCheck,
    PowerEntropy, ProductCheck, PowerCheck, SaturationProbe,
};

use crate::error::{Error, Result};
use crate::format::g12;
use crate::sampling::{OrbitSample, Plan};
use crate::separation::{max_separated_set, min_spanning_set, pair_frequencies_multi, Mode};
use crate::systems::System;

/// Default pair-step budget of one sweep.
pub const DEFAULT_BUDGET_CELLS: u128 = 1_000_000_000_000;

/// Fewest `nu` values a plan may carry.
pub const MIN_NUS: usize = 4;

/// `2^-a, ..., 2^-b`.
pub fn dyadic_grid(a: i32, b: i32) -> Vec<f64> {
    (a..=b).map(|k| 2f64.powi(-k)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    /// Strictly descending.
    pub deltas: Vec<f64>,
    /// Strictly descending.
    pub nus: Vec<f64>,
    /// Sample sizes, strictly ascending.
    pub samples: Vec<usize>,
    pub horizon: u64,
    pub seed: u64,
    pub mode: Mode,
    pub plan: Plan,
}

impl SweepPlan {
    /// Default grids: `delta = 1` for symbolic systems and `2^-1..2^-5`
    /// otherwise, `nu = 2^-1..2^-12`.
    pub fn default_for(sys: &System, samples: Vec<usize>, horizon: u64, seed: u64) -> SweepPlan {
        let deltas = if sys.spec().is_symbolic() { vec![1.0] } else { dyadic_grid(1, 5) };
        SweepPlan { deltas, nus: dyadic_grid(1, 12), samples, horizon, seed, mode: Mode::SuffixMax, plan: Plan::Standard }
    }

    pub fn validate(&self) -> Result<()> {
        let descending = |v: &[f64]| v.windows(2).all(|w| w[0] > w[1]);
        if self.deltas.is_empty() || !descending(&self.deltas) || self.deltas.iter().any(|d| !(*d > 0.0)) {
            return Err(Error::Plan("delta grid must be positive and strictly descending".into()));
        }
        if self.nus.len() < MIN_NUS || !descending(&self.nus) || self.nus.iter().any(|n| !(*n > 0.0 && *n <= 1.0)) {
            return Err(Error::Plan(format!("nu grid needs at least {MIN_NUS} strictly descending values in (0,1]")));
        }
        if self.samples.is_empty() || self.samples.windows(2).any(|w| w[0] >= w[1]) || self.samples[0] < 2 {
            return Err(Error::Plan("sample sizes must be at least 2 and strictly ascending".into()));
        }
        if self.horizon == 0 {
            return Err(Error::Plan("horizon must be positive".into()));
        }
        Ok(())
    }

    /// Pair-steps the sweep will evaluate: `sum_M M^2 T |deltas|`.
    pub fn cells(&self) -> u128 {
        self.samples.iter().map(|&m| (m as u128).pow(2) * self.horizon as u128 * self.deltas.len() as u128).sum()
    }

    pub fn check_budget(&self, cap: u128) -> Result<()> {
        let cells = self.cells();
        if cells > cap {
            Err(Error::Budget { cells, cap })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub system: String,
    pub delta: f64,
    pub nu: f64,
    pub m: usize,
    pub horizon: u64,
    pub sep_est: usize,
    pub span_est: usize,
    /// Censored (`sep_est = M`) or still growing by more than 10% since the
    /// previous sample size.
    pub saturated: bool,
}

/// Runs the plan. Rows are ordered by delta (plan order), then `M`
/// ascending, then `nu` (plan order).
pub fn sweep(sys: &System, plan: &SweepPlan, budget: u128) -> Result<Vec<SweepRow>> {
    sweep_with(&sys.spec().to_string(), plan, budget, |m| OrbitSample::build_with(sys, m, plan.horizon, plan.seed, plan.plan))
}

/// [`sweep`] over caller-built samples; `build(M)` should return about `M` points.
/// The `M` column reports the actual sample length.
pub fn sweep_with<F: Fn(usize) -> OrbitSample>(name: &str, plan: &SweepPlan, budget: u128, build: F) -> Result<Vec<SweepRow>> {
    plan.validate()?;
    plan.check_budget(budget)?;
    let name = name.to_string();
    let mut sizes = Vec::with_capacity(plan.samples.len());
    // counts[m][d][n] = (sep, span)
    let mut counts = Vec::with_capacity(plan.samples.len());
    for &m in &plan.samples {
        let sample = build(m);
        let m = sample.len();
        sizes.push(m);
        let recs = pair_frequencies_multi(&sample, &plan.deltas, plan.mode);
        counts.push(
            recs.iter()
                .map(|rec| {
                    plan.nus
                        .iter()
                        .map(|&nu| {
                            (max_separated_set(&rec.frequencies, nu).len(), min_spanning_set(&rec.frequencies, nu).len())
                        })
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>(),
        );
    }
    let mut rows = Vec::new();
    for (d, &delta) in plan.deltas.iter().enumerate() {
        for (k, &m) in sizes.iter().enumerate() {
            for (n, &nu) in plan.nus.iter().enumerate() {
                let (sep, span) = counts[k][d][n];
                let growing = k > 0 && sep as f64 > (1.0 + GROWTH_THRESHOLD) * counts[k - 1][d][n].0 as f64;
                rows.push(SweepRow {
                    system: name.clone(),
                    delta,
                    nu,
                    m,
                    horizon: plan.horizon,
                    sep_est: sep,
                    span_est: span,
                    saturated: sep >= m || growing,
                });
            }
        }
    }
    Ok(rows)
}

pub const CSV_HEADER: [&str; 8] = ["system", "delta", "nu", "M", "T", "sep_est", "span_est", "saturated"];

pub fn write_rows_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.system.clone(),
            g12(r.delta),
            g12(r.nu),
            r.m.to_string(),
            r.horizon.to_string(),
            r.sep_est.to_string(),
            r.span_est.to_string(),
            (r.saturated as u8).to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::Csv(e.to_string()))
}

/// Reads rows written by [`write_rows_csv`]; lines starting with `#` are skipped.
pub fn read_rows_csv<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(Error::Csv(format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    let bad = |field: &str, v: &str| Error::Csv(format!("bad {field} `{v}`"));
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let f = |k: usize| rec.get(k).unwrap_or("");
        rows.push(SweepRow {
            system: f(0).to_string(),
            delta: f(1).parse().map_err(|_| bad("delta", f(1)))?,
            nu: f(2).parse().map_err(|_| bad("nu", f(2)))?,
            m: f(3).parse().map_err(|_| bad("M", f(3)))?,
            horizon: f(4).parse().map_err(|_| bad("T", f(4)))?,
            sep_est: f(5).parse().map_err(|_| bad("sep_est", f(5)))?,
            span_est: f(6).parse().map_err(|_| bad("span_est", f(6)))?,
            saturated: match f(7) {
                "0" => false,
                "1" => true,
                v => return Err(bad("saturated", v)),
            },
        });
    }
    Ok(rows)
}
