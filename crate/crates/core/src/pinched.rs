//! Pinched skew products `f(theta, x) = (theta + omega, tanh(alpha x) (sin(pi theta) + eps))`:
//! iterated boundary lines, the Lyapunov exponent of the zero line, the peak
//! census and the SNA test.

use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format::g12;
use crate::real::Phase;
use crate::sampling::OrbitSample;
use crate::scaling::{fit_exponent, least_squares, sweep_with, ScalingEstimate, SweepPlan, SweepRow};
use crate::systems::{LeafMap, PinchedParams, Point, System};

/// Smallest boundary-line grid.
pub const MIN_GRID: usize = 1024;

/// `sqrt(2) - 1`.
const GRID_OFFSET: f64 = 0.414_213_562_373_095_1;

/// Default clip for `log |df/dx|` on the zero line.
pub const LYAPUNOV_FLOOR: f64 = -50.0;

/// Point `i` of the `g`-point grid, offset by an irrational fraction of a cell.
pub fn grid_theta(i: usize, g: usize) -> Phase {
    Phase::from_f64((i as f64 + GRID_OFFSET) / g as f64)
}

/// `tau_k = k omega`.
pub fn tau(params: &PinchedParams, k: u64) -> Phase {
    params.omega.mul(k)
}

/// `phi_n(theta)` for each `n` in `depths` (ascending), by forward iteration
/// `f_{theta - omega} o ... o f_{theta - n omega}(1)`.
pub fn phi_at(params: &PinchedParams, theta: Phase, depths: &[u32]) -> Vec<f64> {
    depths
        .iter()
        .map(|&n| {
            let mut base = theta.sub(params.omega.mul(n as u64));
            let mut x = 1.0;
            for _ in 0..n {
                x = params.fibre(base, x);
                base = base.add(params.omega);
            }
            x
        })
        .collect()
}

/// `phi_n(theta)`.
pub fn phi(params: &PinchedParams, theta: Phase, n: u32) -> f64 {
    phi_at(params, theta, &[n])[0]
}

#[derive(Debug, Clone)]
pub struct BoundaryLineGrid {
    pub params: PinchedParams,
    /// `G` grid points `(i + sqrt(2) - 1) / G`.
    pub thetas: Vec<Phase>,
    /// Retained depths, ascending.
    pub depths: Vec<u32>,
    /// `values[d][i] = phi_{depths[d]}(thetas[i])`.
    pub values: Vec<Vec<f64>>,
    /// `tau_1, ..., tau_K`, evaluated exactly.
    pub taus: Vec<Phase>,
    pub tau_values: Vec<Vec<f64>>,
}

impl BoundaryLineGrid {
    pub fn depth(&self) -> u32 {
        *self.depths.last().expect("at least one depth")
    }

    /// Values at depth `n`, if retained.
    pub fn at(&self, n: u32) -> Option<&[f64]> {
        self.depths.iter().position(|&d| d == n).map(|k| self.values[k].as_slice())
    }

    /// Values at the deepest retained depth.
    pub fn last(&self) -> &[f64] {
        self.values.last().expect("at least one depth")
    }

    /// Linear interpolation of the deepest line at `theta`.
    pub fn interpolate(&self, theta: Phase) -> f64 {
        let g = self.thetas.len();
        let u = (theta.to_f64() * g as f64 - GRID_OFFSET).rem_euclid(g as f64);
        let i = (u.floor() as usize).min(g - 1);
        let w = u - i as f64;
        let v = self.last();
        v[i] * (1.0 - w) + v[(i + 1) % g] * w
    }

    /// Writes `theta,n,value`, uniform grid only.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["theta", "n", "value"])?;
        for (d, &n) in self.depths.iter().enumerate() {
            for (i, th) in self.thetas.iter().enumerate() {
                w.write_record([g12(th.to_f64()), n.to_string(), g12(self.values[d][i])])?;
            }
        }
        w.flush().map_err(|e| Error::Csv(e.to_string()))
    }
}

/// Depths `1..=n`.
pub fn all_depths(n: u32) -> Vec<u32> {
    (1..=n).collect()
}

/// Boundary lines on a `g`-point grid plus the first `tau_count` peak centres.
pub fn boundary_lines(params: &PinchedParams, g: usize, depths: &[u32], tau_count: usize) -> Result<BoundaryLineGrid> {
    if g < MIN_GRID {
        return Err(Error::Domain { name: "grid".into(), msg: format!("needs at least {MIN_GRID} points") });
    }
    if depths.is_empty() || depths[0] == 0 || depths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain { name: "depths".into(), msg: "must be positive and strictly ascending".into() });
    }
    let thetas: Vec<Phase> = (0..g).map(|i| grid_theta(i, g)).collect();
    let taus: Vec<Phase> = (1..=tau_count as u64).map(|k| tau(params, k)).collect();
    let by_point = |pts: &[Phase]| -> Vec<Vec<f64>> {
        let cols: Vec<Vec<f64>> = pts.par_iter().map(|&t| phi_at(params, t, depths)).collect();
        (0..depths.len()).map(|d| cols.iter().map(|c| c[d]).collect()).collect()
    };
    Ok(BoundaryLineGrid {
        params: *params,
        values: by_point(&thetas),
        tau_values: by_point(&taus),
        thetas,
        depths: depths.to_vec(),
        taus,
    })
}

/// Violations of `phi_{n+1} <= phi_n` between consecutive retained depths.
pub fn monotonicity_violations(grid: &BoundaryLineGrid) -> usize {
    grid.values.windows(2).map(|w| w[0].iter().zip(&w[1]).filter(|(a, b)| b > a).count()).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzAudit {
    /// Largest `|phi_n(theta_i) - phi_n(theta_{i+1})| / (pi L^n d)` with `L = alpha (1 + eps)`.
    pub worst_ratio: f64,
    pub violations: usize,
}

/// Checks the Lipschitz bound on adjacent grid points at every retained depth.
pub fn lipschitz_audit(grid: &BoundaryLineGrid) -> LipschitzAudit {
    let l = grid.params.alpha * (1.0 + grid.params.eps);
    let g = grid.thetas.len();
    let mut worst = 0f64;
    let mut violations = 0;
    for (d, &n) in grid.depths.iter().enumerate() {
        let bound = std::f64::consts::PI * l.powi(n as i32);
        for i in 0..g {
            let j = (i + 1) % g;
            let dist = grid.thetas[i].arc(grid.thetas[j]);
            let ratio = (grid.values[d][i] - grid.values[d][j]).abs() / (bound * dist);
            worst = worst.max(ratio);
            violations += (ratio > 1.0) as usize;
        }
    }
    LipschitzAudit { worst_ratio: worst, violations }
}

/// `|phi_n(theta) - phi_{n-1}(theta)|` for `n = 1..=depth`.
pub fn successive_differences(params: &PinchedParams, theta: Phase, depth: u32) -> Vec<f64> {
    let mut prev = 1.0;
    phi_at(params, theta, &all_depths(depth))
        .into_iter()
        .map(|v| {
            let d = (prev - v).abs();
            prev = v;
            d
        })
        .collect()
}

/// `lambda` in `|phi_n - phi_{n-1}| ~ alpha^(-lambda (n-1))`, fitted on
/// `n_min..=n_max` over the steps where the difference is still nonzero.
pub fn contraction_rate(params: &PinchedParams, theta: Phase, n_min: u32, n_max: u32) -> Option<f64> {
    let diffs = successive_differences(params, theta, n_max);
    let (xs, ys): (Vec<f64>, Vec<f64>) = (n_min..=n_max)
        .filter(|&n| diffs[n as usize - 1] > 0.0)
        .map(|n| ((n - 1) as f64, diffs[n as usize - 1].ln()))
        .unzip();
    if xs.len() < 3 {
        return None;
    }
    Some(-least_squares(&xs, &ys).0 / params.alpha.ln())
}

/// Birkhoff average of `log(alpha (sin(pi theta_k) + eps))` over
/// `theta_k = k omega`, `k = 1..=horizon`, each term clipped below at `floor`.
pub fn lyapunov_zero_line(params: &PinchedParams, horizon: u64, floor: f64) -> f64 {
    let mut theta = Phase::ZERO;
    let mut sum = 0.0;
    for _ in 0..horizon {
        theta = theta.add(params.omega);
        let d = params.alpha * ((std::f64::consts::PI * theta.to_f64()).sin() + params.eps);
        sum += if d > 0.0 { d.ln().max(floor) } else { floor };
    }
    sum / horizon as f64
}

/// Configured constants of the peak construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakConstants {
    pub a: f64,
    pub b: f64,
    pub m: u32,
    pub gamma: f64,
    pub l0: f64,
    /// Diophantine constants: `d(n omega, 0) >= c n^(-d)`.
    pub c: f64,
    pub d: f64,
}

impl PeakConstants {
    /// `r_n = (b/2) a^(-(n-1)/m)`.
    pub fn radius(&self, n: u64) -> f64 {
        self.b / 2.0 * self.a.powf(-((n - 1) as f64) / self.m as f64)
    }
}

/// Points per axis of the sampled fibre-map checks.
const CHECK_SAMPLES: usize = 256;

/// Checks the arithmetic and sampled inequalities the constants must satisfy.
pub fn validate_constants(params: &PinchedParams, k: &PeakConstants, diophantine_range: u64) -> Result<()> {
    let fail = |msg: String| Err(Error::Constants(msg));
    if !(k.a > 1.0 && k.b > 0.0 && k.gamma > 0.0 && k.l0 > 0.0 && k.l0 < 1.0 && k.c > 0.0 && k.d > 0.0 && k.m >= 1) {
        return fail("constants must be positive with a > 1 and 0 < L0 < 1".into());
    }
    let m_min = 22.0 * (1.0 + 1.0 / k.gamma);
    if (k.m as f64) < m_min {
        return fail(format!("m >= 22 (1 + 1/gamma) fails: {} < {}", k.m, g12(m_min)));
    }
    let a_min = ((k.m + 1) as f64).powf(k.d);
    if k.a < a_min {
        return fail(format!("a >= (m+1)^d fails: {} < {}", g12(k.a), g12(a_min)));
    }
    if k.b > k.c {
        return fail(format!("b <= c fails: {} > {}", g12(k.b), g12(k.c)));
    }
    for n in 1..k.m as u64 {
        let dist = tau(params, n).arc(Phase::ZERO);
        if k.b >= dist {
            return fail(format!("b < d(n omega, 0) fails at n = {n}: {} >= {}", g12(k.b), g12(dist)));
        }
    }
    for n in 1..=diophantine_range {
        let dist = tau(params, n).arc(Phase::ZERO);
        let bound = k.c * (n as f64).powf(-k.d);
        if dist < bound {
            return fail(format!("d(n omega, 0) >= c n^-d fails at n = {n}: {} < {}", g12(dist), g12(bound)));
        }
    }
    let contraction = params.alpha.powf(-k.gamma);
    for i in 0..CHECK_SAMPLES {
        let theta = grid_theta(i, CHECK_SAMPLES);
        let dist0 = theta.arc(Phase::ZERO);
        for j in 0..CHECK_SAMPLES {
            let x = j as f64 / (CHECK_SAMPLES - 1) as f64;
            let reference = k.l0.min(k.a * x) * (2.0 * dist0 / k.b).min(1.0);
            if params.fibre(theta, x) < reference {
                return fail(format!(
                    "f_theta(x) >= min(L0, a x) min(1, 2 d(theta,0)/b) fails at theta = {}, x = {}",
                    g12(theta.to_f64()),
                    g12(x)
                ));
            }
            let y = k.l0 + (1.0 - k.l0) * x;
            let y2 = (y + (1.0 - k.l0) / (CHECK_SAMPLES - 1) as f64).min(1.0);
            if y2 > y {
                let lip = (params.fibre(theta, y2) - params.fibre(theta, y)).abs() / (y2 - y);
                if lip > contraction {
                    return fail(format!(
                        "|f_theta(x) - f_theta(y)| <= alpha^-gamma |x - y| on [L0, 1] fails at theta = {}, x = {}",
                        g12(theta.to_f64()),
                        g12(y)
                    ));
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeakCensus {
    pub constants: PeakConstants,
    pub taus: Vec<Phase>,
    pub radii: Vec<f64>,
    /// Fresh peak indices `n_1 < n_2 < ...` (1-based).
    pub fresh: Vec<u64>,
    /// `j / n_j`.
    pub density: Vec<f64>,
    /// Minimum of `j / n_j` over the second half of the fresh peaks.
    pub density_liminf: f64,
}

/// Fresh peaks among `tau_1..tau_n`: `B_{2 r_j}(tau_j)` misses every earlier
/// `B_{r_l}(tau_l)`.
pub fn peak_census(params: &PinchedParams, k: &PeakConstants, n: u64) -> Result<PeakCensus> {
    validate_constants(params, k, n)?;
    let taus: Vec<Phase> = (1..=n).map(|j| tau(params, j)).collect();
    let radii: Vec<f64> = (1..=n).map(|j| k.radius(j)).collect();
    let fresh: Vec<u64> = (0..n as usize)
        .filter(|&j| (0..j).all(|l| taus[j].arc(taus[l]) >= 2.0 * radii[j] + radii[l]))
        .map(|j| j as u64 + 1)
        .collect();
    let density: Vec<f64> = fresh.iter().enumerate().map(|(j, &nj)| (j + 1) as f64 / nj as f64).collect();
    let density_liminf = density[density.len() / 2..].iter().copied().fold(f64::INFINITY, f64::min);
    Ok(PeakCensus { constants: *k, taus, radii, fresh, density, density_liminf })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnaThresholds {
    /// A graph counts as bounded away from zero above this value.
    pub positive: f64,
    /// A value counts as zero below this.
    pub zero: f64,
    /// Quantile used as the essential supremum.
    pub quantile: f64,
    /// Largest admissible `max |phi_N - phi_{N-5}|` on the grid.
    pub tolerance: f64,
}

impl Default for SnaThresholds {
    fn default() -> Self {
        SnaThresholds { positive: 0.02, zero: 1e-6, quantile: 0.9, tolerance: 1e-3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Sna,
    Continuous { zero_graph: bool },
    Undecided,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Sna => "sna",
            Verdict::Continuous { zero_graph: false } => "continuous",
            Verdict::Continuous { zero_graph: true } => "continuous_zero",
            Verdict::Undecided => "undecided",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SnaReport {
    pub verdict: Verdict,
    pub depth: u32,
    pub ess_sup: f64,
    pub min: f64,
    /// Largest `phi_N(tau_k)` over the evaluated peak centres.
    pub dip_max: f64,
    /// `max |phi_N - phi_{N-5}|`, `None` when depth `N-5` is not retained.
    pub change: Option<f64>,
}

impl SnaReport {
    pub fn line(&self) -> String {
        format!(
            "verdict={} depth={} ess_sup={} min={} dip_max={} change={}",
            self.verdict.name(),
            self.depth,
            g12(self.ess_sup),
            g12(self.min),
            g12(self.dip_max),
            self.change.map_or("none".into(), g12)
        )
    }
}

fn quantile(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v[((v.len() - 1) as f64 * q).round() as usize]
}

/// Classifies the deepest boundary line.
pub fn sna_detect(grid: &BoundaryLineGrid, th: &SnaThresholds) -> SnaReport {
    let n = grid.depth();
    let last = grid.last();
    let ess_sup = quantile(last, th.quantile);
    let min = last.iter().copied().fold(f64::INFINITY, f64::min);
    let dip_max = grid.tau_values.last().map_or(f64::NAN, |v| v.iter().copied().fold(0.0, f64::max));
    let change = n
        .checked_sub(5)
        .and_then(|m| grid.at(m))
        .map(|prev| prev.iter().zip(last).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
    let verdict = match change {
        Some(c) if c < th.tolerance => {
            if ess_sup < th.zero {
                Verdict::Continuous { zero_graph: true }
            } else if min > th.positive {
                Verdict::Continuous { zero_graph: false }
            } else if ess_sup > th.positive && !grid.taus.is_empty() && dip_max < th.zero {
                Verdict::Sna
            } else {
                Verdict::Undecided
            }
        }
        _ => Verdict::Undecided,
    };
    SnaReport { verdict, depth: n, ess_sup, min, dip_max, change }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceAudit {
    /// `|f_theta(phi_N(theta)) - phi_N(theta + omega)|` statistics over the grid,
    /// the right side linearly interpolated.
    pub max: f64,
    pub median: f64,
    pub q90: f64,
}

pub fn invariance_audit(grid: &BoundaryLineGrid) -> InvarianceAudit {
    let p = &grid.params;
    let errs: Vec<f64> = grid
        .thetas
        .iter()
        .zip(grid.last())
        .map(|(&t, &v)| (p.fibre(t, v) - grid.interpolate(t.add(p.omega))).abs())
        .collect();
    InvarianceAudit { max: errs.iter().copied().fold(0.0, f64::max), median: quantile(&errs, 0.5), q90: quantile(&errs, 0.9) }
}

/// Pinched parameters of a single-leaf system.
pub fn pinched_params(sys: &System) -> Result<PinchedParams> {
    match sys.leaves() {
        [leaf] if leaf.reps == 1 => match &leaf.map {
            LeafMap::Pinched(p) => Ok(*p),
            _ => Err(Error::Domain { name: "system".into(), msg: "expected a pinched system".into() }),
        },
        _ => Err(Error::Domain { name: "system".into(), msg: "expected a single pinched system".into() }),
    }
}

/// Sample set avoiding peak neighbourhoods: `theta` ranges over an offset
/// `M`-point grid minus `B_{radius}(tau_j)`, `j <= exclude`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exclusion {
    pub peaks: u64,
    pub radius: f64,
}

/// Points `(theta_i, phi_N(theta_i))` on the offset grid outside the exclusion.
pub fn graph_points(params: &PinchedParams, m: usize, depth: u32, ex: &Exclusion) -> Vec<Point> {
    let taus: Vec<Phase> = (1..=ex.peaks).map(|k| tau(params, k)).collect();
    (0..m)
        .map(|i| grid_theta(i, m))
        .filter(|t| taus.iter().all(|tk| t.arc(*tk) >= ex.radius))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|t| Point(vec![crate::systems::Coord::Circle(t), crate::systems::Coord::Interval(phi(params, t, depth))]))
        .collect()
}

/// Sweep and fit of separation numbers of orbits started on the
/// approximated invariant graph.
pub fn graph_separation_exponent(
    sys: &System,
    depth: u32,
    ex: &Exclusion,
    plan: &SweepPlan,
    budget: u128,
) -> Result<(Vec<SweepRow>, ScalingEstimate)> {
    let params = pinched_params(sys)?;
    let rows = sweep_with(&format!("graph:{}", sys.spec()), plan, budget, |m| {
        OrbitSample::from_points(sys, graph_points(&params, m, depth, ex), plan.horizon, plan.seed)
    })?;
    let est = fit_exponent(&rows)?;
    Ok((rows, est))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::Real;

    fn params(alpha: f64, eps: f64) -> PinchedParams {
        PinchedParams::new(alpha, eps, Real::golden().phase)
    }

    #[test]
    fn first_line_closed_form() {
        let p = params(3.0, 0.1);
        for t in [0.1, 0.37, 0.8] {
            let th = Phase::from_f64(t);
            let expect = (3f64.tanh() * ((std::f64::consts::PI * th.sub(p.omega).to_f64()).sin() + 0.1)).min(1.0);
            assert_eq!(phi(&p, th, 1), expect);
        }
        assert_eq!(phi(&params(3.0, 0.0), params(3.0, 0.0).omega, 1), 0.0);
    }

    #[test]
    fn monotone_zeros_and_lipschitz() {
        let p = params(3.0, 0.0);
        let grid = boundary_lines(&p, 1024, &all_depths(30), 30).unwrap();
        assert_eq!(monotonicity_violations(&grid), 0);
        for (d, &n) in grid.depths.iter().enumerate() {
            for k in 0..n as usize {
                assert!(grid.tau_values[d][k] < 1e-12, "n={n} k={}", k + 1);
            }
        }
        let audit = lipschitz_audit(&grid);
        assert_eq!(audit.violations, 0, "{audit:?}");
        let e = boundary_lines(&params(3.0, 0.05), 1024, &all_depths(20), 0).unwrap();
        assert_eq!(monotonicity_violations(&e), 0);
        assert_eq!(lipschitz_audit(&e).violations, 0);
        assert!(boundary_lines(&p, 512, &[1], 0).is_err());
    }

    #[test]
    fn off_peak_differences_decay() {
        let p = params(3.0, 0.0);
        let lambda = contraction_rate(&p, Phase::from_f64(0.3), 2, 12).unwrap();
        assert!(lambda > 0.0, "{lambda}");
    }

    #[test]
    fn lyapunov_closed_forms() {
        let l3 = lyapunov_zero_line(&params(3.0, 0.0), 1_000_000, LYAPUNOV_FLOOR);
        assert!((l3 - (3f64.ln() - 2f64.ln())).abs() < 1e-3, "{l3}");
        let l2 = lyapunov_zero_line(&params(2.0, 0.0), 1_000_000, LYAPUNOV_FLOOR);
        assert!(l2.abs() < 1e-3, "{l2}");
        // Simpson's rule for the integral of log(sin(pi t) + 1) over [0, 1]
        let n = 20_000;
        let f = |t: f64| ((std::f64::consts::PI * t).sin() + 1.0).ln();
        let h = 1.0 / n as f64;
        let simpson = (0..=n)
            .map(|i| {
                let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                w * f(i as f64 * h)
            })
            .sum::<f64>()
            * h
            / 3.0;
        let l1 = lyapunov_zero_line(&params(1.0, 1.0), 1_000_000, LYAPUNOV_FLOOR);
        assert!((l1 - simpson).abs() < 1e-3, "{l1} {simpson}");
    }

    fn sample_constants() -> (PinchedParams, PeakConstants) {
        (params(2.0e4, 0.0), PeakConstants { a: 45.0, b: 0.01, m: 44, gamma: 1.0, l0: 0.005, c: 0.38, d: 1.0 })
    }

    #[test]
    fn census_has_positive_density() {
        let (p, k) = sample_constants();
        let c = peak_census(&p, &k, 10_000).unwrap();
        assert_eq!(c.fresh[0], 1);
        assert!(c.density_liminf > 0.1, "{}", c.density_liminf);
        assert!(c.fresh.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn census_rejects_bad_constants() {
        let (p, k) = sample_constants();
        let big_b = PeakConstants { b: 0.2, c: 0.5, ..k };
        match peak_census(&p, &big_b, 100) {
            Err(Error::Constants(msg)) => assert!(msg.contains("b < d(n omega, 0)"), "{msg}"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(peak_census(&p, &PeakConstants { m: 10, ..k }, 100), Err(Error::Constants(_))));
        assert!(matches!(peak_census(&params(3.0, 0.0), &k, 100), Err(Error::Constants(_))));
    }

    #[test]
    fn invariance_of_continuous_graph() {
        let grid = boundary_lines(&params(3.0, 0.05), 4096, &[200], 0).unwrap();
        let audit = invariance_audit(&grid);
        assert!(audit.max < 1e-2, "{audit:?}");
    }

    #[test]
    fn pinched_params_from_system() {
        let sys = System::parse("pinched:alpha=3,eps=0.05").unwrap();
        assert_eq!(pinched_params(&sys).unwrap().alpha, 3.0);
        assert!(pinched_params(&System::parse("doubling").unwrap()).is_err());
    }
}
