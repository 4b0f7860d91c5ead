//! Saturation probes, the power-entropy comparator and structural checks.

use super::{fit_exponent, least_squares, sweep, ScalingEstimate, SweepPlan, SweepRow, GROWTH_THRESHOLD};
use crate::error::{Error, Result};
use crate::sampling::{OrbitSample, Plan};
use crate::separation::{first_hit_times, max_separated_set, pair_frequencies, FrequencyMatrix, Mode};
use crate::systems::{System, SystemSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct SaturationProbe {
    pub samples: Vec<usize>,
    pub seps: Vec<usize>,
    /// Relative growth `sep(M_k) / sep(M_{k-1}) - 1`.
    pub growth: Vec<f64>,
    /// The last doubling still grew by more than 10%.
    pub infinite_suspected: bool,
}

/// Greedy `Sep(delta, nu)` over increasing sample sizes.
pub fn saturation_probe(sys: &System, delta: f64, nu: f64, samples: &[usize], horizon: u64, seed: u64) -> Result<SaturationProbe> {
    if samples.len() < 3 || samples.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Plan("saturation probe needs at least 3 strictly ascending sample sizes".into()));
    }
    let seps: Vec<usize> = samples
        .iter()
        .map(|&m| {
            let sample = OrbitSample::build(sys, m, horizon, seed);
            max_separated_set(&pair_frequencies(&sample, delta, Mode::SuffixMax).frequencies, nu).len()
        })
        .collect();
    let growth: Vec<f64> = seps.windows(2).map(|w| w[1] as f64 / w[0].max(1) as f64 - 1.0).collect();
    let infinite_suspected = growth.last().is_some_and(|&g| g > GROWTH_THRESHOLD);
    Ok(SaturationProbe { samples: samples.to_vec(), seps, growth, infinite_suspected })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerEntropy {
    pub delta: f64,
    pub ns: Vec<u64>,
    /// Greedy Bowen-Dinaburg `(n, delta)`-separated set sizes.
    pub counts: Vec<usize>,
    /// Slope of `log count` against `log n`.
    pub slope: f64,
    pub r2: f64,
}

/// Polynomial growth rate of Bowen-Dinaburg separated sets on an `m`-point
/// sample. `ns` must be ascending and geometric.
pub fn power_entropy_est(sys: &System, deltas: &[f64], ns: &[u64], m: usize, seed: u64, plan: Plan) -> Result<Vec<PowerEntropy>> {
    if ns.len() < 4 || ns[0] == 0 || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Plan("n grid needs at least 4 strictly ascending positive values".into()));
    }
    let ratios: Vec<f64> = ns.windows(2).map(|w| w[1] as f64 / w[0] as f64).collect();
    if ratios.iter().any(|r| (r / ratios[0] - 1.0).abs() > 0.05) {
        return Err(Error::Plan("n grid must be geometric".into()));
    }
    let horizon = *ns.last().expect("non-empty");
    let sample = OrbitSample::build_with(sys, m, horizon, seed, plan);
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    Ok(deltas
        .iter()
        .map(|&delta| {
            let hits = first_hit_times(&sample, delta, horizon);
            let counts: Vec<usize> = ns
                .iter()
                .map(|&n| {
                    let sep = FrequencyMatrix::from_fn(m, |i, j| ((hits.get(i, j) as u64) < n) as u8 as f64);
                    max_separated_set(&sep, 1.0).len()
                })
                .collect();
            let ys: Vec<f64> = counts.iter().map(|&c| (c.max(1) as f64).ln()).collect();
            let (slope, _, r2) = least_squares(&xs, &ys);
            PowerEntropy { delta, ns: ns.to_vec(), counts, slope, r2 }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerCheck {
    pub power: u32,
    pub base: ScalingEstimate,
    pub powered: ScalingEstimate,
    /// `|slope(f^m) - slope(f)|` when both exist.
    pub deviation: Option<f64>,
}

fn estimate(spec: &SystemSpec, plan: &SweepPlan, budget: u128) -> Result<(Vec<SweepRow>, ScalingEstimate)> {
    let sys = System::compile(spec)?;
    let rows = sweep(&sys, plan, budget)?;
    let est = fit_exponent(&rows)?;
    Ok((rows, est))
}

/// Slope of `f` against slope of `f^m` under the same plan.
pub fn power_check(base: &SystemSpec, m: u32, plan: &SweepPlan, budget: u128) -> Result<PowerCheck> {
    let (_, b) = estimate(base, plan, budget)?;
    let (_, p) = estimate(&SystemSpec::power_of(base.clone(), m)?, plan, budget)?;
    let deviation = b.slope.zip(p.slope).map(|(x, y)| (x - y).abs());
    Ok(PowerCheck { power: m, base: b, powered: p, deviation })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductCheck {
    pub f: ScalingEstimate,
    pub g: ScalingEstimate,
    pub product: ScalingEstimate,
    /// `slope(f) + slope(g)`.
    pub predicted: Option<f64>,
    /// `|slope(f x g) - predicted|`.
    pub deviation: Option<f64>,
}

/// Slope of `f x g` against the sum of the factor slopes.
pub fn product_check(f: &SystemSpec, g: &SystemSpec, plan: &SweepPlan, budget: u128) -> Result<ProductCheck> {
    let (_, ef) = estimate(f, plan, budget)?;
    let (_, eg) = estimate(g, plan, budget)?;
    let (_, ep) = estimate(&SystemSpec::product(f.clone(), g.clone()), plan, budget)?;
    let predicted = ef.slope.zip(eg.slope).map(|(a, b)| a + b);
    let deviation = predicted.zip(ep.slope).map(|(a, b)| (a - b).abs());
    Ok(ProductCheck { f: ef, g: eg, product: ep, predicted, deviation })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub exponent: f64,
    pub nus: Vec<f64>,
    /// `sep_est(nu) * nu^s`.
    pub ratios: Vec<f64>,
    /// The ratio does not increase strictly over the last four cells.
    pub bounded: bool,
}

/// Upper-bound check `sep_est(nu) <= C nu^(-s)` on the largest-`M`,
/// uncensored rows of the first delta.
pub fn toeplitz_bound_check(rows: &[SweepRow], s: f64) -> Result<BoundCheck> {
    let delta = rows.first().ok_or_else(|| Error::Fit("no rows".into()))?.delta;
    let m = rows.iter().filter(|r| r.delta == delta).map(|r| r.m).max().expect("non-empty");
    let mut cells: Vec<&SweepRow> = rows.iter().filter(|r| r.delta == delta && r.m == m && r.sep_est < m).collect();
    cells.sort_by(|a, b| b.nu.total_cmp(&a.nu));
    if cells.len() < 4 {
        return Err(Error::Fit(format!("{} uncensored cells, need 4", cells.len())));
    }
    let ratios: Vec<f64> = cells.iter().map(|r| r.sep_est as f64 * r.nu.powf(s)).collect();
    let tail = &ratios[ratios.len() - 4..];
    let bounded = !tail.windows(2).all(|w| w[1] > w[0]);
    Ok(BoundCheck { exponent: s, nus: cells.iter().map(|r| r.nu).collect(), ratios, bounded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scaling::{dyadic_grid, DEFAULT_BUDGET_CELLS};

    #[test]
    fn rotation_plateaus() {
        let sys = System::parse("rotation:alpha=golden").unwrap();
        let p = saturation_probe(&sys, 0.1, 0.1, &[64, 128, 256, 512], 256, 2).unwrap();
        assert!(!p.infinite_suspected, "{p:?}");
        assert!(p.seps.iter().all(|&s| s <= 10));
    }

    #[test]
    fn doubling_keeps_growing() {
        let sys = System::parse("doubling").unwrap();
        let p = saturation_probe(&sys, 0.1, 0.1, &[64, 128, 256, 512], 512, 2).unwrap();
        assert!(p.infinite_suspected, "{p:?}");
    }

    #[test]
    fn probe_plan_errors() {
        let sys = System::parse("doubling").unwrap();
        assert!(saturation_probe(&sys, 0.1, 0.1, &[64, 128], 64, 0).is_err());
        assert!(power_entropy_est(&sys, &[0.1], &[4, 8, 16], 16, 0, Plan::Standard).is_err());
        assert!(power_entropy_est(&sys, &[0.1], &[4, 8, 16, 20], 16, 0, Plan::Standard).is_err());
    }

    #[test]
    fn rotation_power_entropy_is_flat() {
        let sys = System::parse("rotation:alpha=golden").unwrap();
        let pe = power_entropy_est(&sys, &[0.1], &[8, 16, 32, 64, 128], 128, 0, Plan::Standard).unwrap();
        assert!(pe[0].slope.abs() < 0.05, "{pe:?}");
    }

    #[test]
    fn bound_check_detects_blow_up() {
        let mk = |law: &dyn Fn(f64) -> usize| -> Vec<SweepRow> {
            dyadic_grid(1, 8)
                .into_iter()
                .map(|nu| SweepRow {
                    system: "x".into(),
                    delta: 1.0,
                    nu,
                    m: 1 << 20,
                    horizon: 1,
                    sep_est: law(nu),
                    span_est: 0,
                    saturated: false,
                })
                .collect()
        };
        assert!(toeplitz_bound_check(&mk(&|nu| (1.0 / nu) as usize), 1.1).unwrap().bounded);
        assert!(!toeplitz_bound_check(&mk(&|nu| nu.powf(-1.5) as usize), 1.1).unwrap().bounded);
    }

    #[test]
    fn rotation_products_stay_flat() {
        let r = SystemSpec::parse("rotation:alpha=golden").unwrap();
        let plan = SweepPlan {
            deltas: vec![0.25],
            nus: dyadic_grid(1, 6),
            samples: vec![64],
            horizon: 256,
            seed: 0,
            mode: Mode::SuffixMax,
            plan: Plan::Standard,
        };
        let c = product_check(&r, &r, &plan, DEFAULT_BUDGET_CELLS).unwrap();
        assert!(c.product.slope.unwrap().abs() < 0.05);
        let p = power_check(&r, 2, &plan, DEFAULT_BUDGET_CELLS).unwrap();
        assert!(p.deviation.unwrap() < 0.05);
    }
}
