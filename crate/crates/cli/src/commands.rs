//! Subcommand implementations.

use std::fmt::Write as _;
use std::path::Path;

use amorph_core::besicovitch::{self, BoxMode};
use amorph_core::format::g12;
use amorph_core::pinched::{self, Exclusion, SnaThresholds};
use amorph_core::real::Real;
use amorph_core::sampling::{OrbitSample, Plan};
use amorph_core::scaling::{self, ScalingEstimate, SweepPlan, SweepRow, DEFAULT_BUDGET_CELLS};
use amorph_core::separation::{max_separated_set, oracle, pair_frequencies, Mode, EXACT_CAP};
use amorph_core::symbolic::{predicted_ac, ToeplitzWord};
use amorph_core::systems::{PinchedParams, System, SystemSpec};
use amorph_core::Error;

use crate::grid::{parse_grid, parse_horizon, parse_sizes};
use crate::output::{emit, header};
use crate::{BoxArg, Command, ModeArg, PlanArgs, PlanKind};

pub const SCHEMA: &str = "\
sweep CSV (one row per delta, M, nu; ordered by delta as given, M ascending, nu as given)
  system      canonical system spec
  delta       separation threshold
  nu          frequency threshold
  M           sample size actually used
  T           horizon
  sep_est     greedy separated-set size
  span_est    greedy spanning-set size
  saturated   1 if sep_est = M or sep_est grew by more than 10% since the previous M
besicovitch matrix CSV
  i, j        sample indices, i < j
  delta       dyadic window parameter 2^-m
  frequency   pseudo-distance (suffix-max surrogate)
  metric      besicovitch:<delta>
pinched boundary-line CSV
  theta       grid point
  n           depth of the iterated boundary line
  value       phi_n(theta)
estimate report
  fit lines   per delta: slope, r2, lower, upper (extreme 4-point slopes), tail (4-point slope at the smallest nu),
              window size, dropped and saturated cells
  summary     slope (max over delta), r2, lower, upper, tail, bounded, saturated_by_sample, infinite_suspected
All files start with `# amorph <version> config=<hash> seed=<seed>`; floats carry 12 significant digits.
";

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Budget { .. }) { 2 } else { 1 };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

fn budget() -> Result<u128, Failure> {
    match std::env::var("AMORPH_BUDGET_CELLS") {
        Ok(v) => v.trim().parse().map_err(|_| invalid(format!("AMORPH_BUDGET_CELLS=`{v}` is not an integer"))),
        Err(_) => Ok(DEFAULT_BUDGET_CELLS),
    }
}

struct Defaults {
    /// `None` keeps the per-system default grid.
    deltas: Option<&'static str>,
    nus: &'static str,
    samples: &'static str,
    horizon: &'static str,
}

const SWEEP_DEFAULTS: Defaults = Defaults { deltas: None, nus: "2^-1..2^-12", samples: "256", horizon: "4096" };

fn system(args: &PlanArgs) -> Result<System, Failure> {
    let text = args.system.as_deref().ok_or_else(|| invalid("--system is required"))?;
    Ok(System::parse(text)?)
}

fn plan(args: &PlanArgs, sys: &System, seed: u64, d: &Defaults) -> Result<SweepPlan, Failure> {
    let samples = parse_sizes(args.samples.as_deref().unwrap_or(d.samples)).map_err(invalid)?;
    let horizon = parse_horizon(args.horizon.as_deref().unwrap_or(d.horizon)).map_err(invalid)?;
    let mut p = SweepPlan::default_for(sys, samples, horizon, seed);
    if let Some(text) = args.deltas.as_deref().or(d.deltas) {
        p.deltas = parse_grid(text).map_err(invalid)?;
    }
    p.nus = parse_grid(args.nus.as_deref().unwrap_or(d.nus)).map_err(invalid)?;
    p.mode = match args.mode {
        Some(ModeArg::Terminal) => Mode::Terminal,
        _ => Mode::SuffixMax,
    };
    p.plan = match args.plan {
        Some(PlanKind::Wandering) => Plan::Wandering,
        _ => Plan::Standard,
    };
    p.validate()?;
    Ok(p)
}

fn estimate_report(out: &mut String, est: &ScalingEstimate) {
    let lines = est.summary_lines();
    let (last, fits) = lines.split_last().expect("summary line");
    for l in fits {
        let _ = writeln!(out, "fit {l}");
    }
    let _ = writeln!(out, "summary {last}");
}

fn rows_csv(rows: &[SweepRow]) -> Result<String, Failure> {
    let mut buf = Vec::new();
    scaling::write_rows_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv is utf-8"))
}

/// Dispatches one subcommand; returns the exit code.
pub fn run(command: &Command, seed: u64, out: Option<&Path>) -> Result<u8, Failure> {
    let mut body = header(&format!("{command:?}"), seed);
    let mut code = 0;
    match command {
        Command::Sweep(args) => {
            let sys = system(args)?;
            let p = plan(args, &sys, seed, &SWEEP_DEFAULTS)?;
            let rows = scaling::sweep(&sys, &p, budget()?)?;
            body.push_str(&rows_csv(&rows)?);
        }
        Command::Estimate { input, plan: args } => {
            let rows = match input {
                Some(path) => scaling::read_rows_csv(std::fs::File::open(path)?)?,
                None => {
                    let sys = system(args)?;
                    let p = plan(args, &sys, seed, &SWEEP_DEFAULTS)?;
                    scaling::sweep(&sys, &p, budget()?)?
                }
            };
            let est = scaling::fit_exponent(&rows)?;
            if let Some(r) = rows.first() {
                let _ = writeln!(body, "system {}", r.system);
            }
            estimate_report(&mut body, &est);
        }
        Command::Toeplitz { word, m, depth, sweep, plan: args } => {
            let w = match m {
                Some(m) => {
                    let prefix = format!("{}1", "0".repeat(*m));
                    let v = word
                        .strip_prefix(&prefix)
                        .ok_or_else(|| invalid(format!("--word must start with {prefix} when --m {m} is given")))?;
                    ToeplitzWord::new(*m, v)?
                }
                None => ToeplitzWord::parse_template(word)?,
            };
            let _ = writeln!(body, "word {w} p={} q={} d={}", w.p(), w.q(), w.d());
            let table = w.density_table(*depth)?;
            let _ = writeln!(body, "level,period,density");
            for (k, row) in table.rows.iter().enumerate() {
                let _ = writeln!(body, "{},{},{}", k + 1, row.period, row.density);
            }
            let predicted = match predicted_ac(&w) {
                Ok(v) => {
                    let _ = writeln!(body, "predicted_ac {}", g12(v));
                    Some(v)
                }
                Err(Error::PeriodicWord) => {
                    let _ = writeln!(body, "predicted_ac 0 periodic=1");
                    None
                }
                Err(e) => return Err(e.into()),
            };
            if *sweep {
                let m = w.prefix_zeros().ok_or_else(|| invalid("--sweep needs a word of the form 0^m 1 v (give --m)"))?;
                let v: String = w.template()[m + 1..].iter().map(|&s| amorph_core::symbolic::symbol_char(s)).collect();
                let sys = System::parse(&format!("toeplitz:m={m},v={v}"))?;
                let d = Defaults { deltas: Some("1"), nus: "2^-1..2^-8", samples: "512", horizon: "16384" };
                let p = plan(args, &sys, seed, &d)?;
                let rows = scaling::sweep(&sys, &p, budget()?)?;
                let est = scaling::fit_exponent(&rows)?;
                estimate_report(&mut body, &est);
                if let Some(s) = predicted {
                    let check = scaling::toeplitz_bound_check(&rows, s + 0.1)?;
                    let _ = writeln!(
                        body,
                        "upper_bound s={} bounded={} ratios={}",
                        g12(check.exponent),
                        check.bounded as u8,
                        check.ratios.iter().map(|r| g12(*r)).collect::<Vec<_>>().join(";")
                    );
                }
            }
        }
        Command::Besicovitch { plan: args, eps, r#box, matrix } => {
            let sys = system(args)?;
            let seq = sys.shift_source().ok_or_else(|| invalid("besicovitch needs a single symbolic system"))?.clone();
            let d = Defaults { deltas: Some("1"), nus: "2^-1..2^-4", samples: "256", horizon: "4096" };
            let p = plan(args, &sys, seed, &d)?;
            let eps_grid = parse_grid(eps).map_err(invalid)?;
            let mode = match r#box {
                BoxArg::Packing => BoxMode::Packing,
                BoxArg::Covering => BoxMode::Covering,
            };
            let m = *p.samples.last().expect("validated");
            let points = besicovitch::orbit_points(&seq, m);
            let delta = p.deltas[0];
            let dist = besicovitch::distance_matrix(&points, delta, p.horizon, p.mode)?;
            let dim = besicovitch::box_dimension(&dist, &eps_grid, mode)?;
            let _ = writeln!(body, "system {} M={m} T={} delta={}", sys.spec(), p.horizon, g12(delta));
            let _ = writeln!(body, "eps,count");
            for (e, c) in dim.eps.iter().zip(&dim.counts) {
                let _ = writeln!(body, "{},{c}", g12(*e));
            }
            let _ = writeln!(body, "box_dimension slope={} r2={} lower={} upper={}", g12(dim.slope), g12(dim.r2), g12(dim.lower), g12(dim.upper));
            if delta == 1.0 {
                let sample = OrbitSample::build(&sys, m, p.horizon, seed);
                let rec = pair_frequencies(&sample, 1.0, p.mode);
                let same = eps_grid.iter().all(|&e| {
                    besicovitch::box_count(&dist, e, BoxMode::Packing) == max_separated_set(&rec.frequencies, e).len()
                });
                let _ = writeln!(body, "sep_packing_identity {}", same as u8);
            }
            if p.samples.len() >= 3 {
                let probe_eps = *eps_grid.last().expect("non-empty");
                let probe = besicovitch::total_boundedness_probe(&seq, probe_eps, &p.samples, p.horizon)?;
                let _ = writeln!(
                    body,
                    "total_boundedness eps={} counts={} not_totally_bounded={}",
                    g12(probe_eps),
                    probe.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";"),
                    probe.not_totally_bounded as u8
                );
            }
            if let Some(path) = matrix {
                let mut buf = header(&format!("{command:?}"), seed).into_bytes();
                besicovitch::write_csv(&dist, delta, &mut buf)?;
                emit(Some(path), &buf)?;
            }
        }
        Command::Pinched {
            alpha,
            eps,
            omega,
            grid,
            depth,
            taus,
            lyapunov_horizon,
            lines,
            exponent,
            exclude_peaks,
            exclude_radius,
            plan: args,
        } => {
            let spec = format!("pinched:alpha={},eps={},omega={omega}", g12(*alpha), g12(*eps));
            let sys = System::parse(&spec)?;
            let params: PinchedParams = pinched::pinched_params(&sys)?;
            let omega_real = Real::parse(omega)?;
            let lh = parse_horizon(lyapunov_horizon).map_err(invalid)?;
            let lyap = pinched::lyapunov_zero_line(&params, lh, pinched::LYAPUNOV_FLOOR);
            let _ = writeln!(body, "system {}", sys.spec());
            let _ = writeln!(body, "lyapunov_zero_line {} horizon={lh} omega={}", g12(lyap), g12(omega_real.value));
            if *depth == 0 {
                return Err(invalid("--depth must be positive"));
            }
            let mut depths: Vec<u32> = (1..=(*depth).min(25)).collect();
            depths.extend(depth.saturating_sub(5).max(1)..=*depth);
            depths.sort_unstable();
            depths.dedup();
            let g = pinched::boundary_lines(&params, *grid, &depths, *taus)?;
            let report = pinched::sna_detect(&g, &SnaThresholds::default());
            let _ = writeln!(body, "{}", report.line());
            let lip = pinched::lipschitz_audit(&g);
            let _ = writeln!(
                body,
                "audit monotonicity_violations={} lipschitz_violations={} lipschitz_worst={}",
                pinched::monotonicity_violations(&g),
                lip.violations,
                g12(lip.worst_ratio)
            );
            let inv = pinched::invariance_audit(&g);
            let _ = writeln!(body, "invariance max={} median={} q90={}", g12(inv.max), g12(inv.median), g12(inv.q90));
            if let Some(path) = lines {
                let mut buf = header(&format!("{command:?}"), seed).into_bytes();
                g.write_csv(&mut buf)?;
                emit(Some(path), &buf)?;
            }
            if *exponent {
                let d = Defaults { deltas: Some("0.5"), nus: "2^-1..2^-10", samples: "256,512,1024", horizon: "8192" };
                let p = plan(args, &sys, seed, &d)?;
                let ex = Exclusion { peaks: *exclude_peaks, radius: *exclude_radius };
                let (_, est) = pinched::graph_separation_exponent(&sys, *depth, &ex, &p, budget()?)?;
                estimate_report(&mut body, &est);
            }
        }
        Command::Props { plan: args, with, power } => {
            let sys = system(args)?;
            let d = Defaults { deltas: None, nus: "2^-1..2^-8", samples: "512", horizon: "16384" };
            let p = plan(args, &sys, seed, &d)?;
            let cap = budget()?;
            let opt = |v: Option<f64>| v.map_or("none".to_string(), g12);
            let pc = scaling::power_check(sys.spec(), *power, &p, cap)?;
            let _ = writeln!(
                body,
                "power m={} slope_f={} slope_fm={} deviation={}",
                pc.power,
                opt(pc.base.slope),
                opt(pc.powered.slope),
                opt(pc.deviation)
            );
            if let Some(g) = with {
                let g = SystemSpec::parse(g)?;
                let pr = scaling::product_check(sys.spec(), &g, &p, cap)?;
                let _ = writeln!(
                    body,
                    "product slope_f={} slope_g={} slope_fg={} predicted={} deviation={}",
                    opt(pr.f.slope),
                    opt(pr.g.slope),
                    opt(pr.product.slope),
                    opt(pr.predicted),
                    opt(pr.deviation)
                );
            }
        }
        Command::Selftest { instances, max_points } => {
            if *max_points < 3 || *max_points > EXACT_CAP {
                return Err(invalid(format!("--max-points must lie in 3..={EXACT_CAP}")));
            }
            let r = oracle::run_suite(*instances, *max_points, seed);
            for l in r.lines() {
                let _ = writeln!(body, "{l}");
            }
            let _ = writeln!(body, "selftest {}", if r.passed() { "passed" } else { "failed" });
            code = if r.passed() { 0 } else { 1 };
        }
    }
    emit(out, body.as_bytes())?;
    Ok(code)
}
