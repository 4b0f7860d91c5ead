//! Brute-force cross-checks of the greedy estimators on small instances.
//!
//! Random instances come from short circle trajectories, so frequencies at
//! `delta` and `2 delta` obey the triangle inequality the spanning bounds
//! rely on.

use rand::Rng;

use super::{checkpoints, exact_max_separated, exact_min_spanning, is_separated_set, max_separated_set, FrequencyMatrix, Mode};
use crate::sampling::task_rng;

/// Trajectory length of random instances.
pub const TRAJECTORY: usize = 64;

/// Frequencies of one random instance at `delta` and `2 delta`.
#[derive(Debug, Clone)]
pub struct Instance {
    pub delta: f64,
    pub nu: f64,
    pub at_delta: FrequencyMatrix,
    pub at_double: FrequencyMatrix,
}

/// Random instance `index` of the stream selected by `seed`.
pub fn random_instance(seed: u64, index: u64, max_points: usize) -> Instance {
    let mut rng = task_rng(seed, index);
    let n = rng.gen_range(3..=max_points);
    let delta = [0.0625, 0.125, 0.25][rng.gen_range(0..3)];
    let nu = [0.5, 0.25, 0.125, 0.0625][rng.gen_range(0..4)];
    let paths: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let start: f64 = rng.gen();
            let speed: f64 = rng.gen_range(0.0..0.03);
            (0..TRAJECTORY)
                .map(|k| {
                    let jitter: f64 = rng.gen_range(-0.02..0.02);
                    (start + speed * k as f64 + jitter).rem_euclid(1.0)
                })
                .collect()
        })
        .collect();
    let cps = checkpoints(TRAJECTORY as u64, Mode::SuffixMax);
    let freq = |d: f64| {
        FrequencyMatrix::from_fn(n, |i, j| {
            let mut count = 0u64;
            let mut best = 0f64;
            let mut cp = cps.iter().peekable();
            for k in 0..TRAJECTORY {
                let diff = (paths[i][k] - paths[j][k]).abs();
                count += (diff.min(1.0 - diff) >= d) as u64;
                if cp.peek() == Some(&&(k as u64 + 1)) {
                    best = best.max(count as f64 / (k + 1) as f64);
                    cp.next();
                }
            }
            best
        })
    };
    Instance { delta, nu, at_delta: freq(delta), at_double: freq(2.0 * delta) }
}

/// Fixed instances on which greedy and exact agree.
pub fn regression_instances() -> Vec<(FrequencyMatrix, f64, usize)> {
    let xs: [f64; 4] = [0.0, 0.5, 1.0, 1.5];
    let line = FrequencyMatrix::from_fn(4, |i, j| ((xs[i] - xs[j]).abs() >= 0.6) as u8 as f64);
    let complete = FrequencyMatrix::from_fn(7, |_, _| 1.0);
    let grid = FrequencyMatrix::from_fn(12, |i, j| {
        let d = ((i as f64 - j as f64) / 12.0).abs();
        (d.min(1.0 - d) >= 0.3) as u8 as f64
    });
    vec![(line, 0.5, 2), (complete, 0.5, 7), (grid, 0.5, 3)]
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OracleReport {
    pub instances: usize,
    /// Exact `Sep(delta, nu) < Span(delta, nu)`.
    pub sep_span_violations: usize,
    /// Exact `Span(delta, nu/2) < Sep(2 delta, nu)`.
    pub span_double_violations: usize,
    /// Greedy larger than exact, or not separated at all.
    pub greedy_violations: usize,
    pub greedy_equal: usize,
    pub regression_failures: usize,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.sep_span_violations == 0
            && self.span_double_violations == 0
            && self.greedy_violations == 0
            && self.regression_failures == 0
    }

    pub fn equality_rate(&self) -> f64 {
        if self.instances == 0 {
            1.0
        } else {
            self.greedy_equal as f64 / self.instances as f64
        }
    }

    pub fn lines(&self) -> Vec<String> {
        vec![
            format!("instances {}", self.instances),
            format!("sep >= span violations {}", self.sep_span_violations),
            format!("span(nu/2) >= sep(2 delta) violations {}", self.span_double_violations),
            format!("greedy violations {}", self.greedy_violations),
            format!("greedy = exact rate {:.3}", self.equality_rate()),
            format!("regression failures {}", self.regression_failures),
        ]
    }
}

/// Runs `count` random instances with at most `max_points` points each.
pub fn run_suite(count: usize, max_points: usize, seed: u64) -> OracleReport {
    let mut r = OracleReport { instances: count, ..Default::default() };
    for k in 0..count as u64 {
        let inst = random_instance(seed, k, max_points);
        let sep = exact_max_separated(&inst.at_delta, inst.nu).expect("within cap");
        let span = exact_min_spanning(&inst.at_delta, inst.nu).expect("within cap");
        let span_half = exact_min_spanning(&inst.at_delta, inst.nu / 2.0).expect("within cap");
        let sep_double = exact_max_separated(&inst.at_double, inst.nu).expect("within cap");
        let greedy = max_separated_set(&inst.at_delta, inst.nu);
        r.sep_span_violations += (sep < span) as usize;
        r.span_double_violations += (span_half < sep_double) as usize;
        r.greedy_violations += (greedy.len() > sep || !is_separated_set(&inst.at_delta, inst.nu, &greedy)) as usize;
        r.greedy_equal += (greedy.len() == sep) as usize;
    }
    for (m, nu, expect) in regression_instances() {
        let g = max_separated_set(&m, nu).len();
        let e = exact_max_separated(&m, nu).expect("within cap");
        r.regression_failures += (g != expect || e != expect) as usize;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_has_no_violations() {
        let r = run_suite(60, 12, 1);
        assert!(r.passed(), "{:?}", r);
        assert!(r.equality_rate() > 0.3);
    }

    #[test]
    fn instances_are_deterministic_and_valid() {
        let a = random_instance(5, 3, 15);
        let b = random_instance(5, 3, 15);
        assert_eq!(a.at_delta, b.at_delta);
        assert!(a.at_delta.is_valid() && a.at_double.is_valid());
    }
}
