//! Pair-frequency matrices for whole samples.
//!
//! Orbits are advanced in blocks of [`BLOCK`] ticks. Each block stores the
//! features as `[coordinate][tick][point]` so that the inner loop over the
//! second point of a pair runs over contiguous memory. Rows of the count
//! matrix are independent and processed in parallel; every entry is written
//! by exactly one task, so results do not depend on the thread count.
//!
//! Samples made of consecutive shifts of one sequence use a lag
//! decomposition instead: for a lag `h` the pairs `(i, i+h)` share one
//! difference sequence, and prefix sums along residue classes give every
//! count in constant time.

use rayon::prelude::*;

use super::{checkpoints, FrequencyMatrix, Mode, SeparationRecord};
use crate::sampling::{OrbitSample, ShiftOrbit};
use crate::symbolic::cantor_depth;
use crate::systems::{word_mask, CoordKind, State, System};

/// Ticks per feature block.
pub const BLOCK: usize = 256;

struct Blocks<'a> {
    sys: &'a System,
    states: Vec<State>,
    dim: usize,
    scratch: Vec<u64>,
}

impl<'a> Blocks<'a> {
    fn new(sample: &'a OrbitSample) -> Blocks<'a> {
        let sys = &sample.system;
        let states = sample.points.iter().map(|p| sys.init(p)).collect();
        Blocks { sys, states, dim: sys.dimension(), scratch: Vec::new() }
    }

    /// Features of the next `len` ticks into `buf`, laid out `[c][t][i]`.
    fn fill(&mut self, len: usize, buf: &mut Vec<u64>) {
        let (m, dim, sys) = (self.states.len(), self.dim, self.sys);
        self.scratch.resize(m * len * dim, 0);
        self.states.par_iter_mut().zip(self.scratch.par_chunks_mut(len * dim)).for_each(|(s, chunk)| {
            for t in 0..len {
                sys.features(s, &mut chunk[t * dim..(t + 1) * dim]);
                sys.advance(s);
            }
        });
        buf.resize(dim * len * m, 0);
        for i in 0..m {
            for t in 0..len {
                for c in 0..dim {
                    buf[(c * len + t) * m + i] = self.scratch[(i * len + t) * dim + c];
                }
            }
        }
    }
}

/// ORs into `sep[j]`, `j > i`, whether coordinate `c` separates `i` and `j`.
#[inline]
fn mark(kind: CoordKind, col: &[u64], i: usize, delta: f64, mask: u64, sep: &mut [u8]) {
    let a = col[i];
    let (col, sep) = (&col[i + 1..], &mut sep[i + 1..]);
    match kind {
        CoordKind::Circle => {
            let a = f64::from_bits(a);
            for (s, &b) in sep.iter_mut().zip(col) {
                let d = (a - f64::from_bits(b)).abs();
                *s |= (d.min(1.0 - d) >= delta) as u8;
            }
        }
        CoordKind::Interval => {
            let a = f64::from_bits(a);
            for (s, &b) in sep.iter_mut().zip(col) {
                *s |= ((a - f64::from_bits(b)).abs() >= delta) as u8;
            }
        }
        CoordKind::Shift => {
            for (s, &b) in sep.iter_mut().zip(col) {
                *s |= ((a ^ b) & mask != 0) as u8;
            }
        }
    }
}

/// Pair frequencies at one `delta`.
pub fn pair_frequencies(sample: &OrbitSample, delta: f64, mode: Mode) -> SeparationRecord {
    pair_frequencies_multi(sample, &[delta], mode).pop().expect("one record per delta")
}

/// Pair frequencies for several `delta` values from one pass over the orbits.
pub fn pair_frequencies_multi(sample: &OrbitSample, deltas: &[f64], mode: Mode) -> Vec<SeparationRecord> {
    let horizon = sample.horizon;
    if let Some(orbit) = &sample.shift_orbit {
        return deltas
            .iter()
            .map(|&delta| SeparationRecord {
                delta,
                horizon,
                mode,
                frequencies: shift_frequencies(orbit, sample.len(), horizon, delta, mode),
            })
            .collect();
    }
    let m = sample.len();
    let nd = deltas.len();
    let kinds = sample.system.coords().to_vec();
    let masks: Vec<u64> = deltas.iter().map(|&d| word_mask(d)).collect();
    let mut counts = vec![0u32; m * nd * m];
    let mut best = vec![0f64; m * nd * m];
    let mut blocks = Blocks::new(sample);
    let mut buf = Vec::new();
    let mut t = 0u64;
    for cp in checkpoints(horizon, mode) {
        while t < cp {
            let len = BLOCK.min((cp - t) as usize);
            blocks.fill(len, &mut buf);
            let buf = &buf;
            counts.par_chunks_mut(nd * m).enumerate().for_each(|(i, row)| {
                let mut sep = vec![0u8; m];
                for tt in 0..len {
                    for (di, (&delta, &mask)) in deltas.iter().zip(&masks).enumerate() {
                        sep[i + 1..].fill(0);
                        for (c, &kind) in kinds.iter().enumerate() {
                            let col = &buf[(c * len + tt) * m..(c * len + tt + 1) * m];
                            mark(kind, col, i, delta, mask, &mut sep);
                        }
                        let r = &mut row[di * m..(di + 1) * m];
                        for (acc, &s) in r[i + 1..].iter_mut().zip(&sep[i + 1..]) {
                            *acc += s as u32;
                        }
                    }
                }
            });
            t += len as u64;
        }
        let n = cp as f64;
        best.par_chunks_mut(nd * m).zip(counts.par_chunks(nd * m)).for_each(|(b, c)| {
            for (bv, &cv) in b.iter_mut().zip(c) {
                *bv = bv.max(cv as f64 / n);
            }
        });
    }
    (0..nd)
        .map(|di| {
            let mut data = vec![0f64; m * m];
            for i in 0..m {
                for j in i + 1..m {
                    let v = best[(i * nd + di) * m + j];
                    data[i * m + j] = v;
                    data[j * m + i] = v;
                }
            }
            SeparationRecord { delta: deltas[di], horizon, mode, frequencies: FrequencyMatrix::from_raw(m, data) }
        })
        .collect()
}

/// Lag decomposition for the first `m` shifts of one sequence.
fn shift_frequencies(orbit: &ShiftOrbit, m: usize, horizon: u64, delta: f64, mode: Mode) -> FrequencyMatrix {
    let Some(depth) = cantor_depth(delta) else {
        return FrequencyMatrix::zeros(m);
    };
    let depth = depth.min(63) as usize;
    let p = orbit.stride as usize;
    let t_max = horizon as usize;
    let cps = checkpoints(horizon, mode);
    // largest position read: (m-1) + p(T-1) + depth + lag (< m)
    let len = 2 * m + p * t_max + depth + 1;
    let s: Vec<u8> = (0..len as u64).map(|k| orbit.seq.symbol_at(k)).collect();
    let lags: Vec<Vec<f64>> = (1..m)
        .into_par_iter()
        .map(|h| {
            let pairs = m - h;
            let n_idx = pairs - 1 + p * (t_max - 1) + 1;
            let mut q = vec![0u32; n_idx];
            let mut next_diff = usize::MAX;
            let mut e = vec![false; n_idx];
            for k in (0..n_idx + depth).rev() {
                if s[k] != s[k + h] {
                    next_diff = k;
                }
                if k < n_idx {
                    e[k] = next_diff <= k + depth;
                }
            }
            for k in 0..n_idx {
                q[k] = e[k] as u32 + if k >= p { q[k - p] } else { 0 };
            }
            (0..pairs)
                .map(|i| {
                    let base = if i >= p { q[i - p] } else { 0 };
                    cps.iter()
                        .map(|&n| (q[i + p * (n as usize - 1)] - base) as f64 / n as f64)
                        .fold(0.0, f64::max)
                })
                .collect()
        })
        .collect();
    let mut out = FrequencyMatrix::zeros(m);
    for (h, row) in (1..m).zip(&lags) {
        for (i, &v) in row.iter().enumerate() {
            out.set(i, i + h, v);
        }
    }
    out
}

/// First tick at which each pair is `delta`-separated; `u32::MAX` if never
/// within the horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstHits {
    n: usize,
    data: Vec<u32>,
}

impl FirstHits {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        if i == j {
            u32::MAX
        } else {
            let (a, b) = if i < j { (i, j) } else { (j, i) };
            self.data[a * self.n + b]
        }
    }
}

/// Bowen-Dinaburg separation times of all pairs in the sample.
pub fn first_hit_times(sample: &OrbitSample, delta: f64, horizon: u64) -> FirstHits {
    let m = sample.len();
    let kinds = sample.system.coords().to_vec();
    let mask = word_mask(delta);
    let mut hits = vec![u32::MAX; m * m];
    let mut blocks = Blocks::new(sample);
    let mut buf = Vec::new();
    let mut t = 0u64;
    while t < horizon {
        let len = BLOCK.min((horizon - t) as usize);
        blocks.fill(len, &mut buf);
        let buf = &buf;
        hits.par_chunks_mut(m).enumerate().for_each(|(i, row)| {
            let mut sep = vec![0u8; m];
            for tt in 0..len {
                sep[i + 1..].fill(0);
                for (c, &kind) in kinds.iter().enumerate() {
                    let col = &buf[(c * len + tt) * m..(c * len + tt + 1) * m];
                    mark(kind, col, i, delta, mask, &mut sep);
                }
                let now = (t + tt as u64) as u32;
                for (h, &s) in row[i + 1..].iter_mut().zip(&sep[i + 1..]) {
                    if s != 0 && *h == u32::MAX {
                        *h = now;
                    }
                }
            }
        });
        t += len as u64;
    }
    FirstHits { n: m, data: hits }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::separation::sep_frequency;
    use crate::systems::System;

    fn brute(sample: &OrbitSample, delta: f64, mode: Mode) -> FrequencyMatrix {
        FrequencyMatrix::from_fn(sample.len(), |i, j| {
            sep_frequency(&sample.system, delta, &sample.points[i], &sample.points[j], sample.horizon, mode)
        })
    }

    #[test]
    fn engine_matches_pairwise_loop() {
        for spec in ["doubling", "product(rotation:alpha=golden,morse_smale)", "pinched:alpha=3,eps=0.05", "denjoy"] {
            let sys = System::parse(spec).unwrap();
            let sample = OrbitSample::build(&sys, 12, 700, 3);
            for mode in [Mode::SuffixMax, Mode::Terminal] {
                let rec = pair_frequencies(&sample, 0.2, mode);
                assert_eq!(rec.frequencies, brute(&sample, 0.2, mode), "{spec} {mode:?}");
                assert!(rec.frequencies.is_valid());
            }
        }
    }

    #[test]
    fn multi_delta_matches_single() {
        let sys = System::parse("torus_shear").unwrap();
        let sample = OrbitSample::build(&sys, 10, 300, 5);
        let multi = pair_frequencies_multi(&sample, &[0.1, 0.3], Mode::SuffixMax);
        assert_eq!(multi[1], pair_frequencies(&sample, 0.3, Mode::SuffixMax));
    }

    #[test]
    fn shift_path_matches_generic() {
        for spec in ["sturmian:alpha=golden", "power(toeplitz:m=3,v=*1*,2)", "thue_morse"] {
            let sys = System::parse(spec).unwrap();
            let fast = OrbitSample::build(&sys, 20, 500, 0);
            let mut slow = fast.clone();
            slow.shift_orbit = None;
            for delta in [1.0, 0.25, 0.01] {
                let a = pair_frequencies(&fast, delta, Mode::SuffixMax);
                let b = pair_frequencies(&slow, delta, Mode::SuffixMax);
                assert_eq!(a, b, "{spec} delta={delta}");
            }
        }
    }

    #[test]
    fn first_hits_match_brute_force() {
        let sys = System::parse("doubling").unwrap();
        let sample = OrbitSample::build(&sys, 8, 300, 9);
        let hits = first_hit_times(&sample, 0.25, 300);
        for i in 0..8 {
            for j in 0..8 {
                if i == j {
                    continue;
                }
                let expect = (0..300u32)
                    .find(|&n| crate::separation::sep_count(&sys, 0.25, &sample.points[i], &sample.points[j], n as u64 + 1) > 0)
                    .unwrap_or(u32::MAX);
                assert_eq!(hits.get(i, j), expect);
            }
        }
    }

    #[test]
    fn deterministic_across_pools() {
        let sys = System::parse("product(doubling,rotation:alpha=golden)").unwrap();
        let sample = OrbitSample::build(&sys, 40, 600, 11);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| pair_frequencies(&sample, 0.1, Mode::SuffixMax));
        let b = four.install(|| pair_frequencies(&sample, 0.1, Mode::SuffixMax));
        assert_eq!(a, b);
    }
}
