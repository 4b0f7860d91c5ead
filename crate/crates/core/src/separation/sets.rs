//! Separated and spanning sets over a pair-frequency matrix.
//!
//! A pair is separated at level `nu` when its frequency is `>= nu`; a point
//! `y` spans `x` when their frequency is `< nu`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::FrequencyMatrix;
use crate::error::{Error, Result};
use crate::systems::Point;

/// Largest sample handled by the exact searches.
pub const EXACT_CAP: usize = 18;

/// Greedy separated set: scan in index order, keep a point when it is
/// separated from everything kept so far.
pub fn max_separated_set(freq: &FrequencyMatrix, nu: f64) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    for i in 0..freq.len() {
        let row = freq.row(i);
        if kept.iter().all(|&j| row[j] >= nu) {
            kept.push(i);
        }
    }
    kept
}

/// Every pair of `set` is separated.
pub fn is_separated_set(freq: &FrequencyMatrix, nu: f64, set: &[usize]) -> bool {
    set.iter().enumerate().all(|(a, &i)| set[a + 1..].iter().all(|&j| freq.get(i, j) >= nu))
}

/// Greedy spanning set: repeatedly take the point covering the most
/// uncovered points, ties to the lower index. A point covers itself.
pub fn min_spanning_set(freq: &FrequencyMatrix, nu: f64) -> Vec<usize> {
    let n = freq.len();
    let covers: Vec<Vec<usize>> =
        (0..n).map(|c| (0..n).filter(|&x| x == c || freq.get(c, x) < nu).collect()).collect();
    let mut covered = vec![false; n];
    let mut left = n;
    let mut heap: BinaryHeap<(usize, Reverse<usize>)> = covers.iter().enumerate().map(|(c, v)| (v.len(), Reverse(c))).collect();
    let mut chosen = Vec::new();
    while left > 0 {
        let (gain, Reverse(c)) = heap.pop().expect("uncovered points remain coverable");
        let fresh = covers[c].iter().filter(|&&x| !covered[x]).count();
        if fresh < gain {
            if fresh > 0 {
                heap.push((fresh, Reverse(c)));
            }
            continue;
        }
        for &x in &covers[c] {
            if !covered[x] {
                covered[x] = true;
                left -= 1;
            }
        }
        chosen.push(c);
    }
    chosen.sort_unstable();
    chosen
}

fn check_cap(n: usize) -> Result<()> {
    if n > EXACT_CAP {
        Err(Error::SizeCap { cap: EXACT_CAP, got: n })
    } else {
        Ok(())
    }
}

/// Exact maximum separated set size (maximum clique of the `>= nu` graph).
pub fn exact_max_separated(freq: &FrequencyMatrix, nu: f64) -> Result<usize> {
    let n = freq.len();
    check_cap(n)?;
    let adj: Vec<u32> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && freq.get(i, j) >= nu).fold(0u32, |m, j| m | (1 << j)))
        .collect();
    fn grow(adj: &[u32], size: usize, candidates: u32, best: &mut usize) {
        if candidates == 0 {
            *best = (*best).max(size);
            return;
        }
        if size + candidates.count_ones() as usize <= *best {
            return;
        }
        let mut rest = candidates;
        while rest != 0 {
            if size + rest.count_ones() as usize <= *best {
                return;
            }
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            grow(adj, size + 1, rest & adj[v], best);
        }
    }
    let mut best = 0;
    grow(&adj, 0, if n == 0 { 0 } else { (1u32 << n) - 1 }, &mut best);
    Ok(best)
}

/// Exact minimum spanning set size (minimum dominating set of the `< nu` graph).
pub fn exact_min_spanning(freq: &FrequencyMatrix, nu: f64) -> Result<usize> {
    let n = freq.len();
    check_cap(n)?;
    if n == 0 {
        return Ok(0);
    }
    let cover: Vec<u32> = (0..n)
        .map(|c| (0..n).filter(|&x| x == c || freq.get(c, x) < nu).fold(0u32, |m, x| m | (1 << x)))
        .collect();
    let full = (1u32 << n) - 1;
    for size in 1..=n {
        if subsets_cover(&cover, full, 0, size, 0) {
            return Ok(size);
        }
    }
    Ok(n)
}

fn subsets_cover(cover: &[u32], full: u32, start: usize, left: usize, acc: u32) -> bool {
    if acc == full {
        return true;
    }
    if left == 0 {
        return false;
    }
    (start..cover.len()).any(|c| subsets_cover(cover, full, c + 1, left - 1, acc | cover[c]))
}

/// Result of a separated-set search restricted to a subset `E`.
#[derive(Debug, Clone, PartialEq)]
pub struct Restricted {
    /// Kept indices into the full sample.
    pub kept: Vec<usize>,
    /// Number of sample points inside `E`.
    pub considered: usize,
    pub warning: Option<String>,
}

/// Greedy separated set over the sample points that lie in `E`.
pub fn restricted_sep<F: Fn(&Point) -> bool>(
    points: &[Point],
    freq: &FrequencyMatrix,
    nu: f64,
    in_e: F,
) -> Restricted {
    let idx: Vec<usize> = (0..points.len()).filter(|&i| in_e(&points[i])).collect();
    if idx.is_empty() {
        return Restricted { kept: Vec::new(), considered: 0, warning: Some("no sample point lies in E".into()) };
    }
    let sub = freq.submatrix(&idx);
    let kept = max_separated_set(&sub, nu).into_iter().map(|k| idx[k]).collect();
    Restricted { kept, considered: idx.len(), warning: None }
}
