//! A Denjoy circle homeomorphism obtained by blowing up the rotation orbit
//! `{n alpha}` into wandering intervals `I_n` of length `l_n`.
//!
//! Points are stored exactly in one of two forms: a Cantor point with
//! semiconjugacy coordinate `xi`, or a gap point `(n, t)` meaning
//! `a_n + t * l_n`. The map sends `xi` to `xi + alpha` and `(n, t)` to
//! `(n + 1, t)`, so the semiconjugacy `p o f = R_alpha o p` holds by
//! construction.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::real::{wrap_unit, Phase};

/// Default number of tabulated gaps on each side of `I_0`.
pub const DEFAULT_HALF_WIDTH: i64 = 1 << 16;

#[derive(Debug, Clone)]
pub struct DenjoyModel {
    alpha: Phase,
    mass: f64,
    weight_scale: f64,
    half_width: i64,
    /// Sorted anchors `xi_n = {n alpha}` with their gap index.
    anchors: Vec<(Phase, i64)>,
    /// Sorted position of gap `n`, indexed by `n + half_width`.
    position: Vec<u32>,
    /// Left endpoints `a` in sorted order.
    left: Vec<f64>,
    /// Total gap length strictly before each sorted position (and one past the end).
    before: Vec<f64>,
    /// Length of the continuous part, `1 - sum of tabulated gaps`.
    scale: f64,
}

/// A point of the Denjoy circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DenjoyPoint {
    Cantor(Phase),
    Gap { n: i64, t: f64 },
}

impl DenjoyModel {
    /// Gap weights `l_n = c / (|n|+1)^2` with `sum over Z = mass`.
    pub fn new(alpha: Phase, mass: f64) -> DenjoyModel {
        DenjoyModel::with_half_width(alpha, mass, DEFAULT_HALF_WIDTH)
    }

    pub fn with_half_width(alpha: Phase, mass: f64, half_width: i64) -> DenjoyModel {
        assert!(mass > 0.0 && mass < 1.0 && half_width >= 1);
        let weight_scale = mass / (PI * PI / 3.0 - 1.0);
        let mut anchors: Vec<(Phase, i64)> =
            (-half_width..=half_width).map(|n| (alpha.mul_signed(n), n)).collect();
        anchors.sort_unstable();
        let mut position = vec![0u32; anchors.len()];
        for (k, &(_, n)) in anchors.iter().enumerate() {
            position[(n + half_width) as usize] = k as u32;
        }
        let weight = |n: i64| weight_scale / ((n.unsigned_abs() + 1) as f64).powi(2);
        let mut before = Vec::with_capacity(anchors.len() + 1);
        let mut acc = 0.0;
        for &(_, n) in &anchors {
            before.push(acc);
            acc += weight(n);
        }
        before.push(acc);
        let scale = 1.0 - acc;
        let left = anchors.iter().zip(&before).map(|(&(xi, _), &b)| scale * xi.to_f64() + b).collect();
        DenjoyModel { alpha, mass, weight_scale, half_width, anchors, position, left, before, scale }
    }

    pub fn alpha(&self) -> Phase {
        self.alpha
    }

    pub fn half_width(&self) -> i64 {
        self.half_width
    }

    /// `l_n` for any `n`, tabulated or not.
    pub fn gap_length(&self, n: i64) -> f64 {
        self.weight_scale / ((n.unsigned_abs() + 1) as f64).powi(2)
    }

    /// Mass of the gaps left out of the table.
    pub fn tail_mass(&self) -> f64 {
        self.mass - (1.0 - self.scale)
    }

    /// Fails when the untabulated gap mass exceeds `tolerance`.
    pub fn check_accuracy(&self, tolerance: f64) -> Result<()> {
        let tail = self.tail_mass();
        if tail > tolerance {
            Err(Error::AccuracyUnreachable { requested: tolerance, resolution: tail })
        } else {
            Ok(())
        }
    }

    fn contains(&self, n: i64) -> bool {
        n.abs() <= self.half_width
    }

    /// Left endpoint `a_n` of a tabulated gap.
    pub fn left_endpoint(&self, n: i64) -> f64 {
        assert!(self.contains(n), "gap {n} is not tabulated");
        self.left[self.position[(n + self.half_width) as usize] as usize]
    }

    pub fn right_endpoint(&self, n: i64) -> f64 {
        self.left_endpoint(n) + self.gap_length(n)
    }

    /// The increasing map `h` from the semiconjugacy coordinate to the circle.
    pub fn embed(&self, xi: Phase) -> f64 {
        // number of anchors strictly below xi
        let k = self.anchors.partition_point(|&(a, _)| a < xi);
        self.scale * xi.to_f64() + self.before[k]
    }

    /// Circle coordinate of a point.
    pub fn position(&self, p: DenjoyPoint) -> f64 {
        match p {
            DenjoyPoint::Cantor(xi) => self.embed(xi),
            DenjoyPoint::Gap { n, t } => wrap_unit(self.left_endpoint(n) + t * self.gap_length(n)),
        }
    }

    /// The Cantor function `p`.
    pub fn project(&self, p: DenjoyPoint) -> Phase {
        match p {
            DenjoyPoint::Cantor(xi) => xi,
            DenjoyPoint::Gap { n, .. } => self.alpha.mul_signed(n),
        }
    }

    /// Locates a circle coordinate.
    pub fn locate(&self, x: f64) -> DenjoyPoint {
        let x = wrap_unit(x);
        let k = self.left.partition_point(|&a| a <= x);
        if k > 0 {
            let (_, n) = self.anchors[k - 1];
            let a = self.left[k - 1];
            let len = self.gap_length(n);
            if x < a + len {
                return DenjoyPoint::Gap { n, t: (x - a) / len };
            }
        }
        let xi = (x - self.before[k]) / self.scale;
        DenjoyPoint::Cantor(Phase::from_f64(xi))
    }

    /// One step of the homeomorphism.
    pub fn step(&self, p: DenjoyPoint) -> DenjoyPoint {
        match p {
            DenjoyPoint::Cantor(xi) => DenjoyPoint::Cantor(xi.add(self.alpha)),
            DenjoyPoint::Gap { n, t } if self.contains(n + 1) => DenjoyPoint::Gap { n: n + 1, t },
            // gaps beyond the table are shorter than the tail mass; collapse
            DenjoyPoint::Gap { n, .. } => DenjoyPoint::Cantor(self.alpha.mul_signed(n + 1)),
        }
    }

    /// `denjoy_step` on circle coordinates.
    pub fn step_coordinate(&self, x: f64) -> f64 {
        self.position(self.step(self.locate(x)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::{circle_dist, Real};
    use proptest::prelude::*;

    fn model() -> DenjoyModel {
        DenjoyModel::with_half_width(Real::golden().phase, 2.0 / 3.0, 4096)
    }

    #[test]
    fn largest_gap_exceeds_a_quarter() {
        let m = model();
        assert!(m.gap_length(0) > 0.25);
        assert!((m.gap_length(0) - 0.2911).abs() < 1e-3);
    }

    #[test]
    fn endpoints_map_to_endpoints() {
        let m = model();
        let a0 = m.left_endpoint(0);
        let image = m.step_coordinate(a0);
        assert!(circle_dist(image, m.left_endpoint(1)) < 1e-12);
    }

    #[test]
    fn gap_midpoint_maps_to_midpoint() {
        let m = model();
        let mid0 = m.left_endpoint(0) + m.gap_length(0) / 2.0;
        let mid1 = wrap_unit(m.left_endpoint(1) + m.gap_length(1) / 2.0);
        assert!(circle_dist(m.step_coordinate(mid0), mid1) < 1e-12);
    }

    #[test]
    fn gaps_are_disjoint_and_ordered() {
        let m = model();
        for k in 1..m.left.len() {
            let (_, prev) = m.anchors[k - 1];
            assert!(m.left[k - 1] + m.gap_length(prev) <= m.left[k] + 1e-15);
        }
        let last = m.anchors.last().unwrap().1;
        assert!(m.left.last().unwrap() + m.gap_length(last) <= 1.0 + 1e-12);
    }

    #[test]
    fn gap_images_have_next_length_and_shrink() {
        let m = model();
        let mut p = DenjoyPoint::Gap { n: -20, t: 0.3 };
        let mut lengths = Vec::new();
        for _ in 0..40 {
            if let DenjoyPoint::Gap { n, .. } = p {
                lengths.push(m.gap_length(n));
            }
            p = m.step(p);
        }
        assert_eq!(lengths[1], m.gap_length(-19));
        assert!(lengths.last().unwrap() < &m.gap_length(0));
        assert!(lengths[39] < 0.3 * lengths[20]);
    }

    #[test]
    fn inaccessible_points_follow_the_rotation() {
        let m = model();
        let xi = Phase::from_f64(0.123456789);
        let x = m.embed(xi);
        let p = m.locate(x);
        assert!(matches!(p, DenjoyPoint::Cantor(_)));
        let image = m.step(p);
        assert!(m.project(image).arc(xi.add(m.alpha())) < 1e-12);
    }

    #[test]
    fn accuracy_check() {
        let m = model();
        assert!(m.check_accuracy(1e-3).is_ok());
        assert!(matches!(m.check_accuracy(1e-9), Err(Error::AccuracyUnreachable { .. })));
    }

    proptest! {
        #[test]
        fn semiconjugacy_holds(x in 0.0f64..1.0) {
            let m = model();
            let p = m.locate(x);
            let lhs = m.project(m.step(p));
            let rhs = m.project(p).add(m.alpha());
            prop_assert!(lhs.arc(rhs) < 1e-12);
        }

        #[test]
        fn locate_inverts_position(x in 0.0f64..1.0) {
            let m = model();
            prop_assert!(circle_dist(m.position(m.locate(x)), x) < 1e-12);
        }
    }
}
