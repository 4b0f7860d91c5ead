//! The catalog of dynamical systems: step maps, metrics and orbit states.
//!
//! A [`SystemSpec`] compiles into a [`System`], a flat list of leaves. Each
//! leaf is one catalog map applied `reps` times per tick, so products
//! concatenate leaves and powers multiply `reps`. The metric is the maximum
//! over all coordinates.

pub mod annulus;
mod denjoy;
mod spec;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

pub use denjoy::{DenjoyModel, DenjoyPoint, DEFAULT_HALF_WIDTH};
pub use spec::{Kind, SystemSpec, Value};

use crate::error::{Error, Result};
use crate::real::{circle_dist, Phase, Real};
use crate::symbolic::{cantor_distance, Sequence};

/// Number of symbols a shift coordinate exposes to the metric.
pub const WINDOW: u32 = 64;

/// A point of a symbolic system: the sequence `sigma^offset(seq)`.
#[derive(Clone, Debug)]
pub struct SeqPoint {
    pub seq: Sequence,
    pub offset: u64,
}

impl SeqPoint {
    pub fn symbol_at(&self, k: u64) -> u8 {
        self.seq.symbol_at(self.offset + k)
    }

    /// Symbols `0..64` packed as bits, symbol `k` in bit `k`.
    pub fn window_bits(&self) -> u64 {
        (0..WINDOW as u64).fold(0u64, |acc, k| acc | (((self.symbol_at(k) & 1) as u64) << k))
    }
}

#[derive(Clone, Debug)]
pub enum Coord {
    /// Exact point of `R/Z`.
    Circle(Phase),
    /// Point of `[0, 1]`.
    Interval(f64),
    Shift(SeqPoint),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordKind {
    Circle,
    Interval,
    Shift,
}

/// A point of a phase space, one coordinate per dimension.
#[derive(Clone, Debug)]
pub struct Point(pub Vec<Coord>);

impl Point {
    pub fn circle(x: f64) -> Point {
        Point(vec![Coord::Circle(Phase::from_f64(x))])
    }

    pub fn interval(x: f64) -> Point {
        Point(vec![Coord::Interval(x)])
    }

    pub fn circle2(x: f64, y: f64) -> Point {
        Point(vec![Coord::Circle(Phase::from_f64(x)), Coord::Circle(Phase::from_f64(y))])
    }

    /// `(theta, x)` for skew products over the circle.
    pub fn skew(theta: f64, x: f64) -> Point {
        Point(vec![Coord::Circle(Phase::from_f64(theta)), Coord::Interval(x)])
    }

    pub fn shift(seq: &Sequence, offset: u64) -> Point {
        Point(vec![Coord::Shift(SeqPoint { seq: seq.clone(), offset })])
    }

    pub fn join(mut self, other: Point) -> Point {
        self.0.extend(other.0);
        self
    }

    /// Floating coordinates; shift coordinates report their offset.
    pub fn to_f64s(&self) -> Vec<f64> {
        self.0
            .iter()
            .map(|c| match c {
                Coord::Circle(p) => p.to_f64(),
                Coord::Interval(x) => *x,
                Coord::Shift(s) => s.offset as f64,
            })
            .collect()
    }
}

/// Parameters of `f(theta, x) = (theta + omega, min(1, tanh(alpha x) (sin(pi theta) + eps)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PinchedParams {
    pub alpha: f64,
    pub eps: f64,
    pub omega: Phase,
}

impl PinchedParams {
    pub fn new(alpha: f64, eps: f64, omega: Phase) -> PinchedParams {
        PinchedParams { alpha, eps, omega }
    }

    /// Fibre map `f_theta(x)`.
    #[inline]
    pub fn fibre(&self, theta: Phase, x: f64) -> f64 {
        ((self.alpha * x).tanh() * ((PI * theta.to_f64()).sin() + self.eps)).min(1.0)
    }
}

#[derive(Clone)]
pub enum LeafMap {
    Rotation { alpha: Phase },
    Doubling,
    TorusShear,
    MorseSmale,
    Denjoy(Arc<DenjoyModel>),
    Annulus,
    Pinched(PinchedParams),
    /// Left shift on the orbit closure of `source`.
    Shift { source: Sequence },
}

impl LeafMap {
    pub fn coords(&self) -> &'static [CoordKind] {
        match self {
            LeafMap::Rotation { .. } | LeafMap::Doubling | LeafMap::Denjoy(_) => &[CoordKind::Circle],
            LeafMap::TorusShear => &[CoordKind::Circle, CoordKind::Circle],
            LeafMap::MorseSmale => &[CoordKind::Interval],
            LeafMap::Annulus => &[CoordKind::Interval, CoordKind::Circle],
            LeafMap::Pinched(_) => &[CoordKind::Circle, CoordKind::Interval],
            LeafMap::Shift { .. } => &[CoordKind::Shift],
        }
    }
}

#[derive(Clone)]
pub struct Leaf {
    pub map: LeafMap,
    pub reps: u32,
    pub kind: Kind,
}

/// Exact orbit state of one leaf.
#[derive(Clone, Debug)]
pub enum LeafState {
    Phase(Phase),
    /// Binary expansion for the doubling map; bits past the stored 128 are
    /// drawn from a hash of `(stream, pos)`.
    Binary { bits: u128, stream: u64, pos: u64 },
    Torus(Phase, Phase),
    Unit(f64),
    Denjoy(DenjoyPoint),
    Annulus { x: f64, y: Phase },
    Pinched { theta: Phase, x: f64 },
    Shift { seq: Sequence, pos: u64, window: u64 },
}

/// Orbit state of a whole point.
#[derive(Clone, Debug)]
pub struct State(pub Vec<LeafState>);

/// A compiled system.
#[derive(Clone)]
pub struct System {
    spec: SystemSpec,
    leaves: Vec<Leaf>,
    coords: Vec<CoordKind>,
}

impl fmt::Debug for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "System({})", self.spec)
    }
}

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn tail_bit(stream: u64, pos: u64) -> u128 {
    (splitmix64(stream ^ splitmix64(pos)) >> 63) as u128
}

impl System {
    pub fn parse(text: &str) -> Result<System> {
        System::compile(&SystemSpec::parse(text)?)
    }

    pub fn compile(spec: &SystemSpec) -> Result<System> {
        let mut leaves = Vec::new();
        collect_leaves(spec, 1, &mut leaves)?;
        let coords = leaves.iter().flat_map(|l| l.map.coords().iter().copied()).collect();
        Ok(System { spec: spec.clone(), leaves, coords })
    }

    pub fn spec(&self) -> &SystemSpec {
        &self.spec
    }

    pub fn leaves(&self) -> &[Leaf] {
        &self.leaves
    }

    /// Coordinate layout of points and features.
    pub fn coords(&self) -> &[CoordKind] {
        &self.coords
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    /// Validates the point against the phase space.
    pub fn check_point(&self, p: &Point) -> Result<()> {
        let bad = |msg: String| Error::Domain { name: "point".into(), msg };
        if p.0.len() != self.coords.len() {
            return Err(bad(format!("expected {} coordinates, got {}", self.coords.len(), p.0.len())));
        }
        for (c, kind) in p.0.iter().zip(&self.coords) {
            let ok = match (c, kind) {
                (Coord::Circle(_), CoordKind::Circle) => true,
                (Coord::Interval(x), CoordKind::Interval) => (0.0..=1.0).contains(x),
                (Coord::Shift(_), CoordKind::Shift) => true,
                _ => false,
            };
            if !ok {
                return Err(bad(format!("coordinate {c:?} does not fit {kind:?}")));
            }
        }
        Ok(())
    }

    pub fn init(&self, p: &Point) -> State {
        let mut coords = p.0.iter();
        let mut next = || coords.next().expect("point dimension matches system");
        let leaves = self
            .leaves
            .iter()
            .map(|leaf| match &leaf.map {
                LeafMap::Rotation { .. } => LeafState::Phase(circle(next())),
                LeafMap::Doubling => {
                    let bits = circle(next()).0;
                    let stream = splitmix64(bits as u64 ^ splitmix64((bits >> 64) as u64));
                    LeafState::Binary { bits, stream, pos: 0 }
                }
                LeafMap::TorusShear => {
                    let x = circle(next());
                    LeafState::Torus(x, circle(next()))
                }
                LeafMap::MorseSmale => LeafState::Unit(interval(next())),
                LeafMap::Denjoy(model) => LeafState::Denjoy(model.locate(circle(next()).to_f64())),
                LeafMap::Annulus => {
                    let x = interval(next());
                    LeafState::Annulus { x, y: circle(next()) }
                }
                LeafMap::Pinched(_) => {
                    let theta = circle(next());
                    LeafState::Pinched { theta, x: interval(next()) }
                }
                LeafMap::Shift { .. } => match next() {
                    Coord::Shift(s) => {
                        LeafState::Shift { seq: s.seq.clone(), pos: s.offset, window: s.window_bits() }
                    }
                    other => panic!("expected a shift coordinate, got {other:?}"),
                },
            })
            .collect();
        State(leaves)
    }

    /// Reads the point back from a state.
    pub fn point(&self, s: &State) -> Point {
        let mut out = Vec::with_capacity(self.coords.len());
        for (leaf, st) in self.leaves.iter().zip(&s.0) {
            match (st, &leaf.map) {
                (LeafState::Phase(p), _) => out.push(Coord::Circle(*p)),
                (LeafState::Binary { bits, .. }, _) => out.push(Coord::Circle(Phase(*bits))),
                (LeafState::Torus(x, y), _) => out.extend([Coord::Circle(*x), Coord::Circle(*y)]),
                (LeafState::Unit(x), _) => out.push(Coord::Interval(*x)),
                (LeafState::Denjoy(d), LeafMap::Denjoy(model)) => {
                    out.push(Coord::Circle(Phase::from_f64(model.position(*d))))
                }
                (LeafState::Annulus { x, y }, _) => out.extend([Coord::Interval(*x), Coord::Circle(*y)]),
                (LeafState::Pinched { theta, x }, _) => out.extend([Coord::Circle(*theta), Coord::Interval(*x)]),
                (LeafState::Shift { seq, pos, .. }, _) => {
                    out.push(Coord::Shift(SeqPoint { seq: seq.clone(), offset: *pos }))
                }
                _ => unreachable!("state does not match leaf"),
            }
        }
        Point(out)
    }

    /// Advances a state by one tick.
    #[inline]
    pub fn advance(&self, s: &mut State) {
        for (leaf, st) in self.leaves.iter().zip(s.0.iter_mut()) {
            for _ in 0..leaf.reps {
                advance_leaf(&leaf.map, st);
            }
        }
    }

    /// Writes one feature per coordinate: `f64` bits for circle and interval
    /// coordinates, the packed symbol window for shifts.
    #[inline]
    pub fn features(&self, s: &State, out: &mut [u64]) {
        let mut k = 0;
        let mut put = |v: u64| {
            out[k] = v;
            k += 1;
        };
        for (leaf, st) in self.leaves.iter().zip(&s.0) {
            match (st, &leaf.map) {
                (LeafState::Phase(p), _) => put(p.to_f64().to_bits()),
                (LeafState::Binary { bits, .. }, _) => put(Phase(*bits).to_f64().to_bits()),
                (LeafState::Torus(x, y), _) => {
                    put(x.to_f64().to_bits());
                    put(y.to_f64().to_bits());
                }
                (LeafState::Unit(x), _) => put(x.to_bits()),
                (LeafState::Denjoy(d), LeafMap::Denjoy(model)) => put(model.position(*d).to_bits()),
                (LeafState::Annulus { x, y }, _) => {
                    put(x.to_bits());
                    put(y.to_f64().to_bits());
                }
                (LeafState::Pinched { theta, x }, _) => {
                    put(theta.to_f64().to_bits());
                    put(x.to_bits());
                }
                (LeafState::Shift { window, .. }, _) => put(*window),
                _ => unreachable!("state does not match leaf"),
            }
        }
    }

    /// `f(p)`.
    pub fn step(&self, p: &Point) -> Point {
        let mut s = self.init(p);
        self.advance(&mut s);
        self.point(&s)
    }

    /// `f^n(p)`.
    pub fn iterate(&self, p: &Point, n: u64) -> Point {
        let mut s = self.init(p);
        for _ in 0..n {
            self.advance(&mut s);
        }
        self.point(&s)
    }

    /// Maximum metric over coordinates: arc distance on circles, absolute
    /// difference on intervals, the Cantor metric on shifts.
    pub fn distance(&self, a: &Point, b: &Point) -> f64 {
        a.0.iter().zip(&b.0).map(|(x, y)| coord_distance(x, y)).fold(0.0, f64::max)
    }

    /// Whether the features of two states are at distance `>= delta`.
    #[inline]
    pub fn separated(&self, fa: &[u64], fb: &[u64], delta: f64) -> bool {
        let mask = word_mask(delta);
        self.coords
            .iter()
            .zip(fa.iter().zip(fb))
            .any(|(kind, (&a, &b))| feature_separated(*kind, a, b, delta, mask))
    }

    /// The generating sequence of a symbolic leaf.
    pub fn shift_source(&self) -> Option<&Sequence> {
        match self.leaves.as_slice() {
            [Leaf { map: LeafMap::Shift { source }, .. }] => Some(source),
            _ => None,
        }
    }
}

/// Bits `0..=J` where `2^-J` is the smallest Cantor distance `>= delta`.
#[inline]
pub fn word_mask(delta: f64) -> u64 {
    match crate::symbolic::cantor_depth(delta) {
        None => 0,
        Some(j) if j >= 63 => u64::MAX,
        Some(j) => (1u64 << (j + 1)) - 1,
    }
}

#[inline]
pub fn feature_separated(kind: CoordKind, a: u64, b: u64, delta: f64, mask: u64) -> bool {
    match kind {
        CoordKind::Circle => {
            let d = (f64::from_bits(a) - f64::from_bits(b)).abs();
            d.min(1.0 - d) >= delta
        }
        CoordKind::Interval => (f64::from_bits(a) - f64::from_bits(b)).abs() >= delta,
        CoordKind::Shift => (a ^ b) & mask != 0,
    }
}

pub fn coord_distance(a: &Coord, b: &Coord) -> f64 {
    match (a, b) {
        (Coord::Circle(x), Coord::Circle(y)) => x.arc(*y),
        (Coord::Interval(x), Coord::Interval(y)) => (x - y).abs(),
        (Coord::Shift(x), Coord::Shift(y)) => {
            cantor_distance(&x.seq.shift(x.offset), &y.seq.shift(y.offset), WINDOW)
        }
        (Coord::Circle(x), Coord::Interval(y)) | (Coord::Interval(y), Coord::Circle(x)) => circle_dist(x.to_f64(), *y),
        _ => panic!("incompatible coordinates {a:?} and {b:?}"),
    }
}

fn circle(c: &Coord) -> Phase {
    match c {
        Coord::Circle(p) => *p,
        Coord::Interval(x) => Phase::from_f64(*x),
        Coord::Shift(_) => panic!("expected a circle coordinate"),
    }
}

fn interval(c: &Coord) -> f64 {
    match c {
        Coord::Interval(x) => *x,
        Coord::Circle(p) => p.to_f64(),
        Coord::Shift(_) => panic!("expected an interval coordinate"),
    }
}

#[inline]
fn advance_leaf(map: &LeafMap, st: &mut LeafState) {
    match (map, st) {
        (LeafMap::Rotation { alpha }, LeafState::Phase(p)) => *p = p.add(*alpha),
        (LeafMap::Doubling, LeafState::Binary { bits, stream, pos }) => {
            *bits = (*bits << 1) | tail_bit(*stream, *pos);
            *pos += 1;
        }
        (LeafMap::TorusShear, LeafState::Torus(x, y)) => *y = y.add(*x),
        (LeafMap::MorseSmale, LeafState::Unit(x)) => *x *= *x,
        (LeafMap::Denjoy(model), LeafState::Denjoy(d)) => *d = model.step(*d),
        (LeafMap::Annulus, LeafState::Annulus { x, y }) => {
            *y = y.add(Phase::from_f64(annulus::alpha(*x)));
            *x *= *x;
        }
        (LeafMap::Pinched(params), LeafState::Pinched { theta, x }) => {
            *x = params.fibre(*theta, *x);
            *theta = theta.add(params.omega);
        }
        (LeafMap::Shift { .. }, LeafState::Shift { seq, pos, window }) => {
            let incoming = (seq.symbol_at(*pos + WINDOW as u64) & 1) as u64;
            *window = (*window >> 1) | (incoming << (WINDOW - 1));
            *pos += 1;
        }
        _ => unreachable!("state does not match leaf"),
    }
}

fn collect_leaves(spec: &SystemSpec, reps: u32, out: &mut Vec<Leaf>) -> Result<()> {
    let real = |key: &str| -> Real { spec.real(key).expect("validated spec") };
    let map = match spec.kind {
        Kind::Product => {
            for child in &spec.children {
                collect_leaves(child, reps, out)?;
            }
            return Ok(());
        }
        Kind::Power => {
            let reps = reps.checked_mul(spec.power).ok_or_else(|| Error::Domain {
                name: "m".into(),
                msg: "nested powers overflow".into(),
            })?;
            return collect_leaves(&spec.children[0], reps, out);
        }
        Kind::Rotation => LeafMap::Rotation { alpha: real("alpha").phase },
        Kind::Doubling => LeafMap::Doubling,
        Kind::TorusShear => LeafMap::TorusShear,
        Kind::MorseSmale => LeafMap::MorseSmale,
        Kind::Denjoy => LeafMap::Denjoy(Arc::new(DenjoyModel::new(real("alpha").phase, real("mass").value))),
        Kind::AnnulusTransient => LeafMap::Annulus,
        Kind::Pinched => LeafMap::Pinched(PinchedParams::new(
            real("alpha").value,
            real("eps").value,
            real("omega").phase,
        )),
        Kind::Sturmian => LeafMap::Shift { source: Sequence::sturmian(real("alpha").phase, Phase::ZERO) },
        Kind::Toeplitz => {
            let w = spec.toeplitz_word().expect("validated spec");
            LeafMap::Shift { source: w.sequence() }
        }
        Kind::ThueMorse => LeafMap::Shift { source: Sequence::thue_morse() },
    };
    out.push(Leaf { map, reps, kind: spec.kind });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sys(text: &str) -> System {
        System::parse(text).unwrap()
    }

    #[test]
    fn torus_shear_step() {
        let s = sys("torus_shear");
        let out = s.step(&Point::circle2(0.25, 0.1)).to_f64s();
        assert!((out[0] - 0.25).abs() < 1e-15 && (out[1] - 0.35).abs() < 1e-15);
    }

    #[test]
    fn pinched_step() {
        let s = sys("pinched:alpha=3,eps=0,omega=golden");
        let w = Real::golden().value;
        let out = s.step(&Point::skew(w, 1.0)).to_f64s();
        assert!((out[0] - (2.0 * w).fract()).abs() < 1e-14);
        assert!((out[1] - 3f64.tanh() * (PI * w).sin()).abs() < 1e-14);
    }

    #[test]
    fn doubling_step() {
        let s = sys("doubling");
        let third = Point(vec![Coord::Circle(Phase::from_ratio(&1u32.into(), &3u32.into()))]);
        let out = s.step(&third).to_f64s();
        assert!((out[0] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn doubling_keeps_expanding_past_float_precision() {
        let s = sys("doubling");
        let (a, b) = (Point::circle(0.1), Point::circle(0.1 + 1e-15));
        let far = (0..200u64).any(|n| s.distance(&s.iterate(&a, n), &s.iterate(&b, n)) > 0.25);
        assert!(far);
        let c = s.iterate(&Point::circle(0.3), 300).to_f64s()[0];
        assert!(c != 0.0);
    }

    #[test]
    fn morse_smale_converges() {
        let s = sys("morse_smale");
        for x in [0.2, 0.5, 0.9, 0.999999] {
            let end = s.iterate(&Point::interval(x), 200).to_f64s()[0];
            assert!(end < 1e-12);
        }
        assert_eq!(s.iterate(&Point::interval(1.0), 200).to_f64s()[0], 1.0);
    }

    #[test]
    fn pinched_zero_fibre_collapses() {
        let s = sys("pinched:alpha=3,eps=0");
        for x in [0.0, 0.3, 1.0] {
            assert_eq!(s.step(&Point::skew(0.0, x)).to_f64s()[1], 0.0);
        }
    }

    #[test]
    fn product_metric_is_max() {
        let s = sys("product(rotation:alpha=0.30103,doubling)");
        let a = Point::circle(0.1).join(Point::circle(0.2));
        let b = Point::circle(0.4).join(Point::circle(0.25));
        assert!((s.distance(&a, &b) - 0.3).abs() < 1e-12);
        let sa = s.iterate(&a, 3);
        let sb = s.iterate(&b, 3);
        let ra = sys("rotation:alpha=0.30103");
        let d = sys("doubling");
        let lhs = s.distance(&sa, &sb);
        let rhs = ra
            .distance(&Point(vec![sa.0[0].clone()]), &Point(vec![sb.0[0].clone()]))
            .max(d.distance(&Point(vec![sa.0[1].clone()]), &Point(vec![sb.0[1].clone()])));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn power_applies_step_repeatedly() {
        let s2 = sys("power(rotation:alpha=0.1,3)");
        let out = s2.step(&Point::circle(0.0)).to_f64s()[0];
        assert!((out - 0.3).abs() < 1e-12);
    }

    #[test]
    fn shift_features_track_the_window() {
        let s = sys("thue_morse");
        let src = s.shift_source().unwrap().clone();
        let mut st = s.init(&Point::shift(&src, 0));
        for _ in 0..5 {
            s.advance(&mut st);
        }
        let mut f = [0u64];
        s.features(&st, &mut f);
        assert_eq!(f[0], SeqPoint { seq: src, offset: 5 }.window_bits());
    }

    #[test]
    fn word_masks() {
        assert_eq!(word_mask(1.0), 1);
        assert_eq!(word_mask(0.5), 3);
        assert_eq!(word_mask(2.0), 0);
        assert_eq!(word_mask(1e-30), u64::MAX);
    }

    #[test]
    fn check_point_dimensions() {
        let s = sys("torus_shear");
        assert!(s.check_point(&Point::circle(0.1)).is_err());
        assert!(s.check_point(&Point::circle2(0.1, 0.2)).is_ok());
        let m = sys("morse_smale");
        assert!(m.check_point(&Point::interval(1.5)).is_err());
    }

    proptest! {
        #[test]
        fn rotation_is_isometry(x in 0.0f64..1.0, y in 0.0f64..1.0, k in 0u64..5000) {
            let s = sys("rotation:alpha=golden");
            let (a, b) = (Point::circle(x), Point::circle(y));
            let d0 = s.distance(&a, &b);
            let dk = s.distance(&s.iterate(&a, k), &s.iterate(&b, k));
            prop_assert!((d0 - dk).abs() < 1e-15);
        }

        #[test]
        fn metric_axioms(x in 0.0f64..1.0, y in 0.0f64..1.0, z in 0.0f64..1.0) {
            let s = sys("product(rotation:alpha=golden,morse_smale)");
            let p = |t: f64| Point::circle(t).join(Point::interval(t * t));
            let (a, b, c) = (p(x), p(y), p(z));
            prop_assert_eq!(s.distance(&a, &b), s.distance(&b, &a));
            prop_assert!(s.distance(&a, &c) <= s.distance(&a, &b) + s.distance(&b, &c) + 1e-15);
            prop_assert_eq!(s.distance(&a, &a), 0.0);
        }

        #[test]
        fn feature_test_agrees_with_metric(x in 0.0f64..1.0, y in 0.0f64..1.0, delta in 0.01f64..0.5) {
            let s = sys("torus_shear");
            let (a, b) = (Point::circle2(x, y), Point::circle2(y, x * 0.5));
            let (mut fa, mut fb) = ([0u64; 2], [0u64; 2]);
            s.features(&s.init(&a), &mut fa);
            s.features(&s.init(&b), &mut fb);
            let d = s.distance(&a, &b);
            if (d - delta).abs() > 1e-12 {
                prop_assert_eq!(s.separated(&fa, &fb, delta), d >= delta);
            }
        }
    }
}
