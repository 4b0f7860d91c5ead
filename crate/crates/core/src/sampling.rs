//! Deterministic sample sets of points.
//!
//! Each leaf of a system draws its own `M` coordinates; a product pairs the
//! `i`-th coordinates of its factors. Continuous leaves take `ceil(M/2)` grid
//! points and `floor(M/2)` pseudorandom points. Symbolic leaves take the first
//! `M` shifts of the generating sequence.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::real::Phase;
use crate::symbolic::Sequence;
use crate::systems::{Coord, DenjoyPoint, Leaf, LeafMap, Point, SeqPoint, System};

/// `sqrt(2) - 1`, used to keep grids off rational alignments.
const GRID_OFFSET: f64 = 0.414_213_562_373_095_1;

/// Counter-based generator: one independent stream per task.
pub fn task_rng(seed: u64, task: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(task);
    rng
}

/// Which part of the phase space the pseudorandom half emphasizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plan {
    Standard,
    /// Interval points of Morse-Smale leaves are drawn log-uniformly close to
    /// the repeller, `1 - x = 2^(-52 U)`, so escape times spread out.
    Wandering,
}

/// First `count` shifts of one sequence, advanced `stride` steps per tick.
#[derive(Clone, Debug)]
pub struct ShiftOrbit {
    pub seq: Sequence,
    pub stride: u64,
}

#[derive(Clone, Debug)]
pub struct OrbitSample {
    pub system: System,
    pub points: Vec<Point>,
    pub horizon: u64,
    pub seed: u64,
    /// Set when the points are `sigma^0 x, ..., sigma^(M-1) x` of a single
    /// symbolic leaf.
    pub shift_orbit: Option<ShiftOrbit>,
}

impl OrbitSample {
    /// The default plan with `m` points.
    pub fn build(system: &System, m: usize, horizon: u64, seed: u64) -> OrbitSample {
        OrbitSample::build_with(system, m, horizon, seed, Plan::Standard)
    }

    pub fn build_with(system: &System, m: usize, horizon: u64, seed: u64, plan: Plan) -> OrbitSample {
        let per_leaf: Vec<Vec<Vec<Coord>>> = system
            .leaves()
            .iter()
            .enumerate()
            .map(|(li, leaf)| leaf_coords(leaf, m, plan, &mut task_rng(seed, li as u64)))
            .collect();
        let points = (0..m)
            .map(|i| Point(per_leaf.iter().flat_map(|coords| coords[i].iter().cloned()).collect()))
            .collect();
        let shift_orbit = match system.leaves() {
            [Leaf { map: LeafMap::Shift { source }, reps, .. }] => {
                Some(ShiftOrbit { seq: source.clone(), stride: *reps as u64 })
            }
            _ => None,
        };
        OrbitSample { system: system.clone(), points, horizon, seed, shift_orbit }
    }

    pub fn from_points(system: &System, points: Vec<Point>, horizon: u64, seed: u64) -> OrbitSample {
        OrbitSample { system: system.clone(), points, horizon, seed, shift_orbit: None }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Keeps the points satisfying `keep`; the shift fast path is dropped
    /// unless every point survives.
    pub fn restrict<F: Fn(&Point) -> bool>(&self, keep: F) -> OrbitSample {
        let points: Vec<Point> = self.points.iter().filter(|p| keep(p)).cloned().collect();
        let shift_orbit = if points.len() == self.points.len() { self.shift_orbit.clone() } else { None };
        OrbitSample { points, shift_orbit, ..self.clone() }
    }

    /// No two stored points coincide.
    pub fn is_distinct(&self) -> bool {
        let mut seen = HashSet::new();
        self.points.iter().all(|p| seen.insert(point_key(p)))
    }
}

fn point_key(p: &Point) -> Vec<u128> {
    p.0.iter()
        .map(|c| match c {
            Coord::Circle(ph) => ph.0,
            Coord::Interval(x) => x.to_bits() as u128,
            Coord::Shift(s) => s.offset as u128 | (1 << 100),
        })
        .collect()
}

fn uniform_phase(rng: &mut ChaCha8Rng) -> Phase {
    Phase(rng.gen::<u128>())
}

fn grid_phase(i: usize, g: usize) -> Phase {
    Phase::from_f64((i as f64 + GRID_OFFSET) / g as f64)
}

fn leaf_coords(leaf: &Leaf, m: usize, plan: Plan, rng: &mut ChaCha8Rng) -> Vec<Vec<Coord>> {
    let g = m.div_ceil(2);
    let r = m - g;
    let mut out: Vec<Vec<Coord>> = Vec::with_capacity(m);
    let mut seen = HashSet::new();
    let mut push = |out: &mut Vec<Vec<Coord>>, c: Vec<Coord>| -> bool {
        let key = point_key(&Point(c.clone()));
        if seen.insert(key) {
            out.push(c);
            true
        } else {
            false
        }
    };
    match &leaf.map {
        LeafMap::Shift { source } => {
            for i in 0..m as u64 {
                out.push(vec![Coord::Shift(SeqPoint { seq: source.clone(), offset: i })]);
            }
            return out;
        }
        LeafMap::Rotation { .. } => {
            for i in 0..g {
                push(&mut out, vec![Coord::Circle(grid_phase(i, g))]);
            }
        }
        LeafMap::Doubling => {
            // grid points get a random binary tail so dyadic values do not collapse
            for i in 0..g {
                let tail = rng.gen::<u64>() as u128;
                let p = Phase((grid_phase(i, g).0 & !(u64::MAX as u128)) | tail);
                push(&mut out, vec![Coord::Circle(p)]);
            }
        }
        LeafMap::TorusShear => {
            let golden = (5f64.sqrt() - 1.0) / 2.0;
            for i in 0..g {
                let y = Phase::from_f64(i as f64 * golden);
                push(&mut out, vec![Coord::Circle(grid_phase(i, g)), Coord::Circle(y)]);
            }
        }
        LeafMap::MorseSmale => {
            for i in 0..g {
                let x = if g == 1 { 0.0 } else { i as f64 / (g - 1) as f64 };
                push(&mut out, vec![Coord::Interval(x)]);
            }
        }
        LeafMap::Denjoy(model) => {
            for i in 0..g {
                let x = model.position(DenjoyPoint::Cantor(grid_phase(i, g)));
                push(&mut out, vec![Coord::Circle(Phase::from_f64(x))]);
            }
        }
        LeafMap::Annulus => {
            for i in 0..g {
                let x = (i as f64 + 0.5) / g as f64;
                push(&mut out, vec![Coord::Interval(x), Coord::Circle(Phase::ZERO)]);
            }
        }
        LeafMap::Pinched(_) => {
            for i in 0..g {
                let x = (i as f64 + 0.5) / g as f64;
                push(&mut out, vec![Coord::Circle(grid_phase(i, g)), Coord::Interval(x)]);
            }
        }
    }
    while out.len() < g + r {
        let c = match &leaf.map {
            LeafMap::Rotation { .. } | LeafMap::Doubling => vec![Coord::Circle(uniform_phase(rng))],
            LeafMap::Denjoy(_) => vec![Coord::Circle(Phase::from_f64(rng.gen::<f64>()))],
            LeafMap::TorusShear => vec![Coord::Circle(uniform_phase(rng)), Coord::Circle(uniform_phase(rng))],
            LeafMap::MorseSmale if plan == Plan::Wandering => {
                let depth: f64 = rng.gen_range(0.0..52.0);
                vec![Coord::Interval(1.0 - 2f64.powf(-depth))]
            }
            LeafMap::MorseSmale => vec![Coord::Interval(rng.gen::<f64>())],
            LeafMap::Annulus => vec![Coord::Interval(rng.gen::<f64>()), Coord::Circle(uniform_phase(rng))],
            LeafMap::Pinched(_) => vec![Coord::Circle(uniform_phase(rng)), Coord::Interval(rng.gen::<f64>())],
            LeafMap::Shift { .. } => unreachable!(),
        };
        push(&mut out, c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_determinism() {
        for spec in ["rotation:alpha=golden", "torus_shear", "denjoy", "product(doubling,thue_morse)"] {
            let sys = System::parse(spec).unwrap();
            let a = OrbitSample::build(&sys, 33, 100, 7);
            let b = OrbitSample::build(&sys, 33, 100, 7);
            assert_eq!(a.len(), 33);
            assert!(a.is_distinct(), "{spec}");
            assert_eq!(a.points.iter().map(point_key).collect::<Vec<_>>(), b.points.iter().map(point_key).collect::<Vec<_>>());
            for p in &a.points {
                sys.check_point(p).unwrap();
            }
        }
    }

    #[test]
    fn seeds_differ() {
        let sys = System::parse("doubling").unwrap();
        let a = OrbitSample::build(&sys, 8, 100, 1);
        let b = OrbitSample::build(&sys, 8, 100, 2);
        assert_ne!(point_key(&a.points[7]), point_key(&b.points[7]));
    }

    #[test]
    fn symbolic_samples_are_shifts() {
        let sys = System::parse("power(sturmian:alpha=golden,2)").unwrap();
        let s = OrbitSample::build(&sys, 10, 100, 0);
        let orbit = s.shift_orbit.as_ref().unwrap();
        assert_eq!(orbit.stride, 2);
        match &s.points[3].0[0] {
            Coord::Shift(p) => assert_eq!(p.offset, 3),
            other => panic!("{other:?}"),
        }
        assert!(OrbitSample::build(&System::parse("product(thue_morse,thue_morse)").unwrap(), 4, 100, 0)
            .shift_orbit
            .is_none());
    }

    #[test]
    fn morse_grid_contains_fixed_points() {
        let sys = System::parse("morse_smale").unwrap();
        let s = OrbitSample::build(&sys, 20, 100, 0);
        let xs: Vec<f64> = s.points.iter().map(|p| p.to_f64s()[0]).collect();
        assert!(xs.contains(&0.0) && xs.contains(&1.0));
    }
}
