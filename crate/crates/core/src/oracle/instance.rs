//! Concrete rational points realizing a blowup plan.
//!
//! Affine coordinates `(x, y)` on CP¹×CP¹ place the initial cycle at
//! `C₁ = {x = 0}`, `C₂ = {y = 0}`, `C̄₁ = {x = ∞}` and `C̄₂ = {y = ∞}`.
//! Every point carries a local chart `(X, Y)`; `axes` records which curves
//! are `{X = 0}` and `{Y = 0}` in that chart.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cycle::{apply_step, initial_cycle, BlowupPlan, BlowupStep, Curve};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    Finite(BigRational),
    Infinity,
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Finite(v) => write!(f, "{v}"),
            Coord::Infinity => write!(f, "inf"),
        }
    }
}

/// A point of the exceptional line over a chart origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `[1 : t]`, the tangent to `Y = t·X`.
    Slope(BigRational),
    /// `[0 : 1]`, the tangent to `X = 0`.
    Vertical,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Slope(t) => write!(f, "[1:{t}]"),
            Direction::Vertical => write!(f, "[0:1]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    Root { x: Coord, y: Coord },
    Near { parent: usize, direction: Direction },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointInstance {
    /// Equals the index of the exceptional class of this point.
    pub index: usize,
    pub location: Location,
    pub axes: [Option<Curve>; 2],
    pub depth: usize,
}

impl PointInstance {
    pub fn parent(&self) -> Option<usize> {
        match self.location {
            Location::Near { parent, .. } => Some(parent),
            Location::Root { .. } => None,
        }
    }

    /// Coordinates of the actual point of CP¹×CP¹ underneath.
    pub fn coords<'a>(&'a self, all: &'a [PointInstance]) -> (&'a Coord, &'a Coord) {
        match &self.location {
            Location::Root { x, y } => (x, y),
            Location::Near { parent, .. } => all[*parent].coords(all),
        }
    }
}

impl fmt::Display for PointInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.location {
            Location::Root { x, y } => write!(f, "p{} = ({x}, {y})", self.index + 1),
            Location::Near { parent, direction } => {
                write!(f, "p{} -> p{} along {direction}", self.index + 1, parent + 1)
            }
        }
    }
}

/// Supplier of the free parameters of an instance, one per general point.
pub trait ParameterSource {
    fn next(&mut self) -> Result<BigRational>;
}

/// Small pseudorandom rationals, nonzero and pairwise distinct.
pub struct SeededParameters {
    rng: ChaCha8Rng,
    used: BTreeSet<BigRational>,
}

impl SeededParameters {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), used: BTreeSet::new() }
    }
}

impl ParameterSource for SeededParameters {
    fn next(&mut self) -> Result<BigRational> {
        for _ in 0..1000 {
            let num: i64 = self.rng.gen_range(1..=9) * if self.rng.gen_bool(0.5) { 1 } else { -1 };
            let den: i64 = self.rng.gen_range(1..=5);
            let v = BigRational::new(num.into(), den.into());
            if self.used.insert(v.clone()) {
                return Ok(v);
            }
        }
        Err(Error::GenericityNotCertified { attempts: 1000, detail: "parameter pool exhausted".into() })
    }
}

/// Explicit parameters, consumed in order.
pub struct FixedParameters(pub std::vec::IntoIter<BigRational>);

impl ParameterSource for FixedParameters {
    fn next(&mut self) -> Result<BigRational> {
        let v = self.0.next().ok_or_else(|| Error::GenericityNotCertified {
            attempts: 1,
            detail: "not enough explicit parameters".into(),
        })?;
        if v.is_zero() {
            return Err(Error::GenericityNotCertified {
                attempts: 1,
                detail: "a zero parameter puts a general point on a node".into(),
            });
        }
        Ok(v)
    }
}

/// Seeded instance of `plan`.
pub fn instantiate(plan: &BlowupPlan, seed: u64) -> Result<Vec<PointInstance>> {
    instantiate_with(plan, &mut SeededParameters::new(seed))
}

/// Number of free parameters `instantiate_with` consumes for `plan`.
pub fn free_parameter_count(plan: &BlowupPlan) -> usize {
    plan.steps
        .iter()
        .filter(|s| matches!(s, BlowupStep::SmoothPoint { .. }))
        .count()
        * 2
}

pub fn instantiate_with(plan: &BlowupPlan, params: &mut dyn ParameterSource) -> Result<Vec<PointInstance>> {
    let mut cycle = initial_cycle();
    let mut points: Vec<PointInstance> = Vec::with_capacity(2 * plan.steps.len());
    for (j, step) in plan.steps.iter().enumerate() {
        let h = cycle.half();
        let m = cycle.len();
        let curve_at = |i: usize| cycle.components[i % m].curve;
        match *step {
            BlowupStep::Node { target } => {
                for base in [target, target + h] {
                    let p = meeting_point(&points, curve_at(base), curve_at(base + 1), points.len())?;
                    points.push(p);
                }
            }
            BlowupStep::SmoothPoint { target } => {
                for base in [target, target + h] {
                    let t = params.next()?;
                    let p = general_point(&points, curve_at(base), t, points.len())?;
                    points.push(p);
                }
            }
            BlowupStep::InfinitelyNear { target, .. } => {
                for parent in [2 * target, 2 * target + 1] {
                    let on = cycle
                        .points
                        .get(parent)
                        .and_then(|r| r.on)
                        .ok_or(Error::ChartBoundary(parent))?;
                    let p = along_axis(&points, parent, on, points.len())?;
                    points.push(p);
                }
            }
        }
        cycle = apply_step(&cycle, *step)?;
        debug_assert_eq!(points.len(), 2 * (j + 1));
    }
    Ok(points)
}

fn root_axis(c: Curve) -> Option<(usize, Coord)> {
    match c {
        Curve::Initial(0) => Some((0, Coord::Finite(BigRational::zero()))),
        Curve::Initial(2) => Some((0, Coord::Infinity)),
        Curve::Initial(1) => Some((1, Coord::Finite(BigRational::zero()))),
        Curve::Initial(3) => Some((1, Coord::Infinity)),
        _ => None,
    }
}

/// Child of `parent` in the direction of one of its chart axes.
fn along_axis(points: &[PointInstance], parent: usize, axis: Curve, index: usize) -> Result<PointInstance> {
    let p = &points[parent];
    let e = Some(Curve::Exceptional(parent));
    let (direction, axes) = match p.axes.iter().position(|a| *a == Some(axis)) {
        // along {X = 0}
        Some(0) => (Direction::Vertical, [Some(axis), e]),
        // along {Y = 0}
        Some(1) => (Direction::Slope(BigRational::zero()), [e, Some(axis)]),
        _ => return Err(Error::ChartBoundary(index)),
    };
    Ok(PointInstance {
        index,
        location: Location::Near { parent, direction },
        axes,
        depth: p.depth + 1,
    })
}

fn meeting_point(points: &[PointInstance], a: Curve, b: Curve, index: usize) -> Result<PointInstance> {
    for (first, second) in [(a, b), (b, a)] {
        if let Curve::Exceptional(q) = first {
            if points[q].axes.contains(&Some(second)) {
                return along_axis(points, q, second, index);
            }
        }
    }
    match (root_axis(a), root_axis(b)) {
        (Some((0, x)), Some((1, y))) | (Some((1, y)), Some((0, x))) => {
            let axes = if root_axis(a).is_some_and(|(k, _)| k == 0) { [Some(a), Some(b)] } else { [Some(b), Some(a)] };
            Ok(PointInstance { index, location: Location::Root { x, y }, axes, depth: 0 })
        }
        _ => Err(Error::ChartBoundary(index)),
    }
}

fn general_point(points: &[PointInstance], c: Curve, t: BigRational, index: usize) -> Result<PointInstance> {
    if let Curve::Exceptional(q) = c {
        let depth = points[q].depth + 1;
        return Ok(PointInstance {
            index,
            location: Location::Near { parent: q, direction: Direction::Slope(t) },
            axes: [Some(c), None],
            depth,
        });
    }
    let (axis, fixed) = root_axis(c).ok_or(Error::ChartBoundary(index))?;
    let (location, axes) = if axis == 0 {
        (Location::Root { x: fixed, y: Coord::Finite(t) }, [Some(c), None])
    } else {
        (Location::Root { x: Coord::Finite(t), y: fixed }, [None, Some(c)])
    };
    Ok(PointInstance { index, location, axes, depth: 0 })
}
