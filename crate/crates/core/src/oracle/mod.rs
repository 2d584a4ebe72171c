//! Linear-system dimensions by exact interpolation.
//!
//! A section of `d·(−K)` on the blown-up surface is a form of bidegree
//! `(2d, 2d)` on CP¹×CP¹ with multiplicity at least `d` at every blown-up
//! point, infinitely near ones included. The kernel of the resulting
//! condition matrix is exactly `H⁰(d·(−K))`.

pub mod image;
pub mod instance;
pub mod matrix;
mod poly;

use num_bigint::BigInt;
use serde::Serialize;

use crate::cycle::BlowupPlan;
use crate::error::{Error, Result};

pub use image::{image_degree, image_dimension, image_quadric_count, hilbert_function, ImageSampler};
pub use instance::{instantiate, instantiate_with, Coord, Direction, Location, PointInstance};
pub use matrix::ConstraintMatrix;
pub use poly::monomial_index;

use poly::LocalPoly;

/// Extra seeds tried when the requested ones disagree.
pub const MAX_RESAMPLES: usize = 8;

/// Condition matrix for `d·(−K)` at the given points.
pub fn constraint_matrix(d: u32, points: &[PointInstance]) -> Result<ConstraintMatrix> {
    let deg = 2 * d;
    let mut matrix = ConstraintMatrix::for_bidegree(deg, deg);
    let mut charts: Vec<LocalPoly> = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        if p.index != i {
            return Err(Error::ChartBoundary(i));
        }
        let chart = match &p.location {
            Location::Root { x, y } => LocalPoly::at_root(x, y, deg, deg),
            Location::Near { parent, direction } => {
                let parent_chart = charts.get(*parent).ok_or(Error::ChartBoundary(i))?;
                parent_chart.blowup(direction, d)
            }
        };
        for row in chart.low_order_rows(d) {
            matrix.push_row(row);
        }
        charts.push(chart);
    }
    Ok(matrix)
}

/// `h⁰(d·(−K))` for one concrete point configuration.
pub fn h0_oracle(d: u32, points: &[PointInstance]) -> Result<usize> {
    if d == 0 {
        return Err(Error::UnsupportedMultiple(0));
    }
    Ok(constraint_matrix(d, points)?.nullity())
}

/// Basis of `H⁰(d·(−K))` as integer coefficient vectors over the monomials
/// `x^i y^j`, indexed by [`monomial_index`].
pub fn sections(d: u32, points: &[PointInstance]) -> Result<Vec<Vec<BigInt>>> {
    Ok(constraint_matrix(d, points)?.kernel())
}

/// A value accepted as the generic one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifiedValue {
    pub value: usize,
    /// `(seed, value)` for every instance that was evaluated.
    pub samples: Vec<(u64, usize)>,
    pub warnings: Vec<String>,
}

impl CertifiedValue {
    pub fn stable(&self) -> bool {
        self.samples.iter().all(|&(_, v)| v == self.value)
    }
}

/// Evaluates `f` on seeded instances and certifies the generic value.
///
/// The generic value is the minimum (upper semicontinuity); it is accepted
/// once two seeds attain it. Disagreement triggers extra seeds.
pub fn certify<F>(plan: &BlowupPlan, seeds: &[u64], mut f: F) -> Result<CertifiedValue>
where
    F: FnMut(&[PointInstance]) -> Result<usize>,
{
    let mut samples = Vec::new();
    for &s in seeds {
        samples.push((s, f(&instantiate(plan, s)?)?));
    }
    let mut warnings = Vec::new();
    let base = seeds.iter().copied().max().unwrap_or(0);
    let mut extra = 0;
    loop {
        let min = samples.iter().map(|&(_, v)| v).min();
        let hits = samples.iter().filter(|&&(_, v)| Some(v) == min).count();
        let agree = samples.iter().all(|&(_, v)| Some(v) == min);
        if let Some(value) = min {
            if hits >= 2 && (agree || extra > 0) {
                return Ok(CertifiedValue { value, samples, warnings });
            }
        }
        if extra == MAX_RESAMPLES {
            return Err(Error::GenericityNotCertified {
                attempts: samples.len(),
                detail: format!("values per seed {samples:?}"),
            });
        }
        if !agree {
            warnings.push(format!("seeds disagree ({samples:?}); resampling"));
        }
        extra += 1;
        let seed = base.wrapping_add(1000 * extra as u64);
        samples.push((seed, f(&instantiate(plan, seed)?)?));
    }
}

/// Generic `h⁰(d·(−K))` for `plan`.
pub fn certified_h0(plan: &BlowupPlan, d: u32, seeds: &[u64]) -> Result<CertifiedValue> {
    certify(plan, seeds, |pts| h0_oracle(d, pts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::BlowupStep::*;

    fn plan(steps: Vec<crate::cycle::BlowupStep>) -> BlowupPlan {
        BlowupPlan::new(steps, "").unwrap()
    }

    #[test]
    fn unconstrained_forms() {
        assert_eq!(h0_oracle(1, &[]).unwrap(), 9);
        assert_eq!(h0_oracle(2, &[]).unwrap(), 25);
        assert!(h0_oracle(0, &[]).is_err());
    }

    #[test]
    fn four_points_on_one_component() {
        let p = plan(vec![SmoothPoint { target: 0 }; 4]);
        assert_eq!(certified_h0(&p, 1, &[1, 2, 3]).unwrap().value, 3);
    }

    #[test]
    fn general_k2_configuration_has_one_anticanonical_curve() {
        let p = plan(vec![
            SmoothPoint { target: 0 },
            SmoothPoint { target: 0 },
            SmoothPoint { target: 0 },
            SmoothPoint { target: 1 },
        ]);
        let c = certified_h0(&p, 1, &[1, 2, 3]).unwrap();
        assert_eq!(c.value, 1);
        assert!(c.stable());
    }

    #[test]
    fn alternating_three_one_bi_anticanonical() {
        let p = plan(vec![Node { target: 0 }, Node { target: 2 }, SmoothPoint { target: 0 }, SmoothPoint { target: 2 }]);
        assert_eq!(certified_h0(&p, 2, &[1, 2, 3]).unwrap().value, 5);
    }

    #[test]
    fn sections_satisfy_every_condition() {
        let p = plan(vec![Node { target: 0 }, SmoothPoint { target: 1 }, Node { target: 1 }, SmoothPoint { target: 0 }]);
        let pts = instantiate(&p, 4).unwrap();
        let m = constraint_matrix(2, &pts).unwrap();
        let basis = sections(2, &pts).unwrap();
        assert_eq!(basis.len(), m.nullity());
        for s in &basis {
            for row in matrix::integer_rows(m.rows()) {
                let dot: BigInt = row.iter().zip(s).map(|(a, b)| a * b).sum();
                assert_eq!(dot, BigInt::from(0));
            }
        }
    }

    #[test]
    fn certification_needs_two_agreeing_seeds() {
        let p = plan(vec![SmoothPoint { target: 0 }; 4]);
        let mut calls = 0;
        let c = certify(&p, &[1, 2], |_| {
            calls += 1;
            Ok(if calls == 1 { 4 } else { 3 })
        })
        .unwrap();
        assert_eq!(c.value, 3);
        assert!(!c.warnings.is_empty());
        let err = certify(&p, &[1], |_| {
            calls += 1;
            Ok(calls)
        });
        assert!(matches!(err, Err(Error::GenericityNotCertified { .. })));
    }
}
