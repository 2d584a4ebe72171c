//! A generic form of bidegree `(bx, by)` written in a local chart.
//!
//! Coefficients are linear forms in the unknown monomial coefficients of the
//! global form, so every vanishing condition is directly a matrix row.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::instance::{Coord, Direction};

pub(crate) type LinearForm = Vec<BigRational>;

#[derive(Clone, Debug)]
pub(crate) struct LocalPoly {
    unknowns: usize,
    terms: BTreeMap<(u32, u32), LinearForm>,
}

/// Column index of the monomial `x^i y^j` for forms of bidegree `(_, by)`.
pub fn monomial_index(i: u32, j: u32, by: u32) -> usize {
    (i * (by + 1) + j) as usize
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `x^i` in the local coordinate `X` around `c`, as `(power, coefficient)`.
/// At infinity the form is dehomogenised, so `x^i` becomes `X^(bound - i)`.
fn expand_power(i: u32, c: &Coord, bound: u32) -> Vec<(u32, BigRational)> {
    match c {
        Coord::Infinity => vec![(bound - i, BigRational::one())],
        Coord::Finite(c0) => (0..=i)
            .map(|k| {
                let coeff = BigRational::from_integer(binomial(i, k)) * num_traits::pow(c0.clone(), (i - k) as usize);
                (k, coeff)
            })
            .filter(|(_, v)| !v.is_zero())
            .collect(),
    }
}

impl LocalPoly {
    /// The generic `(bx, by)` form centred at `(x, y)`.
    pub(crate) fn at_root(x: &Coord, y: &Coord, bx: u32, by: u32) -> Self {
        let unknowns = ((bx + 1) * (by + 1)) as usize;
        let mut terms: BTreeMap<(u32, u32), LinearForm> = BTreeMap::new();
        for i in 0..=bx {
            let ex = expand_power(i, x, bx);
            for j in 0..=by {
                let ey = expand_power(j, y, by);
                let col = monomial_index(i, j, by);
                for (px, cx) in &ex {
                    for (py, cy) in &ey {
                        let form = terms
                            .entry((*px, *py))
                            .or_insert_with(|| vec![BigRational::zero(); unknowns]);
                        form[col] += cx * cy;
                    }
                }
            }
        }
        Self { unknowns, terms }
    }

    /// Conditions for multiplicity at least `d` at the chart origin.
    pub(crate) fn low_order_rows(&self, d: u32) -> Vec<LinearForm> {
        self.terms
            .iter()
            .filter(|((a, b), form)| a + b < d && form.iter().any(|v| !v.is_zero()))
            .map(|(_, form)| form.clone())
            .collect()
    }

    /// Strict transform in the chart of the blowup at the origin centred at
    /// the point of the exceptional line in `direction`, after removing the
    /// exceptional divisor `d` times. Terms of order below `d` are dropped;
    /// the caller has already forced them to vanish.
    pub(crate) fn blowup(&self, direction: &Direction, d: u32) -> Self {
        let mut terms: BTreeMap<(u32, u32), LinearForm> = BTreeMap::new();
        let mut add = |key: (u32, u32), scale: &BigRational, form: &LinearForm| {
            let target = terms
                .entry(key)
                .or_insert_with(|| vec![BigRational::zero(); self.unknowns]);
            for (t, f) in target.iter_mut().zip(form) {
                if !f.is_zero() {
                    *t += scale * f;
                }
            }
        };
        for (&(a, b), form) in &self.terms {
            if a + b < d {
                continue;
            }
            match direction {
                // Y = X (T + t0):  X^a Y^b = X^(a+b) (T + t0)^b
                Direction::Slope(t0) => {
                    for (k, coeff) in expand_power(b, &Coord::Finite(t0.clone()), b) {
                        add((a + b - d, k), &coeff, form);
                    }
                }
                // X = S Y:  X^a Y^b = S^a Y^(a+b)
                Direction::Vertical => add((a, a + b - d), &BigRational::one(), form),
            }
        }
        Self { unknowns: self.unknowns, terms }
    }
}
