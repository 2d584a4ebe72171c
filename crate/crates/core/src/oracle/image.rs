//! Projective image of the map given by a space of sections.
//!
//! Everything is measured by evaluating the sections at integer points of
//! the torus `x, y ≠ 0` and taking exact ranks of the evaluation matrices.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::instance::PointInstance;
use super::matrix::{rank, RowEchelon};
use super::sections;
use crate::error::{Error, Result};

/// Trailing samples that must not raise the rank.
pub const STABILITY_WINDOW: usize = 12;

const SAMPLE_SEED: u64 = 0x5eed;
const COORD_RANGE: i64 = 24;

type Term = (u32, u32, BigInt);

/// Sections with their common monomial factor removed, ready for evaluation.
#[derive(Clone, Debug)]
pub struct ImageSampler {
    sections: Vec<Vec<Term>>,
    max_x: u32,
    max_y: u32,
}

impl ImageSampler {
    pub fn new(d: u32, points: &[PointInstance]) -> Result<Self> {
        Ok(Self::from_coefficients(&sections(d, points)?, 2 * d))
    }

    /// `basis` holds coefficient vectors of forms of bidegree `(deg, deg)`.
    pub fn from_coefficients(basis: &[Vec<BigInt>], deg: u32) -> Self {
        let mut sections: Vec<Vec<Term>> = basis
            .iter()
            .map(|coeffs| {
                coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k as u32 / (deg + 1), k as u32 % (deg + 1), c.clone()))
                    .collect()
            })
            .collect();
        let shift_x = sections.iter().flatten().map(|t| t.0).min().unwrap_or(0);
        let shift_y = sections.iter().flatten().map(|t| t.1).min().unwrap_or(0);
        for t in sections.iter_mut().flatten() {
            t.0 -= shift_x;
            t.1 -= shift_y;
        }
        let max_x = sections.iter().flatten().map(|t| t.0).max().unwrap_or(0);
        let max_y = sections.iter().flatten().map(|t| t.1).max().unwrap_or(0);
        Self { sections, max_x, max_y }
    }

    /// Number of sections, `N + 1`.
    pub fn len(&self) -> usize {
        self.sections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sections.is_empty()
    }

    fn powers(v: i64, n: u32) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(n as usize + 1);
        let mut acc = BigInt::one();
        for _ in 0..=n {
            out.push(acc.clone());
            acc *= v;
        }
        out
    }

    pub fn evaluate(&self, x: i64, y: i64) -> Vec<BigInt> {
        let (px, py) = (Self::powers(x, self.max_x), Self::powers(y, self.max_y));
        self.sections
            .iter()
            .map(|s| s.iter().map(|(i, j, c)| c * &px[*i as usize] * &py[*j as usize]).sum())
            .collect()
    }

    /// Values together with both partial derivatives.
    pub fn jet(&self, x: i64, y: i64) -> [Vec<BigInt>; 3] {
        let (px, py) = (Self::powers(x, self.max_x), Self::powers(y, self.max_y));
        let mut out = [Vec::new(), Vec::new(), Vec::new()];
        for s in &self.sections {
            let (mut v, mut vx, mut vy) = (BigInt::zero(), BigInt::zero(), BigInt::zero());
            for (i, j, c) in s {
                let (i, j) = (*i as usize, *j as usize);
                v += c * &px[i] * &py[j];
                if i > 0 {
                    vx += c * BigInt::from(i) * &px[i - 1] * &py[j];
                }
                if j > 0 {
                    vy += c * BigInt::from(j) * &px[i] * &py[j - 1];
                }
            }
            out[0].push(v);
            out[1].push(vx);
            out[2].push(vy);
        }
        out
    }
}

/// Deterministic distinct torus points.
fn sample_points(count: usize) -> Vec<(i64, i64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let mut seen = BTreeSet::new();
    while seen.len() < count {
        let x = rng.gen_range(-COORD_RANGE..=COORD_RANGE);
        let y = rng.gen_range(-COORD_RANGE..=COORD_RANGE);
        if x != 0 && y != 0 {
            seen.insert((x, y));
        }
    }
    let mut order: Vec<(i64, i64)> = seen.into_iter().collect();
    // a fixed shuffle so early samples are spread out
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED + 1);
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    order
}

/// Exponent vectors of degree `t` in `n` variables.
fn monomials(n: usize, t: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return if t == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=t).rev() {
        for mut rest in monomials(n - 1, t - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Rank of degree-`t` monomials in the sections over `samples` torus points.
fn evaluation_rank(sampler: &ImageSampler, t: usize, samples: usize) -> Result<usize> {
    let monos = monomials(sampler.len(), t);
    let mut echelon = RowEchelon::new(monos.len());
    let mut last_growth = 0;
    for (n, (x, y)) in sample_points(samples).into_iter().enumerate() {
        let values = sampler.evaluate(x, y);
        let row: Vec<BigInt> = monos
            .iter()
            .map(|e| {
                e.iter()
                    .zip(&values)
                    .filter(|(k, _)| **k > 0)
                    .fold(BigInt::one(), |acc, (k, v)| acc * num_traits::pow(v.clone(), *k))
            })
            .collect();
        if echelon.insert(row) {
            last_growth = n + 1;
        }
        if echelon.is_full() {
            return Ok(echelon.rank());
        }
    }
    if samples < STABILITY_WINDOW || last_growth > samples - STABILITY_WINDOW {
        return Err(Error::InsufficientSamples { samples });
    }
    Ok(echelon.rank())
}

/// Value of the Hilbert function of the image in degree `t`.
pub fn hilbert_function(points: &[PointInstance], d: u32, t: usize, samples: usize) -> Result<usize> {
    evaluation_rank(&ImageSampler::new(d, points)?, t, samples)
}

/// Number of linearly independent quadrics containing the image.
pub fn image_quadric_count(points: &[PointInstance], d: u32, samples: usize) -> Result<usize> {
    let sampler = ImageSampler::new(d, points)?;
    let n = sampler.len();
    Ok(n * (n + 1) / 2 - evaluation_rank(&sampler, 2, samples)?)
}

/// Dimension of the image, from the rank of the differential.
pub fn image_dimension(points: &[PointInstance], d: u32) -> Result<usize> {
    let sampler = ImageSampler::new(d, points)?;
    if sampler.is_empty() {
        return Ok(0);
    }
    let best = sample_points(4)
        .into_iter()
        .map(|(x, y)| {
            let [v, vx, vy] = sampler.jet(x, y);
            rank(vec![v, vx, vy], sampler.len())
        })
        .max()
        .unwrap_or(1);
    Ok(best.saturating_sub(1))
}

/// Degree of the image, read off the Hilbert function.
///
/// The leading difference is taken at two consecutive degrees and must
/// agree.
pub fn image_degree(points: &[PointInstance], d: u32, samples: usize) -> Result<usize> {
    let dim = image_dimension(points, d)?;
    let sampler = ImageSampler::new(d, points)?;
    let h: Vec<i64> = (0..=dim + 1)
        .map(|t| evaluation_rank(&sampler, t, samples).map(|r| r as i64))
        .collect::<Result<_>>()?;
    let leading = |t: usize| -> i64 {
        // dim-th backward difference at t
        (0..=dim)
            .map(|k| {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                sign * binomial(dim, k) * h[t - k]
            })
            .sum()
    };
    let (a, b) = (leading(dim), leading(dim + 1));
    if a != b || b <= 0 {
        return Err(Error::DegreeNotStable { hilbert: h });
    }
    Ok(b as usize)
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::monomial_index;

    fn sampler_from(polys: &[&[(u32, u32, i64)]], deg: u32) -> ImageSampler {
        let basis: Vec<Vec<BigInt>> = polys
            .iter()
            .map(|terms| {
                let mut v = vec![BigInt::zero(); ((deg + 1) * (deg + 1)) as usize];
                for &(i, j, c) in *terms {
                    v[monomial_index(i, j, deg)] = c.into();
                }
                v
            })
            .collect();
        ImageSampler::from_coefficients(&basis, deg)
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(5, 2).len(), 15);
        assert_eq!(monomials(5, 3).len(), 35);
        assert_eq!(monomials(3, 0).len(), 1);
    }

    #[test]
    fn segre_quadric() {
        // (1,1)-forms embed CP¹×CP¹ as the quadric surface in CP³
        let s = sampler_from(&[&[(0, 0, 1)], &[(1, 0, 1)], &[(0, 1, 1)], &[(1, 1, 1)]], 1);
        assert_eq!(evaluation_rank(&s, 2, 60).unwrap(), 9);
        assert_eq!(evaluation_rank(&s, 1, 60).unwrap(), 4);
    }

    #[test]
    fn common_monomial_factor_is_removed() {
        let s = sampler_from(&[&[(1, 1, 1)], &[(2, 1, 3)]], 2);
        assert_eq!(s.evaluate(5, 7), vec![BigInt::from(1), BigInt::from(15)]);
    }

    #[test]
    fn conic_image() {
        // (1, x, x²) traces a conic in CP²
        let s = sampler_from(&[&[(0, 0, 1)], &[(1, 0, 1)], &[(2, 0, 1)]], 2);
        let n = s.len();
        assert_eq!(n * (n + 1) / 2 - evaluation_rank(&s, 2, 40).unwrap(), 1);
        let [v, vx, vy] = s.jet(3, 2);
        assert_eq!(rank(vec![v, vx, vy], 3), 2);
    }

    #[test]
    fn too_few_samples_is_an_error() {
        let s = sampler_from(&[&[(0, 0, 1)], &[(1, 0, 1)], &[(0, 1, 1)], &[(1, 1, 1)]], 1);
        assert!(matches!(evaluation_rank(&s, 2, 10), Err(Error::InsufficientSamples { samples: 10 })));
    }
}
