//! Picard lattice of CP¹×CP¹ blown up at up to eight points.
//!
//! A class is written `D = a·f₁ + b·f₂ − Σ mᵢ·eᵢ`, where `f₁` is the class of a
//! (1,0)-curve, `f₂` the class of a (0,1)-curve and `eᵢ` the total transform of
//! the i-th exceptional curve. The pairing is `f₁·f₂ = 1`, `f₁² = f₂² = 0`,
//! `eᵢ·eⱼ = −δᵢⱼ`, and the `f`'s are orthogonal to the `e`'s.
//!
//! Exceptional classes are indexed by blowup order: step `j` (0-based) of a
//! plan contributes `e_{2j}` for the representative point and `e_{2j+1}` for
//! its conjugate.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximal number of exceptional classes.
pub const MAX_EXCEPTIONAL: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivisorClass {
    pub a: i64,
    pub b: i64,
    pub m: [i64; MAX_EXCEPTIONAL],
    /// Number of active exceptional classes.
    pub rank: usize,
}

impl DivisorClass {
    pub fn zero(rank: usize) -> Self {
        assert!(rank <= MAX_EXCEPTIONAL, "at most {MAX_EXCEPTIONAL} exceptional classes");
        Self { a: 0, b: 0, m: [0; MAX_EXCEPTIONAL], rank }
    }

    /// `a·f₁ + b·f₂` in a lattice with `rank` exceptional classes.
    pub fn from_bidegree(a: i64, b: i64, rank: usize) -> Self {
        Self { a, b, ..Self::zero(rank) }
    }

    /// The exceptional class `e_index`.
    pub fn exceptional(index: usize, rank: usize) -> Self {
        assert!(index < rank, "exceptional index {index} outside lattice of rank {rank}");
        let mut d = Self::zero(rank);
        d.m[index] = -1;
        d
    }

    /// `K = −2f₁ − 2f₂ + Σ eᵢ`.
    pub fn canonical(rank: usize) -> Self {
        let mut k = Self::from_bidegree(-2, -2, rank);
        for mi in k.m.iter_mut().take(rank) {
            *mi = -1;
        }
        k
    }

    pub fn anticanonical(rank: usize) -> Self {
        -Self::canonical(rank)
    }

    /// Same class viewed in a lattice with more exceptional classes.
    pub fn extend(self, rank: usize) -> Self {
        assert!(rank >= self.rank && rank <= MAX_EXCEPTIONAL);
        Self { rank, ..self }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0 && self.m.iter().all(|&x| x == 0)
    }

    /// Coefficient of `eᵢ` in the usual additive sense (i.e. `−mᵢ`).
    pub fn e_coeff(&self, i: usize) -> i64 {
        -self.m[i]
    }

    /// Largest `n` with `self = n·P` for an integral class `P`.
    pub fn divisibility(&self) -> i64 {
        use num_integer::Integer;
        self.m[..self.rank]
            .iter()
            .fold(self.a.gcd(&self.b), |g, &x| g.gcd(&x))
    }

    /// Exact division by an integer; `None` if some coefficient is not divisible.
    pub fn div_exact(&self, n: i64) -> Option<Self> {
        if n == 0 || self.a % n != 0 || self.b % n != 0 || self.m.iter().any(|x| x % n != 0) {
            return None;
        }
        let mut out = *self;
        out.a /= n;
        out.b /= n;
        for x in out.m.iter_mut() {
            *x /= n;
        }
        Some(out)
    }

    /// Self-intersection.
    pub fn square(&self) -> i64 {
        intersect_unchecked(self, self)
    }

    /// Degree of the anticanonical bundle on this class, `−K·D`.
    pub fn anticanonical_degree(&self) -> i64 {
        intersect_unchecked(&Self::anticanonical(self.rank), self)
    }
}

fn intersect_unchecked(d1: &DivisorClass, d2: &DivisorClass) -> i64 {
    let ee: i64 = d1.m[..d1.rank]
        .iter()
        .zip(&d2.m[..d2.rank])
        .map(|(x, y)| x * y)
        .sum();
    d1.a * d2.b + d1.b * d2.a - ee
}

/// The intersection pairing.
pub fn intersect(d1: &DivisorClass, d2: &DivisorClass) -> Result<i64> {
    if d1.rank != d2.rank {
        return Err(Error::LatticeMismatch { left: d1.rank, right: d2.rank });
    }
    Ok(intersect_unchecked(d1, d2))
}

/// Holomorphic Euler characteristic by Riemann–Roch, `1 + (D² − D·K)/2`.
pub fn chi(d: &DivisorClass) -> i64 {
    let k = DivisorClass::canonical(d.rank);
    let twice = d.square() - intersect_unchecked(d, &k);
    // D² ≡ D·K (mod 2) on any smooth surface.
    debug_assert_eq!(twice % 2, 0);
    1 + twice / 2
}

/// Degree of `−K` restricted to a smooth rational curve of class `ci`,
/// which equals `Cᵢ² + 2` by adjunction.
pub fn adjunction_degree(ci: &DivisorClass) -> Result<i64> {
    let k = DivisorClass::canonical(ci.rank);
    let genus_term = ci.square() + intersect_unchecked(ci, &k);
    if genus_term != -2 {
        return Err(Error::NotRationalCurve { class: *ci, value: genus_term });
    }
    Ok(ci.square() + 2)
}

/// Gram matrix of the basis `f₁, f₂, e₁, …, e_rank`.
pub fn gram_matrix(rank: usize) -> Vec<Vec<i64>> {
    let n = rank + 2;
    let mut g = vec![vec![0; n]; n];
    g[0][1] = 1;
    g[1][0] = 1;
    for (i, row) in g.iter_mut().enumerate().skip(2) {
        row[i] = -1;
    }
    g
}

impl Add for DivisorClass {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.rank, rhs.rank, "adding classes from different lattices");
        let mut out = self;
        out.a += rhs.a;
        out.b += rhs.b;
        for (x, y) in out.m.iter_mut().zip(rhs.m) {
            *x += y;
        }
        out
    }
}

impl Sub for DivisorClass {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for DivisorClass {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: DivisorClass) -> DivisorClass {
        rhs * self
    }
}

impl Mul<i64> for DivisorClass {
    type Output = Self;
    fn mul(self, n: i64) -> Self {
        let mut out = self;
        out.a *= n;
        out.b *= n;
        for x in out.m.iter_mut() {
            *x *= n;
        }
        out
    }
}

impl std::iter::Sum for DivisorClass {
    fn sum<I: Iterator<Item = Self>>(mut iter: I) -> Self {
        let first = iter.next().expect("sum of an empty class list has no lattice rank");
        iter.fold(first, |acc, d| acc + d)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}f1 + {}f2", self.a, self.b)?;
        for (i, &mi) in self.m[..self.rank].iter().enumerate() {
            match mi {
                0 => {}
                x if x > 0 => write!(f, " - {x}e{}", i + 1)?,
                x => write!(f, " + {}e{}", -x, i + 1)?,
            }
        }
        Ok(())
    }
}
