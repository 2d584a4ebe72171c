//! Exact rational matrices with fraction-free elimination.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Rows are conditions, columns are monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintMatrix {
    cols: usize,
    rows: Vec<Vec<BigRational>>,
}

impl ConstraintMatrix {
    pub fn new(cols: usize) -> Self {
        Self { cols, rows: Vec::new() }
    }

    /// Matrix for forms of bidegree `(a, b)`.
    pub fn for_bidegree(a: u32, b: u32) -> Self {
        Self::new(((a + 1) * (b + 1)) as usize)
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn push_row(&mut self, row: Vec<BigRational>) {
        assert_eq!(row.len(), self.cols, "row length must match the column count");
        self.rows.push(row);
    }

    pub fn rank(&self) -> usize {
        rank(integer_rows(&self.rows), self.cols)
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Primitive integer basis of the kernel.
    pub fn kernel(&self) -> Vec<Vec<BigInt>> {
        kernel(integer_rows(&self.rows), self.cols)
    }

    /// One row per line, entries written as `p/q`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| format!("{}/{}", x.numer(), x.denom())).collect();
            writeln!(out, "{}", cells.join(" ")).expect("writing to a String");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cols = None;
        let mut rows = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|cell| parse_rational(cell).ok_or_else(|| Error::MatrixFormat {
                    line: n + 1,
                    reason: format!("bad entry {cell:?}"),
                }))
                .collect::<Result<Vec<_>>>()?;
            match cols {
                None => cols = Some(row.len()),
                Some(c) if c != row.len() => {
                    return Err(Error::MatrixFormat {
                        line: n + 1,
                        reason: format!("expected {c} entries, found {}", row.len()),
                    })
                }
                _ => {}
            }
            rows.push(row);
        }
        Ok(Self { cols: cols.unwrap_or(0), rows })
    }
}

fn parse_rational(cell: &str) -> Option<BigRational> {
    let (p, q) = cell.split_once('/').unwrap_or((cell, "1"));
    let p: BigInt = p.parse().ok()?;
    let q: BigInt = q.parse().ok()?;
    (!q.is_zero()).then(|| BigRational::new(p, q))
}

/// Scales each row by the lcm of its denominators and divides out its content.
pub fn integer_rows(rows: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let ints: Vec<BigInt> = row.iter().map(|x| x.numer() * (&l / x.denom())).collect();
            primitive(ints)
        })
        .collect()
}

/// Divides out the gcd of the entries (leaves zero vectors alone).
pub fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    v
}

/// Bareiss elimination in place. Returns the pivot columns; rows past
/// their count are zero afterwards.
pub fn bareiss(a: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..cols {
                let v = &pivot_row[c] * &row[j] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot_row[c].clone();
        pivots.push(c);
        r += 1;
    }
    for row in a[r..].iter_mut() {
        for x in row.iter_mut() {
            *x = BigInt::zero();
        }
    }
    pivots
}

pub fn rank(mut a: Vec<Vec<BigInt>>, cols: usize) -> usize {
    bareiss(&mut a, cols).len()
}

pub fn kernel(mut a: Vec<Vec<BigInt>>, cols: usize) -> Vec<Vec<BigInt>> {
    let pivots = bareiss(&mut a, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); cols];
            x[f] = BigRational::one();
            for (k, &pc) in pivots.iter().enumerate().rev() {
                let row = &a[k];
                let s: BigRational = (pc + 1..cols)
                    .filter(|&j| !row[j].is_zero() && !x[j].is_zero())
                    .map(|j| BigRational::from_integer(row[j].clone()) * &x[j])
                    .sum();
                x[pc] = -s / BigRational::from_integer(row[pc].clone());
            }
            let mut v = integer_rows(&[x]).pop().expect("one row in, one row out");
            if v.iter().find(|e| !e.is_zero()).is_some_and(|e| e.is_negative()) {
                for e in v.iter_mut() {
                    *e = -&*e;
                }
            }
            v
        })
        .collect()
}

/// Incremental echelon form used when rows arrive one at a time.
#[derive(Clone, Debug, Default)]
pub struct RowEchelon {
    cols: usize,
    // (pivot column, primitive row)
    basis: Vec<(usize, Vec<BigInt>)>,
}

impl RowEchelon {
    pub fn new(cols: usize) -> Self {
        Self { cols, basis: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.cols
    }

    /// Reduces `row` against the basis; returns whether the rank grew.
    pub fn insert(&mut self, row: Vec<BigInt>) -> bool {
        assert_eq!(row.len(), self.cols);
        let mut row = primitive(row);
        for (pc, b) in &self.basis {
            if row[*pc].is_zero() {
                continue;
            }
            let g = row[*pc].gcd(&b[*pc]);
            let mr = &b[*pc] / &g;
            let mb = &row[*pc] / &g;
            row = primitive(row.iter().zip(b).map(|(x, y)| x * &mr - y * &mb).collect());
        }
        match row.iter().position(|x| !x.is_zero()) {
            Some(pc) => {
                self.basis.push((pc, row));
                true
            }
            None => false,
        }
    }
}
