//! Smith normal form over Euclidean domains, with transformation matrices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::poly::QPoly;

/// What the Smith reduction needs from a coefficient ring.
pub trait EuclideanRing: Clone + PartialEq + fmt::Debug {
    type Size: Ord;

    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    fn is_ring_zero(&self) -> bool;
    /// Euclidean size of a nonzero element.
    fn size(&self) -> Self::Size;
    /// `(q, r)` with `self = q d + r` and `r = 0` or `size(r) < size(d)`.
    fn div_rem(&self, d: &Self) -> (Self, Self);
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// A unit `u` such that `u * self` is the chosen associate.
    fn normalizing_unit(&self) -> Self;
}

impl EuclideanRing for BigInt {
    type Size = BigInt;

    fn ring_zero() -> Self {
        Zero::zero()
    }
    fn ring_one() -> Self {
        One::one()
    }
    fn is_ring_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn size(&self) -> BigInt {
        self.abs()
    }
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        Integer::div_rem(self, d)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn normalizing_unit(&self) -> Self {
        if self.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        }
    }
}

impl EuclideanRing for QPoly {
    type Size = usize;

    fn ring_zero() -> Self {
        QPoly::default()
    }
    fn ring_one() -> Self {
        QPoly::from_i64(&[1])
    }
    fn is_ring_zero(&self) -> bool {
        QPoly::is_zero(self)
    }
    fn size(&self) -> usize {
        self.degree().unwrap_or(0)
    }
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        QPoly::div_rem(self, d)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn normalizing_unit(&self) -> Self {
        match self.leading() {
            Some(l) => QPoly::constant(l.recip()),
            None => Self::ring_one(),
        }
    }
}

/// `U A V = D` with `U`, `V` invertible and `D` diagonal, `d_1 | d_2 | ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct Smith<R> {
    pub u: Vec<Vec<R>>,
    pub d: Vec<Vec<R>>,
    pub v: Vec<Vec<R>>,
}

impl<R: EuclideanRing> Smith<R> {
    /// The `min(rows, cols)` diagonal entries.
    pub fn diagonal(&self) -> Vec<R> {
        let k = self.u.len().min(self.v.len());
        (0..k).map(|i| self.d[i][i].clone()).collect()
    }
}

fn identity<R: EuclideanRing>(n: usize) -> Vec<Vec<R>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { R::ring_one() } else { R::ring_zero() }).collect()).collect()
}

struct Reducer<R> {
    d: Vec<Vec<R>>,
    u: Vec<Vec<R>>,
    v: Vec<Vec<R>>,
    m: usize,
    n: usize,
}

impl<R: EuclideanRing> Reducer<R> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.d.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.d.iter_mut().chain(self.v.iter_mut()) {
            row.swap(i, j);
        }
    }

    /// row_i -= q row_k
    fn row_sub(&mut self, i: usize, k: usize, q: &R) {
        for mat in [&mut self.d, &mut self.u] {
            let src = mat[k].clone();
            for (x, y) in mat[i].iter_mut().zip(&src) {
                *x = x.sub(&q.mul(y));
            }
        }
    }

    /// col_j -= q col_k
    fn col_sub(&mut self, j: usize, k: usize, q: &R) {
        for mat in [&mut self.d, &mut self.v] {
            for row in mat.iter_mut() {
                let y = q.mul(&row[k]);
                row[j] = row[j].sub(&y);
            }
        }
    }

    fn smallest(&self, cells: impl Iterator<Item = (usize, usize)>) -> Option<(usize, usize)> {
        cells
            .filter(|&(i, j)| !self.d[i][j].is_ring_zero())
            .min_by(|&(a, b), &(c, e)| self.d[a][b].size().cmp(&self.d[c][e].size()))
    }

    fn run(&mut self) {
        let (m, n) = (self.m, self.n);
        for t in 0..m.min(n) {
            let Some((pi, pj)) = self.smallest((t..m).flat_map(|i| (t..n).map(move |j| (i, j)))) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut clean = true;
                for i in t + 1..m {
                    if !self.d[i][t].is_ring_zero() {
                        let q = self.d[i][t].div_rem(&self.d[t][t]).0;
                        self.row_sub(i, t, &q);
                        clean &= self.d[i][t].is_ring_zero();
                    }
                }
                for j in t + 1..n {
                    if !self.d[t][j].is_ring_zero() {
                        let q = self.d[t][j].div_rem(&self.d[t][t]).0;
                        self.col_sub(j, t, &q);
                        clean &= self.d[t][j].is_ring_zero();
                    }
                }
                if !clean {
                    let cells = (t..m).map(|i| (i, t)).chain((t + 1..n).map(|j| (t, j)));
                    let (pi, pj) = self.smallest(cells).expect("pivot is nonzero");
                    self.swap_rows(t, pi);
                    self.swap_cols(t, pj);
                    continue;
                }
                let bad =
                    (t + 1..m).find(|&i| (t + 1..n).any(|j| !self.d[i][j].div_rem(&self.d[t][t]).1.is_ring_zero()));
                match bad {
                    // row_t += row_i brings a non-multiple into the pivot row
                    Some(i) => self.row_sub(t, i, &R::ring_zero().sub(&R::ring_one())),
                    None => break,
                }
            }
            let unit = self.d[t][t].normalizing_unit();
            for mat in [&mut self.d, &mut self.u] {
                for x in mat[t].iter_mut() {
                    *x = unit.mul(x);
                }
            }
        }
    }
}

/// Smith form of a `rows x cols` matrix.
pub fn smith_form<R: EuclideanRing>(a: &[Vec<R>], cols: usize) -> Smith<R> {
    let m = a.len();
    assert!(a.iter().all(|r| r.len() == cols), "ragged matrix");
    let mut red = Reducer { d: a.to_vec(), u: identity(m), v: identity(cols), m, n: cols };
    red.run();
    Smith { u: red.u, d: red.d, v: red.v }
}

/// Dense integer matrix; rows are relations, columns generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: Vec<Vec<BigInt>>,
    cols: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("matrix rows must all have {expected} entries")]
pub struct ShapeError {
    pub expected: usize,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>, cols: usize) -> Result<Self, ShapeError> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(ShapeError { expected: cols });
        }
        Ok(IntMatrix { rows, cols })
    }

    pub fn from_i64(rows: &[Vec<i64>], cols: usize) -> Result<Self, ShapeError> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(), cols)
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix { rows: identity(n), cols: n }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows: vec![vec![BigInt::zero(); cols]; rows], cols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.rows[i][j] = x;
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.nrows(), "dimension mismatch");
        let rows = self
            .rows
            .iter()
            .map(|r| (0..o.cols).map(|j| r.iter().zip(&o.rows).map(|(a, orow)| a * &orow[j]).sum()).collect())
            .collect();
        IntMatrix { rows, cols: o.cols }
    }

    pub fn transpose(&self) -> IntMatrix {
        let rows = (0..self.cols).map(|j| self.rows.iter().map(|r| r[j].clone()).collect()).collect();
        IntMatrix { rows, cols: self.rows.len() }
    }

    /// Determinant of a square matrix (fraction-free elimination).
    pub fn determinant(&self) -> BigInt {
        let n = self.rows.len();
        assert_eq!(n, self.cols, "determinant of a non-square matrix");
        let mut a = self.rows.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else { return BigInt::zero() };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        if n == 0 {
            return BigInt::one();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn smith(&self) -> IntSmith {
        let s = smith_form(&self.rows, self.cols);
        IntSmith {
            u: IntMatrix { cols: self.rows.len(), rows: s.u },
            d: IntMatrix { rows: s.d, cols: self.cols },
            v: IntMatrix { rows: s.v, cols: self.cols },
        }
    }

    pub fn rank(&self) -> usize {
        self.smith().diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// `Z^cols / rowspace`.
    pub fn cokernel(&self) -> AbelianInvariants {
        let diag = self.smith().diagonal();
        let rank = diag.iter().filter(|x| !x.is_zero()).count();
        AbelianInvariants {
            free_rank: self.cols - rank,
            torsion: diag.into_iter().filter(|x| *x > BigInt::one()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSmith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl IntSmith {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.nrows().min(self.d.ncols());
        (0..k).map(|i| self.d.get(i, i).clone()).collect()
    }
}

impl IntSmith {
    /// Checks `U A V = D`, `D` diagonal with `d_1 | d_2 | ...` and nonnegative
    /// entries, and `|det U| = |det V| = 1`.
    pub fn verify(&self, a: &IntMatrix) -> Result<(), String> {
        if self.u.mul(a).mul(&self.v) != self.d {
            return Err("U A V differs from D".into());
        }
        for i in 0..self.d.nrows() {
            for j in 0..self.d.ncols() {
                if i != j && !self.d.get(i, j).is_zero() {
                    return Err(format!("D has an off-diagonal entry at ({i}, {j})"));
                }
            }
        }
        let diag = self.diagonal();
        for w in diag.windows(2) {
            let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            if !divides || w[0].is_negative() {
                return Err(format!("diagonal entries {} and {} break the divisibility chain", w[0], w[1]));
            }
        }
        if diag.last().is_some_and(|d| d.is_negative()) {
            return Err("negative diagonal entry".into());
        }
        for (name, m) in [("U", &self.u), ("V", &self.v)] {
            if m.determinant().abs() != BigInt::one() {
                return Err(format!("{name} is not unimodular"));
            }
        }
        Ok(())
    }
}

/// `Z^free_rank + Z/d_1 + ... + Z/d_k` with `d_i >= 2` and `d_i | d_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    #[serde(serialize_with = "ser_bigints")]
    pub torsion: Vec<BigInt>,
}

fn ser_bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl AbelianInvariants {
    pub fn free(rank: usize) -> Self {
        AbelianInvariants { free_rank: rank, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Group order when finite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
