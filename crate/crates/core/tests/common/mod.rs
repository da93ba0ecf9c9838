//! Reference computations used by the integration tests. Everything here is
//! written from the definitions, without calling the engine being tested.

#![allow(dead_code)]

use std::collections::BTreeSet;

use crystal_core::finite::ScaledSemigroup;
use crystal_core::monoid::{MonoidElement, ScaledMonoid};
use crystal_core::rational::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Scale of a monoid element straight from the generator weights.
pub fn scale_of(m: &ScaledMonoid, x: &MonoidElement) -> Rational {
    match x {
        MonoidElement::Word(w) => w.iter().fold(Rational::one(), |acc, &i| acc * &m.weights()[i]),
        MonoidElement::Vector(v) => {
            v.iter().zip(m.weights()).fold(Rational::one(), |acc, (&e, w)| acc * num_traits::pow(w.clone(), e as usize))
        }
        MonoidElement::Affine { a, .. } => Rational::from_integer(BigInt::from(*a)),
    }
}

pub fn in_kernel(m: &ScaledMonoid, x: &MonoidElement) -> bool {
    scale_of(m, x).is_one()
}

/// `(b, a) (d, c) = (b + a d, a c)`: composition of `x -> ax + b` after `x -> cx + d`.
pub fn affine_mul(x: (u64, u64), y: (u64, u64)) -> (u64, u64) {
    (x.0 + x.1 * y.0, x.1 * y.1)
}

/// Inverse in a finite inverse semigroup by brute force: the unique `y`
/// with `xyx = x` and `yxy = y`.
pub fn brute_inverse(s: &ScaledSemigroup, x: usize) -> usize {
    let t = s.semigroup();
    let found: Vec<usize> =
        (0..t.len()).filter(|&y| t.mul(t.mul(x, y), x) == x && t.mul(t.mul(y, x), y) == y).collect();
    assert_eq!(found.len(), 1, "element {} has {} inverses", t.name(x), found.len());
    found[0]
}

pub fn nonzero_idempotents(s: &ScaledSemigroup) -> Vec<usize> {
    let t = s.semigroup();
    (0..t.len()).filter(|&x| !t.is_zero(x) && t.mul(x, x) == x).collect()
}

/// Nonzero idempotents `p` such that no `g` with `g^-1 g = p` has scale below 1.
pub fn brute_ecx(s: &ScaledSemigroup) -> Vec<usize> {
    let t = s.semigroup();
    let one = Rational::one();
    nonzero_idempotents(s)
        .into_iter()
        .filter(|&p| {
            (0..t.len())
                .filter(|&g| !t.is_zero(g) && t.mul(brute_inverse(s, g), g) == p)
                .all(|g| *s.scale().get(g) >= one)
        })
        .collect()
}

/// All nonempty filters of the idempotent semilattice (zero excluded),
/// each as a sorted set of element indices.
pub fn brute_filters(s: &ScaledSemigroup) -> BTreeSet<Vec<usize>> {
    let t = s.semigroup();
    let e = nonzero_idempotents(s);
    assert!(e.len() <= 16, "too many idempotents for subset enumeration");
    let leq = |p: usize, q: usize| t.mul(p, q) == p;
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << e.len()) {
        let f: Vec<usize> = (0..e.len()).filter(|i| mask >> i & 1 == 1).map(|i| e[i]).collect();
        let upward = f.iter().all(|&p| e.iter().all(|&q| !leq(p, q) || f.contains(&q)));
        let meets = f.iter().all(|&p| f.iter().all(|&q| f.contains(&t.mul(p, q))));
        if upward && meets {
            out.insert(f);
        }
    }
    out
}

/// Filters contained in `ecx`.
pub fn brute_boundary(s: &ScaledSemigroup, ecx: &[usize]) -> BTreeSet<Vec<usize>> {
    brute_filters(s).into_iter().filter(|f| f.iter().all(|p| ecx.contains(p))).collect()
}

pub fn big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>], inner: usize, cols: usize) -> Vec<Vec<BigInt>> {
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j])).collect())
        .collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn bareiss_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else { return BigInt::zero() };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Rank over the rationals, by fraction-free elimination on a copy.
pub fn rank(m: &[Vec<BigInt>]) -> usize {
    let mut a = m.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let (x, y) = (a[r][c].clone(), a[i][c].clone());
            let pivot = a[r].clone();
            for (v, p) in a[i].iter_mut().zip(&pivot) {
                *v = &*v * &x - p * &y;
            }
        }
        r += 1;
    }
    r
}

pub fn is_diagonal_chain(d: &[Vec<BigInt>]) -> bool {
    let mut prev: Option<BigInt> = None;
    for (i, row) in d.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if i != j && !x.is_zero() {
                return false;
            }
        }
        if let Some(x) = row.get(i) {
            if x.is_negative() {
                return false;
            }
            if let Some(p) = &prev {
                if p.is_zero() && !x.is_zero() {
                    return false;
                }
                if !p.is_zero() && !(x % p).is_zero() {
                    return false;
                }
            }
            prev = Some(x.clone());
        }
    }
    true
}
