//! Dense univariate polynomials in `t` over the integers and the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Polynomial with integer coefficients, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ZPoly(Vec<BigInt>);

/// Polynomial with rational coefficients, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly(Vec<Rational>);

macro_rules! poly_common {
    ($name:ident, $coef:ty) => {
        impl $name {
            pub fn new(mut coeffs: Vec<$coef>) -> Self {
                while coeffs.last().is_some_and(|c| c.is_zero()) {
                    coeffs.pop();
                }
                $name(coeffs)
            }

            pub fn constant(c: $coef) -> Self {
                Self::new(vec![c])
            }

            /// The monomial `t`.
            pub fn t() -> Self {
                Self::new(vec![<$coef>::zero(), <$coef>::one()])
            }

            pub fn coeffs(&self) -> &[$coef] {
                &self.0
            }

            /// Degree, with `None` for the zero polynomial.
            pub fn degree(&self) -> Option<usize> {
                self.0.len().checked_sub(1)
            }

            pub fn is_zero(&self) -> bool {
                self.0.is_empty()
            }

            pub fn eval(&self, x: &$coef) -> $coef {
                self.0.iter().rev().fold(<$coef>::zero(), |acc, c| acc * x + c)
            }

            pub fn leading(&self) -> Option<&$coef> {
                self.0.last()
            }
        }

        impl Add for &$name {
            type Output = $name;
            fn add(self, o: &$name) -> $name {
                let n = self.0.len().max(o.0.len());
                let z = <$coef>::zero();
                $name::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect())
            }
        }

        impl Sub for &$name {
            type Output = $name;
            fn sub(self, o: &$name) -> $name {
                let n = self.0.len().max(o.0.len());
                let z = <$coef>::zero();
                $name::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) - o.0.get(i).unwrap_or(&z)).collect())
            }
        }

        impl Mul for &$name {
            type Output = $name;
            fn mul(self, o: &$name) -> $name {
                if self.is_zero() || o.is_zero() {
                    return $name::default();
                }
                let mut out = vec![<$coef>::zero(); self.0.len() + o.0.len() - 1];
                for (i, a) in self.0.iter().enumerate() {
                    for (j, b) in o.0.iter().enumerate() {
                        out[i + j] += a * b;
                    }
                }
                $name::new(out)
            }
        }

        impl Neg for &$name {
            type Output = $name;
            fn neg(self) -> $name {
                $name(self.0.iter().map(|c| -c).collect())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.0.is_empty() {
                    return write!(f, "0");
                }
                let mut first = true;
                for (i, c) in self.0.iter().enumerate().rev() {
                    if c.is_zero() {
                        continue;
                    }
                    let neg = c.is_negative();
                    let abs = c.abs();
                    match (first, neg) {
                        (true, true) => write!(f, "-")?,
                        (false, true) => write!(f, " - ")?,
                        (false, false) => write!(f, " + ")?,
                        (true, false) => {}
                    }
                    first = false;
                    let unit = abs.is_one();
                    match i {
                        0 => write!(f, "{abs}")?,
                        1 if unit => write!(f, "t")?,
                        1 => write!(f, "{abs}t")?,
                        _ if unit => write!(f, "t^{i}")?,
                        _ => write!(f, "{abs}t^{i}")?,
                    }
                }
                Ok(())
            }
        }
    };
}

poly_common!(ZPoly, BigInt);
poly_common!(QPoly, Rational);

impl ZPoly {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn to_q(&self) -> QPoly {
        QPoly::new(self.0.iter().map(|c| Rational::from_integer(c.clone())).collect())
    }
}

impl QPoly {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| crate::rational::int(c)).collect())
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dl = d.leading().expect("division by the zero polynomial").clone();
        let dd = d.0.len() - 1;
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (QPoly::default(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &dl;
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        (QPoly::new(q), QPoly::new(r))
    }

    /// Scaled to leading coefficient 1 (zero stays zero).
    pub fn monic(&self) -> QPoly {
        match self.leading() {
            None => self.clone(),
            Some(l) => QPoly::new(self.0.iter().map(|c| c / l).collect()),
        }
    }

    pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }
}
