//! Partition functions: truncated class sums, closed forms, tail bounds and
//! the threshold `zeta_N(beta) = 2`.

use num_traits::One;
use serde::Serialize;

use super::{KmsEngine, KmsError};
use crate::monoid::{ClassBlock, FamilyKind};
use crate::rational::{self, Rational};

/// Riemann zeta on `s > 1` by Euler-Maclaurin summation.
pub fn riemann_zeta(s: f64) -> f64 {
    assert!(s > 1.0, "riemann_zeta needs s > 1");
    const N: f64 = 16.0;
    // B_{2k} / (2k)!
    const COEFFS: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
        1.0 / 74724249600.0,
    ];
    let mut sum: f64 = (1..16).map(|n| (n as f64).powf(-s)).sum();
    sum += N.powf(1.0 - s) / (s - 1.0) + 0.5 * N.powf(-s);
    // rising factorial s (s+1) ... (s+2k-2) times N^{-s-2k+1}
    let mut rising = s;
    let mut power = N.powf(-s - 1.0);
    for (k, c) in COEFFS.iter().enumerate() {
        if k > 0 {
            let j = 2.0 * (k + 1) as f64;
            rising *= (s + j - 3.0) * (s + j - 2.0);
            power /= N * N;
        }
        sum += c * rising * power;
    }
    sum
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZetaResult {
    pub beta: f64,
    #[serde(with = "rational::serde_str")]
    pub cutoff: Rational,
    /// Sum of `N(r)^{-beta}` over classes with `N(r) <= cutoff`.
    pub partial: f64,
    pub classes: usize,
    pub closed_form: Option<f64>,
    /// Upper bound for the omitted classes, when the series converges.
    pub tail_bound: Option<f64>,
    pub rigorous: bool,
    pub divergent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Threshold {
    /// Root of `zeta_N(beta) = 2`; zero when `zeta_N < 2` for every `beta > 0`.
    pub beta_star: f64,
    /// Infimum of the `beta` with `zeta_N(beta) < oo`.
    pub abscissa: f64,
    pub method: &'static str,
}

/// Largest `x` in `(lo, hi)` with `f(x) >= 0`, for decreasing `f`.
fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

impl KmsEngine {
    fn heavy_weights(&self) -> Vec<&Rational> {
        self.monoid().weights().iter().filter(|w| !w.is_one()).collect()
    }

    /// Infimum of the convergence region of `zeta_N`.
    pub fn abscissa(&self) -> f64 {
        match self.monoid().kind() {
            FamilyKind::Affine => 2.0,
            FamilyKind::Abelian => 0.0,
            FamilyKind::Free => {
                let heavy = self.heavy_weights();
                if heavy.len() <= 1 {
                    return 0.0;
                }
                if heavy.iter().all(|w| *w == heavy[0]) {
                    return (heavy.len() as f64).log2() / rational::to_f64(heavy[0]).log2();
                }
                let mut hi = 1.0;
                while self.free_sum(hi) >= 1.0 {
                    hi *= 2.0;
                }
                bisect(0.0, hi, |b| self.free_sum(b) - 1.0)
            }
        }
    }

    fn free_sum(&self, beta: f64) -> f64 {
        self.heavy_weights().iter().map(|w| rational::neg_pow(w, beta)).sum()
    }

    /// `zeta_N(beta)` in closed form, or `None` where it diverges.
    pub fn closed_zeta(&self, beta: f64) -> Option<f64> {
        if beta <= self.abscissa() {
            return None;
        }
        Some(match self.monoid().kind() {
            FamilyKind::Affine => riemann_zeta(beta - 1.0),
            FamilyKind::Free => 1.0 / (1.0 - self.free_sum(beta)),
            FamilyKind::Abelian => {
                self.heavy_weights().iter().map(|w| 1.0 / (1.0 - rational::neg_pow(w, beta))).product()
            }
        })
    }

    /// Bound on `sum N(r)^{-beta}` over classes with `N(r) > cutoff`.
    ///
    /// `ax+b`: `sum_{a > A} a^{1-beta} <= A^{2-beta} / (beta - 2)`. Free and
    /// abelian families: closed form minus the partial sum.
    pub fn tail_bound(&self, beta: f64, cutoff: &Rational, partial: f64) -> Option<f64> {
        let closed = self.closed_zeta(beta)?;
        Some(match self.monoid().kind() {
            FamilyKind::Affine => {
                let a = rational::to_f64(&Rational::from_integer(cutoff.floor().to_integer()));
                a.powf(2.0 - beta) / (beta - 2.0)
            }
            _ => (closed - partial).max(0.0) + 4.0 * f64::EPSILON * closed,
        })
    }

    /// Truncated `zeta_N(beta)`, one term per class, ordered by value then representative.
    pub fn zeta(&self, beta: f64, cutoff: &Rational) -> Result<ZetaResult, KmsError> {
        if beta <= 0.0 || !beta.is_finite() {
            return Err(KmsError::InvalidBeta(beta));
        }
        let blocks = self.monoid().class_blocks(cutoff)?;
        let mut partial = 0.0;
        let mut classes = 0;
        for block in &blocks {
            let term = rational::neg_pow(&block.value, beta);
            for _ in 0..block.len() {
                partial += term;
            }
            classes += block.len();
        }
        let closed_form = self.closed_zeta(beta);
        Ok(ZetaResult {
            beta,
            cutoff: cutoff.clone(),
            partial,
            classes,
            closed_form,
            tail_bound: self.tail_bound(beta, cutoff, partial),
            rigorous: true,
            divergent: closed_form.is_none(),
        })
    }

    /// `sum_v c(v) v^{-beta}` with `c(v)` the number of classes of value `v`.
    pub fn class_counting_partition(&self, beta: f64, cutoff: &Rational) -> Result<f64, KmsError> {
        let blocks = self.monoid().class_blocks(cutoff)?;
        Ok(blocks.iter().map(|b: &ClassBlock| b.len() as f64 * rational::neg_pow(&b.value, beta)).sum())
    }

    /// Solves `zeta_N(beta) = 2`.
    pub fn beta_threshold(&self) -> Threshold {
        let abscissa = self.abscissa();
        let heavy = self.heavy_weights();
        let kind = self.monoid().kind();
        if kind != FamilyKind::Affine && heavy.is_empty() {
            return Threshold { beta_star: 0.0, abscissa, method: "trivial" };
        }
        let equal = heavy.iter().all(|w| *w == heavy[0]);
        match kind {
            // k w^{-beta} = 1/2
            FamilyKind::Free if equal => {
                let beta = (2.0 * heavy.len() as f64).log2() / rational::to_f64(heavy[0]).log2();
                return Threshold { beta_star: beta, abscissa, method: "closed form" };
            }
            // 1 - w^{-beta} = 1/2
            FamilyKind::Abelian if heavy.len() == 1 => {
                let beta = 1.0 / rational::to_f64(heavy[0]).log2();
                return Threshold { beta_star: beta, abscissa, method: "closed form" };
            }
            _ => {}
        }
        let f = |b: f64| self.closed_zeta(b).map_or(f64::INFINITY, |z| z - 2.0);
        let mut hi = abscissa + 1.0;
        while f(hi) >= 0.0 {
            hi = abscissa + 2.0 * (hi - abscissa);
        }
        Threshold { beta_star: bisect(abscissa, hi, f), abscissa, method: "bisection" }
    }
}
