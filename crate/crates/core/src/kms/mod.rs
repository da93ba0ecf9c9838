//! Low-temperature KMS states of the semigroup algebra of a scaled right LCM
//! monoid, and its ground states.
//!
//! A state is fixed by a trace on the kernel group (a mixture of characters)
//! and evaluated on `v_s v_t^*` as a normalized sum over `~N` classes:
//!
//! ```text
//! phi(v_s v_t^*) = zeta_N(beta)^{-1} sum_{[r]: sr ~N tr} N(sr)^{-beta} tau(v_q v_p^*),
//! ```
//!
//! where `sr p = tr q` with `p, q` in the kernel. Sums are truncated at a
//! cutoff on `N(r)` and normalized by the partial partition function of the
//! same truncation.

mod spanning;
mod trace;
mod zeta;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::monoid::{ClassBlock, FamilyKind, MonoidElement, MonoidError, ScaledMonoid};
use crate::rational::{self, Rational};

pub use spanning::{spanning_product, SpanningElement};
pub use trace::{character, cis_turns, TraceSpec};
pub use zeta::{riemann_zeta, Threshold, ZetaResult};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KmsError {
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error("invalid trace: {0}")]
    InvalidTrace(String),
    #[error("trace has rank {got} but the kernel has rank {expected}")]
    TraceRank { expected: usize, got: usize },
    #[error("beta = {0} must be positive and finite")]
    InvalidBeta(f64),
    #[error("zeta_N diverges at beta = {beta} (abscissa {abscissa})")]
    Divergent { beta: f64, abscissa: f64 },
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
    #[error("{0} is not in the kernel")]
    NonKernel(String),
}

pub type Result<T, E = KmsError> = std::result::Result<T, E>;

/// KMS and ground-state evaluation for one monoid.
#[derive(Debug, Clone)]
pub struct KmsEngine {
    monoid: ScaledMonoid,
}

/// `~N` classes up to a cutoff, enumerated once and reused across queries.
#[derive(Debug, Clone)]
pub struct Truncation {
    cutoff: Rational,
    blocks: Vec<ClassBlock>,
}

impl Truncation {
    pub fn cutoff(&self) -> &Rational {
        &self.cutoff
    }

    pub fn classes(&self) -> usize {
        self.blocks.iter().map(ClassBlock::len).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KmsResult {
    #[serde(serialize_with = "ser_complex")]
    pub value: Complex64,
    /// Partial partition function used for normalization.
    pub zeta_partial: f64,
    pub tail: f64,
    /// Bound on the distance to the untruncated value.
    pub error_bound: f64,
    pub classes_used: usize,
    /// Untruncated value, for families where it has a closed form.
    #[serde(serialize_with = "ser_opt_complex")]
    pub closed_form: Option<Complex64>,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &z.re)?;
    st.serialize_field("im", &z.im)?;
    st.end()
}

fn ser_opt_complex<S: serde::Serializer>(z: &Option<Complex64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match z {
        Some(z) => ser_complex(z, s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KmsCheckReport {
    pub beta: f64,
    #[serde(with = "rational::serde_str")]
    pub cutoff: Rational,
    pub pairs: usize,
    pub max_residual: f64,
    /// Largest per-pair allowance `(1 + lambda) 2T / Z`.
    pub allowance: f64,
    /// Max residual of the closed-form state, where one exists.
    pub max_closed_residual: Option<f64>,
    pub passed: bool,
    pub worst_pair: Option<String>,
}

impl KmsEngine {
    /// Rejects monoids whose kernel is nonabelian or whose classes are not
    /// finite below each cutoff (free monoids mixing kernel and heavy letters).
    pub fn new(monoid: ScaledMonoid) -> Result<Self> {
        if !monoid.kernel_is_abelian() {
            return Err(KmsError::UnsupportedFamily(
                "free monoid with more than one weight-1 generator has a nonabelian kernel".into(),
            ));
        }
        if monoid.kind() == FamilyKind::Free
            && !monoid.kernel_generators().is_empty()
            && monoid.kernel_generators().len() < monoid.weights().len()
        {
            return Err(KmsError::UnsupportedFamily(
                "free monoid mixing weight-1 and heavier generators violates the scale condition".into(),
            ));
        }
        Ok(KmsEngine { monoid })
    }

    pub fn monoid(&self) -> &ScaledMonoid {
        &self.monoid
    }

    pub fn truncation(&self, cutoff: &Rational) -> Result<Truncation> {
        Ok(Truncation { cutoff: cutoff.clone(), blocks: self.monoid.class_blocks(cutoff)? })
    }

    fn check_query(&self, beta: f64, trace: &TraceSpec) -> Result<()> {
        if beta <= 0.0 || !beta.is_finite() {
            return Err(KmsError::InvalidBeta(beta));
        }
        let abscissa = self.abscissa();
        if beta <= abscissa {
            return Err(KmsError::Divergent { beta, abscissa });
        }
        if trace.rank() != self.monoid.kernel_rank() {
            return Err(KmsError::TraceRank { expected: self.monoid.kernel_rank(), got: trace.rank() });
        }
        Ok(())
    }

    fn kernel_diff(&self, q: &MonoidElement, p: &MonoidElement) -> Result<Vec<i128>> {
        let q = self.monoid.kernel_exponent(q)?;
        let p = self.monoid.kernel_exponent(p)?;
        Ok(q.iter().zip(&p).map(|(&a, &b)| a as i128 - b as i128).collect())
    }

    /// `tau(v_q v_p^*)` for kernel elements `q`, `p`.
    pub fn trace_eval(&self, trace: &TraceSpec, q: &MonoidElement, p: &MonoidElement) -> Result<Complex64> {
        for x in [q, p] {
            if !self.monoid.kernel_member(x)? {
                return Err(KmsError::NonKernel(x.to_string()));
            }
        }
        if trace.rank() != self.monoid.kernel_rank() {
            return Err(KmsError::TraceRank { expected: self.monoid.kernel_rank(), got: trace.rank() });
        }
        Ok(trace.eval_diff(&self.kernel_diff(q, p)?))
    }

    pub fn kms_value(&self, beta: f64, trace: &TraceSpec, x: &SpanningElement, cutoff: &Rational) -> Result<KmsResult> {
        let trunc = self.truncation(cutoff)?;
        self.kms_value_in(&trunc, beta, trace, x)
    }

    /// [`KmsEngine::kms_value`] on a prepared truncation.
    pub fn kms_value_in(
        &self,
        trunc: &Truncation,
        beta: f64,
        trace: &TraceSpec,
        x: &SpanningElement,
    ) -> Result<KmsResult> {
        self.check_query(beta, trace)?;
        let thetas: Vec<&[Rational]> = trace.components().map(|(_, t)| t).collect();
        let mut sums = vec![Complex64::zero(); thetas.len()];
        let mut z = 0.0;
        if let SpanningElement::Pair { s, t } = x {
            let ns = self.monoid.scale_value(s)?;
            let balanced = ns == self.monoid.scale_value(t)?;
            let ns_pow = rational::neg_pow(&ns, beta);
            match (s, t) {
                (&MonoidElement::Affine { b: u, a }, &MonoidElement::Affine { b: v, .. }) => {
                    // Classes (x, d), x mod d, all contribute d (ad)^{-beta} tau(k)
                    // when ad | u - v, with k = (u - v) / (ad).
                    for block in &trunc.blocks {
                        debug_assert!(block.residue_uniform());
                        let d: u64 = block.value.to_integer().try_into().map_err(|_| MonoidError::Overflow("axb"))?;
                        let count = block.len() as f64;
                        z += count * rational::neg_pow(&block.value, beta);
                        let ad = a as i128 * d as i128;
                        let diff = u as i128 - v as i128;
                        if balanced && diff % ad == 0 {
                            let term = count * rational::neg_pow(&Rational::from_integer(ad.into()), beta);
                            for (sum, theta) in sums.iter_mut().zip(&thetas) {
                                *sum += character(theta, &[diff / ad]) * term;
                            }
                        }
                    }
                }
                _ => {
                    for block in &trunc.blocks {
                        let w = rational::neg_pow(&block.value, beta);
                        for r in block.reps() {
                            z += w;
                            if !balanced {
                                continue;
                            }
                            let sr = self.monoid.multiply(s, &r)?;
                            let tr = self.monoid.multiply(t, &r)?;
                            if !self.monoid.equivalent_mod_kernel(&sr, &tr)? {
                                continue;
                            }
                            let (p, q) = self.monoid.solve_pq(&sr, &tr)?;
                            let diff = self.kernel_diff(&q, &p)?;
                            let term = ns_pow * w;
                            for (sum, theta) in sums.iter_mut().zip(&thetas) {
                                *sum += character(theta, &diff) * term;
                            }
                        }
                    }
                }
            }
        } else {
            for block in &trunc.blocks {
                z += block.len() as f64 * rational::neg_pow(&block.value, beta);
            }
        }
        let mut value = Complex64::zero();
        for ((w, _), sum) in trace.components().zip(&sums) {
            value += (sum / z) * w;
        }
        let tail = self.tail_bound(beta, &trunc.cutoff, z).unwrap_or(f64::INFINITY);
        Ok(KmsResult {
            value,
            zeta_partial: z,
            tail,
            error_bound: 2.0 * tail / z,
            classes_used: trunc.classes(),
            closed_form: self.closed_kms_value(beta, trace, x)?,
        })
    }

    /// The untruncated state where it has a closed form: free monoids without
    /// mixed letters and `N^k` give `[s ~N t] N(s)^{-beta} tau(v_q v_p^*)`
    /// with `sp = tq`, since the class sum factors through `zeta_N`.
    pub fn closed_kms_value(&self, beta: f64, trace: &TraceSpec, x: &SpanningElement) -> Result<Option<Complex64>> {
        if self.monoid.kind() == FamilyKind::Affine {
            return Ok(None);
        }
        let SpanningElement::Pair { s, t } = x else { return Ok(Some(Complex64::zero())) };
        if !self.monoid.equivalent_mod_kernel(s, t)? {
            return Ok(Some(Complex64::zero()));
        }
        let (p, q) = self.monoid.solve_pq(s, t)?;
        let ns = self.monoid.scale_value(s)?;
        Ok(Some(trace.eval_diff(&self.kernel_diff(&q, &p)?) * rational::neg_pow(&ns, beta)))
    }

    /// Ground state: `tau(v_s v_t^*)` when both `s` and `t` lie in the kernel, else 0.
    pub fn ground_value(&self, trace: &TraceSpec, x: &SpanningElement) -> Result<Complex64> {
        let SpanningElement::Pair { s, t } = x else { return Ok(Complex64::zero()) };
        if !self.monoid.kernel_member(s)? || !self.monoid.kernel_member(t)? {
            return Ok(Complex64::zero());
        }
        self.trace_eval(trace, s, t)
    }

    /// Random spanning element with factors of size at most `size`.
    pub fn random_spanning<R: Rng + ?Sized>(&self, rng: &mut R, size: u64) -> SpanningElement {
        SpanningElement::pair(self.monoid.random_element(rng, size), self.monoid.random_element(rng, size))
    }

    /// Residuals `|phi(yx) - (N(s)/N(t))^{-beta} phi(xy)|` for random pairs
    /// `x`, `y = v_s v_t^*`.
    pub fn kms_condition_check<R: Rng + ?Sized>(
        &self,
        beta: f64,
        trace: &TraceSpec,
        pairs: usize,
        size: u64,
        cutoff: &Rational,
        rng: &mut R,
    ) -> Result<KmsCheckReport> {
        let trunc = self.truncation(cutoff)?;
        let samples: Vec<(SpanningElement, SpanningElement)> =
            (0..pairs).map(|_| (self.random_spanning(rng, size), self.random_spanning(rng, size))).collect();
        self.kms_condition_on(&trunc, beta, trace, &samples)
    }

    pub fn kms_condition_on(
        &self,
        trunc: &Truncation,
        beta: f64,
        trace: &TraceSpec,
        samples: &[(SpanningElement, SpanningElement)],
    ) -> Result<KmsCheckReport> {
        self.check_query(beta, trace)?;
        let mut max_residual: f64 = 0.0;
        let mut allowance: f64 = 0.0;
        let mut max_closed: Option<f64> = None;
        let mut passed = true;
        let mut worst = None;
        for (x, y) in samples {
            let lambda = match y {
                SpanningElement::Pair { s, t } => {
                    let ratio = self.monoid.scale_value(s)? / self.monoid.scale_value(t)?;
                    rational::neg_pow(&ratio, beta)
                }
                SpanningElement::Zero => 1.0,
            };
            let yx = self.kms_value_in(trunc, beta, trace, &spanning_product(&self.monoid, y, x)?)?;
            let xy = self.kms_value_in(trunc, beta, trace, &spanning_product(&self.monoid, x, y)?)?;
            let residual = (yx.value - xy.value * lambda).norm();
            let allowed = (1.0 + lambda) * (yx.error_bound + 1e-12);
            if let (Some(a), Some(b)) = (yx.closed_form, xy.closed_form) {
                let r = (a - b * lambda).norm();
                max_closed = Some(max_closed.map_or(r, |m: f64| m.max(r)));
                if r > 1e-9 {
                    passed = false;
                }
            }
            if residual > allowed {
                passed = false;
            }
            if residual >= max_residual {
                max_residual = residual;
                worst = Some(format!("x = {x}, y = {y}"));
            }
            allowance = allowance.max(allowed);
        }
        Ok(KmsCheckReport {
            beta,
            cutoff: trunc.cutoff.clone(),
            pairs: samples.len(),
            max_residual,
            allowance,
            max_closed_residual: max_closed,
            passed,
            worst_pair: worst,
        })
    }
}

impl KmsEngine {
    /// A cutoff keeping the class count moderate for interactive use.
    pub fn default_cutoff(&self) -> Rational {
        match self.monoid.kind() {
            FamilyKind::Affine => rational::int(2000),
            _ => {
                let heavy = self.monoid.weights().iter().filter(|w| !w.is_one()).count();
                if heavy == 0 {
                    Rational::one()
                } else {
                    rational::int(1 << 12)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use rand::SeedableRng;

    fn affine(b: u64, a: u64) -> MonoidElement {
        MonoidElement::Affine { b, a }
    }

    #[test]
    fn normalization_is_exact() {
        for m in [ScaledMonoid::affine(), ScaledMonoid::free(vec![int(2), int(3)]).unwrap()] {
            let e = KmsEngine::new(m).unwrap();
            let tr = TraceSpec::trivial(e.monoid().kernel_rank());
            let one = SpanningElement::one(e.monoid());
            let r = e.kms_value(3.0, &tr, &one, &int(200)).unwrap();
            assert_eq!(r.value, Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn free_point_value() {
        let e = KmsEngine::new(ScaledMonoid::free(vec![int(2), int(2)]).unwrap()).unwrap();
        let a = MonoidElement::Word(vec![0]);
        let x = SpanningElement::pair(a.clone(), a);
        let r = e.kms_value(3.0, &TraceSpec::trivial(0), &x, &int(1 << 10)).unwrap();
        assert!((r.value.re - 0.125).abs() < 1e-12);
        assert_eq!(r.closed_form, Some(Complex64::new(0.125, 0.0)));
    }

    #[test]
    fn affine_point_value() {
        let e = KmsEngine::new(ScaledMonoid::affine()).unwrap();
        let x = SpanningElement::pair(affine(1, 1), affine(0, 1));
        let r = e.kms_value(3.0, &TraceSpec::trivial(1), &x, &int(2000)).unwrap();
        let expected = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
        assert!((r.value.re - expected).abs() < 1e-3);
        assert!((r.value.re - expected).abs() <= r.error_bound);
        let half = TraceSpec::character(vec![ratio(1, 2)]);
        let r = e.kms_value(3.0, &half, &x, &int(2000)).unwrap();
        assert!((r.value.re + expected).abs() < 1e-3);
    }

    #[test]
    fn ground_values() {
        let e = KmsEngine::new(ScaledMonoid::affine()).unwrap();
        let half = TraceSpec::character(vec![ratio(1, 2)]);
        let g = e.ground_value(&half, &SpanningElement::pair(affine(2, 1), affine(1, 1))).unwrap();
        assert_eq!(g, Complex64::new(-1.0, 0.0));
        let g = e.ground_value(&half, &SpanningElement::pair(affine(0, 2), affine(0, 2))).unwrap();
        assert_eq!(g, Complex64::zero());
        assert!(e.trace_eval(&half, &affine(0, 2), &affine(0, 1)).is_err());
    }

    #[test]
    fn unsupported_families() {
        assert!(KmsEngine::new(ScaledMonoid::free(vec![int(1), int(1)]).unwrap()).is_err());
        assert!(KmsEngine::new(ScaledMonoid::free(vec![int(1), int(2)]).unwrap()).is_err());
        assert!(KmsEngine::new(ScaledMonoid::free(vec![int(1)]).unwrap()).is_ok());
        let e = KmsEngine::new(ScaledMonoid::affine()).unwrap();
        let one = SpanningElement::one(e.monoid());
        assert!(matches!(e.kms_value(2.0, &TraceSpec::trivial(1), &one, &int(10)), Err(KmsError::Divergent { .. })));
        assert!(matches!(e.kms_value(3.0, &TraceSpec::trivial(2), &one, &int(10)), Err(KmsError::TraceRank { .. })));
    }

    #[test]
    fn condition_check_small() {
        let e = KmsEngine::new(ScaledMonoid::abelian(vec![int(1), int(2), int(3)]).unwrap()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let tr = TraceSpec::character(vec![ratio(1, 3)]);
        let rep = e.kms_condition_check(2.0, &tr, 30, 2, &int(1 << 12), &mut rng).unwrap();
        assert!(rep.passed, "{rep:?}");
    }
}
