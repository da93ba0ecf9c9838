//! The left inverse hull `I_l(S)` of a right LCM monoid.
//!
//! Every nonzero element is a partial bijection `bS -> aS, by -> ay`, stored
//! as the pair `(a, b)` (think `a b^{-1}`). Idempotents are the pairs
//! `(a, a)`, the projections onto `aS`. The scale extends as
//! `N(a, b) = N(a) / N(b)`.

use std::fmt;

use num_traits::One;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::monoid::{Lcm, MonoidElement, MonoidError, ScaledMonoid};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HullError {
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error("the zero element has no scale")]
    ZeroScale,
    #[error("{0} is not an idempotent")]
    NotIdempotent(String),
    #[error("malformed hull element encoding: {0}")]
    Encoding(String),
}

pub type Result<T, E = HullError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HullElement {
    Zero,
    /// The partial bijection `bS -> aS`, `by -> ay`.
    Pair {
        a: MonoidElement,
        b: MonoidElement,
    },
}

impl HullElement {
    pub fn pair(a: MonoidElement, b: MonoidElement) -> Self {
        HullElement::Pair { a, b }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, HullElement::Zero)
    }

    pub fn is_idempotent(&self) -> bool {
        match self {
            HullElement::Zero => true,
            HullElement::Pair { a, b } => a == b,
        }
    }
}

impl fmt::Display for HullElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HullElement::Zero => write!(f, "0"),
            HullElement::Pair { a, b } => write!(f, "[{a} | {b}]"),
        }
    }
}

/// `I_l(S)` together with the extended scale.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseHull {
    monoid: ScaledMonoid,
}

impl InverseHull {
    pub fn new(monoid: ScaledMonoid) -> Self {
        InverseHull { monoid }
    }

    pub fn monoid(&self) -> &ScaledMonoid {
        &self.monoid
    }

    /// Left translation by `s`, i.e. `S -> sS`.
    pub fn translation(&self, s: MonoidElement) -> HullElement {
        HullElement::pair(s, self.monoid.identity())
    }

    /// The idempotent `p_{sS} = s s^{-1}`.
    pub fn projection(&self, s: MonoidElement) -> HullElement {
        HullElement::pair(s.clone(), s)
    }

    /// Converts `s^{-1} t` into normal form.
    pub fn from_inverse_product(&self, s: &MonoidElement, t: &MonoidElement) -> Result<HullElement> {
        let e = self.monoid.identity();
        self.compose(&HullElement::pair(e.clone(), s.clone()), &HullElement::pair(t.clone(), e))
    }

    /// Composition `x ∘ y` (apply `y` first):
    /// `(a, b)(c, d) = (af, de)` where `bS ∩ cS = rS`, `r = bf = ce`.
    pub fn compose(&self, x: &HullElement, y: &HullElement) -> Result<HullElement> {
        let (HullElement::Pair { a, b }, HullElement::Pair { a: c, b: d }) = (x, y) else {
            return Ok(HullElement::Zero);
        };
        let r = match self.monoid.lcm(b, c)? {
            Lcm::Disjoint => return Ok(HullElement::Zero),
            Lcm::Ideal(r) => r,
        };
        let f = self.monoid.left_divide(b, &r)?.expect("lcm lies in bS");
        let e = self.monoid.left_divide(c, &r)?.expect("lcm lies in cS");
        Ok(HullElement::pair(self.monoid.multiply(a, &f)?, self.monoid.multiply(d, &e)?))
    }

    pub fn inverse(&self, x: &HullElement) -> HullElement {
        match x {
            HullElement::Zero => HullElement::Zero,
            HullElement::Pair { a, b } => HullElement::pair(b.clone(), a.clone()),
        }
    }

    /// `x^{-1} x`, the projection onto the domain of `x`.
    pub fn idempotent_of(&self, x: &HullElement) -> HullElement {
        match x {
            HullElement::Zero => HullElement::Zero,
            HullElement::Pair { b, .. } => HullElement::pair(b.clone(), b.clone()),
        }
    }

    /// `N(a) / N(b)`.
    pub fn hull_scale(&self, x: &HullElement) -> Result<Rational> {
        match x {
            HullElement::Zero => Err(HullError::ZeroScale),
            HullElement::Pair { a, b } => Ok(self.monoid.scale_value(a)? / self.monoid.scale_value(b)?),
        }
    }

    /// Membership of an idempotent `p_{aS}` in `E_c^x`, which for hulls of
    /// LCM monoids is exactly `a ∈ ker N`.
    pub fn ecx_member_hull(&self, p: &HullElement) -> Result<bool> {
        match p {
            HullElement::Pair { a, b } if a == b => Ok(self.monoid.kernel_member(a)?),
            other => Err(HullError::NotIdempotent(other.to_string())),
        }
    }

    /// Searches `candidates` for `g` with `g^{-1} g = p` and `N(g) < 1`.
    pub fn scale_decreasing_witness(
        &self,
        p: &HullElement,
        candidates: &[MonoidElement],
    ) -> Result<Option<(HullElement, Rational)>> {
        for x in candidates {
            for y in candidates {
                let g = HullElement::pair(x.clone(), y.clone());
                if self.compose(&self.inverse(&g), &g)? != *p {
                    continue;
                }
                let n = self.hull_scale(&g)?;
                if n < Rational::one() {
                    return Ok(Some((g, n)));
                }
            }
        }
        Ok(None)
    }

    /// Checks the crystal of the hull on all idempotents `p_{aS}` with
    /// `N(a) <= bound` and size `<= bound`:
    ///
    /// 1. `p ∉ E_c^x` exactly when a direct search finds `g` with
    ///    `g^{-1} g = p` and `N(g) < 1`, and that happens exactly off the kernel;
    /// 2. pairs of kernel elements are closed under composition and never
    ///    compose to zero, so `I_l(ker N)` embeds;
    /// 3. every sampled `g` with `N(g) = 1` whose domain projection lies in
    ///    `E_c^x` has both components in the kernel.
    pub fn crystal_certificate_hull(&self, bound: u64) -> Result<HullCertificate> {
        let m = &self.monoid;
        let samples = m.elements_within(&Rational::from_integer(bound.into()), bound);
        let mut cert = HullCertificate {
            passed: true,
            bound,
            idempotents: Vec::new(),
            kernel_pairs_checked: 0,
            closure_failure: None,
            crystal_failure: None,
        };
        for a in &samples {
            let p = self.projection(a.clone());
            let in_kernel = m.kernel_member(a)?;
            let member = self.ecx_member_hull(&p)?;
            let witness = self.scale_decreasing_witness(&p, &samples)?;
            let consistent = member == in_kernel && witness.is_some() != in_kernel;
            cert.passed &= consistent;
            cert.idempotents.push(IdempotentCheck {
                idempotent: p.to_string(),
                in_kernel,
                ecx_member: member,
                witness: witness.map(|(g, n)| ScaleWitness { g: g.to_string(), scale: rational::format(&n) }),
                consistent,
            });
        }

        let kernel = m.kernel_elements(bound);
        'outer: for a in &kernel {
            for b in &kernel {
                for c in &kernel {
                    for d in &kernel {
                        cert.kernel_pairs_checked += 1;
                        let x = HullElement::pair(a.clone(), b.clone());
                        let y = HullElement::pair(c.clone(), d.clone());
                        let ok = match self.compose(&x, &y)? {
                            HullElement::Zero => false,
                            HullElement::Pair { a, b } => m.kernel_member(&a)? && m.kernel_member(&b)?,
                        };
                        if !ok {
                            cert.passed = false;
                            cert.closure_failure = Some(format!("{x} ∘ {y} leaves I_l(ker N)"));
                            break 'outer;
                        }
                    }
                }
            }
        }

        'crystal: for x in &samples {
            for y in &samples {
                let g = HullElement::pair(x.clone(), y.clone());
                if self.hull_scale(&g)?.is_one() && m.kernel_member(y)? && !m.kernel_member(x)? {
                    cert.passed = false;
                    cert.crystal_failure = Some(format!("{g} has scale 1 and kernel domain but leaves ker N"));
                    break 'crystal;
                }
            }
        }
        Ok(cert)
    }

    /// Random words in translations and their inverses. For every word that
    /// composes to a nonzero idempotent the product of the factor scales must
    /// be exactly 1, and for every nonzero word it must equal the scale of
    /// the composite. Stops after `wanted` idempotent words or `max_attempts` words.
    pub fn scale_consistency<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        wanted: usize,
        max_len: usize,
        max_attempts: usize,
    ) -> Result<ScaleConsistencyReport> {
        let mut rep = ScaleConsistencyReport { attempts: 0, nonzero: 0, idempotents: 0, witness: None };
        while rep.idempotents < wanted && rep.attempts < max_attempts {
            rep.attempts += 1;
            let len = rng.gen_range(1..=max_len.max(1));
            let mut g = self.translation(self.monoid.identity());
            let mut accumulated = Rational::one();
            let mut word = Vec::with_capacity(len);
            for _ in 0..len {
                let s = self.monoid.random_element(rng, 3);
                let n = self.monoid.scale_value(&s)?;
                let t = self.translation(s);
                let f = if rng.gen_bool(0.5) {
                    accumulated *= n;
                    t
                } else {
                    accumulated /= n;
                    self.inverse(&t)
                };
                word.push(f.to_string());
                g = self.compose(&g, &f)?;
            }
            if g.is_zero() {
                continue;
            }
            rep.nonzero += 1;
            let n = self.hull_scale(&g)?;
            let idempotent = g.is_idempotent();
            if idempotent {
                rep.idempotents += 1;
            }
            if n != accumulated || (idempotent && !accumulated.is_one()) {
                rep.witness = Some(format!(
                    "{} = {g} has scale {} but its factors multiply to {}",
                    word.join(" ∘ "),
                    rational::format(&n),
                    rational::format(&accumulated)
                ));
                break;
            }
        }
        Ok(rep)
    }

    pub fn element_to_json(&self, x: &HullElement) -> Value {
        match x {
            HullElement::Zero => json!("zero"),
            HullElement::Pair { a, b } => {
                json!({"a": self.monoid.element_to_json(a), "b": self.monoid.element_to_json(b)})
            }
        }
    }

    pub fn element_from_json(&self, v: &Value) -> Result<HullElement> {
        if v.as_str() == Some("zero") {
            return Ok(HullElement::Zero);
        }
        let (Some(a), Some(b)) = (v.get("a"), v.get("b")) else {
            return Err(HullError::Encoding(v.to_string()));
        };
        Ok(HullElement::pair(self.monoid.element_from_json(a)?, self.monoid.element_from_json(b)?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScaleConsistencyReport {
    pub attempts: usize,
    pub nonzero: usize,
    pub idempotents: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl ScaleConsistencyReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HullCertificate {
    pub passed: bool,
    pub bound: u64,
    pub idempotents: Vec<IdempotentCheck>,
    pub kernel_pairs_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closure_failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crystal_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdempotentCheck {
    pub idempotent: String,
    pub in_kernel: bool,
    pub ecx_member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ScaleWitness>,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleWitness {
    pub g: String,
    pub scale: String,
}
