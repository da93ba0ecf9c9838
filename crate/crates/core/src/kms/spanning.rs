//! Spanning elements `v_s v_t^*` and their products.

use serde_json::{json, Value};

use crate::monoid::{Lcm, MonoidElement, MonoidError, ScaledMonoid};

/// `v_s v_t^*`, or zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SpanningElement {
    Zero,
    Pair { s: MonoidElement, t: MonoidElement },
}

impl SpanningElement {
    pub fn pair(s: MonoidElement, t: MonoidElement) -> Self {
        SpanningElement::Pair { s, t }
    }

    pub fn one(m: &ScaledMonoid) -> Self {
        Self::pair(m.identity(), m.identity())
    }

    pub fn adjoint(&self) -> Self {
        match self {
            SpanningElement::Zero => SpanningElement::Zero,
            SpanningElement::Pair { s, t } => Self::pair(t.clone(), s.clone()),
        }
    }

    pub fn is_self_adjoint(&self) -> bool {
        match self {
            SpanningElement::Zero => true,
            SpanningElement::Pair { s, t } => s == t,
        }
    }

    pub fn to_json(&self, m: &ScaledMonoid) -> Value {
        match self {
            SpanningElement::Zero => json!("zero"),
            SpanningElement::Pair { s, t } => json!({"s": m.element_to_json(s), "t": m.element_to_json(t)}),
        }
    }

    pub fn from_json(m: &ScaledMonoid, v: &Value) -> Result<Self, MonoidError> {
        if v.as_str() == Some("zero") {
            return Ok(SpanningElement::Zero);
        }
        let field = |k: &str| v.get(k).ok_or_else(|| MonoidError::Encoding(v.to_string()));
        Ok(Self::pair(m.element_from_json(field("s")?)?, m.element_from_json(field("t")?)?))
    }
}

impl std::fmt::Display for SpanningElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpanningElement::Zero => write!(f, "0"),
            SpanningElement::Pair { s, t } => write!(f, "v_{s} v_{t}*"),
        }
    }
}

/// `v_s v_t^* v_u v_w^* = v_{sa} v_{wb}^*` where `tS ∩ uS = rS`, `r = ta = ub`.
pub fn spanning_product(
    m: &ScaledMonoid,
    x: &SpanningElement,
    y: &SpanningElement,
) -> Result<SpanningElement, MonoidError> {
    let (SpanningElement::Pair { s, t }, SpanningElement::Pair { s: u, t: w }) = (x, y) else {
        return Ok(SpanningElement::Zero);
    };
    let r = match m.lcm(t, u)? {
        Lcm::Disjoint => return Ok(SpanningElement::Zero),
        Lcm::Ideal(r) => r,
    };
    let missing = || MonoidError::Encoding(format!("lcm {r} is not a common multiple of {t} and {u}"));
    let a = m.left_divide(t, &r)?.ok_or_else(missing)?;
    let b = m.left_divide(u, &r)?.ok_or_else(missing)?;
    Ok(SpanningElement::pair(m.multiply(s, &a)?, m.multiply(w, &b)?))
}
