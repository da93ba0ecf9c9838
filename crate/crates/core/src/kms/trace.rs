//! Traces on the kernel group: finite mixtures of characters.

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::KmsError;
use crate::rational::{self, Rational};

/// `sum_i w_i chi_{theta_i}`, with each `theta_i` a vector of angles in turns.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceSpec {
    weights: Vec<f64>,
    angles: Vec<Vec<Rational>>,
}

impl TraceSpec {
    pub fn new(weights: Vec<f64>, angles: Vec<Vec<Rational>>) -> Result<Self, KmsError> {
        if weights.is_empty() || weights.len() != angles.len() {
            return Err(KmsError::InvalidTrace("need one angle vector per weight".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(KmsError::InvalidTrace("weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(KmsError::InvalidTrace(format!("weights sum to {total}, not 1")));
        }
        let rank = angles[0].len();
        if angles.iter().any(|a| a.len() != rank) {
            return Err(KmsError::InvalidTrace("angle vectors differ in length".into()));
        }
        Ok(TraceSpec { weights, angles })
    }

    /// A single character.
    pub fn character(angles: Vec<Rational>) -> Self {
        TraceSpec { weights: vec![1.0], angles: vec![angles] }
    }

    /// The trivial character on a kernel of the given rank.
    pub fn trivial(rank: usize) -> Self {
        Self::character(vec![Rational::zero(); rank])
    }

    pub fn rank(&self) -> usize {
        self.angles[0].len()
    }

    pub fn components(&self) -> impl Iterator<Item = (f64, &[Rational])> {
        self.weights.iter().copied().zip(self.angles.iter().map(Vec::as_slice))
    }

    /// `sum_i w_i exp(2 pi i <theta_i, diff>)`.
    pub fn eval_diff(&self, diff: &[i128]) -> Complex64 {
        let mut z = Complex64::zero();
        for (w, theta) in self.components() {
            z += character(theta, diff) * w;
        }
        z
    }
}

/// `exp(2 pi i <theta, diff>)`, with the phase reduced exactly mod 1.
pub fn character(theta: &[Rational], diff: &[i128]) -> Complex64 {
    let mut phase = Rational::zero();
    for (t, &d) in theta.iter().zip(diff) {
        phase += t * Rational::from_integer(d.into());
    }
    cis_turns(&(&phase - phase.floor()))
}

/// `exp(2 pi i r)` for `r` in `[0, 1)`; exact on multiples of a quarter turn.
pub fn cis_turns(r: &Rational) -> Complex64 {
    debug_assert!(!r.is_negative());
    let quarter = r * Rational::from_integer(4.into());
    if quarter.is_integer() {
        return match quarter.to_integer().try_into().unwrap_or(0u8) {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let angle = 2.0 * std::f64::consts::PI * rational::to_f64(r);
    Complex64::new(angle.cos(), angle.sin())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WeightRepr {
    Num(f64),
    Str(String),
}

#[derive(Serialize, Deserialize)]
struct TraceJson {
    weights: Vec<serde_json::Value>,
    angles: Vec<Vec<serde_json::Value>>,
}

impl TraceSpec {
    /// `{"weights": [w, ...], "angles": [[turns, ...], ...]}`; weights may be numbers
    /// or `"p/q"` strings, angles are rationals.
    pub fn from_json(v: &serde_json::Value) -> Result<Self, KmsError> {
        let raw: TraceJson = serde_json::from_value(v.clone()).map_err(|e| KmsError::InvalidTrace(e.to_string()))?;
        let weights = raw
            .weights
            .into_iter()
            .map(|w| match serde_json::from_value::<WeightRepr>(w) {
                Ok(WeightRepr::Num(x)) => Ok(x),
                Ok(WeightRepr::Str(s)) => rational::parse(&s).map(|r| rational::to_f64(&r)).map_err(|e| e.to_string()),
                Err(e) => Err(e.to_string()),
            })
            .collect::<Result<Vec<f64>, String>>()
            .map_err(KmsError::InvalidTrace)?;
        let angles = raw
            .angles
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|a| match a {
                        serde_json::Value::Number(n) => {
                            n.as_i64().map(rational::int).ok_or_else(|| format!("angle {n} is not rational"))
                        }
                        serde_json::Value::String(s) => rational::parse(&s).map_err(|e| e.to_string()),
                        other => Err(format!("angle {other} is not rational")),
                    })
                    .collect::<Result<Vec<_>, String>>()
            })
            .collect::<Result<Vec<_>, String>>()
            .map_err(KmsError::InvalidTrace)?;
        TraceSpec::new(weights, angles)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "weights": self.weights,
            "angles": self.angles.iter().map(|a| a.iter().map(rational::format).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}
