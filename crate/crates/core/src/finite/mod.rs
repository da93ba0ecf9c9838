//! Finite inverse semigroups given by Cayley tables, with scales.
//!
//! Validation is exhaustive: associativity on all triples, unique inverses,
//! commuting idempotents, an absorbing zero, and multiplicativity of the
//! scale on every nonzero product.

mod catalog;
mod crystal;
mod groupoid;
mod semichar;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational, RationalRepr};

pub use catalog::{brandt, catalog, chain, disconnected_pair, symmetric_inverse_monoid, two_orthogonal, CatalogEntry};
pub use crystal::{CrystalResult, CrystalSummary};
pub use groupoid::{Arrow, Groupoid, RestrictionCertificate, TransversalityReport, TransversalityWitness};
pub use semichar::{BoundaryComparison, Filter, DEFAULT_IDEMPOTENT_BOUND};

/// A broken axiom, with the elements that break it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub elements: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Associativity,
    ZeroNotAbsorbing,
    Inverse,
    IdempotentsDoNotCommute,
    ScaleNotMultiplicative,
    ScaleNotPositive,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at ({}): {}", self.kind, self.elements.join(", "), self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FiniteError {
    #[error("malformed semigroup input: {0}")]
    Input(String),
    #[error("axiom violation: {0}")]
    Violation(Violation),
    #[error("{count} nonzero idempotents exceed the enumeration bound {bound}")]
    TooManyIdempotents { count: usize, bound: usize },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T, E = FiniteError> = std::result::Result<T, E>;

/// A finite inverse semigroup, possibly with zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteInverseSemigroup {
    names: Vec<String>,
    zero: Option<usize>,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    /// Nonzero idempotents, in index order.
    idempotents: Vec<usize>,
}

impl FiniteInverseSemigroup {
    /// Builds and validates a semigroup from its Cayley table (`table[x][y] = xy`).
    pub fn new(names: Vec<String>, zero: Option<usize>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(FiniteError::Input("no elements".into()));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(FiniteError::Input(format!("table must be {n}x{n}")));
        }
        if let Some(&bad) = table.iter().flatten().find(|&&v| v >= n) {
            return Err(FiniteError::Input(format!("table entry {bad} out of range")));
        }
        if zero.is_some_and(|z| z >= n) {
            return Err(FiniteError::Input("zero index out of range".into()));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = names.iter().find(|s| !seen.insert(s.as_str())) {
            return Err(FiniteError::Input(format!("duplicate element name {dup:?}")));
        }
        let violation = |kind, elems: &[usize], detail: String| {
            FiniteError::Violation(Violation {
                kind,
                elements: elems.iter().map(|&i| names[i].clone()).collect(),
                detail,
            })
        };

        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let l = table[table[x][y]][z];
                    let r = table[x][table[y][z]];
                    if l != r {
                        return Err(violation(
                            ViolationKind::Associativity,
                            &[x, y, z],
                            format!("(xy)z = {} but x(yz) = {}", names[l], names[r]),
                        ));
                    }
                }
            }
        }
        if let Some(z) = zero {
            for (x, row) in table.iter().enumerate() {
                if table[z][x] != z || row[z] != z {
                    return Err(violation(ViolationKind::ZeroNotAbsorbing, &[x], "0x or x0 differs from 0".into()));
                }
            }
        }
        let mut inverse = vec![0; n];
        for x in 0..n {
            let inv: Vec<usize> =
                (0..n).filter(|&y| table[table[x][y]][x] == x && table[table[y][x]][y] == y).collect();
            if inv.len() != 1 {
                return Err(violation(ViolationKind::Inverse, &[x], format!("{} inverses found", inv.len())));
            }
            inverse[x] = inv[0];
        }
        let idem: Vec<usize> = (0..n).filter(|&x| table[x][x] == x).collect();
        for &p in &idem {
            for &q in &idem {
                if table[p][q] != table[q][p] {
                    return Err(violation(ViolationKind::IdempotentsDoNotCommute, &[p, q], "pq != qp".into()));
                }
            }
        }
        let idempotents = idem.into_iter().filter(|&p| Some(p) != zero).collect();
        Ok(FiniteInverseSemigroup { names, zero, table, inverse, idempotents })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn zero(&self) -> Option<usize> {
        self.zero
    }

    pub fn is_zero(&self, x: usize) -> bool {
        self.zero == Some(x)
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn inverse(&self, x: usize) -> usize {
        self.inverse[x]
    }

    /// `x^{-1} x`.
    pub fn domain(&self, x: usize) -> usize {
        self.mul(self.inverse[x], x)
    }

    /// `x x^{-1}`.
    pub fn range(&self, x: usize) -> usize {
        self.mul(x, self.inverse[x])
    }

    /// Nonzero idempotents `E^x`, in index order.
    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }

    pub fn nonzero(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&x| !self.is_zero(x))
    }

    /// Natural order on idempotents: `p <= q` iff `p = pq`.
    pub fn leq(&self, p: usize, q: usize) -> bool {
        self.mul(p, q) == p
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }
}

/// A scale `N: I^x -> Q_{>0}`, indexed like the semigroup (zero has none).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteScale {
    values: Vec<Option<Rational>>,
}

impl FiniteScale {
    pub fn trivial(s: &FiniteInverseSemigroup) -> Self {
        FiniteScale { values: (0..s.len()).map(|x| (!s.is_zero(x)).then(Rational::one)).collect() }
    }

    /// Scale values by element; entries at the zero are ignored.
    pub fn from_values(s: &FiniteInverseSemigroup, values: Vec<Rational>) -> Result<Self> {
        if values.len() != s.len() {
            return Err(FiniteError::Input("one scale value per element required".into()));
        }
        Ok(FiniteScale { values: values.into_iter().enumerate().map(|(x, v)| (!s.is_zero(x)).then_some(v)).collect() })
    }

    /// `N(x)`; panics on the zero element.
    pub fn get(&self, x: usize) -> &Rational {
        self.values[x].as_ref().expect("the zero element has no scale")
    }

    pub fn try_get(&self, x: usize) -> Option<&Rational> {
        self.values[x].as_ref()
    }
}

/// Checks positivity and `N(gh) = N(g) N(h)` whenever `gh != 0`.
pub fn validate_scale(s: &FiniteInverseSemigroup, n: &FiniteScale) -> Result<(), Violation> {
    for g in s.nonzero() {
        if !n.get(g).is_positive() {
            return Err(Violation {
                kind: ViolationKind::ScaleNotPositive,
                elements: vec![s.name(g).to_string()],
                detail: format!("N = {}", rational::format(n.get(g))),
            });
        }
    }
    for g in s.nonzero() {
        for h in s.nonzero() {
            let gh = s.mul(g, h);
            if s.is_zero(gh) {
                continue;
            }
            let prod = n.get(g) * n.get(h);
            if *n.get(gh) != prod {
                return Err(Violation {
                    kind: ViolationKind::ScaleNotMultiplicative,
                    elements: vec![s.name(g).to_string(), s.name(h).to_string()],
                    detail: format!(
                        "N({}) = {} but N({})N({}) = {}",
                        s.name(gh),
                        rational::Pretty(n.get(gh)),
                        s.name(g),
                        s.name(h),
                        rational::Pretty(&prod)
                    ),
                });
            }
        }
    }
    Ok(())
}

/// A validated finite inverse semigroup with a validated scale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledSemigroup {
    semigroup: FiniteInverseSemigroup,
    scale: FiniteScale,
}

impl ScaledSemigroup {
    pub fn new(semigroup: FiniteInverseSemigroup, scale: FiniteScale) -> Result<Self> {
        validate_scale(&semigroup, &scale).map_err(FiniteError::Violation)?;
        Ok(ScaledSemigroup { semigroup, scale })
    }

    pub fn trivial(semigroup: FiniteInverseSemigroup) -> Self {
        let scale = FiniteScale::trivial(&semigroup);
        ScaledSemigroup { semigroup, scale }
    }

    pub fn semigroup(&self) -> &FiniteInverseSemigroup {
        &self.semigroup
    }

    pub fn scale(&self) -> &FiniteScale {
        &self.scale
    }

    pub fn from_json(spec: &TableSpec) -> Result<Self> {
        let (s, n) = spec.parse()?;
        Self::new(s, n)
    }

    pub fn to_spec(&self) -> TableSpec {
        let s = &self.semigroup;
        TableSpec {
            elements: s.names.clone(),
            zero: s.zero.map(|z| s.names[z].clone()),
            table: s.table.clone(),
            scale: s.nonzero().map(|x| (s.names[x].clone(), ScaleEntry(self.scale.get(x).clone()))).collect(),
        }
    }
}

/// JSON Cayley table:
/// `{"elements": [names], "zero": name|null, "table": [[index]], "scale": {name: "p/q"}}`.
///
/// Elements missing from `scale` get scale 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableSpec {
    pub elements: Vec<String>,
    #[serde(default)]
    pub zero: Option<String>,
    pub table: Vec<Vec<usize>>,
    #[serde(default)]
    pub scale: BTreeMap<String, ScaleEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaleEntry(pub Rational);

impl Serialize for ScaleEntry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        rational::serde_str::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for ScaleEntry {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        RationalRepr::deserialize(d)?.into_rational().map(ScaleEntry).map_err(serde::de::Error::custom)
    }
}

impl TableSpec {
    /// Builds the semigroup (validating its axioms) and the raw scale; the
    /// scale itself is validated by [`ScaledSemigroup::new`].
    pub fn parse(&self) -> Result<(FiniteInverseSemigroup, FiniteScale)> {
        let zero = match &self.zero {
            None => None,
            Some(z) => Some(
                self.elements
                    .iter()
                    .position(|e| e == z)
                    .ok_or_else(|| FiniteError::Input(format!("zero {z:?} is not an element")))?,
            ),
        };
        for name in self.scale.keys() {
            if !self.elements.contains(name) {
                return Err(FiniteError::Input(format!("scale given for unknown element {name:?}")));
            }
        }
        let s = FiniteInverseSemigroup::new(self.elements.clone(), zero, self.table.clone())?;
        let values = self
            .elements
            .iter()
            .map(|e| self.scale.get(e).map(|v| v.0.clone()).unwrap_or_else(Rational::one))
            .collect();
        let n = FiniteScale::from_values(&s, values)?;
        Ok((s, n))
    }
}
