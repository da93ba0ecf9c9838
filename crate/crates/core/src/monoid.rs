//! Right LCM monoids with a multiplicative scale `N: S -> [1, oo)`.
//!
//! Three families are built in, all with trivial unit group:
//!
//! * the free monoid on `k` letters, each letter carrying a weight;
//! * the free abelian monoid `N^k`, each coordinate carrying a weight;
//! * the `ax+b` monoid of pairs `(b, a)` with `a >= 1`, `b >= 0`, product
//!   `(b, a)(d, c) = (b + ad, ac)` and scale `N(b, a) = a`.
//!
//! The kernel `ker N` is the submonoid of scale-one elements and `s ~_N t`
//! holds when `sa = tb` for some kernel elements `a`, `b`. Class
//! enumeration below a cutoff drives the partition function in
//! [`crate::kms`].

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MonoidError {
    #[error("element {element} does not belong to the {family} family")]
    FamilyMismatch { family: &'static str, element: String },
    #[error("weight {0} is invalid: weights must be rationals >= 1")]
    InvalidWeight(String),
    #[error("the ax+b family has a fixed scale and takes no weights")]
    UnexpectedWeights,
    #[error("arithmetic overflow in the {0} family")]
    Overflow(&'static str),
    #[error("bounded search could not decide {s} ~N {t} with kernel multipliers up to size {bound}")]
    Undecided { s: String, t: String, bound: u64 },
    #[error("{s} and {t} are not ~N-equivalent")]
    NotEquivalent { s: String, t: String },
    #[error("cutoff {0} is below 1")]
    InvalidCutoff(String),
    #[error("class enumeration exceeded the limit of {0} classes")]
    ClassLimit(usize),
    #[error("infinitely many ~N classes have scale <= {0}")]
    InfiniteClasses(String),
    #[error("~N is not transitive for this monoid: {0}")]
    NotAnEquivalence(String),
    #[error("malformed element encoding: {0}")]
    Encoding(String),
}

pub type Result<T, E = MonoidError> = std::result::Result<T, E>;

/// Which built-in family a monoid belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    #[serde(rename = "free")]
    Free,
    #[serde(rename = "abelian")]
    Abelian,
    #[serde(rename = "axb")]
    Affine,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Free => "free",
            FamilyKind::Abelian => "abelian",
            FamilyKind::Affine => "axb",
        }
    }
}

/// JSON form of a family: `{"family": "free"|"abelian"|"axb", "weights": ["p/q", ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    pub family: FamilyKind,
    #[serde(with = "rational::serde_vec", default)]
    pub weights: Vec<Rational>,
}

/// An element of one of the built-in families, in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MonoidElement {
    /// Word over generator indices.
    Word(Vec<usize>),
    /// Exponent vector in `N^k`.
    Vector(Vec<u64>),
    /// The pair `(b, a)`, acting as `x -> ax + b`.
    Affine { b: u64, a: u64 },
}

impl fmt::Display for MonoidElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonoidElement::Word(w) if w.is_empty() => write!(f, "e"),
            MonoidElement::Word(w) => {
                for &i in w {
                    match u8::try_from(i).ok().filter(|&i| i < 26) {
                        Some(i) => write!(f, "{}", (b'a' + i) as char)?,
                        None => write!(f, "[{i}]")?,
                    }
                }
                Ok(())
            }
            MonoidElement::Vector(v) => {
                write!(f, "(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            MonoidElement::Affine { b, a } => write!(f, "({b},{a})"),
        }
    }
}

/// Result of intersecting two principal right ideals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lcm {
    Disjoint,
    /// `sS ∩ tS = rS`.
    Ideal(MonoidElement),
}

/// One `~N` class: its minimal representative and scale.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassRep {
    pub rep: MonoidElement,
    pub value: Rational,
}

/// All classes sharing one scale value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassBlock {
    pub value: Rational,
    reps: BlockReps,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum BlockReps {
    Listed(Vec<MonoidElement>),
    /// `(b, a)` for `b` in `0..a`: the classes of value `a` in the `ax+b` family.
    Residues(u64),
}

impl ClassBlock {
    pub fn len(&self) -> usize {
        match &self.reps {
            BlockReps::Listed(v) => v.len(),
            BlockReps::Residues(a) => *a as usize,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Representatives in lexicographic order.
    pub fn reps(&self) -> Box<dyn Iterator<Item = MonoidElement> + '_> {
        match &self.reps {
            BlockReps::Listed(v) => Box::new(v.iter().cloned()),
            BlockReps::Residues(a) => {
                let a = *a;
                Box::new((0..a).map(move |b| MonoidElement::Affine { b, a }))
            }
        }
    }

    /// First representative; in the `ax+b` family every class of a block
    /// contributes identically to KMS sums, so this one stands for all.
    pub fn first(&self) -> Option<MonoidElement> {
        self.reps().next()
    }

    pub(crate) fn residue_uniform(&self) -> bool {
        matches!(self.reps, BlockReps::Residues(_))
    }
}

/// Outcome of [`ScaledMonoid::scale_condition_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleConditionReport {
    pub passed: bool,
    pub pairs_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ScaleConditionWitness>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleConditionWitness {
    pub s: String,
    pub t: String,
    pub reason: String,
}

/// Default cap on materialized class lists.
pub const DEFAULT_CLASS_LIMIT: usize = 2_000_000;

/// A right LCM monoid together with its scale.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledMonoid {
    kind: FamilyKind,
    weights: Vec<Rational>,
    kernel_gens: Vec<usize>,
    class_limit: usize,
}

impl ScaledMonoid {
    /// Free monoid on `weights.len()` letters.
    pub fn free(weights: Vec<Rational>) -> Result<Self> {
        Self::weighted(FamilyKind::Free, weights)
    }

    /// `N^k` with one weight per coordinate.
    pub fn abelian(weights: Vec<Rational>) -> Result<Self> {
        Self::weighted(FamilyKind::Abelian, weights)
    }

    /// The `ax+b` monoid with `N(b, a) = a`.
    pub fn affine() -> Self {
        ScaledMonoid {
            kind: FamilyKind::Affine,
            weights: Vec::new(),
            kernel_gens: Vec::new(),
            class_limit: DEFAULT_CLASS_LIMIT,
        }
    }

    fn weighted(kind: FamilyKind, weights: Vec<Rational>) -> Result<Self> {
        for w in &weights {
            if *w < Rational::one() {
                return Err(MonoidError::InvalidWeight(rational::format(w)));
            }
        }
        let kernel_gens = weights.iter().enumerate().filter(|(_, w)| w.is_one()).map(|(i, _)| i).collect();
        Ok(ScaledMonoid { kind, weights, kernel_gens, class_limit: DEFAULT_CLASS_LIMIT })
    }

    pub fn from_descriptor(d: &FamilyDescriptor) -> Result<Self> {
        match d.family {
            FamilyKind::Free => Self::free(d.weights.clone()),
            FamilyKind::Abelian => Self::abelian(d.weights.clone()),
            FamilyKind::Affine if d.weights.is_empty() => Ok(Self::affine()),
            FamilyKind::Affine => Err(MonoidError::UnexpectedWeights),
        }
    }

    pub fn descriptor(&self) -> FamilyDescriptor {
        FamilyDescriptor { family: self.kind, weights: self.weights.clone() }
    }

    pub fn with_class_limit(mut self, limit: usize) -> Self {
        self.class_limit = limit;
        self
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// Indices of weight-one generators (free and abelian families).
    pub fn kernel_generators(&self) -> &[usize] {
        &self.kernel_gens
    }

    pub fn identity(&self) -> MonoidElement {
        match self.kind {
            FamilyKind::Free => MonoidElement::Word(Vec::new()),
            FamilyKind::Abelian => MonoidElement::Vector(vec![0; self.weights.len()]),
            FamilyKind::Affine => MonoidElement::Affine { b: 0, a: 1 },
        }
    }

    fn mismatch(&self, x: &MonoidElement) -> MonoidError {
        MonoidError::FamilyMismatch { family: self.kind.name(), element: x.to_string() }
    }

    /// Checks that `x` is a canonical element of this family.
    pub fn check(&self, x: &MonoidElement) -> Result<()> {
        let ok = match (self.kind, x) {
            (FamilyKind::Free, MonoidElement::Word(w)) => w.iter().all(|&i| i < self.weights.len()),
            (FamilyKind::Abelian, MonoidElement::Vector(v)) => v.len() == self.weights.len(),
            (FamilyKind::Affine, MonoidElement::Affine { a, .. }) => *a >= 1,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(self.mismatch(x))
        }
    }

    pub fn multiply(&self, s: &MonoidElement, t: &MonoidElement) -> Result<MonoidElement> {
        self.check(s)?;
        self.check(t)?;
        Ok(match (s, t) {
            (MonoidElement::Word(u), MonoidElement::Word(v)) => {
                MonoidElement::Word(u.iter().chain(v).copied().collect())
            }
            (MonoidElement::Vector(u), MonoidElement::Vector(v)) => MonoidElement::Vector(
                u.iter()
                    .zip(v)
                    .map(|(x, y)| x.checked_add(*y).ok_or(MonoidError::Overflow("abelian")))
                    .collect::<Result<_>>()?,
            ),
            (&MonoidElement::Affine { b, a }, &MonoidElement::Affine { b: d, a: c }) => {
                let overflow = || MonoidError::Overflow("axb");
                let b = a.checked_mul(d).and_then(|ad| ad.checked_add(b)).ok_or_else(overflow)?;
                let a = a.checked_mul(c).ok_or_else(overflow)?;
                MonoidElement::Affine { b, a }
            }
            _ => unreachable!("checked above"),
        })
    }

    /// Product of a sequence, left to right.
    pub fn product<'a>(&self, xs: impl IntoIterator<Item = &'a MonoidElement>) -> Result<MonoidElement> {
        xs.into_iter().try_fold(self.identity(), |acc, x| self.multiply(&acc, x))
    }

    /// Solves `s u = x`; `None` when `x` is not in `sS`.
    pub fn left_divide(&self, s: &MonoidElement, x: &MonoidElement) -> Result<Option<MonoidElement>> {
        self.check(s)?;
        self.check(x)?;
        Ok(match (s, x) {
            (MonoidElement::Word(u), MonoidElement::Word(v)) => {
                v.strip_prefix(u.as_slice()).map(|rest| MonoidElement::Word(rest.to_vec()))
            }
            (MonoidElement::Vector(u), MonoidElement::Vector(v)) => {
                u.iter().zip(v).map(|(a, b)| b.checked_sub(*a)).collect::<Option<Vec<_>>>().map(MonoidElement::Vector)
            }
            (&MonoidElement::Affine { b, a }, &MonoidElement::Affine { b: y, a: m }) => {
                if m % a == 0 && y >= b && (y - b) % a == 0 {
                    Some(MonoidElement::Affine { b: (y - b) / a, a: m / a })
                } else {
                    None
                }
            }
            _ => unreachable!("checked above"),
        })
    }

    /// Generator of `sS ∩ tS`, if the intersection is nonempty.
    pub fn lcm(&self, s: &MonoidElement, t: &MonoidElement) -> Result<Lcm> {
        self.check(s)?;
        self.check(t)?;
        Ok(match (s, t) {
            (MonoidElement::Word(u), MonoidElement::Word(v)) => {
                if v.starts_with(u) {
                    Lcm::Ideal(t.clone())
                } else if u.starts_with(v) {
                    Lcm::Ideal(s.clone())
                } else {
                    Lcm::Disjoint
                }
            }
            (MonoidElement::Vector(u), MonoidElement::Vector(v)) => {
                Lcm::Ideal(MonoidElement::Vector(u.iter().zip(v).map(|(a, b)| *a.max(b)).collect()))
            }
            (&MonoidElement::Affine { b, a }, &MonoidElement::Affine { b: d, a: c }) => match affine_lcm(b, a, d, c) {
                Some(Some((x, l))) => Lcm::Ideal(MonoidElement::Affine { b: x, a: l }),
                Some(None) => Lcm::Disjoint,
                None => return Err(MonoidError::Overflow("axb")),
            },
            _ => unreachable!("checked above"),
        })
    }

    pub fn scale_value(&self, s: &MonoidElement) -> Result<Rational> {
        self.check(s)?;
        Ok(match s {
            MonoidElement::Word(w) => w.iter().map(|&i| &self.weights[i]).product(),
            MonoidElement::Vector(v) => {
                v.iter().zip(&self.weights).map(|(&n, w)| num_traits::pow::pow(w.clone(), n as usize)).product()
            }
            &MonoidElement::Affine { a, .. } => Rational::from_integer(a.into()),
        })
    }

    pub fn kernel_member(&self, s: &MonoidElement) -> Result<bool> {
        self.check(s)?;
        Ok(match s {
            MonoidElement::Word(w) => w.iter().all(|&i| self.weights[i].is_one()),
            MonoidElement::Vector(v) => v.iter().zip(&self.weights).all(|(&n, w)| n == 0 || w.is_one()),
            &MonoidElement::Affine { a, .. } => a == 1,
        })
    }

    /// Decides `s ~N t`, i.e. whether `sa = tb` for kernel elements `a`, `b`.
    ///
    /// Every family has an exact decider:
    /// free monoid: one word extends the other by kernel letters only;
    /// `N^k`: agreement on all weight > 1 coordinates;
    /// `ax+b`: equal `a` and `b ≡ b' (mod a)`.
    pub fn equivalent_mod_kernel(&self, s: &MonoidElement, t: &MonoidElement) -> Result<bool> {
        self.check(s)?;
        self.check(t)?;
        Ok(match (s, t) {
            (MonoidElement::Word(u), MonoidElement::Word(v)) => {
                let (short, long) = if u.len() <= v.len() { (u, v) } else { (v, u) };
                long.starts_with(short) && long[short.len()..].iter().all(|&i| self.weights[i].is_one())
            }
            (MonoidElement::Vector(u), MonoidElement::Vector(v)) => {
                u.iter().zip(v).zip(&self.weights).all(|((x, y), w)| w.is_one() || x == y)
            }
            (&MonoidElement::Affine { b, a }, &MonoidElement::Affine { b: d, a: c }) => a == c && b % a == d % a,
            _ => unreachable!("checked above"),
        })
    }

    /// Kernel elements of size at most `bound`: words of length `<= bound` in
    /// kernel letters, kernel vectors with coordinate sum `<= bound`, or
    /// `(x, 1)` with `x <= bound`.
    pub fn kernel_elements(&self, bound: u64) -> Vec<MonoidElement> {
        match self.kind {
            FamilyKind::Free => {
                let mut out = vec![Vec::new()];
                let mut frontier = vec![Vec::new()];
                for _ in 0..bound {
                    let mut next = Vec::new();
                    for w in &frontier {
                        for &g in &self.kernel_gens {
                            let mut w2: Vec<usize> = w.clone();
                            w2.push(g);
                            next.push(w2);
                        }
                    }
                    if next.is_empty() {
                        break;
                    }
                    out.extend(next.iter().cloned());
                    frontier = next;
                }
                out.into_iter().map(MonoidElement::Word).collect()
            }
            FamilyKind::Abelian => {
                let k = self.weights.len();
                let mut out = Vec::new();
                let mut v = vec![0u64; k];
                fn rec(m: &ScaledMonoid, i: usize, left: u64, v: &mut Vec<u64>, out: &mut Vec<MonoidElement>) {
                    if i == v.len() {
                        out.push(MonoidElement::Vector(v.clone()));
                        return;
                    }
                    let top = if m.weights[i].is_one() { left } else { 0 };
                    for n in 0..=top {
                        v[i] = n;
                        rec(m, i + 1, left - n, v, out);
                    }
                    v[i] = 0;
                }
                rec(self, 0, bound, &mut v, &mut out);
                out
            }
            FamilyKind::Affine => (0..=bound).map(|b| MonoidElement::Affine { b, a: 1 }).collect(),
        }
    }

    /// Generic semi-decision of `s ~N t` by searching kernel multipliers of
    /// size at most `bound`. Returns `Ok(false)` only when the scales differ.
    pub fn equivalent_by_search(&self, s: &MonoidElement, t: &MonoidElement, bound: u64) -> Result<bool> {
        if self.scale_value(s)? != self.scale_value(t)? {
            return Ok(false);
        }
        let kernel = self.kernel_elements(bound);
        let mut left = BTreeSet::new();
        for a in &kernel {
            match self.multiply(s, a) {
                Ok(x) => {
                    left.insert(x);
                }
                Err(MonoidError::Overflow(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        for b in &kernel {
            if let Ok(y) = self.multiply(t, b) {
                if left.contains(&y) {
                    return Ok(true);
                }
            }
        }
        Err(MonoidError::Undecided { s: s.to_string(), t: t.to_string(), bound })
    }

    /// Minimal `(p, q)` in `ker N × ker N` with `xp = yq`.
    pub fn solve_pq(&self, x: &MonoidElement, y: &MonoidElement) -> Result<(MonoidElement, MonoidElement)> {
        if !self.equivalent_mod_kernel(x, y)? {
            return Err(MonoidError::NotEquivalent { s: x.to_string(), t: y.to_string() });
        }
        Ok(match (x, y) {
            (MonoidElement::Word(u), MonoidElement::Word(v)) => {
                if v.len() >= u.len() {
                    (MonoidElement::Word(v[u.len()..].to_vec()), MonoidElement::Word(Vec::new()))
                } else {
                    (MonoidElement::Word(Vec::new()), MonoidElement::Word(u[v.len()..].to_vec()))
                }
            }
            (MonoidElement::Vector(u), MonoidElement::Vector(v)) => {
                let p = u.iter().zip(v).map(|(a, b)| b.saturating_sub(*a)).collect();
                let q = u.iter().zip(v).map(|(a, b)| a.saturating_sub(*b)).collect();
                (MonoidElement::Vector(p), MonoidElement::Vector(q))
            }
            (&MonoidElement::Affine { b: u, a }, &MonoidElement::Affine { b: v, .. }) => {
                let one = |b| MonoidElement::Affine { b, a: 1 };
                if u <= v {
                    (one((v - u) / a), one(0))
                } else {
                    (one(0), one((u - v) / a))
                }
            }
            _ => unreachable!("checked above"),
        })
    }

    /// Number of independent kernel directions: the dimension of the torus
    /// dual to the (abelian) group generated by `ker N`.
    pub fn kernel_rank(&self) -> usize {
        match self.kind {
            FamilyKind::Free | FamilyKind::Abelian => self.kernel_gens.len(),
            FamilyKind::Affine => 1,
        }
    }

    /// Exponent vector of a kernel element in the kernel's free generators.
    pub fn kernel_exponent(&self, k: &MonoidElement) -> Result<Vec<u64>> {
        if !self.kernel_member(k)? {
            return Err(self.mismatch(k));
        }
        Ok(match k {
            MonoidElement::Word(w) => {
                self.kernel_gens.iter().map(|g| w.iter().filter(|&&i| i == *g).count() as u64).collect()
            }
            MonoidElement::Vector(v) => self.kernel_gens.iter().map(|&g| v[g]).collect(),
            &MonoidElement::Affine { b, .. } => vec![b],
        })
    }

    /// Whether `ker N` is abelian (needed by the trace model).
    pub fn kernel_is_abelian(&self) -> bool {
        self.kind != FamilyKind::Free || self.kernel_gens.len() <= 1
    }

    /// The `~N` classes with scale at most `cutoff`, grouped by value in
    /// increasing order. Representatives are lexicographically minimal.
    pub fn class_blocks(&self, cutoff: &Rational) -> Result<Vec<ClassBlock>> {
        if *cutoff < Rational::one() {
            return Err(MonoidError::InvalidCutoff(rational::format(cutoff)));
        }
        match self.kind {
            FamilyKind::Affine => {
                let top = cutoff.floor().to_integer();
                let top: u64 = top.try_into().map_err(|_| MonoidError::Overflow("axb"))?;
                Ok((1..=top)
                    .map(|a| ClassBlock { value: Rational::from_integer(a.into()), reps: BlockReps::Residues(a) })
                    .collect())
            }
            FamilyKind::Free => {
                let heavy: Vec<usize> = (0..self.weights.len()).filter(|i| !self.weights[*i].is_one()).collect();
                if self.kernel_gens.len() >= 2 {
                    return Err(MonoidError::NotAnEquivalence(format!(
                        "kernel letters {} and {} are each equivalent to e but not to each other",
                        MonoidElement::Word(vec![self.kernel_gens[0]]),
                        MonoidElement::Word(vec![self.kernel_gens[1]])
                    )));
                }
                if !self.kernel_gens.is_empty() {
                    let lightest = heavy.iter().map(|&i| &self.weights[i]).min();
                    if let Some(w) = lightest.filter(|w| *w <= cutoff) {
                        return Err(MonoidError::InfiniteClasses(rational::format(w)));
                    }
                    return Ok(vec![ClassBlock {
                        value: Rational::one(),
                        reps: BlockReps::Listed(vec![self.identity()]),
                    }]);
                }
                let mut found = Vec::new();
                let mut frontier = vec![(Vec::new(), Rational::one())];
                while let Some((w, v)) = frontier.pop() {
                    for &g in &heavy {
                        let v2 = &v * &self.weights[g];
                        if v2 <= *cutoff {
                            let mut w2 = w.clone();
                            w2.push(g);
                            frontier.push((w2, v2));
                        }
                    }
                    found.push(ClassRep { rep: MonoidElement::Word(w), value: v });
                    if found.len() > self.class_limit {
                        return Err(MonoidError::ClassLimit(self.class_limit));
                    }
                }
                Ok(group_blocks(found))
            }
            FamilyKind::Abelian => {
                let heavy: Vec<usize> = (0..self.weights.len()).filter(|i| !self.weights[*i].is_one()).collect();
                let mut found = Vec::new();
                let mut v = vec![0u64; self.weights.len()];
                self.abelian_classes(&heavy, 0, Rational::one(), cutoff, &mut v, &mut found)?;
                Ok(group_blocks(found))
            }
        }
    }

    fn abelian_classes(
        &self,
        heavy: &[usize],
        i: usize,
        value: Rational,
        cutoff: &Rational,
        v: &mut Vec<u64>,
        out: &mut Vec<ClassRep>,
    ) -> Result<()> {
        if i == heavy.len() {
            out.push(ClassRep { rep: MonoidElement::Vector(v.clone()), value });
            if out.len() > self.class_limit {
                return Err(MonoidError::ClassLimit(self.class_limit));
            }
            return Ok(());
        }
        let g = heavy[i];
        let mut val = value;
        let mut n = 0;
        while val <= *cutoff {
            v[g] = n;
            self.abelian_classes(heavy, i + 1, val.clone(), cutoff, v, out)?;
            val = &val * &self.weights[g];
            n += 1;
        }
        v[g] = 0;
        Ok(())
    }

    /// One minimal representative per `~N` class with `N <= cutoff`,
    /// ordered by value, then lexicographically.
    pub fn class_representatives(&self, cutoff: &Rational) -> Result<Vec<ClassRep>> {
        let blocks = self.class_blocks(cutoff)?;
        let total: usize = blocks.iter().map(ClassBlock::len).sum();
        if total > self.class_limit {
            return Err(MonoidError::ClassLimit(self.class_limit));
        }
        Ok(blocks
            .iter()
            .flat_map(|blk| blk.reps().map(move |rep| ClassRep { rep, value: blk.value.clone() }))
            .collect())
    }

    /// Elements with `N <= bound` and size at most `size` (word length,
    /// largest coordinate, or `b`), ordered by value then lexicographically.
    pub fn elements_within(&self, bound: &Rational, size: u64) -> Vec<MonoidElement> {
        let mut out: Vec<(Rational, MonoidElement)> = Vec::new();
        match self.kind {
            FamilyKind::Free => {
                let mut frontier = vec![(Vec::<usize>::new(), Rational::one())];
                while let Some((w, v)) = frontier.pop() {
                    if (w.len() as u64) < size {
                        for g in 0..self.weights.len() {
                            let v2 = &v * &self.weights[g];
                            if v2 <= *bound {
                                let mut w2 = w.clone();
                                w2.push(g);
                                frontier.push((w2, v2));
                            }
                        }
                    }
                    out.push((v, MonoidElement::Word(w)));
                }
            }
            FamilyKind::Abelian => {
                let k = self.weights.len();
                let mut v = vec![0u64; k];
                loop {
                    let x = MonoidElement::Vector(v.clone());
                    let val = self.scale_value(&x).expect("canonical");
                    if val <= *bound {
                        out.push((val, x));
                    }
                    let mut i = 0;
                    while i < k {
                        if v[i] < size {
                            v[i] += 1;
                            break;
                        }
                        v[i] = 0;
                        i += 1;
                    }
                    if i == k {
                        break;
                    }
                }
            }
            FamilyKind::Affine => {
                let top: u64 = bound.floor().to_integer().try_into().unwrap_or(u64::MAX);
                for a in 1..=top {
                    for b in 0..=size {
                        out.push((Rational::from_integer(a.into()), MonoidElement::Affine { b, a }));
                    }
                }
            }
        }
        out.sort();
        out.into_iter().map(|(_, x)| x).collect()
    }

    /// A random element of bounded size, for property tests and sampling.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, size: u64) -> MonoidElement {
        match self.kind {
            FamilyKind::Free => {
                let len = rng.gen_range(0..=size);
                let k = self.weights.len();
                MonoidElement::Word((0..len).map(|_| rng.gen_range(0..k)).collect())
            }
            FamilyKind::Abelian => {
                MonoidElement::Vector((0..self.weights.len()).map(|_| rng.gen_range(0..=size)).collect())
            }
            FamilyKind::Affine => {
                MonoidElement::Affine { b: rng.gen_range(0..=size), a: rng.gen_range(1..=size.max(1)) }
            }
        }
    }

    /// Random kernel element of bounded size.
    pub fn random_kernel_element<R: Rng + ?Sized>(&self, rng: &mut R, size: u64) -> MonoidElement {
        match self.kind {
            FamilyKind::Free if self.kernel_gens.is_empty() => self.identity(),
            FamilyKind::Free => {
                let len = rng.gen_range(0..=size);
                MonoidElement::Word(
                    (0..len).map(|_| self.kernel_gens[rng.gen_range(0..self.kernel_gens.len())]).collect(),
                )
            }
            FamilyKind::Abelian => MonoidElement::Vector(
                self.weights.iter().map(|w| if w.is_one() { rng.gen_range(0..=size) } else { 0 }).collect(),
            ),
            FamilyKind::Affine => MonoidElement::Affine { b: rng.gen_range(0..=size), a: 1 },
        }
    }

    /// Checks that for every `s` with `N(s) <= sample_bound` and every kernel
    /// element `t` of size `<= sample_bound`, `sS ∩ tS = rS` with `r ∈ s ker N`.
    pub fn scale_condition_check(&self, sample_bound: u64) -> Result<ScaleConditionReport> {
        let bound = Rational::from_integer(sample_bound.into());
        let samples = self.elements_within(&bound, sample_bound);
        let kernel = self.kernel_elements(sample_bound);
        let mut pairs = 0;
        for s in &samples {
            for t in &kernel {
                pairs += 1;
                let fail = |reason: String| ScaleConditionReport {
                    passed: false,
                    pairs_checked: pairs,
                    witness: Some(ScaleConditionWitness { s: s.to_string(), t: t.to_string(), reason }),
                };
                let r = match self.lcm(s, t)? {
                    Lcm::Disjoint => return Ok(fail("sS and tS are disjoint".into())),
                    Lcm::Ideal(r) => r,
                };
                match self.left_divide(s, &r)? {
                    Some(k) if self.kernel_member(&k)? => {}
                    Some(k) => return Ok(fail(format!("r = {r} = s·{k} with {k} outside ker N"))),
                    None => return Ok(fail(format!("r = {r} is not in sS"))),
                }
            }
        }
        Ok(ScaleConditionReport { passed: true, pairs_checked: pairs, witness: None })
    }

    /// JSON encoding of an element: a word or vector as an integer array, an
    /// `ax+b` element as `[b, a]`.
    pub fn element_to_json(&self, x: &MonoidElement) -> Value {
        match x {
            MonoidElement::Word(w) => json!(w),
            MonoidElement::Vector(v) => json!(v),
            MonoidElement::Affine { b, a } => json!([b, a]),
        }
    }

    pub fn element_from_json(&self, v: &Value) -> Result<MonoidElement> {
        let err = || MonoidError::Encoding(v.to_string());
        let arr = v.as_array().ok_or_else(err)?;
        let nums = arr.iter().map(|x| x.as_u64().ok_or_else(err)).collect::<Result<Vec<u64>>>()?;
        let x = match self.kind {
            FamilyKind::Free => MonoidElement::Word(nums.into_iter().map(|n| n as usize).collect()),
            FamilyKind::Abelian => MonoidElement::Vector(nums),
            FamilyKind::Affine => match nums.as_slice() {
                &[b, a] => MonoidElement::Affine { b, a },
                _ => return Err(err()),
            },
        };
        self.check(&x)?;
        Ok(x)
    }
}

fn group_blocks(mut found: Vec<ClassRep>) -> Vec<ClassBlock> {
    found.sort_by(|x, y| match x.value.cmp(&y.value) {
        Ordering::Equal => x.rep.cmp(&y.rep),
        o => o,
    });
    let mut blocks: Vec<ClassBlock> = Vec::new();
    for c in found {
        match blocks.last_mut() {
            Some(ClassBlock { value, reps: BlockReps::Listed(v) }) if *value == c.value => v.push(c.rep),
            _ => blocks.push(ClassBlock { value: c.value, reps: BlockReps::Listed(vec![c.rep]) }),
        }
    }
    blocks
}

/// Intersects `(b,a)S` and `(d,c)S`. Outer `None` on overflow, inner `None`
/// when disjoint, else the generator `(x0, lcm(a, c))` where `x0` is the least
/// solution `>= max(b, d)` of `x ≡ b (a)`, `x ≡ d (c)`.
fn affine_lcm(b: u64, a: u64, d: u64, c: u64) -> Option<Option<(u64, u64)>> {
    let (b, a, d, c) = (b as i128, a as i128, d as i128, c as i128);
    let g = a.gcd(&c);
    if (d - b).rem_euclid(g) != 0 {
        return Some(None);
    }
    let l = a / g * c;
    // b + a k ≡ d (mod c)  <=>  (a/g) k ≡ (d-b)/g (mod c/g)
    let m = c / g;
    let inv = mod_inverse((a / g).rem_euclid(m), m)?;
    let k = (((d - b) / g).rem_euclid(m) * inv).rem_euclid(m.max(1));
    let mut x = (b + a * k).rem_euclid(l);
    let floor = b.max(d);
    if x < floor {
        x += (floor - x + l - 1) / l * l;
    }
    Some(Some((u64::try_from(x).ok()?, u64::try_from(l).ok()?)))
}

fn mod_inverse(x: i128, m: i128) -> Option<i128> {
    if m == 1 {
        return Some(0);
    }
    let e = x.extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn ab(b: u64, a: u64) -> MonoidElement {
        MonoidElement::Affine { b, a }
    }

    fn word(s: &str) -> MonoidElement {
        MonoidElement::Word(s.bytes().map(|c| (c - b'a') as usize).collect())
    }

    fn vecn(v: &[u64]) -> MonoidElement {
        MonoidElement::Vector(v.to_vec())
    }

    fn free22() -> ScaledMonoid {
        ScaledMonoid::free(vec![int(2), int(2)]).unwrap()
    }

    #[test]
    fn multiply_examples() {
        let axb = ScaledMonoid::affine();
        assert_eq!(free22().multiply(&word("a"), &word("b")).unwrap(), word("ab"));
        assert_eq!(axb.multiply(&ab(0, 2), &ab(1, 3)).unwrap(), ab(2, 6));
        let n2 = ScaledMonoid::abelian(vec![int(2), int(3)]).unwrap();
        assert_eq!(n2.multiply(&vecn(&[1, 0]), &vecn(&[0, 1])).unwrap(), vecn(&[1, 1]));
        assert!(matches!(axb.multiply(&word("a"), &ab(0, 1)), Err(MonoidError::FamilyMismatch { .. })));
        assert!(n2.multiply(&vecn(&[1]), &vecn(&[0, 1])).is_err());
        assert!(matches!(axb.multiply(&ab(0, u64::MAX), &ab(0, 2)), Err(MonoidError::Overflow(_))));
    }

    #[test]
    fn left_divide_examples() {
        let axb = ScaledMonoid::affine();
        assert_eq!(free22().left_divide(&word("a"), &word("ab")).unwrap(), Some(word("b")));
        assert_eq!(axb.left_divide(&ab(0, 2), &ab(4, 6)).unwrap(), Some(ab(2, 3)));
        assert_eq!(axb.multiply(&ab(0, 2), &ab(2, 3)).unwrap(), ab(4, 6));
        assert_eq!(free22().left_divide(&word("a"), &word("ba")).unwrap(), None);
        assert_eq!(axb.left_divide(&ab(1, 2), &ab(4, 6)).unwrap(), None);
    }

    #[test]
    fn lcm_examples() {
        let axb = ScaledMonoid::affine();
        assert_eq!(free22().lcm(&word("a"), &word("ab")).unwrap(), Lcm::Ideal(word("ab")));
        assert_eq!(free22().lcm(&word("ab"), &word("b")).unwrap(), Lcm::Disjoint);
        assert_eq!(axb.lcm(&ab(0, 2), &ab(1, 2)).unwrap(), Lcm::Disjoint);
        assert_eq!(axb.lcm(&ab(0, 2), &ab(1, 3)).unwrap(), Lcm::Ideal(ab(4, 6)));
        assert_eq!(axb.lcm(&ab(0, 2), &ab(3, 1)).unwrap(), Lcm::Ideal(ab(4, 2)));
        assert_eq!(axb.lcm(&ab(5, 4), &ab(1, 6)).unwrap(), Lcm::Ideal(ab(13, 12)));
    }

    #[test]
    fn scale_and_kernel() {
        let f = ScaledMonoid::free(vec![int(2), int(3)]).unwrap();
        assert_eq!(f.scale_value(&word("ab")).unwrap(), int(6));
        assert_eq!(f.scale_value(&f.identity()).unwrap(), int(1));
        let axb = ScaledMonoid::affine();
        assert_eq!(axb.scale_value(&ab(7, 4)).unwrap(), int(4));
        assert!(axb.kernel_member(&ab(5, 1)).unwrap());
        assert!(!axb.kernel_member(&ab(0, 2)).unwrap());
        let n2 = ScaledMonoid::abelian(vec![int(1), int(3)]).unwrap();
        assert!(n2.kernel_member(&vecn(&[4, 0])).unwrap());
        assert!(!n2.kernel_member(&vecn(&[0, 1])).unwrap());
    }

    #[test]
    fn weights_below_one_are_rejected() {
        assert!(matches!(ScaledMonoid::free(vec![ratio(1, 2)]), Err(MonoidError::InvalidWeight(_))));
        assert!(ScaledMonoid::abelian(vec![int(1), ratio(3, 2)]).is_ok());
        let d = FamilyDescriptor { family: FamilyKind::Affine, weights: vec![int(2)] };
        assert_eq!(ScaledMonoid::from_descriptor(&d), Err(MonoidError::UnexpectedWeights));
    }

    #[test]
    fn equivalence_examples() {
        let axb = ScaledMonoid::affine();
        assert!(axb.equivalent_mod_kernel(&ab(1, 2), &ab(3, 2)).unwrap());
        assert_eq!(axb.multiply(&ab(1, 2), &ab(1, 1)).unwrap(), axb.multiply(&ab(3, 2), &ab(0, 1)).unwrap());
        assert!(!axb.equivalent_mod_kernel(&ab(1, 2), &ab(2, 2)).unwrap());
        assert!(axb.equivalent_mod_kernel(&ab(9, 5), &ab(9, 5)).unwrap());
        let mixed = ScaledMonoid::free(vec![int(2), int(1)]).unwrap();
        assert!(mixed.equivalent_mod_kernel(&word("ab"), &word("abbb")).unwrap());
        assert!(!mixed.equivalent_mod_kernel(&word("ab"), &word("ba")).unwrap());
    }

    #[test]
    fn bounded_search_reports_undecided() {
        let mixed = ScaledMonoid::free(vec![int(2), int(1)]).unwrap();
        assert!(mixed.equivalent_by_search(&word("a"), &word("abb"), 3).unwrap());
        assert!(!mixed.equivalent_by_search(&word("a"), &word("aa"), 3).unwrap());
        assert!(matches!(mixed.equivalent_by_search(&word("ab"), &word("ba"), 3), Err(MonoidError::Undecided { .. })));
    }

    #[test]
    fn class_examples() {
        let axb = ScaledMonoid::affine();
        let reps: Vec<_> = axb.class_representatives(&int(3)).unwrap().into_iter().map(|c| c.rep).collect();
        assert_eq!(reps, vec![ab(0, 1), ab(0, 2), ab(1, 2), ab(0, 3), ab(1, 3), ab(2, 3)]);
        for (i, x) in reps.iter().enumerate() {
            for y in &reps[i + 1..] {
                assert!(!axb.equivalent_mod_kernel(x, y).unwrap());
            }
        }
        let reps: Vec<_> = free22().class_representatives(&int(4)).unwrap().into_iter().map(|c| c.rep).collect();
        let expected: Vec<_> = ["", "a", "b", "aa", "ab", "ba", "bb"].iter().map(|s| word(s)).collect();
        assert_eq!(reps, expected);
        for m in [axb, free22(), ScaledMonoid::abelian(vec![int(1), int(2)]).unwrap()] {
            let reps = m.class_representatives(&int(1)).unwrap();
            assert_eq!(reps.len(), 1);
            assert_eq!(reps[0].rep, m.identity());
        }
        assert!(matches!(ScaledMonoid::affine().class_blocks(&ratio(1, 2)), Err(MonoidError::InvalidCutoff(_))));
    }

    #[test]
    fn degenerate_free_classes() {
        let two_kernel = ScaledMonoid::free(vec![int(1), int(1)]).unwrap();
        assert!(matches!(two_kernel.class_blocks(&int(1)), Err(MonoidError::NotAnEquivalence(_))));
        let mixed = ScaledMonoid::free(vec![int(2), int(1)]).unwrap();
        assert_eq!(mixed.class_blocks(&ratio(3, 2)).unwrap().len(), 1);
        assert!(matches!(mixed.class_blocks(&int(2)), Err(MonoidError::InfiniteClasses(_))));
        let capped = free22().with_class_limit(10);
        assert_eq!(capped.class_representatives(&int(16)), Err(MonoidError::ClassLimit(10)));
    }

    #[test]
    fn scale_condition_examples() {
        let axb = ScaledMonoid::affine();
        let Lcm::Ideal(r) = axb.lcm(&ab(0, 2), &ab(3, 1)).unwrap() else { panic!() };
        assert_eq!(r, ab(4, 2));
        assert_eq!(axb.left_divide(&ab(0, 2), &r).unwrap(), Some(ab(2, 1)));
        assert!(axb.scale_condition_check(6).unwrap().passed);
        assert!(
            ScaledMonoid::abelian(vec![int(1), int(2), ratio(5, 2)]).unwrap().scale_condition_check(4).unwrap().passed
        );
        assert!(free22().scale_condition_check(8).unwrap().passed);
        let report = ScaledMonoid::free(vec![int(2), int(1)]).unwrap().scale_condition_check(4).unwrap();
        assert!(!report.passed);
        assert!(report.witness.is_some());
    }

    #[test]
    fn solve_pq_examples() {
        let axb = ScaledMonoid::affine();
        assert_eq!(axb.solve_pq(&ab(4, 2), &ab(0, 2)).unwrap(), (ab(0, 1), ab(2, 1)));
        let x = word("ab");
        assert_eq!(free22().solve_pq(&x, &x).unwrap(), (word(""), word("")));
        let n2 = ScaledMonoid::abelian(vec![int(1), int(2)]).unwrap();
        assert_eq!(n2.solve_pq(&vecn(&[0, 3]), &vecn(&[5, 3])).unwrap(), (vecn(&[5, 0]), vecn(&[0, 0])));
        assert!(matches!(axb.solve_pq(&ab(1, 2), &ab(0, 2)), Err(MonoidError::NotEquivalent { .. })));
    }

    #[test]
    fn descriptor_json() {
        let d: FamilyDescriptor = serde_json::from_str(r#"{"family":"free","weights":["2/1","3"]}"#).unwrap();
        let m = ScaledMonoid::from_descriptor(&d).unwrap();
        assert_eq!(m.weights(), &[int(2), int(3)]);
        assert_eq!(serde_json::to_string(&m.descriptor()).unwrap(), r#"{"family":"free","weights":["2/1","3/1"]}"#);
        let axb: FamilyDescriptor = serde_json::from_str(r#"{"family":"axb"}"#).unwrap();
        assert_eq!(ScaledMonoid::from_descriptor(&axb).unwrap().kind(), FamilyKind::Affine);
        let x = ScaledMonoid::affine().element_from_json(&json!([3, 2])).unwrap();
        assert_eq!(x, ab(3, 2));
        assert!(ScaledMonoid::affine().element_from_json(&json!([3, 0])).is_err());
    }
}
