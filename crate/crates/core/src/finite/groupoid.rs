//! Discrete groupoids of germs `[g, chi]` over the semicharacter space, the
//! restriction-isomorphism certificate, and the transversality check.

use serde::Serialize;

use super::crystal::CrystalResult;
use super::semichar::Filter;
use super::{FiniteError, FiniteInverseSemigroup, Result, ScaledSemigroup};

/// A germ class `[g, chi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    /// Least element index of the class.
    pub g: usize,
    /// All `g'` with `[g', chi] = [g, chi]`.
    pub members: Vec<usize>,
    pub source: usize,
    pub range: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Groupoid {
    pub objects: Vec<Filter>,
    pub arrows: Vec<Arrow>,
}

impl FiniteInverseSemigroup {
    /// `g.chi`, supported on `{q : chi(g^{-1} q g) = 1}`.
    pub fn act(&self, g: usize, chi: Filter) -> Filter {
        let gi = self.inverse(g);
        let mut mask = 0u64;
        for (i, &q) in self.idempotents().iter().enumerate() {
            if chi.eval(self, self.mul(self.mul(gi, q), g)) {
                mask |= 1 << i;
            }
        }
        Filter(mask)
    }

    /// Germ equivalence at `chi`: `g1 p = g2 p` for some `p` with `chi(p) = 1`.
    pub fn germ_equal(&self, g1: usize, g2: usize, chi: Filter) -> bool {
        chi.members(self).into_iter().any(|p| self.mul(g1, p) == self.mul(g2, p))
    }

    pub fn paterson(&self, bound: usize) -> Result<Groupoid> {
        let objects = self.semicharacters(bound)?;
        let mut arrows = Vec::new();
        for (oi, &chi) in objects.iter().enumerate() {
            let mut classes: Vec<Vec<usize>> = Vec::new();
            for g in self.nonzero().filter(|&g| chi.eval(self, self.domain(g))) {
                match classes.iter_mut().find(|c| self.germ_equal(c[0], g, chi)) {
                    Some(c) => c.push(g),
                    None => classes.push(vec![g]),
                }
            }
            for members in classes {
                let g = members[0];
                let target = self.act(g, chi);
                let range = objects.iter().position(|&f| f == target).ok_or_else(|| {
                    FiniteError::Internal(format!("{} moves {} outside the spectrum", self.name(g), chi.label(self)))
                })?;
                arrows.push(Arrow { g, members, source: oi, range });
            }
        }
        let groupoid = Groupoid { objects, arrows };
        groupoid.verify(self)?;
        Ok(groupoid)
    }
}

impl Groupoid {
    /// Index of the arrow containing the germ of `g` at object `obj`.
    pub fn arrow_of(&self, g: usize, obj: usize) -> Option<usize> {
        self.arrows.iter().position(|a| a.source == obj && a.members.contains(&g))
    }

    pub fn unit(&self, s: &FiniteInverseSemigroup, obj: usize) -> Option<usize> {
        let chi = self.objects[obj];
        chi.members(s).into_iter().find_map(|p| self.arrow_of(p, obj))
    }

    /// `a b` when `source(a) = range(b)`.
    pub fn compose(&self, s: &FiniteInverseSemigroup, a: usize, b: usize) -> Option<usize> {
        let (x, y) = (&self.arrows[a], &self.arrows[b]);
        if x.source != y.range {
            return None;
        }
        self.arrow_of(s.mul(x.g, y.g), y.source)
    }

    fn verify(&self, s: &FiniteInverseSemigroup) -> Result<()> {
        let fail = |msg: String| Err(FiniteError::Internal(msg));
        let n = self.arrows.len();
        for (a, x) in self.arrows.iter().enumerate() {
            for (b, y) in self.arrows.iter().enumerate() {
                if x.source != y.range {
                    continue;
                }
                let Some(c) = self.compose(s, a, b) else {
                    return fail(format!("product of arrows {a} and {b} is undefined"));
                };
                let z = &self.arrows[c];
                if z.source != y.source || z.range != x.range {
                    return fail(format!("product of arrows {a} and {b} has the wrong ends"));
                }
                for &g in &x.members {
                    for &h in &y.members {
                        if self.arrow_of(s.mul(g, h), y.source) != Some(c) {
                            return fail(format!("product of arrows {a} and {b} depends on representatives"));
                        }
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let left = self.compose(s, a, b).and_then(|ab| self.compose(s, ab, c));
                    let right = self.compose(s, b, c).and_then(|bc| self.compose(s, a, bc));
                    if self.arrows[b].range == self.arrows[a].source
                        && self.arrows[c].range == self.arrows[b].source
                        && left != right
                    {
                        return fail(format!("arrows {a}, {b}, {c} do not associate"));
                    }
                }
            }
        }
        for (a, x) in self.arrows.iter().enumerate() {
            let (Some(us), Some(ur)) = (self.unit(s, x.source), self.unit(s, x.range)) else {
                return fail(format!("missing unit for arrow {a}"));
            };
            if self.compose(s, a, us) != Some(a) || self.compose(s, ur, a) != Some(a) {
                return fail(format!("units do not act trivially on arrow {a}"));
            }
            let Some(inv) = self.arrow_of(s.inverse(x.g), x.range) else {
                return fail(format!("arrow {a} has no inverse"));
            };
            if self.compose(s, inv, a) != Some(us) || self.compose(s, a, inv) != Some(ur) {
                return fail(format!("inverse of arrow {a} is not two-sided"));
            }
        }
        Ok(())
    }

    /// Arrows with source and range in `objects`.
    pub fn restricted_arrows(&self, objects: &[usize]) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&a| objects.contains(&self.arrows[a].source) && objects.contains(&self.arrows[a].range))
            .collect()
    }

    pub fn label(&self, s: &FiniteInverseSemigroup, a: usize) -> String {
        let x = &self.arrows[a];
        format!("[{}, {}]", s.name(x.g), self.objects[x.source].label(s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictionCertificate {
    pub passed: bool,
    pub boundary_objects: usize,
    pub restricted_arrows: usize,
    pub crystal_objects: usize,
    pub crystal_arrows: usize,
    pub failures: Vec<String>,
}

impl ScaledSemigroup {
    /// Compares the groupoid of `I` restricted to the boundary set with the
    /// groupoid of the crystal, through extension of semicharacters by zero.
    pub fn restriction_iso_certificate(&self, bound: usize) -> Result<RestrictionCertificate> {
        let s = self.semigroup();
        let crystal = self.crystal()?;
        let z = self.boundary_set(bound)?;
        let big = s.paterson(bound)?;
        let small = crystal.crystal.paterson(bound)?;
        Ok(certify(s, &crystal, &z, &big, &small))
    }
}

fn certify(
    s: &FiniteInverseSemigroup,
    crystal: &CrystalResult,
    z: &[Filter],
    big: &Groupoid,
    small: &Groupoid,
) -> RestrictionCertificate {
    let c = &crystal.crystal;
    let mut failures = Vec::new();
    let z_objects: Vec<usize> = z.iter().filter_map(|f| big.objects.iter().position(|o| o == f)).collect();
    if z_objects.len() != z.len() {
        failures.push("a boundary filter is not an object".to_string());
    }

    // extend a crystal semicharacter by zero on E^x \ E_c^x
    let extend = |f: Filter| -> Filter {
        let mut mask = 0u64;
        for p in f.members(c) {
            let orig = crystal.embed(p).expect("filters avoid zero");
            let pos = s.idempotents().iter().position(|&q| q == orig).expect("crystal idempotent");
            mask |= 1 << pos;
        }
        Filter(mask)
    };
    let mut object_map = Vec::new();
    for &f in &small.objects {
        let ext = extend(f);
        match big.objects.iter().position(|&o| o == ext) {
            Some(j) if z_objects.contains(&j) => object_map.push(Some(j)),
            _ => {
                failures.push(format!("crystal object {} does not extend into the boundary set", f.label(c)));
                object_map.push(None);
            }
        }
    }
    let mut hit: Vec<usize> = object_map.iter().flatten().copied().collect();
    hit.sort();
    hit.dedup();
    if hit.len() != object_map.len() || hit.len() != z_objects.len() {
        failures.push(format!(
            "object map is not a bijection: {} crystal objects, {} boundary objects, {} images",
            object_map.len(),
            z_objects.len(),
            hit.len()
        ));
    }

    let restricted = big.restricted_arrows(&z_objects);
    let mut arrow_map: Vec<Option<usize>> = Vec::new();
    for (a, x) in small.arrows.iter().enumerate() {
        let Some(obj) = object_map[x.source] else {
            arrow_map.push(None);
            continue;
        };
        let images: Vec<Option<usize>> =
            x.members.iter().map(|&g| big.arrow_of(crystal.embed(g).expect("nonzero"), obj)).collect();
        let first = images[0];
        if images.iter().any(|&i| i != first) || first.is_none() {
            failures.push(format!("arrow {} has no well-defined image", small.label(c, a)));
            arrow_map.push(None);
            continue;
        }
        let image = first.unwrap();
        if !restricted.contains(&image) {
            failures.push(format!("arrow {} leaves the restricted groupoid", small.label(c, a)));
        }
        if object_map[x.range] != Some(big.arrows[image].range) {
            failures.push(format!("arrow {} changes range under the map", small.label(c, a)));
        }
        arrow_map.push(Some(image));
    }
    let mut images: Vec<usize> = arrow_map.iter().flatten().copied().collect();
    images.sort();
    images.dedup();
    if images.len() != small.arrows.len() {
        failures.push("arrow map is not injective".to_string());
    }
    if images != restricted {
        let missed: Vec<String> = restricted.iter().filter(|a| !images.contains(a)).map(|&a| big.label(s, a)).collect();
        if !missed.is_empty() {
            failures.push(format!("arrows not reached: {}", missed.join(", ")));
        }
    }
    for a in 0..small.arrows.len() {
        for b in 0..small.arrows.len() {
            let Some(ab) = small.compose(c, a, b) else { continue };
            let (Some(fa), Some(fb), Some(fab)) = (arrow_map[a], arrow_map[b], arrow_map[ab]) else { continue };
            if big.compose(s, fa, fb) != Some(fab) {
                failures.push(format!(
                    "composition of {} and {} is not preserved",
                    small.label(c, a),
                    small.label(c, b)
                ));
            }
        }
    }
    RestrictionCertificate {
        passed: failures.is_empty(),
        boundary_objects: z_objects.len(),
        restricted_arrows: restricted.len(),
        crystal_objects: small.objects.len(),
        crystal_arrows: small.arrows.len(),
        failures,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransversalityWitness {
    pub p: String,
    pub g: String,
    pub q: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransversalityReport {
    pub holds: bool,
    pub witnesses: Vec<TransversalityWitness>,
    /// Idempotents with no connecting element.
    pub failures: Vec<String>,
}

impl FiniteInverseSemigroup {
    /// For each nonzero idempotent `p`, searches `g` with `g^{-1}g = p` and `gg^{-1} in ecx`.
    pub fn transversality_for(&self, ecx: &[usize]) -> TransversalityReport {
        let mut witnesses = Vec::new();
        let mut failures = Vec::new();
        for &p in self.idempotents() {
            match self.nonzero().find(|&g| self.domain(g) == p && ecx.contains(&self.range(g))) {
                Some(g) => witnesses.push(TransversalityWitness {
                    p: self.name(p).into(),
                    g: self.name(g).into(),
                    q: self.name(self.range(g)).into(),
                }),
                None => failures.push(self.name(p).into()),
            }
        }
        TransversalityReport { holds: failures.is_empty(), witnesses, failures }
    }
}

impl ScaledSemigroup {
    pub fn transversality_check(&self) -> TransversalityReport {
        self.semigroup().transversality_for(&self.ecx())
    }
}
