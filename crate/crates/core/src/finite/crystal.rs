//! `E_c^x`, `I_c^x` and the crystal semigroup with truncated product.

use num_traits::One;
use serde::Serialize;

use super::{FiniteError, FiniteInverseSemigroup, FiniteScale, Result, ScaledSemigroup};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrystalResult {
    /// `E_c^x`, as indices into the original semigroup.
    pub ecx: Vec<usize>,
    /// `I_c^x`, as indices into the original semigroup.
    pub icx: Vec<usize>,
    /// `I_c`: index 0 is the adjoined zero, index `k + 1` is `icx[k]`.
    pub crystal: FiniteInverseSemigroup,
}

impl CrystalResult {
    /// Original index of a nonzero crystal element.
    pub fn embed(&self, x: usize) -> Option<usize> {
        x.checked_sub(1).map(|k| self.icx[k])
    }

    pub fn summary(&self, s: &FiniteInverseSemigroup) -> CrystalSummary {
        let names = |v: &[usize]| v.iter().map(|&x| s.name(x).to_string()).collect();
        CrystalSummary {
            ecx: names(&self.ecx),
            icx: names(&self.icx),
            crystal_elements: self.crystal.names().to_vec(),
            crystal_table: self.crystal.table().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrystalSummary {
    pub ecx: Vec<String>,
    pub icx: Vec<String>,
    pub crystal_elements: Vec<String>,
    pub crystal_table: Vec<Vec<usize>>,
}

impl ScaledSemigroup {
    /// Nonzero idempotents `p` such that every `g` with `g^{-1}g = p` has `N(g) >= 1`.
    pub fn ecx(&self) -> Vec<usize> {
        let s = self.semigroup();
        let one = crate::rational::Rational::one();
        s.idempotents()
            .iter()
            .copied()
            .filter(|&p| s.nonzero().filter(|&g| s.domain(g) == p).all(|g| *self.scale().get(g) >= one))
            .collect()
    }

    /// Nonzero `g` with both `g^{-1}g` and `gg^{-1}` in `ecx`.
    pub fn icx_for(&self, ecx: &[usize]) -> Vec<usize> {
        let s = self.semigroup();
        s.nonzero().filter(|&g| ecx.contains(&s.domain(g)) && ecx.contains(&s.range(g))).collect()
    }

    pub fn crystal(&self) -> Result<CrystalResult> {
        let s = self.semigroup();
        let ecx = self.ecx();
        let icx = self.icx_for(&ecx);
        if let Some(&g) = icx.iter().find(|&&g| !self.scale().get(g).is_one()) {
            return Err(FiniteError::Internal(format!("N({}) != 1 on the crystal", s.name(g))));
        }
        let zero_name = match s.zero() {
            Some(z) => s.name(z).to_string(),
            None => {
                let mut z = "0".to_string();
                while s.index_of(&z).is_some() {
                    z.push('\'');
                }
                z
            }
        };
        let mut names = vec![zero_name];
        names.extend(icx.iter().map(|&g| s.name(g).to_string()));
        let pos = |x: usize| icx.iter().position(|&g| g == x).map_or(0, |k| k + 1);
        let n = names.len();
        let mut table = vec![vec![0; n]; n];
        for (i, &g) in icx.iter().enumerate() {
            for (j, &h) in icx.iter().enumerate() {
                table[i + 1][j + 1] = pos(s.mul(g, h));
            }
        }
        let crystal = FiniteInverseSemigroup::new(names, Some(0), table)?;
        Ok(CrystalResult { ecx, icx, crystal })
    }

    /// Whether `ecx` is closed upward in the natural order.
    pub fn ecx_is_upward_closed(&self) -> bool {
        let s = self.semigroup();
        let ecx = self.ecx();
        ecx.iter().all(|&p| s.idempotents().iter().all(|&q| !s.leq(p, q) || ecx.contains(&q)))
    }
}

impl CrystalResult {
    /// The crystal with the trivial scale.
    pub fn scaled(&self) -> ScaledSemigroup {
        ScaledSemigroup { scale: FiniteScale::trivial(&self.crystal), semigroup: self.crystal.clone() }
    }
}
