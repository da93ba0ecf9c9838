//! Semicharacters as filters on the nonzero idempotents, and the boundary set.

use serde::Serialize;

use super::{FiniteError, FiniteInverseSemigroup, Result, ScaledSemigroup};

pub const DEFAULT_IDEMPOTENT_BOUND: usize = 24;
const HARD_BOUND: usize = 63;

/// Support of a semicharacter: a filter in `E^x`, as a bitset over the
/// positions of [`FiniteInverseSemigroup::idempotents`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Filter(pub u64);

impl Filter {
    pub fn contains_pos(self, pos: usize) -> bool {
        self.0 >> pos & 1 == 1
    }

    /// Elements of the support (semigroup indices).
    pub fn members(self, s: &FiniteInverseSemigroup) -> Vec<usize> {
        s.idempotents().iter().enumerate().filter(|&(i, _)| self.contains_pos(i)).map(|(_, &p)| p).collect()
    }

    /// `chi(x)` for an arbitrary element: 1 iff `x` is a nonzero idempotent in the support.
    pub fn eval(self, s: &FiniteInverseSemigroup, x: usize) -> bool {
        s.idempotents().iter().position(|&p| p == x).is_some_and(|i| self.contains_pos(i))
    }

    pub fn label(self, s: &FiniteInverseSemigroup) -> String {
        let names: Vec<&str> = self.members(s).into_iter().map(|p| s.name(p)).collect();
        format!("{{{}}}", names.join(","))
    }
}

impl FiniteInverseSemigroup {
    fn check_bound(&self, bound: usize) -> Result<()> {
        let count = self.idempotents().len();
        if count > bound.min(HARD_BOUND) {
            return Err(FiniteError::TooManyIdempotents { count, bound: bound.min(HARD_BOUND) });
        }
        Ok(())
    }

    fn idempotent_pos(&self, x: usize) -> Option<usize> {
        self.idempotents().iter().position(|&p| p == x)
    }

    /// Up-set of each idempotent, as bitsets.
    fn up_sets(&self) -> Vec<u64> {
        let e = self.idempotents();
        e.iter()
            .map(|&p| e.iter().enumerate().filter(|&(_, &q)| self.leq(p, q)).fold(0u64, |m, (j, _)| m | 1 << j))
            .collect()
    }

    /// The principal semicharacter `chi_p`, supported on the up-set of `p`.
    pub fn principal(&self, p: usize) -> Option<Filter> {
        let pos = self.idempotent_pos(p)?;
        Some(Filter(self.up_sets()[pos]))
    }

    /// Every filter of `E^x`, in increasing bitset order.
    pub fn semicharacters(&self, bound: usize) -> Result<Vec<Filter>> {
        self.check_bound(bound)?;
        let e = self.idempotents();
        let n = e.len();
        let up = self.up_sets();
        // product of positions i, j as a position, or None when it is zero
        let prod: Vec<Vec<Option<usize>>> =
            e.iter().map(|&p| e.iter().map(|&q| self.idempotent_pos(self.mul(p, q))).collect()).collect();
        let mut out = Vec::new();
        for mask in 1u64..(1u64 << n) {
            let bits: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if bits.iter().any(|&i| up[i] & !mask != 0) {
                continue;
            }
            let closed =
                bits.iter().all(|&i| bits.iter().all(|&j| matches!(prod[i][j], Some(k) if mask >> k & 1 == 1)));
            if closed {
                out.push(Filter(mask));
            }
        }
        Ok(out)
    }

    /// Filters avoiding every idempotent outside `ecx`, and the principal
    /// filters of `ecx`, compared as sets.
    pub fn boundary_for(&self, ecx: &[usize], bound: usize) -> Result<BoundaryComparison> {
        let omega = self.semicharacters(bound)?;
        let mut forbidden = 0u64;
        for (i, p) in self.idempotents().iter().enumerate() {
            if !ecx.contains(p) {
                forbidden |= 1 << i;
            }
        }
        let complement: Vec<Filter> = omega.iter().copied().filter(|f| f.0 & forbidden == 0).collect();
        let mut principal: Vec<Filter> = ecx.iter().filter_map(|&p| self.principal(p)).collect();
        principal.sort();
        principal.dedup();
        let principal_in_complement = principal.iter().all(|f| complement.contains(f));
        Ok(BoundaryComparison { agree: complement == principal, principal_in_complement, complement, principal })
    }
}

/// The boundary set computed by the complement formula and from principal filters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryComparison {
    #[serde(skip)]
    pub complement: Vec<Filter>,
    #[serde(skip)]
    pub principal: Vec<Filter>,
    pub agree: bool,
    pub principal_in_complement: bool,
}

impl ScaledSemigroup {
    /// The boundary set `Z`; both routes must agree.
    pub fn boundary_set(&self, bound: usize) -> Result<Vec<Filter>> {
        let ecx = self.ecx();
        let cmp = self.semigroup().boundary_for(&ecx, bound)?;
        if !cmp.agree || !cmp.principal_in_complement {
            return Err(FiniteError::Internal(format!(
                "boundary routes disagree: {} filters by complement, {} principal",
                cmp.complement.len(),
                cmp.principal.len()
            )));
        }
        Ok(cmp.complement)
    }
}
