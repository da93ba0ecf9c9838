//! Truncated model of `C(Y; Z)` for an orbit accumulating on an `m`-cycle,
//! and the cokernels of `1 - t` and `t` on it.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::smith::{AbelianInvariants, IntMatrix};
use super::KtheoryError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DynamReport {
    pub cycle: usize,
    pub truncation: usize,
    pub coker_one_minus_t: AbelianInvariants,
    pub coker_t: AbelianInvariants,
    pub kernel_rank_one_minus_t: usize,
    pub kernel_rank_t: usize,
}

/// Matrix of the shift on the basis `delta_0..delta_{T-1}, h_0..h_{m-1}`;
/// row `k` is the image of basis vector `k`.
pub fn shift_matrix(m: usize, truncation: usize) -> IntMatrix {
    let n = truncation + m;
    let mut a = IntMatrix::zeros(n, n);
    for k in 0..truncation.saturating_sub(1) {
        a.set(k, k + 1, BigInt::one());
    }
    for j in 0..m {
        a.set(truncation + j, truncation + (j + 1) % m, BigInt::one());
    }
    a
}

pub fn dynam_cokernels(m: usize, truncation: usize) -> Result<DynamReport, KtheoryError> {
    if m == 0 {
        return Err(KtheoryError::InvalidModel("cycle length must be at least 1".into()));
    }
    if truncation < m {
        return Err(KtheoryError::InvalidModel(format!("truncation {truncation} is shorter than the cycle {m}")));
    }
    let t = shift_matrix(m, truncation);
    let n = t.nrows();
    let mut one_minus_t = IntMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            if !t.get(i, j).is_zero() {
                let x = one_minus_t.get(i, j) - t.get(i, j);
                one_minus_t.set(i, j, x);
            }
        }
    }
    Ok(DynamReport {
        cycle: m,
        truncation,
        kernel_rank_one_minus_t: n - one_minus_t.rank(),
        kernel_rank_t: n - t.rank(),
        coker_one_minus_t: one_minus_t.cokernel(),
        coker_t: t.cokernel(),
    })
}
