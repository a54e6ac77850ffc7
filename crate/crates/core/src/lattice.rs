//! Real embedding of the complex channel lattice and its orthogonality
//! defect, the geometric measure of how far a realization sits from the
//! channel-hardening ideal (orthogonal columns give exactly 1).

use crate::channel::ChannelRealization;
use crate::linalg::{LinalgError, RMat};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("basis is numerically singular")]
    Singular,
}

/// `2N_R x 2N_T` real basis `[[Re H, -Im H], [Im H, Re H]]`.
#[derive(Debug, Clone)]
pub struct LatticeBasisReal<S: Scalar> {
    basis: RMat<S>,
    n_t: usize,
}

impl<S: Scalar> LatticeBasisReal<S> {
    pub fn matrix(&self) -> &RMat<S> {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        2 * self.n_t
    }
}

/// Standard real embedding of the complex basis.
pub fn real_lattice_basis<S: Scalar>(ch: &ChannelRealization<S>) -> LatticeBasisReal<S> {
    let (n_r, n_t) = (ch.n_r(), ch.n_t());
    let h = ch.matrix();
    let basis = RMat::from_fn(2 * n_r, 2 * n_t, |r, c| {
        let entry = h.get(r % n_r, c % n_t);
        match (r < n_r, c < n_t) {
            (true, true) => entry.re,
            (true, false) => -entry.im,
            (false, true) => entry.im,
            (false, false) => entry.re,
        }
    });
    LatticeBasisReal { basis, n_t }
}

/// Product of column norms over the lattice volume `sqrt(det(B^T B))`.
///
/// Computed per column as `||b_i|| / L_ii` (Cholesky of the Gram), each
/// factor being >= 1 in exact arithmetic, and accumulated in the log domain.
pub fn orthogonality_defect<S: Scalar>(basis: &LatticeBasisReal<S>) -> Result<S, LatticeError> {
    let b = &basis.basis;
    let gram = b.gram();
    let diag = gram.cholesky_diag().map_err(|e| match e {
        LinalgError::Singular => LatticeError::Singular,
        LinalgError::Dimension(d) => unreachable!("gram is square: {d}"),
    })?;
    let mut log_od = S::zero();
    for (c, l) in diag.iter().enumerate() {
        log_od = log_od + b.column_norm(c).ln() - l.ln();
    }
    Ok(log_od.exp())
}
