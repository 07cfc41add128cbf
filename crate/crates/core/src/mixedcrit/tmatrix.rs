use rayon::prelude::*;

use crate::operators::{observables, Dims, TupleId};
use crate::CMatrix;

use super::EigenStructure;

/// The `I = 9·N₁N₂N₃` complex symmetric r′×r′ matrices
/// `T_t = M^{1/2} Φᵀ Ô_t Φ M^{1/2}`, in observable order.
#[derive(Clone, Debug, PartialEq)]
pub struct TMatrixSet {
    pub dims: Dims,
    pub rank: usize,
    pub tuples: Vec<TupleId>,
    pub matrices: Vec<CMatrix>,
}

impl TMatrixSet {
    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// `Σ_t ‖T_t‖²_F`.
    pub fn total_weight(&self) -> f64 {
        crate::linalg::ordered_sum(self.matrices.iter().map(|t| t.norm_squared()))
    }
}

/// Builds every T-matrix. Note `Φᵀ` (plain transpose) on the left.
pub fn t_matrices(eig: &EigenStructure) -> TMatrixSet {
    let y = eig.weighted_vectors();
    let r = eig.rank;
    let obs = observables(eig.dims);
    let matrices = obs
        .par_iter()
        .map(|o| {
            let mut t = CMatrix::zeros(r, r);
            for &(row, col, v) in &o.entries {
                for b in 0..r {
                    let yc = y[(col, b)] * v;
                    for a in 0..r {
                        t[(a, b)] += y[(row, a)] * yc;
                    }
                }
            }
            t
        })
        .collect();
    TMatrixSet {
        dims: eig.dims,
        rank: r,
        tuples: obs.iter().map(|o| o.tuple()).collect(),
        matrices,
    }
}
