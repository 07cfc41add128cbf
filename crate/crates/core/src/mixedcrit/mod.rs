//! Lower bounds on the mixed-state criterion.
//!
//! The pipeline is: density matrix → descending eigen-structure `Φ, M` →
//! symmetric T-matrices `T_t = M^{1/2} Φᵀ Ô_t Φ M^{1/2}` → either a direct
//! optimization over all T-matrices, or a Kronecker factorization
//! `A = Σ_t T_t ⊗ T_t* = Σ_j 𝒜_j ⊗ 𝒜_j*` followed by an optimization over the
//! (usually far fewer) factors `𝒜_j`. Each bound is
//! `max_z λ₁(B(z)) − Σ_{i>1} λ_i(B(z))` with `B(z) = Σ_j z_j X_j`, clamped at 0.

mod bounds;
mod density;
mod eigen;
mod kron;
mod optimize;
mod tmatrix;

pub use bounds::{
    analytic_bound, lower_bound_direct, lower_bound_kronecker, lower_bound_kronecker_ladder, BoundReport,
    Method, OptimizerDiagnostics, DIRECT_MAX_TUPLES,
};
pub use density::{DensityMatrix, STATE_TOL};
pub use eigen::{eigen_structure, EigenStructure, DEFAULT_RANK_TOL, DEGENERACY_TOL};
pub use kron::{
    assemble_a_explicit, factorize_rearranged, kronecker_factorize, rearrange, sum_of_tensor_squares,
    swap_operator, KroneckerFactorization, DEFAULT_TRUNC_TOL, EXPLICIT_MAX_RANK_SQ,
};
pub use optimize::{objective, optimize_z, OptimizeOutcome, OptimizerConfig, ZVector};
pub use tmatrix::{t_matrices, TMatrixSet};
