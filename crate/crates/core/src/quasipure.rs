//! Quasi-pure analytic estimate.
//!
//! Keeping only the elements of `A` anchored on the dominant eigenvector,
//! `A^{lm}_{l′m′} ≈ τ_{lm} τ*_{l′m′}` with `τ_{lm} = A^{lm}_{11}/√A^{11}_{11}`
//! and `A^{lm}_{11} = Σ_t T_t[l,1]·T_t[m,1]*`. The estimate is
//! `C_a = max(λ₁ − Σ_{i>1} λ_i, 0)` over the singular values of `τ`.
//!
//! The estimate is computed for any state; its premise is a single dominant
//! eigenvalue, so the report carries `u₂/u₁` and flags states with a ratio
//! above [`QUASI_PURE_MAX_RATIO`].

use crate::linalg::{ordered_sum, singular_values_desc};
use crate::mixedcrit::{BoundReport, EigenStructure, Method, TMatrixSet};
use crate::{CMatrix, Error, Result, C64};

/// Default threshold on `A^{11}_{11}` below which `τ` is not formed.
pub const DEFAULT_TAU_EPS: f64 = 1e-12;

/// Dominance ratios above this are flagged as outside the quasi-pure regime.
pub const QUASI_PURE_MAX_RATIO: f64 = 0.25;

pub const FLAG_DOMINANT_SEPARABLE: &str = "dominant eigenvector separable";
pub const FLAG_DOMINANT_AMBIGUOUS: &str = "dominant eigenvector ambiguous";
pub const FLAG_OUTSIDE_REGIME: &str = "outside quasi-pure regime";
pub const FLAG_INCONCLUSIVE: &str = "inconclusive";

#[derive(Clone, Debug, PartialEq)]
pub struct QuasiPureTau {
    /// r′×r′ Hermitian positive semidefinite matrix.
    pub tau: CMatrix,
    /// `u₂/u₁`.
    pub dominance_ratio: f64,
    /// `A^{11}_{11}`.
    pub dominant_weight: f64,
    pub flags: Vec<String>,
}

impl QuasiPureTau {
    pub fn is_degenerate(&self) -> bool {
        self.flags.iter().any(|f| f == FLAG_DOMINANT_SEPARABLE)
    }
}

pub fn tau_matrix(eig: &EigenStructure, tset: &TMatrixSet, eps: f64) -> Result<QuasiPureTau> {
    if tset.rank != eig.rank {
        return Err(Error::InvalidInput(format!(
            "T-matrices have rank {}, eigen-structure has rank {}",
            tset.rank, eig.rank
        )));
    }
    let r = eig.rank;
    let mut flags = Vec::new();
    if eig.top_degenerate() {
        flags.push(FLAG_DOMINANT_AMBIGUOUS.to_string());
    }
    let ratio = eig.dominance_ratio();
    if ratio > QUASI_PURE_MAX_RATIO {
        flags.push(FLAG_OUTSIDE_REGIME.to_string());
    }
    let dominant_weight = ordered_sum(tset.matrices.iter().map(|t| t[(0, 0)].norm_sqr()));
    if dominant_weight <= eps {
        flags.push(FLAG_DOMINANT_SEPARABLE.to_string());
        flags.push(FLAG_INCONCLUSIVE.to_string());
        return Ok(QuasiPureTau {
            tau: CMatrix::zeros(r, r),
            dominance_ratio: ratio,
            dominant_weight,
            flags,
        });
    }
    // column 1 of every T_t, stacked as rows of an I×r′ matrix
    let anchored = CMatrix::from_fn(tset.len(), r, |t, l| tset.matrices[t][(l, 0)]);
    let scale = C64::new(1.0 / dominant_weight.sqrt(), 0.0);
    let tau = anchored.transpose() * anchored.conjugate() * scale;
    Ok(QuasiPureTau {
        tau,
        dominance_ratio: ratio,
        dominant_weight,
        flags,
    })
}

pub fn quasi_pure_estimate(tau: &QuasiPureTau) -> BoundReport {
    let mut report = if tau.is_degenerate() {
        BoundReport::closed_form(Method::Quasipure, vec![0.0; tau.tau.nrows()])
    } else {
        BoundReport::closed_form(Method::Quasipure, singular_values_desc(&tau.tau))
    };
    report.dominance_ratio = Some(tau.dominance_ratio);
    report.flags = tau.flags.clone();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigen_desc;
    use crate::mixedcrit::{eigen_structure, t_matrices, DensityMatrix, DEFAULT_RANK_TOL};
    use crate::operators::Dims;
    use crate::purecrit::grid_concurrence;
    use crate::states::{mix_with_identity, named_state, random_state, StateKind, StateSpec};

    fn tau_of(rho: &DensityMatrix) -> QuasiPureTau {
        let eig = eigen_structure(rho, DEFAULT_RANK_TOL).unwrap();
        tau_matrix(&eig, &t_matrices(&eig), DEFAULT_TAU_EPS).unwrap()
    }

    #[test]
    fn rank_one_tau_is_the_pure_value() {
        let dims = Dims::new(2, 3, 2).unwrap();
        let psi = random_state(&StateSpec::random(StateKind::RandomPure, dims, 8)).unwrap();
        let tau = tau_of(&DensityMatrix::from_pure(&psi).unwrap());
        assert_eq!(tau.tau.shape(), (1, 1));
        let c = grid_concurrence(&psi);
        assert!((tau.tau[(0, 0)].re - c).abs() < 1e-10);
        assert!((quasi_pure_estimate(&tau).value - c).abs() < 1e-10);
    }

    #[test]
    fn separable_dominant_vector_is_flagged() {
        let dims = Dims::new(2, 2, 2).unwrap();
        let mut basis = vec![C64::new(0.0, 0.0); 8];
        basis[0] = C64::new(1.0, 0.0);
        let psi = crate::purecrit::PureStateTensor::new(dims, basis).unwrap();
        let tau = tau_of(&mix_with_identity(&psi, 0.9).unwrap());
        assert!(tau.is_degenerate());
        assert!(tau.tau.iter().all(|z| z.norm() == 0.0));
        let rep = quasi_pure_estimate(&tau);
        assert_eq!(rep.value, 0.0);
        assert!(rep.flags.iter().any(|f| f == FLAG_DOMINANT_SEPARABLE));
        assert!(rep.flags.iter().any(|f| f == FLAG_INCONCLUSIVE));
    }

    #[test]
    fn tau_is_hermitian_psd_with_expected_corner() {
        let psi = named_state(&StateSpec::named(StateKind::GhzPrime)).unwrap();
        let tau = tau_of(&mix_with_identity(&psi, 0.5).unwrap());
        assert!((&tau.tau - tau.tau.adjoint()).norm() <= 1e-10);
        let (vals, _) = hermitian_eigen_desc(&tau.tau);
        assert!(*vals.last().unwrap() >= -1e-10);
        assert!((tau.tau[(0, 0)].re - tau.dominant_weight.sqrt()).abs() < 1e-10);
        assert!(!tau.flags.iter().any(|f| f == FLAG_OUTSIDE_REGIME));
    }

    #[test]
    fn ambiguous_top_is_flagged() {
        let m = CMatrix::identity(8, 8) / C64::new(8.0, 0.0);
        let rho = DensityMatrix::new(Dims::new(2, 2, 2).unwrap(), m).unwrap();
        let tau = tau_of(&rho);
        assert!(tau.flags.iter().any(|f| f == FLAG_DOMINANT_AMBIGUOUS));
        assert!(tau.flags.iter().any(|f| f == FLAG_OUTSIDE_REGIME));
        assert_eq!(quasi_pure_estimate(&tau).value, 0.0);
    }
}
