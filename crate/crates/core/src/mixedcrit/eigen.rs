use crate::linalg::hermitian_eigen_desc;
use crate::operators::Dims;
use crate::{CMatrix, Error, Result, C64};

use super::DensityMatrix;

/// Default rank threshold, relative to the largest eigenvalue.
pub const DEFAULT_RANK_TOL: f64 = 1e-12;

/// Top eigenvalues closer than this are reported as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Descending eigen-decomposition `ρ = Φ M Φ†` truncated to its numerical rank.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenStructure {
    pub dims: Dims,
    /// Retained eigenvalues `u₁ ≥ u₂ ≥ … > rank_tol·u₁`.
    pub eigenvalues: Vec<f64>,
    /// d×r′ matrix of the corresponding orthonormal eigenvectors.
    pub eigenvectors: CMatrix,
    pub rank: usize,
    pub rank_tol: f64,
    /// Full clamped spectrum, descending.
    pub spectrum: Vec<f64>,
}

impl EigenStructure {
    /// `u₂/u₁` over the full spectrum.
    pub fn dominance_ratio(&self) -> f64 {
        match self.spectrum.as_slice() {
            [u1, u2, ..] if *u1 > 0.0 => u2 / u1,
            _ => 0.0,
        }
    }

    /// Whether the largest eigenvalue is (numerically) degenerate.
    pub fn top_degenerate(&self) -> bool {
        match self.spectrum.as_slice() {
            [u1, u2, ..] => u1 - u2 <= DEGENERACY_TOL,
            _ => false,
        }
    }

    /// `Φ M^{1/2}` (d×r′).
    pub fn weighted_vectors(&self) -> CMatrix {
        let mut y = self.eigenvectors.clone();
        for (j, u) in self.eigenvalues.iter().enumerate() {
            let s = C64::new(u.sqrt(), 0.0);
            y.column_mut(j).iter_mut().for_each(|z| *z *= s);
        }
        y
    }

    /// `Φ diag(u) Φ†` over the retained part.
    pub fn reconstruct(&self) -> CMatrix {
        let y = self.weighted_vectors();
        &y * y.adjoint()
    }
}

pub fn eigen_structure(rho: &DensityMatrix, rank_tol: f64) -> Result<EigenStructure> {
    if !(rank_tol.is_finite() && rank_tol >= 0.0) {
        return Err(Error::InvalidInput(format!("rank tolerance must be finite and >= 0, got {rank_tol}")));
    }
    let (vals, vecs) = hermitian_eigen_desc(rho.matrix());
    let spectrum: Vec<f64> = vals.iter().map(|v| v.max(0.0)).collect();
    let top = spectrum[0];
    let rank = spectrum.iter().take_while(|&&u| u > rank_tol * top && u > 0.0).count();
    let eigenvectors = vecs.columns(0, rank).into_owned();
    Ok(EigenStructure {
        dims: rho.dims(),
        eigenvalues: spectrum[..rank].to_vec(),
        eigenvectors,
        rank,
        rank_tol,
        spectrum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{mix_with_identity, named_state, StateKind, StateSpec};

    #[test]
    fn pure_ghz_has_rank_one() {
        let psi = named_state(&StateSpec::named(StateKind::Ghz)).unwrap();
        let eig = eigen_structure(&DensityMatrix::from_pure(&psi).unwrap(), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(eig.rank, 1);
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert_eq!(eig.dominance_ratio(), eig.spectrum[1] / eig.spectrum[0]);
        assert!(!eig.top_degenerate());
    }

    #[test]
    fn rho1_half_spectrum() {
        let psi = named_state(&StateSpec::named(StateKind::GhzPrime)).unwrap();
        let rho = mix_with_identity(&psi, 0.5).unwrap();
        let eig = eigen_structure(&rho, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(eig.rank, 12);
        assert!((eig.eigenvalues[0] - (0.5 + 0.5 / 12.0)).abs() < 1e-12);
        assert!((eig.reconstruct() - rho.matrix()).norm() < 1e-9);
        let gram = eig.eigenvectors.adjoint() * &eig.eigenvectors;
        assert!((gram - CMatrix::identity(12, 12)).norm() < 1e-10);
    }

    #[test]
    fn maximally_mixed_qubits() {
        let m = CMatrix::identity(8, 8) / C64::new(8.0, 0.0);
        let rho = DensityMatrix::new(Dims::new(2, 2, 2).unwrap(), m).unwrap();
        let eig = eigen_structure(&rho, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(eig.rank, 8);
        assert!(eig.eigenvalues.iter().all(|u| (u - 0.125).abs() < 1e-14));
        assert!(eig.top_degenerate());
        assert!(eigen_structure(&rho, -1.0).is_err());
    }
}
