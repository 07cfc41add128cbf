//! Nearest-Kronecker-product factorization of the doubled-space operator
//! `A = Σ_t T_t ⊗ T_t*` (acting on `C^{r′} ⊗ C^{r′}`).
//!
//! Production uses the Gram route: with `G_{tt′} = tr(T_t† T_t′)` and
//! eigenpairs `(σ_j, v_j)` of `G`, the factors are `𝒜_j = Σ_t (v_j)_t T_t`.
//! The literal route (build `A`, rearrange with the swap operator and a
//! partial transpose, take the SVD) is kept as [`assemble_a_explicit`],
//! [`rearrange`] and [`factorize_rearranged`] for cross-checking.

use crate::linalg::{hermitian_eigen_desc, kron, ordered_sum, svd_desc, unvec_columns};
use crate::operators::{composite_selectors, CubeOperatorSet};
use crate::{CMatrix, Error, Result, C64};

use super::{EigenStructure, TMatrixSet};

/// Default truncation threshold on `σ_j`, relative to `σ₁`.
pub const DEFAULT_TRUNC_TOL: f64 = 1e-10;

/// Largest `r′²` accepted by the dense routes.
pub const EXPLICIT_MAX_RANK_SQ: usize = 256;

/// Largest total dimension accepted by [`assemble_a_explicit`].
pub const EXPLICIT_MAX_DIM: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct KroneckerFactorization {
    /// Size r′ of each factor.
    pub rank: usize,
    /// Retained weights, descending.
    pub sigmas: Vec<f64>,
    /// Complex symmetric factors with `‖𝒜_j‖²_F = σ_j`.
    pub factors: Vec<CMatrix>,
    pub trunc_tol: f64,
    /// All weights before truncation, descending.
    pub spectrum: Vec<f64>,
    /// `Σ_j σ_j` over the full spectrum.
    pub total_weight: f64,
}

impl KroneckerFactorization {
    pub fn retained(&self) -> usize {
        self.factors.len()
    }

    pub fn discarded_weight(&self) -> f64 {
        ordered_sum(self.spectrum[self.retained()..].iter().copied())
    }

    /// `Σ_j 𝒜_j ⊗ 𝒜_j*` over the retained factors.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.rank * self.rank;
        self.factors
            .iter()
            .fold(CMatrix::zeros(n, n), |acc, f| acc + kron(f, &f.conjugate()))
    }

    /// Keeps only the leading `count` factors (at least one).
    pub fn truncated(&self, count: usize) -> Self {
        let keep = count.clamp(1, self.retained());
        KroneckerFactorization {
            sigmas: self.sigmas[..keep].to_vec(),
            factors: self.factors[..keep].to_vec(),
            ..self.clone()
        }
    }
}

fn check_trunc(trunc_tol: f64, max_factors: Option<usize>) -> Result<()> {
    if !(trunc_tol.is_finite() && trunc_tol >= 0.0) {
        return Err(Error::InvalidInput(format!("truncation tolerance must be finite and >= 0, got {trunc_tol}")));
    }
    if max_factors == Some(0) {
        return Err(Error::InvalidInput("max_factors must be at least 1".into()));
    }
    Ok(())
}

/// Number of leading weights above `trunc_tol·σ₁`, capped, never below one.
fn retained_count(spectrum: &[f64], trunc_tol: f64, max_factors: Option<usize>) -> usize {
    let top = spectrum.first().copied().unwrap_or(0.0);
    let above = spectrum.iter().take_while(|&&s| s > trunc_tol * top && s > 0.0).count();
    above.min(max_factors.unwrap_or(usize::MAX)).max(1)
}

/// Gram-route factorization of `A = Σ_t T_t ⊗ T_t*`.
pub fn kronecker_factorize(
    tset: &TMatrixSet,
    trunc_tol: f64,
    max_factors: Option<usize>,
) -> Result<KroneckerFactorization> {
    if tset.is_empty() {
        return Err(Error::InvalidInput("empty T-matrix set".into()));
    }
    check_trunc(trunc_tol, max_factors)?;
    let r = tset.rank;
    let n = r * r;
    let mut x = CMatrix::zeros(n, tset.len());
    for (t, m) in tset.matrices.iter().enumerate() {
        x.column_mut(t).copy_from_slice(m.as_slice());
    }
    let gram = x.adjoint() * &x;
    let (vals, vecs) = hermitian_eigen_desc(&gram);
    let spectrum: Vec<f64> = vals.iter().map(|v| v.max(0.0)).collect();
    let keep = retained_count(&spectrum, trunc_tol, max_factors);
    let factors = (0..keep)
        .map(|j| {
            let v = &x * vecs.column(j);
            let f = unvec_columns(v.as_slice(), r, r);
            // exact symmetrization; each T_t is symmetric up to roundoff
            (&f + f.transpose()).map(|z| z * 0.5)
        })
        .collect();
    Ok(KroneckerFactorization {
        rank: r,
        sigmas: spectrum[..keep].to_vec(),
        factors,
        trunc_tol,
        total_weight: ordered_sum(spectrum.iter().copied()),
        spectrum,
    })
}

fn guard_rank(r: usize) -> Result<()> {
    if r * r > EXPLICIT_MAX_RANK_SQ {
        return Err(Error::SizeGuard(format!(
            "explicit doubled-space operator needs rank^2 <= {EXPLICIT_MAX_RANK_SQ}, got rank {r}"
        )));
    }
    Ok(())
}

fn real_to_complex(m: &nalgebra::DMatrix<f64>) -> CMatrix {
    m.map(|v| C64::new(v, 0.0))
}

/// Builds `A = Σ_t (ρ^{1/2})ᵀ 𝐒_tᵀ Σ^δ 𝐒_t ρ^{1/2}` literally, with
/// `ρ^{1/2} = (ΦM^{1/2}) ⊗ (ΦM^{1/2})*`, `Σ^δ = s^δ ⊗ s^δ` and `𝐒 = S ⊗ S`.
pub fn assemble_a_explicit(eig: &EigenStructure) -> Result<CMatrix> {
    guard_rank(eig.rank)?;
    let d = eig.dims.total();
    if d > EXPLICIT_MAX_DIM {
        return Err(Error::SizeGuard(format!(
            "explicit doubled-space operator needs total dimension <= {EXPLICIT_MAX_DIM}, got {d}"
        )));
    }
    let y = eig.weighted_vectors();
    let rho_half = kron(&y, &y.conjugate());
    let doubled_ops: Vec<CMatrix> = CubeOperatorSet::shared()
        .iter()
        .map(|op| {
            let s = CMatrix::from_fn(8, 8, |r, c| C64::new(op[r][c], 0.0));
            kron(&s, &s)
        })
        .collect();
    let n = eig.rank * eig.rank;
    let mut a = CMatrix::zeros(n, n);
    for sel in composite_selectors(eig.dims) {
        let s = real_to_complex(&sel.matrix());
        let big_s = kron(&s, &s);
        let k = &big_s * &rho_half;
        let k_t = k.transpose();
        for sigma in &doubled_ops {
            a += &k_t * sigma * &k;
        }
    }
    Ok(a)
}

/// `Σ_t T_t ⊗ T_t*` as a dense matrix.
pub fn sum_of_tensor_squares(tset: &TMatrixSet) -> Result<CMatrix> {
    guard_rank(tset.rank)?;
    let n = tset.rank * tset.rank;
    Ok(tset
        .matrices
        .iter()
        .fold(CMatrix::zeros(n, n), |acc, t| acc + kron(t, &t.conjugate())))
}

/// Swap operator `V₁₂` on `C^r ⊗ C^r`.
pub fn swap_operator(r: usize) -> CMatrix {
    let n = r * r;
    let mut v = CMatrix::zeros(n, n);
    for a in 0..r {
        for b in 0..r {
            v[(a * r + b, b * r + a)] = C64::new(1.0, 0.0);
        }
    }
    v
}

fn partial_transpose_second(m: &CMatrix, r: usize) -> CMatrix {
    CMatrix::from_fn(r * r, r * r, |row, col| {
        let (a, b) = (row / r, row % r);
        let (c, d) = (col / r, col % r);
        m[(a * r + d, c * r + b)]
    })
}

/// `Ã = V₁₂ (A V₁₂)^{T₂}`; maps `X ⊗ Y` to `Vec(X) Vec(Y)ᵀ`.
pub fn rearrange(a: &CMatrix, r: usize) -> Result<CMatrix> {
    let n = r * r;
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::SizeGuard(format!(
            "rearrangement expects a {n}x{n} matrix for rank {r}, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let v = swap_operator(r);
    Ok(&v * partial_transpose_second(&(a * &v), r))
}

/// Literal route: SVD of the rearranged `A`, with `Vec(𝒜_j) = √σ_j u_j`.
pub fn factorize_rearranged(
    a: &CMatrix,
    r: usize,
    trunc_tol: f64,
    max_factors: Option<usize>,
) -> Result<KroneckerFactorization> {
    check_trunc(trunc_tol, max_factors)?;
    guard_rank(r)?;
    let rearranged = rearrange(a, r)?;
    let (u, spectrum, _) = svd_desc(&rearranged);
    let keep = retained_count(&spectrum, trunc_tol, max_factors);
    let factors = (0..keep)
        .map(|j| {
            let col = u.column(j) * C64::new(spectrum[j].sqrt(), 0.0);
            unvec_columns(col.as_slice(), r, r)
        })
        .collect();
    Ok(KroneckerFactorization {
        rank: r,
        sigmas: spectrum[..keep].to_vec(),
        factors,
        trunc_tol,
        total_weight: ordered_sum(spectrum.iter().copied()),
        spectrum,
    })
}
