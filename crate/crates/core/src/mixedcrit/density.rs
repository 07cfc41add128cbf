use crate::linalg::hermitian_eigen_desc;
use crate::operators::Dims;
use crate::purecrit::PureStateTensor;
use crate::{CMatrix, Error, Result};

/// Tolerance for Hermiticity, unit trace and positivity checks.
pub const STATE_TOL: f64 = 1e-10;

/// A validated d×d density matrix on a tripartite system.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: Dims,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Checks shape, Hermiticity, unit trace and positivity (each within
    /// [`STATE_TOL`]).
    pub fn new(dims: Dims, matrix: CMatrix) -> Result<Self> {
        let d = dims.total();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::InvalidInput(format!(
                "density matrix on {dims} must be {d}x{d}, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("density matrix has non-finite entries".into()));
        }
        let asym = matrix
            .iter()
            .zip(matrix.adjoint().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if asym > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "hermiticity violated: max |rho - rho^dagger| = {asym:e}"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("unit trace violated: trace = {tr}")));
        }
        let (vals, _) = hermitian_eigen_desc(&matrix);
        let min = vals.last().copied().unwrap_or(0.0);
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!(
                "positivity violated: smallest eigenvalue = {min:e}"
            )));
        }
        Ok(DensityMatrix { dims, matrix })
    }

    /// `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`.
    pub fn from_pure(psi: &PureStateTensor) -> Result<Self> {
        let n = psi.norm();
        if n == 0.0 {
            return Err(Error::InvalidInput("cannot build a density matrix from the zero vector".into()));
        }
        let a = psi.amplitudes();
        let d = a.len();
        let m = CMatrix::from_fn(d, d, |r, c| a[r] * a[c].conj() / (n * n));
        DensityMatrix::new(psi.dims(), m)
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}
