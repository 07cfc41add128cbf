//! Small dense linear-algebra helpers on top of nalgebra.

use std::cmp::Ordering;

use nalgebra::DVector;

use crate::{CMatrix, C64};

/// Indices of `values` sorted by value descending; ties keep original order.
pub fn descending_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| {
        values[b]
            .partial_cmp(&values[a])
            .unwrap_or(Ordering::Equal)
            .then(a.cmp(&b))
    });
    idx
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues in descending
/// order. Column `j` of the returned matrix is the eigenvector for value `j`.
pub fn hermitian_eigen_desc(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    // symmetrize so roundoff in the input cannot leak an anti-Hermitian part
    let h = (m + m.adjoint()).map(|z| z * 0.5);
    let eig = h.symmetric_eigen();
    let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let order = descending_order(&values);
    let mut vecs = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    (order.iter().map(|&i| values[i]).collect(), vecs)
}

/// Singular values in descending order.
pub fn singular_values_desc(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    sv
}

/// Full SVD `m = U diag(s) V†` with `s` descending. Returns `(U, s, V)`.
pub fn svd_desc(m: &CMatrix) -> (CMatrix, Vec<f64>, CMatrix) {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let values: Vec<f64> = svd.singular_values.iter().copied().collect();
    let order = descending_order(&values);
    let k = values.len();
    let mut uu = CMatrix::zeros(u.nrows(), k);
    let mut vv = CMatrix::zeros(v_t.ncols(), k);
    for (dst, &src) in order.iter().enumerate() {
        uu.set_column(dst, &u.column(src));
        vv.set_column(dst, &v_t.row(src).adjoint());
    }
    (uu, order.iter().map(|&i| values[i]).collect(), vv)
}

/// `λ₁ − Σ_{i>1} λ_i` for a descending list of singular values.
pub fn top_minus_rest(sv: &[f64]) -> f64 {
    match sv.split_first() {
        Some((first, rest)) => first - ordered_sum(rest.iter().copied()),
        None => 0.0,
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Column-stacking vectorization.
pub fn vec_columns(m: &CMatrix) -> DVector<C64> {
    DVector::from_column_slice(m.as_slice())
}

/// Inverse of [`vec_columns`].
pub fn unvec_columns(v: &[C64], rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_column_slice(rows, cols, v)
}

/// Compensated (Neumaier) summation in iteration order.
pub fn ordered_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Largest entrywise modulus of `a − b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Frobenius norm of `a − b`.
pub fn frobenius_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eigen_sorted_descending() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(0.0, -2.0), c(0.0, 2.0), c(1.0, 0.0)],
        );
        let (vals, vecs) = hermitian_eigen_desc(&m);
        assert!((vals[0] - 3.0).abs() < 1e-12);
        assert!((vals[1] + 1.0).abs() < 1e-12);
        let v0 = vecs.column(0).into_owned();
        let mv = &m * &v0;
        assert!((mv - v0 * c(3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn svd_reconstructs() {
        let m = CMatrix::from_fn(3, 2, |i, j| c(i as f64 + 0.5, j as f64 - 0.25 * i as f64));
        let (u, s, v) = svd_desc(&m);
        assert!(s[0] >= s[1]);
        let sd = CMatrix::from_diagonal(&DVector::from_iterator(
            s.len(),
            s.iter().map(|&x| c(x, 0.0)),
        ));
        assert!((u * sd * v.adjoint() - m).norm() < 1e-12);
    }

    #[test]
    fn vec_is_column_stacking() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0)]);
        let v = vec_columns(&m);
        let re: Vec<f64> = v.iter().map(|z| z.re).collect();
        assert_eq!(re, vec![1.0, 3.0, 2.0, 4.0]);
        assert_eq!(unvec_columns(v.as_slice(), 2, 2), m);
    }

    #[test]
    fn compensated_sum() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(ordered_sum(xs), 2.0);
        assert_eq!(top_minus_rest(&[3.0, 1.0, 0.5]), 1.5);
        assert_eq!(top_minus_rest(&[]), 0.0);
    }
}
