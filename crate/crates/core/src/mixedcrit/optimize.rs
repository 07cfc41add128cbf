//! Maximization of `f(z) = λ₁(B(z)) − Σ_{i>1} λ_i(B(z))`, `B(z) = Σ_j z_j X_j`,
//! over complex unit vectors `z`.
//!
//! `f` is positively homogeneous and nonsmooth at singular-value crossings.
//! Each start is refined by a supergradient fixed-point ascent (with
//! backtracking). When the ascent stalls or stops near a singular-value
//! crossing, a Nelder–Mead polish on the amplitude/phase parameters and a
//! final ascent follow. For 1×1 matrices `f(z) = |Σ_j z_j x_j|` and the
//! maximizer `conj(x)/‖x‖` is used directly. Any returned value is attained
//! by a feasible `z`, so it is a valid lower bound on the true maximum.

use std::f64::consts::TAU;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::{singular_values_desc, svd_desc, top_minus_rest};
use crate::{CMatrix, Error, Result, C64};

const BACKTRACK_STEPS: usize = 30;

/// Relative singular-value gap below which an ascent end point counts as a kink.
const KINK_GAP: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimizerConfig {
    /// Number of seeded starts, `z = e₁` included.
    pub restarts: usize,
    /// Iteration cap per start and per refinement phase.
    pub max_iters: usize,
    /// Convergence tolerance on the objective value.
    pub tol: f64,
    pub seed: u64,
    /// Extra starting points, zero-padded to the problem size.
    #[serde(skip)]
    pub warm_starts: Vec<Vec<C64>>,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 32,
            max_iters: 500,
            tol: 1e-8,
            seed: 0,
            warm_starts: Vec::new(),
        }
    }
}

/// `z_j = x_j e^{iφ_j}` with `Σ x_j² = 1`, `x_j ≥ 0`, `φ_j ∈ [0, 2π)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZVector {
    pub amplitudes: Vec<f64>,
    pub phases: Vec<f64>,
}

impl ZVector {
    pub fn basis(len: usize, index: usize) -> Self {
        let mut amplitudes = vec![0.0; len];
        amplitudes[index] = 1.0;
        ZVector {
            amplitudes,
            phases: vec![0.0; len],
        }
    }

    pub fn from_complex(z: &[C64]) -> Self {
        let mut v = ZVector {
            amplitudes: z.iter().map(|c| c.norm()).collect(),
            phases: z.iter().map(|c| c.arg()).collect(),
        };
        v.project();
        v
    }

    /// Restores feasibility: nonnegative unit-norm amplitudes, wrapped phases.
    /// The all-zero vector is replaced by `e₁`.
    pub fn project(&mut self) {
        for x in &mut self.amplitudes {
            *x = x.abs();
        }
        let norm = self.amplitudes.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 && norm.is_finite() {
            self.amplitudes.iter_mut().for_each(|x| *x /= norm);
        } else {
            self.amplitudes.iter_mut().for_each(|x| *x = 0.0);
            if let Some(first) = self.amplitudes.first_mut() {
                *first = 1.0;
            }
        }
        for p in &mut self.phases {
            *p = p.rem_euclid(TAU);
            if *p >= TAU {
                *p = 0.0;
            }
        }
    }

    pub fn to_complex(&self) -> Vec<C64> {
        self.amplitudes
            .iter()
            .zip(&self.phases)
            .map(|(&x, &p)| C64::from_polar(x, p))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OptimizeOutcome {
    pub z: Vec<C64>,
    /// Objective at `z` (may be negative).
    pub value: f64,
    /// Singular values of `B(z)`, descending.
    pub singular_values: Vec<f64>,
    pub restarts_used: usize,
    /// Iterations spent by the winning start.
    pub iterations: usize,
    pub converged: bool,
}

fn combine(matrices: &[CMatrix], z: &[C64]) -> CMatrix {
    let (rows, cols) = matrices[0].shape();
    let mut b = CMatrix::zeros(rows, cols);
    for (m, &zj) in matrices.iter().zip(z) {
        if zj != C64::new(0.0, 0.0) {
            b.zip_apply(m, |acc, x| *acc += x * zj);
        }
    }
    b
}

/// Objective value and singular values of `B(z)`.
pub fn objective(matrices: &[CMatrix], z: &[C64]) -> (f64, Vec<f64>) {
    let sv = singular_values_desc(&combine(matrices, z));
    (top_minus_rest(&sv), sv)
}

fn normalize(z: &[C64]) -> Option<Vec<C64>> {
    let n = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    (n > 0.0 && n.is_finite()).then(|| z.iter().map(|c| c / n).collect())
}

struct Phase {
    z: Vec<C64>,
    value: f64,
    iterations: usize,
    converged: bool,
}

/// Supergradient fixed-point ascent. With `B = Σ σ_i u_i v_i†` and
/// `W = u₁v₁† − Σ_{i>1} u_i v_i†`, `f(z) = Re tr(W† B(z))`; the maximizer of
/// that linear model over the sphere is `conj(c)/‖c‖`, `c_j = tr(W† X_j)`.
fn ascent(matrices: &[CMatrix], z0: Vec<C64>, value0: f64, cfg: &OptimizerConfig) -> Phase {
    let mut z = z0;
    let mut value = value0;
    for it in 0..cfg.max_iters {
        let (u, _, v) = svd_desc(&combine(matrices, &z));
        let mut w = CMatrix::zeros(u.nrows(), v.nrows());
        for i in 0..u.ncols() {
            let sign = if i == 0 { 1.0 } else { -1.0 };
            w += u.column(i) * v.column(i).adjoint() * C64::new(sign, 0.0);
        }
        let c: Vec<C64> = matrices.iter().map(|m| w.dotc(m)).collect();
        let target = match normalize(&c.iter().map(|x| x.conj()).collect::<Vec<_>>()) {
            Some(t) => t,
            None => {
                return Phase { z, value, iterations: it, converged: true };
            }
        };
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..BACKTRACK_STEPS {
            let mixed: Vec<C64> = z.iter().zip(&target).map(|(a, b)| a + (b - a) * step).collect();
            if let Some(cand) = normalize(&mixed) {
                let (fc, _) = objective(matrices, &cand);
                if fc > value {
                    accepted = Some((cand, fc));
                    break;
                }
            }
            step *= 0.5;
        }
        match accepted {
            Some((cand, fc)) => {
                let gain = fc - value;
                z = cand;
                value = fc;
                if gain <= cfg.tol {
                    return Phase { z, value, iterations: it + 1, converged: true };
                }
            }
            None => return Phase { z, value, iterations: it + 1, converged: true },
        }
    }
    Phase { z, value, iterations: cfg.max_iters, converged: false }
}

/// Raw parameters `(x₁..x_R, φ₂..φ_R)`; `φ₁ = 0` fixes the irrelevant global phase.
fn encode(z: &[C64]) -> Vec<f64> {
    let rot = if z[0].norm() > 0.0 { z[0].conj() / z[0].norm() } else { C64::new(1.0, 0.0) };
    let zr: Vec<C64> = z.iter().map(|c| c * rot).collect();
    let mut p: Vec<f64> = zr.iter().map(|c| c.norm()).collect();
    p.extend(zr[1..].iter().map(|c| c.arg()));
    p
}

fn decode(p: &[f64], len: usize) -> Vec<C64> {
    let mut phases = vec![0.0];
    phases.extend_from_slice(&p[len..]);
    let mut zv = ZVector {
        amplitudes: p[..len].to_vec(),
        phases,
    };
    zv.project();
    zv.to_complex()
}

/// Adaptive Nelder–Mead (maximizing) on the raw parameters.
fn simplex_polish(matrices: &[CMatrix], z0: &[C64], cfg: &OptimizerConfig) -> Phase {
    let len = z0.len();
    let eval = |p: &[f64]| objective(matrices, &decode(p, len)).0;
    let start = encode(z0);
    let n = start.len();
    if n == 1 {
        let value = eval(&start);
        return Phase { z: decode(&start, len), value, iterations: 0, converged: true };
    }
    let nf = n as f64;
    let (alpha, gamma, rho, shrink) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((start.clone(), eval(&start)));
    for i in 0..n {
        let mut p = start.clone();
        p[i] += if i < len { 0.1 } else { 0.25 };
        let f = eval(&p);
        simplex.push((p, f));
    }

    let mut converged = false;
    let mut iterations = 0;
    for it in 0..cfg.max_iters {
        iterations = it + 1;
        // best first; ties keep insertion order
        simplex.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
        if simplex[0].1 - simplex[n].1 <= cfg.tol {
            converged = true;
            break;
        }
        let mut centroid = vec![0.0; n];
        for (p, _) in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(p) {
                *c += v / nf;
            }
        }
        let worst = simplex[n].clone();
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&worst.0).map(|(c, w)| c + t * (c - w)).collect()
        };
        let reflected = along(alpha);
        let fr = eval(&reflected);
        if fr > simplex[0].1 {
            let expanded = along(alpha * gamma);
            let fe = eval(&expanded);
            simplex[n] = if fe > fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr > simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let (contracted, fc) = if fr > worst.1 {
                let p = along(alpha * rho);
                let f = eval(&p);
                (p, f)
            } else {
                let p = along(-rho);
                let f = eval(&p);
                (p, f)
            };
            if fc > worst.1.max(fr) {
                simplex[n] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for (p, f) in simplex.iter_mut().skip(1) {
                    for (x, b) in p.iter_mut().zip(&best) {
                        *x = b + shrink * (*x - b);
                    }
                    *f = eval(p);
                }
            }
        }
    }
    let best = simplex
        .iter()
        .enumerate()
        .fold(0, |bi, (i, s)| if s.1 > simplex[bi].1 { i } else { bi });
    Phase {
        z: decode(&simplex[best].0, len),
        value: simplex[best].1,
        iterations,
        converged,
    }
}

fn near_kink(sv: &[f64]) -> bool {
    let top = sv.first().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return true;
    }
    let gap = KINK_GAP * top;
    sv.windows(2).any(|w| w[0] - w[1] <= gap) || (sv.len() > 1 && sv[sv.len() - 1] <= gap)
}

fn refine(matrices: &[CMatrix], z0: Vec<C64>, cfg: &OptimizerConfig) -> Phase {
    let (v0, _) = objective(matrices, &z0);
    let first = ascent(matrices, z0, v0, cfg);
    if first.converged && !near_kink(&objective(matrices, &first.z).1) {
        return first;
    }
    let polished = simplex_polish(matrices, &first.z, cfg);
    let (z, value) = if polished.value > first.value {
        (polished.z, polished.value)
    } else {
        (first.z, first.value)
    };
    let last = ascent(matrices, z, value, cfg);
    Phase {
        iterations: first.iterations + polished.iterations + last.iterations,
        converged: last.converged || polished.converged,
        ..last
    }
}

fn random_start(len: usize, seed: u64, stream: u64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let raw: Vec<C64> = (0..len)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            C64::new(re, im)
        })
        .collect();
    normalize(&raw).unwrap_or_else(|| ZVector::basis(len, 0).to_complex())
}

fn scalar_optimum(matrices: &[CMatrix]) -> OptimizeOutcome {
    let x: Vec<C64> = matrices.iter().map(|m| m[(0, 0)].conj()).collect();
    let z = normalize(&x).unwrap_or_else(|| ZVector::basis(x.len(), 0).to_complex());
    let (value, singular_values) = objective(matrices, &z);
    OptimizeOutcome {
        z,
        value,
        singular_values,
        restarts_used: 1,
        iterations: 0,
        converged: true,
    }
}

/// Multistart maximization of `λ₁ − Σ_{i>1} λ_i` of `Σ_j z_j X_j`.
pub fn optimize_z(matrices: &[CMatrix], cfg: &OptimizerConfig) -> Result<OptimizeOutcome> {
    let first = matrices
        .first()
        .ok_or_else(|| Error::InvalidInput("optimizer needs at least one matrix".into()))?;
    if let Some(bad) = matrices.iter().position(|m| m.shape() != first.shape()) {
        return Err(Error::InvalidInput(format!(
            "matrix {bad} has shape {:?}, expected {:?}",
            matrices[bad].shape(),
            first.shape()
        )));
    }
    if cfg.tol.is_nan() || cfg.tol < 0.0 {
        return Err(Error::InvalidInput(format!("optimizer tolerance must be >= 0, got {}", cfg.tol)));
    }
    let len = matrices.len();
    if first.shape() == (1, 1) {
        return Ok(scalar_optimum(matrices));
    }

    let mut starts = vec![ZVector::basis(len, 0).to_complex()];
    for w in &cfg.warm_starts {
        if w.len() > len {
            return Err(Error::InvalidInput(format!(
                "warm start has {} entries, problem has {len}",
                w.len()
            )));
        }
        let mut padded = w.clone();
        padded.resize(len, C64::new(0.0, 0.0));
        starts.push(ZVector::from_complex(&padded).to_complex());
    }
    for k in 1..cfg.restarts.max(1) {
        starts.push(random_start(len, cfg.seed, k as u64));
    }

    let results: Vec<Phase> = starts
        .into_par_iter()
        .map(|z0| refine(matrices, z0, cfg))
        .collect();
    let restarts_used = results.len();
    let best = results
        .into_iter()
        .reduce(|best, r| if r.value > best.value { r } else { best })
        .expect("at least one start");
    let (value, singular_values) = objective(matrices, &best.z);
    Ok(OptimizeOutcome {
        z: best.z,
        value,
        singular_values,
        restarts_used,
        iterations: best.iterations,
        converged: best.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        let m = CMatrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        &m + m.transpose()
    }

    fn quick() -> OptimizerConfig {
        OptimizerConfig {
            restarts: 4,
            max_iters: 200,
            ..OptimizerConfig::default()
        }
    }

    #[test]
    fn single_matrix_is_phase_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_symmetric(3, &mut rng);
        let want = top_minus_rest(&singular_values_desc(&a));
        let out = optimize_z(std::slice::from_ref(&a), &quick()).unwrap();
        assert!((out.value - want).abs() < 1e-12);
        let rotated = a * C64::from_polar(1.0, 1.234);
        let (v, _) = objective(&[rotated], &[C64::new(1.0, 0.0)]);
        assert!((v - want).abs() < 1e-12);
    }

    #[test]
    fn zero_matrix_does_not_help() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = random_symmetric(3, &mut rng);
        let want = top_minus_rest(&singular_values_desc(&a));
        let out = optimize_z(&[a, CMatrix::zeros(3, 3)], &quick()).unwrap();
        // f(z) = |z₁|·f(a), so the optimum sits at |z₁| = 1 or |z₁| = 0
        assert!((out.value - want.max(0.0)).abs() < 1e-9);
        if want > 0.0 {
            assert!((out.z[0].norm() - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn never_below_first_basis_vector() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let ms: Vec<CMatrix> = (0..4).map(|_| random_symmetric(3, &mut rng)).collect();
            let (at_e1, _) = objective(&ms, &ZVector::basis(4, 0).to_complex());
            let out = optimize_z(&ms, &quick()).unwrap();
            assert!(out.value >= at_e1);
            let norm: f64 = out.z.iter().map(|c| c.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn scalars_reach_their_norm() {
        let cs = [C64::new(0.0, 0.0), C64::new(0.3, -0.4), C64::new(1.0, 2.0), C64::new(-0.5, 0.1)];
        let ms: Vec<CMatrix> = cs.iter().map(|&c| CMatrix::from_element(1, 1, c)).collect();
        let want = cs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let out = optimize_z(&ms, &quick()).unwrap();
        assert!((out.value - want).abs() < 1e-12);
        assert!(out.converged);
    }

    #[test]
    fn input_validation() {
        assert!(optimize_z(&[], &quick()).is_err());
        let ms = vec![CMatrix::zeros(2, 2), CMatrix::zeros(3, 3)];
        assert!(optimize_z(&ms, &quick()).is_err());
        let cfg = OptimizerConfig {
            warm_starts: vec![vec![C64::new(1.0, 0.0); 5]],
            ..quick()
        };
        assert!(optimize_z(&[CMatrix::zeros(2, 2)], &cfg).is_err());
    }

    #[test]
    fn deterministic_for_a_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ms: Vec<CMatrix> = (0..5).map(|_| random_symmetric(4, &mut rng)).collect();
        let a = optimize_z(&ms, &quick()).unwrap();
        let b = optimize_z(&ms, &quick()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zvector_projection() {
        let mut z = ZVector {
            amplitudes: vec![-3.0, 4.0],
            phases: vec![-0.5, 7.0],
        };
        z.project();
        assert_eq!(z.amplitudes, vec![0.6, 0.8]);
        assert!(z.phases.iter().all(|p| (0.0..TAU).contains(p)));
        let mut zero = ZVector {
            amplitudes: vec![0.0, 0.0],
            phases: vec![0.0, 0.0],
        };
        zero.project();
        assert_eq!(zero.amplitudes, vec![1.0, 0.0]);
        let c = [C64::new(0.0, 2.0), C64::new(-1.0, 0.0)];
        let back = ZVector::from_complex(&c).to_complex();
        let n = 5f64.sqrt();
        assert!((back[0] - c[0] / n).norm() < 1e-15 && (back[1] - c[1] / n).norm() < 1e-15);
    }

    #[test]
    fn parameter_round_trip() {
        let z = [C64::new(0.0, 0.6), C64::new(0.0, 0.0), C64::new(0.8, 0.0)];
        let back = decode(&encode(&z), 3);
        // equal up to the global phase that encode removes
        let rot = z[0] / back[0];
        for (a, b) in z.iter().zip(&back) {
            assert!((a - b * rot).norm() < 1e-15);
        }
    }
}
