use fullsep::linalg::frobenius_diff;
use fullsep::mixedcrit::{
    analytic_bound, eigen_structure, factorize_rearranged, kronecker_factorize, lower_bound_direct,
    lower_bound_kronecker, lower_bound_kronecker_ladder, sum_of_tensor_squares, t_matrices, DensityMatrix,
    OptimizerConfig, TMatrixSet, DEFAULT_RANK_TOL,
};
use fullsep::operators::Dims;
use fullsep::purecrit::grid_concurrence;
use fullsep::states::{mix_with_identity, random_state, StateKind, StateSpec};
use fullsep::{CMatrix, C64};
use proptest::prelude::*;

fn quick() -> OptimizerConfig {
    OptimizerConfig {
        restarts: 6,
        max_iters: 200,
        ..OptimizerConfig::default()
    }
}

fn mixture(kind: StateKind, dims: Dims, seed: u64, terms: usize) -> DensityMatrix {
    let n = dims.total();
    let mut m = CMatrix::zeros(n, n);
    for i in 0..terms {
        let psi = random_state(&StateSpec::random(kind, dims, seed.wrapping_mul(31).wrapping_add(i as u64))).unwrap();
        let v = CMatrix::from_column_slice(n, 1, psi.amplitudes());
        m += &v * v.adjoint() * C64::new((i + 1) as f64, 0.0);
    }
    let total = (terms * (terms + 1) / 2) as f64;
    let m = (&m + m.adjoint()) * C64::new(0.5 / total, 0.0);
    DensityMatrix::new(dims, m).unwrap()
}

fn tset(rho: &DensityMatrix) -> TMatrixSet {
    t_matrices(&eigen_structure(rho, DEFAULT_RANK_TOL).unwrap())
}

fn small_dims() -> impl Strategy<Value = Dims> {
    prop_oneof![Just(Dims::new(2, 2, 2).unwrap()), Just(Dims::new(2, 2, 3).unwrap())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn gram_route_matches_rearranged_svd(dims in small_dims(), seed in any::<u64>(), terms in 1usize..4) {
        let t = tset(&mixture(StateKind::RandomPure, dims, seed, terms));
        let a = sum_of_tensor_squares(&t).unwrap();
        let gram = kronecker_factorize(&t, 0.0, None).unwrap();
        let literal = factorize_rearranged(&a, t.rank, 0.0, None).unwrap();
        let k = gram.retained().min(literal.retained());
        for j in 0..k {
            prop_assert!((gram.sigmas[j] - literal.sigmas[j]).abs() < 1e-9 * (1.0 + gram.sigmas[0]));
        }
        prop_assert!(frobenius_diff(&gram.reconstruct(), &a) < 1e-9);
        prop_assert!(frobenius_diff(&literal.reconstruct(), &a) < 1e-9);
    }

    #[test]
    fn factor_weights_sum_to_t_weights(dims in small_dims(), seed in any::<u64>(), terms in 1usize..4) {
        let t = tset(&mixture(StateKind::RandomPure, dims, seed, terms));
        let f = kronecker_factorize(&t, 0.0, None).unwrap();
        prop_assert!((f.total_weight - t.total_weight()).abs() < 1e-9 * (1.0 + t.total_weight()));
    }

    #[test]
    fn rank_one_bounds_equal_pure_value(dims in small_dims(), seed in any::<u64>()) {
        let psi = random_state(&StateSpec::random(StateKind::RandomPure, dims, seed)).unwrap();
        let want = grid_concurrence(&psi);
        let t = tset(&DensityMatrix::from_pure(&psi).unwrap());
        let f = kronecker_factorize(&t, 0.0, None).unwrap();
        prop_assert!((lower_bound_direct(&t, &quick()).unwrap().value - want).abs() < 1e-8);
        prop_assert!((lower_bound_kronecker(&f, &quick()).unwrap().value - want).abs() < 1e-8);
        prop_assert!((analytic_bound(&f).unwrap().value - want).abs() < 1e-8);
    }

    #[test]
    fn separable_mixtures_give_no_detection(seed in any::<u64>(), terms in 1usize..4) {
        let dims = Dims::new(2, 2, 2).unwrap();
        let t = tset(&mixture(StateKind::RandomProduct, dims, seed, terms));
        let f = kronecker_factorize(&t, 0.0, None).unwrap();
        for value in [
            lower_bound_direct(&t, &quick()).unwrap().raw_value,
            lower_bound_kronecker(&f, &quick()).unwrap().raw_value,
            analytic_bound(&f).unwrap().raw_value,
        ] {
            prop_assert!(value <= 1e-8, "raw bound {value}");
        }
    }
}

#[test]
fn ladder_is_nondecreasing_and_bounded_by_direct() {
    let psi = random_state(&StateSpec::random(StateKind::RandomPure, Dims::new(2, 2, 3).unwrap(), 5)).unwrap();
    let t = tset(&mix_with_identity(&psi, 0.8).unwrap());
    let f = kronecker_factorize(&t, 1e-10, Some(6)).unwrap();
    let ladder = lower_bound_kronecker_ladder(&f, &quick()).unwrap();
    assert_eq!(ladder.len(), f.retained());
    for w in ladder.windows(2) {
        assert!(w[1].raw_value >= w[0].raw_value);
    }
    assert!(ladder[0].raw_value >= analytic_bound(&f).unwrap().raw_value);
}
