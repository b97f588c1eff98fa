//! Randomized invariants for the numeric kernel, the matrix and
//! banded-operator constructors, and the classification routines.
//! Matrix entries are quarter-integers so exact rank drops stay exact
//! and shrinking never lands on rank-cutoff borderline cases.

use nalgebra::DMatrix;
use num_complex::Complex64;
use posinorm::classify::{
    bisect_lambda, douglas_witness, interrupter_residual, is_coposinormal, is_ep, is_hyponormal,
    is_normal, is_posinormal, kernel_power_equal, posinormal_certificate,
};
use posinorm::matop::{random_ep, random_unitary_matrix};
use posinorm::numkernel::{
    is_psd, numerical_rank, operator_norm, orthonormal_kernel, orthonormal_range, pseudoinverse,
    subspace_angle, subspace_inclusion,
};
use posinorm::qtop::{
    qt_add, qt_adjoint, qt_from_symbol, qt_multiply, qt_power, qt_truncate, qt_verify_equal,
    self_commutator, QuasiToeplitzOperator,
};
use posinorm::{CMatrix, ToleranceConfig};
use proptest::prelude::*;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn quarter() -> impl Strategy<Value = f64> {
    (-8i32..=8).prop_map(|q| f64::from(q) / 4.0)
}

fn centry() -> impl Strategy<Value = Complex64> {
    (quarter(), quarter()).prop_map(|(re, im)| Complex64::new(re, im))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = CMatrix> {
    proptest::collection::vec(centry(), rows * cols)
        .prop_map(move |v| DMatrix::from_vec(rows, cols, v))
}

fn rect_matrix(max_dim: usize) -> impl Strategy<Value = CMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| matrix(r, c))
}

fn square_matrix(max_dim: usize) -> impl Strategy<Value = CMatrix> {
    (1..=max_dim).prop_flat_map(|n| matrix(n, n))
}

/// Product of thin factors, so the rank bound r is usually attained
/// and always an upper bound.
fn low_rank_matrix(max_dim: usize) -> impl Strategy<Value = CMatrix> {
    (2..=max_dim)
        .prop_flat_map(|n| (Just(n), 1..n))
        .prop_flat_map(|(n, r)| (matrix(n, r), matrix(r, n)))
        .prop_map(|(f, g)| f * g)
}

/// Square matrices covering the classification branches: generic,
/// kernel on a coordinate axis, cokernel on a coordinate axis, and
/// equal-range instances.
fn mixed_square(max_dim: usize) -> impl Strategy<Value = CMatrix> {
    prop_oneof![
        square_matrix(max_dim),
        (2..=max_dim)
            .prop_flat_map(|n| (matrix(n, n), 0..n))
            .prop_map(|(mut m, j)| {
                m.column_mut(j).fill(Complex64::ZERO);
                m
            }),
        (2..=max_dim)
            .prop_flat_map(|n| (matrix(n, n), 0..n))
            .prop_map(|(mut m, i)| {
                m.row_mut(i).fill(Complex64::ZERO);
                m
            }),
        ep_matrix(max_dim),
    ]
}

fn ep_matrix(max_dim: usize) -> impl Strategy<Value = CMatrix> {
    (1..=max_dim)
        .prop_flat_map(|n| (Just(n), 0..=n, any::<u64>()))
        .prop_map(|(n, r, seed)| random_ep(n, r, seed).unwrap().matrix().clone())
}

/// Matrices with equal kernels of A and A*: shifted to be invertible,
/// unitarily diagonalized, or drawn from the equal-range sampler.
fn posinormal_matrix(max_dim: usize) -> impl Strategy<Value = CMatrix> {
    let invertible = square_matrix(max_dim).prop_map(|m| {
        let shift = Complex64::new(operator_norm(&m) + 1.0, 0.0);
        let n = m.nrows();
        m + CMatrix::from_diagonal_element(n, n, shift)
    });
    let normal = (1..=max_dim)
        .prop_flat_map(|n| {
            (
                any::<u64>(),
                proptest::collection::vec(centry(), n),
            )
        })
        .prop_map(|(seed, diag)| {
            let n = diag.len();
            let q = random_unitary_matrix(n, seed).unwrap();
            let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag));
            &q * d * q.adjoint()
        });
    prop_oneof![invertible, normal, ep_matrix(max_dim)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rank_plus_nullity_is_column_count(m in rect_matrix(6)) {
        let t = tol();
        let rank = numerical_rank(&m, &t).unwrap();
        let kernel = orthonormal_kernel(&m, &t).unwrap();
        prop_assert_eq!(rank + kernel.dim(), m.ncols());
    }

    #[test]
    fn pseudoinverse_satisfies_penrose_identities(
        m in prop_oneof![rect_matrix(6), low_rank_matrix(6)],
    ) {
        let t = tol();
        let p = pseudoinverse(&m, &t).unwrap();
        let scale_m = operator_norm(&m).max(f64::MIN_POSITIVE);
        let scale_p = operator_norm(&p).max(f64::MIN_POSITIVE);
        prop_assert!(operator_norm(&(&m * &p * &m - &m)) <= 1e-8 * scale_m);
        prop_assert!(operator_norm(&(&p * &m * &p - &p)) <= 1e-8 * scale_p);
        let mp = &m * &p;
        let pm = &p * &m;
        prop_assert!(operator_norm(&(mp.adjoint() - &mp)) <= 1e-8 * scale_m * scale_p);
        prop_assert!(operator_norm(&(pm.adjoint() - &pm)) <= 1e-8 * scale_m * scale_p);
    }

    #[test]
    fn subspace_includes_itself(m in rect_matrix(6)) {
        let t = tol();
        let s = orthonormal_range(&m, &t).unwrap();
        let (ok, defect) = subspace_inclusion(&s, &s, &t).unwrap();
        prop_assert!(ok);
        prop_assert!(defect <= 1e-12);
    }

    #[test]
    fn subspace_angle_is_symmetric(
        (a, b) in (1usize..=6, 1usize..=6, 1usize..=6)
            .prop_flat_map(|(n, c1, c2)| (matrix(n, c1), matrix(n, c2))),
    ) {
        let t = tol();
        let sa = orthonormal_range(&a, &t).unwrap();
        let sb = orthonormal_range(&b, &t).unwrap();
        let lhs = subspace_angle(&sa, &sb).unwrap();
        let rhs = subspace_angle(&sb, &sa).unwrap();
        // Roundoff in the largest principal cosine is amplified by
        // arccos near zero angle, so the tight comparison is on
        // cosines.
        prop_assert!((lhs.cos() - rhs.cos()).abs() <= 1e-12);
        prop_assert!((lhs - rhs).abs() <= 1e-6);
    }

    #[test]
    fn gram_matrix_is_psd(m in rect_matrix(6)) {
        let t = tol();
        let gram = m.adjoint() * &m;
        let (ok, _) = is_psd(&gram, &t).unwrap();
        prop_assert!(ok);
    }

    #[test]
    fn equal_range_sampler_produces_ep_matrices(
        (n, r, seed) in (1usize..=12).prop_flat_map(|n| (Just(n), 0..=n, any::<u64>())),
    ) {
        let t = tol();
        let a = random_ep(n, r, seed).unwrap();
        let (ep, defect) = is_ep(a.matrix(), &t).unwrap();
        prop_assert!(ep, "defect {defect}");
        prop_assert!(defect <= 1e-8, "defect {defect}");
        prop_assert_eq!(numerical_rank(a.matrix(), &t).unwrap(), r);
    }
}

fn small_symbol() -> impl Strategy<Value = Vec<(i64, Complex64)>> {
    proptest::collection::vec((-3i64..=3, centry()), 1..=4)
}

/// Banded operators with nontrivial corrections, built by multiplying
/// and adding pure symbols.
fn qt_operator() -> impl Strategy<Value = QuasiToeplitzOperator> {
    (small_symbol(), small_symbol(), small_symbol()).prop_map(|(a, b, c)| {
        let base = match (qt_from_symbol(&a), qt_from_symbol(&b)) {
            (Ok(x), Ok(y)) => qt_multiply(&x, &y),
            (Ok(x), Err(_)) | (Err(_), Ok(x)) => x,
            (Err(_), Err(_)) => QuasiToeplitzOperator::identity(),
        };
        match qt_from_symbol(&c) {
            Ok(z) => qt_add(&base, &z),
            Err(_) => base,
        }
    })
}

fn leading_block(m: &CMatrix, size: usize) -> CMatrix {
    m.view((0, 0), (size, size)).into_owned()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn truncated_product_matches_product_of_truncations(
        x in qt_operator(),
        y in qt_operator(),
    ) {
        let n = 32usize;
        prop_assume!(x.window().max(y.window()) + x.bandwidth() + y.bandwidth() <= 16);
        let product = qt_multiply(&x, &y);
        let dense = qt_truncate(&x, n).unwrap().matrix() * qt_truncate(&y, n).unwrap().matrix();
        let exact = qt_truncate(&product, n).unwrap();
        let keep = n - x.bandwidth() - y.bandwidth();
        let diff = leading_block(&dense, keep) - leading_block(exact.matrix(), keep);
        let scale = operator_norm(exact.matrix()).max(1.0);
        prop_assert!(operator_norm(&diff) <= 1e-12 * scale);
    }

    #[test]
    fn adjoint_is_an_involution_and_antimultiplicative(
        x in qt_operator(),
        y in qt_operator(),
    ) {
        let t = tol();
        let double = qt_adjoint(&qt_adjoint(&x));
        prop_assert_eq!(double.symbol(), x.symbol());
        prop_assert_eq!(double.correction(), x.correction());

        let lhs = qt_adjoint(&qt_multiply(&x, &y));
        let rhs = qt_multiply(&qt_adjoint(&y), &qt_adjoint(&x));
        let outcome = qt_verify_equal(&lhs, &rhs, &t);
        prop_assert!(outcome.equal, "{outcome:?}");
    }

    #[test]
    fn multiplication_is_associative_and_distributive(
        x in qt_operator(),
        y in qt_operator(),
        z in qt_operator(),
    ) {
        let t = tol();
        let assoc_l = qt_multiply(&qt_multiply(&x, &y), &z);
        let assoc_r = qt_multiply(&x, &qt_multiply(&y, &z));
        let outcome = qt_verify_equal(&assoc_l, &assoc_r, &t);
        prop_assert!(outcome.equal, "{outcome:?}");

        let dist_l = qt_multiply(&x, &qt_add(&y, &z));
        let dist_r = qt_add(&qt_multiply(&x, &y), &qt_multiply(&x, &z));
        let outcome = qt_verify_equal(&dist_l, &dist_r, &t);
        prop_assert!(outcome.equal, "{outcome:?}");
    }

    #[test]
    fn self_commutator_matches_dense_truncation(x in qt_operator()) {
        let n = 32usize;
        let w = self_commutator(&x).unwrap();
        prop_assume!(w.nrows() + 2 * x.bandwidth() <= n / 2);
        let dense = qt_truncate(&x, n).unwrap();
        let m = dense.matrix();
        let dense_comm = m.adjoint() * m - m * m.adjoint();
        let keep = w.nrows().max(1);
        let mut embedded = CMatrix::zeros(keep, keep);
        embedded.view_mut((0, 0), (w.nrows(), w.ncols())).copy_from(&w);
        let diff = leading_block(&dense_comm, keep) - embedded;
        let scale = operator_norm(&dense_comm).max(1.0);
        prop_assert!(operator_norm(&diff) <= 1e-12 * scale);
    }

    #[test]
    fn shift_power_relations_hold_exactly(k in 1usize..=4) {
        let u = QuasiToeplitzOperator::shift();
        let uk = qt_power(&u, k);
        let uk_adj = qt_adjoint(&uk);
        let id = QuasiToeplitzOperator::identity();

        let left = qt_multiply(&uk_adj, &uk);
        prop_assert_eq!(left.symbol(), id.symbol());
        prop_assert_eq!(left.window(), 0);

        let right = qt_multiply(&uk, &uk_adj);
        prop_assert_eq!(right.symbol(), id.symbol());
        prop_assert_eq!(right.window(), k);
        let expected = CMatrix::identity(k, k).scale(-1.0);
        prop_assert_eq!(right.correction(), &expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn range_inclusion_witness_and_bisection_agree(m in mixed_square(5)) {
        let t = tol();
        let (by_inclusion, _) = is_posinormal(&m, &t).unwrap();
        let dw = douglas_witness(&m, &t).unwrap();
        let by_witness = dw.residuals_ok(operator_norm(&m), &t);
        let by_bisection = bisect_lambda(&m, &t).unwrap().is_some();
        prop_assert_eq!(by_inclusion, by_witness);
        prop_assert_eq!(by_inclusion, by_bisection);
    }

    #[test]
    fn posinormal_matrices_have_stable_kernels_and_adjoint_ranges(
        m in posinormal_matrix(6),
    ) {
        let t = tol();
        let (posi, defect) = is_posinormal(&m, &t).unwrap();
        prop_assert!(posi, "sampler broke posinormality, defect {defect}");

        let (equal, dim1, dim2) = kernel_power_equal(&m, &t).unwrap();
        prop_assert!(equal);
        prop_assert_eq!(dim1, dim2);

        let adj_range = orthonormal_range(&m.adjoint(), &t).unwrap();
        for k in 2usize..=3 {
            let mut power = m.clone();
            for _ in 1..k {
                power = &power * &m;
            }
            let power_adj_range = orthonormal_range(&power.adjoint(), &t).unwrap();
            let (fwd, _) = subspace_inclusion(&power_adj_range, &adj_range, &t).unwrap();
            let (bwd, _) = subspace_inclusion(&adj_range, &power_adj_range, &t).unwrap();
            prop_assert!(fwd && bwd, "ran((A^{k})*) differs from ran(A*)");
        }
    }

    #[test]
    fn verdicts_are_unitarily_invariant(m in mixed_square(5), seed in any::<u64>()) {
        let t = tol();
        let q = random_unitary_matrix(m.nrows(), seed).unwrap();
        let conj = &q * &m * q.adjoint();

        let verdicts = |a: &CMatrix| -> (bool, bool, bool, bool, bool) {
            (
                is_normal(a, &t).unwrap().0,
                is_hyponormal(a, &t).unwrap().0,
                is_posinormal(a, &t).unwrap().0,
                is_coposinormal(a, &t).unwrap().0,
                is_ep(a, &t).unwrap().0,
            )
        };
        prop_assert_eq!(verdicts(&m), verdicts(&conj));

        if let Ok(cert) = posinormal_certificate(&m, &t) {
            let p_conj = &q * &cert.interrupter * q.adjoint();
            let residual = interrupter_residual(&conj, &p_conj).unwrap();
            let scale = operator_norm(&m).powi(2).max(f64::MIN_POSITIVE);
            prop_assert!(residual <= 1e-8 * scale, "residual {residual}");
        }
    }

    #[test]
    fn verdicts_and_minimal_lambda_are_scale_invariant(
        m in mixed_square(5),
        exponent in -3i32..=3,
    ) {
        let t = tol();
        let s = 10f64.powi(exponent);
        let scaled = m.scale(s);
        prop_assert_eq!(
            is_posinormal(&m, &t).unwrap().0,
            is_posinormal(&scaled, &t).unwrap().0
        );
        prop_assert_eq!(
            is_hyponormal(&m, &t).unwrap().0,
            is_hyponormal(&scaled, &t).unwrap().0
        );
        if let (Ok(base), Ok(other)) = (
            posinormal_certificate(&m, &t),
            posinormal_certificate(&scaled, &t),
        ) {
            let rel = (base.lambda_min - other.lambda_min).abs()
                / base.lambda_min.max(f64::MIN_POSITIVE);
            prop_assert!(rel <= 1e-9, "lambda drifted by {rel}");
        }
    }
}
