//! Acceptance gate for the laboratory: nine criteria, each a test that
//! performs its computation at pinned tolerances, enforces a wall-clock
//! budget, and prints one pass/fail line (visible with --nocapture; a
//! panic leaves the line unprinted and fails the criterion).

use std::time::Instant;

use approx::assert_relative_eq;
use num_complex::Complex64;

use posinorm::classify::{
    bisect_lambda, bouldin_angle, douglas_witness, is_posinormal, kernel_power_equal,
    lambda_psd_test, posinormal_certificate,
};
use posinorm::matop::{family_of, jordan_block, FamilyKind};
use posinorm::numkernel::{operator_norm, smallest_nonzero_singular};
use posinorm::qtop::{
    qt_add, qt_adjoint, qt_bounded_below_probe, qt_is_hyponormal, qt_multiply, qt_power, qt_scale,
    qt_verify_equal, self_commutator, QuasiToeplitzOperator,
};
use posinorm::{CMatrix, ToleranceConfig};
use posinorm_cli::suites::{ep_corpus, mixed_corpus, run_suite, SuiteOutcome, SuiteParams};

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn finish(criterion: usize, claim: &str, budget: f64, started: Instant) {
    let elapsed = started.elapsed().as_secs_f64();
    assert!(
        elapsed < budget,
        "criterion {criterion} exceeded its {budget}s budget: {elapsed:.1}s"
    );
    println!("acceptance criterion {criterion}: PASS :: {claim} ({elapsed:.2}s < {budget:.0}s)");
}

fn suite_outcome(name: &str) -> SuiteOutcome {
    let mut outcomes = run_suite(name, &SuiteParams::default()).expect("suite runs");
    assert_eq!(outcomes.len(), 1);
    outcomes.remove(0)
}

fn assert_suite_green(outcome: &SuiteOutcome) {
    for c in &outcome.checks {
        assert!(c.pass, "{} failed: {} :: {}", outcome.suite, c.label, c.detail);
    }
}

#[test]
fn criterion_1_three_posinormality_routes_agree() {
    let started = Instant::now();
    let tol = ToleranceConfig::default();
    let corpus = mixed_corpus(500, 0).expect("corpus generates");
    assert_eq!(corpus.len(), 500);
    for op in &corpus {
        let m = op.matrix();
        let range_route = is_posinormal(m, &tol).expect("range route").0;
        let witness_route = douglas_witness(m, &tol)
            .expect("witness route")
            .residuals_ok(operator_norm(m), &tol);
        let scaling_route = bisect_lambda(m, &tol).expect("scaling route").is_some();
        assert!(
            range_route == witness_route && witness_route == scaling_route,
            "routes disagree on {}: range {range_route}, witness {witness_route}, scaling {scaling_route}",
            op.label()
        );
    }
    finish(
        1,
        "range, factorization and scaling routes agree on 500 mixed instances",
        60.0,
        started,
    );
}

#[test]
fn criterion_2_ep_powers_stay_ep_through_k5() {
    let started = Instant::now();
    let corpus = ep_corpus(200, 12, 0).expect("corpus generates");
    assert_eq!(corpus.len(), 200);
    assert!(corpus.iter().all(|op| op.dim() <= 12));
    let outcome = suite_outcome("main-theorem");
    assert_eq!(outcome.instances, 200);
    assert_suite_green(&outcome);
    finish(
        2,
        "200 EP instances keep EP and a fixed adjoint range through k = 5 within 1e-8",
        30.0,
        started,
    );
}

#[test]
fn criterion_3_posinormal_kernels_survive_squaring() {
    let started = Instant::now();
    let tol = ToleranceConfig::default();
    let outcome = suite_outcome("lemma2");
    assert_eq!(outcome.instances, 500);
    assert_suite_green(&outcome);
    let j2 = jordan_block(2, c64(0.0)).expect("jordan block");
    let (equal, dim_ker, dim_ker_sq) = kernel_power_equal(j2.matrix(), &tol).expect("kernel dims");
    assert!(!equal);
    assert_eq!((dim_ker, dim_ker_sq), (1, 2));
    finish(
        3,
        "posinormal corpus keeps dim ker A = dim ker A^2 exactly; the 2x2 nilpotent Jordan block fails with dims (1, 2)",
        10.0,
        started,
    );
}

#[test]
fn criterion_4_squares_are_bounded_below_on_the_adjoint_range() {
    let started = Instant::now();
    let outcome = suite_outcome("lemma-crl");
    assert_eq!(outcome.instances, 200);
    assert_suite_green(&outcome);
    assert!(
        outcome.checks[0].detail.contains("certified"),
        "bounded-below suite must report certified instances"
    );
    finish(
        4,
        "exact floors c > 0 and 200 sampled ratios per instance at or above c^2 (1 - 1e-8)",
        20.0,
        started,
    );
}

#[test]
fn criterion_5_block_family_dichotomy_matches_closed_forms() {
    let started = Instant::now();
    let tol = ToleranceConfig::default();
    let outcome = suite_outcome("example1");
    assert_suite_green(&outcome);

    let family = family_of(FamilyKind::BlockHarmonic).expect("family");
    for n in [4usize, 16, 64] {
        let t_n = family.generate(n).expect("truncation");
        let sigma1 = smallest_nonzero_singular(t_n.matrix(), &tol).expect("sigma");
        assert!((1.0..=2.0f64.sqrt() + 1e-12).contains(&sigma1), "n={n}: sigma {sigma1}");
        let squared = t_n.matrix() * t_n.matrix();
        let sigma2 = smallest_nonzero_singular(&squared, &tol).expect("sigma of square");
        let nf = n as f64;
        let closed_form = (1.0 / (nf * nf) + 1.0 / nf.powi(4)).sqrt();
        assert_relative_eq!(sigma2, closed_form, max_relative = 1e-10);
    }
    finish(
        5,
        "first power stable in [1, sqrt(2)], squared power matches sqrt(1/n^2 + 1/n^4) and decays with exponent 1.0 +- 0.1",
        30.0,
        started,
    );
}

#[test]
fn criterion_6_weighted_shift_commutator_and_probe() {
    let started = Instant::now();
    let tol = ToleranceConfig::default();
    let u = QuasiToeplitzOperator::shift();
    let op = qt_add(&qt_adjoint(&u), &qt_scale(c64(2.0), &u));

    let comm = self_commutator(&op).expect("self-commutator");
    let mut worst = 0.0f64;
    for i in 0..comm.nrows() {
        for k in 0..comm.ncols() {
            let expected = if (i, k) == (0, 0) { 3.0 } else { 0.0 };
            worst = worst.max((comm[(i, k)] - c64(expected)).norm());
        }
    }
    assert!(comm.nrows() >= 1);
    assert!(worst <= 1e-14, "commutator deviates from 3 e1 e1* by {worst:e}");

    let (hypo, _) = qt_is_hyponormal(&op, &tol).expect("hyponormality");
    assert!(hypo);
    let square = qt_power(&op, 2);
    let (hypo_sq, lambda_min) = qt_is_hyponormal(&square, &tol).expect("squared hyponormality");
    assert!(!hypo_sq);
    assert!(
        lambda_min <= -tol.psd_rtol,
        "squared commutator must have a decisively negative eigenvalue, got {lambda_min:e}"
    );

    let probe = qt_bounded_below_probe(&op, 1.0, 10_000, 512, 0).expect("probe");
    assert_eq!(probe.trials, 10_000);
    assert!(probe.worst_support <= 512);
    assert!(
        !probe.falsified,
        "lower bound 1 falsified at ratio {}",
        probe.worst_ratio
    );
    finish(
        6,
        "self-commutator of U* + 2U is 3 e1 e1*, the square is not hyponormal, and the bound 1 survives 10^4 probes",
        30.0,
        started,
    );
}

#[test]
fn criterion_7_minimal_scaling_constant_is_the_golden_ratio() {
    let started = Instant::now();
    let tol = ToleranceConfig::default();
    let m = CMatrix::from_row_slice(2, 2, &[c64(1.0), c64(1.0), c64(0.0), c64(1.0)]);
    let cert = posinormal_certificate(&m, &tol).expect("certificate");
    let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
    assert!(
        (cert.lambda_min - phi).abs() <= 1e-8,
        "lambda_min {} vs golden ratio {phi}",
        cert.lambda_min
    );
    let route_gap = (cert.lambda_min - cert.lambda_bisect).abs() / cert.lambda_min;
    assert!(route_gap <= 1e-6, "witness and bisection routes differ by {route_gap:e}");
    let (holds_at_min, _) = lambda_psd_test(&m, cert.lambda_min, &tol).expect("psd at minimum");
    assert!(holds_at_min);
    let (holds_below, _) =
        lambda_psd_test(&m, phi * (1.0 - 1e-4), &tol).expect("psd below minimum");
    assert!(!holds_below);
    finish(
        7,
        "lambda_min of [[1,1],[0,1]] is (1+sqrt(5))/2, routes agree to 1e-6, and the inequality fails just below",
        5.0,
        started,
    );
}

#[test]
fn criterion_8_range_angles_match_closed_forms() {
    let started = Instant::now();
    let tol = ToleranceConfig::default();
    let outcome = suite_outcome("bouldin");
    assert_eq!(outcome.instances, 100);
    assert_suite_green(&outcome);

    let t1 = family_of(FamilyKind::BlockHarmonic)
        .expect("family")
        .generate(1)
        .expect("truncation");
    let angle = bouldin_angle(t1.matrix(), t1.matrix(), &tol).expect("angle");
    assert!((angle.theta.cos() - 1.0 / 2.0f64.sqrt()).abs() <= 1e-8);
    finish(
        8,
        "100 EP self-pairs give theta = pi/2 and the block family gives cos(theta) = n/sqrt(n^2+1)",
        20.0,
        started,
    );
}

#[test]
fn criterion_9_shift_identities_hold_exactly() {
    let started = Instant::now();
    let tol = ToleranceConfig::default();
    let u = QuasiToeplitzOperator::shift();
    let us = qt_adjoint(&u);

    let cases = [
        ("U = U* U^2", u.clone(), qt_multiply(&us, &qt_power(&u, 2))),
        (
            "U U* = U* (U^2 U*^2) U",
            qt_multiply(&u, &us),
            qt_multiply(
                &us,
                &qt_multiply(&qt_multiply(&qt_power(&u, 2), &qt_power(&us, 2)), &u),
            ),
        ),
        ("U* U = I", qt_multiply(&us, &u), QuasiToeplitzOperator::identity()),
    ];
    for (name, lhs, rhs) in &cases {
        let out = qt_verify_equal(lhs, rhs, &tol);
        assert!(out.equal, "{name} failed");
        assert_eq!(out.symbol_residual, 0.0, "{name}: symbol residual must vanish");
        assert!(
            out.correction_residual <= 1e-14,
            "{name}: correction residual {:e}",
            out.correction_residual
        );
    }
    finish(
        9,
        "U = U* U^2, U U* = U* (U^2 U*^2) U and U* U = I hold with zero symbol residual",
        1.0,
        started,
    );
}
