//! Named verification suites over seeded instance corpora. Each suite
//! evaluates one family of claims and returns coarse pass/fail checks
//! with measured residuals; `run_suite` dispatches by name and "all"
//! chains every suite in a fixed order.

use num_complex::Complex64;
use posinorm::classify::{
    bisect_lambda, bouldin_angle, douglas_witness, is_posinormal, kernel_power_equal,
    lambda_psd_test, posinormal_certificate,
};
use posinorm::matop::{
    family_of, jordan_block, random_ep, toeplitz_truncation, truncated_shift, FamilyKind,
    OperatorMatrix,
};
use posinorm::numkernel::{operator_norm, orthonormal_kernel, orthonormal_range, subspace_inclusion};
use posinorm::qtop::{
    qt_bounded_below_probe, qt_is_hyponormal, qt_multiply, qt_power, qt_verify_equal,
    self_commutator, QuasiToeplitzOperator,
};
use posinorm::rangelab::{lemma_crl_check, power_range_report, Classification, CrlOutcome};
use posinorm::{CMatrix, Error, Result, ToleranceConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

pub const SUITE_NAMES: [&str; 8] = [
    "theorem1",
    "main-theorem",
    "lemma2",
    "lemma-crl",
    "example1",
    "example2",
    "bouldin",
    "all",
];

#[derive(Clone, Copy, Debug)]
pub struct SuiteParams {
    pub seed: u64,
    /// Corpus size override; each suite has its own default.
    pub instances: Option<usize>,
    pub tol: ToleranceConfig,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            seed: 0,
            instances: None,
            tol: ToleranceConfig::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

fn check(label: &str, pass: bool, detail: String) -> Check {
    Check {
        label: label.to_string(),
        pass,
        detail,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub seed: u64,
    /// Number of corpus instances (or fixed cases) the suite evaluated.
    pub instances: usize,
    pub pass: bool,
    pub checks: Vec<Check>,
}

fn outcome(suite: &str, seed: u64, instances: usize, checks: Vec<Check>) -> SuiteOutcome {
    SuiteOutcome {
        suite: suite.to_string(),
        seed,
        instances,
        pass: checks.iter().all(|c| c.pass),
        checks,
    }
}

/// Renders outcomes as a fixed-width terminal table.
pub fn outcome_table(outcomes: &[SuiteOutcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        out.push_str(&format!(
            "suite {} (seed {}, {} instances): {}\n",
            o.suite,
            o.seed,
            o.instances,
            if o.pass { "PASS" } else { "FAIL" }
        ));
        for c in &o.checks {
            out.push_str(&format!(
                "  [{}] {} :: {}\n",
                if c.pass { "pass" } else { "FAIL" },
                c.label,
                c.detail
            ));
        }
    }
    out
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn dense_gaussian(n: usize, rng: &mut ChaCha20Rng) -> Result<OperatorMatrix> {
    let m = CMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64(re, im)
    });
    OperatorMatrix::new(m, format!("dense gaussian n={n}"))
}

/// Deterministic mixed corpus cycling five instance kinds: random EP
/// (n <= 10, every rank reachable), dense Gaussian, Jordan blocks with
/// eigenvalues 0, 1, i, shift truncations, and banded Toeplitz
/// truncations of three fixed symbols.
pub fn mixed_corpus(count: usize, seed: u64) -> Result<Vec<OperatorMatrix>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let step = i / 5;
        let op = match i % 5 {
            0 => {
                let n = 2 + step % 9;
                let r = rng.random_range(0..=n);
                random_ep(n, r, rng.random())?
            }
            1 => dense_gaussian(2 + step % 7, &mut rng)?,
            2 => {
                let eigen = [c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 1.0)][step % 3];
                jordan_block(2 + step % 4, eigen)?
            }
            3 => truncated_shift(4 + step % 9)?,
            // Odd truncations of the two-sided symbols are exactly
            // singular and land on the non-posinormal side; even sizes
            // keep them invertible so the corpus carries both verdicts.
            4 => match step % 3 {
                0 => toeplitz_truncation(&[(-1, c64(1.0, 0.0)), (1, c64(2.0, 0.0))], 4 + 2 * (step % 5))?,
                1 => toeplitz_truncation(&[(1, c64(1.0, 0.0)), (-1, c64(2.0, 0.0))], 4 + 2 * (step % 5))?,
                _ => toeplitz_truncation(&[(0, c64(1.0, 0.0)), (1, c64(1.0, 0.0))], 3 + step % 10)?,
            },
            _ => unreachable!(),
        };
        out.push(op);
    }
    Ok(out)
}

/// Deterministic corpus of random EP matrices with 2 <= n <= max_n and
/// uniformly drawn rank, zero and full rank included.
pub fn ep_corpus(count: usize, max_n: usize, seed: u64) -> Result<Vec<OperatorMatrix>> {
    if max_n < 2 {
        return Err(Error::Input("EP corpus needs max_n >= 2".into()));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = 2 + i % (max_n - 1);
            let r = rng.random_range(0..=n);
            random_ep(n, r, rng.random())
        })
        .collect()
}

fn list_failures(failures: &[String], limit: usize) -> String {
    if failures.is_empty() {
        return String::new();
    }
    let shown: Vec<&str> = failures.iter().take(limit).map(String::as_str).collect();
    let suffix = if failures.len() > limit {
        format!(" (+{} more)", failures.len() - limit)
    } else {
        String::new()
    };
    format!("; failing: {}{}", shown.join(" | "), suffix)
}

/// Three independent posinormality decisions (range inclusion, Douglas
/// witness residuals, bisection for the scaling constant) must agree on
/// every corpus instance; plus the closed-form minimal scaling constant
/// of [[1,1],[0,1]].
pub fn suite_theorem1(params: &SuiteParams) -> Result<SuiteOutcome> {
    let count = params.instances.unwrap_or(500);
    let tol = &params.tol;
    let corpus = mixed_corpus(count, params.seed)?;
    let mut disagreements = Vec::new();
    for op in &corpus {
        let m = op.matrix();
        let range_verdict = is_posinormal(m, tol)?.0;
        let dw = douglas_witness(m, tol)?;
        let witness_verdict = dw.residuals_ok(operator_norm(m), tol);
        let scaling_verdict = bisect_lambda(m, tol)?.is_some();
        if range_verdict != witness_verdict || witness_verdict != scaling_verdict {
            disagreements.push(format!(
                "{} range={range_verdict} witness={witness_verdict} scaling={scaling_verdict}",
                op.label()
            ));
        }
    }
    let agree = count - disagreements.len();
    let mut checks = vec![check(
        "range, witness and scaling routes agree",
        disagreements.is_empty(),
        format!("{agree}/{count} instances{}", list_failures(&disagreements, 3)),
    )];
    checks.extend(golden_minimality_checks(tol)?);
    Ok(outcome("theorem1", params.seed, count, checks))
}

/// The minimal scaling constant of [[1,1],[0,1]] is (1+sqrt(5))/2; the
/// scaling inequality holds there and breaks 1e-4 below it.
fn golden_minimality_checks(tol: &ToleranceConfig) -> Result<Vec<Check>> {
    let m = CMatrix::from_row_slice(
        2,
        2,
        &[c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)],
    );
    let golden = (1.0 + 5.0_f64.sqrt()) / 2.0;
    let cert = posinormal_certificate(&m, tol)?;
    let witness_dev = (cert.lambda_min - golden).abs();
    let route_gap = (cert.lambda_min - cert.lambda_bisect).abs() / cert.lambda_min;
    let first = check(
        "minimal scaling constant of [[1,1],[0,1]] is (1+sqrt(5))/2",
        witness_dev <= 1e-8 && route_gap <= 1e-6,
        format!(
            "witness norm {:.12}, bisection {:.12}, closed form {:.12}",
            cert.lambda_min, cert.lambda_bisect, golden
        ),
    );
    let (pass_at, margin_at) = lambda_psd_test(&m, golden, tol)?;
    let shaved = golden * (1.0 - 1e-4);
    let (pass_below, margin_below) = lambda_psd_test(&m, shaved, tol)?;
    let second = check(
        "scaling inequality holds at the minimum and fails just below it",
        pass_at && !pass_below,
        format!(
            "smallest eigenvalue {margin_at:.3e} at the minimum, {margin_below:.3e} at (1 - 1e-4) of it"
        ),
    );
    Ok(vec![first, second])
}

/// Every power of an EP matrix through k = 5 stays EP, and the range of
/// the adjoint power equals the range of the adjoint.
pub fn suite_main_theorem(params: &SuiteParams) -> Result<SuiteOutcome> {
    let count = params.instances.unwrap_or(200);
    let tol = &params.tol;
    let corpus = ep_corpus(count, 12, params.seed)?;
    let mut worst_ep = 0.0_f64;
    let mut worst_adj = 0.0_f64;
    let mut ep_failures = Vec::new();
    let mut adj_failures = Vec::new();
    for op in &corpus {
        let a = op.matrix();
        let ran_adj = orthonormal_range(&a.adjoint(), tol)?;
        let mut power = a.clone();
        for k in 1..=5 {
            if k > 1 {
                power = &power * a;
            }
            let ran_k = orthonormal_range(&power, tol)?;
            let ran_k_adj = orthonormal_range(&power.adjoint(), tol)?;
            let (_, d1) = subspace_inclusion(&ran_k, &ran_k_adj, tol)?;
            let (_, d2) = subspace_inclusion(&ran_k_adj, &ran_k, tol)?;
            let ep_defect = d1.max(d2);
            worst_ep = worst_ep.max(ep_defect);
            if ep_defect > 1e-8 {
                ep_failures.push(format!("{} k={k} defect {ep_defect:.3e}", op.label()));
            }
            let (_, e1) = subspace_inclusion(&ran_k_adj, &ran_adj, tol)?;
            let (_, e2) = subspace_inclusion(&ran_adj, &ran_k_adj, tol)?;
            let adj_defect = e1.max(e2);
            worst_adj = worst_adj.max(adj_defect);
            if adj_defect > 1e-8 {
                adj_failures.push(format!("{} k={k} defect {adj_defect:.3e}", op.label()));
            }
        }
    }
    let checks = vec![
        check(
            "powers through k=5 stay EP (defect <= 1e-8)",
            ep_failures.is_empty(),
            format!("worst range-equality defect {worst_ep:.3e}{}", list_failures(&ep_failures, 3)),
        ),
        check(
            "adjoint range is invariant under powers (defect <= 1e-8)",
            adj_failures.is_empty(),
            format!("worst invariance defect {worst_adj:.3e}{}", list_failures(&adj_failures, 3)),
        ),
    ];
    Ok(outcome("main-theorem", params.seed, count, checks))
}

/// Posinormal matrices have ker A = ker A^2; the nilpotent 2x2 Jordan
/// block is the canonical failure with kernel dimensions (1, 2).
pub fn suite_lemma2(params: &SuiteParams) -> Result<SuiteOutcome> {
    let count = params.instances.unwrap_or(500);
    let tol = &params.tol;
    let corpus = mixed_corpus(count, params.seed)?;
    let mut posinormal_count = 0usize;
    let mut dim_failures = Vec::new();
    let mut worst_defect = 0.0_f64;
    for op in &corpus {
        let m = op.matrix();
        if !is_posinormal(m, tol)?.0 {
            continue;
        }
        posinormal_count += 1;
        let ker = orthonormal_kernel(m, tol)?;
        let ker_sq = orthonormal_kernel(&(m * m), tol)?;
        let (_, defect) = subspace_inclusion(&ker_sq, &ker, tol)?;
        worst_defect = worst_defect.max(defect);
        if ker.dim() != ker_sq.dim() || defect > 1e-8 {
            dim_failures.push(format!(
                "{} dims ({}, {}) defect {defect:.3e}",
                op.label(),
                ker.dim(),
                ker_sq.dim()
            ));
        }
    }
    let j2 = jordan_block(2, c64(0.0, 0.0))?;
    let (j2_equal, j2_dim, j2_dim_sq) = kernel_power_equal(j2.matrix(), tol)?;
    let checks = vec![
        check(
            "posinormal instances keep their kernel under squaring",
            dim_failures.is_empty(),
            format!(
                "{posinormal_count} posinormal of {count}, worst inclusion defect {worst_defect:.3e}{}",
                list_failures(&dim_failures, 3)
            ),
        ),
        check(
            "nilpotent 2x2 Jordan block fails with kernel dims (1, 2)",
            !j2_equal && j2_dim == 1 && j2_dim_sq == 2,
            format!("equal={j2_equal}, dims ({j2_dim}, {j2_dim_sq})"),
        ),
    ];
    Ok(outcome("lemma2", params.seed, count, checks))
}

/// On every posinormal instance the restriction of A to ran A* is
/// bounded below by some c > 0 and ||A^2 h|| >= c^2 ||h|| there, checked
/// exactly through the spectrum and by 200 sampled unit vectors.
pub fn suite_lemma_crl(params: &SuiteParams) -> Result<SuiteOutcome> {
    let count = params.instances.unwrap_or(200);
    let samples = 200usize;
    let tol = &params.tol;
    let corpus = mixed_corpus(count, params.seed)?;
    let mut rng = ChaCha20Rng::seed_from_u64(params.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut certified = 0usize;
    let mut failures = Vec::new();
    let mut worst_margin = f64::INFINITY;
    for op in &corpus {
        let m = op.matrix();
        if !is_posinormal(m, tol)?.0 {
            continue;
        }
        let cert = match lemma_crl_check(m, tol) {
            Ok(CrlOutcome::Certified(cert)) => cert,
            Ok(CrlOutcome::Violated(v)) => {
                failures.push(format!(
                    "{} floor {:.3e} below c^2 {:.3e}",
                    op.label(),
                    v.power_floor,
                    v.c * v.c
                ));
                continue;
            }
            Err(Error::Degenerate(_)) => continue,
            Err(e) => return Err(e),
        };
        certified += 1;
        if !(cert.c > 0.0) {
            failures.push(format!("{} certified with c = {}", op.label(), cert.c));
            continue;
        }
        let q = orthonormal_range(&m.adjoint(), tol)?;
        let bound = cert.c * cert.c * (1.0 - 1e-8);
        let m2 = m * m;
        for _ in 0..samples {
            let mut g = posinorm::CVector::zeros(q.dim());
            loop {
                for k in 0..q.dim() {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    g[k] = c64(re, im);
                }
                if g.norm() > 0.0 {
                    break;
                }
            }
            let h = q.basis() * &g;
            let ratio = (&m2 * &h).norm() / h.norm();
            worst_margin = worst_margin.min(ratio - bound);
            if ratio < bound {
                failures.push(format!(
                    "{} sampled ratio {ratio:.6e} below bound {bound:.6e}",
                    op.label()
                ));
                break;
            }
        }
    }
    let margin_text = if worst_margin.is_finite() {
        format!("{worst_margin:.3e}")
    } else {
        "n/a (no nonzero posinormal instances)".to_string()
    };
    let checks = vec![check(
        "A^2 is bounded below by c^2 on ran A* (exact floor and 200 samples each)",
        failures.is_empty() && certified > 0,
        format!(
            "{certified} certified instances, worst sampled margin {margin_text}{}",
            list_failures(&failures, 3)
        ),
    )];
    Ok(outcome("lemma-crl", params.seed, count, checks))
}

/// Sigma-curve dichotomy of the two-block family: the first power is
/// stable inside [1, sqrt(2)], the square matches the closed form
/// sqrt(1/n^2 + 1/n^4) and decays with exponent 1.
pub fn suite_example1(params: &SuiteParams) -> Result<SuiteOutcome> {
    let sizes: Vec<usize> = vec![4, 8, 16, 32, 64, 128, 256];
    let tol = &params.tol;
    let family = family_of(FamilyKind::BlockHarmonic)?;
    let report = power_range_report(&family, 2, &sizes, tol)?;
    let k1 = &report[0].diagnosis;
    let k2 = &report[1].diagnosis;

    let sqrt2 = 2.0_f64.sqrt();
    let mut k1_ok = k1.classification == Classification::Stable;
    let mut k1_range = (f64::INFINITY, 0.0_f64);
    for p in &k1.curve {
        match p.sigma {
            Some(s) => {
                k1_range = (k1_range.0.min(s), k1_range.1.max(s));
                if !(s >= 1.0 - 1e-12 && s <= sqrt2 + 1e-12) {
                    k1_ok = false;
                }
            }
            None => k1_ok = false,
        }
    }

    let mut k2_form_ok = true;
    let mut worst_rel = 0.0_f64;
    for p in &k2.curve {
        let n = p.n as f64;
        let expected = (1.0 / (n * n) + 1.0 / (n * n * n * n)).sqrt();
        match p.sigma {
            Some(s) => {
                let rel = (s - expected).abs() / expected;
                worst_rel = worst_rel.max(rel);
                if rel > 1e-10 {
                    k2_form_ok = false;
                }
            }
            None => k2_form_ok = false,
        }
    }
    let alpha = k2.fitted_decay_exponent;
    let alpha_ok = k2.classification == Classification::Decaying
        && alpha.is_some_and(|a| (a - 1.0).abs() <= 0.1);

    let checks = vec![
        check(
            "first power is stable with sigma floor in [1, sqrt(2)]",
            k1_ok,
            format!(
                "classification {}, sigma range [{:.6}, {:.6}]",
                k1.classification.as_str(),
                k1_range.0,
                k1_range.1
            ),
        ),
        check(
            "squared family matches sqrt(1/n^2 + 1/n^4) within 1e-10 relative",
            k2_form_ok,
            format!("worst relative deviation {worst_rel:.3e}"),
        ),
        check(
            "squared family decays with exponent 1.0 +- 0.1",
            alpha_ok,
            format!(
                "classification {}, fitted exponent {}",
                k2.classification.as_str(),
                alpha.map(|a| format!("{a:.4}")).unwrap_or_else(|| "n/a".into())
            ),
        ),
    ];
    Ok(outcome("example1", params.seed, sizes.len(), checks))
}

/// Exact banded-operator results: the self-commutator of U* + 2U is
/// 3 e1 e1*, the operator is hyponormal while its square is not, a
/// seeded probe never falsifies the lower bound 1, and the shift
/// witness identities hold with exact symbols.
pub fn suite_example2(params: &SuiteParams) -> Result<SuiteOutcome> {
    let tol = &params.tol;
    let op = posinorm::qtop::qt_from_symbol(&[(-1, c64(1.0, 0.0)), (1, c64(2.0, 0.0))])?;
    let mut checks = Vec::new();

    let comm = self_commutator(&op)?;
    let mut comm_residual = 0.0_f64;
    if comm.nrows() == 0 {
        comm_residual = f64::INFINITY;
    } else {
        for i in 0..comm.nrows() {
            for j in 0..comm.ncols() {
                let expected = if i == 0 && j == 0 { c64(3.0, 0.0) } else { c64(0.0, 0.0) };
                comm_residual = comm_residual.max((comm[(i, j)] - expected).norm());
            }
        }
    }
    checks.push(check(
        "self-commutator of U* + 2U is 3 e1 e1*",
        comm_residual <= 1e-14,
        format!("largest entry deviation {comm_residual:.3e}"),
    ));

    let (hypo, lambda_min) = qt_is_hyponormal(&op, tol)?;
    checks.push(check(
        "U* + 2U is hyponormal",
        hypo,
        format!("smallest commutator eigenvalue {lambda_min:.6e}"),
    ));

    let square = qt_power(&op, 2);
    let (sq_hypo, sq_lambda_min) = qt_is_hyponormal(&square, tol)?;
    checks.push(check(
        "(U* + 2U)^2 is not hyponormal",
        !sq_hypo && sq_lambda_min <= -tol.psd_rtol,
        format!("most negative commutator eigenvalue {sq_lambda_min:.6e}"),
    ));

    let probe = qt_bounded_below_probe(&op, 1.0, 10_000, 512, params.seed)?;
    checks.push(check(
        "lower bound 1 for U* + 2U survives 10^4 seeded probes",
        !probe.falsified,
        format!(
            "worst ratio {:.12} at support {}",
            probe.worst_ratio, probe.worst_support
        ),
    ));

    let u = QuasiToeplitzOperator::shift();
    let us = posinorm::qtop::qt_adjoint(&u);
    let identity = QuasiToeplitzOperator::identity();
    let identities: [(&str, QuasiToeplitzOperator, QuasiToeplitzOperator); 3] = [
        ("U = U* U^2", u.clone(), qt_multiply(&us, &qt_power(&u, 2))),
        (
            "U U* = U* (U^2 U*^2) U",
            qt_multiply(&u, &us),
            qt_multiply(
                &us,
                &qt_multiply(&qt_multiply(&qt_power(&u, 2), &qt_power(&us, 2)), &u),
            ),
        ),
        ("U* U = I", qt_multiply(&us, &u), identity),
    ];
    for (name, lhs, rhs) in &identities {
        let v = qt_verify_equal(lhs, rhs, tol);
        checks.push(check(
            &format!("shift identity {name} holds exactly"),
            v.equal && v.symbol_residual == 0.0 && v.correction_residual <= 1e-14,
            format!(
                "symbol residual {:.1e}, correction residual {:.3e}",
                v.symbol_residual, v.correction_residual
            ),
        ));
    }

    let cases = checks.len();
    Ok(outcome("example2", params.seed, cases, checks))
}

/// Angle geometry: EP instances paired with themselves give a right
/// angle, and the two-block family reproduces cos(theta) = n/sqrt(n^2+1).
pub fn suite_bouldin(params: &SuiteParams) -> Result<SuiteOutcome> {
    let count = params.instances.unwrap_or(100);
    let tol = &params.tol;
    let corpus = ep_corpus(count, 10, params.seed)?;
    let mut worst_angle_dev = 0.0_f64;
    let mut failures = Vec::new();
    for op in &corpus {
        let ar = bouldin_angle(op.matrix(), op.matrix(), tol)?;
        let dev = (ar.theta - std::f64::consts::FRAC_PI_2).abs();
        worst_angle_dev = worst_angle_dev.max(dev);
        if dev > 1e-8 {
            failures.push(format!("{} theta {:.12}", op.label(), ar.theta));
        }
    }
    let family = family_of(FamilyKind::BlockHarmonic)?;
    let mut worst_cos_dev = 0.0_f64;
    let mut form_ok = true;
    let mut cos_details = Vec::new();
    for n in [1usize, 2, 4, 8] {
        let t = family.generate(n)?;
        let ar = bouldin_angle(t.matrix(), t.matrix(), tol)?;
        let expected = n as f64 / ((n * n + 1) as f64).sqrt();
        let dev = (ar.theta.cos() - expected).abs();
        worst_cos_dev = worst_cos_dev.max(dev);
        if dev > 1e-8 {
            form_ok = false;
        }
        cos_details.push(format!("n={n}: cos {:.10}", ar.theta.cos()));
    }
    let checks = vec![
        check(
            "EP instances paired with themselves give a right angle",
            failures.is_empty(),
            format!(
                "worst |theta - pi/2| = {worst_angle_dev:.3e}{}",
                list_failures(&failures, 3)
            ),
        ),
        check(
            "two-block family reproduces cos(theta) = n/sqrt(n^2+1)",
            form_ok,
            format!("worst cosine deviation {worst_cos_dev:.3e}; {}", cos_details.join(", ")),
        ),
    ];
    Ok(outcome("bouldin", params.seed, count, checks))
}

/// Dispatches a suite by name; "all" chains every suite in order.
pub fn run_suite(name: &str, params: &SuiteParams) -> Result<Vec<SuiteOutcome>> {
    match name {
        "theorem1" => Ok(vec![suite_theorem1(params)?]),
        "main-theorem" => Ok(vec![suite_main_theorem(params)?]),
        "lemma2" => Ok(vec![suite_lemma2(params)?]),
        "lemma-crl" => Ok(vec![suite_lemma_crl(params)?]),
        "example1" => Ok(vec![suite_example1(params)?]),
        "example2" => Ok(vec![suite_example2(params)?]),
        "bouldin" => Ok(vec![suite_bouldin(params)?]),
        "all" => Ok(vec![
            suite_theorem1(params)?,
            suite_main_theorem(params)?,
            suite_lemma2(params)?,
            suite_lemma_crl(params)?,
            suite_example1(params)?,
            suite_example2(params)?,
            suite_bouldin(params)?,
        ]),
        other => Err(Error::Input(format!(
            "unknown suite '{other}'; expected one of {}",
            SUITE_NAMES.join(", ")
        ))),
    }
}
