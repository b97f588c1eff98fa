//! Property checkers and certificate constructors for finite matrices:
//! normality, hyponormality, posinormality via range inclusion, the
//! Douglas witness with its interrupter, minimal-lambda bisection,
//! kernel-power comparison, the Bouldin angle, and an aggregating
//! analyzer that enforces the implication hierarchy.


use crate::matop::OperatorMatrix;
use crate::numkernel::{
    is_psd_scaled, operator_norm, orthonormal_kernel, orthonormal_range, orthogonal_complement,
    pseudoinverse, smallest_nonzero_singular, subspace_angle, subspace_inclusion,
    subspace_intersection, ToleranceConfig,
};
use crate::{CMatrix, Error, Result};

fn check_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::Input(format!(
            "checker needs a nonempty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if !m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Input("matrix has non-finite entries".into()));
    }
    Ok(())
}

/// Commutator defect ||AA* - A*A|| / ||A||^2; true iff within the
/// residual tolerance. The zero matrix is normal with defect 0.
pub fn is_normal(m: &CMatrix, tol: &ToleranceConfig) -> Result<(bool, f64)> {
    check_square(m)?;
    let comm = m * m.adjoint() - m.adjoint() * m;
    let scale = operator_norm(m).powi(2);
    let defect = if scale == 0.0 {
        0.0
    } else {
        operator_norm(&comm) / scale
    };
    Ok((defect <= tol.residual_rtol, defect))
}

/// PSD test on A*A - AA*, judged against ||A||^2. Returns the verdict
/// and the smallest commutator eigenvalue.
pub fn is_hyponormal(m: &CMatrix, tol: &ToleranceConfig) -> Result<(bool, f64)> {
    check_square(m)?;
    let comm = m.adjoint() * m - m * m.adjoint();
    let scale = operator_norm(m).powi(2);
    is_psd_scaled(&comm, scale, tol)
}

/// Range inclusion ran A within ran A*, with the inclusion defect.
pub fn is_posinormal(m: &CMatrix, tol: &ToleranceConfig) -> Result<(bool, f64)> {
    check_square(m)?;
    let ran = orthonormal_range(m, tol)?;
    let ran_adj = orthonormal_range(&m.adjoint(), tol)?;
    subspace_inclusion(&ran, &ran_adj, tol)
}

/// Posinormality of the adjoint: ran A* within ran A.
pub fn is_coposinormal(m: &CMatrix, tol: &ToleranceConfig) -> Result<(bool, f64)> {
    check_square(m)?;
    is_posinormal(&m.adjoint(), tol)
}

/// Range equality ran A = ran A*; the defect is the larger of the two
/// inclusion defects.
pub fn is_ep(m: &CMatrix, tol: &ToleranceConfig) -> Result<(bool, f64)> {
    let (fwd, d1) = is_posinormal(m, tol)?;
    let (bwd, d2) = is_coposinormal(m, tol)?;
    Ok((fwd && bwd, d1.max(d2)))
}

/// The Douglas construction, with no posinormality gate: witness
/// T = pinv(A*) A, interrupter P = T T*, and the residuals of the
/// factorization A = A*T and the interrupter identity AA* = A*PA.
#[derive(Clone, Debug)]
pub struct DouglasWitness {
    pub witness: CMatrix,
    pub interrupter: CMatrix,
    /// Operator norm of the witness.
    pub lambda: f64,
    /// ||A - A*T||, compare against residual_rtol * ||A|| * max(1, ||T||).
    pub residual_factorization: f64,
    /// ||AA* - A*PA||, compare against residual_rtol * ||A||^2 * max(1, ||T||^2).
    pub residual_interrupter: f64,
}

impl DouglasWitness {
    /// Whether both residuals meet the tolerance. The scales are the
    /// magnitudes of the operands being subtracted: A*T is as large
    /// as ||A||·||T|| and A*PA as large as ||A||²·||T||², so a
    /// residual can only be judged relative to those, or
    /// ill-conditioned posinormal matrices get rejected for roundoff
    /// they cannot avoid.
    pub fn residuals_ok(&self, norm_a: f64, tol: &ToleranceConfig) -> bool {
        let lam = self.lambda.max(1.0);
        self.residual_factorization
            <= tol.residual_rtol * (norm_a * lam).max(f64::MIN_POSITIVE)
            && self.residual_interrupter
                <= tol.residual_rtol * (norm_a.powi(2) * lam * lam).max(f64::MIN_POSITIVE)
    }
}

/// Builds the Douglas witness for any square matrix; for posinormal
/// input the residuals vanish up to roundoff, otherwise the
/// factorization residual measures how badly ran A escapes ran A*.
pub fn douglas_witness(m: &CMatrix, tol: &ToleranceConfig) -> Result<DouglasWitness> {
    check_square(m)?;
    let pinv_adj = pseudoinverse(&m.adjoint(), tol)?;
    let witness = &pinv_adj * m;
    let interrupter = &witness * witness.adjoint();
    let lambda = operator_norm(&witness);
    let residual_factorization = operator_norm(&(m - m.adjoint() * &witness));
    let residual_interrupter =
        operator_norm(&(m * m.adjoint() - m.adjoint() * &interrupter * m));
    Ok(DouglasWitness {
        witness,
        interrupter,
        lambda,
        residual_factorization,
        residual_interrupter,
    })
}

/// PSD test for AA* <= lambda^2 A*A, judged against the operand scale
/// ||A||^2 (1 + lambda^2). Returns the verdict and the smallest
/// eigenvalue of lambda^2 A*A - AA*.
pub fn lambda_psd_test(m: &CMatrix, lambda: f64, tol: &ToleranceConfig) -> Result<(bool, f64)> {
    check_square(m)?;
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::Input(format!("lambda must be finite and nonnegative, got {lambda}")));
    }
    let h = m.adjoint().scale(lambda * lambda) * m - m * m.adjoint();
    let scale = operator_norm(m).powi(2) * (1.0 + lambda * lambda);
    is_psd_scaled(&h, scale, tol)
}

/// Smallest lambda with AA* <= lambda^2 A*A, found by bisection over
/// [0, ||A|| / sigma+_min(A)] (53 halvings). None when no lambda up to
/// that principled cap works, which is the non-posinormal case.
pub fn bisect_lambda(m: &CMatrix, tol: &ToleranceConfig) -> Result<Option<f64>> {
    check_square(m)?;
    if operator_norm(m) == 0.0 {
        return Ok(Some(0.0));
    }
    let sigma = smallest_nonzero_singular(m, tol)?;
    let hi_cap = operator_norm(m) / sigma;
    if !lambda_psd_test(m, hi_cap, tol)?.0 {
        return Ok(None);
    }
    if lambda_psd_test(m, 0.0, tol)?.0 {
        return Ok(Some(0.0));
    }
    let mut lo = 0.0;
    let mut hi = hi_cap;
    for _ in 0..53 {
        let mid = 0.5 * (lo + hi);
        if lambda_psd_test(m, mid, tol)?.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Certificate that A is posinormal: the Douglas witness T with
/// A = A*T, the interrupter P = TT* with AA* = A*PA, and the minimal
/// scaling constant, cross-checked by bisection.
#[derive(Clone, Debug)]
pub struct PosinormalCertificate {
    pub witness: CMatrix,
    pub interrupter: CMatrix,
    /// Norm-of-witness route: ||T||, the least lambda with AA* <= lambda^2 A*A.
    pub lambda_min: f64,
    /// Independent bisection route for the same constant.
    pub lambda_bisect: f64,
    pub residual_factorization: f64,
    pub residual_interrupter: f64,
}

/// Builds and verifies the posinormality certificate. Fails with a
/// precondition error (carrying the inclusion defect) on
/// non-posinormal input, and with an internal-consistency error when
/// the independent routes disagree.
pub fn posinormal_certificate(
    m: &CMatrix,
    tol: &ToleranceConfig,
) -> Result<PosinormalCertificate> {
    let (posinormal, defect) = is_posinormal(m, tol)?;
    if !posinormal {
        return Err(Error::Precondition {
            msg: "matrix is not posinormal (ran A is not contained in ran A*)".into(),
            defect,
        });
    }
    let norm_a = operator_norm(m);
    let dw = douglas_witness(m, tol)?;
    if !dw.residuals_ok(norm_a, tol) {
        return Err(Error::Internal(format!(
            "certificate residuals out of tolerance: factorization {:.3e}, interrupter {:.3e}",
            dw.residual_factorization, dw.residual_interrupter
        )));
    }
    let (psd_ok, _) = is_psd_scaled(&dw.interrupter, dw.lambda * dw.lambda, tol)?;
    if !psd_ok {
        return Err(Error::Internal("interrupter P = TT* failed the PSD test".into()));
    }
    let lambda_bisect = bisect_lambda(m, tol)?.ok_or_else(|| {
        Error::Internal("bisection found no scaling lambda for a posinormal matrix".into())
    })?;
    let agreement = (dw.lambda - lambda_bisect).abs() / dw.lambda.max(f64::MIN_POSITIVE);
    if norm_a > 0.0 && agreement > 1e-6 {
        return Err(Error::Internal(format!(
            "lambda routes disagree: witness norm {:.12e} vs bisection {:.12e}",
            dw.lambda, lambda_bisect
        )));
    }
    Ok(PosinormalCertificate {
        witness: dw.witness,
        interrupter: dw.interrupter,
        lambda_min: dw.lambda,
        lambda_bisect,
        residual_factorization: dw.residual_factorization,
        residual_interrupter: dw.residual_interrupter,
    })
}

/// Residual of a supplied interrupter: ||AA* - A*PA||.
pub fn interrupter_residual(m: &CMatrix, p: &CMatrix) -> Result<f64> {
    check_square(m)?;
    check_square(p)?;
    if p.nrows() != m.nrows() {
        return Err(Error::Input("interrupter dimension mismatch".into()));
    }
    Ok(operator_norm(&(m * m.adjoint() - m.adjoint() * p * m)))
}

/// Compares ker A with ker A^2: true iff the dimensions agree and
/// ker A^2 is contained in ker A. The reverse inclusion always holds
/// and is asserted as a sanity check.
pub fn kernel_power_equal(m: &CMatrix, tol: &ToleranceConfig) -> Result<(bool, usize, usize)> {
    check_square(m)?;
    let ker = orthonormal_kernel(m, tol)?;
    let ker_sq = orthonormal_kernel(&(m * m), tol)?;
    let (forward, fdefect) = subspace_inclusion(&ker, &ker_sq, tol)?;
    if !forward && fdefect > 10.0 * tol.residual_rtol {
        return Err(Error::Internal(format!(
            "ker A escaped ker A^2 (defect {fdefect:.3e}), which is impossible; rank decision is broken"
        )));
    }
    let (backward, _) = subspace_inclusion(&ker_sq, &ker, tol)?;
    Ok((ker.dim() == ker_sq.dim() && backward, ker.dim(), ker_sq.dim()))
}

/// The subspaces entering Bouldin's criterion and the angle between
/// ran B and N = ker A ∩ (ker A ∩ ran B)-perp.
#[derive(Clone, Copy, Debug)]
pub struct AngleResult {
    /// Angle in radians, in [0, pi/2].
    pub theta: f64,
    pub dim_ran_b: usize,
    pub dim_ker_a: usize,
    /// Dimension of ker A ∩ ran B.
    pub dim_intersection: usize,
    /// Dimension of N.
    pub dim_n: usize,
}

/// Computes the Bouldin angle for a pair of equal-dimension matrices.
pub fn bouldin_angle(a: &CMatrix, b: &CMatrix, tol: &ToleranceConfig) -> Result<AngleResult> {
    check_square(a)?;
    check_square(b)?;
    if a.nrows() != b.nrows() {
        return Err(Error::Input(format!(
            "dimension mismatch: {} vs {}",
            a.nrows(),
            b.nrows()
        )));
    }
    let ran_b = orthonormal_range(b, tol)?;
    let ker_a = orthonormal_kernel(a, tol)?;
    let j = subspace_intersection(&ker_a, &ran_b, tol)?;
    let j_perp = orthogonal_complement(&j, tol)?;
    let n = subspace_intersection(&ker_a, &j_perp, tol)?;
    let theta = subspace_angle(&ran_b, &n)?;
    Ok(AngleResult {
        theta,
        dim_ran_b: ran_b.dim(),
        dim_ker_a: ker_a.dim(),
        dim_intersection: j.dim(),
        dim_n: n.dim(),
    })
}

/// Aggregated verdicts for one operator.
#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub normal: bool,
    pub normal_defect: f64,
    pub hyponormal: bool,
    /// Smallest eigenvalue of A*A - AA*.
    pub hyponormal_lambda_min: f64,
    pub posinormal: bool,
    pub posinormal_defect: f64,
    pub coposinormal: bool,
    pub coposinormal_defect: f64,
    pub ep: bool,
    pub kernel_dim: usize,
    pub kernel_sq_dim: usize,
    pub kernel_power_equal: bool,
    pub certificate: Option<PosinormalCertificate>,
    pub caveats: Vec<String>,
}

/// Runs every checker, attaches a certificate when the matrix is
/// posinormal, and enforces the implication hierarchy
/// normal => hyponormal => posinormal (and normal => coposinormal).
/// A borderline contradiction within 10x tolerance slack is resolved
/// toward the stronger property and recorded as a caveat; a decisive
/// one is an internal-consistency error.
pub fn analyze(op: &OperatorMatrix, tol: &ToleranceConfig) -> Result<PropertyReport> {
    let m = op.matrix();
    let scale = operator_norm(m).powi(2);
    let (normal, normal_defect) = is_normal(m, tol)?;
    let (mut hyponormal, hyponormal_lambda_min) = is_hyponormal(m, tol)?;
    let (mut posinormal, posinormal_defect) = is_posinormal(m, tol)?;
    let (mut coposinormal, coposinormal_defect) = is_coposinormal(m, tol)?;
    let (kernel_power_eq, kernel_dim, kernel_sq_dim) = kernel_power_equal(m, tol)?;

    let mut caveats = Vec::new();

    if normal && !hyponormal {
        if hyponormal_lambda_min < -10.0 * tol.psd_rtol * scale {
            return Err(Error::Internal(format!(
                "normal matrix failed the hyponormality test decisively (lambda_min {hyponormal_lambda_min:.3e})"
            )));
        }
        hyponormal = true;
        caveats.push(
            "hyponormality was borderline and promoted because the matrix tested normal".into(),
        );
    }
    if hyponormal && !posinormal {
        if posinormal_defect > 10.0 * tol.residual_rtol {
            return Err(Error::Internal(format!(
                "hyponormal matrix failed the range-inclusion test decisively (defect {posinormal_defect:.3e})"
            )));
        }
        posinormal = true;
        caveats.push(
            "posinormality was borderline and promoted because the matrix tested hyponormal".into(),
        );
    }
    if normal && !coposinormal {
        if coposinormal_defect > 10.0 * tol.residual_rtol {
            return Err(Error::Internal(format!(
                "normal matrix failed the adjoint range-inclusion test decisively (defect {coposinormal_defect:.3e})"
            )));
        }
        coposinormal = true;
        caveats.push(
            "coposinormality was borderline and promoted because the matrix tested normal".into(),
        );
    }
    let ep = posinormal && coposinormal;

    let certificate = if posinormal {
        match posinormal_certificate(m, tol) {
            Ok(cert) => Some(cert),
            Err(Error::Internal(msg)) => {
                caveats.push(format!(
                    "certificate construction was inconsistent at this conditioning and was dropped: {msg}"
                ));
                None
            }
            Err(e) => return Err(e),
        }
    } else {
        None
    };

    if op.label().contains("truncation") && (!hyponormal || !posinormal) {
        caveats.push(
            "input is a finite truncation: property failures may be truncation artifacts \
             absent from the infinite operator"
                .into(),
        );
    }

    Ok(PropertyReport {
        normal,
        normal_defect,
        hyponormal,
        hyponormal_lambda_min,
        posinormal,
        posinormal_defect,
        coposinormal,
        coposinormal_defect,
        ep,
        kernel_dim,
        kernel_sq_dim,
        kernel_power_equal: kernel_power_eq,
        certificate,
        caveats,
    })
}
