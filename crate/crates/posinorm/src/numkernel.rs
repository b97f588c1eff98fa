//! Tolerance-aware numerical primitives: numerical rank, orthonormal
//! range/kernel bases, Moore-Penrose pseudoinverse, PSD tests and
//! subspace geometry.
//!
//! Every rank decision is relative to the largest singular value of the
//! input, so all verdicts are invariant under rescaling `A -> cA`. The
//! zero matrix has numerical rank 0, trivial range and full kernel. All
//! routines are deterministic for a fixed input.

use nalgebra::linalg::SymmetricEigen;
use num_complex::Complex64;

use crate::{CMatrix, CVector, Error, Result};

/// Relative thresholds for the crate's numerical decisions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ToleranceConfig {
    /// Singular values at or below `rank_rtol * sigma_max` count as zero.
    pub rank_rtol: f64,
    /// Eigenvalues above `-psd_rtol * scale` qualify as nonnegative.
    pub psd_rtol: f64,
    /// Bound for equality-of-operators residuals, relative to the operand scale.
    pub residual_rtol: f64,
}

impl ToleranceConfig {
    /// All three thresholds must be strictly positive and at most `1e-2`.
    pub fn new(rank_rtol: f64, psd_rtol: f64, residual_rtol: f64) -> Result<Self> {
        for (name, value) in [
            ("rank_rtol", rank_rtol),
            ("psd_rtol", psd_rtol),
            ("residual_rtol", residual_rtol),
        ] {
            if !(value > 0.0 && value <= 1e-2) {
                return Err(Error::Input(format!(
                    "{name} must lie in (0, 1e-2], got {value:e}"
                )));
            }
        }
        Ok(Self {
            rank_rtol,
            psd_rtol,
            residual_rtol,
        })
    }
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rank_rtol: 1e-10,
            psd_rtol: 1e-10,
            residual_rtol: 1e-10,
        }
    }
}

/// A subspace of C^n held as a matrix with orthonormal columns.
///
/// Zero columns encode the trivial subspace `{0}`.
#[derive(Clone, Debug)]
pub struct Subspace {
    basis: CMatrix,
    ambient_dim: usize,
}

impl Subspace {
    /// Wraps a basis matrix, verifying `basis* . basis = I` within
    /// `residual_rtol`.
    pub fn new(basis: CMatrix, tol: &ToleranceConfig) -> Result<Self> {
        check_finite(&basis)?;
        let ambient_dim = basis.nrows();
        if basis.ncols() > ambient_dim {
            return Err(Error::Input(format!(
                "basis has {} columns in ambient dimension {}",
                basis.ncols(),
                ambient_dim
            )));
        }
        if basis.ncols() > 0 {
            let gram = basis.adjoint() * &basis;
            let eye = CMatrix::identity(basis.ncols(), basis.ncols());
            let defect = operator_norm(&(gram - eye));
            if defect > tol.residual_rtol {
                return Err(Error::Input(format!(
                    "basis columns are not orthonormal (defect {defect:.3e})"
                )));
            }
        }
        Ok(Self { basis, ambient_dim })
    }

    /// The trivial subspace `{0}` of C^n.
    pub fn trivial(ambient_dim: usize) -> Self {
        Self {
            basis: CMatrix::zeros(ambient_dim, 0),
            ambient_dim,
        }
    }

    /// The full space C^n with the standard basis.
    pub fn full(ambient_dim: usize) -> Self {
        Self {
            basis: CMatrix::identity(ambient_dim, ambient_dim),
            ambient_dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.ncols() == 0
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }
}

fn check_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::Input("matrix has non-finite entries".into()))
    }
}

fn check_nonempty(m: &CMatrix) -> Result<()> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(Error::Input("matrix is empty".into()));
    }
    Ok(())
}

fn faer_view(m: &CMatrix) -> faer::MatRef<'_, Complex64> {
    faer::MatRef::from_column_major_slice(m.as_slice(), m.nrows(), m.ncols())
}

/// Singular values of a nonempty matrix, sorted in nonincreasing order.
pub(crate) fn singular_spectrum(m: &CMatrix) -> Result<Vec<f64>> {
    faer_view(m)
        .singular_values()
        .map_err(|_| Error::Internal("singular value iteration did not converge".into()))
}

/// Full singular value decomposition `m = U diag(singular) V*` with
/// square factors and singular values sorted in nonincreasing order.
pub(crate) struct SvdFactors {
    pub(crate) u: CMatrix,
    pub(crate) v: CMatrix,
    pub(crate) singular: Vec<f64>,
}

impl SvdFactors {
    /// Number of singular values exceeding `rank_rtol * sigma_max`;
    /// they occupy the leading positions of the sorted spectrum.
    pub(crate) fn rank(&self, tol: &ToleranceConfig) -> usize {
        let sigma_max = self.singular.first().copied().unwrap_or(0.0);
        let cutoff = tol.rank_rtol * sigma_max;
        self.singular.iter().filter(|&&s| s > cutoff).count()
    }
}

pub(crate) fn full_svd(m: &CMatrix) -> Result<SvdFactors> {
    let svd = faer_view(m)
        .svd()
        .map_err(|_| Error::Internal("singular value iteration did not converge".into()))?;
    let u = svd.U();
    let v = svd.V();
    let s = svd.S();
    Ok(SvdFactors {
        u: CMatrix::from_fn(m.nrows(), m.nrows(), |i, j| u[(i, j)]),
        v: CMatrix::from_fn(m.ncols(), m.ncols(), |i, j| v[(i, j)]),
        singular: (0..s.dim()).map(|i| s[i].re).collect(),
    })
}

/// Operator (spectral) norm; 0 for an empty matrix.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let sv = singular_spectrum(m).expect("singular values of a finite matrix");
    sv.first().copied().unwrap_or(0.0)
}

/// Smallest singular value of the full spectrum, zeros included.
pub fn smallest_singular(m: &CMatrix) -> f64 {
    assert!(m.nrows() > 0 && m.ncols() > 0, "empty matrix");
    let sv = singular_spectrum(m).expect("singular values of a finite matrix");
    sv.last().copied().unwrap_or(0.0)
}

/// Number of singular values exceeding `rank_rtol * sigma_max`.
pub fn numerical_rank(m: &CMatrix, tol: &ToleranceConfig) -> Result<usize> {
    check_finite(m)?;
    check_nonempty(m)?;
    let sv = singular_spectrum(m)?;
    let cutoff = tol.rank_rtol * sv[0];
    Ok(sv.iter().filter(|&&s| s > cutoff).count())
}

/// Orthonormal basis of the numerical column space of `m`.
pub fn orthonormal_range(m: &CMatrix, tol: &ToleranceConfig) -> Result<Subspace> {
    check_finite(m)?;
    check_nonempty(m)?;
    let f = full_svd(m)?;
    let rank = f.rank(tol);
    if rank == 0 {
        return Ok(Subspace::trivial(m.nrows()));
    }
    Subspace::new(f.u.columns(0, rank).into_owned(), tol)
}

/// Orthonormal basis of the numerical null space of `m`.
///
/// The trailing columns of the full right factor span the kernel; for a
/// wide matrix that includes the directions beyond the singular
/// spectrum, which `m` annihilates exactly.
pub fn orthonormal_kernel(m: &CMatrix, tol: &ToleranceConfig) -> Result<Subspace> {
    check_finite(m)?;
    check_nonempty(m)?;
    let ncols = m.ncols();
    let f = full_svd(m)?;
    let rank = f.rank(tol);
    if rank == ncols {
        return Ok(Subspace::trivial(ncols));
    }
    Subspace::new(f.v.columns(rank, ncols - rank).into_owned(), tol)
}

/// Moore-Penrose pseudoinverse with singular values at or below
/// `rank_rtol * sigma_max` zeroed out.
pub fn pseudoinverse(m: &CMatrix, tol: &ToleranceConfig) -> Result<CMatrix> {
    check_finite(m)?;
    check_nonempty(m)?;
    let f = full_svd(m)?;
    let rank = f.rank(tol);
    if rank == 0 {
        return Ok(CMatrix::zeros(m.ncols(), m.nrows()));
    }
    let inverted = CVector::from_iterator(
        rank,
        f.singular[..rank]
            .iter()
            .map(|&s| Complex64::new(1.0 / s, 0.0)),
    );
    Ok(f.v.columns(0, rank) * CMatrix::from_diagonal(&inverted) * f.u.columns(0, rank).adjoint())
}

/// Positive-semidefiniteness of a Hermitian matrix, with the smallest
/// eigenvalue of the symmetrized input.
///
/// The verdict is `lambda_min >= -psd_rtol * ||H||`. Materially
/// non-Hermitian input (relative to `residual_rtol`) is rejected.
pub fn is_psd(h: &CMatrix, tol: &ToleranceConfig) -> Result<(bool, f64)> {
    is_psd_scaled(h, 0.0, tol)
}

/// PSD test against an explicit scale: the verdict is
/// `lambda_min >= -psd_rtol * max(||H||, scale)`.
///
/// Products like `A*A - AA*` of a numerically normal `A` are pure
/// roundoff; judged against their own norm they fail spuriously, so
/// callers pass the scale of the operands (for commutators, `||A||^2`).
pub fn is_psd_scaled(h: &CMatrix, scale: f64, tol: &ToleranceConfig) -> Result<(bool, f64)> {
    check_finite(h)?;
    if h.nrows() != h.ncols() {
        return Err(Error::Input(format!(
            "PSD test needs a square matrix, got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    if h.nrows() == 0 {
        return Ok((true, 0.0));
    }
    let norm_h = operator_norm(h);
    let skew = operator_norm(&(h - h.adjoint()));
    if skew > tol.residual_rtol * norm_h.max(scale) {
        return Err(Error::Input(format!(
            "matrix is materially non-Hermitian (||H - H*|| = {skew:.3e}, ||H|| = {norm_h:.3e})"
        )));
    }
    let symmetrized = (h + h.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(symmetrized);
    let lambda_min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let lambda_abs_max = eig
        .eigenvalues
        .iter()
        .map(|l| l.abs())
        .fold(0.0, f64::max);
    let threshold = -tol.psd_rtol * lambda_abs_max.max(scale);
    Ok((lambda_min >= threshold, lambda_min))
}

/// Smallest singular value exceeding `rank_rtol * sigma_max`.
///
/// A numerically zero matrix has no nonzero singular values and is
/// rejected as degenerate.
pub fn smallest_nonzero_singular(m: &CMatrix, tol: &ToleranceConfig) -> Result<f64> {
    check_finite(m)?;
    check_nonempty(m)?;
    let sv = singular_spectrum(m)?;
    let cutoff = tol.rank_rtol * sv[0];
    sv.iter()
        .copied()
        .filter(|&s| s > cutoff)
        .fold(None, |acc: Option<f64>, s| Some(acc.map_or(s, |a| a.min(s))))
        .ok_or_else(|| Error::Degenerate("numerically zero matrix".into()))
}

/// Whether `s1` is contained in `s2`, with the inclusion defect
/// `||(I - B2 B2*) B1||`.
///
/// The trivial subspace is included in everything with defect 0.
pub fn subspace_inclusion(s1: &Subspace, s2: &Subspace, tol: &ToleranceConfig) -> Result<(bool, f64)> {
    if s1.ambient_dim() != s2.ambient_dim() {
        return Err(Error::Input(format!(
            "ambient dimension mismatch: {} vs {}",
            s1.ambient_dim(),
            s2.ambient_dim()
        )));
    }
    if s1.is_trivial() {
        return Ok((true, 0.0));
    }
    let b1 = s1.basis();
    let b2 = s2.basis();
    let residual = b1 - b2 * (b2.adjoint() * b1);
    let defect = operator_norm(&residual);
    Ok((defect <= tol.residual_rtol, defect))
}

/// Angle between two subspaces: `arccos` of the largest inner product of
/// unit vectors, clamped to `[0, pi/2]`.
///
/// If either subspace is trivial the supremum runs over the empty set,
/// which is taken to be 0; the angle is then `pi/2`.
pub fn subspace_angle(s1: &Subspace, s2: &Subspace) -> Result<f64> {
    if s1.ambient_dim() != s2.ambient_dim() {
        return Err(Error::Input(format!(
            "ambient dimension mismatch: {} vs {}",
            s1.ambient_dim(),
            s2.ambient_dim()
        )));
    }
    if s1.is_trivial() || s2.is_trivial() {
        return Ok(std::f64::consts::FRAC_PI_2);
    }
    let cross = s1.basis().adjoint() * s2.basis();
    let cosine = operator_norm(&cross).clamp(0.0, 1.0);
    Ok(cosine.acos().clamp(0.0, std::f64::consts::FRAC_PI_2))
}

/// Intersection of two subspaces via the null space of the stacked
/// orthogonality constraints `(I - B1 B1*)x = 0`, `(I - B2 B2*)x = 0`.
pub fn subspace_intersection(
    s1: &Subspace,
    s2: &Subspace,
    tol: &ToleranceConfig,
) -> Result<Subspace> {
    if s1.ambient_dim() != s2.ambient_dim() {
        return Err(Error::Input(format!(
            "ambient dimension mismatch: {} vs {}",
            s1.ambient_dim(),
            s2.ambient_dim()
        )));
    }
    let n = s1.ambient_dim();
    if s1.is_trivial() || s2.is_trivial() {
        return Ok(Subspace::trivial(n));
    }
    let eye = CMatrix::identity(n, n);
    let p1 = &eye - s1.basis() * s1.basis().adjoint();
    let p2 = &eye - s2.basis() * s2.basis().adjoint();
    let mut stacked = CMatrix::zeros(2 * n, n);
    stacked.view_mut((0, 0), (n, n)).copy_from(&p1);
    stacked.view_mut((n, 0), (n, n)).copy_from(&p2);
    // The stacked constraint matrix of two genuinely intersecting
    // subspaces has sigma_max <= sqrt(2) and exact zeros on the
    // intersection, so the relative rank cutoff is meaningful here.
    orthonormal_kernel(&stacked, tol)
}

/// Orthogonal complement of a subspace within its ambient space.
pub fn orthogonal_complement(s: &Subspace, tol: &ToleranceConfig) -> Result<Subspace> {
    let n = s.ambient_dim();
    if s.is_trivial() {
        return Ok(Subspace::full(n));
    }
    if s.dim() == n {
        return Ok(Subspace::trivial(n));
    }
    let constraints = s.basis().adjoint();
    orthonormal_kernel(&constraints.into_owned(), tol)
}
