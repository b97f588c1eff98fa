//! Constructors for the finite-dimensional operators the laboratory
//! studies: truncated shifts, banded Toeplitz truncations, the
//! two-block range example, Jordan blocks, seeded random EP matrices
//! and deterministic truncation families.

use nalgebra::linalg::QR;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::{CMatrix, CVector, Error, Result};

/// Condition cap for the invertible core of `random_ep`. Powers up to 5
/// multiply condition numbers, and 20^5 still leaves every nonzero
/// singular value of A^5 at least ~3e-7 of the largest, far from the
/// default rank cutoff of 1e-10.
const EP_CORE_COND_CAP: f64 = 20.0;

/// A dense square complex matrix with a provenance label.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    entries: CMatrix,
    label: String,
}

impl OperatorMatrix {
    /// Wraps a square matrix with finite entries.
    pub fn new(entries: CMatrix, label: impl Into<String>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::Input(format!(
                "operator matrix must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.nrows() == 0 {
            return Err(Error::Input("operator matrix is empty".into()));
        }
        if !entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Input("operator matrix has non-finite entries".into()));
        }
        Ok(Self {
            entries,
            label: label.into(),
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// k-th power by repeated multiplication; the 0-th power is the
    /// identity.
    pub fn power(&self, k: usize) -> Self {
        let n = self.dim();
        let mut acc = CMatrix::identity(n, n);
        for _ in 0..k {
            acc = &acc * &self.entries;
        }
        let label = if k == 1 {
            self.label.clone()
        } else {
            format!("({})^{}", self.label, k)
        };
        Self { entries: acc, label }
    }
}

/// n-by-n truncation of the unilateral shift: ones on the first
/// subdiagonal, so the last basis vector is sent to 0.
pub fn truncated_shift(n: usize) -> Result<OperatorMatrix> {
    if n == 0 {
        return Err(Error::Input("shift truncation needs n >= 1".into()));
    }
    let mut m = CMatrix::zeros(n, n);
    for k in 0..n - 1 {
        m[(k + 1, k)] = Complex64::new(1.0, 0.0);
    }
    OperatorMatrix::new(m, format!("shift truncation n={n}"))
}

/// Renders a banded symbol as a sum over shift atoms: offset +1 prints
/// as U, -1 as U*, 0 as I, and larger offsets as powers.
pub fn symbol_text(coeffs: &[(i64, Complex64)]) -> String {
    let mut sorted: Vec<(i64, Complex64)> = coeffs.to_vec();
    sorted.sort_by_key(|&(j, _)| j);
    let mut out = String::new();
    for (j, c) in sorted {
        let base = match j {
            0 => "I".to_string(),
            1 => "U".to_string(),
            -1 => "U*".to_string(),
            j if j > 1 => format!("U^{j}"),
            j => format!("U*^{}", -j),
        };
        let term = if c.im == 0.0 {
            if c.re == 1.0 && j != 0 {
                base
            } else if c.re == -1.0 && j != 0 {
                format!("-{base}")
            } else if j == 0 {
                format!("{}{}", c.re, base)
            } else {
                format!("{}{}", c.re, base)
            }
        } else {
            format!("({}{}{}i){}", c.re, if c.im < 0.0 { "" } else { "+" }, c.im, base)
        };
        if out.is_empty() {
            out = term;
        } else if let Some(rest) = term.strip_prefix('-') {
            out = format!("{out} - {rest}");
        } else {
            out = format!("{out} + {term}");
        }
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

/// Collapses duplicate offsets by summation and drops exact zeros.
pub(crate) fn normalize_symbol(coeffs: &[(i64, Complex64)]) -> Vec<(i64, Complex64)> {
    let mut merged: Vec<(i64, Complex64)> = Vec::new();
    for &(j, c) in coeffs {
        match merged.iter_mut().find(|(k, _)| *k == j) {
            Some((_, acc)) => *acc += c,
            None => merged.push((j, c)),
        }
    }
    merged.retain(|&(_, c)| c != Complex64::new(0.0, 0.0));
    merged.sort_by_key(|&(j, _)| j);
    merged
}

/// n-by-n truncation of the banded Toeplitz operator with the given
/// symbol: entry (i, k) is the coefficient at offset i - k, so offset
/// +1 is the subdiagonal (the shift direction) and -1 the
/// superdiagonal.
pub fn toeplitz_truncation(coeffs: &[(i64, Complex64)], n: usize) -> Result<OperatorMatrix> {
    if n == 0 {
        return Err(Error::Input("Toeplitz truncation needs n >= 1".into()));
    }
    let symbol = normalize_symbol(coeffs);
    if symbol.is_empty() {
        return Err(Error::Input("Toeplitz symbol has no nonzero coefficients".into()));
    }
    let band = n as i64;
    if let Some(&(j, _)) = symbol.iter().find(|&&(j, _)| j <= -band || j >= band) {
        return Err(Error::Input(format!(
            "symbol offset {j} falls outside the {n}x{n} truncation"
        )));
    }
    let mut m = CMatrix::zeros(n, n);
    for &(j, c) in &symbol {
        for k in 0..n {
            let i = k as i64 + j;
            if (0..band).contains(&i) {
                m[(i as usize, k)] = c;
            }
        }
    }
    OperatorMatrix::new(
        m,
        format!("toeplitz truncation n={n} of {}", symbol_text(&symbol)),
    )
}

/// The 2n-by-2n block matrix [[A, I], [0, 0]] with A the diagonal of
/// the given positive entries. Its range is (first block) + {0} and
/// its square is [[A^2, A], [0, 0]].
pub fn block_example(diag_entries: &[f64]) -> Result<OperatorMatrix> {
    if diag_entries.is_empty() {
        return Err(Error::Input("block example needs at least one diagonal entry".into()));
    }
    if !diag_entries.iter().all(|a| a.is_finite() && *a > 0.0) {
        return Err(Error::Input("block example entries must be finite and positive".into()));
    }
    let n = diag_entries.len();
    let mut m = CMatrix::zeros(2 * n, 2 * n);
    for (k, &a) in diag_entries.iter().enumerate() {
        m[(k, k)] = Complex64::new(a, 0.0);
        m[(k, n + k)] = Complex64::new(1.0, 0.0);
    }
    OperatorMatrix::new(m, format!("block example truncation n={n}"))
}

/// Jordan block: the eigenvalue on the diagonal, ones on the
/// superdiagonal. The nilpotent 2x2 case is the canonical
/// non-posinormal specimen.
pub fn jordan_block(n: usize, eigenvalue: Complex64) -> Result<OperatorMatrix> {
    if n == 0 {
        return Err(Error::Input("Jordan block needs n >= 1".into()));
    }
    let mut m = CMatrix::zeros(n, n);
    for k in 0..n {
        m[(k, k)] = eigenvalue;
        if k + 1 < n {
            m[(k, k + 1)] = Complex64::new(1.0, 0.0);
        }
    }
    OperatorMatrix::new(m, format!("jordan block n={n} lambda={eigenvalue}"))
}

fn sample_complex<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im).scale(std::f64::consts::FRAC_1_SQRT_2)
}

fn ginibre<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| sample_complex(rng))
}

/// Unitary matrix from QR of a seeded complex Gaussian draw, with
/// column phases fixed so the result is independent of the QR sign
/// convention.
fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(n, n, rng);
    let qr = QR::new(g);
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            d / d.norm()
        };
        for i in 0..n {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// Seeded random unitary matrix, for invariance experiments.
pub fn random_unitary_matrix(n: usize, seed: u64) -> Result<CMatrix> {
    if n == 0 {
        return Err(Error::Input("unitary matrix needs n >= 1".into()));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    Ok(random_unitary(n, &mut rng))
}

fn condition_number(m: &CMatrix) -> f64 {
    let Ok(sv) = crate::numkernel::singular_spectrum(m) else {
        return f64::INFINITY;
    };
    let max = sv.first().copied().unwrap_or(0.0);
    let min = sv.last().copied().unwrap_or(0.0);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Random invertible core with condition number at most
/// `EP_CORE_COND_CAP`: resampled a bounded number of times, then
/// repaired by clamping small singular values (only reachable at
/// dimensions far beyond what the suites draw).
fn conditioned_core<R: Rng>(r: usize, rng: &mut R) -> Result<CMatrix> {
    for _ in 0..64 {
        let b = ginibre(r, r, rng);
        if condition_number(&b) <= EP_CORE_COND_CAP {
            return Ok(b);
        }
    }
    let b = ginibre(r, r, rng);
    let f = crate::numkernel::full_svd(&b)?;
    let floor = f.singular.first().copied().unwrap_or(0.0) / EP_CORE_COND_CAP;
    let clamped = CVector::from_iterator(
        r,
        f.singular.iter().map(|&s| Complex64::new(s.max(floor), 0.0)),
    );
    Ok(&f.u * CMatrix::from_diagonal(&clamped) * f.v.adjoint())
}

/// Seeded random matrix with rank exactly r and equal range and
/// adjoint range: Q [[B, 0], [0, 0]] Q* for an invertible,
/// well-conditioned B and a random unitary Q.
pub fn random_ep(n: usize, r: usize, seed: u64) -> Result<OperatorMatrix> {
    if n == 0 {
        return Err(Error::Input("random EP matrix needs n >= 1".into()));
    }
    if r > n {
        return Err(Error::Input(format!("rank {r} exceeds dimension {n}")));
    }
    let label = format!("random EP n={n} r={r} seed={seed}");
    if r == 0 {
        return OperatorMatrix::new(CMatrix::zeros(n, n), label);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let b = conditioned_core(r, &mut rng)?;
    let q = random_unitary(n, &mut rng);
    let mut core = CMatrix::zeros(n, n);
    core.view_mut((0, 0), (r, r)).copy_from(&b);
    let a = &q * core * q.adjoint();
    OperatorMatrix::new(a, label)
}

/// The registered truncation families.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyKind {
    /// Block example with harmonic diagonal a_k = 1/k; generator(n) is 2n-dimensional.
    BlockHarmonic,
    /// Truncated unilateral shift.
    Shift,
    /// Truncated banded Toeplitz operator with a fixed symbol.
    Toeplitz(Vec<(i64, Complex64)>),
    /// diag(1, 1/2, ..., 1/n): normal, singular values accumulating at 0.
    DiagonalHarmonic,
}

/// Deterministic rule mapping a truncation size to a matrix, tagged
/// with the infinite-dimensional operator it approximates.
#[derive(Clone, Debug)]
pub struct TruncationFamily {
    kind: FamilyKind,
    label: String,
    description: String,
}

impl TruncationFamily {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    /// The family member at truncation size n.
    pub fn generate(&self, n: usize) -> Result<OperatorMatrix> {
        match &self.kind {
            FamilyKind::BlockHarmonic => {
                let entries: Vec<f64> = (1..=n).map(|k| 1.0 / k as f64).collect();
                block_example(&entries)
            }
            FamilyKind::Shift => truncated_shift(n),
            FamilyKind::Toeplitz(coeffs) => toeplitz_truncation(coeffs, n),
            FamilyKind::DiagonalHarmonic => {
                if n == 0 {
                    return Err(Error::Input("diagonal family needs n >= 1".into()));
                }
                let d = CVector::from_iterator(
                    n,
                    (1..=n).map(|k| Complex64::new(1.0 / k as f64, 0.0)),
                );
                OperatorMatrix::new(
                    CMatrix::from_diagonal(&d),
                    format!("diagonal(1/k) truncation n={n}"),
                )
            }
        }
    }
}

/// Looks up a registered family.
pub fn family_of(kind: FamilyKind) -> Result<TruncationFamily> {
    let (label, description) = match &kind {
        FamilyKind::BlockHarmonic => (
            "example1-block".to_string(),
            "truncations of the two-block operator (h1, h2) -> (A h1 + h2, 0) with A = diag(1/k); \
             its range is closed but the range of its square is not"
                .to_string(),
        ),
        FamilyKind::Shift => (
            "shift".to_string(),
            "truncations of the unilateral shift (an isometry; truncation kills the last column)".to_string(),
        ),
        FamilyKind::Toeplitz(coeffs) => {
            let symbol = normalize_symbol(coeffs);
            if symbol.is_empty() {
                return Err(Error::Input("Toeplitz symbol has no nonzero coefficients".into()));
            }
            (
                format!("toeplitz({})", symbol_text(&symbol)),
                "truncations of a banded Toeplitz operator".to_string(),
            )
        }
        FamilyKind::DiagonalHarmonic => (
            "diag-inv-k".to_string(),
            "diag(1, 1/2, 1/3, ...): normal with 0 a limit point of the spectrum, so its \
             infinite-dimensional limit does not have closed range"
                .to_string(),
        ),
    };
    Ok(TruncationFamily {
        kind,
        label,
        description,
    })
}
