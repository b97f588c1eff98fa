//! Exact algebra of banded, eventually-Toeplitz operators on one-sided
//! l2: a finitely supported symbol (offset +1 is the subdiagonal, the
//! shift direction) plus a finite square top-left correction. The class
//! is closed under sums, products, scalars and adjoints, so shift
//! identities such as U*U = I and UU* = I - e1e1* (index 0 here) are
//! verified without truncation error.
//!
//! Products are assembled so that entries outside the true correction
//! window cancel to exact floating-point zeros: the stored convolution
//! coefficients are summed in the same order as the direct corner sums
//! they are subtracted from.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::matop::{normalize_symbol, symbol_text, OperatorMatrix};
use crate::numkernel::{is_psd_scaled, operator_norm, ToleranceConfig};
use crate::{CMatrix, CVector, Error, Result};

/// Banded symbol plus finite correction; the entry at (i, k) is the
/// symbol coefficient at offset i - k, plus the correction when both
/// indices fall inside its window.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiToeplitzOperator {
    symbol: Vec<(i64, Complex64)>,
    correction: CMatrix,
}

fn trim_correction(c: &CMatrix) -> CMatrix {
    let zero = Complex64::new(0.0, 0.0);
    let mut w = c.nrows();
    while w > 0 {
        let clear = (0..w).all(|k| c[(w - 1, k)] == zero && c[(k, w - 1)] == zero);
        if clear {
            w -= 1;
        } else {
            break;
        }
    }
    c.view((0, 0), (w, w)).into_owned()
}

fn embed(c: &CMatrix, w: usize) -> CMatrix {
    let mut out = CMatrix::zeros(w, w);
    out.view_mut((0, 0), (c.nrows(), c.ncols())).copy_from(c);
    out
}

impl QuasiToeplitzOperator {
    fn from_parts(symbol: Vec<(i64, Complex64)>, correction: CMatrix) -> Self {
        Self {
            symbol,
            correction: trim_correction(&correction),
        }
    }

    /// The zero operator: empty symbol, empty correction.
    pub fn zero() -> Self {
        Self {
            symbol: Vec::new(),
            correction: CMatrix::zeros(0, 0),
        }
    }

    /// The identity.
    pub fn identity() -> Self {
        Self {
            symbol: vec![(0, Complex64::new(1.0, 0.0))],
            correction: CMatrix::zeros(0, 0),
        }
    }

    /// The unilateral shift U (ones on the subdiagonal).
    pub fn shift() -> Self {
        Self {
            symbol: vec![(1, Complex64::new(1.0, 0.0))],
            correction: CMatrix::zeros(0, 0),
        }
    }

    pub fn symbol(&self) -> &[(i64, Complex64)] {
        &self.symbol
    }

    pub fn correction(&self) -> &CMatrix {
        &self.correction
    }

    /// Side length of the correction window (0 for pure Toeplitz).
    pub fn window(&self) -> usize {
        self.correction.nrows()
    }

    /// Largest absolute symbol offset.
    pub fn bandwidth(&self) -> usize {
        self.symbol
            .iter()
            .map(|&(j, _)| j.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.symbol.is_empty() && self.window() == 0
    }

    fn coeff(&self, j: i64) -> Complex64 {
        self.symbol
            .iter()
            .find(|&&(o, _)| o == j)
            .map(|&(_, c)| c)
            .unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    /// Matrix entry at row i, column k.
    pub fn entry(&self, i: usize, k: usize) -> Complex64 {
        let mut v = self.coeff(i as i64 - k as i64);
        let w = self.window();
        if i < w && k < w {
            v += self.correction[(i, k)];
        }
        v
    }

    /// Triangle-inequality bound on the operator norm: the sum of
    /// absolute symbol coefficients plus the correction norm.
    pub fn norm_upper_bound(&self) -> f64 {
        let sym: f64 = self.symbol.iter().map(|(_, c)| c.norm()).sum();
        let corr = if self.window() == 0 {
            0.0
        } else {
            operator_norm(&self.correction)
        };
        sym + corr
    }

    /// Exact image of a finitely supported vector; the output carries
    /// the full support of the result.
    pub fn apply(&self, v: &CVector) -> CVector {
        let n = v.len();
        let w = self.window();
        let out_len = (n + self.bandwidth()).max(w).max(1);
        let mut y = CVector::zeros(out_len);
        for &(j, d) in &self.symbol {
            for k in 0..n {
                let i = k as i64 + j;
                if i >= 0 && (i as usize) < out_len {
                    y[i as usize] += d * v[k];
                }
            }
        }
        for i in 0..w {
            for k in 0..w.min(n) {
                y[i] += self.correction[(i, k)] * v[k];
            }
        }
        y
    }
}

impl fmt::Display for QuasiToeplitzOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.symbol.is_empty() {
            return write!(f, "correction[{0}x{0}]", self.window());
        }
        write!(f, "{}", symbol_text(&self.symbol))?;
        if self.window() > 0 {
            write!(f, " + correction[{0}x{0}]", self.window())?;
        }
        Ok(())
    }
}

/// Pure Toeplitz operator with the given symbol and no correction.
pub fn qt_from_symbol(coeffs: &[(i64, Complex64)]) -> Result<QuasiToeplitzOperator> {
    let symbol = normalize_symbol(coeffs);
    if symbol.is_empty() {
        return Err(Error::Input("symbol has no nonzero coefficients".into()));
    }
    if !symbol
        .iter()
        .all(|(_, c)| c.re.is_finite() && c.im.is_finite())
    {
        return Err(Error::Input("symbol has non-finite coefficients".into()));
    }
    Ok(QuasiToeplitzOperator {
        symbol,
        correction: CMatrix::zeros(0, 0),
    })
}

/// Exact product. The symbol is the convolution of the factor symbols;
/// the correction is evaluated on an over-approximated window (both
/// windows plus both bandwidths) and trimmed back to canonical form.
pub fn qt_multiply(
    x: &QuasiToeplitzOperator,
    y: &QuasiToeplitzOperator,
) -> QuasiToeplitzOperator {
    let offsets: BTreeSet<i64> = x
        .symbol
        .iter()
        .flat_map(|&(jx, _)| y.symbol.iter().map(move |&(jy, _)| jx + jy))
        .collect();
    // Sum each convolution coefficient with x-offsets descending: the
    // direct sums below iterate the intermediate index ascending, which
    // visits x-offsets in descending order, and identical summation
    // order makes the subtraction cancel exactly.
    let mut symbol: Vec<(i64, Complex64)> = Vec::new();
    for &j in &offsets {
        let mut c = Complex64::new(0.0, 0.0);
        for &(jx, cx) in x.symbol.iter().rev() {
            let cy = y.coeff(j - jx);
            c += cx * cy;
        }
        if c != Complex64::new(0.0, 0.0) {
            symbol.push((j, c));
        }
    }

    let w = x.window() + y.window() + x.bandwidth() + y.bandwidth();
    let reach = w + x.bandwidth();
    let mut corr = CMatrix::zeros(w, w);
    for i in 0..w {
        for k in 0..w {
            let mut s = Complex64::new(0.0, 0.0);
            for m in 0..reach {
                s += x.entry(i, m) * y.entry(m, k);
            }
            // Full-line convolution coefficient, same summation order
            // (intermediate index ascending, negative indices included).
            let j = i as i64 - k as i64;
            let mut t = Complex64::new(0.0, 0.0);
            for &(jx, cx) in x.symbol.iter().rev() {
                t += cx * y.coeff(j - jx);
            }
            corr[(i, k)] = s - t;
        }
    }
    let mut full_symbol = symbol;
    full_symbol.sort_by_key(|&(j, _)| j);
    QuasiToeplitzOperator::from_parts(full_symbol, corr)
}

/// Exact sum.
pub fn qt_add(
    x: &QuasiToeplitzOperator,
    y: &QuasiToeplitzOperator,
) -> QuasiToeplitzOperator {
    let mut terms: Vec<(i64, Complex64)> = x.symbol.clone();
    terms.extend_from_slice(&y.symbol);
    let symbol = normalize_symbol(&terms);
    let w = x.window().max(y.window());
    let corr = embed(&x.correction, w) + embed(&y.correction, w);
    QuasiToeplitzOperator::from_parts(symbol, corr)
}

/// Exact scalar multiple.
pub fn qt_scale(c: Complex64, x: &QuasiToeplitzOperator) -> QuasiToeplitzOperator {
    let symbol = normalize_symbol(
        &x.symbol
            .iter()
            .map(|&(j, d)| (j, c * d))
            .collect::<Vec<_>>(),
    );
    QuasiToeplitzOperator::from_parts(symbol, x.correction.map(|d| c * d))
}

/// Exact adjoint: offsets negated and conjugated, correction
/// conjugate-transposed.
pub fn qt_adjoint(x: &QuasiToeplitzOperator) -> QuasiToeplitzOperator {
    let mut symbol: Vec<(i64, Complex64)> =
        x.symbol.iter().map(|&(j, c)| (-j, c.conj())).collect();
    symbol.sort_by_key(|&(j, _)| j);
    QuasiToeplitzOperator::from_parts(symbol, x.correction.adjoint())
}

/// k-th power by repeated exact multiplication; the 0-th power is the
/// identity.
pub fn qt_power(x: &QuasiToeplitzOperator, k: usize) -> QuasiToeplitzOperator {
    let mut acc = QuasiToeplitzOperator::identity();
    for _ in 0..k {
        acc = qt_multiply(&acc, x);
    }
    acc
}

/// X*X - XX* as a finite Hermitian matrix. The Toeplitz parts commute,
/// so the symbol of the difference must vanish; a material residue
/// there means the algebra itself is broken.
pub fn self_commutator(x: &QuasiToeplitzOperator) -> Result<CMatrix> {
    let xs = qt_adjoint(x);
    let lhs = qt_multiply(&xs, x);
    let rhs = qt_multiply(x, &xs);
    let diff = qt_add(&lhs, &qt_scale(Complex64::new(-1.0, 0.0), &rhs));
    let scale = x.norm_upper_bound().powi(2).max(1.0);
    let symbol_residue = diff
        .symbol
        .iter()
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max);
    if symbol_residue > 1e-14 * scale {
        return Err(Error::Internal(format!(
            "self-commutator symbol did not cancel (residue {symbol_residue:.3e})"
        )));
    }
    let c = diff.correction;
    let skew = operator_norm(&(&c - c.adjoint()));
    if skew > 1e-14 * scale {
        return Err(Error::Internal(format!(
            "self-commutator correction is not Hermitian (skew {skew:.3e})"
        )));
    }
    Ok(c)
}

/// PSD test on the exact self-commutator, judged against the squared
/// operator-norm bound of X. Returns the verdict and the smallest
/// commutator eigenvalue.
pub fn qt_is_hyponormal(
    x: &QuasiToeplitzOperator,
    tol: &ToleranceConfig,
) -> Result<(bool, f64)> {
    let c = self_commutator(x)?;
    if c.nrows() == 0 {
        return Ok((true, 0.0));
    }
    let scale = x.norm_upper_bound().powi(2);
    let (ok, window_min) = is_psd_scaled(&c, scale, tol)?;
    // Outside the finite window the commutator acts as 0, so 0 always
    // belongs to its spectrum.
    Ok((ok, window_min.min(0.0)))
}

/// Result of comparing two quasi-Toeplitz operators.
#[derive(Clone, Copy, Debug)]
pub struct VerifyOutcome {
    pub equal: bool,
    /// Largest coefficient difference over the union of symbol offsets.
    pub symbol_residual: f64,
    /// Operator-norm difference of the corrections on a common window.
    pub correction_residual: f64,
}

/// Equality check: symbols must agree coefficient-wise within 1e-14,
/// corrections within the residual tolerance on a common window.
pub fn qt_verify_equal(
    x: &QuasiToeplitzOperator,
    y: &QuasiToeplitzOperator,
    tol: &ToleranceConfig,
) -> VerifyOutcome {
    let offsets: BTreeSet<i64> = x
        .symbol
        .iter()
        .chain(y.symbol.iter())
        .map(|&(j, _)| j)
        .collect();
    let symbol_residual = offsets
        .iter()
        .map(|&j| (x.coeff(j) - y.coeff(j)).norm())
        .fold(0.0, f64::max);
    let w = x.window().max(y.window());
    let correction_residual = if w == 0 {
        0.0
    } else {
        operator_norm(&(embed(&x.correction, w) - embed(&y.correction, w)))
    };
    let corr_scale = 1.0_f64
        .max(if x.window() > 0 { operator_norm(&x.correction) } else { 0.0 })
        .max(if y.window() > 0 { operator_norm(&y.correction) } else { 0.0 });
    VerifyOutcome {
        equal: symbol_residual <= 1e-14
            && correction_residual <= tol.residual_rtol * corr_scale,
        symbol_residual,
        correction_residual,
    }
}

/// Leading n-by-n compression. The size must cover the correction
/// window and exceed the bandwidth so the compression determines the
/// operator's banded structure.
pub fn qt_truncate(x: &QuasiToeplitzOperator, n: usize) -> Result<OperatorMatrix> {
    if n < x.window() || n <= x.bandwidth() {
        return Err(Error::Input(format!(
            "truncation size {n} too small for window {} and bandwidth {}",
            x.window(),
            x.bandwidth()
        )));
    }
    if n == 0 {
        return Err(Error::Input("truncation needs n >= 1".into()));
    }
    let m = CMatrix::from_fn(n, n, |i, k| x.entry(i, k));
    OperatorMatrix::new(m, format!("qt truncation n={n} of {x}"))
}

/// Outcome of the bounded-below refutation probe.
#[derive(Clone, Copy, Debug)]
pub struct ProbeOutcome {
    /// True when some sampled vector gave ||Xv|| / ||v|| < c - 1e-12.
    pub falsified: bool,
    /// Minimum observed ratio ||Xv|| / ||v||.
    pub worst_ratio: f64,
    /// Support size of the worst sample.
    pub worst_support: usize,
    pub trials: usize,
}

fn norm_squared(v: &CVector) -> f64 {
    let mut s = 0.0;
    for z in v.iter() {
        s += z.norm_sqr();
    }
    s
}

/// Samples seeded random vectors supported on the first N coordinates
/// (N drawn up to max_support) and reports the minimum of
/// ||Xv|| / ||v||. A ratio below c - 1e-12 falsifies the claim that X
/// is bounded below by c; never falsifying proves nothing.
pub fn qt_bounded_below_probe(
    x: &QuasiToeplitzOperator,
    c: f64,
    trials: usize,
    max_support: usize,
    seed: u64,
) -> Result<ProbeOutcome> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Input("bound c must be positive".into()));
    }
    if trials == 0 || max_support == 0 {
        return Err(Error::Input("trials and max_support must be >= 1".into()));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut worst_ratio = f64::INFINITY;
    let mut worst_support = 0;
    for _ in 0..trials {
        let n = rng.random_range(1..=max_support);
        let mut v = CVector::zeros(n);
        loop {
            for k in 0..n {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                v[k] = Complex64::new(re, im);
            }
            if norm_squared(&v) > 0.0 {
                break;
            }
        }
        let y = x.apply(&v);
        let ratio = (norm_squared(&y) / norm_squared(&v)).sqrt();
        if ratio < worst_ratio {
            worst_ratio = ratio;
            worst_support = n;
        }
    }
    Ok(ProbeOutcome {
        falsified: worst_ratio < c - 1e-12,
        worst_ratio,
        worst_support,
        trials,
    })
}
