//! Closed-range diagnostics over truncation families: curves of
//! smallest nonzero singular values across sizes and powers, a
//! documented heuristic classifier for their limiting behavior, and
//! the bounded-below certificate for an operator restricted to the
//! range of its adjoint.

use crate::matop::TruncationFamily;
use crate::numkernel::{
    numerical_rank, orthonormal_range, smallest_nonzero_singular, smallest_singular,
    ToleranceConfig,
};
use crate::{CMatrix, CVector, Error, Result};
/// Plateau tolerance: the inspection window counts as stable when its
/// values vary by less than 10%.
const PLATEAU_VARIATION: f64 = 0.10;
/// A curve counts as decaying only when the window drops by at least
/// this factor.
const DROP_FACTOR: f64 = 5.0;
/// Stability additionally demands the plateau sit above this absolute
/// floor, so roundoff-sized plateaus are not certified.
const STABLE_ABS_FLOOR: f64 = 1e-6;

/// One point of a sigma curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub n: usize,
    /// Smallest nonzero singular value; absent when the matrix is
    /// numerically zero.
    pub sigma: Option<f64>,
    pub rank: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    Stable,
    Decaying,
    Inconclusive,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Stable => "stable",
            Classification::Decaying => "decaying",
            Classification::Inconclusive => "inconclusive",
        }
    }
}

/// Verdict over a sigma curve: a certified plateau, a fitted decay, or
/// neither.
#[derive(Clone, Debug)]
pub struct RangeDiagnosis {
    pub curve: Vec<CurvePoint>,
    pub classification: Classification,
    /// Plateau value (window minimum) when stable.
    pub stable_floor: Option<f64>,
    /// Least-squares log-log exponent alpha (sigma ~ n^-alpha) when decaying.
    pub fitted_decay_exponent: Option<f64>,
}

/// Smallest nonzero singular value and numerical rank of the k-th
/// power of each family member. Sizes must be strictly increasing.
pub fn sigma_curve(
    family: &TruncationFamily,
    sizes: &[usize],
    power: usize,
    tol: &ToleranceConfig,
) -> Result<Vec<CurvePoint>> {
    if power == 0 {
        return Err(Error::Input("power must be >= 1".into()));
    }
    if sizes.is_empty() {
        return Err(Error::Input("sizes list is empty".into()));
    }
    if !sizes.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Input("sizes must be strictly increasing".into()));
    }
    let mut curve = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let m = family.generate(n)?.power(power);
        let rank = numerical_rank(m.matrix(), tol)?;
        let sigma = if rank == 0 {
            None
        } else {
            Some(smallest_nonzero_singular(m.matrix(), tol)?)
        };
        curve.push(CurvePoint { n, sigma, rank });
    }
    Ok(curve)
}

fn fit_decay_exponent(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0.ln()).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for &(x, y) in points {
        let dx = x.ln() - mean_x;
        cov += dx * (y.ln() - mean_y);
        var += dx * dx;
    }
    -(cov / var)
}

/// Heuristic verdict on the limiting behavior of a sigma curve,
/// inspecting the last half of the points to skip small-size
/// transients. Stable means the window varies by under 10% above an
/// absolute 1e-6 floor; decaying means the window is strictly
/// decreasing and the full curve drops by at least a factor of 5,
/// with the exponent fit on the window in log-log coordinates.
pub fn classify_closed_range(curve: &[CurvePoint]) -> Result<RangeDiagnosis> {
    if curve.len() < 4 {
        return Err(Error::Input(format!(
            "classification needs at least 4 curve points, got {}",
            curve.len()
        )));
    }
    let window = &curve[curve.len() / 2..];
    let sigmas: Option<Vec<(f64, f64)>> = window
        .iter()
        .map(|p| p.sigma.map(|s| (p.n as f64, s)))
        .collect();
    let Some(sigmas) = sigmas else {
        return Ok(RangeDiagnosis {
            curve: curve.to_vec(),
            classification: Classification::Inconclusive,
            stable_floor: None,
            fitted_decay_exponent: None,
        });
    };

    let min = sigmas.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let max = sigmas.iter().map(|p| p.1).fold(0.0, f64::max);

    if min > STABLE_ABS_FLOOR && (max - min) <= PLATEAU_VARIATION * max {
        return Ok(RangeDiagnosis {
            curve: curve.to_vec(),
            classification: Classification::Stable,
            stable_floor: Some(min),
            fitted_decay_exponent: None,
        });
    }

    let strictly_decreasing = sigmas.windows(2).all(|w| w[1].1 < w[0].1);
    let first = curve
        .iter()
        .find_map(|p| p.sigma)
        .unwrap_or(0.0);
    let last = sigmas.last().map(|p| p.1).unwrap_or(0.0);
    if strictly_decreasing && last * DROP_FACTOR <= first {
        return Ok(RangeDiagnosis {
            curve: curve.to_vec(),
            classification: Classification::Decaying,
            stable_floor: None,
            fitted_decay_exponent: Some(fit_decay_exponent(&sigmas)),
        });
    }

    Ok(RangeDiagnosis {
        curve: curve.to_vec(),
        classification: Classification::Inconclusive,
        stable_floor: None,
        fitted_decay_exponent: None,
    })
}

/// Certificate that A is bounded below on ran A*: the restricted
/// smallest singular value c, and whether the squared operator obeys
/// ||A^2 h|| >= c^2 ||h|| there.
#[derive(Clone, Debug)]
pub struct BoundedBelowCertificate {
    /// Smallest singular value of A restricted to ran A*.
    pub c: f64,
    pub verified_power_bound: bool,
    /// Exact minimum of ||A^2 h|| over unit h in ran A*.
    pub power_floor: f64,
}

/// Failure record: the restriction constant was positive, yet some
/// unit vector in ran A* breaks the squared bound.
#[derive(Clone, Debug)]
pub struct CrlViolation {
    pub c: f64,
    pub power_floor: f64,
    /// Unit vector in ran A* minimizing ||A^2 h||.
    pub witness: CVector,
}

#[derive(Clone, Debug)]
pub enum CrlOutcome {
    Certified(BoundedBelowCertificate),
    Violated(CrlViolation),
}

/// Checks the bounded-below chain on ran A*: c = sigma_min(A Q) for Q
/// an orthonormal basis of ran A*, then the exact minimum of
/// ||A^2 h|| over unit h in ran A* against c^2 (1 - 1e-8). Posinormal
/// matrices must certify; the violation branch carries the minimizing
/// vector.
pub fn lemma_crl_check(m: &CMatrix, tol: &ToleranceConfig) -> Result<CrlOutcome> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::Input(format!(
            "bounded-below check needs a nonempty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let ran_adj = orthonormal_range(&m.adjoint(), tol)?;
    if ran_adj.is_trivial() {
        return Err(Error::Degenerate(
            "matrix is numerically zero; ran A* is trivial".into(),
        ));
    }
    let q = ran_adj.basis();
    let restricted = m * q;
    // A is injective on ran A* (ker A is orthogonal to it), so the
    // restriction must have full column rank; anything else means the
    // rank decisions are inconsistent.
    if numerical_rank(&restricted, tol)? != ran_adj.dim() {
        return Err(Error::Internal(
            "A restricted to ran A* lost rank, contradicting ker A ⊥ ran A*".into(),
        ));
    }
    let c = smallest_singular(&restricted);
    let squared = m * m * q;
    let f = crate::numkernel::full_svd(&squared)?;
    let arg_min = f.singular.len() - 1;
    let power_floor = f.singular[arg_min];
    if power_floor >= c * c * (1.0 - 1e-8) {
        Ok(CrlOutcome::Certified(BoundedBelowCertificate {
            c,
            verified_power_bound: true,
            power_floor,
        }))
    } else {
        let witness = q * f.v.column(arg_min);
        Ok(CrlOutcome::Violated(CrlViolation {
            c,
            power_floor,
            witness,
        }))
    }
}

/// One diagnosis per power 1..k_max.
#[derive(Clone, Debug)]
pub struct PowerDiagnosis {
    pub k: usize,
    pub diagnosis: RangeDiagnosis,
}

/// Sigma curves and classifications for every power up to k_max.
pub fn power_range_report(
    family: &TruncationFamily,
    k_max: usize,
    sizes: &[usize],
    tol: &ToleranceConfig,
) -> Result<Vec<PowerDiagnosis>> {
    if k_max == 0 {
        return Err(Error::Input("k_max must be >= 1".into()));
    }
    (1..=k_max)
        .map(|k| {
            let curve = sigma_curve(family, sizes, k, tol)?;
            Ok(PowerDiagnosis {
                k,
                diagnosis: classify_closed_range(&curve)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matop::{family_of, jordan_block, random_ep, FamilyKind};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn c64(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn sizes() -> Vec<usize> {
        vec![4, 8, 16, 32, 64, 128, 256]
    }

    fn identity_family() -> TruncationFamily {
        family_of(FamilyKind::Toeplitz(vec![(0, c64(1.0))])).unwrap()
    }

    #[test]
    fn identity_curve_is_flat_at_one() {
        let t = tol();
        let fam = identity_family();
        for k in [1usize, 3] {
            let curve = sigma_curve(&fam, &sizes(), k, &t).unwrap();
            for p in &curve {
                assert_eq!(p.rank, p.n);
                assert_abs_diff_eq!(p.sigma.unwrap(), 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn sigma_curve_validates_arguments() {
        let t = tol();
        let fam = identity_family();
        assert!(sigma_curve(&fam, &sizes(), 0, &t).is_err());
        assert!(sigma_curve(&fam, &[], 1, &t).is_err());
        assert!(sigma_curve(&fam, &[8, 4], 1, &t).is_err());
    }

    #[test]
    fn block_family_first_power_matches_closed_form() {
        let t = tol();
        let fam = family_of(FamilyKind::BlockHarmonic).unwrap();
        let curve = sigma_curve(&fam, &sizes(), 1, &t).unwrap();
        for p in &curve {
            let nf = p.n as f64;
            let expected = (1.0 + 1.0 / (nf * nf)).sqrt();
            let got = p.sigma.unwrap();
            assert!((got - expected).abs() / expected <= 1e-10);
            assert!((1.0..=2.0_f64.sqrt() + 1e-12).contains(&got));
            assert_eq!(p.rank, p.n);
        }
    }

    #[test]
    fn block_family_square_decays_like_inverse_size() {
        let t = tol();
        let fam = family_of(FamilyKind::BlockHarmonic).unwrap();
        let curve = sigma_curve(&fam, &sizes(), 2, &t).unwrap();
        for p in &curve {
            let nf = p.n as f64;
            let expected = (nf.powi(-2) + nf.powi(-4)).sqrt();
            assert!((p.sigma.unwrap() - expected).abs() / expected <= 1e-10);
        }
        let d = classify_closed_range(&curve).unwrap();
        assert_eq!(d.classification, Classification::Decaying);
        let alpha = d.fitted_decay_exponent.unwrap();
        assert!((alpha - 1.0).abs() <= 0.1, "alpha = {alpha}");
    }

    #[test]
    fn block_family_dichotomy() {
        let t = tol();
        let fam = family_of(FamilyKind::BlockHarmonic).unwrap();
        let report = power_range_report(&fam, 2, &sizes(), &t).unwrap();
        assert_eq!(report[0].diagnosis.classification, Classification::Stable);
        assert!(report[0].diagnosis.stable_floor.unwrap() >= 1.0 - 1e-12);
        assert_eq!(report[1].diagnosis.classification, Classification::Decaying);
    }

    #[test]
    fn diagonal_family_decays() {
        let t = tol();
        let fam = family_of(FamilyKind::DiagonalHarmonic).unwrap();
        let curve = sigma_curve(&fam, &sizes(), 1, &t).unwrap();
        for p in &curve {
            assert_abs_diff_eq!(p.sigma.unwrap(), 1.0 / p.n as f64, epsilon = 1e-15);
        }
        let d = classify_closed_range(&curve).unwrap();
        assert_eq!(d.classification, Classification::Decaying);
        assert_abs_diff_eq!(d.fitted_decay_exponent.unwrap(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn decay_verdict_survives_a_short_ladder() {
        let t = tol();
        let fam = family_of(FamilyKind::DiagonalHarmonic).unwrap();
        // Six points: the last-half window spans only a 4x drop, below
        // the factor-5 bar, so the verdict must rest on the full curve.
        let curve = sigma_curve(&fam, &[4, 8, 16, 32, 64, 128], 1, &t).unwrap();
        let d = classify_closed_range(&curve).unwrap();
        assert_eq!(d.classification, Classification::Decaying);
        assert_abs_diff_eq!(d.fitted_decay_exponent.unwrap(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn shift_family_powers_are_stable() {
        let t = tol();
        let fam = family_of(FamilyKind::Shift).unwrap();
        let report = power_range_report(&fam, 3, &sizes(), &t).unwrap();
        for pd in &report {
            assert_eq!(pd.diagnosis.classification, Classification::Stable);
            assert_abs_diff_eq!(pd.diagnosis.stable_floor.unwrap(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn nilpotent_powers_are_inconclusive() {
        let t = tol();
        let fam = family_of(FamilyKind::Shift).unwrap();
        // U_n^n = 0 for every size in the list.
        let curve = sigma_curve(&fam, &[4, 5, 6, 7], 8, &t).unwrap();
        for p in &curve {
            assert_eq!(p.rank, 0);
            assert!(p.sigma.is_none());
        }
        let d = classify_closed_range(&curve).unwrap();
        assert_eq!(d.classification, Classification::Inconclusive);
    }

    #[test]
    fn classify_needs_enough_points() {
        let curve = vec![
            CurvePoint { n: 4, sigma: Some(1.0), rank: 4 },
            CurvePoint { n: 8, sigma: Some(1.0), rank: 8 },
        ];
        assert!(classify_closed_range(&curve).is_err());
    }

    #[test]
    fn crl_certifies_unitary_and_ep() {
        let t = tol();
        let id = CMatrix::identity(4, 4);
        match lemma_crl_check(&id, &t).unwrap() {
            CrlOutcome::Certified(cert) => {
                assert_abs_diff_eq!(cert.c, 1.0, epsilon = 1e-12);
                assert!(cert.verified_power_bound);
                assert_abs_diff_eq!(cert.power_floor, 1.0, epsilon = 1e-12);
            }
            CrlOutcome::Violated(v) => panic!("unexpected violation: {v:?}"),
        }

        let a = random_ep(6, 3, 9).unwrap();
        match lemma_crl_check(a.matrix(), &t).unwrap() {
            CrlOutcome::Certified(cert) => {
                assert!(cert.c > 0.0);
                assert!(cert.power_floor >= cert.c * cert.c * (1.0 - 1e-8));
            }
            CrlOutcome::Violated(v) => panic!("EP instance should certify: {v:?}"),
        }
    }

    #[test]
    fn crl_violation_for_nilpotent_jordan() {
        let t = tol();
        let j = jordan_block(2, Complex64::new(0.0, 0.0)).unwrap();
        match lemma_crl_check(j.matrix(), &t).unwrap() {
            CrlOutcome::Violated(v) => {
                assert_abs_diff_eq!(v.c, 1.0, epsilon = 1e-12);
                assert_abs_diff_eq!(v.power_floor, 0.0, epsilon = 1e-12);
                // The witness is a unit vector in ran A*, the span of
                // the last coordinate axis.
                assert_abs_diff_eq!(v.witness.norm(), 1.0, epsilon = 1e-12);
                assert_abs_diff_eq!(v.witness[0].norm(), 0.0, epsilon = 1e-12);
            }
            CrlOutcome::Certified(cert) => panic!("nilpotent block cannot certify: {cert:?}"),
        }
    }

    #[test]
    fn crl_rejects_zero_matrix() {
        let t = tol();
        let zero = CMatrix::zeros(3, 3);
        assert!(matches!(
            lemma_crl_check(&zero, &t),
            Err(Error::Degenerate(_))
        ));
    }
}
