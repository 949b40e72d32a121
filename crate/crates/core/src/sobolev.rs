//! The Fourier-symmetric Sobolev norm `‖f‖²_𝓗 = ∫x²|f|² dx + ∫k²|f̂|² dk`.
//!
//! In the Hermite basis the norm equals `2⟨f, Hf⟩ = 2 Σ (n + ½)|c_n|²`
//! ([`h_norm_sq_spectral`]). The quadrature route ([`h_norm_sq_quadrature`])
//! evaluates both moments directly, the momentum side through
//! [`fourier_diagonal`], and is kept independent of the spectral formula so
//! the two can be cross-checked.

use crate::error::{Error, Result};
use crate::hermite::{fourier_diagonal, HermiteExpansion, QuadratureRule};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Default relative agreement required between the two norm routes.
pub const DEFAULT_ROUTE_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub l2_sq: f64,
    pub h_sq_spectral: f64,
    pub h_sq_quadrature: f64,
    /// `∫ x² |f|² dx`
    pub x_moment: f64,
    /// `∫ k² |f̂|² dk`
    pub k_moment: f64,
    /// `‖f‖_𝓗 / ‖f‖_{L²}`; absent for the zero function.
    pub ratio: Option<f64>,
    pub tolerance: f64,
    pub routes_agree: bool,
}

/// Weighted mass `Σ n |c_n|²` above the ground state.
fn excited_weight(e: &HermiteExpansion) -> f64 {
    e.coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| n as f64 * c.norm_sqr())
        .sum()
}

/// `2 Σ (n + ½)|c_n|²`, accumulated as `Σ|c_n|² + 2 Σ n|c_n|²` so that the
/// ground-state contribution is exact.
pub fn h_norm_sq_spectral(e: &HermiteExpansion) -> f64 {
    e.l2_norm_sq() + 2.0 * excited_weight(e)
}

/// The 𝓗 inner product `2 Σ (n + ½) c̄_n d_n`. Expansions of different
/// degree are padded with zeros.
pub fn h_inner(e: &HermiteExpansion, d: &HermiteExpansion) -> Complex64 {
    e.coeffs()
        .iter()
        .zip(d.coeffs())
        .enumerate()
        .map(|(n, (c, dd))| c.conj() * dd * (2.0 * n as f64 + 1.0))
        .sum()
}

/// `∫ x² |f|² dx` by Gauss–Hermite quadrature of the evaluated expansion.
pub fn x_moment(e: &HermiteExpansion, rule: &QuadratureRule) -> f64 {
    rule.integrate(|x| x * x * e.eval_at(x).norm_sqr())
}

pub fn h_norm_sq_quadrature(e: &HermiteExpansion, rule: &QuadratureRule) -> Result<NormReport> {
    h_norm_sq_quadrature_with(e, rule, DEFAULT_ROUTE_TOL)
}

pub fn h_norm_sq_quadrature_with(
    e: &HermiteExpansion,
    rule: &QuadratureRule,
    rel_tol: f64,
) -> Result<NormReport> {
    let needed = 2 * e.degree() + 2;
    if rule.len() < needed {
        return Err(Error::Precondition(format!(
            "{} quadrature nodes cannot resolve degree {}; need at least {needed}",
            rule.len(),
            e.degree()
        )));
    }
    let l2_sq = e.l2_norm_sq();
    let h_sq_spectral = h_norm_sq_spectral(e);
    let x_m = x_moment(e, rule);
    let k_m = x_moment(&fourier_diagonal(e), rule);
    let h_sq_quadrature = x_m + k_m;
    let ratio = (l2_sq > 0.0).then(|| (h_sq_spectral / l2_sq).sqrt());
    let routes_agree = (h_sq_spectral - h_sq_quadrature).abs() <= rel_tol * h_sq_spectral.max(f64::MIN_POSITIVE)
        || (h_sq_spectral == 0.0 && h_sq_quadrature == 0.0);
    Ok(NormReport {
        l2_sq,
        h_sq_spectral,
        h_sq_quadrature,
        x_moment: x_m,
        k_moment: k_m,
        ratio,
        tolerance: rel_tol,
        routes_agree,
    })
}

/// `‖f‖_𝓗 / ‖f‖_{L²} = sqrt(1 + 2 Σ n|c_n|² / Σ|c_n|²)`, which is at least 1
/// and equals 1 exactly when all mass sits on `φ_0`.
pub fn uncertainty_ratio(e: &HermiteExpansion) -> Result<f64> {
    let l2 = e.l2_norm_sq();
    if l2 == 0.0 {
        return Err(Error::Domain("uncertainty ratio of the zero function".into()));
    }
    Ok((1.0 + 2.0 * excited_weight(e) / l2).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::gauss_hermite;
    use approx::assert_abs_diff_eq;

    fn unit(n: usize, deg: usize) -> HermiteExpansion {
        HermiteExpansion::unit(n, deg).unwrap()
    }

    #[test]
    fn spectral_examples() {
        assert_eq!(h_norm_sq_spectral(&unit(0, 2)), 1.0);
        assert_eq!(h_norm_sq_spectral(&unit(1, 2)), 3.0);
        assert_eq!(h_norm_sq_spectral(&HermiteExpansion::from_real(&[0.0, 0.0]).unwrap()), 0.0);
    }

    #[test]
    fn gaussian_moments() {
        let rule = gauss_hermite(16).unwrap();
        let r = h_norm_sq_quadrature(&unit(0, 0), &rule).unwrap();
        assert_abs_diff_eq!(r.x_moment, 0.5, epsilon = 1e-13);
        assert_abs_diff_eq!(r.k_moment, 0.5, epsilon = 1e-13);
        assert_abs_diff_eq!(r.h_sq_quadrature, 1.0, epsilon = 1e-13);
        assert_eq!(r.ratio, Some(1.0));
        assert!(r.routes_agree);
    }

    #[test]
    fn first_excited_state() {
        let rule = gauss_hermite(16).unwrap();
        let r = h_norm_sq_quadrature(&unit(1, 1), &rule).unwrap();
        assert!((r.h_sq_quadrature - 3.0).abs() < 1e-8 * 3.0);
        assert_eq!(r.h_sq_quadrature, r.x_moment + r.k_moment);
    }

    #[test]
    fn insufficient_quadrature() {
        let rule = gauss_hermite(9).unwrap();
        assert!(matches!(
            h_norm_sq_quadrature(&unit(4, 4), &rule),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(uncertainty_ratio(&unit(0, 3)).unwrap(), 1.0);
        assert_abs_diff_eq!(uncertainty_ratio(&unit(1, 3)).unwrap(), 3f64.sqrt(), epsilon = 1e-15);
        let s = 0.5f64.sqrt();
        let mixed = HermiteExpansion::from_real(&[s, s]).unwrap();
        assert_abs_diff_eq!(uncertainty_ratio(&mixed).unwrap(), 2f64.sqrt(), epsilon = 1e-15);
        assert!(matches!(
            uncertainty_ratio(&HermiteExpansion::from_real(&[0.0]).unwrap()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn h_orthogonality_of_basis() {
        for m in 0..8 {
            for n in 0..8 {
                let v = h_inner(&unit(m, 7), &unit(n, 7));
                let expect = if m == n { 2.0 * (n as f64 + 0.5) } else { 0.0 };
                assert_eq!(v, Complex64::new(expect, 0.0));
            }
        }
    }

    #[test]
    fn plancherel_split() {
        // ∫x²|f|² equals the momentum moment of the inverse transform, i.e.
        // the x-moment of f̂ read back through a second transform pair.
        let e = HermiteExpansion::new(
            (0..7).map(|n| Complex64::new(1.0 / (n as f64 + 1.0), 0.2 * n as f64)).collect(),
        )
        .unwrap();
        let rule = gauss_hermite(32).unwrap();
        let f_hat = fourier_diagonal(&e);
        let r = h_norm_sq_quadrature(&e, &rule).unwrap();
        let r_hat = h_norm_sq_quadrature(&f_hat, &rule).unwrap();
        // k-moment of f̂ is the x-moment of F²f = f(−x), same as that of f
        assert_abs_diff_eq!(r.x_moment, r_hat.k_moment, epsilon = 1e-8);
        assert_abs_diff_eq!(r.k_moment, r_hat.x_moment, epsilon = 1e-8);
    }
}
