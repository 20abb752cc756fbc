//! Completed Dirichlet-series products, entire and symmetric about
//! Re s = 1/2.
//!
//! Each function multiplies a Dirichlet series by the gamma and power
//! factors that make the product invariant under s -> 1-s.  Left of the
//! symmetry line every one of them switches to a reflected representation
//! in which the continuation of the underlying series is substituted
//! analytically.  The gamma factors that survive on the left differ from
//! the ones on the right, so comparing values across the line still tests
//! a genuine floating-point identity between distinct evaluations, never
//! the same arithmetic twice.

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::{bessel_k, dirichlet_beta, gamma_complex, zeta_complex, LIMIT_RADIUS};

/// Completed Riemann xi: xi(s) = 1/2 s(s-1) pi^{-s/2} Gamma(s/2) zeta(s).
///
/// Evaluated as (s-1) pi^{-s/2} Gamma(s/2+1) zeta(s), which removes the
/// pole at s = 0.  For Re s < -3/2 the remaining Gamma poles at the
/// negative even integers collide with the trivial zeros of zeta, so the
/// zeta reflection is substituted analytically first:
///
///   xi(s) = 1/2 s(s-1) pi^{s/2} 2^s Gamma(1-s) zeta(1-s) / Gamma(1-s/2).
///
/// Within [`LIMIT_RADIUS`] of s in {0, 1} the proven limit 1/2 is returned.
pub fn xi_closed_form(s: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    if s.norm() < LIMIT_RADIUS || (s - one).norm() < LIMIT_RADIUS {
        return Ok(Complex64::new(0.5, 0.0));
    }
    let ln_pi = std::f64::consts::PI.ln();
    if s.re >= -1.5 {
        let g = gamma_complex(0.5 * s + one)?;
        let z = zeta_complex(s)?;
        Ok((s - one) * (-0.5 * s * ln_pi).exp() * g * z)
    } else {
        let g_num = gamma_complex(one - s)?;
        let g_den = gamma_complex(one - 0.5 * s)?;
        let z = zeta_complex(one - s)?;
        let pw = (0.5 * s * ln_pi + s * std::f64::consts::LN_2).exp();
        Ok(0.5 * s * (s - one) * pw * g_num * z / g_den)
    }
}

/// Completed product of zeta and the odd-character L-series:
///
///   2 s(s-1) pi^{-s} Gamma(s) zeta(s) beta(s),
///
/// the Mellin companion of the hyperbolic-secant density, symmetric under
/// s -> 1-s, with value 1/2 at s in {0, 1}.
///
/// Right of Re s = 1/2 it is evaluated as written, with s Gamma(s) =
/// Gamma(s+1) absorbing the s factor.  Left of the line, substituting both
/// series reflections cancels every trigonometric factor and one gamma,
/// leaving
///
///   2 s(s-1) pi^{s-1} Gamma(1-s) zeta(1-s) beta(1-s),
///
/// which is smooth through the trivial zeros of zeta (the sin factor that
/// would meet them is already divided out).  The surviving gamma arguments
/// differ between the branches (s+1 against 1-s), so cross-line symmetry
/// checks remain informative.  Within [`LIMIT_RADIUS`] of s in {0, 1} the
/// proven limit 1/2 is returned.
pub fn xi_cosh_closed(s: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    if s.norm() < LIMIT_RADIUS || (s - one).norm() < LIMIT_RADIUS {
        return Ok(Complex64::new(0.5, 0.0));
    }
    let ln_pi = std::f64::consts::PI.ln();
    if s.re >= 0.5 {
        let g = gamma_complex(s + one)?;
        let z = zeta_complex(s)?;
        let b = dirichlet_beta(s)?;
        Ok(2.0 * (s - one) * (-s * ln_pi).exp() * g * z * b)
    } else {
        let g = gamma_complex(one - s)?;
        let z = zeta_complex(one - s)?;
        let b = dirichlet_beta(one - s)?;
        Ok(2.0 * s * (s - one) * ((s - one) * ln_pi).exp() * g * z * b)
    }
}

/// Completed odd-character L-series:
///
///   (4/pi)^{(s+1)/2} Gamma((s+1)/2) beta(s),
///
/// entire (the gamma poles at s = -1, -3, ... meet the trivial zeros of
/// beta), symmetric under s -> 1-s, with value 1 at s in {0, 1}.
///
/// Right of Re s = 1/2: as written.  Left: the trigonometric form of the
/// beta reflection is substituted and the resulting 0 * inf product
/// Gamma((s+1)/2) cos(pi s/2) is collapsed through the gamma reflection
/// formula into pi / Gamma((1-s)/2), leaving the everywhere-finite
///
///   pi (4/pi)^{(s+1)/2} (pi/2)^{s-1} Gamma(1-s) beta(1-s) / Gamma((1-s)/2).
///
/// No limit handling is needed: the left branch evaluates cleanly at the
/// pole-collision sites s = -1, -3, ..., and the gamma arguments still
/// differ across the line (duplication, not a rearrangement).
pub fn xi_beta_closed(s: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let ln_4_pi = (4.0 / std::f64::consts::PI).ln();
    if s.re >= 0.5 {
        let g = gamma_complex(0.5 * (s + one))?;
        let b = dirichlet_beta(s)?;
        Ok((0.5 * (s + one) * ln_4_pi).exp() * g * b)
    } else {
        let g_num = gamma_complex(one - s)?;
        let g_den = gamma_complex(0.5 * (one - s))?;
        let b = dirichlet_beta(one - s)?;
        let pw = (0.5 * (s + one) * ln_4_pi
            + (s - one) * (0.5 * std::f64::consts::PI).ln())
        .exp();
        Ok(std::f64::consts::PI * pw * g_num * b / g_den)
    }
}

/// Quotient of modified Bessel K values,
///
///   K_{(2s-1)/4}(a) / K_{1/4}(a),
///
/// the Mellin companion of the Bessel-normalized mixing family.  Entire in
/// s and symmetric under s -> 1-s because K is even in its order; the
/// Bessel routine canonicalizes the order sign, so the symmetry is exact
/// in floating point.  Value 1 at s in {0, 1} up to quotient accuracy.
pub fn xi_bessel_quotient(a: f64, s: Complex64) -> Result<Complex64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain {
            what: "xi_bessel_quotient",
            detail: format!("parameter a = {a} must be positive and finite"),
        });
    }
    let nu = 0.25 * (2.0 * s - Complex64::new(1.0, 0.0));
    let num = bessel_k(nu, a)?;
    let den = bessel_k(Complex64::new(0.25, 0.0), a)?;
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn xi_limits_at_zero_and_one() {
        assert_eq!(xi_closed_form(c(0.0, 0.0)).unwrap(), c(0.5, 0.0));
        assert_eq!(xi_closed_form(c(1.0, 0.0)).unwrap(), c(0.5, 0.0));
        assert_eq!(xi_cosh_closed(c(0.0, 0.0)).unwrap(), c(0.5, 0.0));
        assert_eq!(xi_cosh_closed(c(1.0, 0.0)).unwrap(), c(0.5, 0.0));
    }

    #[test]
    fn xi_half() {
        // xi(1/2) = -Gamma(1/4) zeta(1/2) / (8 pi^{1/4}), frozen from the
        // gamma and zeta oracles.
        let v = xi_closed_form(c(0.5, 0.0)).unwrap();
        assert!((v.re - 0.4971207781883141).abs() < 1e-12, "got {v}");
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn xi_at_two() {
        // xi(2) = pi/6
        let v = xi_closed_form(c(2.0, 0.0)).unwrap();
        assert!((v.re - std::f64::consts::PI / 6.0).abs() < 1e-14);
    }

    #[test]
    fn xi_symmetric_across_branches() {
        // s = -2 exercises the reflected branch against the direct branch
        // at 1 - s = 3; the only shared factor is zeta(3).
        let a = xi_closed_form(c(-2.0, 0.0)).unwrap();
        let b = xi_closed_form(c(3.0, 0.0)).unwrap();
        assert!((a - b).norm() < 1e-13 * b.norm(), "{a} vs {b}");
        assert!((b.re - 0.5739398940467555).abs() < 1e-12);
    }

    #[test]
    fn xi_functional_equation_complex() {
        for &(re, im) in &[(0.25, 3.0), (-0.8, 11.5), (2.0, 24.0), (-1.2, 0.4)] {
            let s = c(re, im);
            let a = xi_closed_form(s).unwrap();
            let b = xi_closed_form(c(1.0, 0.0) - s).unwrap();
            let scale = a.norm().max(b.norm()).max(1e-30);
            assert!((a - b).norm() < 1e-10 * scale, "fe residual at {s}: {a} vs {b}");
        }
    }

    #[test]
    fn cosh_spot_values() {
        // 30-digit oracle: 2 s(s-1) pi^{-s} Gamma(s) zeta(s) beta(s).
        let cases = [
            (c(2.0, 0.0), c(0.61064372945147934, 0.0)),
            (c(0.5, 0.0), c(0.48753311500024449, 0.0)),
            (c(2.5, 0.0), c(0.72527482867520009, 0.0)),
            (c(0.3, 2.0), c(0.32300550056220009, -0.02728222376851577)),
            (c(5.0, 10.0), c(-0.00961619038128943, -0.00554836040725428)),
        ];
        for (s, want) in cases {
            let v = xi_cosh_closed(s).unwrap();
            assert!((v - want).norm() < 1e-12 * want.norm().max(1.0), "at {s}: {v} vs {want}");
        }
    }

    #[test]
    fn cosh_left_branch_spot_values() {
        // Same oracle values approached from the reflected side.
        let a = xi_cosh_closed(c(-1.5, 0.0)).unwrap();
        assert!((a.re - 0.72527482867520009).abs() < 1e-12, "got {a}");
        let b = xi_cosh_closed(c(-4.0, -10.0)).unwrap();
        let want = c(-0.00961619038128943, -0.00554836040725428);
        assert!((b - want).norm() < 1e-12, "got {b}");
    }

    #[test]
    fn cosh_functional_equation_across_branches() {
        for &(re, im) in &[(0.3, 2.0), (-0.8, 2.2), (2.0, 14.0), (-1.99, 0.3), (0.499, 5.0)] {
            let s = c(re, im);
            let a = xi_cosh_closed(s).unwrap();
            let b = xi_cosh_closed(c(1.0, 0.0) - s).unwrap();
            let scale = a.norm().max(b.norm()).max(1.0);
            assert!((a - b).norm() < 1e-11 * scale, "fe residual at {s}: {a} vs {b}");
        }
    }

    #[test]
    fn cosh_branch_seam_is_continuous() {
        // Points a hair either side of the line, so the residual is branch
        // disagreement, not the derivative of the function itself.
        let a = xi_cosh_closed(c(0.5 - 1e-13, 3.0)).unwrap();
        let b = xi_cosh_closed(c(0.5 + 1e-13, 3.0)).unwrap();
        assert!((a - b).norm() < 1e-10 * b.norm(), "{a} vs {b}");
    }

    #[test]
    fn beta_spot_values() {
        // 30-digit oracle: (4/pi)^{(s+1)/2} Gamma((s+1)/2) beta(s).
        let cases = [
            (c(2.0, 0.0), c(1.16624361612327512, 0.0)),
            (c(0.5, 0.0), c(0.98071361405771350, 0.0)),
            (c(2.5, 0.0), c(1.33054950748917911, 0.0)),
            (c(0.3, 2.0), c(0.71320352486412105, -0.04689641022567073)),
            (c(5.0, 10.0), c(0.03294810146272221, 0.11880155011852321)),
            (c(-2.5, 0.0), c(1.91481150654940252, 0.0)),
        ];
        for (s, want) in cases {
            let v = xi_beta_closed(s).unwrap();
            assert!((v - want).norm() < 1e-12 * want.norm(), "at {s}: {v} vs {want}");
        }
    }

    #[test]
    fn beta_values_at_zero_and_one_are_exactly_representable() {
        // No limit snap involved: both branches evaluate to 1 within
        // rounding at the fixed points of the symmetry.
        let a = xi_beta_closed(c(0.0, 0.0)).unwrap();
        let b = xi_beta_closed(c(1.0, 0.0)).unwrap();
        assert!((a.re - 1.0).abs() < 1e-13 && a.im == 0.0, "got {a}");
        assert!((b.re - 1.0).abs() < 1e-13 && b.im == 0.0, "got {b}");
    }

    #[test]
    fn beta_finite_at_pole_collision_sites() {
        // Gamma((s+1)/2) has poles at s = -1, -3; beta has matching trivial
        // zeros.  The left branch must give the finite limit, equal by
        // symmetry to the value at 1 - s.
        for odd in [-1.0, -3.0, -5.0] {
            let a = xi_beta_closed(c(odd, 0.0)).unwrap();
            let b = xi_beta_closed(c(1.0 - odd, 0.0)).unwrap();
            assert!((a - b).norm() < 1e-12 * b.norm(), "at s = {odd}: {a} vs {b}");
        }
        let v = xi_beta_closed(c(-1.0, 0.0)).unwrap();
        assert!((v.re - 1.16624361612327512).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn beta_functional_equation_across_branches() {
        for &(re, im) in &[(0.3, 2.0), (-0.7, 3.1), (2.0, 20.0), (-1.01, 0.2), (0.49, 0.0)] {
            let s = c(re, im);
            let a = xi_beta_closed(s).unwrap();
            let b = xi_beta_closed(c(1.0, 0.0) - s).unwrap();
            let scale = a.norm().max(b.norm()).max(1.0);
            assert!((a - b).norm() < 1e-11 * scale, "fe residual at {s}: {a} vs {b}");
        }
    }

    #[test]
    fn beta_branch_seam_is_continuous() {
        // Same hair-width straddle as the cosh seam test.
        let a = xi_beta_closed(c(0.5 - 1e-13, 3.0)).unwrap();
        let b = xi_beta_closed(c(0.5 + 1e-13, 3.0)).unwrap();
        assert!((a - b).norm() < 1e-10 * b.norm(), "{a} vs {b}");
    }

    #[test]
    fn bessel_quotient_spot_values() {
        // K_{3/4}(1)/K_{1/4}(1) and K_{5/4}(1)/K_{1/4}(1); the second also
        // satisfies the recurrence K_{5/4} = K_{3/4} + (1/2) K_{1/4}.
        let q2 = xi_bessel_quotient(1.0, c(2.0, 0.0)).unwrap();
        assert!((q2.re - 1.19741739976576790).abs() < 1e-10, "got {q2}");
        let q3 = xi_bessel_quotient(1.0, c(3.0, 0.0)).unwrap();
        assert!((q3.re - 1.69741739976576790).abs() < 1e-10, "got {q3}");
        let qc = xi_bessel_quotient(2.0, c(0.3, 2.0)).unwrap();
        let want = c(0.80176292352494673, -0.03390282741543273);
        assert!((qc - want).norm() < 1e-10, "got {qc}");
    }

    #[test]
    fn bessel_quotient_symmetry_is_exact() {
        let s = c(0.3, 2.0);
        let a = xi_bessel_quotient(2.0, s).unwrap();
        let b = xi_bessel_quotient(2.0, c(1.0, 0.0) - s).unwrap();
        assert_eq!(a, b);
        let v = xi_bessel_quotient(1.0, c(0.0, 0.0)).unwrap();
        assert!((v.re - 1.0).abs() < 1e-12 && v.im == 0.0, "got {v}");
    }

    #[test]
    fn bessel_quotient_rejects_bad_parameter() {
        assert!(xi_bessel_quotient(0.0, c(2.0, 0.0)).is_err());
        assert!(xi_bessel_quotient(-1.0, c(2.0, 0.0)).is_err());
    }
}
