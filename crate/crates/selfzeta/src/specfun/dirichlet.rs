//! Dirichlet beta (the L function of the odd character mod 4),
//!
//!   beta(s) = sum_{n>=0} (-1)^n (2n+1)^{-s},
//!
//! entire in s.  Right of Re s = 1/2 the alternating series is accelerated
//! with the same Chebyshev weights as the zeta path; to the left the
//! reflection
//!
//!   beta(s) = (4/pi)^{1/2 - s} Gamma(1 - s/2) / Gamma((1+s)/2) beta(1-s)
//!
//! applies, with the gamma quotient routed through the entire reciprocal
//! gamma so the trivial zeros at s = -1, -3, -5, ... are exact.

use num_complex::Complex64;

use super::{cvz_alternating, cvz_terms, gamma_complex, rgamma};
use crate::error::Result;

/// beta(s) anywhere in the complex plane.
pub fn dirichlet_beta(s: Complex64) -> Result<Complex64> {
    if s.re >= 0.5 {
        return Ok(beta_series(s));
    }
    let one = Complex64::new(1.0, 0.0);
    let refl = beta_series(one - s);
    let ln_4_pi = (4.0 / std::f64::consts::PI).ln();
    let factor = ((0.5 * one - s) * ln_4_pi).exp();
    let g = gamma_complex(one - 0.5 * s)?; // Re >= 0.75 here, pole-free
    Ok(factor * g * rgamma(0.5 * (s + one)) * refl)
}

fn beta_series(s: Complex64) -> Complex64 {
    let n = cvz_terms(s);
    cvz_alternating(n, |k| (-s * ((2 * k + 1) as f64).ln()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Euler-transform oracle for real s, independent of the Chebyshev
    /// weights used in production.
    fn euler_transform_beta(s: f64) -> f64 {
        const M: usize = 64;
        let mut partial = [0.0f64; M];
        let mut acc = 0.0;
        for (n, p) in partial.iter_mut().enumerate() {
            let term = ((2 * n + 1) as f64).powf(-s);
            acc += if n % 2 == 0 { term } else { -term };
            *p = acc;
        }
        for width in (1..M).rev() {
            for j in 0..width {
                partial[j] = 0.5 * (partial[j] + partial[j + 1]);
            }
        }
        partial[0]
    }

    #[test]
    fn classic_values() {
        // beta(1) = pi/4, beta(2) = Catalan, beta(3) = pi^3/32.
        let b1 = dirichlet_beta(Complex64::new(1.0, 0.0)).unwrap();
        assert!((b1.re - std::f64::consts::PI / 4.0).abs() < 1e-14, "beta(1) = {b1}");
        let b2 = dirichlet_beta(Complex64::new(2.0, 0.0)).unwrap();
        assert!((b2.re - 0.9159655941772190).abs() < 1e-14, "beta(2) = {b2}");
        assert!((b2.re - euler_transform_beta(2.0)).abs() < 1e-13);
        let b3 = dirichlet_beta(Complex64::new(3.0, 0.0)).unwrap();
        let pi3_32 = std::f64::consts::PI.powi(3) / 32.0;
        assert!((b3.re - pi3_32).abs() < 1e-14, "beta(3) = {b3}");
    }

    #[test]
    fn at_one_half_against_oracle() {
        let b = dirichlet_beta(Complex64::new(0.5, 0.0)).unwrap();
        let oracle = euler_transform_beta(0.5);
        assert!((b.re - oracle).abs() < 1e-12, "beta(1/2) = {b} vs {oracle}");
        // Frozen oracle output.
        assert!((b.re - 0.6676914571896092).abs() < 1e-12);
    }

    #[test]
    fn left_plane_values() {
        // beta(0) = 1/2 and beta(-2) = -1/2 (Euler numbers over 2).
        let b0 = dirichlet_beta(Complex64::new(0.0, 0.0)).unwrap();
        assert!((b0.re - 0.5).abs() < 1e-13, "beta(0) = {b0}");
        let bm2 = dirichlet_beta(Complex64::new(-2.0, 0.0)).unwrap();
        assert!((bm2.re + 0.5).abs() < 1e-12, "beta(-2) = {bm2}");
    }

    #[test]
    fn trivial_zeros_exact() {
        for sig in [-1.0, -3.0, -5.0] {
            let b = dirichlet_beta(Complex64::new(sig, 0.0)).unwrap();
            assert_eq!(b, Complex64::new(0.0, 0.0), "beta({sig}) = {b}");
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let s = Complex64::new(1.3, 6.4);
        let a = dirichlet_beta(s).unwrap();
        let b = dirichlet_beta(s.conj()).unwrap();
        assert!((a.conj() - b).norm() < 1e-14 * a.norm());
    }

    #[test]
    fn reflection_is_continuous_across_the_switch() {
        // Values just left and right of Re s = 1/2 must agree through the
        // two branches to near machine precision.
        for im in [0.0, 4.0, 19.0] {
            let a = dirichlet_beta(Complex64::new(0.5 - 1e-9, im)).unwrap();
            let b = dirichlet_beta(Complex64::new(0.5 + 1e-9, im)).unwrap();
            assert!((a - b).norm() < 1e-7 * b.norm(), "jump at im = {im}: {a} vs {b}");
        }
    }
}
