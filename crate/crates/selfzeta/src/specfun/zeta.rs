//! Riemann zeta on the complex plane.
//!
//! Primary path: the alternating (eta) series with Chebyshev acceleration
//! weights,
//!
//!   zeta(s) = -1/expm1((1-s) ln 2) * sum_k (-1)^k w_k (k+1)^{-s},
//!
//! valid for Re s > -2 with a term budget grown from the error bound.  The
//! denominator is formed with expm1 so the simple pole at s = 1 and its
//! neighborhood stay fully accurate.
//!
//! For Re s <= -2 the functional equation
//!
//!   zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1-s) zeta(1-s)
//!
//! bootstraps from the well-conditioned right half plane; sin(pi s / 2) is
//! reduced exactly, so the trivial zeros come out as exact zeros.
//!
//! The eta denominator also vanishes at s = 1 + 2 pi i k / ln 2 (k != 0)
//! where zeta itself is regular; within 0.01 of those points the series
//! loses digits to cancellation and an Euler-Maclaurin evaluation takes
//! over.

use num_complex::Complex64;

use super::{cvz_alternating, cvz_terms, expm1_complex, gamma_complex, sinpi, POLE_RADIUS};
use crate::error::{Error, Result};

/// zeta(s).  Fails with a pole error within [`POLE_RADIUS`] of s = 1.
pub fn zeta_complex(s: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    if (s - one).norm() < POLE_RADIUS {
        return Err(Error::Pole { what: "zeta_complex", at: s });
    }
    if s.re <= -2.0 {
        // Functional-equation bootstrap; 1-s has Re >= 3 where the eta
        // series denominator satisfies |1 - 2^{1-s}| >= 3/4.
        let refl = eta_route(one - s);
        let factor = (s * std::f64::consts::LN_2
            + (s - one) * std::f64::consts::PI.ln())
        .exp();
        let g = gamma_complex(one - s)?;
        return Ok(factor * sinpi(0.5 * s) * g * refl);
    }
    let denom = -expm1_complex((one - s) * std::f64::consts::LN_2);
    if denom.norm() < 0.01 && (s - one).norm() > 0.5 {
        // Near a non-real zero of 1 - 2^{1-s}: the quotient would amplify
        // the series' rounding noise; sum directly instead.
        return Ok(euler_maclaurin(s));
    }
    Ok(eta_route_with_denom(s, denom))
}

fn eta_route(s: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let denom = -expm1_complex((one - s) * std::f64::consts::LN_2);
    eta_route_with_denom(s, denom)
}

fn eta_route_with_denom(s: Complex64, denom: Complex64) -> Complex64 {
    let n = cvz_terms(s);
    let eta = cvz_alternating(n, |k| (-s * ((k + 1) as f64).ln()).exp());
    eta / denom
}

/// Euler-Maclaurin summation, reliable here for Re s > -2 and |s| of a few
/// tens; used only near the non-real zeros of the eta denominator.
fn euler_maclaurin(s: Complex64) -> Complex64 {
    const N: usize = 150;
    // B_2, B_4, ..., B_14 over (2j)!.
    const COEF: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
        1.0 / 74724249600.0,
    ];
    let one = Complex64::new(1.0, 0.0);
    let nf = N as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..N {
        acc += (-s * (n as f64).ln()).exp();
    }
    let n_pow = (-s * nf.ln()).exp(); // N^{-s}
    acc += 0.5 * n_pow;
    acc += n_pow * nf / (s - one);
    let mut rising = s; // s (s+1) ... (s + 2j - 2)
    let mut scale = n_pow / nf; // N^{-s-2j+1}
    for (j, &c) in COEF.iter().enumerate() {
        acc += c * rising * scale;
        if j + 1 < COEF.len() {
            rising *= (s + (2 * j + 1) as f64) * (s + (2 * j + 2) as f64);
            scale /= nf * nf;
        }
    }
    acc
}
