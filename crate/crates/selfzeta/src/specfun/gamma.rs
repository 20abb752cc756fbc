//! Complex gamma function.
//!
//! Lanczos approximation with g = 607/128 and 15 coefficients (Godfrey's
//! set), valid for Re z >= 1/2; the reflection formula
//! Gamma(z) Gamma(1-z) = pi / sin(pi z) covers the left half plane.  The
//! coefficient set delivers close to full double precision away from the
//! poles at the non-positive integers.

use num_complex::Complex64;

use super::{sinpi, POLE_RADIUS};
use crate::error::{Error, Result};

const LANCZOS_G: f64 = 4.7421875; // 607/128
const LANCZOS_C: [f64; 15] = [
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
];

const SQRT_2PI: f64 = 2.5066282746310002;

/// Lanczos core, requires Re z >= 0.5.
fn lanczos(z: Complex64) -> Complex64 {
    let mut a = Complex64::new(LANCZOS_C[0], 0.0);
    for (k, &c) in LANCZOS_C.iter().enumerate().skip(1) {
        a += c / (z + (k as f64 - 1.0));
    }
    let t = z + (LANCZOS_G - 0.5);
    // Gamma(z) = sqrt(2 pi) t^{z - 1/2} e^{-t} A(z)
    SQRT_2PI * ((z - 0.5) * t.ln() - t).exp() * a
}

/// Gamma(z) on the complex plane.
///
/// Fails with a pole error within [`POLE_RADIUS`] of z in {0, -1, -2, ...}.
pub fn gamma_complex(z: Complex64) -> Result<Complex64> {
    if z.re >= 0.5 {
        return Ok(lanczos(z));
    }
    let n = z.re.round();
    if n <= 0.0 && (z - Complex64::new(n, 0.0)).norm() < POLE_RADIUS {
        return Err(Error::Pole { what: "gamma_complex", at: z });
    }
    // Reflection: Gamma(z) = pi / (sin(pi z) Gamma(1 - z))
    let s = sinpi(z);
    Ok(std::f64::consts::PI / (s * lanczos(Complex64::new(1.0, 0.0) - z)))
}

/// Reciprocal gamma, entire: zero (exactly) at the non-positive integers.
pub fn rgamma(z: Complex64) -> Complex64 {
    if z.re >= 0.5 {
        1.0 / lanczos(z)
    } else {
        sinpi(z) * lanczos(Complex64::new(1.0, 0.0) - z) / std::f64::consts::PI
    }
}
