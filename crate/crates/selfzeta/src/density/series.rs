//! Truncated series for the three mixing densities that have no elementary
//! closed form.
//!
//! Each series is summed directly only for x >= 1.  There every term is
//! dominated by its leading exponential, the terms are eventually of one
//! sign, and the ratio of consecutive terms is below e^{-3 pi}, so a dozen
//! terms reach round-off and the stated tail bounds are easy.  Below 1 the
//! callers apply the exact scaling symmetry of the density instead: direct
//! summation there loses the value to cancellation between O(1) terms long
//! before the invariant grids reach it.

use crate::error::{Error, Result};

/// Hard cap on series length; reaching it is a loud failure, not a result.
pub const N_MAX: usize = 10_000;

/// Relative tail criterion from the accuracy contract.
const TAIL: f64 = 1e-14;

fn truncation(what: &'static str) -> Error {
    Error::Truncation { what, cap: N_MAX }
}

/// sum 2 sqrt(x) (2 pi^2 n^4 x - 3 pi n^2) e^{-pi n^2 x}, the density whose
/// half-Mellin transform is twice the completed zeta function.
///
/// Direct form valid for x >= 1 (all terms positive there); callers handle
/// x < 1 via f(x) = x^{-3/2} f(1/x).
pub fn sinh_z_series(x: f64) -> Result<f64> {
    let pi = std::f64::consts::PI;
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    for n in 1..=N_MAX {
        let n2 = (n * n) as f64;
        let term = (2.0 * pi * pi * n2 * n2 * x - 3.0 * pi * n2) * (-pi * n2 * x).exp();
        sum += term;
        let mag = term.abs();
        if mag < TAIL * sum.abs().max(f64::MIN_POSITIVE) && mag < prev {
            return Ok(2.0 * x.sqrt() * sum);
        }
        prev = mag;
    }
    Err(truncation("sinh_z_series"))
}

/// H_1(x) = sum_n 2u sech(u) [u (1 - 2 sech^2 u) - 2 tanh u], u = n pi x.
///
/// This grouping of the differentiated sech series keeps every factor O(1);
/// the naive expansion squares large cosh values first and overflows near
/// u ~ 350.  Terms are positive for u >= pi, so the same x >= 1 rule
/// applies; callers use H_1(x) = H_1(1/x)/x below 1.
pub fn h1_series(x: f64) -> Result<f64> {
    let pi = std::f64::consts::PI;
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    for n in 1..=N_MAX {
        let u = n as f64 * pi * x;
        let e = (-u).exp();
        // sech u = 2 e^{-u} / (1 + e^{-2u}), tanh u = (1 - e^{-2u}) / (1 + e^{-2u})
        let denom = 1.0 + e * e;
        let sech = 2.0 * e / denom;
        let tanh = (1.0 - e * e) / denom;
        let term = 2.0 * u * sech * (u * (1.0 - 2.0 * sech * sech) - 2.0 * tanh);
        sum += term;
        let mag = term.abs();
        if mag < TAIL * sum.abs().max(f64::MIN_POSITIVE) && mag < prev {
            return Ok(sum);
        }
        prev = mag;
    }
    Err(truncation("h1_series"))
}

/// f_T(x) = 2 sum_{n>=0} (-1)^n (n + 1/2) e^{-(n+1/2)^2 pi x}.
///
/// Alternating with ratio below e^{-2 pi} for x >= 1, so the first omitted
/// term bounds the tail once magnitudes decrease.
pub fn cosh_t_series(x: f64) -> Result<f64> {
    let pi = std::f64::consts::PI;
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    for n in 0..N_MAX {
        let half = n as f64 + 0.5;
        let mag = half * (-half * half * pi * x).exp();
        let term = if n % 2 == 0 { mag } else { -mag };
        sum += term;
        if mag < TAIL * sum.abs().max(f64::MIN_POSITIVE) && mag < prev {
            return Ok(2.0 * sum);
        }
        prev = mag;
    }
    Err(truncation("cosh_t_series"))
}
