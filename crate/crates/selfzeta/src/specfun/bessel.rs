//! Modified Bessel function of the second kind, complex order, real
//! positive argument:
//!
//!   K_nu(a) = int_0^inf e^{-a cosh t} cosh(nu t) dt.
//!
//! The integrand decays like exp(-(a/2) e^t), so the plain trapezoid rule
//! converges geometrically in 1/h; the step is halved (reusing nodes)
//! until two levels agree.  K is even in nu; the order is canonicalized to
//! Re nu >= 0 before any arithmetic, which makes K_{-nu} and K_{nu}
//! bit-identical and keeps cosh(nu t) = e^{nu t}(1 + e^{-2 nu t})/2 free
//! of overflow.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Exponent budget: the integrand may not exceed e^{700} anywhere and must
/// fall 65 e-folds below its peak by the truncation point, which pushes
/// the truncation error below the rounding floor even under heavy
/// oscillatory cancellation (large Im nu).
const EXP_LIMIT: f64 = 700.0;
const TAIL_FOLDS: f64 = 65.0;
const T_LIMIT: f64 = 60.0;

/// K_nu(a) for a > 0.
pub fn bessel_k(nu: Complex64, a: f64) -> Result<Complex64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::Domain {
            what: "bessel_k",
            detail: format!("argument must be positive and finite, got {a}"),
        });
    }
    // Evenness: canonicalize to Re nu >= 0 (ties broken by Im nu) so both
    // signs of nu take the identical code path.
    let nu = if nu.re < 0.0 || (nu.re == 0.0 && nu.im < 0.0) { -nu } else { nu };
    let p = nu.re;

    // phi(t) = log |integrand| = p t - a cosh t; its peak and the
    // truncation point where the tail is TAIL_FOLDS below the peak.
    let phi = |t: f64| p * t - a * t.cosh();
    let t_peak = if p > 0.0 { (p / a).asinh() } else { 0.0 };
    let peak = phi(t_peak);
    if peak > EXP_LIMIT {
        return Err(Error::Domain {
            what: "bessel_k",
            detail: format!("integrand peak e^{peak:.0} exceeds double range (nu = {nu}, a = {a})"),
        });
    }
    let mut t_max = (t_peak + 1.0).max(4.0);
    while peak - phi(t_max) < TAIL_FOLDS {
        t_max += 1.0;
        if t_max > T_LIMIT {
            return Err(Error::Domain {
                what: "bessel_k",
                detail: format!(
                    "no truncation point with Re nu = {p} against a sinh(T)/T at a = {a}"
                ),
            });
        }
    }

    // cosh(nu t) e^{-a cosh t} = e^{nu t - a cosh t} (1 + e^{-2 nu t}) / 2;
    // Re nu >= 0 keeps both exponents bounded above by `peak`.
    let f = |t: f64| {
        let w = nu * t;
        let base = (w - a * t.cosh()).exp();
        let correction = if t == 0.0 {
            Complex64::new(2.0, 0.0)
        } else {
            1.0 + (-2.0 * w).exp()
        };
        0.5 * base * correction
    };

    // Trapezoid with step halving; nodes are reused across levels.
    let mut h = 0.5;
    let mut sum = 0.5 * f(0.0);
    let mut k = 1usize;
    loop {
        let t = k as f64 * h;
        if t > t_max {
            break;
        }
        sum += f(t);
        k += 1;
    }
    let mut value = sum * h;
    // Convergence is judged against the integrand's peak magnitude, not
    // the result: for large Im nu the oscillation cancels the integral
    // down to e^{-pi |Im nu| / 2} of the peak, and relative accuracy at
    // that scale is not reachable in doubles.  Absolute accuracy at the
    // peak scale is, and it is what the downstream ratios need.
    let peak_mag = peak.exp();
    let mut converged = false;
    for level in 0..8 {
        h *= 0.5;
        let mut new_sum = Complex64::new(0.0, 0.0);
        let mut k = 1usize;
        loop {
            let t = k as f64 * h;
            if t > t_max {
                break;
            }
            new_sum += f(t);
            k += 2;
        }
        sum += new_sum;
        let refined = sum * h;
        let delta = (refined - value).norm();
        let scale = refined.norm().max(peak_mag);
        value = refined;
        if level >= 1 && delta <= 1e-13 * scale {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence {
            what: "bessel_k",
            detail: format!("trapezoid refinement stalled at nu = {nu}, a = {a}"),
        });
    }
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::Convergence {
            what: "bessel_k",
            detail: format!("non-finite accumulation at nu = {nu}, a = {a}"),
        });
    }
    Ok(value)
}
