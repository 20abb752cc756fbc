//! Mellin transforms of the theta layer and the xi-type functions built
//! from them.
//!
//! For a theta remainder psi the half-line transform
//!
//! ```text
//!   eta(s) = int_0^inf x^{s-1} psi(x) dx          (Re s > 1)
//! ```
//!
//! has the entire completion
//!
//! ```text
//!   xi(s) = s(s-1) int_1^inf (x^{s-1} + x^{-s}) psi(x) dx + 1/2,
//! ```
//!
//! obtained by folding (0, 1) onto (1, inf) with the modular relation; the
//! integrand is manifestly invariant under s -> 1-s.  A mixing density g
//! with the symmetry g(x) = x^{-3/2} g(1/x) contributes the factor
//!
//! ```text
//!   xi_1(s) = int_0^inf y^{-s/2} g(y) dy
//!           = int_1^inf (y^{-s/2} + y^{(s-1)/2}) g(y) dy,
//! ```
//!
//! again folded by the symmetry of g, and the transform of the mixed theta
//! series factorizes as xi(s) of the base kernel times xi_1(s).
//!
//! All integrands are evaluated in log space, exp(w ln x + ln psi), so a
//! large power can never manufacture inf * 0 against an underflowed density
//! value; where the product genuinely exceeds f64 range the quadrature
//! reports the non-finite point instead of returning garbage.

use std::sync::Arc;

use num_complex::Complex64;

use crate::density::MixingDensity;
use crate::error::{Error, Result};
use crate::quad::{exp_sinh, integrate_zero_inf};
use crate::specfun::{
    xi_bessel_quotient, xi_beta_closed, xi_closed_form, xi_cosh_closed,
};
use crate::theta::ThetaSeries;

/// Quadrature tolerance for the xi and eta transforms.  Comfortably inside
/// the 1e-8 end-to-end accuracy contract while leaving headroom for the
/// theta-series tolerance underneath.
const TRANSFORM_TOL: f64 = 1e-10;

/// Largest |Re s| accepted by the quadrature transforms.  Keeps the
/// log-space integrand exponents of every built-in family inside f64
/// range; far outside the accuracy contract anyway.
const SIGMA_MAX: f64 = 60.0;

fn check_sigma(what: &'static str, s: Complex64) -> Result<()> {
    if !s.re.is_finite() || !s.im.is_finite() || s.re.abs() > SIGMA_MAX {
        return Err(Error::Domain {
            what,
            detail: format!("s = {s} outside the supported strip |Re s| <= {SIGMA_MAX}"),
        });
    }
    Ok(())
}

/// x^w * p as exp(w ln x + ln p).  p is a density or theta value, hence
/// nonnegative up to quadrature noise; the sub-noise values are clamped to
/// zero before the logarithm so they cannot poison the exponent.
fn pow_mul(x: f64, w: Complex64, p: f64) -> Complex64 {
    if p <= 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    (w * x.ln() + p.ln()).exp()
}

/// Half-line Mellin transform of the theta remainder, Re s > 1.
///
/// Near 0 the remainder grows like 1/(2x), so the transform converges only
/// right of the pole at s = 1; the quadrature accuracy degrades as Re s
/// approaches 1 from above because the integrand approaches the 1/x
/// borderline, and a genuinely failed refinement surfaces as a quadrature
/// error rather than a value.
pub fn eta_from_psi(theta: &ThetaSeries, s: Complex64) -> Result<Complex64> {
    check_sigma("eta_from_psi", s)?;
    if s.re <= 1.0 {
        return Err(Error::Domain {
            what: "eta_from_psi",
            detail: format!("transform diverges for Re s <= 1, got s = {s}"),
        });
    }
    let w = s - Complex64::new(1.0, 0.0);
    let q = integrate_zero_inf(|x| Ok(pow_mul(x, w, theta.psi(x)?)), TRANSFORM_TOL)?;
    Ok(q.value)
}

/// Entire completion of [`eta_from_psi`]: s(s-1) eta(s) continued to the
/// whole strip |Re s| <= 60 and normalized so the value at s in {0, 1} is
/// exactly 1/2.
///
/// The folded integrand (x^{s-1} + x^{-s}) psi(x) on (1, inf) is invariant
/// under s -> 1-s term by term, so the symmetry of the result is inherited
/// from the representation rather than imposed afterwards.
pub fn xi_from_psi(theta: &ThetaSeries, s: Complex64) -> Result<Complex64> {
    check_sigma("xi_from_psi", s)?;
    let one = Complex64::new(1.0, 0.0);
    let q = exp_sinh(
        |x| {
            let p = theta.psi(x)?;
            Ok(pow_mul(x, s - one, p) + pow_mul(x, -s, p))
        },
        1.0,
        TRANSFORM_TOL,
        f64::MAX,
    )?;
    Ok(s * (s - one) * q.value + 0.5)
}

/// Mellin factor contributed by a mixing density:
/// int_0^inf y^{-s/2} g(y) dy, folded onto (1, inf) by the exact symmetry
/// g(y) = y^{-3/2} g(1/y).
///
/// The folded form only ever evaluates g right of 1, where every family
/// sums its series directly, and it is invariant under s -> 1-s term by
/// term.  Value 1 at s in {0, 1} up to quadrature error (the two folded
/// powers there integrate the density's full mass).
pub fn xi_mixing_factor(g: &MixingDensity, s: Complex64) -> Result<Complex64> {
    check_sigma("xi_mixing_factor", s)?;
    let one = Complex64::new(1.0, 0.0);
    let q = exp_sinh(
        |y| {
            let gy = g.pdf(y)?;
            Ok(pow_mul(y, -0.5 * s, gy) + pow_mul(y, 0.5 * (s - one), gy))
        },
        1.0,
        TRANSFORM_TOL,
        f64::MAX,
    )?;
    Ok(q.value)
}

/// A xi-type function: something entire, symmetric under s -> 1-s, and
/// evaluable at complex s.  Quadrature-backed and closed-form variants
/// share this one type so verification checks can pair them freely.
#[derive(Clone)]
pub enum XiFunction {
    /// Completed transform of a theta series, by quadrature.
    FromPsi(Arc<ThetaSeries>),
    /// Mellin factor of a mixing density, by quadrature.
    MixingFactor(Arc<MixingDensity>),
    /// Completed Riemann zeta, closed form.
    Riemann,
    /// Completed zeta * beta product, closed form.
    CoshClosed,
    /// Completed Dirichlet beta, closed form.
    BetaClosed,
    /// Quotient K_{(2s-1)/4}(a) / K_{1/4}(a), closed form.
    BesselQuotient { a: f64 },
    /// Pointwise product of two xi functions.
    Product(Box<XiFunction>, Box<XiFunction>),
    /// Constant real multiple of a xi function.
    Scaled(f64, Box<XiFunction>),
}

impl XiFunction {
    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        match self {
            XiFunction::FromPsi(theta) => xi_from_psi(theta, s),
            XiFunction::MixingFactor(g) => xi_mixing_factor(g, s),
            XiFunction::Riemann => xi_closed_form(s),
            XiFunction::CoshClosed => xi_cosh_closed(s),
            XiFunction::BetaClosed => xi_beta_closed(s),
            XiFunction::BesselQuotient { a } => xi_bessel_quotient(*a, s),
            XiFunction::Product(u, v) => Ok(u.eval(s)? * v.eval(s)?),
            XiFunction::Scaled(c, u) => Ok(*c * u.eval(s)?),
        }
    }

    pub fn label(&self) -> String {
        match self {
            XiFunction::FromPsi(theta) => format!("xi[psi: {}]", theta.label()),
            XiFunction::MixingFactor(g) => format!("xi1[{}]", g.label()),
            XiFunction::Riemann => "xi-riemann".into(),
            XiFunction::CoshClosed => "xi-cosh".into(),
            XiFunction::BetaClosed => "xi-beta".into(),
            XiFunction::BesselQuotient { a } => format!("bessel-quotient(a={a})"),
            XiFunction::Product(u, v) => format!("{} * {}", u.label(), v.label()),
            XiFunction::Scaled(c, u) => format!("{c} * {}", u.label()),
        }
    }
}
