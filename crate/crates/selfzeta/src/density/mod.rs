//! Mixing densities on (0, inf) and the self-reciprocal densities they
//! induce.
//!
//! A mixing density g with the scaling symmetry g(x) = x^{-3/2} g(1/x)
//! turns the Gaussian into a variance mixture
//!
//! ```text
//! f_M(x) = int_0^inf (2 pi y)^{-1/2} e^{-x^2/(2y)} g(y) dy
//! ```
//!
//! whose Fourier transform is sqrt(2 pi) f_M itself.  Seven families are
//! provided: three series kernels tied to classical theta functions, the
//! two-sided exponential family g(x) = c x^{-3/4} e^{-a(x^alpha +
//! x^{-alpha})}, the inverse-Gaussian-type kernel with Bessel K
//! normalization, the stable-subordinator kernel with elementary
//! normalization, and a caller-supplied product form c x^{-3/4} h(x) h(1/x)
//! which is symmetric for any h.

mod series;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::integrate_zero_inf;
use crate::specfun::bessel_k;
use crate::SQRT_2PI;

/// Evaluator type for the product-form family.
pub type HFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// The supported mixing-density families.
#[derive(Clone)]
pub enum MixingFamily {
    /// 2 sqrt(x) sum_n (2 pi^2 n^4 x - 3 pi n^2) e^{-pi n^2 x}.
    SinhZ,
    /// H_1(sqrt(x)) / (2 sqrt(x)) where H_1 is the differentiated sech sum.
    CoshH1,
    /// 2 sum_n (-1)^n (n + 1/2) e^{-(n+1/2)^2 pi x}.
    CoshT,
    /// c x^{-3/4} e^{-a (x^alpha + x^{-alpha})}, alpha in (0, 1].
    GgcAlpha { a: f64, alpha: f64 },
    /// x^{-3/4} e^{-a (x + 1/x)/2} / (2 K_{1/4}(a)).
    Gig { a: f64 },
    /// (1/2) sqrt(lambda/pi) x^{-3/4} e^{-lambda (x^{1/4} - x^{-1/4})^2}.
    Levy { lambda: f64 },
    /// c x^{-3/4} h(x) h(1/x) for a caller-supplied positive decreasing h.
    CustomG1 { h: HFn, label: String },
}

impl fmt::Debug for MixingFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&family_label(self))
    }
}

fn family_label(fam: &MixingFamily) -> String {
    match fam {
        MixingFamily::SinhZ => "sinh-z".into(),
        MixingFamily::CoshH1 => "cosh-h1".into(),
        MixingFamily::CoshT => "cosh-t".into(),
        MixingFamily::GgcAlpha { a, alpha } => format!("ggc(a={a},alpha={alpha})"),
        MixingFamily::Gig { a } => format!("gig(a={a})"),
        MixingFamily::Levy { lambda } => format!("levy(lambda={lambda})"),
        MixingFamily::CustomG1 { label, .. } => format!("custom-g1({label})"),
    }
}

/// The product form shared by `GgcAlpha` and `CustomG1`.  Both families
/// route through this one function so that a custom h reproducing the
/// built-in exponent gives bit-identical values.
fn g1_unnormalized(h: &dyn Fn(f64) -> f64, x: f64) -> f64 {
    x.powf(-0.75) * h(x) * h(1.0 / x)
}

fn ggc_h(a: f64, alpha: f64) -> impl Fn(f64) -> f64 {
    move |x: f64| (-a * x.powf(alpha)).exp()
}

/// H_1 evaluated with the scaling identity H_1(x) = H_1(1/x)/x for x < 1,
/// where direct summation cancels catastrophically.
pub fn h1(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain {
            what: "h1",
            detail: format!("argument must be positive, got {x}"),
        });
    }
    if x >= 1.0 {
        series::h1_series(x)
    } else {
        Ok(series::h1_series(1.0 / x)? / x)
    }
}

/// A mixing density with its normalization constant resolved.
#[derive(Clone, Debug)]
pub struct MixingDensity {
    family: MixingFamily,
    norm_const: f64,
}

impl MixingDensity {
    pub fn sinh_z() -> Self {
        MixingDensity {
            family: MixingFamily::SinhZ,
            norm_const: 1.0,
        }
    }

    pub fn cosh_h1() -> Self {
        MixingDensity {
            family: MixingFamily::CoshH1,
            norm_const: 1.0,
        }
    }

    pub fn cosh_t() -> Self {
        MixingDensity {
            family: MixingFamily::CoshT,
            norm_const: 1.0,
        }
    }

    /// Bessel-normalized family; requires a > 0.
    pub fn gig(a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::Domain {
                what: "gig",
                detail: format!("parameter a must be positive and finite, got {a}"),
            });
        }
        let k = bessel_k(Complex64::new(0.25, 0.0), a)?.re;
        Ok(MixingDensity {
            family: MixingFamily::Gig { a },
            norm_const: 1.0 / (2.0 * k),
        })
    }

    /// Stable-subordinator kernel; requires lambda > 0.  The normalization
    /// (1/2) sqrt(lambda/pi) is elementary, no quadrature involved.
    pub fn levy(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::Domain {
                what: "levy",
                detail: format!("parameter lambda must be positive and finite, got {lambda}"),
            });
        }
        Ok(MixingDensity {
            family: MixingFamily::Levy { lambda },
            norm_const: 0.5 * (lambda / std::f64::consts::PI).sqrt(),
        })
    }

    /// Two-sided exponential family, normalized by quadrature.
    pub fn ggc_alpha(a: f64, alpha: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() || !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Domain {
                what: "ggc_alpha",
                detail: format!("need a > 0 and alpha in (0, 1], got a={a} alpha={alpha}"),
            });
        }
        let h = ggc_h(a, alpha);
        let norm_const = normalize_product_form(&h, "ggc_alpha")?;
        Ok(MixingDensity {
            family: MixingFamily::GgcAlpha { a, alpha },
            norm_const,
        })
    }

    /// Product-form family for a caller-supplied h.  h must be positive and
    /// nonincreasing on (0, inf); that is spot-checked on a fixed grid, and
    /// the mass integral must converge.
    pub fn custom_g1(h: HFn, label: &str) -> Result<Self> {
        let probe = [0.01, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0];
        let mut prev = f64::INFINITY;
        for &x in &probe {
            let v = h(x);
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain {
                    what: "custom_g1",
                    detail: format!("h({x}) = {v} is not positive and finite"),
                });
            }
            if v > prev * (1.0 + 1e-12) {
                return Err(Error::Domain {
                    what: "custom_g1",
                    detail: format!("h is increasing near x = {x}"),
                });
            }
            prev = v;
        }
        let norm_const = normalize_product_form(h.as_ref(), "custom_g1")?;
        Ok(MixingDensity {
            family: MixingFamily::CustomG1 {
                h,
                label: label.to_string(),
            },
            norm_const,
        })
    }

    pub fn family(&self) -> &MixingFamily {
        &self.family
    }

    pub fn label(&self) -> String {
        family_label(&self.family)
    }

    /// The resolved normalization constant: the factor in front of the
    /// family's canonical unnormalized form.  For the series families the
    /// series itself is the pdf and this is exactly 1.
    pub fn norm_const(&self) -> f64 {
        self.norm_const
    }

    /// Density value at x > 0.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain {
                what: "mixing_pdf",
                detail: format!("argument must be positive and finite, got {x}"),
            });
        }
        match &self.family {
            MixingFamily::SinhZ => {
                // Direct series only right of 1; exact scaling symmetry
                // below, where direct terms cancel to noise.  The series
                // underflows to an exact 0 long before x^{-3/2} overflows,
                // and 0 * inf would poison the value.
                if x >= 1.0 {
                    series::sinh_z_series(x)
                } else {
                    let tail = series::sinh_z_series(1.0 / x)?;
                    Ok(if tail == 0.0 { 0.0 } else { x.powf(-1.5) * tail })
                }
            }
            MixingFamily::CoshH1 => {
                let u = x.sqrt();
                Ok(h1(u)? / (2.0 * u))
            }
            MixingFamily::CoshT => {
                if x >= 1.0 {
                    series::cosh_t_series(x)
                } else {
                    let tail = series::cosh_t_series(1.0 / x)?;
                    Ok(if tail == 0.0 { 0.0 } else { x.powf(-1.5) * tail })
                }
            }
            MixingFamily::GgcAlpha { a, alpha } => {
                Ok(self.norm_const * g1_unnormalized(&ggc_h(*a, *alpha), x))
            }
            MixingFamily::Gig { a } => {
                Ok(self.norm_const * x.powf(-0.75) * (-0.5 * a * (x + 1.0 / x)).exp())
            }
            MixingFamily::Levy { lambda } => {
                let d = x.powf(0.25) - x.powf(-0.25);
                Ok(self.norm_const * x.powf(-0.75) * (-lambda * d * d).exp())
            }
            MixingFamily::CustomG1 { h, .. } => Ok(self.norm_const * g1_unnormalized(&**h, x)),
        }
    }

    /// Mean of the mixing distribution, by quadrature.
    pub fn mean(&self) -> Result<f64> {
        let q = integrate_zero_inf(|y| Ok(y * self.pdf(y)?), 1e-11)?;
        Ok(q.value)
    }

    /// g(x) - x^{-3/2} g(1/x); zero up to evaluation round-off for every
    /// family, since the symmetry is algebraic in each canonical form.
    pub fn symmetry_residual(&self, x: f64) -> Result<f64> {
        Ok(self.pdf(x)? - x.powf(-1.5) * self.pdf(1.0 / x)?)
    }
}

/// Normalizing constant for the product form x^{-3/4} h(x) h(1/x).
fn normalize_product_form(h: &dyn Fn(f64) -> f64, what: &'static str) -> Result<f64> {
    let mass = integrate_zero_inf(|x| Ok(g1_unnormalized(h, x)), 1e-12).map_err(|e| {
        Error::Normalization {
            what,
            detail: format!("mass integral did not converge ({e})"),
        }
    })?;
    let c = 1.0 / mass.value;
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::Normalization {
            what,
            detail: format!("mass integral gave {}", mass.value),
        });
    }
    Ok(c)
}

/// Product-form constructor mirroring the underlying representation
/// theorem: any positive nonincreasing h yields a symmetric mixing density
/// c x^{-3/4} h(x) h(1/x).
pub fn make_custom_g1(h: HFn, label: &str) -> Result<MixingDensity> {
    MixingDensity::custom_g1(h, label)
}

/// A self-reciprocal density on the real line.
#[derive(Clone, Debug)]
pub enum SRDensity {
    /// (2 pi)^{-1/2} e^{-x^2/2}.
    GaussianDirect,
    /// (2 pi)^{-1/2} sech(sqrt(pi/2) x).
    CoshDirect,
    /// Variance mixture of the Gaussian over a mixing density.
    Mixture(MixingDensity),
}

/// Numerically stable sech.
fn sech(u: f64) -> f64 {
    let e = (-u.abs()).exp();
    2.0 * e / (1.0 + e * e)
}

impl SRDensity {
    pub fn label(&self) -> String {
        match self {
            SRDensity::GaussianDirect => "gaussian".into(),
            SRDensity::CoshDirect => "cosh".into(),
            SRDensity::Mixture(g) => format!("mixture({})", g.label()),
        }
    }

    /// Density value; even in x by construction.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        let x2 = x * x;
        match self {
            SRDensity::GaussianDirect => Ok((-0.5 * x2).exp() / SQRT_2PI),
            SRDensity::CoshDirect => {
                Ok(sech((std::f64::consts::PI / 2.0).sqrt() * x.abs()) / SQRT_2PI)
            }
            SRDensity::Mixture(g) => {
                let q = integrate_zero_inf(
                    |y| Ok((-0.5 * x2 / y).exp() / (SQRT_2PI * y.sqrt()) * g.pdf(y)?),
                    1e-13,
                )?;
                Ok(q.value)
            }
        }
    }

    /// Fourier transform f^(t) = int f(x) e^{-itx} dx; for a variance
    /// mixture this is the Laplace transform of g at t^2/2.  Even in t,
    /// exactly 1 at t = 0 (the definitional normalization; quadrature noise
    /// on the mass integral must not leak into downstream identities).
    pub fn cf(&self, t: f64) -> Result<f64> {
        let t2 = t * t;
        match self {
            SRDensity::GaussianDirect => Ok((-0.5 * t2).exp()),
            SRDensity::CoshDirect => Ok(sech((std::f64::consts::PI / 2.0).sqrt() * t.abs())),
            SRDensity::Mixture(g) => {
                if t == 0.0 {
                    return Ok(1.0);
                }
                let q = integrate_zero_inf(|y| Ok((-0.5 * y * t2).exp() * g.pdf(y)?), 1e-13)?;
                Ok(q.value)
            }
        }
    }

    /// f^(t) - sqrt(2 pi) f(t): the self-reciprocality defect.
    pub fn self_reciprocal_residual(&self, t: f64) -> Result<f64> {
        Ok(self.cf(t)? - SQRT_2PI * self.pdf(t)?)
    }
}
