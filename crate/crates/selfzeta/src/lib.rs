//! Self-reciprocal probability densities and the entire functions their
//! Mellin transforms define.
//!
//! A density f on the real line is self-reciprocal when its Fourier
//! transform returns f itself: f^(t) = sqrt(2 pi) f(t) under the
//! non-unitary convention f^(t) = int f(x) e^{-itx} dx.  Scale mixtures of
//! the centered Gaussian inherit this property exactly when the mixing
//! density g on (0, inf) satisfies g(x) = x^{-3/2} g(1/x), and the theta
//! sum psi(x) = sum_{n>=1} f^(sqrt(2 pi) x n) then obeys the modular
//! relation psi(x) = psi(1/x)/x + 1/(2x) - 1/2.  Completing the Mellin
//! transform of psi produces an entire function xi with xi(s) = xi(1 - s);
//! the Gaussian case gives the classical completed zeta function and every
//! other admissible mixture gives a companion with the same symmetry.
//!
//! The crate is organized bottom-up:
//!
//! * [`specfun`] - gamma, zeta, Dirichlet beta, Bessel K, and the closed
//!   forms of the completed transforms built from them;
//! * [`quad`] - double-exponential quadrature on finite and half-infinite
//!   intervals;
//! * [`grid`] - evaluation grids in the complex s plane;
//! * [`density`] - mixing densities, the induced self-reciprocal
//!   densities, and their characteristic functions;
//! * [`theta`] - theta-type series over a density's Fourier transform and
//!   their modular-relation residuals;
//! * [`mellin`] - the completed transforms as entire functions, by
//!   quadrature or closed form;
//! * [`verify`] - named residual checks over grids, with reports;
//! * [`montecarlo`] - exact samplers for the mixture densities and
//!   empirical characteristic-function checks.

// Reference constants keep every digit their derivations printed, even
// where fewer digits would parse to the same f64: the written decimal is
// the frozen value.  Negated comparisons like !(x > 0.0) are deliberate
// NaN-rejecting guards; the suggested rewrites would let NaN through.
#![allow(clippy::excessive_precision)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod density;
pub mod error;
pub mod grid;
pub mod mellin;
pub mod montecarlo;
pub mod quad;
pub mod rng;
pub mod specfun;
pub mod theta;
pub mod verify;

pub use error::{Error, Result};

/// sqrt(2 pi), the constant tying the Fourier convention, the Gaussian
/// normalization, and the theta-sum argument scaling together.
pub const SQRT_2PI: f64 = 2.5066282746310002;
