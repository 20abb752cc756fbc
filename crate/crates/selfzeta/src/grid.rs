//! Evaluation grids in the complex s plane.
//!
//! A grid is an ordered list of distinct finite points plus a human-readable
//! description that survives into reports.  Construction is deterministic,
//! including the seeded random rectangle, so two runs over the same grid
//! spec produce bitwise-identical point lists.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rng::Stream;

/// Seed for the random block of the standard grid ("selfzeta" in ASCII).
const STANDARD_SEED: u64 = 0x7365_6c66_7a65_7461;

#[derive(Clone, Debug)]
pub struct SGrid {
    points: Vec<Complex64>,
    description: String,
}

impl SGrid {
    /// Real segment from `a` to `b` inclusive with the given step.
    pub fn real_segment(a: f64, b: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) || !a.is_finite() || !b.is_finite() || b < a {
            return Err(Error::Config {
                detail: format!("bad real segment [{a}, {b}] step {step}"),
            });
        }
        let count = ((b - a) / step).round() as i64;
        let mut points = Vec::new();
        for k in 0..=count.max(0) {
            let x = a + k as f64 * step;
            if x <= b + step * 1e-9 {
                points.push(Complex64::new(x, 0.0));
            }
        }
        Self::from_points(points, format!("real[{a},{b};step={step}]"))
    }

    /// Points 1/2 + i t for the listed ordinates.
    pub fn critical_line_points(ts: &[f64]) -> Result<Self> {
        let points = ts.iter().map(|&t| Complex64::new(0.5, t)).collect();
        Self::from_points(points, format!("critline[{} points]", ts.len()))
    }

    /// `n` evenly spaced points 1/2 + i t, t from `t0` to `t1` inclusive.
    pub fn critical_line(t0: f64, t1: f64, n: usize) -> Result<Self> {
        if n == 0 || !t0.is_finite() || !t1.is_finite() {
            return Err(Error::Config {
                detail: format!("bad critical line range [{t0}, {t1}] n {n}"),
            });
        }
        let mut points = Vec::with_capacity(n);
        for k in 0..n {
            let t = if n == 1 {
                t0
            } else {
                t0 + (t1 - t0) * k as f64 / (n - 1) as f64
            };
            points.push(Complex64::new(0.5, t));
        }
        Self::from_points(points, format!("critline[{t0},{t1};n={n}]"))
    }

    /// Deterministic `n_re` x `n_im` lattice over a rectangle.
    pub fn rect_lattice(
        re0: f64,
        re1: f64,
        im0: f64,
        im1: f64,
        n_re: usize,
        n_im: usize,
    ) -> Result<Self> {
        if n_re == 0 || n_im == 0 {
            return Err(Error::Config {
                detail: "lattice needs n_re, n_im >= 1".into(),
            });
        }
        let coord = |lo: f64, hi: f64, k: usize, n: usize| {
            if n == 1 {
                lo
            } else {
                lo + (hi - lo) * k as f64 / (n - 1) as f64
            }
        };
        let mut points = Vec::with_capacity(n_re * n_im);
        for j in 0..n_im {
            for i in 0..n_re {
                points.push(Complex64::new(
                    coord(re0, re1, i, n_re),
                    coord(im0, im1, j, n_im),
                ));
            }
        }
        Self::from_points(
            points,
            format!("rect[{re0},{re1}]x[{im0},{im1}];{n_re}x{n_im}"),
        )
    }

    /// `n` seed-determined points uniform over a rectangle.
    pub fn random_rectangle(
        re0: f64,
        re1: f64,
        im0: f64,
        im1: f64,
        n: usize,
        seed: u64,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config {
                detail: "random rectangle needs n >= 1".into(),
            });
        }
        let stream = Stream::new(seed);
        let mut points = Vec::with_capacity(n);
        for k in 0..n as u64 {
            let re = re0 + (re1 - re0) * stream.uniform(2 * k);
            let im = im0 + (im1 - im0) * stream.uniform(2 * k + 1);
            points.push(Complex64::new(re, im));
        }
        Self::from_points(
            points,
            format!("random[{re0},{re1}]x[{im0},{im1}];n={n};seed={seed:#x}"),
        )
    }

    /// Default verification grid: the real segment [-3, 4] in steps of 1/2,
    /// six critical-line ordinates up through the first zeta zero height,
    /// and twenty seeded random points in [-2, 3] x [0, 25].  41 points.
    pub fn standard() -> Self {
        let mut points = Vec::with_capacity(41);
        points.extend(Self::real_segment(-3.0, 4.0, 0.5).unwrap().points);
        points.extend(
            Self::critical_line_points(&[1.0, 5.0, 10.0, 14.134725, 20.0, 30.0])
                .unwrap()
                .points,
        );
        points.extend(
            Self::random_rectangle(-2.0, 3.0, 0.0, 25.0, 20, STANDARD_SEED)
                .unwrap()
                .points,
        );
        Self::from_points(points, "standard[41]".into()).unwrap()
    }

    /// Wrap an explicit point list, enforcing the grid invariants.
    pub fn from_points(points: Vec<Complex64>, description: String) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Config {
                detail: "grid is empty".into(),
            });
        }
        for p in &points {
            if !p.re.is_finite() || !p.im.is_finite() {
                return Err(Error::Config {
                    detail: format!("grid contains non-finite point {p}"),
                });
            }
        }
        // Distinctness check on bit patterns: exact duplicates are config
        // errors, nearby points are allowed.
        let mut keys: Vec<(u64, u64)> = points
            .iter()
            .map(|p| (p.re.to_bits(), p.im.to_bits()))
            .collect();
        keys.sort_unstable();
        for w in keys.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Config {
                    detail: format!(
                        "grid contains duplicate point ({}, {})",
                        f64::from_bits(w[0].0),
                        f64::from_bits(w[0].1)
                    ),
                });
            }
        }
        Ok(SGrid {
            points,
            description,
        })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn description(&self) -> &str {
        &self.description
    }
}

impl fmt::Display for SGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.description)
    }
}

fn parse_num<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Usage {
            detail: format!("cannot parse {what} from {s:?}"),
        })
}

impl FromStr for SGrid {
    type Err = Error;

    /// Grid specs:
    ///   standard
    ///   real:a:b:step
    ///   critline:t0:t1:n
    ///   rect:re0:re1:im0:im1:n_re:n_im
    fn from_str(s: &str) -> Result<Self> {
        let fields: Vec<&str> = s.split(':').collect();
        match fields[0] {
            "standard" if fields.len() == 1 => Ok(SGrid::standard()),
            "real" if fields.len() == 4 => SGrid::real_segment(
                parse_num(fields[1], "a")?,
                parse_num(fields[2], "b")?,
                parse_num(fields[3], "step")?,
            ),
            "critline" if fields.len() == 4 => SGrid::critical_line(
                parse_num(fields[1], "t0")?,
                parse_num(fields[2], "t1")?,
                parse_num(fields[3], "n")?,
            ),
            "rect" if fields.len() == 7 => SGrid::rect_lattice(
                parse_num(fields[1], "re0")?,
                parse_num(fields[2], "re1")?,
                parse_num(fields[3], "im0")?,
                parse_num(fields[4], "im1")?,
                parse_num(fields[5], "n_re")?,
                parse_num(fields[6], "n_im")?,
            ),
            _ => Err(Error::Usage {
                detail: format!(
                    "unrecognized grid spec {s:?} (expected standard, real:a:b:step, \
                     critline:t0:t1:n, or rect:re0:re1:im0:im1:n_re:n_im)"
                ),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_segment_includes_both_endpoints() {
        let g = SGrid::real_segment(-3.0, 4.0, 0.5).unwrap();
        assert_eq!(g.len(), 15);
        assert_eq!(g.points()[0], Complex64::new(-3.0, 0.0));
        assert_eq!(g.points()[14], Complex64::new(4.0, 0.0));
    }

    #[test]
    fn standard_grid_has_41_distinct_points() {
        let g = SGrid::standard();
        assert_eq!(g.len(), 41);
        // Repeatable bit for bit.
        let h = SGrid::standard();
        for (a, b) in g.points().iter().zip(h.points()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
        // Random block stays inside its rectangle.
        for p in &g.points()[21..] {
            assert!(p.re >= -2.0 && p.re <= 3.0 && p.im >= 0.0 && p.im <= 25.0);
        }
    }

    #[test]
    fn lattice_covers_rectangle_row_major() {
        let g = SGrid::rect_lattice(0.0, 1.0, 0.0, 2.0, 3, 2).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g.points()[0], Complex64::new(0.0, 0.0));
        assert_eq!(g.points()[2], Complex64::new(1.0, 0.0));
        assert_eq!(g.points()[3], Complex64::new(0.0, 2.0));
        assert_eq!(g.points()[5], Complex64::new(1.0, 2.0));
    }

    #[test]
    fn duplicate_points_are_rejected() {
        let err = SGrid::rect_lattice(1.0, 1.0, 0.0, 0.0, 2, 1).unwrap_err();
        assert!(matches!(err, Error::Config { .. }));
        let err = SGrid::from_points(
            vec![Complex64::new(1.0, 2.0), Complex64::new(1.0, 2.0)],
            "dupe".into(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Config { .. }));
    }

    #[test]
    fn non_finite_points_are_rejected() {
        let err = SGrid::from_points(vec![Complex64::new(f64::NAN, 0.0)], "nan".into());
        assert!(matches!(err, Err(Error::Config { .. })));
    }

    #[test]
    fn parses_grid_specs() {
        let g: SGrid = "real:-3:4:0.5".parse().unwrap();
        assert_eq!(g.len(), 15);
        let g: SGrid = "critline:0:30:7".parse().unwrap();
        assert_eq!(g.len(), 7);
        assert_eq!(g.points()[6], Complex64::new(0.5, 30.0));
        let g: SGrid = "rect:-2:3:0:25:5:4".parse().unwrap();
        assert_eq!(g.len(), 20);
        let g: SGrid = "standard".parse().unwrap();
        assert_eq!(g.len(), 41);
    }

    #[test]
    fn rejects_malformed_specs() {
        for bad in [
            "real:1:2",
            "critline:0:30:0",
            "rect:0:1:0:1:3",
            "ring:1:2:3",
            "real:a:b:c",
        ] {
            let err = bad.parse::<SGrid>().unwrap_err();
            assert!(
                matches!(err, Error::Usage { .. } | Error::Config { .. }),
                "{bad} gave {err:?}"
            );
        }
    }

    #[test]
    fn random_rectangle_is_seed_stable() {
        let a = SGrid::random_rectangle(0.0, 1.0, 0.0, 1.0, 8, 5).unwrap();
        let b = SGrid::random_rectangle(0.0, 1.0, 0.0, 1.0, 8, 5).unwrap();
        let c = SGrid::random_rectangle(0.0, 1.0, 0.0, 1.0, 8, 6).unwrap();
        assert_eq!(a.points(), b.points());
        assert_ne!(a.points(), c.points());
    }
}
