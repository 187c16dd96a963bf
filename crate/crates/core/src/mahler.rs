//! Mahler measures by Jensen's formula in `y`, with the direct torus
//! average as an independent check.
//!
//! For `P(x, y) = sum_j a_j(x) y^j` of degree `d` in `y`,
//!
//! ```text
//! m(P) = m(a_d) + (1/pi) \int_0^pi sum_i log+ |y_i(e^{i theta})| d theta
//! ```
//!
//! where `y_i` are the roots of `P(e^{i theta}, .)`. The first term is a
//! one-variable measure read off the roots of `a_d`; the integral is split
//! wherever `a_d` vanishes on the circle (logarithmic singularities) and
//! wherever a root crosses `|y| = 1` (kinks of `log+`), and every piece is
//! integrated with tanh-sinh.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::lpoly::{LaurentPoly1, RealPoly};
use crate::quad::{integrate_torus2, tanh_sinh, QuadError, QuadResult, TorusIntegrand};
use crate::roots::{poly_roots, sort_roots, RootError};

/// Grid used to bracket sign changes of `|y_i| - 1`.
const KINK_GRID: usize = 2048;
/// Root moduli within this distance of 1 count as on the circle.
const ON_CIRCLE: f64 = 1e-9;
/// Relative size below which the leading coefficient counts as vanished.
const DEGENERATE_LEADING: f64 = 1e-14;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_TORUS_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Jensen1d,
    Torus2d,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureResult {
    /// Logarithmic Mahler measure (natural log).
    pub value: f64,
    pub err_est: f64,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MahlerError {
    #[error("the zero polynomial has no Mahler measure")]
    ZeroPolynomial,
    #[error("x = {0} is not on the unit circle")]
    NotOnUnitCircle(Complex64),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Roots(#[from] RootError),
}

/// Roots of a fibre `P(x, .)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberRoots {
    /// Roots ordered by descending modulus, ties by ascending argument.
    pub roots: Vec<Complex64>,
    /// Value at `x` of the coefficient of the highest `y` power actually used.
    pub leading: Complex64,
    /// True if the generic leading coefficient vanishes at `x`.
    pub degree_dropped: bool,
}

/// `P` viewed as a polynomial in `y` with coefficients in `x`.
#[derive(Debug, Clone)]
pub struct Fibration {
    coeffs: Vec<LaurentPoly1>,
}

impl Fibration {
    pub fn new(p: &RealPoly) -> Self {
        Self { coeffs: p.y_coefficients().1 }
    }

    /// Degree in `y` after removing the lowest power.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> &LaurentPoly1 {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn roots_at(&self, x: Complex64) -> Result<FiberRoots, RootError> {
        let vals: Vec<Complex64> = self.coeffs.iter().map(|c| c.eval(x)).collect();
        let scale: f64 = self
            .coeffs
            .iter()
            .map(|c| c.coeffs.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let mut top = vals.len() - 1;
        while top > 0 && vals[top].norm() <= DEGENERATE_LEADING * scale {
            top -= 1;
        }
        let mut roots = poly_roots(&vals[..=top])?;
        sort_roots(&mut roots);
        Ok(FiberRoots { roots, leading: vals[top], degree_dropped: top + 1 < vals.len() })
    }

    /// `sum_i log+ |y_i(x)|`.
    fn log_plus_sum(&self, x: Complex64) -> Result<f64, RootError> {
        let r = self.roots_at(x)?;
        Ok(r.roots.iter().map(|y| y.norm().ln().max(0.0)).sum())
    }

    /// Number of roots outside and inside the unit circle.
    fn state(&self, theta: f64) -> Result<(usize, usize), RootError> {
        let r = self.roots_at(Complex64::from_polar(1.0, theta))?;
        let outside = r.roots.iter().filter(|y| y.norm() > 1.0 + ON_CIRCLE).count();
        let inside = r.roots.iter().filter(|y| y.norm() < 1.0 - ON_CIRCLE).count();
        Ok((outside, inside))
    }
}

/// Roots in `y` of `P(x, .)` for `x` on the unit circle.
pub fn roots_in_y(p: &RealPoly, x: Complex64) -> Result<FiberRoots, MahlerError> {
    if p.is_zero() {
        return Err(MahlerError::ZeroPolynomial);
    }
    if (x.norm() - 1.0).abs() > 1e-12 {
        return Err(MahlerError::NotOnUnitCircle(x));
    }
    Ok(Fibration::new(p).roots_at(x)?)
}

/// Mahler measure of a one-variable polynomial, `log|lead| + sum log+|root|`.
pub fn mahler_measure_1d(p: &LaurentPoly1) -> Result<f64, RootError> {
    let c = p.trimmed();
    let Some(&lead) = c.last() else {
        return Ok(f64::NEG_INFINITY);
    };
    let cc: Vec<Complex64> = c.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let roots = poly_roots(&cc)?;
    Ok(lead.abs().ln() + roots.iter().map(|r| r.norm().ln().max(0.0)).sum::<f64>())
}

/// Points in `(0, pi)` where the leading coefficient vanishes on the circle.
fn leading_zero_angles(lead: &LaurentPoly1) -> Result<Vec<f64>, RootError> {
    let c = lead.trimmed();
    if c.len() < 2 {
        return Ok(Vec::new());
    }
    let cc: Vec<Complex64> = c.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    Ok(poly_roots(&cc)?
        .into_iter()
        .filter(|r| (r.norm() - 1.0).abs() < 1e-8)
        .map(|r| r.arg())
        .filter(|&t| t > 1e-12 && t < PI - 1e-12)
        .collect())
}

/// Locates the angles in `(0, pi)` at which the number of roots inside or
/// outside the unit circle changes.
fn kink_angles(fib: &Fibration, avoid: &[f64]) -> Result<Vec<f64>, RootError> {
    let near_avoid = |t: f64| avoid.iter().any(|&a| (a - t).abs() < 1e-10);
    let grid: Vec<f64> = (0..=KINK_GRID)
        .map(|i| PI * i as f64 / KINK_GRID as f64)
        .filter(|&t| !near_avoid(t))
        .collect();
    let states = grid.iter().map(|&t| fib.state(t)).collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::new();
    for w in 0..grid.len() - 1 {
        let (mut left, right) = (grid[w], grid[w + 1]);
        let mut s_left = states[w];
        let s_right = states[w + 1];
        let mut guard = 0;
        while s_left != s_right && guard < 8 {
            guard += 1;
            let (mut lo, mut hi) = (left, right);
            while hi - lo > 1e-15 * hi.max(1.0) {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if fib.state(mid)? == s_left {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let at = 0.5 * (lo + hi);
            if !near_avoid(at) && at > 1e-13 && at < PI - 1e-13 {
                out.push(at);
            }
            left = hi;
            s_left = fib.state(hi)?;
        }
    }
    Ok(out)
}

/// Mahler measure by Jensen's formula in `y`.
pub fn mahler_jensen(p: &RealPoly, tol: f64) -> Result<MeasureResult, MahlerError> {
    if p.is_zero() {
        return Err(MahlerError::ZeroPolynomial);
    }
    let fib = Fibration::new(p);
    let lead_m = mahler_measure_1d(fib.leading())?;
    if fib.degree() == 0 {
        return Ok(MeasureResult { value: lead_m, err_est: 1e-15 * lead_m.abs().max(1.0), method: Method::ClosedForm });
    }

    let mut cuts = leading_zero_angles(fib.leading())?;
    let kinks = kink_angles(&fib, &cuts)?;
    cuts.extend(kinks);
    cuts.push(0.0);
    cuts.push(PI);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-13);

    let share = tol / cuts.len() as f64;
    let mut total = QuadResult { value: 0.0, err_est: 0.0, evals: 0 };
    let mut failure = None;
    for w in cuts.windows(2) {
        let f = |theta: f64| match fib.log_plus_sum(Complex64::from_polar(1.0, theta)) {
            Ok(v) => v,
            Err(_) => f64::NAN,
        };
        match tanh_sinh(&f, w[0], w[1], share) {
            Ok(r) => total = total + r,
            Err(QuadError::NoConvergence { best }) => {
                total = total + best;
                failure = Some(());
            }
            Err(e) => return Err(e.into()),
        }
    }
    let integral = total.scaled(1.0 / PI);
    let value = lead_m + integral.value;
    // pieces are budgeted absolutely; the contract is on the total
    if failure.is_some() && integral.err_est > tol * value.abs().max(1.0) {
        return Err(MahlerError::Quad(QuadError::NoConvergence {
            best: QuadResult { value, ..integral },
        }));
    }
    Ok(MeasureResult {
        value,
        err_est: integral.err_est + 1e-14 * lead_m.abs().max(1.0),
        method: Method::Jensen1d,
    })
}

struct LogAbsOnTorus {
    coeffs: Vec<LaurentPoly1>,
}

impl TorusIntegrand for LogAbsOnTorus {
    fn row_sum(&self, theta_x: f64, thetas_y: &[f64]) -> f64 {
        let x = Complex64::from_polar(1.0, theta_x);
        let a: Vec<Complex64> = self.coeffs.iter().map(|c| c.eval(x)).collect();
        thetas_y
            .iter()
            .map(|&ty| {
                let y = Complex64::from_polar(1.0, ty);
                let v = a.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * y + c);
                v.norm().ln()
            })
            .sum()
    }
}

/// Mahler measure as the torus average of `log|P|`.
pub fn mahler_torus2(p: &RealPoly, tol: f64) -> Result<MeasureResult, MahlerError> {
    if p.is_zero() {
        return Err(MahlerError::ZeroPolynomial);
    }
    let g = LogAbsOnTorus { coeffs: p.y_coefficients().1 };
    let r = integrate_torus2(&g, tol)?;
    Ok(MeasureResult { value: r.value, err_est: r.err_est, method: Method::Torus2d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpoly::parse_real;

    fn poly(s: &str) -> RealPoly {
        parse_real(s, None).unwrap()
    }

    #[test]
    fn monomials_and_constants() {
        let m = mahler_jensen(&poly("2*x*y"), DEFAULT_TOL).unwrap();
        assert!((m.value - 2f64.ln()).abs() < 1e-14);
        let m = mahler_jensen(&poly("7"), DEFAULT_TOL).unwrap();
        assert!((m.value - 7f64.ln()).abs() < 1e-14);
        assert_eq!(m.method, Method::ClosedForm);
        let m = mahler_torus2(&poly("7"), DEFAULT_TORUS_TOL).unwrap();
        assert!((m.value - 7f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn cyclotomic_in_x_alone_vanishes() {
        let m = mahler_jensen(&poly("(x^2+x+1)*(x^4-x^2+1)*(x+1)"), DEFAULT_TOL).unwrap();
        assert!(m.value.abs() < 1e-13, "{}", m.value);
    }

    #[test]
    fn linear_in_y() {
        let m = mahler_jensen(&poly("y-5"), DEFAULT_TOL).unwrap();
        assert!((m.value - 5f64.ln()).abs() < 1e-13);
        let r = roots_in_y(&poly("y-5"), Complex64::new(0.0, 1.0)).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert!((r.roots[0] - 5.0).norm() < 1e-15);
    }

    #[test]
    fn r_family_vieta_product() {
        // wt R_k at cos(theta) = 0: y1 y2 = 3
        let p = parse_real("(x+x^-1)*y^2-k*y-(x^3+x^-3)", Some(2.5)).unwrap();
        let x = Complex64::from_polar(1.0, 0.5 * PI + 1e-3);
        let r = roots_in_y(&p, x).unwrap();
        let c = x.re;
        let prod = r.roots[0] * r.roots[1];
        assert!((prod.norm() - (3.0 - 4.0 * c * c).abs()).abs() < 1e-10);
        assert!(r.roots[0].norm() >= r.roots[1].norm());
    }

    #[test]
    fn degenerate_fibre_drops_degree() {
        let p = poly("(x^2+x+1)*y^2 + y + 1");
        let x = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let r = roots_in_y(&p, x).unwrap();
        assert!(r.degree_dropped);
        assert_eq!(r.roots.len(), 1);
        assert!((r.roots[0] + 1.0).norm() < 1e-12);
        assert!(matches!(
            roots_in_y(&p, Complex64::new(2.0, 0.0)),
            Err(MahlerError::NotOnUnitCircle(_))
        ));
        assert_eq!(mahler_jensen(&RealPoly::zero(), 1e-9), Err(MahlerError::ZeroPolynomial));
    }

    #[test]
    fn linear_polynomial_measure() {
        // m(x + y - 1) = L'(chi_-3, -1) = 3 sqrt(3)/(4 pi) L(chi_-3, 2)
        let m = mahler_jensen(&poly("x+y-1"), DEFAULT_TOL).unwrap();
        assert!((m.value - 0.323_065_947_219_450_5).abs() < 1e-12, "{}", m.value);
    }

    #[test]
    fn family_members_at_k_3() {
        let p = parse_real("(x^2+x+1)*y^2+k*x*(x+1)*y+x*(x^2+x+1)", Some(3.0)).unwrap();
        let m = mahler_jensen(&p, DEFAULT_TOL).unwrap();
        assert!((m.value - 0.999_051_831_521_891_2).abs() < 1e-11, "{}", m.value);
        let r = parse_real("y^3-y+x^3-x+k*x*y", Some(3.0)).unwrap();
        let m = mahler_jensen(&r, DEFAULT_TOL).unwrap();
        assert!((m.value - 1.011_513_888_510_5).abs() < 1e-11, "{}", m.value);
    }

    #[test]
    fn torus_agrees_with_jensen() {
        for s in ["x+y-1", "y^3-y+x^3-x+3*x*y", "1+x+y+x*y+2*x^2*y"] {
            let p = poly(s);
            let j = mahler_jensen(&p, DEFAULT_TOL).unwrap();
            let t = mahler_torus2(&p, DEFAULT_TORUS_TOL).unwrap();
            assert!((j.value - t.value).abs() < 1e-5, "{s}: {} vs {}", j.value, t.value);
        }
    }

    #[test]
    fn invariant_under_swap_and_inversion() {
        let p = poly("2+x+3*y+x*y^2-x^2");
        let base = mahler_jensen(&p, DEFAULT_TOL).unwrap().value;
        let maps = [[[0, 1], [1, 0]], [[-1, 0], [0, 1]], [[1, 1], [0, 1]], [[2, 1], [1, 1]]];
        for m in maps {
            let q = p.monomial_transform(m, (0, 0)).unwrap();
            let v = mahler_jensen(&q, DEFAULT_TOL).unwrap().value;
            assert!((v - base).abs() < 1e-10, "{m:?}: {v} vs {base}");
        }
    }
}
