//! The three families
//!
//! ```text
//! P_k = (x^2+x+1) y^2 + k x (x+1) y + x (x^2+x+1)
//! Q_k = (x^2+x+1) y^2 + (x^4 + k x^3 + (2k-4) x^2 + k x + 1) y + x^2 (x^2+x+1)
//! R_k = y^3 - y + x^3 - x + k x y
//! ```
//!
//! with one-dimensional integral representations of their measures
//! `p(k)`, `q(k+2)`, `r(k)` and piecewise elliptic formulas for the
//! derivatives in `k`.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::elliptic::{period_integral, v_quadratic_roots, v_spec, CubicPeriodSpec, EllipticError};
use crate::lpoly::{parse_poly, RealPoly, SymPoly};
use crate::mahler::{mahler_jensen, MahlerError, MeasureResult, Method};
use crate::quad::{tanh_sinh, Offsets, QuadError, QuadResult};
use crate::roots::quadratic_roots;

/// `16 / (3 sqrt 3)`, above which `r'(k)` is a complete period.
pub const R_THRESHOLD: f64 = 3.079_201_435_678_004;
pub const TWO_SQRT_2: f64 = 2.0 * SQRT_2;
/// Relative guard band around regime boundaries.
pub const BOUNDARY_GUARD: f64 = 1e-12;

const DERIVATIVE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FamilyError {
    #[error("k must be positive (got {0})")]
    NonPositiveK(f64),
    #[error("k = {k} sits on the regime boundary {boundary}")]
    Boundary { k: f64, boundary: f64 },
    #[error("t-roots exist only for 0 < k < 16/(3 sqrt 3) (got {0})")]
    NoTRoots(f64),
    #[error("the fibre degenerates at theta = {0}")]
    DegenerateFiber(f64),
    #[error("k = {k} is outside the hypothesis of {lemma}")]
    OutsideHypothesis { lemma: &'static str, k: f64 },
    #[error(transparent)]
    Mahler(#[from] MahlerError),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    Quad(#[from] QuadError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    P,
    Q,
    R,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::P, Family::Q, Family::R];

    pub fn source(self) -> &'static str {
        match self {
            Family::P => "(x^2+x+1)*y^2+k*x*(x+1)*y+x*(x^2+x+1)",
            Family::Q => "(x^2+x+1)*y^2+(x^4+k*x^3+(2*k-4)*x^2+k*x+1)*y+x^2*(x^2+x+1)",
            Family::R => "y^3-y+x^3-x+k*x*y",
        }
    }

    /// The reduced form quadratic in `y` with the same measure.
    pub fn tilde_source(self) -> &'static str {
        match self {
            Family::P => "(x^2+x^-2+1)*y^2+k*(x+x^-1)*y+(x^2+x^-2+1)",
            Family::Q => "(x+x^-1+1)*y^2+(x^2+x^-2+k*(x+x^-1)+2*k-4)*y+(x+x^-1+1)",
            Family::R => "(x+x^-1)*y^2-k*y-(x^3+x^-3)",
        }
    }

    pub fn symbolic(self) -> SymPoly {
        parse_poly(self.source()).expect("built-in family parses")
    }

    pub fn symbolic_tilde(self) -> SymPoly {
        parse_poly(self.tilde_source()).expect("built-in family parses")
    }

    pub fn polynomial(self, k: f64) -> RealPoly {
        self.symbolic().specialize(k)
    }

    pub fn tilde(self, k: f64) -> RealPoly {
        self.symbolic_tilde().specialize(k)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::P => "P",
            Family::Q => "Q",
            Family::R => "R",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "P" | "p" => Ok(Family::P),
            "Q" | "q" => Ok(Family::Q),
            "R" | "r" => Ok(Family::R),
            _ => Err(format!("unknown family '{s}' (expected P, Q or R)")),
        }
    }
}

/// Open parameter intervals on which one derivative formula holds. For `Q`
/// the parameter is `k` in `Q_{k+2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    PBelow3,
    PAbove3,
    QUpTo3,
    QBetween3And4,
    QAbove4,
    RBelow2Sqrt2,
    RBelowThreshold,
    RAboveThreshold,
}

impl Regime {
    pub fn classify(family: Family, k: f64) -> Regime {
        match family {
            Family::P if k < 3.0 => Regime::PBelow3,
            Family::P => Regime::PAbove3,
            Family::Q if k <= 3.0 => Regime::QUpTo3,
            Family::Q if k < 4.0 => Regime::QBetween3And4,
            Family::Q => Regime::QAbove4,
            Family::R if k < TWO_SQRT_2 => Regime::RBelow2Sqrt2,
            Family::R if k < R_THRESHOLD => Regime::RBelowThreshold,
            Family::R => Regime::RAboveThreshold,
        }
    }

    pub fn boundaries(family: Family) -> &'static [f64] {
        match family {
            Family::P => &[3.0],
            Family::Q => &[3.0, 4.0],
            Family::R => &[TWO_SQRT_2, R_THRESHOLD],
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::PBelow3 => "k<3",
            Regime::PAbove3 => "k>=3",
            Regime::QUpTo3 => "0<k<=3",
            Regime::QBetween3And4 => "3<k<4",
            Regime::QAbove4 => "k>=4",
            Regime::RBelow2Sqrt2 => "k<2sqrt2",
            Regime::RBelowThreshold => "2sqrt2<=k<16/(3sqrt3)",
            Regime::RAboveThreshold => "k>=16/(3sqrt3)",
        })
    }
}

/// A parameter value away from every regime boundary of its family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyPoint {
    pub family: Family,
    pub k: f64,
    pub regime: Regime,
}

impl FamilyPoint {
    /// `P` and `R` are even in `k`, so negative values are folded; `Q` is
    /// taken as given.
    pub fn new(family: Family, k: f64) -> Result<Self, FamilyError> {
        let k = match family {
            Family::P | Family::R => k.abs(),
            Family::Q => k,
        };
        if !(k > 0.0 && k.is_finite()) {
            return Err(FamilyError::NonPositiveK(k));
        }
        if let Some(&b) = Regime::boundaries(family).iter().find(|&&b| on_boundary(k, b)) {
            return Err(FamilyError::Boundary { k, boundary: b });
        }
        Ok(Self { family, k, regime: Regime::classify(family, k) })
    }
}

pub fn on_boundary(k: f64, b: f64) -> bool {
    (k - b).abs() <= BOUNDARY_GUARD * b.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalRoots {
    /// Roots of `16c^2 - (8+k^2)c + 1`.
    pub c_minus: f64,
    pub c_plus: f64,
    /// Roots of `8t^3 - 8t + k` in `(0, 1)`, for `0 < k < 16/(3 sqrt 3)`.
    pub t: Option<(f64, f64)>,
}

pub fn c_roots(k: f64) -> (f64, f64) {
    let k = k.abs();
    let c_plus = (8.0 + k * k + k * (16.0 + k * k).sqrt()) / 32.0;
    (1.0 / (16.0 * c_plus), c_plus)
}

pub fn t_roots(k: f64) -> Result<(f64, f64), FamilyError> {
    if !(k > 0.0) {
        return Err(FamilyError::NonPositiveK(k));
    }
    if k >= R_THRESHOLD {
        return Err(FamilyError::NoTRoots(k));
    }
    // t^3 - t + k/8 = 0 by the trigonometric method
    let phi = (-3.0 * 3f64.sqrt() * k / 16.0).clamp(-1.0, 1.0).acos() / 3.0;
    let r = 2.0 / 3f64.sqrt();
    let polish = |t: f64| {
        let f = 8.0 * t * t * t - 8.0 * t + k;
        let df = 24.0 * t * t - 8.0;
        let step = f / df;
        if df.abs() > 1e-6 && step.abs() < 1e-6 {
            t - step
        } else {
            t
        }
    };
    let t2 = polish(r * phi.cos());
    let t1 = polish(r * (phi - 2.0 * PI / 3.0).cos());
    Ok((t1, t2))
}

pub fn critical_roots(k: f64) -> Result<CriticalRoots, FamilyError> {
    let k = k.abs();
    if k == 0.0 || !k.is_finite() {
        return Err(FamilyError::NonPositiveK(k));
    }
    let (c_minus, c_plus) = c_roots(k);
    let t = (k < R_THRESHOLD).then(|| t_roots(k)).transpose()?;
    Ok(CriticalRoots { c_minus, c_plus, t })
}

/// Integrates `f(theta)` over `[0, pi/2]` split at `cuts`, scaled by `2/pi`.
fn half_period_integral<F>(f: F, cuts: &[f64], tol: f64) -> Result<QuadResult, FamilyError>
where
    F: Fn(f64, f64, f64) -> f64,
{
    let mut pts = vec![0.0, FRAC_PI_2];
    pts.extend(cuts.iter().copied().filter(|&c| c > 0.0 && c < FRAC_PI_2));
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    let share = tol / (pts.len() - 1) as f64;
    let mut acc = QuadResult { value: 0.0, err_est: 0.0, evals: 0 };
    for w in pts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let g = Offsets(|th: f64, da: f64, db: f64| f(th, if lo == 0.0 { da } else { th }, if hi == FRAC_PI_2 { db } else { FRAC_PI_2 - th }));
        acc = acc + tanh_sinh(&g, lo, hi, share)?;
    }
    Ok(acc.scaled(2.0 / PI))
}

fn measure(r: QuadResult) -> MeasureResult {
    MeasureResult { value: r.value, err_est: r.err_est, method: Method::Jensen1d }
}

/// `p(k) = (1/pi) \int_0^pi log|k|cos t| + sqrt(-(16c^2-(8+k^2)c+1))| dt`,
/// `c = cos^2 t`.
pub fn p_measure(k: f64, tol: f64) -> Result<MeasureResult, FamilyError> {
    let k = k.abs();
    let (cm, cp) = c_roots(k);
    let cuts: Vec<f64> = [cm, cp].iter().filter(|&&c| c > 0.0 && c < 1.0).map(|c| c.sqrt().acos()).collect();
    // `dist_right` is pi/2 - theta, exact near the right end
    let f = |th: f64, _: f64, dist_right: f64| {
        let cos = dist_right.sin();
        let c = cos * cos;
        let r = -16.0 * (c - cm) * (c - cp);
        if r >= 0.0 {
            (k * cos + r.sqrt()).ln()
        } else {
            let _ = th;
            (4.0 * c - 1.0).abs().ln()
        }
    };
    Ok(measure(half_period_integral(f, &cuts, tol)?))
}

/// `q(K) = m(Q_K)` by the Jensen engine on the reduced form.
pub fn q_measure(k_plus_2: f64, tol: f64) -> Result<MeasureResult, FamilyError> {
    Ok(mahler_jensen(&Family::Q.tilde(k_plus_2), tol)?)
}

/// `k^2 - 16 t^2 (3 - 4 t^2)`, factored when it has real zeros.
fn r_disc(k: f64, t: f64) -> f64 {
    let c = t * t;
    if k <= 3.0 {
        let d = (9.0 - k * k).sqrt();
        64.0 * (c - (3.0 - d) / 8.0) * (c - (3.0 + d) / 8.0)
    } else {
        k * k - 16.0 * c * (3.0 - 4.0 * c)
    }
}

/// `Re log((k + sqrt D)/2)`.
fn r_branch_plus_half(k: f64, t: f64) -> f64 {
    let d = r_disc(k, t);
    if d >= 0.0 {
        (0.5 * (k + d.sqrt())).ln()
    } else {
        (2.0 * t).ln() + 0.5 * (3.0 - 4.0 * t * t).abs().ln()
    }
}

/// `Re log((k +- sqrt D)/(4t))`.
fn r_branch(k: f64, t: f64, plus: bool) -> f64 {
    let d = r_disc(k, t);
    if d < 0.0 {
        return 0.5 * (3.0 - 4.0 * t * t).abs().ln();
    }
    let s = d.sqrt();
    if plus {
        ((k + s) / (4.0 * t)).ln()
    } else {
        // (k - s)/(4t) = 4t(3-4t^2)/(k+s)
        (4.0 * t * (3.0 - 4.0 * t * t) / (k + s)).ln()
    }
}

/// `(2/pi) \int_{t=a}^{b} g(t) dt/sqrt(1-t^2)` with `t = cos theta`.
fn t_integral<G: Fn(f64) -> f64>(g: G, a: f64, b: f64, cuts_t: &[f64], tol: f64) -> Result<QuadResult, FamilyError> {
    let (lo, hi) = (b.acos(), a.acos());
    if lo >= hi {
        return Ok(QuadResult { value: 0.0, err_est: 0.0, evals: 0 });
    }
    let mut pts = vec![lo, hi];
    pts.extend(cuts_t.iter().map(|t| t.acos()).filter(|&th| th > lo && th < hi));
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|x, y| (*x - *y).abs() < 1e-15);
    let share = tol / (pts.len() - 1) as f64;
    let mut acc = QuadResult { value: 0.0, err_est: 0.0, evals: 0 };
    for w in pts.windows(2) {
        let right_is_zero = w[1] == FRAC_PI_2;
        let f = Offsets(|th: f64, _: f64, db: f64| g(if right_is_zero { db.sin() } else { th.cos() }));
        acc = acc + tanh_sinh(&f, w[0], w[1], share)?;
    }
    Ok(acc.scaled(2.0 / PI))
}

/// `r(k)` from the regime-specific `t`-integrals.
pub fn r_measure(k: f64, tol: f64) -> Result<MeasureResult, FamilyError> {
    let k = k.abs();
    // D is smallest at t^2 = 3/8, sharply so near k = 3
    let mut cuts = vec![(3.0f64 / 8.0).sqrt()];
    if k <= 3.0 {
        let d = (9.0 - k * k).sqrt();
        cuts.push(((3.0 - d) / 8.0).sqrt());
        cuts.push(((3.0 + d) / 8.0).sqrt());
    }
    let inv_sqrt2 = 1.0 / SQRT_2;
    let base = t_integral(|t| r_branch_plus_half(k, t), 0.0, 1.0, &cuts, tol / 3.0)?;
    if k >= R_THRESHOLD {
        return Ok(measure(base));
    }
    let (t1, t2) = t_roots(k)?;
    let minus = |t: f64| r_branch(k, t, false);
    let total = if k >= TWO_SQRT_2 {
        base + t_integral(minus, t1, t2, &cuts, tol / 3.0)?
    } else {
        // \int_0^{1/sqrt2} + \int_{t2}^1 of the plus branch, written as
        // the full range minus [1/sqrt2, t2]
        let plus = |t: f64| r_branch(k, t, true);
        base + t_integral(plus, inv_sqrt2, t2, &cuts, tol / 3.0)?.scaled(-1.0)
            + t_integral(minus, t1, inv_sqrt2, &cuts, tol / 3.0)?
    };
    Ok(measure(total))
}

pub fn family_measure(family: Family, k: f64, tol: f64) -> Result<MeasureResult, FamilyError> {
    match family {
        Family::P => p_measure(k, tol),
        Family::Q => q_measure(k, tol),
        Family::R => r_measure(k, tol),
    }
}

/// `p'(k)`, the `v`-period over `[max(-12, -k(k+s)/2), k(s-k)/2]` over pi.
pub fn p_derivative(k: f64) -> Result<f64, FamilyError> {
    let pt = FamilyPoint::new(Family::P, k)?;
    let (r1, r2) = v_quadratic_roots(pt.k);
    Ok(period_integral(&v_spec(pt.k, r1.max(-12.0), r2), DERIVATIVE_TOL)? / PI)
}

/// `d q(k+2) / dk` from the three-regime `v`-integral formulas.
pub fn q_derivative(k: f64) -> Result<f64, FamilyError> {
    let pt = FamilyPoint::new(Family::Q, k)?;
    let k = pt.k;
    let (r1, _) = v_quadratic_roots(k);
    let per = |a: f64, b: f64| period_integral(&v_spec(k, a, b), DERIVATIVE_TOL);
    let mid = k * (1.0 - k);
    let v = match pt.regime {
        Regime::QUpTo3 => per(f64::NEG_INFINITY, -12.0)? - per(r1, mid)?,
        Regime::QBetween3And4 => per(f64::NEG_INFINITY, r1)? - per(-12.0, mid)?,
        _ => per(f64::NEG_INFINITY, r1)?,
    };
    Ok(v / PI)
}

/// `d q(k+2) / dk` from the `t`-integral
/// `(1/pi) Re \int_{-1}^1 sign(B) / sqrt((1-t)(2t+k-2)(2t^2+(k+4)t+k)) dt`,
/// splitting wherever the radicand or `B = 2t^2+(k+2)t+k-1` changes sign.
/// Note `d/dk log|y1| = +sign(B) (2 cos theta + 2) / sqrt(Delta)`.
pub fn q_derivative_t_form(k: f64) -> Result<f64, FamilyError> {
    let pt = FamilyPoint::new(Family::Q, k)?;
    let k = pt.k;
    let s = (16.0 + k * k).sqrt();
    let roots = [1.0, 1.0 - 0.5 * k, (-k - 4.0 - s) / 4.0, (-k - 4.0 + s) / 4.0];
    let b = |t: f64| 2.0 * t * t + (k + 2.0) * t + k - 1.0;
    let db = ((k + 2.0) * (k + 2.0) - 8.0 * (k - 1.0)).sqrt();
    let mut cuts: Vec<f64> = vec![-1.0, 1.0];
    cuts.extend(roots.iter().copied());
    cuts.extend([(-(k + 2.0) - db) / 4.0, (-(k + 2.0) + db) / 4.0]);
    cuts.retain(|&c| (-1.0..=1.0).contains(&c));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let spec = CubicPeriodSpec::new(-4.0, &roots, w[0], w[1]);
        let mid = 0.5 * (w[0] + w[1]);
        if spec.radicand(mid) <= 0.0 {
            continue;
        }
        total += b(mid).signum() * period_integral(&spec, DERIVATIVE_TOL)?;
    }
    Ok(total / PI)
}

/// `r'(k)`: the complete `c`-period above `16/(3 sqrt 3)`, two incomplete
/// pieces below.
pub fn r_derivative(k: f64) -> Result<f64, FamilyError> {
    let pt = FamilyPoint::new(Family::R, k)?;
    let k = pt.k;
    let spec = |a: f64, b: f64| {
        if k < 3.0 {
            let d = (9.0 - k * k).sqrt();
            CubicPeriodSpec::new(-64.0, &[0.0, 1.0, (3.0 - d) / 8.0, (3.0 + d) / 8.0], a, b)
        } else {
            CubicPeriodSpec::new(-1.0, &[0.0, 1.0], a, b).with_quad_factor([k * k, -48.0, 64.0])
        }
    };
    let v = if pt.regime == Regime::RAboveThreshold {
        period_integral(&spec(0.0, 1.0), DERIVATIVE_TOL)?
    } else {
        let (t1, t2) = t_roots(k)?;
        period_integral(&spec(0.0, t1 * t1), DERIVATIVE_TOL)? + period_integral(&spec(t2 * t2, 1.0), DERIVATIVE_TOL)?
    };
    Ok(v / PI)
}

pub fn family_derivative(family: Family, k: f64) -> Result<f64, FamilyError> {
    match family {
        Family::P => p_derivative(k),
        Family::Q => q_derivative(k),
        Family::R => r_derivative(k),
    }
}

/// Central difference `(f(k+h) - f(k-h)) / 2h`.
pub fn central_difference<E>(f: impl Fn(f64) -> Result<f64, E>, k: f64, h: f64) -> Result<f64, E> {
    Ok((f(k + h)? - f(k - h)?) / (2.0 * h))
}

/// Roots `(y1, y2)`, `|y1| >= |y2|`, of the reduced form at `x = e^{i theta}`.
/// `param` is the polynomial subscript (`K` for `Q_K`).
pub fn branch_roots(family: Family, param: f64, theta: f64) -> Result<(Complex64, Complex64), FamilyError> {
    let u = 2.0 * theta.cos();
    let (a, b, c) = match family {
        Family::P => {
            let a = u * u - 1.0;
            (a, param * u, a)
        }
        Family::Q => (u + 1.0, u * u + param * u + 2.0 * param - 6.0, u + 1.0),
        Family::R => (u, -param, -(u * u * u - 3.0 * u)),
    };
    if a.abs() < 1e-14 {
        return Err(FamilyError::DegenerateFiber(theta));
    }
    let cplx = |v: f64| Complex64::new(v, 0.0);
    let [r0, r1] = quadratic_roots(cplx(a), cplx(b), cplx(c));
    Ok(if r0.norm() >= r1.norm() { (r0, r1) } else { (r1, r0) })
}

/// Outcome of one root-classification lemma on a `theta` grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaCheck {
    pub lemma: &'static str,
    pub k: f64,
    pub holds: bool,
    /// Largest violation measure seen (0 when vacuous).
    pub worst: f64,
}

pub const LEMMA_TOL: f64 = 1e-10;

fn theta_grid(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |j| PI * (j as f64 + 0.5) / n as f64)
}

/// `R`-roots are real for `k >= 3`; for `k < 3` they are conjugate with
/// modulus `|3 - 4c|^(1/2)` inside `c_a < c < c_b` and exceed 1 exactly on
/// the band given by the lemma.
pub fn lemma_x(k: f64, n: usize) -> Result<LemmaCheck, FamilyError> {
    let k = k.abs();
    let mut worst = 0.0f64;
    let mut ok = true;
    for th in theta_grid(n) {
        let (y1, y2) = branch_roots(Family::R, k, th)?;
        let c = th.cos().powi(2);
        if k >= 3.0 {
            worst = worst.max(y1.im.abs()).max(y2.im.abs());
            continue;
        }
        let d = (9.0 - k * k).sqrt();
        let (ca, cb) = ((3.0 - d) / 8.0, (3.0 + d) / 8.0);
        if c <= ca + 1e-9 || c >= cb - 1e-9 {
            worst = worst.max(y1.im.abs()).max(y2.im.abs());
            continue;
        }
        let m = (3.0 - 4.0 * c).abs().sqrt();
        worst = worst.max((y1.norm() - m).abs()).max((y2.norm() - m).abs()).max((y1 - y2.conj()).norm());
        let upper = if k < TWO_SQRT_2 { 0.5 } else { cb };
        if (c - 0.5).abs() > 1e-9 {
            ok &= (y1.norm() > 1.0) == (c < upper);
        }
    }
    Ok(LemmaCheck { lemma: "lem:x", k, holds: ok && worst < LEMMA_TOL, worst })
}

/// `|y1| >= 1` for `k >= 2 sqrt 2`.
pub fn lemma_y1(k: f64, n: usize) -> Result<LemmaCheck, FamilyError> {
    let k = k.abs();
    if k < TWO_SQRT_2 {
        return Err(FamilyError::OutsideHypothesis { lemma: "lem:y1", k });
    }
    let mut worst = 0.0f64;
    for th in theta_grid(n) {
        let (y1, _) = branch_roots(Family::R, k, th)?;
        worst = worst.max(1.0 - y1.norm());
    }
    Ok(LemmaCheck { lemma: "lem:y1", k, holds: worst <= LEMMA_TOL, worst: worst.max(0.0) })
}

/// `|y2| <= 1` for `k >= 16/(3 sqrt 3)`.
pub fn lemma_y2(k: f64, n: usize) -> Result<LemmaCheck, FamilyError> {
    let k = k.abs();
    if k < R_THRESHOLD {
        return Err(FamilyError::OutsideHypothesis { lemma: "lem:y2", k });
    }
    let mut worst = 0.0f64;
    for th in theta_grid(n) {
        let (_, y2) = branch_roots(Family::R, k, th)?;
        worst = worst.max(y2.norm() - 1.0);
    }
    Ok(LemmaCheck { lemma: "lem:y2", k, holds: worst <= LEMMA_TOL, worst: worst.max(0.0) })
}

/// At `|cos theta| = t1`, `|y2| = 1`; at `t2`, `|y1| = 1` for
/// `k <= 2 sqrt 2` and `|y2| = 1` above.
pub fn lemma_y3(k: f64) -> Result<LemmaCheck, FamilyError> {
    let k = k.abs();
    if k >= R_THRESHOLD {
        return Err(FamilyError::OutsideHypothesis { lemma: "lem:y3", k });
    }
    let (t1, t2) = t_roots(k)?;
    let (_, y2) = branch_roots(Family::R, k, t1.acos())?;
    let (z1, z2) = branch_roots(Family::R, k, t2.acos())?;
    let at_t2 = if k <= TWO_SQRT_2 { z1 } else { z2 };
    let worst = (y2.norm() - 1.0).abs().max((at_t2.norm() - 1.0).abs());
    Ok(LemmaCheck { lemma: "lem:y3", k, holds: worst < LEMMA_TOL, worst })
}
