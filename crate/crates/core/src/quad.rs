//! One-dimensional quadrature with endpoint-singularity handling, and the
//! periodic tensor rule on the torus used as a cross-check.
//!
//! Integrands see the abscissa together with its exact distances to both
//! endpoints. Near a singular endpoint `x` itself rounds to the endpoint
//! long before the tanh-sinh nodes stop contributing, so integrands of the
//! form `1/sqrt(x - a)` should use the distance rather than `x - a`; see
//! [`Offsets`].

use std::f64::consts::{FRAC_PI_2, PI};

use thiserror::Error;

/// Deepest tanh-sinh refinement level (step `2^-MAX_LEVEL`).
const TS_MAX_LEVEL: u32 = 9;
/// Truncation of the tanh-sinh parameter range.
const TS_T_MAX: f64 = 6.5;
const ROUNDOFF_ULPS: f64 = 64.0;
const GK_MAX_INTERVALS: usize = 4000;
const TORUS_MIN_N: usize = 32;
const TORUS_MAX_N: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Estimated absolute error.
    pub err_est: f64,
    pub evals: usize,
}

impl QuadResult {
    pub fn scaled(self, s: f64) -> Self {
        Self { value: self.value * s, err_est: self.err_est * s.abs(), ..self }
    }
}

impl std::ops::Add for QuadResult {
    type Output = QuadResult;
    fn add(self, rhs: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + rhs.value,
            err_est: self.err_est + rhs.err_est,
            evals: self.evals + rhs.evals,
        }
    }
}

impl std::iter::Sum for QuadResult {
    fn sum<I: Iterator<Item = QuadResult>>(iter: I) -> QuadResult {
        iter.fold(QuadResult { value: 0.0, err_est: 0.0, evals: 0 }, |a, b| a + b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SingularityHint {
    None,
    InverseSqrtLeft,
    InverseSqrtRight,
    InverseSqrtBoth,
    /// Integrable logarithmic singularities strictly inside the interval.
    LogInterior(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("tolerance must be positive and finite")]
    InvalidTolerance,
    #[error("singular point {0} is not strictly inside the interval")]
    PointOutside(f64),
    #[error("integrand is not finite at x = {x}")]
    NonFinite { x: f64 },
    #[error("no convergence; best estimate {} +- {}", best.value, best.err_est)]
    NoConvergence { best: QuadResult },
}

/// A function to integrate, evaluated at `x` with `x - a` and `b - x`
/// supplied separately (infinite when the endpoint is).
pub trait Integrand {
    fn eval(&self, x: f64, from_a: f64, from_b: f64) -> f64;

    /// Whether the integrand reads the endpoint distances. Nodes whose
    /// abscissa rounds onto an endpoint are skipped otherwise.
    fn uses_offsets(&self) -> bool {
        false
    }
}

impl<F: Fn(f64) -> f64> Integrand for F {
    fn eval(&self, x: f64, _from_a: f64, _from_b: f64) -> f64 {
        self(x)
    }
}

/// Adapter for closures `|x, x - a, b - x|`.
pub struct Offsets<F>(pub F);

impl<F: Fn(f64, f64, f64) -> f64> Integrand for Offsets<F> {
    fn eval(&self, x: f64, from_a: f64, from_b: f64) -> f64 {
        (self.0)(x, from_a, from_b)
    }

    fn uses_offsets(&self) -> bool {
        true
    }
}

/// One piece `[lo, hi]` of `[a, b]`, keeping the distances to `a` and `b`
/// exact on the outer pieces.
struct Piece<'a, F> {
    f: &'a F,
    a: f64,
    b: f64,
    lo: f64,
    hi: f64,
}

impl<F: Integrand> Integrand for Piece<'_, F> {
    fn eval(&self, x: f64, da: f64, db: f64) -> f64 {
        if !self.f.uses_offsets() && (x <= self.lo || x >= self.hi) {
            return 0.0;
        }
        let fa = if self.lo == self.a { da } else { x - self.a };
        let fb = if self.hi == self.b { db } else { self.b - x };
        self.f.eval(x, fa, fb)
    }

    fn uses_offsets(&self) -> bool {
        true
    }
}

/// `[end, inf)` (sign +1) or `(-inf, end]` (sign -1) mapped onto `(0, 1]`
/// by `x = end + sign (1 - s)/s`. The `x^{-3/2}` decay of the period
/// integrands becomes an `s^{-1/2}` endpoint singularity.
struct HalfLine<'a, F> {
    f: &'a F,
    end: f64,
    sign: f64,
}

impl<F: Integrand> Integrand for HalfLine<'_, F> {
    fn eval(&self, _s: f64, s: f64, one_minus_s: f64) -> f64 {
        let dist = one_minus_s / s;
        let x = self.end + self.sign * dist;
        if !self.f.uses_offsets() && x == self.end {
            return 0.0;
        }
        let v = if self.sign > 0.0 {
            self.f.eval(x, dist, f64::INFINITY)
        } else {
            self.f.eval(x, f64::INFINITY, dist)
        };
        v / s / s
    }

    fn uses_offsets(&self) -> bool {
        true
    }
}

fn check(a: f64, b: f64, tol: f64) -> Result<(), QuadError> {
    if a.is_nan() || b.is_nan() || a >= b {
        return Err(QuadError::InvalidInterval { a, b });
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(QuadError::InvalidTolerance);
    }
    Ok(())
}

/// Integrates `f` over `[a, b]`.
///
/// Inverse-square-root hints and infinite endpoints use tanh-sinh, logarithmic
/// interior points split the interval and integrate each piece with
/// tanh-sinh, and everything else goes to adaptive Gauss–Kronrod.
pub fn integrate<F: Integrand>(
    f: &F,
    a: f64,
    b: f64,
    hint: &SingularityHint,
    tol: f64,
) -> Result<QuadResult, QuadError> {
    check(a, b, tol)?;
    if a.is_infinite() || b.is_infinite() {
        return tanh_sinh(f, a, b, tol);
    }
    match hint {
        SingularityHint::None => gauss_kronrod(f, a, b, tol),
        SingularityHint::InverseSqrtLeft | SingularityHint::InverseSqrtRight | SingularityHint::InverseSqrtBoth => {
            tanh_sinh(f, a, b, tol)
        }
        SingularityHint::LogInterior(points) => {
            let mut cuts = vec![a];
            let mut pts = points.clone();
            pts.sort_by(f64::total_cmp);
            for &p in &pts {
                if !(p > a && p < b) {
                    return Err(QuadError::PointOutside(p));
                }
                if p > *cuts.last().expect("nonempty") {
                    cuts.push(p);
                }
            }
            cuts.push(b);
            let share = tol / (cuts.len() - 1) as f64;
            cuts.windows(2)
                .map(|w| {
                    let (lo, hi) = (w[0], w[1]);
                    let piece = Piece { f, a, b, lo, hi };
                    tanh_sinh(&piece, lo, hi, share)
                })
                .sum()
        }
    }
}

/// Double-exponential quadrature on `[a, b]`; either endpoint may be infinite.
pub fn tanh_sinh<F: Integrand>(f: &F, a: f64, b: f64, tol: f64) -> Result<QuadResult, QuadError> {
    check(a, b, tol)?;
    match (a.is_infinite(), b.is_infinite()) {
        (false, false) => tanh_sinh_finite(f, a, b, tol),
        (false, true) => {
            // x = a + (1 - s)/s on s in (0, 1]; the x^{-3/2} decay of the
            // period integrands becomes an s^{-1/2} endpoint singularity
            tanh_sinh_finite(&HalfLine { f, end: a, sign: 1.0 }, 0.0, 1.0, tol)
        }
        (true, false) => {
            tanh_sinh_finite(&HalfLine { f, end: b, sign: -1.0 }, 0.0, 1.0, tol)
        }
        (true, true) => Ok(tanh_sinh(f, a, 0.0, tol / 2.0)? + tanh_sinh(f, 0.0, b, tol / 2.0)?),
    }
}

fn tanh_sinh_finite<F: Integrand>(f: &F, a: f64, b: f64, tol: f64) -> Result<QuadResult, QuadError> {
    let h = 0.5 * (b - a);
    let exact = f.uses_offsets();
    let evals = std::cell::Cell::new(0usize);

    let eval_at = |x: f64, da: f64, db: f64| -> Result<f64, QuadError> {
        evals.set(evals.get() + 1);
        let v = f.eval(x, da, db);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::NonFinite { x })
        }
    };

    // sum over nodes t = j * step with j stepping by `stride` from `first`
    let level_sum = |step: f64, first: usize, stride: usize| -> Result<(f64, f64), QuadError> {
        let mut s = 0.0;
        let mut abs = 0.0;
        let mut j = first;
        loop {
            let t = j as f64 * step;
            if t > TS_T_MAX {
                break;
            }
            let u = FRAC_PI_2 * t.sinh();
            let e = (-2.0 * u).exp();
            let dist = 2.0 * h * e / (1.0 + e);
            let w = h * FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
            if dist == 0.0 || w == 0.0 {
                break;
            }
            let (xr, xl) = (b - dist, a + dist);
            let mut any = false;
            if exact || (xr > a && xr < b) {
                let v = w * eval_at(xr, b - a - dist, dist)?;
                s += v;
                abs += v.abs();
                any = true;
            }
            if t > 0.0 && (exact || (xl > a && xl < b)) {
                let v = w * eval_at(xl, dist, b - a - dist)?;
                s += v;
                abs += v.abs();
                any = true;
            }
            if !any {
                break;
            }
            j += stride;
        }
        Ok((s, abs))
    };

    // level 0: all integers
    let (mut sum, mut abs) = level_sum(1.0, 0, 1)?;
    let mut estimate = sum;
    let mut err = f64::INFINITY;
    let mut step = 1.0;
    for level in 1..=TS_MAX_LEVEL {
        step *= 0.5;
        let (s, a) = level_sum(step, 1, 2)?;
        sum += s;
        abs += a;
        let next = sum * step;
        err = (next - estimate).abs();
        estimate = next;
        // differences below the rounding noise of the sum carry no information
        let floor = ROUNDOFF_ULPS * f64::EPSILON * abs * step;
        if level >= 3 && err <= tol.max(tol * estimate.abs()).max(floor) {
            return Ok(QuadResult { value: estimate, err_est: err.max(floor), evals: evals.get() });
        }
    }
    Err(QuadError::NoConvergence { best: QuadResult { value: estimate, err_est: err, evals: evals.get() } })
}

const GK_XK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const GK_WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
}

fn gk15<F: Integrand>(f: &F, a: f64, b: f64, lo: f64, hi: f64, evals: &mut usize) -> Result<Segment, QuadError> {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let mut at = |x: f64| -> Result<f64, QuadError> {
        *evals += 1;
        let v = f.eval(x, x - a, b - x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::NonFinite { x })
        }
    };
    let fc = at(c)?;
    let mut kron = fc * GK_WK[7];
    let mut gauss = fc * GK_WG[3];
    for i in 0..7 {
        let d = h * GK_XK[i];
        let pair = at(c - d)? + at(c + d)?;
        kron += GK_WK[i] * pair;
        if i % 2 == 1 {
            gauss += GK_WG[i / 2] * pair;
        }
    }
    let value = kron * h;
    let err = ((kron - gauss) * h).abs();
    Ok(Segment { lo, hi, value, err })
}

/// Globally adaptive 15-point Gauss–Kronrod on a finite interval.
pub fn gauss_kronrod<F: Integrand>(f: &F, a: f64, b: f64, tol: f64) -> Result<QuadResult, QuadError> {
    check(a, b, tol)?;
    let mut evals = 0;
    let mut segs = vec![gk15(f, a, b, a, b, &mut evals)?];
    loop {
        let value: f64 = segs.iter().map(|s| s.value).sum();
        let err: f64 = segs.iter().map(|s| s.err).sum();
        if err <= tol.max(tol * value.abs()) {
            return Ok(QuadResult { value, err_est: err, evals });
        }
        if segs.len() >= GK_MAX_INTERVALS {
            return Err(QuadError::NoConvergence { best: QuadResult { value, err_est: err, evals } });
        }
        let worst = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .map(|(i, _)| i)
            .expect("nonempty");
        let s = segs.swap_remove(worst);
        let mid = 0.5 * (s.lo + s.hi);
        if !(mid > s.lo && mid < s.hi) {
            return Err(QuadError::NoConvergence { best: QuadResult { value, err_est: err, evals } });
        }
        segs.push(gk15(f, a, b, s.lo, mid, &mut evals)?);
        segs.push(gk15(f, a, b, mid, s.hi, &mut evals)?);
    }
}

/// Integrand on the torus `[0, 2pi)^2`, summed one row at a time so that
/// work depending only on `theta_x` can be hoisted.
pub trait TorusIntegrand {
    /// Sum of the integrand over `theta_y in thetas_y` at fixed `theta_x`.
    fn row_sum(&self, theta_x: f64, thetas_y: &[f64]) -> f64;
}

impl<G: Fn(f64, f64) -> f64> TorusIntegrand for G {
    fn row_sum(&self, theta_x: f64, thetas_y: &[f64]) -> f64 {
        thetas_y.iter().map(|&ty| self(theta_x, ty)).sum()
    }
}

fn torus_mean<G: TorusIntegrand>(g: &G, n: usize) -> f64 {
    let thetas: Vec<f64> = (0..n).map(|i| 2.0 * PI * (i as f64 + 0.5) / n as f64).collect();
    let rows: Vec<f64> = thetas.iter().map(|&tx| g.row_sum(tx, &thetas)).collect();
    rows.iter().sum::<f64>() / (n * n) as f64
}

/// Normalised torus average `(2pi)^-2 \iint g`, by the periodic midpoint
/// rule on successively doubled grids. The error estimate is the change
/// between the last two grids.
pub fn integrate_torus2<G: TorusIntegrand>(g: &G, tol: f64) -> Result<QuadResult, QuadError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(QuadError::InvalidTolerance);
    }
    let mut n = TORUS_MIN_N;
    let mut prev = torus_mean(g, n);
    let mut evals = n * n;
    loop {
        n *= 2;
        let cur = torus_mean(g, n);
        evals += n * n;
        if !cur.is_finite() {
            return Err(QuadError::NonFinite { x: f64::NAN });
        }
        let err = (cur - prev).abs();
        let res = QuadResult { value: cur, err_est: err, evals };
        if err <= tol {
            return Ok(res);
        }
        if n >= TORUS_MAX_N {
            return Err(QuadError::NoConvergence { best: res });
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant() {
        let r = integrate(&|_x: f64| 1.0, 0.0, 1.0, &SingularityHint::None, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);
        assert!(r.err_est < 1e-14);
        assert!(r.evals > 0);
    }

    #[test]
    fn arcsine_integral() {
        let f = Offsets(|_x: f64, da: f64, db: f64| 1.0 / (da * db).sqrt());
        let r = integrate(&f, 0.0, 1.0, &SingularityHint::InverseSqrtBoth, 1e-12).unwrap();
        assert!((r.value - PI).abs() < 1e-12, "{}", r.value - PI);
    }

    #[test]
    fn infinite_ranges() {
        // \int_1^inf x^{-3/2} = 2
        let r = tanh_sinh(&|x: f64| x.powf(-1.5), 1.0, f64::INFINITY, 1e-12).unwrap();
        assert!((r.value - 2.0).abs() < 1e-11);
        let r = tanh_sinh(&|x: f64| (-x * x).exp(), f64::NEG_INFINITY, f64::INFINITY, 1e-12).unwrap();
        assert!((r.value - PI.sqrt()).abs() < 1e-12);
        let r = integrate(&|x: f64| 1.0 / (1.0 + x * x), f64::NEG_INFINITY, -1.0, &SingularityHint::None, 1e-12)
            .unwrap();
        assert!((r.value - PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn log_interior_split() {
        // \int_0^2 log|x - 1| dx = -2
        let hint = SingularityHint::LogInterior(vec![1.0]);
        let r = integrate(&|x: f64| (x - 1.0).abs().ln(), 0.0, 2.0, &hint, 1e-12).unwrap();
        assert!((r.value + 2.0).abs() < 1e-12);
        assert!(matches!(
            integrate(&|x: f64| x, 0.0, 1.0, &SingularityHint::LogInterior(vec![2.0]), 1e-9),
            Err(QuadError::PointOutside(_))
        ));
    }

    #[test]
    fn cyclotomic_jensen_integral_vanishes() {
        // m(x + 1) = (1/pi) \int_0^pi log|2 cos(t/2)| dt = 0
        let hint = SingularityHint::LogInterior(vec![]);
        let r = integrate(&|t: f64| (2.0 * (t / 2.0).cos()).abs().ln(), 0.0, PI, &hint, 1e-12).unwrap();
        assert!(r.value.abs() < 1e-12);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            integrate(&|x: f64| x, 1.0, 0.0, &SingularityHint::None, 1e-9),
            Err(QuadError::InvalidInterval { .. })
        ));
        assert_eq!(
            integrate(&|x: f64| x, 0.0, 1.0, &SingularityHint::None, 0.0),
            Err(QuadError::InvalidTolerance)
        );
        let r = integrate(&|x: f64| if x > 0.5 { f64::NAN } else { x }, 0.0, 1.0, &SingularityHint::None, 1e-9);
        assert!(matches!(r, Err(QuadError::NonFinite { x }) if x > 0.5));
        // an undeclared interior kink stalls the double-exponential rule
        let r = tanh_sinh(&|x: f64| (x - 0.3).abs().sqrt(), 0.0, 1.0, 1e-15);
        assert!(matches!(r, Err(QuadError::NoConvergence { .. })), "{r:?}");
    }

    #[test]
    fn torus_constant_and_trig() {
        let r = integrate_torus2(&|_tx: f64, _ty: f64| 2f64.ln(), 1e-13).unwrap();
        assert!((r.value - 2f64.ln()).abs() < 1e-13);
        let r = integrate_torus2(&|tx: f64, ty: f64| (tx + ty).cos().powi(2), 1e-13).unwrap();
        assert!((r.value - 0.5).abs() < 1e-13);
    }
}
