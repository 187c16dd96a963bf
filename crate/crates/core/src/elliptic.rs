//! Elliptic integrals `\int dv / sqrt|f(v)|` for cubics (and products with a
//! root-free quadratic), Carlson's `R_F`, the Möbius involution of the
//! `v`-cubic and the Landen-type identity between the `c`- and `v`-periods.

use num_complex::Complex64;
use thiserror::Error;

use crate::quad::{tanh_sinh, Offsets, QuadError};

/// Endpoints this close to a root are treated as that root.
const ROOT_SNAP: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EllipticError {
    #[error("R_F needs nonnegative finite arguments with at most one zero")]
    CarlsonDomain,
    #[error("radicand is negative at v = {at}")]
    NegativeRadicand { at: f64 },
    #[error("v = -12 is the pole of the involution")]
    Pole,
    #[error("k = {0} is outside the domain")]
    InvalidK(f64),
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error(transparent)]
    Quad(#[from] QuadError),
}

/// Carlson's symmetric integral
/// `R_F(x, y, z) = (1/2) \int_0^oo dt / sqrt((t+x)(t+y)(t+z))`.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> Result<f64, EllipticError> {
    let args = [x, y, z];
    if args.iter().any(|v| !(v.is_finite() && *v >= 0.0)) || args.iter().filter(|&&v| v == 0.0).count() > 1 {
        return Err(EllipticError::CarlsonDomain);
    }
    let (mut x, mut y, mut z) = (x, y, z);
    let a0 = (x + y + z) / 3.0;
    let mut a = a0;
    let mut q = (3.0 * 1e-16f64).powf(-1.0 / 6.0) * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    let mut pow4 = 1.0;
    while q >= a.abs() {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sx * sz + sy * sz;
        x = 0.25 * (x + lambda);
        y = 0.25 * (y + lambda);
        z = 0.25 * (z + lambda);
        a = 0.25 * (a + lambda);
        q *= 0.25;
        pow4 *= 4.0;
    }
    let xx = (a0 - args[0]) / (pow4 * a);
    let yy = (a0 - args[1]) / (pow4 * a);
    let zz = -xx - yy;
    let e2 = xx * yy - zz * zz;
    let e3 = xx * yy * zz;
    Ok((1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / a.sqrt())
}

/// The integrand `1 / sqrt|lead * prod (v - r_i) * q(v)|` over `[a, b]`,
/// where `q(v) = q0 + q1 v + q2 v^2` has no real roots.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicPeriodSpec {
    pub lead: f64,
    /// Real roots of the radicand.
    pub roots: Vec<f64>,
    /// Optional root-free quadratic factor `[q0, q1, q2]`.
    pub quad_factor: Option<[f64; 3]>,
    pub a: f64,
    pub b: f64,
}

impl CubicPeriodSpec {
    pub fn new(lead: f64, roots: &[f64], a: f64, b: f64) -> Self {
        let mut roots = roots.to_vec();
        roots.sort_by(f64::total_cmp);
        Self { lead, roots, quad_factor: None, a, b }
    }

    pub fn with_quad_factor(mut self, q: [f64; 3]) -> Self {
        self.quad_factor = Some(q);
        self
    }

    /// Signed radicand at `v`.
    pub fn radicand(&self, v: f64) -> f64 {
        let mut r = self.lead * self.roots.iter().map(|x| v - x).product::<f64>();
        if let Some([q0, q1, q2]) = self.quad_factor {
            r *= q0 + v * (q1 + v * q2);
        }
        r
    }

    fn snap(&self, e: f64) -> f64 {
        if !e.is_finite() {
            return e;
        }
        self.roots
            .iter()
            .copied()
            .find(|r| (r - e).abs() <= ROOT_SNAP * r.abs().max(1.0))
            .unwrap_or(e)
    }

    /// Pieces of `[lo, hi]` between consecutive roots, plus a cut at the
    /// vertex of the quadratic factor.
    fn pieces(&self, lo: f64, hi: f64) -> Vec<(f64, f64)> {
        let mut cuts = vec![lo];
        cuts.extend(self.roots.iter().copied().filter(|&r| r > lo && r < hi));
        if let Some([_, q1, q2]) = self.quad_factor {
            let vtx = -q1 / (2.0 * q2);
            if vtx > lo && vtx < hi && !self.roots.contains(&vtx) {
                cuts.push(vtx);
            }
        }
        cuts.push(hi);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        cuts.windows(2).map(|w| (w[0], w[1])).collect()
    }

    fn abs_radicand_at(&self, v: f64, da: f64, db: f64, lo: f64, hi: f64) -> f64 {
        let mut r = self.lead.abs();
        for &x in &self.roots {
            let f = if x == lo {
                da
            } else if x == hi {
                db
            } else {
                v - x
            };
            r *= f.abs();
        }
        if let Some([q0, q1, q2]) = self.quad_factor {
            r *= (q0 + v * (q1 + v * q2)).abs();
        }
        r
    }

    fn sample_point(lo: f64, hi: f64) -> f64 {
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) => 0.5 * (lo + hi),
            (true, false) => lo + 1.0 + lo.abs(),
            (false, true) => hi - 1.0 - hi.abs(),
            (false, false) => 0.0,
        }
    }

    /// Complete period between adjacent roots of a three-root cubic.
    fn carlson_piece(&self, lo: f64, hi: f64) -> Option<f64> {
        if self.quad_factor.is_some() || self.roots.len() != 3 {
            return None;
        }
        let (e3, e2, e1) = (self.roots[0], self.roots[1], self.roots[2]);
        if !(e3 < e2 && e2 < e1) {
            return None;
        }
        let scale = 2.0 / self.lead.abs().sqrt();
        let rf = |y: f64, z: f64| carlson_rf(0.0, y, z).ok().map(|v| scale * v);
        if (lo, hi) == (e2, e1) || (lo == f64::NEG_INFINITY && hi == e3) {
            rf(e2 - e3, e1 - e3)
        } else if (lo, hi) == (e3, e2) || (lo == e1 && hi == f64::INFINITY) {
            rf(e1 - e2, e1 - e3)
        } else {
            None
        }
    }

    fn piece_by_quadrature(&self, lo: f64, hi: f64, tol: f64) -> Result<f64, EllipticError> {
        let f = Offsets(|v: f64, da: f64, db: f64| 1.0 / self.abs_radicand_at(v, da, db, lo, hi).sqrt());
        Ok(tanh_sinh(&f, lo, hi, tol)?.value)
    }

    fn oriented(&self) -> Result<(f64, f64, f64), EllipticError> {
        let (a, b) = (self.snap(self.a), self.snap(self.b));
        if a.is_nan() || b.is_nan() || (a == b && a.is_infinite()) {
            return Err(EllipticError::InvalidInterval { a: self.a, b: self.b });
        }
        Ok(if a <= b { (a, b, 1.0) } else { (b, a, -1.0) })
    }

    fn integrate(&self, tol: f64, carlson: bool, principal: bool) -> Result<Complex64, EllipticError> {
        let (lo, hi, sign) = self.oriented()?;
        if lo == hi {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let pieces = self.pieces(lo, hi);
        let share = tol / pieces.len() as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, q) in pieces {
            let at = Self::sample_point(p, q);
            let negative = self.radicand(at) < 0.0;
            if negative && !principal {
                return Err(EllipticError::NegativeRadicand { at });
            }
            let v = match carlson.then(|| self.carlson_piece(p, q)).flatten() {
                Some(v) => v,
                None => self.piece_by_quadrature(p, q, share)?,
            };
            // 1/sqrt(-r) = -i/sqrt(r) on the principal branch
            acc += if negative { Complex64::new(0.0, -v) } else { Complex64::new(v, 0.0) };
        }
        Ok(acc * sign)
    }
}

/// `\int_a^b dv / sqrt(f(v))` for a radicand nonnegative on the interval.
/// Complete periods of three-root cubics go through `R_F`.
pub fn period_integral(spec: &CubicPeriodSpec, tol: f64) -> Result<f64, EllipticError> {
    Ok(spec.integrate(tol, true, false)?.re)
}

/// As [`period_integral`] but always by tanh-sinh quadrature.
pub fn period_integral_quadrature(spec: &CubicPeriodSpec, tol: f64) -> Result<f64, EllipticError> {
    Ok(spec.integrate(tol, false, false)?.re)
}

/// `\int_a^b dv / sqrt(f(v))` with the principal square root where the
/// radicand is negative.
pub fn principal_period(spec: &CubicPeriodSpec, tol: f64) -> Result<Complex64, EllipticError> {
    spec.integrate(tol, true, true)
}

/// Roots `(-k(|k|+s)/2, k(s-|k|)/2)`, `s = sqrt(k^2+16)`, of `v^2 + k^2 v - 4k^2`.
pub fn v_quadratic_roots(k: f64) -> (f64, f64) {
    let k = k.abs();
    let s = (k * k + 16.0).sqrt();
    let neg = -0.5 * k * (k + s);
    (neg, 8.0 * k / (s + k))
}

/// The radicand `-(v+12)(v^2+k^2 v-4k^2)` over `[a, b]`.
pub fn v_spec(k: f64, a: f64, b: f64) -> CubicPeriodSpec {
    let (r1, r2) = v_quadratic_roots(k);
    CubicPeriodSpec::new(-1.0, &[-12.0, r1, r2], a, b)
}

/// `v -> -4(3v+4k^2)/(v+12)`.
pub fn involution_v(v: f64, k: f64) -> Result<f64, EllipticError> {
    if v + 12.0 == 0.0 {
        return Err(EllipticError::Pole);
    }
    Ok(-4.0 * (3.0 * v + 4.0 * k * k) / (v + 12.0))
}

/// Derivative of [`involution_v`] with respect to `v`.
pub fn involution_jacobian(v: f64, k: f64) -> Result<f64, EllipticError> {
    if v + 12.0 == 0.0 {
        return Err(EllipticError::Pole);
    }
    Ok(16.0 * (k * k - 9.0) / ((v + 12.0) * (v + 12.0)))
}

/// Fixed points of [`involution_v`], roots of `v^2 + 24v + 16k^2 = 0`.
pub fn involution_fixed_points(k: f64) -> Option<(f64, f64)> {
    let disc = 144.0 - 16.0 * k * k;
    (disc >= 0.0).then(|| (-12.0 - disc.sqrt(), -12.0 + disc.sqrt()))
}

/// The four members of the Landen chain; for `k < 3` parts of each
/// interval carry a negative radicand and the values are complex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandenCheck {
    /// `\int_0^1 dc / sqrt(c(1-c)(64c^2-48c+k^2))`.
    pub lhs: Complex64,
    /// `2 sqrt 2 \int_0^1 dt / sqrt((1-t^2)(A + B t^2))`.
    pub t_form: Complex64,
    /// `sqrt 2 \int_0^1 du / sqrt(u(1-u)(A + B u))`.
    pub u_form: Complex64,
    /// `\int_{-12}^{k(s-k)/2} dv / sqrt(-(v+12)(v^2+k^2 v-4k^2))`.
    pub rhs: Complex64,
    /// Largest pairwise distance in the chain.
    pub diff: f64,
}

pub fn landen_check(k: f64) -> Result<LandenCheck, EllipticError> {
    if !(k > 0.0 && k.is_finite()) || k == 3.0 {
        return Err(EllipticError::InvalidK(k));
    }
    let tol = 1e-13;
    let s = (k * k + 16.0).sqrt();
    let big_a = k * k - 24.0 + k * s;
    let big_b = -k * k + 24.0 + k * s;

    let c_spec = if k < 3.0 {
        let d = (9.0 - k * k).sqrt();
        CubicPeriodSpec::new(-64.0, &[0.0, 1.0, (3.0 - d) / 8.0, (3.0 + d) / 8.0], 0.0, 1.0)
    } else {
        CubicPeriodSpec::new(-1.0, &[0.0, 1.0], 0.0, 1.0).with_quad_factor([k * k, -48.0, 64.0])
    };
    let lhs = principal_period(&c_spec, tol)?;

    let t_spec = if big_a < 0.0 {
        let tau = (-big_a / big_b).sqrt();
        CubicPeriodSpec::new(-big_b, &[-1.0, 1.0, -tau, tau], 0.0, 1.0)
    } else {
        CubicPeriodSpec::new(-1.0, &[-1.0, 1.0], 0.0, 1.0).with_quad_factor([big_a, 0.0, big_b])
    };
    let t_form = principal_period(&t_spec, tol)? * (2.0 * std::f64::consts::SQRT_2);

    let u_spec = CubicPeriodSpec::new(-big_b, &[0.0, 1.0, -big_a / big_b], 0.0, 1.0);
    let u_form = principal_period(&u_spec, tol)? * std::f64::consts::SQRT_2;

    let (_, r2) = v_quadratic_roots(k);
    let rhs = principal_period(&v_spec(k, -12.0, r2), tol)?;

    let all = [lhs, t_form, u_form, rhs];
    let diff = all
        .iter()
        .flat_map(|a| all.iter().map(move |b| (a - b).norm()))
        .fold(0.0, f64::max);
    Ok(LandenCheck { lhs, t_form, u_form, rhs, diff })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn carlson_special_values() {
        assert!((carlson_rf(4.0, 4.0, 4.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((carlson_rf(0.0, 1.0, 1.0).unwrap() - PI / 2.0).abs() < 1e-15);
        let direct = tanh_sinh(
            &Offsets(|t: f64, da: f64, _| 0.5 / (da * (t + 1.0) * (t + 2.0)).sqrt()),
            0.0,
            f64::INFINITY,
            1e-14,
        )
        .unwrap();
        assert!((carlson_rf(0.0, 1.0, 2.0).unwrap() - direct.value).abs() < 1e-12);
        assert_eq!(carlson_rf(0.0, 0.0, 1.0), Err(EllipticError::CarlsonDomain));
        assert_eq!(carlson_rf(-1.0, 1.0, 1.0), Err(EllipticError::CarlsonDomain));
    }

    #[test]
    fn v_roots() {
        for k in [0.5, 3.0, 5.0, 40.0] {
            let (r1, r2) = v_quadratic_roots(k);
            let s = (k * k + 16.0).sqrt();
            assert!((r1 + k * (k + s) / 2.0).abs() < 1e-12 * r1.abs());
            assert!((r2 - k * (s - k) / 2.0).abs() < 1e-12);
            assert!((r1 * r1 + k * k * r1 - 4.0 * k * k).abs() < 1e-9 * r1 * r1);
        }
    }

    #[test]
    fn complete_periods_match_quadrature() {
        for k in [1.0, 2.0, 5.0, 10.0] {
            let (r1, r2) = v_quadratic_roots(k);
            let mut roots = [-12.0, r1, r2];
            roots.sort_by(f64::total_cmp);
            let [e3, e2, e1] = roots;
            for (a, b) in [(e2, e1), (f64::NEG_INFINITY, e3)] {
                let spec = v_spec(k, a, b);
                let c = period_integral(&spec, 1e-14).unwrap();
                let q = period_integral_quadrature(&spec, 1e-14).unwrap();
                assert!((c - q).abs() < 1e-11, "k={k} [{a},{b}]: {c} vs {q}");
            }
            // the other two arcs have a positive radicand after flipping the sign
            let flipped = |a, b| CubicPeriodSpec::new(1.0, &roots, a, b);
            for (a, b) in [(e3, e2), (e1, f64::INFINITY)] {
                let c = period_integral(&flipped(a, b), 1e-14).unwrap();
                let q = period_integral_quadrature(&flipped(a, b), 1e-14).unwrap();
                assert!((c - q).abs() < 1e-11, "k={k} [{a},{b}]: {c} vs {q}");
            }
        }
    }

    #[test]
    fn period_edge_cases() {
        let spec = v_spec(5.0, 1.0, 1.0);
        assert_eq!(period_integral(&spec, 1e-12).unwrap(), 0.0);
        // radicand changes sign across -12 when k = 5
        assert!(matches!(
            period_integral(&v_spec(5.0, -20.0, 0.0), 1e-12),
            Err(EllipticError::NegativeRadicand { .. })
        ));
        let (_, r2) = v_quadratic_roots(5.0);
        let fwd = period_integral(&v_spec(5.0, -12.0, r2), 1e-13).unwrap();
        let back = period_integral(&v_spec(5.0, r2, -12.0), 1e-13).unwrap();
        assert_eq!(fwd, -back);
        // incomplete: ordinary right endpoint
        let inc = period_integral(&v_spec(5.0, -12.0, 0.0), 1e-13).unwrap();
        assert!(inc > 0.0 && inc < fwd);
    }

    #[test]
    fn involution_properties() {
        let v = involution_v(involution_v(7.0, 5.0).unwrap(), 5.0).unwrap();
        assert!((v - 7.0).abs() < 1e-11);
        let (r1, r2) = v_quadratic_roots(5.0);
        assert!((involution_v(r1, 5.0).unwrap() - r2).abs() < 1e-10);
        assert_eq!(involution_v(-12.0, 5.0), Err(EllipticError::Pole));
        let (f1, f2) = involution_fixed_points(2.0).unwrap();
        for f in [f1, f2] {
            assert!((involution_v(f, 2.0).unwrap() - f).abs() < 1e-12);
        }
        assert!(involution_fixed_points(5.0).is_none());
    }

    #[test]
    fn involution_transports_the_period_density() {
        let k = 5.0;
        let g = |v: f64| 1.0 / (-(v + 12.0) * (v * v + k * k * v - 4.0 * k * k)).sqrt();
        let (r1, r2) = v_quadratic_roots(k);
        for i in 1..10 {
            let v = -12.0 + (r2 + 12.0) * i as f64 / 10.0;
            let w = involution_v(v, k).unwrap();
            assert!(w < r1);
            let pulled = g(w) * involution_jacobian(v, k).unwrap().abs();
            assert!((pulled - g(v)).abs() < 1e-10 * g(v), "v={v}");
        }
    }

    #[test]
    fn landen_chain() {
        for k in [10.0, 3.5] {
            let c = landen_check(k).unwrap();
            assert!(c.diff < 1e-10, "k={k}: {c:?}");
            assert!(c.lhs.im.abs() < 1e-14);
        }
        let c = landen_check(1.0).unwrap();
        assert!(c.diff < 1e-10, "{c:?}");
        assert!((c.lhs - Complex64::new(0.932_087_528_736_22, -1.123_915_831_578_43)).norm() < 1e-10);
        let c = landen_check(3.0001).unwrap();
        assert!(c.diff < 1e-8, "{c:?}");
        assert!(landen_check(3.0).is_err());
        assert!(landen_check(-1.0).is_err());
    }
}
