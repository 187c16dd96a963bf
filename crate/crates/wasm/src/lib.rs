//! Browser bindings for the demo page in `www/`.
//!
//! Every export has a plain Rust twin returning `Result<_, String>`, so the
//! logic is testable natively. As on the command line, `k` for `Q` names
//! `Q_{k+2}`.

use std::f64::consts::PI;

use mahler_core::families::{branch_roots, family_derivative, family_measure, Family, FamilyError, FamilyPoint};
use mahler_core::lpoly::parse_real;
use mahler_core::mahler::{mahler_jensen, DEFAULT_TOL};
use wasm_bindgen::prelude::*;

const DEMO_TOL: f64 = 1e-10;
const MAX_POINTS: usize = 2000;

fn family(name: &str) -> Result<Family, String> {
    name.parse()
}

fn index(f: Family, k: f64) -> f64 {
    if f == Family::Q {
        k + 2.0
    } else {
        k
    }
}

fn grid(from: f64, to: f64, n: usize) -> Result<Vec<f64>, String> {
    if n == 0 || n > MAX_POINTS {
        return Err(format!("point count must be in 1..={MAX_POINTS}"));
    }
    if !(from.is_finite() && to.is_finite()) {
        return Err("range must be finite".into());
    }
    Ok((0..n).map(|i| if n == 1 { from } else { from + (to - from) * i as f64 / (n - 1) as f64 }).collect())
}

/// `[m, err_est]` for a polynomial in `x`, `y` and optionally `k`.
pub fn measure_impl(poly: &str, k: Option<f64>) -> Result<Vec<f64>, String> {
    let p = parse_real(poly, k).map_err(|e| e.to_string())?;
    let m = mahler_jensen(&p, DEFAULT_TOL).map_err(|e| e.to_string())?;
    Ok(vec![m.value, m.err_est])
}

/// Flat `[k, m, dm/dk, log k]` rows; `dm/dk` is NaN on regime boundaries.
pub fn family_curve_impl(name: &str, from: f64, to: f64, n: usize) -> Result<Vec<f64>, String> {
    let f = family(name)?;
    let mut out = Vec::with_capacity(4 * n);
    for k in grid(from, to, n)? {
        let m = family_measure(f, index(f, k), DEMO_TOL).map_err(|e| e.to_string())?;
        let d = match FamilyPoint::new(f, k) {
            Ok(pt) => family_derivative(f, pt.k).map_err(|e| e.to_string())?,
            Err(FamilyError::Boundary { .. }) => f64::NAN,
            Err(e) => return Err(e.to_string()),
        };
        out.extend([k, m.value, d, k.abs().ln()]);
    }
    Ok(out)
}

/// Flat `[theta, |y1|, |y2|]` rows over `theta` in `[0, pi]`; NaN where the
/// fiber degenerates.
pub fn fiber_moduli_impl(name: &str, k: f64, n: usize) -> Result<Vec<f64>, String> {
    let f = family(name)?;
    let mut out = Vec::with_capacity(3 * n);
    for theta in grid(0.0, PI, n)? {
        let (a, b) = match branch_roots(f, index(f, k), theta) {
            Ok((y1, y2)) => (y1.norm(), y2.norm()),
            Err(FamilyError::DegenerateFiber(_)) => (f64::NAN, f64::NAN),
            Err(e) => return Err(e.to_string()),
        };
        out.extend([theta, a, b]);
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn measure(poly: &str, k: Option<f64>) -> Result<Vec<f64>, JsError> {
    measure_impl(poly, k).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = familyCurve)]
pub fn family_curve(family: &str, from: f64, to: f64, n: usize) -> Result<Vec<f64>, JsError> {
    family_curve_impl(family, from, to, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = fiberModuli)]
pub fn fiber_moduli(family: &str, k: f64, n: usize) -> Result<Vec<f64>, JsError> {
    fiber_moduli_impl(family, k, n).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measures() {
        let m = measure_impl("x+y-1", None).unwrap();
        assert!((m[0] - 0.323_065_947_219_450_5).abs() < 1e-12);
        let r4 = measure_impl("y^3-y+x^3-x+k*x*y", Some(4.0)).unwrap();
        assert!((r4[0] - 1.364_073_509_190_01).abs() < 1e-9);
        assert!(measure_impl("x+*y", None).unwrap_err().contains("position 2"));
    }

    #[test]
    fn curves() {
        let c = family_curve_impl("P", 4.0, 10.0, 4).unwrap();
        assert_eq!(c.len(), 16);
        assert!(c.chunks(4).all(|r| r[2] > 0.0 && r[1] < r[3]));
        let q = family_curve_impl("q", 4.0, 10.0, 4).unwrap();
        for (a, b) in c.chunks(4).zip(q.chunks(4)) {
            assert!((a[1] - b[1]).abs() < 1e-8);
        }
        let b = family_curve_impl("P", 3.0, 3.0, 1).unwrap();
        assert!(b[2].is_nan());
        assert!(family_curve_impl("S", 1.0, 2.0, 3).is_err());
        assert!(family_curve_impl("P", 1.0, 2.0, 0).is_err());
    }

    #[test]
    fn fibers() {
        let v = fiber_moduli_impl("P", 5.0, 7).unwrap();
        assert_eq!(v.len(), 21);
        for r in v.chunks(3).filter(|r| r[1].is_finite()) {
            assert!(r[1] >= r[2]);
        }
    }
}
