//! Simultaneous polynomial root finding (Aberth–Ehrlich) with a closed
//! form for degrees one and two.

use num_complex::Complex64;
use thiserror::Error;

const MAX_ITER: usize = 500;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("leading coefficient is zero")]
    ZeroLeading,
    #[error("root iteration did not converge (residual {0:e})")]
    NoConvergence(f64),
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Roots of `a y^2 + b y + c` without cancellation.
pub fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let disc = (b * b - 4.0 * a * c).sqrt();
    // pick the sign making |b + s| maximal
    let s = if (b.conj() * disc).re >= 0.0 { disc } else { -disc };
    let q = -(b + s) / 2.0;
    if q.norm() == 0.0 {
        return [Complex64::new(0.0, 0.0); 2];
    }
    [q / a, c / q]
}

/// All complex roots of `sum coeffs[n] z^n` (ascending), with multiplicity.
///
/// Degrees one and two are solved in closed form. Higher degrees use the
/// Aberth–Ehrlich iteration followed by a Newton polish.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>, RootError> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[n];
    if lead.norm() == 0.0 {
        return Err(RootError::ZeroLeading);
    }
    // factor out roots at zero
    let zeros = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    if zeros > 0 {
        let mut out = vec![Complex64::new(0.0, 0.0); zeros];
        out.extend(poly_roots(&coeffs[zeros..])?);
        return Ok(out);
    }
    match n {
        1 => return Ok(vec![-coeffs[0] / coeffs[1]]),
        2 => return Ok(quadratic_roots(coeffs[2], coeffs[1], coeffs[0]).to_vec()),
        _ => {}
    }

    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    // initial guesses on a circle of radius given by the geometric mean
    // of the root moduli, rotated off the real axis
    let radius = monic[0].norm().powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * j as f64 / n as f64 + 0.4))
        .collect();

    let scale: f64 = monic.iter().map(|c| c.norm()).sum();
    for _ in 0..MAX_ITER {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner(&monic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(&monic, *zi);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            *zi -= step;
        }
    }
    let worst = z
        .iter()
        .map(|&zi| {
            let (p, _) = horner(&monic, zi);
            let mag: f64 = monic
                .iter()
                .enumerate()
                .map(|(k, c)| c.norm() * zi.norm().powi(k as i32))
                .sum();
            p.norm() / mag.max(scale * f64::EPSILON)
        })
        .fold(0.0, f64::max);
    if worst > 1e-8 {
        return Err(RootError::NoConvergence(worst));
    }
    Ok(z)
}

/// Sorts by descending modulus, ties broken by ascending argument.
pub fn sort_roots(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| {
        let (na, nb) = (a.norm(), b.norm());
        if (na - nb).abs() > 1e-12 * na.max(nb) {
            nb.partial_cmp(&na).unwrap_or(std::cmp::Ordering::Equal)
        } else {
            a.arg().partial_cmp(&b.arg()).unwrap_or(std::cmp::Ordering::Equal)
        }
    });
}
