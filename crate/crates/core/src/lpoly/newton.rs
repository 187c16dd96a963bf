//! Newton polygons, face polynomials and the temperedness test.

use num_complex::Complex64;
use thiserror::Error;

use super::{Coeff, Exponent, KPoly, LaurentPoly2};
use crate::roots::poly_roots;

/// Largest cyclotomic index tried when factoring a face polynomial.
const MAX_CYCLOTOMIC_ORDER: u32 = 120;

/// An edge of the Newton polygon together with its face polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct Face<C> {
    pub start: Exponent,
    pub end: Exponent,
    /// Primitive lattice step from `start` towards `end`.
    pub step: (i32, i32),
    /// `coeffs[s]` is the coefficient at `start + s * step` (possibly zero),
    /// read as the polynomial `sum coeffs[s] t^s`.
    pub coeffs: Vec<C>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonPolygon<C> {
    /// Convex hull of the support, counterclockwise, no collinear vertices.
    pub vertices: Vec<Exponent>,
    pub faces: Vec<Face<C>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemperError {
    #[error("the zero polynomial has no Newton polygon")]
    ZeroPolynomial,
    #[error("coefficient at {0:?} on the polygon boundary depends on k")]
    SymbolicOnBoundary(Exponent),
}

fn cross(o: Exponent, a: Exponent, b: Exponent) -> i64 {
    (a.0 - o.0) as i64 * (b.1 - o.1) as i64 - (a.1 - o.1) as i64 * (b.0 - o.0) as i64
}

fn gcd(a: i32, b: i32) -> i32 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Counterclockwise convex hull (monotone chain), collinear points dropped.
pub(crate) fn convex_hull(mut pts: Vec<Exponent>) -> Vec<Exponent> {
    pts.sort_unstable();
    pts.dedup();
    if pts.len() <= 1 {
        return pts;
    }
    let mut lower: Vec<Exponent> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Exponent> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

pub fn newton_polygon<C: Coeff>(p: &LaurentPoly2<C>) -> NewtonPolygon<C> {
    let vertices = convex_hull(p.support());
    let mut faces = Vec::new();
    if vertices.len() >= 2 {
        for (n, &start) in vertices.iter().enumerate() {
            let end = vertices[(n + 1) % vertices.len()];
            let (dx, dy) = (end.0 - start.0, end.1 - start.1);
            let g = gcd(dx, dy);
            let step = (dx / g, dy / g);
            let coeffs = (0..=g)
                .map(|s| {
                    p.coeff(start.0 + s * step.0, start.1 + s * step.1)
                        .cloned()
                        .unwrap_or_else(C::zero)
                })
                .collect();
            faces.push(Face { start, end, step, coeffs });
        }
    }
    NewtonPolygon { vertices, faces }
}

fn totient(n: u32) -> u32 {
    let (mut n, mut out, mut p) = (n, n, 2);
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// Exact division of ascending-coefficient integer polynomials; `None`
/// if `den` does not divide `num` over the integers.
fn div_exact(num: &[i64], den: &[i64]) -> Option<Vec<i64>> {
    let lead = *den.last()?;
    if num.len() < den.len() {
        return None;
    }
    let mut rem = num.to_vec();
    let mut q = vec![0i64; num.len() - den.len() + 1];
    for i in (0..q.len()).rev() {
        let top = rem[i + den.len() - 1];
        if top % lead != 0 {
            return None;
        }
        let c = top / lead;
        q[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    rem.iter().all(|&r| r == 0).then_some(q)
}

/// The `n`-th cyclotomic polynomial, ascending coefficients.
pub fn cyclotomic(n: u32) -> Vec<i64> {
    assert!(n >= 1);
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = div_exact(&num, &cyclotomic(d)).expect("cyclotomic factor divides t^n - 1");
        }
    }
    num
}

/// True if `f` is, up to sign, a product of cyclotomic polynomials.
fn is_cyclotomic_product(f: &[i64]) -> bool {
    let start = f.iter().position(|&c| c != 0);
    let end = f.iter().rposition(|&c| c != 0);
    let (Some(start), Some(end)) = (start, end) else {
        return false;
    };
    let mut rest = f[start..=end].to_vec();
    let deg = rest.len() as u32 - 1;
    for n in 1..=MAX_CYCLOTOMIC_ORDER {
        if totient(n) > deg {
            continue;
        }
        let phi = cyclotomic(n);
        while rest.len() >= phi.len() {
            match div_exact(&rest, &phi) {
                Some(q) => rest = q,
                None => break,
            }
        }
        if rest.len() == 1 {
            break;
        }
    }
    rest.len() == 1 && rest[0].abs() == 1
}

fn roots_on_unit_circle(f: &[i64]) -> bool {
    let start = f.iter().position(|&c| c != 0).unwrap_or(0);
    let end = f.iter().rposition(|&c| c != 0).unwrap_or(0);
    let c: Vec<Complex64> = f[start..=end].iter().map(|&v| Complex64::new(v as f64, 0.0)).collect();
    if c.len() < 2 {
        return true;
    }
    match poly_roots(&c) {
        Ok(rs) => rs.iter().all(|r| (r.norm() - 1.0).abs() < 1e-6),
        Err(_) => false,
    }
}

/// Every face polynomial is a product of cyclotomic polynomials up to sign.
///
/// Coefficients depending on `k` are allowed strictly inside the polygon,
/// where they cannot influence any face.
pub fn is_tempered(p: &LaurentPoly2<KPoly>) -> Result<bool, TemperError> {
    if p.is_zero() {
        return Err(TemperError::ZeroPolynomial);
    }
    let poly = newton_polygon(p);
    for face in &poly.faces {
        let mut ints = Vec::with_capacity(face.coeffs.len());
        for (s, c) in face.coeffs.iter().enumerate() {
            if c.degree() > 0 {
                let s = s as i32;
                return Err(TemperError::SymbolicOnBoundary((
                    face.start.0 + s * face.step.0,
                    face.start.1 + s * face.step.1,
                )));
            }
            ints.push(c.constant_term());
        }
        if !(is_cyclotomic_product(&ints) && roots_on_unit_circle(&ints)) {
            return Ok(false);
        }
    }
    if poly.faces.is_empty() {
        // a monomial: tempered iff its coefficient is a unit
        let (_, c) = p.terms().next().expect("nonzero");
        if c.degree() > 0 {
            return Err(TemperError::SymbolicOnBoundary(poly.vertices[0]));
        }
        return Ok(c.constant_term().abs() == 1);
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpoly::parse_poly;

    #[test]
    fn triangle_polygon() {
        let p = parse_poly("x+y-1").unwrap();
        let np = newton_polygon(&p);
        assert_eq!(np.vertices, vec![(0, 0), (1, 0), (0, 1)]);
        assert_eq!(np.faces.len(), 3);
        for f in &np.faces {
            assert_eq!(f.coeffs.len(), 2);
            assert!(f.coeffs.iter().all(|c| c.constant_term().abs() == 1));
        }
    }

    #[test]
    fn r_family_polygon_is_quadrilateral() {
        // brute force: a support point is a vertex iff it is not a convex
        // combination of the others; for five points check all triangles
        let pts = [(0, 3), (0, 1), (3, 0), (1, 0), (1, 1)];
        let inside_triangle = |p: Exponent, a: Exponent, b: Exponent, c: Exponent| {
            let d1 = cross(a, b, p);
            let d2 = cross(b, c, p);
            let d3 = cross(c, a, p);
            let neg = d1 < 0 || d2 < 0 || d3 < 0;
            let pos = d1 > 0 || d2 > 0 || d3 > 0;
            !(neg && pos)
        };
        let mut brute: Vec<Exponent> = pts
            .iter()
            .copied()
            .filter(|&p| {
                let others: Vec<_> = pts.iter().copied().filter(|&q| q != p).collect();
                let mut covered = false;
                for a in 0..others.len() {
                    for b in a + 1..others.len() {
                        for c in b + 1..others.len() {
                            if cross(others[a], others[b], others[c]) != 0
                                && inside_triangle(p, others[a], others[b], others[c])
                            {
                                covered = true;
                            }
                        }
                    }
                }
                !covered
            })
            .collect();
        brute.sort_unstable();

        let p = parse_poly("y^3-y+x^3-x+k*x*y").unwrap();
        let np = newton_polygon(&p);
        let mut got = np.vertices.clone();
        got.sort_unstable();
        assert_eq!(got, brute);
        assert_eq!(got, vec![(0, 1), (0, 3), (1, 0), (3, 0)]);
        let faces: Vec<Vec<i64>> = np
            .faces
            .iter()
            .map(|f| f.coeffs.iter().map(KPoly::constant_term).collect())
            .collect();
        assert!(faces.contains(&vec![1, 0, 0, 1]));
        assert!(faces.contains(&vec![-1, 0, 1]));
    }

    #[test]
    fn constant_polygon_is_a_point() {
        let np = newton_polygon(&parse_poly("5").unwrap());
        assert_eq!(np.vertices, vec![(0, 0)]);
        assert!(np.faces.is_empty());
    }

    #[test]
    fn polygon_translates_with_monomial_factor() {
        let p = parse_poly("x^2+x*y-3*y^2+1").unwrap();
        let a = newton_polygon(&p);
        let b = newton_polygon(&p.shift(3, -2));
        let moved: Vec<_> = a.vertices.iter().map(|&(i, j)| (i + 3, j - 2)).collect();
        assert_eq!(b.vertices, moved);
        let fa: Vec<_> = a.faces.iter().map(|f| f.coeffs.clone()).collect();
        let fb: Vec<_> = b.faces.iter().map(|f| f.coeffs.clone()).collect();
        assert_eq!(fa, fb);
    }

    #[test]
    fn cyclotomic_table() {
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic(12), vec![1, 0, -1, 0, 1]);
        // Phi_105 is the first with a coefficient of absolute value 2
        assert!(cyclotomic(105).iter().any(|&c| c == -2));
        assert_eq!(totient(105), 48);
    }

    #[test]
    fn temperedness() {
        assert_eq!(is_tempered(&parse_poly("y^3-y+x^3-x+k*x*y").unwrap()), Ok(true));
        assert_eq!(is_tempered(&parse_poly("x+y-1").unwrap()), Ok(true));
        assert_eq!(is_tempered(&parse_poly("2*x+y-1").unwrap()), Ok(false));
        assert_eq!(is_tempered(&parse_poly("x^2+3*x+1+y").unwrap()), Ok(false));
        assert_eq!(
            is_tempered(&parse_poly("k*x+y-1").unwrap()),
            Err(TemperError::SymbolicOnBoundary((1, 0)))
        );
        assert_eq!(is_tempered(&parse_poly("0").unwrap()), Err(TemperError::ZeroPolynomial));
        // P_k: the faces x^2+x+1 (twice) and the vertical ones are cyclotomic
        assert_eq!(
            is_tempered(&parse_poly("(x^2+x+1)*y^2+k*x*(x+1)*y+x*(x^2+x+1)").unwrap()),
            Ok(true)
        );
    }
}
