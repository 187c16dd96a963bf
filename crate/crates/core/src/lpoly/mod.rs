//! Sparse bivariate Laurent polynomials.
//!
//! Coefficients are exact integers, integer polynomials in a symbolic
//! parameter `k` ([`KPoly`]), or reals once `k` has been specialised.
//! The term map never stores a zero coefficient.

mod coeff;
mod newton;
mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use thiserror::Error;

pub use coeff::{Coeff, KPoly};
pub use newton::{cyclotomic, is_tempered, newton_polygon, Face, NewtonPolygon, TemperError};
pub use parse::{parse_poly, parse_real, ParseError, ParseErrorKind};

/// Exponent pair `(i, j)` of the monomial `x^i y^j`.
pub type Exponent = (i32, i32);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("monomial substitution matrix is singular")]
    Singular,
    #[error("exponent overflow in monomial substitution")]
    Overflow,
}

/// A bivariate Laurent polynomial `sum c_ij x^i y^j`.
#[derive(Clone, PartialEq)]
pub struct LaurentPoly2<C> {
    terms: BTreeMap<Exponent, C>,
}

/// Exact integer coefficients.
pub type IntPoly = LaurentPoly2<i64>;
/// Coefficients polynomial in the symbolic parameter `k`.
pub type SymPoly = LaurentPoly2<KPoly>;
/// Real coefficients, used by all numerical routines.
pub type RealPoly = LaurentPoly2<f64>;

impl<C: Coeff> LaurentPoly2<C> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: C, i: i32, j: i32) -> Self {
        let mut p = Self::zero();
        p.add_term((i, j), c);
        p
    }

    /// Builds a polynomial from `(i, j, c)` triples, merging duplicates.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, i32, C)>,
    {
        let mut p = Self::zero();
        for (i, j, c) in terms {
            p.add_term((i, j), c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &C)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, i: i32, j: i32) -> Option<&C> {
        self.terms.get(&(i, j))
    }

    pub fn support(&self) -> Vec<Exponent> {
        self.terms.keys().copied().collect()
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(&(i, j), v)| (i, j, v.clone() * c.clone())))
    }

    /// Multiplies by the monomial `x^s y^t`.
    pub fn shift(&self, s: i32, t: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(&(i, j), c)| ((i + s, j + t), c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(C::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Applies `f` to every coefficient, dropping results that vanish.
    pub fn map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> LaurentPoly2<D> {
        LaurentPoly2::from_terms(self.terms.iter().map(|(&(i, j), c)| (i, j, f(c))))
    }

    /// Smallest and largest exponent of `y` present.
    pub fn y_range(&self) -> Option<(i32, i32)> {
        let lo = self.terms.keys().map(|e| e.1).min()?;
        let hi = self.terms.keys().map(|e| e.1).max()?;
        Some((lo, hi))
    }

    /// Returns `P(x^{m11} y^{m21}, x^{m12} y^{m22}) * x^s y^t`.
    ///
    /// `m` is stored row-major, `m[0] = [m11, m12]`, so the term `x^i y^j`
    /// goes to `x^{m11 i + m12 j} y^{m21 i + m22 j}`. Any nonsingular integer
    /// matrix is accepted; all of them preserve the Mahler measure.
    pub fn monomial_transform(&self, m: [[i32; 2]; 2], shift: (i32, i32)) -> Result<Self, TransformError> {
        let det = m[0][0] as i64 * m[1][1] as i64 - m[0][1] as i64 * m[1][0] as i64;
        if det == 0 {
            return Err(TransformError::Singular);
        }
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            let ni = m[0][0] as i64 * i as i64 + m[0][1] as i64 * j as i64 + shift.0 as i64;
            let nj = m[1][0] as i64 * i as i64 + m[1][1] as i64 * j as i64 + shift.1 as i64;
            let ni = i32::try_from(ni).map_err(|_| TransformError::Overflow)?;
            let nj = i32::try_from(nj).map_err(|_| TransformError::Overflow)?;
            out.add_term((ni, nj), c.clone());
        }
        // a nonsingular exponent map is injective, so no terms merged
        debug_assert_eq!(out.len(), self.len());
        Ok(out)
    }
}

impl SymPoly {
    /// True if some coefficient depends on `k`.
    pub fn has_parameter(&self) -> bool {
        self.terms.values().any(|c| c.degree() > 0)
    }

    pub fn specialize(&self, k: f64) -> RealPoly {
        self.map_coeffs(|c| c.eval(k))
    }

    pub fn specialize_int(&self, k: i64) -> IntPoly {
        self.map_coeffs(|c| c.eval_int(k))
    }

    /// The polynomial with integer coefficients, if `k` does not occur.
    pub fn to_integer(&self) -> Option<IntPoly> {
        if self.has_parameter() {
            return None;
        }
        Some(self.map_coeffs(|c| c.constant_term()))
    }
}

impl IntPoly {
    pub fn to_real(&self) -> RealPoly {
        self.map_coeffs(|&c| c as f64)
    }

    pub fn to_symbolic(&self) -> SymPoly {
        self.map_coeffs(|&c| KPoly::from(c))
    }
}

impl RealPoly {
    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(&(i, j), &c)| c * x.powi(i) * y.powi(j))
            .sum()
    }

    /// Largest absolute coefficient.
    pub fn coeff_scale(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Coefficients of `P` as a polynomial in `y`: returns the lowest `y`
    /// exponent `j0` and, for `j = j0..=j1`, the one-variable Laurent
    /// polynomial in `x` multiplying `y^j`.
    pub fn y_coefficients(&self) -> (i32, Vec<LaurentPoly1>) {
        let Some((lo, hi)) = self.y_range() else {
            return (0, Vec::new());
        };
        let mut out = vec![LaurentPoly1::default(); (hi - lo + 1) as usize];
        for (&(i, j), &c) in &self.terms {
            out[(j - lo) as usize].push(i, c);
        }
        (lo, out)
    }
}

/// One-variable Laurent polynomial `x^shift * sum coeffs[n] x^n`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LaurentPoly1 {
    pub shift: i32,
    pub coeffs: Vec<f64>,
}

impl LaurentPoly1 {
    fn push(&mut self, i: i32, c: f64) {
        if self.coeffs.is_empty() {
            self.shift = i;
            self.coeffs.push(c);
            return;
        }
        if i < self.shift {
            let pad = (self.shift - i) as usize;
            let mut v = vec![0.0; pad];
            v.append(&mut self.coeffs);
            self.coeffs = v;
            self.shift = i;
        }
        let idx = (i - self.shift) as usize;
        if idx >= self.coeffs.len() {
            self.coeffs.resize(idx + 1, 0.0);
        }
        self.coeffs[idx] += c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc * x.powi(self.shift)
    }

    /// Ordinary polynomial coefficients (ascending) with the monomial
    /// factor and trailing zeros stripped.
    pub fn trimmed(&self) -> Vec<f64> {
        let start = self.coeffs.iter().position(|&c| c != 0.0).unwrap_or(self.coeffs.len());
        let end = self.coeffs.iter().rposition(|&c| c != 0.0).map_or(start, |e| e + 1);
        self.coeffs[start..end].to_vec()
    }
}

impl<C: Coeff> Add for &LaurentPoly2<C> {
    type Output = LaurentPoly2<C>;
    fn add(self, rhs: Self) -> LaurentPoly2<C> {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for &LaurentPoly2<C> {
    type Output = LaurentPoly2<C>;
    fn sub(self, rhs: Self) -> LaurentPoly2<C> {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl<C: Coeff> Mul for &LaurentPoly2<C> {
    type Output = LaurentPoly2<C>;
    fn mul(self, rhs: Self) -> LaurentPoly2<C> {
        let mut out = LaurentPoly2::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term((i1 + i2, j1 + j2), c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Neg for &LaurentPoly2<C> {
    type Output = LaurentPoly2<C>;
    fn neg(self) -> LaurentPoly2<C> {
        LaurentPoly2 {
            terms: self.terms.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Coeff> $tr for LaurentPoly2<C> {
            type Output = LaurentPoly2<C>;
            fn $m(self, rhs: Self) -> LaurentPoly2<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coeff> Zero for LaurentPoly2<C> {
    fn zero() -> Self {
        LaurentPoly2::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coeff> One for LaurentPoly2<C> {
    fn one() -> Self {
        LaurentPoly2::constant(C::one())
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, i: i32, j: i32) -> fmt::Result {
    let mut first = true;
    for (name, e) in [("x", i), ("y", j)] {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if e == 1 {
            f.write_str(name)?;
        } else {
            write!(f, "{name}^{e}")?;
        }
    }
    Ok(())
}

/// Canonical form: terms in increasing `(i, j)` order, e.g.
/// `-1 + y + x` for `x + y - 1`. The output parses back to the same
/// polynomial.
impl<C: Coeff> fmt::Display for LaurentPoly2<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (&(i, j), c)) in self.terms.iter().enumerate() {
            let (negative, body) = c.signed_display();
            match (n, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let unit = body == "1";
            if i == 0 && j == 0 {
                f.write_str(&body)?;
            } else if unit {
                write_monomial(f, i, j)?;
            } else {
                f.write_str(&body)?;
                f.write_str("*")?;
                write_monomial(f, i, j)?;
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for LaurentPoly2<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly2({self})")
    }
}
