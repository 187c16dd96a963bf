use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_traits::{One, Zero};

/// Coefficient ring of a [`LaurentPoly2`](super::LaurentPoly2).
pub trait Coeff:
    Clone + PartialEq + fmt::Debug + Zero + One + Add<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    /// Sign and magnitude as text, used by the canonical printer. The body
    /// must parse back to the magnitude; multi-term bodies are parenthesised.
    fn signed_display(&self) -> (bool, String);
}

impl Coeff for i64 {
    fn signed_display(&self) -> (bool, String) {
        (*self < 0, self.unsigned_abs().to_string())
    }
}

impl Coeff for f64 {
    fn signed_display(&self) -> (bool, String) {
        (self.is_sign_negative(), self.abs().to_string())
    }
}

/// Integer polynomial in the family parameter `k`, ascending coefficients,
/// no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KPoly(Vec<i64>);

impl KPoly {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    /// The monomial `k`.
    pub fn k() -> Self {
        Self(vec![0, 1])
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    /// Degree in `k`; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn constant_term(&self) -> i64 {
        self.0.first().copied().unwrap_or(0)
    }

    pub fn eval(&self, k: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * k + c as f64)
    }

    pub fn eval_int(&self, k: i64) -> i64 {
        self.0.iter().rev().fold(0, |acc, &c| acc * k + c)
    }
}

impl From<i64> for KPoly {
    fn from(c: i64) -> Self {
        Self::new(vec![c])
    }
}

impl Zero for KPoly {
    fn zero() -> Self {
        Self(Vec::new())
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl One for KPoly {
    fn one() -> Self {
        Self(vec![1])
    }
}

impl Add for KPoly {
    type Output = KPoly;
    fn add(self, rhs: KPoly) -> KPoly {
        let n = self.0.len().max(rhs.0.len());
        let v = (0..n)
            .map(|i| self.0.get(i).copied().unwrap_or(0) + rhs.0.get(i).copied().unwrap_or(0))
            .collect();
        KPoly::new(v)
    }
}

impl Mul for KPoly {
    type Output = KPoly;
    fn mul(self, rhs: KPoly) -> KPoly {
        if self.0.is_empty() || rhs.0.is_empty() {
            return KPoly::zero();
        }
        let mut v = vec![0i64; self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        KPoly::new(v)
    }
}

impl Neg for KPoly {
    type Output = KPoly;
    fn neg(self) -> KPoly {
        KPoly(self.0.into_iter().map(|c| -c).collect())
    }
}

impl fmt::Display for KPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            match (first, c < 0) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            match (d, mag) {
                (0, _) => write!(f, "{mag}")?,
                (_, 1) => f.write_str("k")?,
                _ => write!(f, "{mag}*k")?,
            }
            if d > 1 {
                write!(f, "^{d}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Coeff for KPoly {
    fn signed_display(&self) -> (bool, String) {
        let nonzero = self.0.iter().filter(|&&c| c != 0).count();
        if nonzero == 1 {
            let neg = self.0.iter().any(|&c| c < 0);
            let body = if neg { (-self.clone()).to_string() } else { self.to_string() };
            (neg, body)
        } else {
            (false, format!("({self})"))
        }
    }
}
