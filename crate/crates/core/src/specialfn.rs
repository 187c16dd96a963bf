//! Bloch–Wigner dilogarithm, Hurwitz zeta, real Dirichlet characters and
//! their L-values, and the closed forms for `m(x+y-1)` and
//! `m(x^2-xy+y^2+x+y)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialFnError {
    #[error("{0} is not a nonzero discriminant (must be 0 or 1 mod 4, not a square)")]
    BadDiscriminant(i64),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("the character is even")]
    EvenCharacter,
}

/// `B_2, B_4, ..., B_40`.
const BERNOULLI_EVEN: [f64; 20] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0,
];

/// Kronecker symbol `(a / n)`.
pub fn kronecker(a: i64, n: i64) -> i32 {
    const TAB2: [i32; 8] = [0, 1, 0, -1, 0, -1, 0, 1];
    if n == 0 {
        return i32::from(a.abs() == 1);
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let (mut a, mut b) = (a, n);
    let mut v = 0;
    while b % 2 == 0 {
        v += 1;
        b /= 2;
    }
    let mut k = if v % 2 == 0 { 1 } else { TAB2[(a & 7) as usize] };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    loop {
        if a == 0 {
            return if b > 1 { 0 } else { k };
        }
        v = 0;
        while a % 2 == 0 {
            v += 1;
            a /= 2;
        }
        if v % 2 == 1 {
            k *= TAB2[(b & 7) as usize];
        }
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a.abs();
        a = b % r;
        b = r;
    }
}

/// The real character `a -> (d / a)` of a discriminant `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletChar {
    pub discriminant: i64,
    /// `values[a] = chi(a)` for `0 <= a < f`.
    values: Vec<i8>,
}

impl DirichletChar {
    pub fn new(d: i64) -> Result<Self, SpecialFnError> {
        let sq = (d.unsigned_abs() as f64).sqrt().round() as i64;
        if d == 0 || d.rem_euclid(4) > 1 || (d > 0 && sq * sq == d) || d.unsigned_abs() > 1_000_000 {
            return Err(SpecialFnError::BadDiscriminant(d));
        }
        let f = d.abs();
        let values = (0..f).map(|a| kronecker(d, a) as i8).collect();
        Ok(Self { discriminant: d, values })
    }

    pub fn modulus(&self) -> i64 {
        self.discriminant.abs()
    }

    pub fn value(&self, a: i64) -> i32 {
        i32::from(self.values[a.rem_euclid(self.modulus()) as usize])
    }

    pub fn is_odd(&self) -> bool {
        self.value(-1) == -1
    }
}

fn li2_series(w: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut p = w;
    for n in 1..200 {
        let t = p / (n * n) as f64;
        sum += t;
        if t.norm() < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
        p *= w;
    }
    sum
}

/// `Li_2(w) = sum_n B_n u^(n+1)/(n+1)!` with `u = -log(1 - w)`.
fn li2_bernoulli(w: Complex64) -> Complex64 {
    let u = -(Complex64::new(1.0, 0.0) - w).ln();
    let u2 = u * u;
    // B_0 u + B_1 u^2/2
    let mut sum = u - u2 / 4.0;
    let mut p = u; // u^(2j+1) / (2j+1)!
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let n = 2 * j + 2;
        p = p * u2 / ((n * (n + 1)) as f64);
        let t = p * *b;
        sum += t;
        if t.norm() < 1e-18 {
            break;
        }
    }
    sum
}

/// Bloch–Wigner dilogarithm `D(z) = Im Li_2(z) + arg(1-z) log|z|`.
pub fn bloch_wigner(z: Complex64) -> f64 {
    if z.im == 0.0 || !z.is_finite() {
        return 0.0;
    }
    let one = Complex64::new(1.0, 0.0);
    let orbit = [
        (z, 1.0),
        (one - z, -1.0),
        (z.inv(), -1.0),
        ((one - z).inv(), 1.0),
        (one - z.inv(), 1.0),
        (z / (z - one), -1.0),
    ];
    let &(w, sign) = orbit
        .iter()
        .min_by(|a, b| {
            // prefer small modulus, then the half-plane Re w <= 1/2
            let key = |w: Complex64| (w.norm() * 1e6).round() as i64 * 2 + i64::from(w.re > 0.5);
            key(a.0).cmp(&key(b.0))
        })
        .expect("nonempty orbit");
    let li2 = if w.norm() <= 0.5 { li2_series(w) } else { li2_bernoulli(w) };
    sign * (li2.im + (one - w).arg() * w.norm().ln())
}

/// Hurwitz zeta `zeta(s, a)` for `s > 1`, `0 < a <= 1`.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64, SpecialFnError> {
    if !(s > 1.0 && s.is_finite()) || !(a > 0.0 && a <= 1.0) {
        return Err(SpecialFnError::Domain(format!("zeta({s}, {a})")));
    }
    const N: usize = 25;
    let direct: f64 = (0..N).map(|n| (n as f64 + a).powf(-s)).sum();
    let x = N as f64 + a;
    let mut tail = x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // B_{2j}/(2j)! s(s+1)...(s+2j-2) x^(-s-2j+1)
    let mut rising = s;
    let mut fact = 2.0;
    let mut xp = x.powf(-s - 1.0);
    for j in 1..=6 {
        tail += BERNOULLI_EVEN[j - 1] / fact * rising * xp;
        let n = 2 * j as u32;
        rising *= (s + n as f64 - 1.0) * (s + n as f64);
        fact *= ((n + 1) * (n + 2)) as f64;
        xp /= x * x;
    }
    Ok(direct + tail)
}

/// `L(chi, s) = f^(-s) sum_a chi(a) zeta(s, a/f)`.
pub fn dirichlet_l(chi: &DirichletChar, s: f64) -> Result<f64, SpecialFnError> {
    let f = chi.modulus();
    let mut sum = 0.0;
    for a in 1..=f {
        let c = chi.value(a);
        if c != 0 {
            sum += f64::from(c) * hurwitz_zeta(s, a as f64 / f as f64)?;
        }
    }
    Ok(sum * (f as f64).powf(-s))
}

/// `L'(chi, -1) = f^(3/2) L(chi, 2) / (4 pi)` for odd real `chi`.
pub fn l_deriv_minus1(chi: &DirichletChar) -> Result<f64, SpecialFnError> {
    if !chi.is_odd() {
        return Err(SpecialFnError::EvenCharacter);
    }
    let f = chi.modulus() as f64;
    Ok(f.powf(1.5) * dirichlet_l(chi, 2.0)? / (4.0 * PI))
}

fn t1() -> Complex64 {
    Complex64::new(0.5, -0.5 * (5.0 + 2.0 * 13f64.sqrt()).sqrt())
}

/// `m(x^2 - xy + y^2 + x + y)` from its dilogarithm expression.
pub fn m_a_dilog() -> f64 {
    let t = t1() + 1.0;
    let half_sqrt3 = 0.5 * 3f64.sqrt();
    let zeta6_plus_1 = Complex64::new(1.5, half_sqrt3);
    let zeta6_inv_plus_1 = Complex64::new(1.5, -half_sqrt3);
    (bloch_wigner(t / 3.0) - 2.0 * bloch_wigner(t / zeta6_plus_1) - 2.0 * bloch_wigner(t / zeta6_inv_plus_1)) / PI
}

/// Residuals of the checks on the toric point `x1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResultantCheck {
    /// `|x1^4 + x1^3 - x1^2 + x1 + 1|`.
    pub quartic: f64,
    /// `||x1| - 1|`.
    pub modulus: f64,
    /// `|x(t1) - x1|` for the rational parametrisation.
    pub param_x: f64,
    /// `|y(t1) - 1/x1|`.
    pub param_y: f64,
    /// Whether `Res_y(A, A*)` expands to `+-3x^2(x^4+x^3-x^2+x+1)`.
    pub resultant_exact: bool,
}

impl ResultantCheck {
    pub fn passed(&self) -> bool {
        self.resultant_exact && [self.quartic, self.modulus, self.param_x, self.param_y].iter().all(|&e| e < 1e-12)
    }
}

type Upoly = Vec<i64>;

fn umul(a: &Upoly, b: &Upoly) -> Upoly {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn uadd(a: &Upoly, b: &Upoly, sign: i64) -> Upoly {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += sign * y;
    }
    while out.len() > 1 && out.last() == Some(&0) {
        out.pop();
    }
    out
}

fn det(m: &[Vec<Upoly>]) -> Upoly {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut acc = vec![0];
    for col in 0..m.len() {
        let minor: Vec<Vec<Upoly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != col).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = umul(&m[0][col], &det(&minor));
        acc = uadd(&acc, &term, if col % 2 == 0 { 1 } else { -1 });
    }
    acc
}

/// Sylvester resultant in `y` of two quadratics whose coefficients are
/// integer polynomials in `x` (`[a0, a1, a2]`, each ascending in `x`).
fn resultant_quadratics(a: [Upoly; 3], b: [Upoly; 3]) -> Upoly {
    let z = vec![0];
    let [a0, a1, a2] = a;
    let [b0, b1, b2] = b;
    let m = vec![
        vec![a2.clone(), a1.clone(), a0.clone(), z.clone()],
        vec![z.clone(), a2, a1, a0],
        vec![b2.clone(), b1.clone(), b0.clone(), z.clone()],
        vec![z, b2, b1, b0],
    ];
    det(&m)
}

pub fn resultant_check() -> ResultantCheck {
    let s = (5.0 + 2.0 * 13f64.sqrt()).sqrt();
    let x1 = Complex64::new(3.0, s) / (1.0 + 13f64.sqrt());
    let quartic = (x1.powi(4) + x1.powi(3) - x1 * x1 + x1 + 1.0).norm();
    let t = t1();
    let den = t * t - t + 1.0;
    let param_x = ((t - 2.0) / den - x1).norm();
    let param_y = ((-t - 1.0) / den - x1.inv()).norm();

    // A = y^2 + (1-x) y + (x^2+x);  A* = (1+x) y^2 + (x^2-x) y + x^2
    let res = resultant_quadratics(
        [vec![0, 1, 1], vec![1, -1], vec![1]],
        [vec![0, 0, 1], vec![0, -1, 1], vec![1, 1]],
    );
    let expected: Upoly = vec![0, 0, 3, 3, -3, 3, 3];
    let resultant_exact = res == expected || res.iter().map(|c| -c).collect::<Upoly>() == expected;
    ResultantCheck { quartic, modulus: (x1.norm() - 1.0).abs(), param_x, param_y, resultant_exact }
}

pub fn verify_x1_on_resultant() -> bool {
    resultant_check().passed()
}

#[cfg(test)]
mod tests {
    use super::*;

    const CATALAN: f64 = 0.915_965_594_177_219_015;

    #[test]
    fn character_tables() {
        let c3 = DirichletChar::new(-3).unwrap();
        assert_eq!((c3.value(1), c3.value(2), c3.value(3)), (1, -1, 0));
        let c7 = DirichletChar::new(-7).unwrap();
        assert_eq!((1..=7).map(|a| c7.value(a)).collect::<Vec<_>>(), vec![1, 1, -1, 1, -1, -1, 0]);
        let c8 = DirichletChar::new(8).unwrap();
        assert_eq!((1..=8).map(|a| c8.value(a)).collect::<Vec<_>>(), vec![1, 0, -1, 0, -1, 0, 1, 0]);
        assert!(!c8.is_odd());
        for d in [-3, -4, -7, -15, -8, -20] {
            let chi = DirichletChar::new(d).unwrap();
            let f = chi.modulus();
            assert!(chi.is_odd());
            assert_eq!((1..=f).map(|a| chi.value(a)).sum::<i32>(), 0);
            for a in 1..f {
                for b in 1..f {
                    assert_eq!(chi.value(a) * chi.value(b), chi.value(a * b), "d={d} a={a} b={b}");
                }
            }
        }
        assert!(DirichletChar::new(-5).is_err());
        assert!(DirichletChar::new(9).is_err());
        assert!(DirichletChar::new(0).is_err());
    }

    #[test]
    fn bloch_wigner_values() {
        assert_eq!(bloch_wigner(Complex64::new(0.3, 0.0)), 0.0);
        assert!((bloch_wigner(Complex64::new(0.0, 1.0)) - CATALAN).abs() < 1e-14);
        // maximum at e^{i pi/3}: 1.0149416064096536
        let z = Complex64::from_polar(1.0, PI / 3.0);
        assert!((bloch_wigner(z) - 1.014_941_606_409_653_6).abs() < 1e-14);
        assert!(bloch_wigner(Complex64::new(1.0, 0.0)) == 0.0);
        let z = Complex64::new(2.0, 3.0);
        assert!((bloch_wigner(z) + bloch_wigner(z.conj())).abs() < 1e-14);
        assert!((bloch_wigner(z) + bloch_wigner(z.inv())).abs() < 1e-14);
        assert!((bloch_wigner(z) + bloch_wigner(1.0 - z)).abs() < 1e-14);
    }

    #[test]
    fn hurwitz_values() {
        assert!((hurwitz_zeta(2.0, 1.0).unwrap() - PI * PI / 6.0).abs() < 1e-13);
        assert!((hurwitz_zeta(2.0, 0.5).unwrap() - PI * PI / 2.0).abs() < 1e-13);
        let third = hurwitz_zeta(2.0, 1.0 / 3.0).unwrap();
        let n = 1_000_000;
        let direct: f64 = (0..n).rev().map(|k| (k as f64 + 1.0 / 3.0).powi(-2)).sum();
        // tail sum_{k>=n} (k+a)^-2 ~ 1/(n+a-1/2)
        let tail = 1.0 / (n as f64 + 1.0 / 3.0 - 0.5);
        assert!((third - direct - tail).abs() < 1e-12);
        assert!(hurwitz_zeta(1.0, 0.5).is_err());
        assert!(hurwitz_zeta(2.0, 0.0).is_err());
    }

    #[test]
    fn l_values() {
        let c3 = DirichletChar::new(-3).unwrap();
        assert!((dirichlet_l(&c3, 2.0).unwrap() - 0.781_302_412_896_486_3).abs() < 1e-13);
        assert!((l_deriv_minus1(&c3).unwrap() - 0.323_065_947_219_450_5).abs() < 1e-13);
        let c15 = DirichletChar::new(-15).unwrap();
        assert!((l_deriv_minus1(&c15).unwrap() / 6.0 - 0.999_051_831_521_891_2).abs() < 1e-12);
        let c4 = DirichletChar::new(-4).unwrap();
        assert!((dirichlet_l(&c4, 2.0).unwrap() - CATALAN).abs() < 1e-13);
        assert_eq!(l_deriv_minus1(&DirichletChar::new(5).unwrap()), Err(SpecialFnError::EvenCharacter));
    }

    #[test]
    fn dilog_closed_form_and_resultant() {
        assert!((m_a_dilog() - 0.688_447_941_291_041).abs() < 1e-12, "{}", m_a_dilog());
        let c = resultant_check();
        assert!(c.passed(), "{c:?}");
        assert!(verify_x1_on_resultant());
    }
}
