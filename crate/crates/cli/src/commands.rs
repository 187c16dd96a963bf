use mahler_core::eclf::{
    functional_equation_residual, l_deriv_at_0, l_value_at_2, lambda, lambda_with_terms, resolve_bad_data, EclfError,
    WeierstrassCurve, DEFAULT_P_MAX,
};
use mahler_core::families::{
    central_difference, family_derivative, family_measure, q_derivative_t_form, Family, FamilyError, FamilyPoint, Regime,
};
use mahler_core::lpoly::{parse_real, ParseError};
use mahler_core::mahler::{mahler_jensen, mahler_torus2, MahlerError, DEFAULT_TORUS_TOL};
use thiserror::Error;

use crate::report::{Check, RunReport, SweepRow};

pub const FD_STEP: f64 = 1e-4;
pub const DERIVATIVE_CHECK_TOL: f64 = 1e-6;
pub const CROSS_CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::NonPositiveK(_) | FamilyError::Boundary { .. } | FamilyError::OutsideHypothesis { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<MahlerError> for CliError {
    fn from(e: MahlerError) -> Self {
        match e {
            MahlerError::ZeroPolynomial => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<EclfError> for CliError {
    fn from(e: EclfError) -> Self {
        match e {
            EclfError::Singular | EclfError::NotPrime(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

pub fn parse_error(src: &str, e: &ParseError) -> CliError {
    CliError::Usage(format!("cannot parse polynomial: {e}\n  {src}\n  {}^", " ".repeat(e.pos.min(src.len()))))
}

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub tol: f64,
    pub check_tol: Option<f64>,
    pub jobs: usize,
}

impl Settings {
    pub fn check_tol(&self, default: f64) -> f64 {
        self.check_tol.unwrap_or(default)
    }
}

/// `f` over `items` on up to `jobs` threads, results in input order.
pub fn par_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let jobs = jobs.clamp(1, items.len().max(1));
    if jobs == 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    std::thread::scope(|s| {
        let f = &f;
        let handles: Vec<_> = items.chunks(chunk).map(|c| s.spawn(move || c.iter().map(f).collect::<Vec<R>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker thread panicked")).collect()
    })
}

/// Polynomial index of the family member with parameter `k`.
pub fn family_index(family: Family, k: f64) -> f64 {
    match family {
        Family::Q => k + 2.0,
        _ => k,
    }
}

pub fn family_label(family: Family, k: f64) -> String {
    format!("m({family}_{})", family_index(family, k))
}

pub fn measure(r: &mut RunReport, s: &Settings, poly: &str, k: Option<f64>, torus: bool) -> Result<(), CliError> {
    r.input("poly", poly);
    if let Some(k) = k {
        r.input("k", k);
    }
    r.input("tol", format!("{:e}", s.tol));
    let p = parse_real(poly, k).map_err(|e| parse_error(poly, &e))?;
    let m = mahler_jensen(&p, s.tol)?;
    r.output("m", m.value, Some(m.err_est));
    r.notes.push(format!("method: {:?}", m.method));
    if torus {
        let t = mahler_torus2(&p, DEFAULT_TORUS_TOL)?;
        r.output("m_torus", t.value, Some(t.err_est));
        let tol = s.check_tol(10.0 * DEFAULT_TORUS_TOL);
        r.checks.push(Check::within("jensen vs torus", m.value - t.value, tol, false, String::new()));
    }
    Ok(())
}

pub fn family(r: &mut RunReport, s: &Settings, family: Family, k: f64, cross_check: bool) -> Result<(), CliError> {
    r.input("family", family);
    r.input("k", k);
    r.input("tol", format!("{:e}", s.tol));
    r.input("regime", Regime::classify(family, k));
    let m = family_measure(family, family_index(family, k), s.tol)?;
    r.output(family_label(family, k), m.value, Some(m.err_est));
    match FamilyPoint::new(family, k) {
        Ok(_) => r.output("dm/dk", family_derivative(family, k)?, None),
        Err(e) => r.notes.push(format!("no derivative: {e}")),
    }
    if cross_check {
        let engine = mahler_jensen(&family.polynomial(family_index(family, k)), s.tol)?;
        r.output("m_engine", engine.value, Some(engine.err_est));
        let tol = s.check_tol(CROSS_CHECK_TOL);
        r.checks.push(Check::within("reduced form vs engine", m.value - engine.value, tol, false, String::new()));
    }
    Ok(())
}

fn measure_fn(family: Family, tol: f64) -> impl Fn(f64) -> Result<f64, FamilyError> {
    move |k| Ok(family_measure(family, family_index(family, k), tol)?.value)
}

pub fn derivative(r: &mut RunReport, s: &Settings, family: Family, k: f64) -> Result<(), CliError> {
    r.input("family", family);
    r.input("k", k);
    let pt = FamilyPoint::new(family, k)?;
    r.input("regime", pt.regime);
    let d = family_derivative(family, k)?;
    let fd = central_difference(measure_fn(family, s.tol), pt.k, FD_STEP)?;
    r.output("dm/dk", d, None);
    r.output("finite_difference", fd, None);
    let tol = s.check_tol(DERIVATIVE_CHECK_TOL);
    r.checks.push(Check::within("formula vs central difference", d - fd, tol, false, format!("h={FD_STEP}")));
    if family == Family::Q {
        let t = q_derivative_t_form(k)?;
        r.output("dm/dk (t-form)", t, None);
        r.checks.push(Check::within("v-form vs t-form", d - t, 1e-10, false, String::new()));
    }
    Ok(())
}

pub fn sweep(r: &mut RunReport, s: &Settings, family: Family, from: f64, to: f64, steps: usize) -> Result<(), CliError> {
    if steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    if !(from.is_finite() && to.is_finite()) {
        return Err(CliError::Usage("k range must be finite".into()));
    }
    r.input("family", family);
    r.input("from", from);
    r.input("to", to);
    r.input("steps", steps);
    r.input("tol", format!("{:e}", s.tol));
    let ks: Vec<f64> = (0..steps)
        .map(|i| if steps == 1 { from } else { from + (to - from) * i as f64 / (steps - 1) as f64 })
        .collect();
    let rows = par_map(&ks, s.jobs, |&k| -> Result<Option<SweepRow>, CliError> {
        let pt = match FamilyPoint::new(family, k) {
            Ok(pt) => pt,
            Err(FamilyError::Boundary { .. }) => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let m = family_measure(family, family_index(family, k), s.tol)?;
        Ok(Some(SweepRow {
            k,
            m: m.value,
            dm_dk: Some(family_derivative(family, pt.k)?),
            err_est: m.err_est,
            regime: pt.regime.to_string(),
        }))
    });
    for (k, row) in ks.iter().zip(rows) {
        match row? {
            Some(row) => r.rows.push(row),
            None => r.notes.push(format!("skipped k = {k} (regime boundary)")),
        }
    }
    Ok(())
}

/// `224`, `210`, `ek:K` or `a1,a2,a3,a4,a6`.
pub fn parse_curve(spec: &str, conductor: Option<u64>) -> Result<WeierstrassCurve, CliError> {
    let need = |what: &str| CliError::Usage(format!("--conductor is required for {what}"));
    let bad = |e: EclfError| CliError::Usage(format!("invalid curve '{spec}': {e}"));
    match spec {
        "224" => Ok(WeierstrassCurve { conductor: conductor.unwrap_or(224), ..WeierstrassCurve::e224() }),
        "210" => Ok(WeierstrassCurve { conductor: conductor.unwrap_or(210), ..WeierstrassCurve::e210() }),
        _ if spec.starts_with("ek:") => {
            let k: i64 = spec[3..].parse().map_err(|_| CliError::Usage(format!("bad k in '{spec}'")))?;
            WeierstrassCurve::e_k(k, conductor.ok_or_else(|| need("E_k curves"))?).map_err(bad)
        }
        _ => {
            let a: Vec<i64> = spec
                .split(',')
                .map(|t| t.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|_| CliError::Usage(format!("cannot read curve '{spec}'")))?;
            let a: [i64; 5] = a.try_into().map_err(|_| CliError::Usage("a curve needs five coefficients".into()))?;
            WeierstrassCurve::new(a, conductor.ok_or_else(|| need("custom curves"))?, spec).map_err(bad)
        }
    }
}

pub fn lvalue(r: &mut RunReport, s: &Settings, curve: &WeierstrassCurve, s_values: &[f64]) -> Result<(), CliError> {
    r.input("curve", format!("[{},{},{},{},{}]", curve.a1, curve.a2, curve.a3, curve.a4, curve.a6));
    r.input("label", &curve.label);
    r.input("conductor", curve.conductor);
    r.input("p_max", DEFAULT_P_MAX);
    let d = resolve_bad_data(curve, curve.conductor, DEFAULT_P_MAX)?;
    r.output("root_number", f64::from(d.root_number), None);
    for (q, a) in &d.bad_ap {
        r.output(format!("a_{q}"), *a as f64, None);
    }
    let l2 = lambda(&d, 2.0)?;
    r.output("Lambda(2)", l2.value, Some(l2.truncation));
    r.output("L(E,2)", l_value_at_2(&d)?, None);
    r.output("L'(E,0)", l_deriv_at_0(&d)?, None);
    for &x in s_values {
        let l = lambda(&d, x)?;
        r.output(format!("Lambda({x})"), l.value, Some(l.truncation));
    }
    r.notes.push(format!("search residual {:.1e}, runner-up {:.1e}", d.residual, d.runner_up));
    let grid = [0.6, 0.8, 1.0, 1.2, 1.4];
    let worst = grid.iter().map(|&x| functional_equation_residual(&d, x)).fold(0.0, f64::max);
    r.checks.push(Check::within("functional equation on 5-point grid", worst, s.check_tol(1e-9), false, String::new()));
    let doubled = lambda_with_terms(&d, 2.0, 2 * l2.terms)?;
    r.checks.push(Check::within("Lambda(2) under doubling M", l2.value - doubled.value, 1e-10, false, String::new()));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn par_map_keeps_order() {
        let xs: Vec<u64> = (0..37).collect();
        for jobs in [1, 2, 5, 64] {
            assert_eq!(par_map(&xs, jobs, |x| x * x), xs.iter().map(|x| x * x).collect::<Vec<_>>());
        }
    }

    #[test]
    fn curves() {
        assert_eq!(parse_curve("224", None).unwrap().conductor, 224);
        assert_eq!(parse_curve("ek:4", Some(224)).unwrap().a4, -112);
        assert!(matches!(parse_curve("ek:4", None), Err(CliError::Usage(_))));
        assert!(matches!(parse_curve("0,0,0,0,0", Some(11)), Err(CliError::Usage(_))));
        assert_eq!(parse_curve("0,-1,1,-10,-20", Some(11)).unwrap().a6, -20);
    }
}
