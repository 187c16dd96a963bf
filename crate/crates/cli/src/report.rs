use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Failed, as the check predicts.
    ExpectedFail,
    /// Predicted to fail but passed.
    UnexpectedPass,
}

impl Status {
    pub fn is_failure(self) -> bool {
        matches!(self, Status::Fail | Status::UnexpectedPass)
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::ExpectedFail => "XFAIL",
            Status::UnexpectedPass => "XPASS",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Field {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub name: String,
    pub value: f64,
    pub err_est: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// The measured discrepancy.
    pub value: Option<f64>,
    pub tolerance: Option<f64>,
    pub detail: String,
}

impl Check {
    /// `|discrepancy| < tol` is a pass; with `expect_fail` the sense flips.
    pub fn within(name: impl Into<String>, discrepancy: f64, tol: f64, expect_fail: bool, detail: String) -> Self {
        let ok = discrepancy.abs() < tol;
        let status = match (ok, expect_fail) {
            (true, false) => Status::Pass,
            (false, false) => Status::Fail,
            (false, true) => Status::ExpectedFail,
            (true, true) => Status::UnexpectedPass,
        };
        Check { name: name.into(), status, value: Some(discrepancy.abs()), tolerance: Some(tol), detail }
    }

    pub fn flag(name: impl Into<String>, ok: bool, detail: String) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Check { name: name.into(), status, value: None, tolerance: None, detail }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub k: f64,
    pub m: f64,
    pub dm_dk: Option<f64>,
    pub err_est: f64,
    pub regime: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub command: String,
    pub inputs: Vec<Field>,
    pub outputs: Vec<Quantity>,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<SweepRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub passed: bool,
    pub wall_time_s: f64,
}

impl RunReport {
    pub fn new(command: String) -> Self {
        RunReport {
            schema: SCHEMA_VERSION,
            command,
            inputs: Vec::new(),
            outputs: Vec::new(),
            checks: Vec::new(),
            rows: Vec::new(),
            notes: Vec::new(),
            passed: true,
            wall_time_s: 0.0,
        }
    }

    pub fn input(&mut self, name: &str, value: impl ToString) {
        self.inputs.push(Field { name: name.into(), value: value.to_string() });
    }

    pub fn output(&mut self, name: impl Into<String>, value: f64, err_est: Option<f64>) {
        self.outputs.push(Quantity { name: name.into(), value, err_est });
    }

    pub fn finish(&mut self, seconds: f64) {
        self.passed = !self.checks.iter().any(|c| c.status.is_failure());
        self.wall_time_s = seconds;
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Format::Csv => self.to_csv(),
        }
    }

    fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        if !self.inputs.is_empty() {
            let parts: Vec<String> = self.inputs.iter().map(|f| format!("{}={}", f.name, f.value)).collect();
            let _ = writeln!(s, "inputs:  {}", parts.join(" "));
        }
        if !self.outputs.is_empty() {
            let width = self.outputs.iter().map(|q| q.name.len()).max().unwrap_or(0);
            for q in &self.outputs {
                let _ = write!(s, "  {:<width$} = {}", q.name, sig15(q.value));
                if let Some(e) = q.err_est {
                    let _ = write!(s, "  +- {e:.1e}");
                }
                s.push('\n');
            }
        }
        if !self.rows.is_empty() {
            let _ = writeln!(s, "  {:>22} {:>22} {:>22} {:>9}  regime", "k", "m", "dm/dk", "err_est");
            for r in &self.rows {
                let d = r.dm_dk.map_or_else(|| "-".to_string(), sig15);
                let _ = writeln!(s, "  {:>22} {:>22} {:>22} {:>9.1e}  {}", sig15(r.k), sig15(r.m), d, r.err_est, r.regime);
            }
        }
        if !self.checks.is_empty() {
            let _ = writeln!(s, "checks:");
            for c in &self.checks {
                let _ = write!(s, "  [{:<5}] {}", c.status.label(), c.name);
                if let (Some(v), Some(t)) = (c.value, c.tolerance) {
                    let _ = write!(s, "  |d|={v:.2e} tol={t:.0e}");
                }
                if !c.detail.is_empty() {
                    let _ = write!(s, "  {}", c.detail);
                }
                s.push('\n');
            }
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        let _ = writeln!(s, "status: {} ({:.3} s)", if self.passed { "pass" } else { "FAIL" }, self.wall_time_s);
        s
    }

    /// Sweeps give their rows; everything else gives one line per output
    /// and per check. No timing, so repeated runs are byte-identical.
    fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        if !self.rows.is_empty() {
            w.write_record(["k", "m", "dm_dk", "err_est", "regime"]).expect("in-memory write");
            for r in &self.rows {
                w.write_record([
                    sig15(r.k),
                    sig15(r.m),
                    r.dm_dk.map(sig15).unwrap_or_default(),
                    sig15(r.err_est),
                    r.regime.clone(),
                ])
                .expect("in-memory write");
            }
        } else {
            w.write_record(["kind", "name", "value", "err_est", "status"]).expect("in-memory write");
            for q in &self.outputs {
                w.write_record(["output", &q.name, &sig15(q.value), &q.err_est.map(sig15).unwrap_or_default(), ""])
                    .expect("in-memory write");
            }
            for c in &self.checks {
                w.write_record(["check", &c.name, &c.value.map(sig15).unwrap_or_default(), "", c.status.label()])
                    .expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }
}

/// Fifteen significant digits; plain decimals in `[1e-4, 1e15)`.
pub fn sig15(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..15).contains(&mag) {
        format!("{:.*}", (14 - mag) as usize, x)
    } else {
        format!("{x:.14e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig15(0.999051831521891), "0.999051831521891");
        assert_eq!(sig15(-4.09222052757), "-4.09222052757000");
        assert_eq!(sig15(123.0), "123.000000000000");
        assert_eq!(sig15(2.5e-13), "2.50000000000000e-13");
        assert_eq!(sig15(0.0), "0");
    }

    #[test]
    fn json_round_trip() {
        let mut r = RunReport::new("mahler verify landen".into());
        r.input("k", "1,2");
        r.output("m", 1.25, Some(1e-13));
        r.checks.push(Check::within("a", 1e-12, 1e-10, false, String::new()));
        r.checks.push(Check::within("b", 0.04, 1e-7, true, "k=3.5".into()));
        r.rows.push(SweepRow { k: 3.5, m: 1.2, dm_dk: None, err_est: 1e-14, regime: "k>=3".into() });
        r.finish(0.5);
        assert!(r.passed);
        let back: RunReport = serde_json::from_str(&r.render(Format::Json)).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn statuses() {
        assert_eq!(Check::within("x", 1.0, 0.1, false, String::new()).status, Status::Fail);
        assert_eq!(Check::within("x", 0.0, 0.1, true, String::new()).status, Status::UnexpectedPass);
        assert!(Status::UnexpectedPass.is_failure());
        assert!(!Status::ExpectedFail.is_failure());
    }
}
