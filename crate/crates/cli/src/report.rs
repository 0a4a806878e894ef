//! Report rows and their csv, json and pretty renderings.

use std::io::Write;

use condexp::sampling::norm_quantile;
use condexp::EstimateReport;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// One regressor's results. Field order is the csv column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub regressor: String,
    pub ci_u_lo: Option<f64>,
    pub ci_u_hi: Option<f64>,
    pub ci_d_lo: Option<f64>,
    pub ci_d_hi: Option<f64>,
    pub rel_err: Option<f64>,
    pub rel_err_upper: Option<f64>,
    pub fit_seconds: Option<f64>,
    pub u_n: Option<f64>,
    pub stderr_u: Option<f64>,
    pub d_n: Option<f64>,
    pub stderr_d: Option<f64>,
    pub f_n: Option<f64>,
    pub stderr_f: Option<f64>,
    pub c_n: Option<f64>,
    pub stderr_c: Option<f64>,
    pub seed: u64,
    pub m: u64,
    pub n: u64,
    pub distortion: String,
    /// Linear solver actually used, empty for networks.
    pub solver: String,
    pub error: String,
}

pub const COLUMNS: [&str; 22] = [
    "regressor",
    "ci_u_lo",
    "ci_u_hi",
    "ci_d_lo",
    "ci_d_hi",
    "rel_err",
    "rel_err_upper",
    "fit_seconds",
    "u_n",
    "stderr_u",
    "d_n",
    "stderr_d",
    "f_n",
    "stderr_f",
    "c_n",
    "stderr_c",
    "seed",
    "m",
    "n",
    "distortion",
    "solver",
    "error",
];

/// Run-level facts shared by every row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowContext {
    pub seed: u64,
    pub m: u64,
    pub n: u64,
    pub distortion: String,
}

impl ReportRow {
    pub fn success(label: String, ctx: &RowContext, r: &EstimateReport, fit_seconds: Option<f64>, solver: String) -> Self {
        ReportRow {
            regressor: label,
            ci_u_lo: Some(r.ci_u.lo),
            ci_u_hi: Some(r.ci_u.hi),
            ci_d_lo: Some(r.ci_d.lo),
            ci_d_hi: Some(r.ci_d.hi),
            rel_err: r.rel_err,
            rel_err_upper: r.rel_err_upper,
            fit_seconds,
            u_n: Some(r.u_n),
            stderr_u: Some(r.stderr_u),
            d_n: Some(r.d_n),
            stderr_d: Some(r.stderr_d),
            f_n: Some(r.f_n),
            stderr_f: Some(r.stderr_f),
            c_n: Some(r.c_n),
            stderr_c: Some(r.stderr_c),
            seed: ctx.seed,
            m: ctx.m,
            n: ctx.n,
            distortion: ctx.distortion.clone(),
            solver,
            error: String::new(),
        }
    }

    pub fn failure(label: String, ctx: &RowContext, error: String, fit_seconds: Option<f64>) -> Self {
        ReportRow {
            regressor: label,
            ci_u_lo: None,
            ci_u_hi: None,
            ci_d_lo: None,
            ci_d_hi: None,
            rel_err: None,
            rel_err_upper: None,
            fit_seconds,
            u_n: None,
            stderr_u: None,
            d_n: None,
            stderr_d: None,
            f_n: None,
            stderr_f: None,
            c_n: None,
            stderr_c: None,
            seed: ctx.seed,
            m: ctx.m,
            n: ctx.n,
            distortion: ctx.distortion.clone(),
            solver: String::new(),
            error,
        }
    }

    pub fn failed(&self) -> bool {
        !self.error.is_empty()
    }

    /// The appendix columns must reproduce the interval and error columns.
    pub fn check_consistency(&self, ci_level: f64) -> Result<(), String> {
        if self.failed() {
            return Ok(());
        }
        let q = norm_quantile(0.5 + 0.5 * ci_level).map_err(|e| e.to_string())?;
        let q1 = norm_quantile(ci_level).map_err(|e| e.to_string())?;
        let get = |v: Option<f64>, name: &str| v.ok_or_else(|| format!("{}: missing {name}", self.regressor));
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
        let (u, su) = (get(self.u_n, "u_n")?, get(self.stderr_u, "stderr_u")?);
        let (d, sd) = (get(self.d_n, "d_n")?, get(self.stderr_d, "stderr_d")?);
        let (f, sf) = (get(self.f_n, "f_n")?, get(self.stderr_f, "stderr_f")?);
        let c = get(self.c_n, "c_n")?;
        let checks = [
            (get(self.ci_u_lo, "ci_u_lo")?, u - q * su),
            (get(self.ci_u_hi, "ci_u_hi")?, u + q * su),
            (get(self.ci_d_lo, "ci_d_lo")?, d - q * sd),
            (get(self.ci_d_hi, "ci_d_hi")?, d + q * sd),
        ];
        if checks.iter().any(|(a, b)| !close(*a, *b)) {
            return Err(format!("{}: confidence intervals disagree with point estimates", self.regressor));
        }
        let expect = |x: f64| if c > 0.0 { Some(x.signum() * (x.abs() / c).sqrt()) } else { None };
        let same = |a: Option<f64>, b: Option<f64>| match (a, b) {
            (Some(a), Some(b)) => close(a, b),
            (None, None) => true,
            _ => false,
        };
        if !same(self.rel_err, expect(f)) || !same(self.rel_err_upper, expect(f + q1 * sf)) {
            return Err(format!("{}: relative errors disagree with F_N and C_N", self.regressor));
        }
        Ok(())
    }
}

/// 17 significant digits.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

fn cell(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

impl ReportRow {
    fn csv_record(&self) -> Vec<String> {
        vec![
            self.regressor.clone(),
            cell(self.ci_u_lo),
            cell(self.ci_u_hi),
            cell(self.ci_d_lo),
            cell(self.ci_d_hi),
            cell(self.rel_err),
            cell(self.rel_err_upper),
            cell(self.fit_seconds),
            cell(self.u_n),
            cell(self.stderr_u),
            cell(self.d_n),
            cell(self.stderr_d),
            cell(self.f_n),
            cell(self.stderr_f),
            cell(self.c_n),
            cell(self.stderr_c),
            self.seed.to_string(),
            self.m.to_string(),
            self.n.to_string(),
            self.distortion.clone(),
            self.solver.clone(),
            self.error.clone(),
        ]
    }
}

/// Rows as csv; a leading column can tag each row (e.g. its source).
pub fn write_csv<W: Write>(out: W, rows: &[ReportRow], tag: Option<(&str, &[String])>) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| CliError::Io(e.to_string());
    let mut header: Vec<&str> = Vec::new();
    if let Some((name, _)) = tag {
        header.push(name);
    }
    header.extend(COLUMNS);
    w.write_record(&header).map_err(io)?;
    for (i, row) in rows.iter().enumerate() {
        let mut record = Vec::new();
        if let Some((_, values)) = tag {
            record.push(values[i].clone());
        }
        record.extend(row.csv_record());
        w.write_record(&record).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}

fn percent(x: Option<f64>) -> String {
    x.map(|v| format!("{:.2} %", 100.0 * v)).unwrap_or_else(|| "n/a".into())
}

fn interval(lo: Option<f64>, hi: Option<f64>) -> String {
    match (lo, hi) {
        (Some(lo), Some(hi)) => format!("[{lo:.5}, {hi:.5}]"),
        _ => "n/a".into(),
    }
}

/// Fixed-width table: intervals to 5 decimals, relative errors in percent.
pub fn write_pretty<W: Write>(mut out: W, rows: &[ReportRow], tag: Option<(&str, &[String])>) -> Result<(), CliError> {
    let headers = ["regressor", "CI U", "CI D", "rel. err", "rel. err 95% CB", "time"];
    let mut lines: Vec<Vec<String>> = vec![];
    for (i, r) in rows.iter().enumerate() {
        let mut label = r.regressor.clone();
        if let Some((_, values)) = tag {
            label = format!("{label} ({})", values[i]);
        }
        let time = r.fit_seconds.map(|t| format!("{t:.1} s")).unwrap_or_else(|| "-".into());
        if r.failed() {
            lines.push(vec![label, format!("failed: {}", r.error), String::new(), String::new(), String::new(), time]);
        } else {
            lines.push(vec![
                label,
                interval(r.ci_u_lo, r.ci_u_hi),
                interval(r.ci_d_lo, r.ci_d_hi),
                percent(r.rel_err),
                percent(r.rel_err_upper),
                time,
            ]);
        }
    }
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for line in &lines {
        for (w, c) in widths.iter_mut().zip(line) {
            *w = (*w).max(c.chars().count());
        }
    }
    let render = |cells: Vec<String>| {
        cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string()
    };
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    writeln!(out, "{}", render(headers.iter().map(|h| h.to_string()).collect())).map_err(io)?;
    writeln!(out, "{}", "-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1))).map_err(io)?;
    for line in lines {
        writeln!(out, "{}", render(line)).map_err(io)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use condexp::estimators::{finalize, MomentAccumulator};

    fn row() -> ReportRow {
        let mut acc = MomentAccumulator::default();
        for i in 0..100 {
            let x = (i as f64 * 0.37).sin();
            acc.push(1.0 + x, 1.0 - 0.5 * x, 0.8);
        }
        let r = finalize(&acc, 0.95).unwrap();
        let ctx = RowContext { seed: 1, m: 10, n: 100, distortion: "none".into() };
        ReportRow::success("lin. regr.".into(), &ctx, &r, Some(0.25), "cholesky".into())
    }

    #[test]
    fn consistent_rows_pass_and_tampered_rows_fail() {
        let r = row();
        r.check_consistency(0.95).unwrap();
        let mut bad = r.clone();
        bad.ci_u_hi = Some(bad.ci_u_hi.unwrap() + 1e-6);
        assert!(bad.check_consistency(0.95).is_err());
        let mut bad = r;
        bad.rel_err = Some(0.5);
        assert!(bad.check_consistency(0.95).is_err());
    }

    #[test]
    fn csv_has_fixed_columns_and_roundtrips_numbers() {
        let r = row();
        let mut buf = Vec::new();
        write_csv(&mut buf, &[r.clone()], None).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), COLUMNS.join(","));
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields.len(), COLUMNS.len());
        assert_eq!(fields[8].parse::<f64>().unwrap(), r.u_n.unwrap());
        assert_eq!(fields[1].trim_start_matches('-').split('e').next().unwrap().replace('.', "").len(), 17);
    }

    #[test]
    fn pretty_rounds_to_five_decimals() {
        let mut buf = Vec::new();
        write_pretty(&mut buf, &[row()], None).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let line = text.lines().nth(2).unwrap();
        assert!(line.starts_with("lin. regr."));
        let lo = format!("{:.5}", row().ci_u_lo.unwrap());
        assert!(line.contains(&lo));
        assert!(line.contains("0.2 s") || line.contains("0.3 s"));
    }
}
