//! The six report tables at desk scale, next to the published values.

use std::path::{Path, PathBuf};

use condexp::examples::{half_in_the_money_strike, market_params, tilt_distortion, MarketParams, NonPolynomialExample};
use condexp::{Activation, DistortionSpec, ExampleOverrides, TrainSchedule};
use serde::Serialize;

use crate::config::{ExperimentConfig, Format, MarketOverrides, RegressorConfig, ScheduleOverrides};
use crate::reference::{self, ReferenceRow};
use crate::report::{write_csv, write_pretty, ReportRow, RowContext};
use crate::runner::{run, with_suffix, RunOutput};
use crate::CliError;

pub const DESK_M: u64 = 100_000;
pub const DESK_N: u64 = 1_000_000;
/// Paths used to place the desk strike; the seed is fixed so every run seed shares it.
pub const STRIKE_CALIBRATION_SAMPLES: usize = 100_000;
const STRIKE_CALIBRATION_SEED: u64 = 0;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScaleOverrides {
    pub m: Option<u64>,
    pub n: Option<u64>,
    pub seed: Option<u64>,
    pub batch_size: Option<u64>,
    pub nn_steps: Option<u64>,
    pub nn_minibatch: Option<usize>,
    pub dim: Option<usize>,
    pub strike: Option<f64>,
}

struct TableSpec {
    example: &'static str,
    with_feature: bool,
    /// Published training and certification sample counts.
    paper_m: u64,
    paper_n: u64,
}

fn table_spec(id: u8) -> Option<TableSpec> {
    let (example, with_feature, big) = match id {
        1 => ("poly4", false, true),
        2 | 3 => ("nonpoly5", true, true),
        4 => ("maxcall", true, false),
        5 | 6 => ("binary", true, false),
        _ => return None,
    };
    let (paper_m, paper_n) = if big { (2_000_000, 600_000_000) } else { (500_000, 60_000_000) };
    Some(TableSpec { example, with_feature, paper_m, paper_n })
}

/// Regressor rows in table order: linear, polynomial, then the three networks,
/// each followed by its variant with the additional feature where the example has one.
fn table_regressors(with_feature: bool, schedule: &ScheduleOverrides) -> Vec<RegressorConfig> {
    let flags: &[bool] = if with_feature { &[false, true] } else { &[false] };
    let mut rows = Vec::new();
    for &a in flags {
        rows.push(RegressorConfig::Linear { include_additional: a, solver: Default::default(), cutoff: Default::default() });
    }
    for &a in flags {
        rows.push(RegressorConfig::Poly2 { include_additional: a, solver: Default::default(), cutoff: Default::default() });
    }
    for activation in [Activation::Tanh, Activation::Relu, Activation::Lse] {
        for &a in flags {
            rows.push(RegressorConfig::Nn {
                include_additional: a,
                activation,
                hidden_widths: None,
                lse_alpha: None,
                use_batchnorm: None,
                schedule: schedule.clone(),
            });
        }
    }
    rows
}

/// The experiment behind table `id` at the requested scale.
pub fn table_config(id: u8, scale: &ScaleOverrides) -> Result<ExperimentConfig, CliError> {
    let spec = table_spec(id).ok_or_else(|| CliError::Config(format!("table must be 1 to 6, got {id}")))?;
    // Dimension and strike only apply to the market tables. Without an explicit
    // strike the desk market is struck where half of the paths finish in the money.
    let market = if id >= 4 {
        let strike = match scale.strike {
            Some(k) => k,
            None => desk_strike(scale.dim)?,
        };
        MarketOverrides { dim: scale.dim, strike: Some(strike) }
    } else {
        MarketOverrides::default()
    };
    let distortion = match id {
        3 => NonPolynomialExample::shifted_distortion(),
        6 => tilt_distortion(&market_params(&ExampleOverrides::from(market)), 0.99)?,
        _ => DistortionSpec::None,
    };
    let n = scale.n.unwrap_or(DESK_N);
    let schedule = ScheduleOverrides { total_steps: scale.nn_steps, minibatch_size: scale.nn_minibatch, lr_stages: None };
    let config = ExperimentConfig {
        example: spec.example.to_string(),
        train_samples: scale.m.unwrap_or(DESK_M),
        certify_samples: n,
        batch_size: scale.batch_size.unwrap_or(100_000.min(n)),
        ci_level: 0.95,
        seed: scale.seed.unwrap_or(0),
        output_path: None,
        format: Format::Pretty,
        report_timing: true,
        market,
        distortion,
        regressors: table_regressors(spec.with_feature, &schedule),
    };
    config.validate()?;
    Ok(config)
}

/// Half-in-the-money strike for the desk market of dimension `dim` (default 10).
pub fn desk_strike(dim: Option<usize>) -> Result<f64, CliError> {
    let params = market_params(&ExampleOverrides { dim, strike: None });
    Ok(half_in_the_money_strike(&params, STRIKE_CALIBRATION_SAMPLES, STRIKE_CALIBRATION_SEED)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reproduction {
    pub table: u8,
    pub desk: RunOutput,
    /// Published full-scale rows in the same order and with the same labels.
    pub paper: Vec<ReportRow>,
}

fn paper_row(r: &ReferenceRow, ctx: &RowContext) -> ReportRow {
    ReportRow {
        regressor: r.label.to_string(),
        ci_u_lo: Some(r.ci_u.0),
        ci_u_hi: Some(r.ci_u.1),
        ci_d_lo: Some(r.ci_d.0),
        ci_d_hi: Some(r.ci_d.1),
        rel_err: Some(r.rel_err_pct / 100.0),
        rel_err_upper: Some(r.rel_err_upper_pct / 100.0),
        fit_seconds: Some(r.fit_seconds),
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
        solver: String::new(),
        error: String::new(),
    }
}

/// Runs table `id` at desk scale and pairs each row with its published value.
pub fn reproduce_table(id: u8, scale: &ScaleOverrides) -> Result<Reproduction, CliError> {
    let config = table_config(id, scale)?;
    let spec = table_spec(id).expect("validated by table_config");
    let mut desk = run(&config)?;
    if id >= 4 {
        let k = config.market.strike.expect("market tables carry a strike");
        let note = if scale.strike.is_some() {
            format!("strike {k} set on the command line")
        } else {
            let published = MarketParams::new(1).strike;
            format!("strike {k} puts half of the paths in the money at d = {}; the published {published} does so at d = 100", desk.metadata.input_dim)
        };
        desk.metadata.notes.push(note);
    }
    let full = TrainSchedule::full_scale();
    let paper = reference::table(id)
        .expect("tables 1 to 6 exist")
        .iter()
        .map(|r| {
            let m = if r.label.starts_with("NN") { full.total_steps * full.minibatch_size as u64 } else { spec.paper_m };
            let ctx = RowContext { seed: 0, m, n: spec.paper_n, distortion: desk.metadata.distortion.clone() };
            paper_row(r, &ctx)
        })
        .collect();
    Ok(Reproduction { table: id, desk, paper })
}

impl Reproduction {
    /// Rows interleaved as desk, paper, desk, paper, with their source tags.
    pub fn side_by_side(&self) -> (Vec<ReportRow>, Vec<String>) {
        let mut rows = Vec::new();
        let mut tags = Vec::new();
        for (desk, paper) in self.desk.rows.iter().zip(&self.paper) {
            rows.push(desk.clone());
            tags.push("desk".to_string());
            rows.push(paper.clone());
            tags.push("paper".to_string());
        }
        (rows, tags)
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        let (rows, tags) = self.side_by_side();
        let mut buf = Vec::new();
        match format {
            Format::Csv => write_csv(&mut buf, &rows, Some(("source", &tags)))?,
            Format::Json => {
                return serde_json::to_string_pretty(self).map_err(|e| CliError::Io(e.to_string()));
            }
            Format::Pretty => {
                write_pretty(&mut buf, &rows, Some(("source", &tags)))?;
                let meta = &self.desk.metadata;
                let extra = format!(
                    "\ntable {} | {} (d = {}) | {} | seed {} | desk M = {}, N = {}\n",
                    self.table, meta.example, meta.input_dim, meta.distortion, meta.seed, meta.m, meta.n
                );
                buf.extend_from_slice(extra.as_bytes());
                if let Some(f) = meta.in_the_money_fraction {
                    buf.extend_from_slice(format!("in-the-money fraction {f:.4}\n").as_bytes());
                }
                for note in &meta.notes {
                    buf.extend_from_slice(format!("note: {note}\n").as_bytes());
                }
            }
        }
        String::from_utf8(buf).map_err(|e| CliError::Io(e.to_string()))
    }

    /// Writes `<base>.csv` with a leading `source` column and `<base>.json`.
    pub fn write_files(&self, base: &Path) -> Result<(PathBuf, PathBuf), CliError> {
        self.desk.check_consistency()?;
        let csv_path = with_suffix(base, "csv");
        let json_path = with_suffix(base, "json");
        for (path, format) in [(&csv_path, Format::Csv), (&json_path, Format::Json)] {
            std::fs::write(path, self.render(format)?).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        }
        Ok((csv_path, json_path))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_layouts_match_the_published_rows() {
        for id in 1..=6 {
            let config = table_config(id, &ScaleOverrides::default()).unwrap();
            let labels: Vec<String> = config.regressors.iter().map(RegressorConfig::label).collect();
            let published: Vec<&str> = reference::table(id).unwrap().iter().map(|r| r.label).collect();
            assert_eq!(labels, published, "table {id}");
        }
    }

    #[test]
    fn table_distortions() {
        let scale = ScaleOverrides::default();
        assert_eq!(table_config(1, &scale).unwrap().distortion, DistortionSpec::None);
        assert_eq!(table_config(3, &scale).unwrap().distortion.label(), NonPolynomialExample::shifted_distortion().label());
        assert!(table_config(6, &scale).unwrap().distortion.label().starts_with("tail_tilt"));
        assert!(table_config(7, &scale).is_err());
    }
}
