//! Fit every configured regressor, certify all of them on one shared sample.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use condexp::linear::{fit, FeatureSpec, FitOptions};
use condexp::model::{eval_feature, sample_pairs};
use condexp::nn::train;
use condexp::{
    certify_many, BoundRegressor, CandidateRegressor, CertifyPlan, DistortionSpec, NetworkSpec, PairStreams,
    RngStream, StructuralModel, TrainStreams, TripleStreams,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, Format, RegressorConfig};
use crate::report::{write_csv, write_pretty, ReportRow, RowContext};
use crate::CliError;

/// Certification uses streams 1 to 3 of the seed.
pub const CERTIFY_STREAM: u64 = 1;
/// Regressor `i` trains on streams `TRAIN_STREAM + 10 i` and up.
pub const TRAIN_STREAM: u64 = 1000;
const MONEYNESS_STREAM: u64 = 900;
const MONEYNESS_SAMPLES: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub example: String,
    pub input_dim: usize,
    pub distortion: String,
    pub ci_level: f64,
    pub batch_size: u64,
    pub seed: u64,
    pub m: u64,
    pub n: u64,
    /// Share of nonzero responses on a side sample, for the option examples.
    pub in_the_money_fraction: Option<f64>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    pub metadata: RunMetadata,
    pub rows: Vec<ReportRow>,
}

impl RunOutput {
    pub fn any_failed(&self) -> bool {
        self.rows.iter().any(ReportRow::failed)
    }

    pub fn check_consistency(&self) -> Result<(), CliError> {
        for row in &self.rows {
            row.check_consistency(self.metadata.ci_level).map_err(CliError::Numerical)?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut buf = Vec::new();
        write_csv(&mut buf, &self.rows, None)?;
        String::from_utf8(buf).map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        serde_json::to_string_pretty(self).map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
            Format::Pretty => {
                let mut buf = Vec::new();
                write_pretty(&mut buf, &self.rows, None)?;
                let mut text = String::from_utf8(buf).map_err(|e| CliError::Io(e.to_string()))?;
                text.push_str(&format!(
                    "\n{} | {} | seed {} | M = {} | N = {}\n",
                    self.metadata.example, self.metadata.distortion, self.metadata.seed, self.metadata.m, self.metadata.n
                ));
                if let Some(f) = self.metadata.in_the_money_fraction {
                    text.push_str(&format!("in-the-money fraction {f:.4}\n"));
                }
                for note in &self.metadata.notes {
                    text.push_str(&format!("note: {note}\n"));
                }
                Ok(text)
            }
        }
    }

    /// Checks the rows, then writes `<base>.csv` and `<base>.json`.
    pub fn write_files(&self, base: &Path) -> Result<(PathBuf, PathBuf), CliError> {
        self.check_consistency()?;
        let csv_path = with_suffix(base, "csv");
        let json_path = with_suffix(base, "json");
        if let Some(dir) = base.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        }
        for (path, text) in [(&csv_path, self.to_csv()?), (&json_path, self.to_json()?)] {
            std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        }
        Ok((csv_path, json_path))
    }
}

pub(crate) fn with_suffix(base: &Path, ext: &str) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

struct Fitted {
    candidate: Box<dyn CandidateRegressor>,
    fit_seconds: f64,
    solver: String,
    samples: u64,
}

fn fit_linear(
    model: &Arc<dyn StructuralModel>,
    config: &ExperimentConfig,
    spec: FeatureSpec,
    options: FitOptions,
    streams: &mut PairStreams,
) -> condexp::Result<Fitted> {
    let (x, y) = sample_pairs(model.as_ref(), &config.distortion, config.train_samples as usize, streams)?;
    let a = if spec.include_additional { Some(eval_feature(model.as_ref(), &x)?) } else { None };
    let f = fit(spec, &x, &y, a.as_deref(), &options)?;
    let solver = serde_json::to_value(f.solver_used).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    Ok(Fitted { fit_seconds: f.fit_seconds, solver, samples: config.train_samples, candidate: Box::new(BoundRegressor::new(model.clone(), f)) })
}

fn fit_one(model: &Arc<dyn StructuralModel>, config: &ExperimentConfig, index: usize) -> condexp::Result<Fitted> {
    let first = TRAIN_STREAM + 10 * index as u64;
    let mut data = PairStreams::from_seed(config.seed, first);
    let d = model.input_dim();
    match &config.regressors[index] {
        RegressorConfig::Linear { include_additional, solver, cutoff } => {
            let options = FitOptions { solver: *solver, cutoff: *cutoff, ..FitOptions::default() };
            fit_linear(model, config, FeatureSpec::linear(d).with_additional(*include_additional), options, &mut data)
        }
        RegressorConfig::Poly2 { include_additional, solver, cutoff } => {
            let options = FitOptions { solver: *solver, cutoff: *cutoff, ..FitOptions::default() };
            fit_linear(model, config, FeatureSpec::quadratic(d).with_additional(*include_additional), options, &mut data)
        }
        RegressorConfig::Nn { include_additional, activation, hidden_widths, lse_alpha, use_batchnorm, schedule } => {
            let mut spec = NetworkSpec::new(d, *include_additional, *activation);
            if let Some(w) = hidden_widths {
                spec = spec.with_hidden_widths(w.clone());
            }
            if let Some(a) = lse_alpha {
                spec.lse_alpha = *a;
            }
            if let Some(b) = use_batchnorm {
                spec.use_batchnorm = *b;
            }
            let schedule = schedule.resolve();
            let streams = TrainStreams { init: RngStream::new(config.seed, first + 2), data };
            let net = train(&spec, &schedule, model.as_ref(), &config.distortion, streams)?;
            Ok(Fitted {
                fit_seconds: net.fit_seconds,
                solver: String::new(),
                samples: schedule.total_steps * schedule.minibatch_size as u64,
                candidate: Box::new(BoundRegressor::new(model.clone(), net)),
            })
        }
    }
}

fn moneyness(model: &dyn StructuralModel, distortion: &DistortionSpec, seed: u64) -> condexp::Result<f64> {
    let (_, y) = sample_pairs(model, distortion, MONEYNESS_SAMPLES, &mut PairStreams::from_seed(seed, MONEYNESS_STREAM))?;
    Ok(y.iter().filter(|v| **v != 0.0).count() as f64 / y.len() as f64)
}

/// Runs a validated configuration.
///
/// Configuration problems fail the run; fit and certification failures
/// are recorded in the affected rows.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput, CliError> {
    config.validate()?;
    let model = condexp::example_by_id(&config.example, &config.market.into())?;
    let is_market = matches!(config.example.as_str(), "maxcall" | "binary");

    let fitted: Vec<condexp::Result<Fitted>> =
        (0..config.regressors.len()).into_par_iter().map(|i| fit_one(&model, config, i)).collect();

    let ok: Vec<&dyn CandidateRegressor> =
        fitted.iter().filter_map(|f| f.as_ref().ok()).map(|f| f.candidate.as_ref()).collect();
    let plan = CertifyPlan::new(config.certify_samples, config.batch_size, config.ci_level);
    let streams = TripleStreams::from_seed(config.seed, CERTIFY_STREAM);
    let mut reports = if ok.is_empty() {
        Ok(Vec::new())
    } else {
        certify_many(model.as_ref(), &config.distortion, &ok, plan, streams)
    }
    .map(|r| r.into_iter());

    let ctx = RowContext {
        seed: config.seed,
        m: config.train_samples,
        n: config.certify_samples,
        distortion: config.distortion.label(),
    };
    let rows = config
        .regressors
        .iter()
        .zip(&fitted)
        .map(|(rc, f)| {
            let label = rc.label();
            match f {
                Err(e) => ReportRow::failure(label, &ctx, format!("fit: {e}"), None),
                Ok(f) => {
                    let seconds = config.report_timing.then_some(f.fit_seconds);
                    let row_ctx = RowContext { m: f.samples, ..ctx.clone() };
                    match &mut reports {
                        Err(e) => ReportRow::failure(label, &row_ctx, format!("certify: {e}"), seconds),
                        Ok(it) => match it.next().expect("one report per fitted regressor") {
                            Ok(r) => ReportRow::success(label, &row_ctx, &r, seconds, f.solver.clone()),
                            Err(e) => ReportRow::failure(label, &row_ctx, format!("certify: {e}"), seconds),
                        },
                    }
                }
            }
        })
        .collect();

    let mut notes = Vec::new();
    if config.example == "nonpoly5" && matches!(config.distortion, DistortionSpec::GaussianShiftScale { .. }) {
        notes.push("N(1, 1/10) is read as mean 1 and variance 1/10".to_string());
    }
    let in_the_money_fraction = if is_market {
        Some(moneyness(model.as_ref(), &config.distortion, config.seed)?)
    } else {
        None
    };
    Ok(RunOutput {
        metadata: RunMetadata {
            example: config.example.clone(),
            input_dim: model.input_dim(),
            distortion: ctx.distortion,
            ci_level: config.ci_level,
            batch_size: config.batch_size,
            seed: config.seed,
            m: config.train_samples,
            n: config.certify_samples,
            in_the_money_fraction,
            notes,
        },
        rows,
    })
}
