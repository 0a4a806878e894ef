//! Experiment configuration, read from TOML.

use std::path::{Path, PathBuf};

use condexp::linear::{CutoffPolicy, SolverChoice};
use condexp::{Activation, DistortionSpec, ExampleOverrides, TrainSchedule};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    #[default]
    Pretty,
}

/// Market overrides; ignored keys are rejected for non-market examples.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketOverrides {
    pub dim: Option<usize>,
    pub strike: Option<f64>,
}

impl From<MarketOverrides> for ExampleOverrides {
    fn from(m: MarketOverrides) -> Self {
        ExampleOverrides { dim: m.dim, strike: m.strike }
    }
}

/// Partial training schedule; unset fields keep the desk-scale defaults.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleOverrides {
    pub total_steps: Option<u64>,
    pub minibatch_size: Option<usize>,
    pub lr_stages: Option<Vec<(u64, f64)>>,
}

impl ScheduleOverrides {
    /// Without explicit stages, the full recipe's stages are scaled to the step count.
    pub fn resolve(&self) -> TrainSchedule {
        let desk = TrainSchedule::default();
        let mut s = TrainSchedule::scaled(
            self.total_steps.unwrap_or(desk.total_steps),
            self.minibatch_size.unwrap_or(desk.minibatch_size),
        );
        if let Some(stages) = &self.lr_stages {
            s.lr_stages = stages.clone();
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum RegressorConfig {
    Linear {
        #[serde(default)]
        include_additional: bool,
        #[serde(default)]
        solver: SolverChoice,
        #[serde(default)]
        cutoff: CutoffPolicy,
    },
    Poly2 {
        #[serde(default)]
        include_additional: bool,
        #[serde(default)]
        solver: SolverChoice,
        #[serde(default)]
        cutoff: CutoffPolicy,
    },
    Nn {
        #[serde(default)]
        include_additional: bool,
        activation: Activation,
        hidden_widths: Option<Vec<usize>>,
        lse_alpha: Option<f64>,
        use_batchnorm: Option<bool>,
        #[serde(default)]
        schedule: ScheduleOverrides,
    },
}

impl RegressorConfig {
    pub fn include_additional(&self) -> bool {
        match self {
            RegressorConfig::Linear { include_additional, .. }
            | RegressorConfig::Poly2 { include_additional, .. }
            | RegressorConfig::Nn { include_additional, .. } => *include_additional,
        }
    }

    /// Row label in the style of the report tables.
    pub fn label(&self) -> String {
        let base = match self {
            RegressorConfig::Linear { .. } => "lin. regr.".to_string(),
            RegressorConfig::Poly2 { .. } => "poly. regr.".to_string(),
            RegressorConfig::Nn { activation, .. } => format!("NN {}", activation.label()),
        };
        if self.include_additional() {
            format!("{base}, add. feature")
        } else {
            base
        }
    }
}

fn default_batch_size() -> u64 {
    100_000
}

fn default_ci_level() -> f64 {
    0.95
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Registry identifier: `poly4`, `nonpoly5`, `maxcall` or `binary`.
    pub example: String,
    /// Training sample count `M` for the least-squares regressors.
    #[serde(alias = "M")]
    pub train_samples: u64,
    /// Certification sample count `N`, shared by all regressors.
    #[serde(alias = "N")]
    pub certify_samples: u64,
    #[serde(default = "default_batch_size")]
    pub batch_size: u64,
    #[serde(default = "default_ci_level")]
    pub ci_level: f64,
    #[serde(default)]
    pub seed: u64,
    /// Results go to `<output_path>.csv` and `<output_path>.json` when set.
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    /// With timing off, `fit_seconds` is left empty so reruns are byte-identical.
    #[serde(default = "default_true")]
    pub report_timing: bool,
    #[serde(default)]
    pub market: MarketOverrides,
    #[serde(default)]
    pub distortion: DistortionSpec,
    pub regressors: Vec<RegressorConfig>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let config: ExperimentConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Checks everything that can be checked without simulating.
    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |msg: String| Err(CliError::Config(msg));
        if self.train_samples < 2 || self.certify_samples < 2 {
            return fail(format!(
                "train_samples and certify_samples must be at least 2, got {} and {}",
                self.train_samples, self.certify_samples
            ));
        }
        if self.batch_size < 2 || self.batch_size > self.certify_samples {
            return fail(format!(
                "batch_size must lie in [2, certify_samples = {}], got {}",
                self.certify_samples, self.batch_size
            ));
        }
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return fail(format!("ci_level must lie in (0, 1), got {}", self.ci_level));
        }
        if self.regressors.is_empty() {
            return fail("at least one [[regressors]] entry is required".into());
        }
        let model = condexp::example_by_id(&self.example, &self.market.into())?;
        self.distortion.validate(model.input_dim())?;
        for (i, r) in self.regressors.iter().enumerate() {
            if r.include_additional() && !model.has_additional_feature() {
                return fail(format!("regressors[{i}]: example {} has no additional feature", self.example));
            }
            if let RegressorConfig::Nn { schedule, lse_alpha, hidden_widths, .. } = r {
                schedule.resolve().validate().map_err(|e| CliError::Config(format!("regressors[{i}]: {e}")))?;
                if lse_alpha.is_some_and(|a| !(a > 0.0 && a < 1.0)) {
                    return fail(format!("regressors[{i}]: lse_alpha must lie in (0, 1)"));
                }
                if hidden_widths.as_ref().is_some_and(|w| w.contains(&0)) {
                    return fail(format!("regressors[{i}]: hidden widths must be positive"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
example = "poly4"
M = 1000
N = 5000
batch_size = 1000

[[regressors]]
type = "linear"
"#;

    #[test]
    fn minimal_config_parses_with_defaults() {
        let c = ExperimentConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(c.train_samples, 1000);
        assert_eq!(c.ci_level, 0.95);
        assert_eq!(c.distortion, DistortionSpec::None);
        assert_eq!(c.format, Format::Pretty);
        assert!(c.report_timing);
        assert_eq!(c.regressors[0].label(), "lin. regr.");
    }

    #[test]
    fn empty_regressor_list_is_rejected() {
        let text = "example = \"poly4\"\nM = 10\nN = 10\nbatch_size = 10\nregressors = []\n";
        assert!(matches!(ExperimentConfig::from_toml(text), Err(CliError::Config(_))));
    }

    #[test]
    fn parse_errors_point_at_the_field() {
        let text = MINIMAL.replace("M = 1000", "M = \"lots\"");
        let Err(CliError::Config(msg)) = ExperimentConfig::from_toml(&text) else { panic!() };
        assert!(msg.contains("line 3") || msg.contains("M"), "{msg}");

        let text = MINIMAL.replace("type = \"linear\"", "type = \"linear\"\nsolvr = \"auto\"");
        let Err(CliError::Config(msg)) = ExperimentConfig::from_toml(&text) else { panic!() };
        assert!(msg.contains("solvr"), "{msg}");
    }

    #[test]
    fn semantic_checks() {
        for (from, to) in [
            ("batch_size = 1000", "batch_size = 6000"),
            ("N = 5000", "N = 1"),
            ("example = \"poly4\"", "example = \"poly5\""),
            ("type = \"linear\"", "type = \"linear\"\ninclude_additional = true"),
        ] {
            let text = MINIMAL.replace(from, to);
            assert!(matches!(ExperimentConfig::from_toml(&text), Err(CliError::Config(_))), "{to}");
        }
    }

    #[test]
    fn full_config_parses() {
        let text = r#"
example = "binary"
train_samples = 1000
certify_samples = 4000
batch_size = 2000
seed = 9
format = "csv"
report_timing = false

[market]
dim = 3
strike = 11.0

[distortion]
kind = "tail_tilt"
level = 0.99

[[regressors]]
type = "poly2"
include_additional = true
solver = "truncated_svd"
cutoff = { kind = "relative", value = 1e-12 }

[[regressors]]
type = "nn"
activation = "lse"
hidden_widths = [8, 8]
[regressors.schedule]
total_steps = 10
minibatch_size = 64
"#;
        let c = ExperimentConfig::from_toml(text).unwrap();
        assert_eq!(c.distortion, DistortionSpec::TailTilt { level: 0.99 });
        assert_eq!(c.regressors[1].label(), "NN LSE");
        assert_eq!(c.regressors[0].label(), "poly. regr., add. feature");
        let RegressorConfig::Nn { schedule, .. } = &c.regressors[1] else { panic!() };
        assert_eq!(schedule.resolve().total_steps, 10);
        assert_eq!(schedule.resolve(), TrainSchedule::scaled(10, 64));
        assert_eq!(ScheduleOverrides::default().resolve(), TrainSchedule::default());
    }
}
