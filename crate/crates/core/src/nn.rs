//! Feedforward networks trained on freshly simulated mini-batches.
//!
//! Every hidden affine layer is followed by batch normalization (optional)
//! and the activation; the output layer is affine. Parameters live in one
//! flat vector, laid out layer by layer as `W` (row-major, out × in), `b`,
//! then `γ`, `β` for normalized layers. Running batch statistics are kept
//! apart from the trainable parameters.

use std::io::{Read, Write};
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{gemm, Matrix, Op};
use crate::model::{eval_feature, sample_pairs, DistortionSpec, PairStreams, StructuralModel};
use crate::regressor::FeaturePredictor;
use crate::sampling::RngStream;

pub const BATCHNORM_EPS: f64 = 1e-5;
pub const BATCHNORM_MOMENTUM: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Tanh,
    Relu,
    Lse,
}

impl Activation {
    pub fn label(self) -> &'static str {
        match self {
            Activation::Tanh => "tanh",
            Activation::Relu => "ReLU",
            Activation::Lse => "LSE",
        }
    }

    pub fn apply(self, x: f64, alpha: f64) -> f64 {
        match self {
            Activation::Tanh => x.tanh(),
            Activation::Relu => x.max(0.0),
            Activation::Lse => lse(x, alpha),
        }
    }

    /// Derivative; the ReLU subgradient at 0 is 0.
    pub fn derivative(self, x: f64, alpha: f64) -> f64 {
        match self {
            Activation::Tanh => {
                let t = x.tanh();
                1.0 - t * t
            }
            Activation::Relu => {
                if x > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Lse => lse_derivative(x, alpha),
        }
    }

    /// Derivative at `x` given `a = apply(x)`, reusing `a` where possible.
    fn derivative_given_output(self, x: f64, a: f64, alpha: f64) -> f64 {
        match self {
            Activation::Tanh => 1.0 - a * a,
            _ => self.derivative(x, alpha),
        }
    }
}

/// `log(e^{αx} + e^x)`, evaluated without overflow.
pub fn lse(x: f64, alpha: f64) -> f64 {
    (alpha * x).max(x) + (-(1.0 - alpha) * x.abs()).exp().ln_1p()
}

/// `α + (1 − α) σ((1 − α) x)` with `σ` the logistic function.
pub fn lse_derivative(x: f64, alpha: f64) -> f64 {
    let s = (1.0 - alpha) * x;
    let logistic = if s >= 0.0 {
        1.0 / (1.0 + (-s).exp())
    } else {
        let e = s.exp();
        e / (1.0 + e)
    };
    alpha + (1.0 - alpha) * logistic
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    /// Number of affine layers.
    pub depth: usize,
    pub hidden_widths: Vec<usize>,
    pub activation: Activation,
    pub lse_alpha: f64,
    /// Width of the input layer, including the additional feature column.
    pub input_dim: usize,
    pub use_batchnorm: bool,
    /// Whether the last input column is the model's `a(x)`.
    pub include_additional: bool,
}

impl NetworkSpec {
    /// Depth 4 with three hidden layers of 32, the desk-scale architecture.
    pub fn new(model_dim: usize, include_additional: bool, activation: Activation) -> Self {
        NetworkSpec {
            depth: 4,
            hidden_widths: vec![32; 3],
            activation,
            lse_alpha: 0.01,
            input_dim: model_dim + usize::from(include_additional),
            use_batchnorm: true,
            include_additional,
        }
    }

    pub fn with_hidden_widths(mut self, widths: Vec<usize>) -> Self {
        self.depth = widths.len() + 1;
        self.hidden_widths = widths;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth == 0 {
            return Err(Error::Config("network depth must be positive".into()));
        }
        if self.hidden_widths.len() + 1 != self.depth {
            return Err(Error::Config(format!(
                "depth {} needs {} hidden widths, got {}",
                self.depth,
                self.depth - 1,
                self.hidden_widths.len()
            )));
        }
        if self.hidden_widths.contains(&0) || self.input_dim == 0 {
            return Err(Error::Config("layer widths must be positive".into()));
        }
        if usize::from(self.include_additional) > self.input_dim {
            return Err(Error::Config("input layer too narrow for the additional feature".into()));
        }
        if !(self.lse_alpha > 0.0 && self.lse_alpha < 1.0) {
            return Err(Error::Config(format!("lse_alpha must lie in (0, 1), got {}", self.lse_alpha)));
        }
        Ok(())
    }

    fn layers(&self) -> Vec<Layer> {
        let mut widths = vec![self.input_dim];
        widths.extend(&self.hidden_widths);
        widths.push(1);
        let mut layers = Vec::with_capacity(self.depth);
        let (mut offset, mut stats) = (0, 0);
        for l in 0..self.depth {
            let (fan_in, fan_out) = (widths[l], widths[l + 1]);
            let w = offset;
            let b = w + fan_in * fan_out;
            offset = b + fan_out;
            let hidden = l + 1 < self.depth;
            let norm = if hidden && self.use_batchnorm {
                let norm = Norm { gamma: offset, beta: offset + fan_out, mean: stats, var: stats + fan_out };
                offset += 2 * fan_out;
                stats += 2 * fan_out;
                Some(norm)
            } else {
                None
            };
            layers.push(Layer { fan_in, fan_out, w, b, norm, hidden });
        }
        layers
    }

    pub fn parameter_count(&self) -> usize {
        self.layers().iter().map(Layer::parameter_count).sum()
    }

    pub fn statistic_count(&self) -> usize {
        self.layers().iter().filter(|l| l.norm.is_some()).map(|l| 2 * l.fan_out).sum()
    }

    pub fn label(&self) -> String {
        let mut label = format!("NN {}", self.activation.label());
        if self.include_additional {
            label.push_str(", add. feature");
        }
        label
    }
}

#[derive(Debug, Clone, Copy)]
struct Norm {
    gamma: usize,
    beta: usize,
    mean: usize,
    var: usize,
}

#[derive(Debug, Clone, Copy)]
struct Layer {
    fan_in: usize,
    fan_out: usize,
    w: usize,
    b: usize,
    norm: Option<Norm>,
    hidden: bool,
}

impl Layer {
    fn parameter_count(&self) -> usize {
        self.fan_out * (self.fan_in + 1) + if self.norm.is_some() { 2 * self.fan_out } else { 0 }
    }

    fn weights(&self, theta: &[f64]) -> Matrix {
        let len = self.fan_in * self.fan_out;
        Matrix::from_vec(self.fan_out, self.fan_in, theta[self.w..self.w + len].to_vec())
            .expect("layer weight block matches its shape")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainSchedule {
    pub total_steps: u64,
    pub minibatch_size: usize,
    /// `(first step, learning rate)` pairs.
    pub lr_stages: Vec<(u64, f64)>,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
}

/// Learning-rate stages of the full 250,000-step recipe.
pub const FULL_SCALE_LR_STAGES: [(u64, f64); 7] = [
    (0, 0.1),
    (1000, 0.05),
    (5000, 1e-2),
    (25_000, 1e-3),
    (50_000, 1e-4),
    (100_000, 1e-5),
    (150_000, 1e-6),
];

const FULL_SCALE_STEPS: u64 = 250_000;

impl Default for TrainSchedule {
    /// 20,000 steps on mini-batches of 2¹⁰, stages scaled to that length.
    fn default() -> Self {
        TrainSchedule::scaled(20_000, 1 << 10)
    }
}

impl TrainSchedule {
    /// 250,000 steps on mini-batches of 2¹³.
    pub fn full_scale() -> Self {
        TrainSchedule::scaled(FULL_SCALE_STEPS, 1 << 13)
    }

    /// The full recipe with every stage threshold multiplied by
    /// `total_steps / 250,000`; thresholds stay strictly increasing.
    pub fn scaled(total_steps: u64, minibatch_size: usize) -> Self {
        let mut lr_stages: Vec<(u64, f64)> = Vec::with_capacity(FULL_SCALE_LR_STAGES.len());
        for (step, rate) in FULL_SCALE_LR_STAGES {
            let scaled = ((step as u128 * total_steps as u128 + FULL_SCALE_STEPS as u128 / 2) / FULL_SCALE_STEPS as u128) as u64;
            let floor = lr_stages.last().map_or(0, |s| s.0 + 1);
            lr_stages.push((scaled.max(floor), rate));
        }
        TrainSchedule {
            total_steps,
            minibatch_size,
            lr_stages,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.lr_stages.first().map(|s| s.0) != Some(0) {
            return Err(Error::Config("the first learning-rate stage must start at step 0".into()));
        }
        for pair in self.lr_stages.windows(2) {
            if pair[1].0 <= pair[0].0 || pair[1].1 >= pair[0].1 {
                return Err(Error::Config(
                    "learning-rate thresholds must increase and rates must decrease".into(),
                ));
            }
        }
        if self.lr_stages.iter().any(|s| !(s.1 > 0.0)) {
            return Err(Error::Config("learning rates must be positive".into()));
        }
        if self.minibatch_size < 2 {
            return Err(Error::BatchSize { rows: self.minibatch_size });
        }
        let unit = |x: f64| x >= 0.0 && x < 1.0;
        if !unit(self.adam_beta1) || !unit(self.adam_beta2) || !(self.adam_eps > 0.0) {
            return Err(Error::Config("Adam needs β₁, β₂ in [0, 1) and ε > 0".into()));
        }
        Ok(())
    }

    pub fn learning_rate(&self, step: u64) -> f64 {
        self.lr_stages.iter().take_while(|s| s.0 <= step).last().map_or(self.lr_stages[0].1, |s| s.1)
    }
}

/// Network parameters together with the frozen batch statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedNetwork {
    pub spec: NetworkSpec,
    pub schedule: TrainSchedule,
    pub theta: Vec<f64>,
    /// Running mean and variance per normalized layer.
    pub running: Vec<f64>,
    pub steps_taken: u64,
    pub fit_seconds: f64,
}

/// Xavier-uniform weights, zero biases, unit scale and zero shift.
pub fn xavier_init(spec: &NetworkSpec, stream: &mut RngStream) -> Result<TrainedNetwork> {
    spec.validate()?;
    let mut theta = vec![0.0; spec.parameter_count()];
    let mut running = vec![0.0; spec.statistic_count()];
    for layer in spec.layers() {
        let bound = (6.0 / (layer.fan_in + layer.fan_out) as f64).sqrt();
        let w = &mut theta[layer.w..layer.w + layer.fan_in * layer.fan_out];
        stream.fill_uniform(w);
        w.iter_mut().for_each(|u| *u = bound * (2.0 * *u - 1.0));
        if let Some(norm) = layer.norm {
            theta[norm.gamma..norm.gamma + layer.fan_out].fill(1.0);
            running[norm.var..norm.var + layer.fan_out].fill(1.0);
        }
    }
    Ok(TrainedNetwork {
        spec: spec.clone(),
        schedule: TrainSchedule::default(),
        theta,
        running,
        steps_taken: 0,
        fit_seconds: 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Normalize with batch statistics and record what backpropagation needs.
    Train,
    /// Normalize with the running statistics.
    Infer,
}

#[derive(Debug, Clone)]
struct LayerCache {
    input: Matrix,
    normalized: Option<Matrix>,
    inv_std: Vec<f64>,
    batch_mean: Vec<f64>,
    batch_var: Vec<f64>,
    pre_activation: Matrix,
}

/// Intermediate values of a training-mode forward pass.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    layers: Vec<LayerCache>,
    last_input: Matrix,
}

impl ForwardCache {
    /// The batch-normalized pre-activations of hidden layer `l`, before scale and shift.
    pub fn normalized(&self, l: usize) -> Option<&Matrix> {
        self.layers.get(l).and_then(|c| c.normalized.as_ref())
    }
}

fn column_moments(z: &Matrix) -> (Vec<f64>, Vec<f64>) {
    let n = z.rows() as f64;
    let mut mean = vec![0.0; z.cols()];
    for row in z.iter_rows() {
        mean.iter_mut().zip(row).for_each(|(m, v)| *m += v);
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut var = vec![0.0; z.cols()];
    for row in z.iter_rows() {
        for ((s, v), m) in var.iter_mut().zip(row).zip(&mean) {
            *s += (v - m) * (v - m);
        }
    }
    var.iter_mut().for_each(|s| *s /= n);
    (mean, var)
}

impl TrainedNetwork {
    /// Outputs for the rows of `x`; the cache is returned in training mode.
    pub fn forward(&self, x: &Matrix, mode: Mode) -> Result<(Vec<f64>, Option<ForwardCache>)> {
        let spec = &self.spec;
        if x.cols() != spec.input_dim {
            return Err(Error::shape(format!("{} network inputs", spec.input_dim), x.cols()));
        }
        let n = x.rows();
        let layers = spec.layers();
        if mode == Mode::Train && n < 2 && layers.iter().any(|l| l.norm.is_some()) {
            return Err(Error::BatchSize { rows: n });
        }
        let theta = &self.theta;
        let alpha = spec.lse_alpha;
        let mut caches = Vec::new();
        let mut h = x.clone();
        for layer in &layers {
            let mut z = Matrix::zeros(n, layer.fan_out);
            let bias = &theta[layer.b..layer.b + layer.fan_out];
            for i in 0..n {
                z.row_mut(i).copy_from_slice(bias);
            }
            gemm(1.0, &h, Op::N, &layer.weights(theta), Op::T, 1.0, &mut z);
            if !layer.hidden {
                let cache = (mode == Mode::Train).then(|| ForwardCache { layers: caches, last_input: h });
                return Ok((z.into_vec(), cache));
            }

            let mut cache = LayerCache {
                input: Matrix::zeros(0, 0),
                normalized: None,
                inv_std: Vec::new(),
                batch_mean: Vec::new(),
                batch_var: Vec::new(),
                pre_activation: Matrix::zeros(0, 0),
            };
            if let Some(norm) = layer.norm {
                let (mean, var) = match mode {
                    Mode::Train => column_moments(&z),
                    Mode::Infer => (
                        self.running[norm.mean..norm.mean + layer.fan_out].to_vec(),
                        self.running[norm.var..norm.var + layer.fan_out].to_vec(),
                    ),
                };
                let inv_std: Vec<f64> = var.iter().map(|v| 1.0 / (v + BATCHNORM_EPS).sqrt()).collect();
                let gamma = &theta[norm.gamma..norm.gamma + layer.fan_out];
                let beta = &theta[norm.beta..norm.beta + layer.fan_out];
                let mut normalized = z.clone();
                for i in 0..n {
                    let (zn, out) = (normalized.row_mut(i), z.row_mut(i));
                    for j in 0..layer.fan_out {
                        zn[j] = (zn[j] - mean[j]) * inv_std[j];
                        out[j] = gamma[j] * zn[j] + beta[j];
                    }
                }
                if mode == Mode::Train {
                    cache.normalized = Some(normalized);
                    cache.inv_std = inv_std;
                    cache.batch_mean = mean;
                    cache.batch_var = var;
                }
            }
            let mut a = z.clone();
            a.as_mut_slice().iter_mut().for_each(|v| *v = spec.activation.apply(*v, alpha));
            if mode == Mode::Train {
                cache.input = h;
                cache.pre_activation = z;
                caches.push(cache);
            }
            h = a;
        }
        unreachable!("the last layer is never hidden")
    }

    /// Inference on rows already carrying the feature column, if any.
    pub fn predict_raw(&self, x: &Matrix) -> Result<Vec<f64>> {
        self.forward(x, Mode::Infer).map(|(out, _)| out)
    }

    /// Folds the batch statistics of a training pass into the running ones.
    pub fn update_running_stats(&mut self, cache: &ForwardCache) {
        let n = cache.last_input.rows() as f64;
        let correction = n / (n - 1.0);
        let hidden = self.spec.layers().into_iter().filter(|l| l.hidden);
        for (layer, lc) in hidden.zip(&cache.layers) {
            if let Some(norm) = layer.norm {
                for j in 0..layer.fan_out {
                    let m = &mut self.running[norm.mean + j];
                    *m = BATCHNORM_MOMENTUM * *m + (1.0 - BATCHNORM_MOMENTUM) * lc.batch_mean[j];
                    let v = &mut self.running[norm.var + j];
                    *v = BATCHNORM_MOMENTUM * *v + (1.0 - BATCHNORM_MOMENTUM) * lc.batch_var[j] * correction;
                }
            }
        }
    }

    fn backward(&self, cache: &ForwardCache, output: &[f64], y: &[f64]) -> Vec<f64> {
        let spec = &self.spec;
        let theta = &self.theta;
        let layers = spec.layers();
        let n = output.len();
        let mut grad = vec![0.0; theta.len()];

        let mut dz = Matrix::from_vec(n, 1, output.iter().zip(y).map(|(o, t)| 2.0 * (o - t) / n as f64).collect())
            .expect("one output per row");
        for (l, layer) in layers.iter().enumerate().rev() {
            let input = if layer.hidden { &cache.layers[l].input } else { &cache.last_input };
            if layer.hidden {
                let lc = &cache.layers[l];
                // dz currently holds dL/da; turn it into dL/dz through φ and the normalization.
                let activated = cache.layers.get(l + 1).map_or(&cache.last_input, |next| &next.input);
                for ((d, p), a) in
                    dz.as_mut_slice().iter_mut().zip(lc.pre_activation.as_slice()).zip(activated.as_slice())
                {
                    *d *= spec.activation.derivative_given_output(*p, *a, spec.lse_alpha);
                }
                if let Some(norm) = layer.norm {
                    let xhat = lc.normalized.as_ref().expect("training cache");
                    let width = layer.fan_out;
                    let mut sum_dy = vec![0.0; width];
                    let mut sum_dy_xhat = vec![0.0; width];
                    for i in 0..n {
                        for j in 0..width {
                            sum_dy[j] += dz[(i, j)];
                            sum_dy_xhat[j] += dz[(i, j)] * xhat[(i, j)];
                        }
                    }
                    grad[norm.gamma..norm.gamma + width].copy_from_slice(&sum_dy_xhat);
                    grad[norm.beta..norm.beta + width].copy_from_slice(&sum_dy);
                    let gamma = &theta[norm.gamma..norm.gamma + width];
                    let nf = n as f64;
                    for i in 0..n {
                        for j in 0..width {
                            let dxhat = dz[(i, j)] * gamma[j];
                            dz[(i, j)] = lc.inv_std[j] / nf
                                * (nf * dxhat - gamma[j] * sum_dy[j] - xhat[(i, j)] * gamma[j] * sum_dy_xhat[j]);
                        }
                    }
                }
            }

            let mut dw = Matrix::zeros(layer.fan_out, layer.fan_in);
            gemm(1.0, &dz, Op::T, input, Op::N, 0.0, &mut dw);
            grad[layer.w..layer.w + dw.as_slice().len()].copy_from_slice(dw.as_slice());
            let db = &mut grad[layer.b..layer.b + layer.fan_out];
            for row in dz.iter_rows() {
                db.iter_mut().zip(row).for_each(|(g, d)| *g += d);
            }
            if l > 0 {
                let mut dh = Matrix::zeros(n, layer.fan_in);
                gemm(1.0, &dz, Op::N, &layer.weights(theta), Op::N, 0.0, &mut dh);
                dz = dh;
            }
        }
        grad
    }

    fn loss_gradients_cache(&self, x: &Matrix, y: &[f64]) -> Result<(f64, Vec<f64>, ForwardCache)> {
        if x.rows() != y.len() {
            return Err(Error::shape(format!("{} targets", x.rows()), y.len()));
        }
        let (output, cache) = self.forward(x, Mode::Train)?;
        let cache = cache.expect("training mode returns a cache");
        let loss = output.iter().zip(y).map(|(o, t)| (o - t) * (o - t)).sum::<f64>() / y.len() as f64;
        let grad = self.backward(&cache, &output, y);
        Ok((loss, grad, cache))
    }

    /// Mean squared error of a training-mode pass and its exact gradient
    /// with respect to `theta`.
    pub fn loss_and_gradients(&self, x: &Matrix, y: &[f64]) -> Result<(f64, Vec<f64>)> {
        let (loss, grad, _) = self.loss_gradients_cache(x, y)?;
        if !loss.is_finite() {
            return Err(Error::Divergence { step: self.steps_taken, loss });
        }
        Ok((loss, grad))
    }

    const MAGIC: &'static [u8; 8] = b"CXPNET01";

    /// Self-describing checkpoint: magic, header length, JSON header, then
    /// the parameters, running statistics and fit time as little-endian f64.
    pub fn to_bytes(&self) -> Vec<u8> {
        let header = serde_json::to_vec(&CheckpointHeader {
            spec: self.spec.clone(),
            schedule: self.schedule.clone(),
            steps_taken: self.steps_taken,
            parameter_count: self.theta.len(),
            statistic_count: self.running.len(),
        })
        .expect("header serializes");
        let mut out = Vec::with_capacity(16 + header.len() + 8 * (self.theta.len() + self.running.len() + 1));
        out.extend_from_slice(Self::MAGIC);
        out.extend_from_slice(&(header.len() as u64).to_le_bytes());
        out.extend_from_slice(&header);
        for v in self.theta.iter().chain(&self.running).chain(std::iter::once(&self.fit_seconds)) {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |what: &str| Error::Checkpoint(what.to_string());
        if bytes.len() < 16 || &bytes[..8] != Self::MAGIC {
            return Err(bad("not a network checkpoint"));
        }
        let header_len = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes")) as usize;
        let body_start = 16usize.checked_add(header_len).filter(|&e| e <= bytes.len()).ok_or_else(|| bad("truncated header"))?;
        let header: CheckpointHeader =
            serde_json::from_slice(&bytes[16..body_start]).map_err(|e| Error::Checkpoint(format!("bad header: {e}")))?;
        header.spec.validate()?;
        if header.parameter_count != header.spec.parameter_count() || header.statistic_count != header.spec.statistic_count() {
            return Err(bad("array sizes disagree with the network spec"));
        }
        let body = &bytes[body_start..];
        let count = header.parameter_count + header.statistic_count + 1;
        if body.len() != 8 * count {
            return Err(bad("body length disagrees with the header"));
        }
        let mut values: Vec<f64> = body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
        let fit_seconds = values.pop().expect("fit time present");
        let running = values.split_off(header.parameter_count);
        Ok(TrainedNetwork {
            spec: header.spec,
            schedule: header.schedule,
            theta: values,
            running,
            steps_taken: header.steps_taken,
            fit_seconds,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut file = std::fs::File::create(path).map_err(|e| Error::Checkpoint(e.to_string()))?;
        file.write_all(&self.to_bytes()).map_err(|e| Error::Checkpoint(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut bytes = Vec::new();
        std::fs::File::open(path)
            .and_then(|mut f| f.read_to_end(&mut bytes))
            .map_err(|e| Error::Checkpoint(e.to_string()))?;
        Self::from_bytes(&bytes)
    }
}

#[derive(Serialize, Deserialize)]
struct CheckpointHeader {
    spec: NetworkSpec,
    schedule: TrainSchedule,
    steps_taken: u64,
    parameter_count: usize,
    statistic_count: usize,
}

impl FeaturePredictor for TrainedNetwork {
    fn uses_additional_feature(&self) -> bool {
        self.spec.include_additional
    }

    fn predict(&self, x: &Matrix, feature: Option<&[f64]>) -> Result<Vec<f64>> {
        match feature {
            Some(a) => self.predict_raw(&x.with_column(a)?),
            None => self.predict_raw(x),
        }
    }
}

/// Streams for the initial parameters and the training simulations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrainStreams {
    pub init: RngStream,
    pub data: PairStreams,
}

struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    fn step(&mut self, schedule: &TrainSchedule, lr: f64, theta: &mut [f64], grad: &[f64]) {
        self.t += 1;
        let (b1, b2) = (schedule.adam_beta1, schedule.adam_beta2);
        let c1 = 1.0 - b1.powi(self.t);
        let c2 = 1.0 - b2.powi(self.t);
        for i in 0..theta.len() {
            self.m[i] = b1 * self.m[i] + (1.0 - b1) * grad[i];
            self.v[i] = b2 * self.v[i] + (1.0 - b2) * grad[i] * grad[i];
            theta[i] -= lr * (self.m[i] / c1) / ((self.v[i] / c2).sqrt() + schedule.adam_eps);
        }
    }
}

fn training_batch<M: StructuralModel + ?Sized>(
    model: &M,
    distortion: &DistortionSpec,
    spec: &NetworkSpec,
    streams: &PairStreams,
    step: u64,
    size: usize,
) -> Result<(Matrix, Vec<f64>)> {
    let row = step * size as u64;
    let mut positioned = PairStreams {
        x: streams.x.at(row * model.input_dim() as u64),
        v: streams.v.at(row * model.noise_dim() as u64),
    };
    let (x, y) = sample_pairs(model, distortion, size, &mut positioned)?;
    if spec.include_additional {
        let a = eval_feature(model, &x)?;
        Ok((x.with_column(&a)?, y))
    } else {
        Ok((x, y))
    }
}

/// Trains a network with Adam on a fresh mini-batch per step.
pub fn train<M: StructuralModel + ?Sized>(
    spec: &NetworkSpec,
    schedule: &TrainSchedule,
    model: &M,
    distortion: &DistortionSpec,
    streams: TrainStreams,
) -> Result<TrainedNetwork> {
    train_with_observer(spec, schedule, model, distortion, streams, |_, _| {})
}

/// [`train`], reporting `(step, loss)` after every step.
pub fn train_with_observer<M: StructuralModel + ?Sized>(
    spec: &NetworkSpec,
    schedule: &TrainSchedule,
    model: &M,
    distortion: &DistortionSpec,
    streams: TrainStreams,
    mut observer: impl FnMut(u64, f64),
) -> Result<TrainedNetwork> {
    let started = Instant::now();
    spec.validate()?;
    schedule.validate()?;
    let expected = model.input_dim() + usize::from(spec.include_additional);
    if spec.input_dim != expected {
        return Err(Error::Config(format!(
            "network input width {} does not fit model {} ({expected} columns)",
            spec.input_dim,
            model.name()
        )));
    }
    if spec.include_additional && !model.has_additional_feature() {
        return Err(Error::Config(format!("model {} has no additional feature", model.name())));
    }
    distortion.validate(model.input_dim())?;

    let mut init = streams.init;
    let mut net = xavier_init(spec, &mut init)?;
    net.schedule = schedule.clone();
    let size = schedule.minibatch_size;
    let mut adam = Adam { m: vec![0.0; net.theta.len()], v: vec![0.0; net.theta.len()], t: 0 };

    let batch = |step| training_batch(model, distortion, spec, &streams.data, step, size);
    let mut current = if schedule.total_steps > 0 { Some(batch(0)?) } else { None };
    for step in 0..schedule.total_steps {
        let (x, y) = current.take().expect("batch prepared for every step");
        // Simulating the next batch overlaps with this step's update.
        let (next, result) = rayon::join(
            || (step + 1 < schedule.total_steps).then(|| batch(step + 1)),
            || net.loss_gradients_cache(&x, &y),
        );
        let (loss, grad, cache) = result?;
        if !loss.is_finite() || grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::Divergence { step, loss });
        }
        net.update_running_stats(&cache);
        adam.step(schedule, schedule.learning_rate(step), &mut net.theta, &grad);
        net.steps_taken = step + 1;
        observer(step, loss);
        current = next.transpose()?;
    }
    net.fit_seconds = started.elapsed().as_secs_f64();
    Ok(net)
}
