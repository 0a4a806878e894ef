//! Structural models `Y = h(X, V)` with noise `V` independent of `X`, the
//! sampling distortions applied to `X`, and generation of the `(X, Y, Z)`
//! triples that feed the estimators.
//!
//! The regression target does not change under a distortion of `X` as long
//! as the distorted law is absolutely continuous with respect to the
//! original one. The built-in distortions satisfy this; a custom
//! [`StructuralModel::sample_inputs`] must uphold it too, and nothing here
//! can check that.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm2, Matrix};
use crate::sampling::{norm_cdf, norm_quantile, CorrelationFactor, RngStream};

/// How the inputs `X` are drawn.
///
/// Shift-scale and tilt act on the standard normal driver `W` of a model
/// whose inputs are `X = u(Q W)`; for models with i.i.d. standard normal
/// inputs that is the same as acting on `X` directly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistortionSpec {
    /// The original law of `X`.
    None,
    /// Driver coordinates `mean_i + stdev_i · W_i`. Length-1 vectors broadcast.
    GaussianShiftScale { mean: Vec<f64>, stdev: Vec<f64> },
    /// Driver `W + b` with `b = Qᵀv/‖Qᵀv‖ · q_level` and `v = (1, …, 1)`.
    TailTilt { level: f64 },
    /// `X = center + radius/√d · T` with `T` standard normal truncated to
    /// `[-1, 1]` per coordinate, so every draw lies within `radius` of the center.
    PointConcentration { center: Vec<f64>, radius: f64 },
}

impl Default for DistortionSpec {
    fn default() -> Self {
        DistortionSpec::None
    }
}

impl DistortionSpec {
    pub fn validate(&self, d: usize) -> Result<()> {
        let broadcastable = |v: &[f64], what: &str| {
            if v.len() == 1 || v.len() == d {
                Ok(())
            } else {
                Err(Error::Config(format!("{what} must have length 1 or {d}, got {}", v.len())))
            }
        };
        match self {
            DistortionSpec::None => Ok(()),
            DistortionSpec::GaussianShiftScale { mean, stdev } => {
                broadcastable(mean, "mean")?;
                broadcastable(stdev, "stdev")?;
                if stdev.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
                    return Err(Error::Config("stdev entries must be strictly positive".into()));
                }
                if mean.iter().any(|m| !m.is_finite()) {
                    return Err(Error::Config("mean entries must be finite".into()));
                }
                Ok(())
            }
            DistortionSpec::TailTilt { level } => {
                if *level > 0.0 && *level < 1.0 {
                    Ok(())
                } else {
                    Err(Error::Config(format!("tilt level must lie in (0, 1), got {level}")))
                }
            }
            DistortionSpec::PointConcentration { center, radius } => {
                if center.len() != d {
                    return Err(Error::Config(format!(
                        "concentration center must have length {d}, got {}",
                        center.len()
                    )));
                }
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(Error::Config(format!("radius must be positive, got {radius}")));
                }
                Ok(())
            }
        }
    }

    /// Compact human-readable description used in report metadata.
    pub fn label(&self) -> String {
        fn list(v: &[f64]) -> String {
            v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(" ")
        }
        match self {
            DistortionSpec::None => "none".to_string(),
            DistortionSpec::GaussianShiftScale { mean, stdev } => {
                format!("gaussian_shift_scale(mean={}; stdev={})", list(mean), list(stdev))
            }
            DistortionSpec::TailTilt { level } => format!("tail_tilt(level={level})"),
            DistortionSpec::PointConcentration { center, radius } => {
                format!("point_concentration(center={}; radius={radius})", list(center))
            }
        }
    }
}

/// The half-space `G = {w : uᵀw ≥ q}` with `u = Qᵀv/‖Qᵀv‖`, into which the
/// tail tilt moves half of the driver's mass.
#[derive(Debug, Clone, PartialEq)]
pub struct TiltRegion {
    pub direction: Vec<f64>,
    pub threshold: f64,
}

impl TiltRegion {
    pub fn new(factor: &CorrelationFactor, level: f64) -> Result<Self> {
        let v = vec![1.0; factor.dim()];
        let qtv = factor.transpose_apply(&v);
        let norm = norm2(&qtv);
        if !(norm > 0.0) {
            return Err(Error::Numerical("tilt direction vanishes".into()));
        }
        Ok(TiltRegion {
            direction: qtv.iter().map(|c| c / norm).collect(),
            threshold: norm_quantile(level)?,
        })
    }

    /// The driver shift `b = u · q`.
    pub fn shift(&self) -> Vec<f64> {
        self.direction.iter().map(|u| u * self.threshold).collect()
    }

    pub fn contains(&self, w: &[f64]) -> bool {
        dot(&self.direction, w) >= self.threshold
    }
}

/// A model `Y = h(X, V)` with a known response function `h`.
///
/// Samplers must consume exactly `input_dim()` draws per row from the input
/// stream and `noise_dim()` draws per row from the noise stream; batched
/// certification relies on that to address rows directly.
pub trait StructuralModel: Send + Sync {
    fn name(&self) -> &str;

    fn input_dim(&self) -> usize;

    fn noise_dim(&self) -> usize;

    /// Correlation factor `Q` of the Gaussian driver behind `X = u(Q W)`.
    fn driver_factor(&self) -> &CorrelationFactor;

    /// The map `u` from correlated driver coordinates to inputs.
    fn driver_to_input(&self, driver: &[f64], x: &mut [f64]) {
        x.copy_from_slice(driver);
    }

    /// Whether `x` lies in the support of the undistorted input law.
    fn in_support(&self, _x: &[f64]) -> bool {
        true
    }

    fn sample_inputs(&self, distortion: &DistortionSpec, stream: &mut RngStream, n: usize) -> Result<Matrix> {
        sample_driven_inputs(self, distortion, stream, n)
    }

    /// `n` rows of noise; i.i.d. standard normal unless overridden.
    fn sample_noise(&self, stream: &mut RngStream, n: usize) -> Matrix {
        let mut v = Matrix::zeros(n, self.noise_dim());
        stream.fill_normal(v.as_mut_slice());
        v
    }

    /// `h(x, v)`.
    fn response(&self, x: &[f64], v: &[f64]) -> f64;

    /// The true regression function, when known in closed form.
    fn conditional_mean(&self, _x: &[f64]) -> Option<f64> {
        None
    }

    fn has_conditional_mean(&self) -> bool {
        false
    }

    /// The hand-crafted extra regressor `a(x)`, if the model has one.
    fn additional_feature(&self, _x: &[f64]) -> Option<f64> {
        None
    }

    fn has_additional_feature(&self) -> bool {
        false
    }
}

/// Input sampler shared by every model whose inputs are a transform of a
/// correlated Gaussian driver.
pub fn sample_driven_inputs<M: StructuralModel + ?Sized>(
    model: &M,
    distortion: &DistortionSpec,
    stream: &mut RngStream,
    n: usize,
) -> Result<Matrix> {
    let d = model.input_dim();
    distortion.validate(d)?;
    let factor = model.driver_factor();
    let mut w = Matrix::zeros(n, d);
    let mut x = Matrix::zeros(n, d);

    if let DistortionSpec::PointConcentration { center, radius } = distortion {
        stream.fill_uniform(w.as_mut_slice());
        let scale = radius / (d.max(1) as f64).sqrt();
        let lo = norm_cdf(-1.0);
        let width = norm_cdf(1.0) - lo;
        for i in 0..n {
            let row = x.row_mut(i);
            for (j, u) in w.row(i).iter().enumerate() {
                let t = norm_quantile(lo + u * width)?;
                row[j] = center[j] + scale * t;
            }
            if !model.in_support(row) {
                return Err(Error::Config(format!(
                    "point concentration leaves the input support at row {i}"
                )));
            }
        }
        return Ok(x);
    }

    stream.fill_normal(w.as_mut_slice());
    match distortion {
        DistortionSpec::GaussianShiftScale { mean, stdev } => {
            let pick = |v: &[f64], j: usize| if v.len() == 1 { v[0] } else { v[j] };
            for i in 0..n {
                for (j, wj) in w.row_mut(i).iter_mut().enumerate() {
                    *wj = pick(mean, j) + pick(stdev, j) * *wj;
                }
            }
        }
        DistortionSpec::TailTilt { level } => {
            let b = TiltRegion::new(factor, *level)?.shift();
            // q_0.5 = 0 leaves W untouched, reproducing the undistorted law bit for bit.
            if b.iter().any(|&bj| bj != 0.0) {
                for i in 0..n {
                    for (wj, bj) in w.row_mut(i).iter_mut().zip(&b) {
                        *wj += bj;
                    }
                }
            }
        }
        DistortionSpec::None | DistortionSpec::PointConcentration { .. } => {}
    }

    let mut driver = vec![0.0; d];
    for i in 0..n {
        factor.apply(w.row(i), &mut driver);
        model.driver_to_input(&driver, x.row_mut(i));
    }
    Ok(x)
}

/// Aligned `(X, Y, Z)` where `Y` and `Z` share `X` but use independent noise.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleBatch {
    pub x: Matrix,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
}

impl TripleBatch {
    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }
}

/// Streams for the inputs and the noise of one set of training pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairStreams {
    pub x: RngStream,
    pub v: RngStream,
}

/// Streams for the inputs, the noise `V`, and its independent copy `Ṽ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TripleStreams {
    pub x: RngStream,
    pub v: RngStream,
    pub v_tilde: RngStream,
}

impl PairStreams {
    /// Streams `first` and `first + 1` of `seed`.
    pub fn from_seed(seed: u64, first: u64) -> Self {
        PairStreams {
            x: RngStream::new(seed, first),
            v: RngStream::new(seed, first + 1),
        }
    }
}

impl TripleStreams {
    /// Streams `first`, `first + 1` and `first + 2` of `seed`.
    pub fn from_seed(seed: u64, first: u64) -> Self {
        TripleStreams {
            x: RngStream::new(seed, first),
            v: RngStream::new(seed, first + 1),
            v_tilde: RngStream::new(seed, first + 2),
        }
    }

    /// Positions all three streams at the first draw of sample `row`.
    pub fn at_row(self, row: u64, input_dim: usize, noise_dim: usize) -> Self {
        TripleStreams {
            x: self.x.at(row * input_dim as u64),
            v: self.v.at(row * noise_dim as u64),
            v_tilde: self.v_tilde.at(row * noise_dim as u64),
        }
    }
}

/// `h` applied row-wise; aborts on the first non-finite value.
pub fn responses<M: StructuralModel + ?Sized>(model: &M, x: &Matrix, v: &Matrix) -> Result<Vec<f64>> {
    if x.rows() != v.rows() {
        return Err(Error::shape(format!("{} noise rows", x.rows()), v.rows()));
    }
    x.iter_rows()
        .zip(v.iter_rows())
        .enumerate()
        .map(|(row, (xi, vi))| {
            let value = model.response(xi, vi);
            if value.is_finite() {
                Ok(value)
            } else {
                Err(Error::NonFinite { row, value })
            }
        })
        .collect()
}

/// Training pairs `(X, Y)`: `X` from the input stream, `V` from the noise stream.
pub fn sample_pairs<M: StructuralModel + ?Sized>(
    model: &M,
    distortion: &DistortionSpec,
    n: usize,
    streams: &mut PairStreams,
) -> Result<(Matrix, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let x = model.sample_inputs(distortion, &mut streams.x, n)?;
    let v = model.sample_noise(&mut streams.v, n);
    let y = responses(model, &x, &v)?;
    Ok((x, y))
}

/// Certification triples; `Ṽ` comes from the third stream.
pub fn sample_triples<M: StructuralModel + ?Sized>(
    model: &M,
    distortion: &DistortionSpec,
    n: usize,
    streams: &mut TripleStreams,
) -> Result<TripleBatch> {
    if n == 0 {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let x = model.sample_inputs(distortion, &mut streams.x, n)?;
    let v = model.sample_noise(&mut streams.v, n);
    let v_tilde = model.sample_noise(&mut streams.v_tilde, n);
    let y = responses(model, &x, &v)?;
    let z = responses(model, &x, &v_tilde)?;
    Ok(TripleBatch { x, y, z })
}

/// `a(x)` for every row.
pub fn eval_feature<M: StructuralModel + ?Sized>(model: &M, x: &Matrix) -> Result<Vec<f64>> {
    if !model.has_additional_feature() {
        return Err(Error::Config(format!("model {} has no additional feature", model.name())));
    }
    x.iter_rows()
        .map(|row| {
            model
                .additional_feature(row)
                .ok_or_else(|| Error::Config(format!("model {} has no additional feature", model.name())))
        })
        .collect()
}

/// `f̄(x)` for every row.
pub fn eval_conditional_mean<M: StructuralModel + ?Sized>(model: &M, x: &Matrix) -> Result<Vec<f64>> {
    x.iter_rows()
        .map(|row| {
            model
                .conditional_mean(row)
                .ok_or_else(|| Error::Config(format!("model {} has no closed-form regression function", model.name())))
        })
        .collect()
}
