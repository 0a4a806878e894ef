//! Ready-made structural models: a polynomial toy model, a non-polynomial
//! one, and two payoffs on a correlated Black–Scholes market.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::model::{DistortionSpec, StructuralModel, TiltRegion};
use crate::sampling::{cholesky_factor, equicorrelation, norm_quantile, CorrelationFactor, RngStream};

/// `Y = X₁ + X₂² + X₃X₄ + V` with standard normal inputs and noise.
#[derive(Debug, Clone)]
pub struct PolynomialExample {
    factor: CorrelationFactor,
}

impl PolynomialExample {
    pub fn new() -> Self {
        PolynomialExample { factor: CorrelationFactor::identity(4) }
    }

    pub fn regression_function(x: &[f64]) -> f64 {
        x[0] + x[1] * x[1] + x[2] * x[3]
    }
}

impl Default for PolynomialExample {
    fn default() -> Self {
        Self::new()
    }
}

impl StructuralModel for PolynomialExample {
    fn name(&self) -> &str {
        "poly4"
    }

    fn input_dim(&self) -> usize {
        4
    }

    fn noise_dim(&self) -> usize {
        1
    }

    fn driver_factor(&self) -> &CorrelationFactor {
        &self.factor
    }

    fn response(&self, x: &[f64], v: &[f64]) -> f64 {
        Self::regression_function(x) + v[0]
    }

    fn conditional_mean(&self, x: &[f64]) -> Option<f64> {
        Some(Self::regression_function(x))
    }

    fn has_conditional_mean(&self) -> bool {
        true
    }
}

/// `Y = 5 log(5 + (X₁+V₁)² X₂² + V₂²) tanh((X₃+V₃)(X₄+V₄)(X₅+V₅)²)`.
#[derive(Debug, Clone)]
pub struct NonPolynomialExample {
    factor: CorrelationFactor,
}

impl NonPolynomialExample {
    pub fn new() -> Self {
        NonPolynomialExample { factor: CorrelationFactor::identity(5) }
    }

    /// The inputs `N(1, 1/10)` used for the distorted regression, read as variance 1/10.
    pub fn shifted_distortion() -> DistortionSpec {
        DistortionSpec::GaussianShiftScale { mean: vec![1.0], stdev: vec![0.1f64.sqrt()] }
    }
}

impl Default for NonPolynomialExample {
    fn default() -> Self {
        Self::new()
    }
}

impl StructuralModel for NonPolynomialExample {
    fn name(&self) -> &str {
        "nonpoly5"
    }

    fn input_dim(&self) -> usize {
        5
    }

    fn noise_dim(&self) -> usize {
        5
    }

    fn driver_factor(&self) -> &CorrelationFactor {
        &self.factor
    }

    fn response(&self, x: &[f64], v: &[f64]) -> f64 {
        let a = (x[0] + v[0]) * x[1];
        let b = (x[4] + v[4]) * (x[4] + v[4]);
        5.0 * (5.0 + a * a + v[1] * v[1]).ln() * ((x[2] + v[2]) * (x[3] + v[3]) * b).tanh()
    }

    fn additional_feature(&self, x: &[f64]) -> Option<f64> {
        Some(self.response(x, &[0.0; 5]))
    }

    fn has_additional_feature(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarketParams {
    pub d: usize,
    pub s0: f64,
    pub sigma: Vec<f64>,
    pub rho: f64,
    /// Conditioning time.
    pub t: f64,
    /// Maturity.
    pub maturity: f64,
    pub strike: f64,
}

impl MarketParams {
    /// `d` assets at 10 with volatilities `(10 + i/2)%`, correlation 0.3,
    /// `t = 1/52`, `T = 1/3`, `K = 16.3`.
    pub fn new(d: usize) -> Self {
        MarketParams {
            d,
            s0: 10.0,
            sigma: (1..=d).map(|i| 0.10 + 0.005 * i as f64).collect(),
            rho: 0.3,
            t: 1.0 / 52.0,
            maturity: 1.0 / 3.0,
            strike: 16.3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.d == 0 {
            return fail("market needs at least one asset".into());
        }
        if self.sigma.len() != self.d {
            return fail(format!("{} volatilities for {} assets", self.sigma.len(), self.d));
        }
        if self.sigma.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
            return fail("volatilities must be positive".into());
        }
        if !(self.t > 0.0 && self.t < self.maturity && self.maturity.is_finite()) {
            return fail(format!("need 0 < t < T, got t = {}, T = {}", self.t, self.maturity));
        }
        if !(self.s0 > 0.0 && self.s0.is_finite()) || !self.strike.is_finite() {
            return fail("initial price must be positive and the strike finite".into());
        }
        let lower = if self.d > 1 { -1.0 / (self.d - 1) as f64 } else { f64::NEG_INFINITY };
        if !(self.rho > lower && self.rho < 1.0) {
            return fail(format!("correlation {} makes the correlation matrix singular or indefinite", self.rho));
        }
        Ok(())
    }

    pub fn factor(&self) -> Result<CorrelationFactor> {
        self.validate()?;
        cholesky_factor(&equicorrelation(self.d, self.rho))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payoff {
    /// `(max_i S_T^i − K)⁺`.
    MaxCall,
    /// `10 · 1{max_i S_T^i ≥ K}`.
    Binary,
}

impl Payoff {
    pub fn apply(self, max_price: f64, strike: f64) -> f64 {
        match self {
            Payoff::MaxCall => (max_price - strike).max(0.0),
            Payoff::Binary => {
                if max_price >= strike {
                    10.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// A payoff on `d` correlated assets, conditioned on the prices at `t`.
///
/// `X = S_t` and `V_i = σ_i (B^i_T − B^i_t)`; both Brownian increments share
/// the equicorrelation factor.
#[derive(Debug, Clone)]
pub struct MarketModel {
    params: MarketParams,
    payoff: Payoff,
    factor: CorrelationFactor,
    name: String,
    input_scale: Vec<f64>,
    input_drift: Vec<f64>,
    noise_scale: Vec<f64>,
    noise_drift: Vec<f64>,
}

impl MarketModel {
    pub fn new(params: MarketParams, payoff: Payoff) -> Result<Self> {
        let factor = params.factor()?;
        let (t, tau) = (params.t, params.maturity - params.t);
        let name = match payoff {
            Payoff::MaxCall => "maxcall",
            Payoff::Binary => "binary",
        };
        Ok(MarketModel {
            input_scale: params.sigma.iter().map(|s| s * t.sqrt()).collect(),
            input_drift: params.sigma.iter().map(|s| -0.5 * s * s * t).collect(),
            noise_scale: params.sigma.iter().map(|s| s * tau.sqrt()).collect(),
            noise_drift: params.sigma.iter().map(|s| -0.5 * s * s * tau).collect(),
            name: name.to_string(),
            params,
            payoff,
            factor,
        })
    }

    pub fn params(&self) -> &MarketParams {
        &self.params
    }

    pub fn payoff(&self) -> Payoff {
        self.payoff
    }
}

impl StructuralModel for MarketModel {
    fn name(&self) -> &str {
        &self.name
    }

    fn input_dim(&self) -> usize {
        self.params.d
    }

    fn noise_dim(&self) -> usize {
        self.params.d
    }

    fn driver_factor(&self) -> &CorrelationFactor {
        &self.factor
    }

    fn driver_to_input(&self, driver: &[f64], x: &mut [f64]) {
        for i in 0..x.len() {
            x[i] = self.params.s0 * (self.input_scale[i] * driver[i] + self.input_drift[i]).exp();
        }
    }

    fn in_support(&self, x: &[f64]) -> bool {
        x.iter().all(|&xi| xi > 0.0)
    }

    fn sample_noise(&self, stream: &mut RngStream, n: usize) -> Matrix {
        let d = self.params.d;
        let mut w = Matrix::zeros(n, d);
        stream.fill_normal(w.as_mut_slice());
        let mut v = Matrix::zeros(n, d);
        for i in 0..n {
            let out = v.row_mut(i);
            self.factor.apply(w.row(i), out);
            out.iter_mut().zip(&self.noise_scale).for_each(|(o, s)| *o *= s);
        }
        v
    }

    fn response(&self, x: &[f64], v: &[f64]) -> f64 {
        let max_price = x
            .iter()
            .zip(v)
            .zip(&self.noise_drift)
            .map(|((xi, vi), drift)| xi * (vi + drift).exp())
            .fold(f64::NEG_INFINITY, f64::max);
        self.payoff.apply(max_price, self.params.strike)
    }

    fn additional_feature(&self, x: &[f64]) -> Option<f64> {
        Some(x.iter().copied().fold(f64::NEG_INFINITY, f64::max))
    }

    fn has_additional_feature(&self) -> bool {
        true
    }
}

/// The tilt moving half of the input mass into the upper `1 − level` tail
/// along the all-ones direction.
pub fn tilt_distortion(params: &MarketParams, level: f64) -> Result<DistortionSpec> {
    tilt_region(params, level)?;
    Ok(DistortionSpec::TailTilt { level })
}

/// The region `G` targeted by [`tilt_distortion`], for diagnostics.
pub fn tilt_region(params: &MarketParams, level: f64) -> Result<TiltRegion> {
    norm_quantile(level)?;
    TiltRegion::new(&params.factor()?, level)
}

/// The strike at which half of the paths end in the money: the sample median
/// of `max_i S_T` under the undistorted law, rounded to cents.
pub fn half_in_the_money_strike(params: &MarketParams, samples: usize, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(Error::Config("strike calibration needs at least one sample".into()));
    }
    let model = MarketModel::new(MarketParams { strike: 0.0, ..params.clone() }, Payoff::MaxCall)?;
    let mut streams = crate::model::PairStreams::from_seed(seed, 0);
    let (_, mut max_price) = crate::model::sample_pairs(&model, &DistortionSpec::None, samples, &mut streams)?;
    let mid = samples / 2;
    let (_, median, _) = max_price.select_nth_unstable_by(mid, f64::total_cmp);
    Ok((*median * 100.0).round() / 100.0)
}

/// Overrides applied when resolving a registry identifier.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExampleOverrides {
    pub dim: Option<usize>,
    pub strike: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleInfo {
    pub id: &'static str,
    pub description: &'static str,
    pub input_dim: usize,
    pub noise_dim: usize,
}

pub const DEFAULT_MARKET_DIM: usize = 10;

/// The registry, in a fixed order.
pub fn list_examples() -> Vec<ExampleInfo> {
    vec![
        ExampleInfo {
            id: "poly4",
            description: "Y = X1 + X2^2 + X3 X4 + V, standard normal inputs and noise",
            input_dim: 4,
            noise_dim: 1,
        },
        ExampleInfo {
            id: "nonpoly5",
            description: "Y = 5 log(5 + (X1+V1)^2 X2^2 + V2^2) tanh((X3+V3)(X4+V4)(X5+V5)^2)",
            input_dim: 5,
            noise_dim: 5,
        },
        ExampleInfo {
            id: "maxcall",
            description: "max-call option (max_i S_T - K)^+ given S_t, d = 10 assets by default",
            input_dim: DEFAULT_MARKET_DIM,
            noise_dim: DEFAULT_MARKET_DIM,
        },
        ExampleInfo {
            id: "binary",
            description: "binary option 10 * 1{max_i S_T >= K} given S_t, d = 10 assets by default",
            input_dim: DEFAULT_MARKET_DIM,
            noise_dim: DEFAULT_MARKET_DIM,
        },
    ]
}

/// Market parameters for a registry identifier after overrides.
pub fn market_params(overrides: &ExampleOverrides) -> MarketParams {
    let mut params = MarketParams::new(overrides.dim.unwrap_or(DEFAULT_MARKET_DIM));
    if let Some(k) = overrides.strike {
        params.strike = k;
    }
    params
}

/// Resolves a registry identifier.
pub fn example_by_id(id: &str, overrides: &ExampleOverrides) -> Result<Arc<dyn StructuralModel>> {
    let market_only = || {
        if overrides.dim.is_some() || overrides.strike.is_some() {
            Err(Error::Config(format!("example {id} takes no dimension or strike override")))
        } else {
            Ok(())
        }
    };
    match id {
        "poly4" => {
            market_only()?;
            Ok(Arc::new(PolynomialExample::new()))
        }
        "nonpoly5" => {
            market_only()?;
            Ok(Arc::new(NonPolynomialExample::new()))
        }
        "maxcall" => Ok(Arc::new(MarketModel::new(market_params(overrides), Payoff::MaxCall)?)),
        "binary" => Ok(Arc::new(MarketModel::new(market_params(overrides), Payoff::Binary)?)),
        other => Err(Error::Config(format!(
            "unknown example {other:?}; known: {}",
            list_examples().iter().map(|e| e.id).collect::<Vec<_>>().join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn calibrated_strike_splits_the_paths() {
        // The published strike was chosen this way at d = 100.
        let wide = half_in_the_money_strike(&MarketParams::new(100), 20_000, 5).unwrap();
        assert!((wide - 16.3).abs() < 0.3, "{wide}");

        let params = MarketParams::new(10);
        let k = half_in_the_money_strike(&params, 20_000, 5).unwrap();
        assert_eq!(k, half_in_the_money_strike(&params, 20_000, 5).unwrap());
        let model = MarketModel::new(MarketParams { strike: k, ..params }, Payoff::Binary).unwrap();
        let mut streams = crate::model::PairStreams::from_seed(6, 0);
        let (_, y) = crate::model::sample_pairs(&model, &DistortionSpec::None, 20_000, &mut streams).unwrap();
        let share = y.iter().filter(|v| **v > 0.0).count() as f64 / y.len() as f64;
        assert!((share - 0.5).abs() < 0.02, "K = {k}, share {share}");
        assert!(half_in_the_money_strike(&MarketParams::new(10), 0, 5).is_err());
    }

    #[test]
    fn polynomial_examples() {
        let m = PolynomialExample::new();
        assert_eq!(m.response(&[1.0, 2.0, 3.0, 4.0], &[0.5]), 17.5);
        assert_eq!(m.conditional_mean(&[0.0; 4]), Some(0.0));
        assert!(!m.has_additional_feature());
    }

    #[test]
    fn nonpolynomial_examples() {
        let m = NonPolynomialExample::new();
        assert_eq!(m.response(&[0.0; 5], &[0.0; 5]), 0.0);
        let a = m.additional_feature(&[1.0; 5]).unwrap();
        assert_abs_diff_eq!(a, 5.0 * 6f64.ln() * 1f64.tanh(), epsilon = 1e-12);
        assert_abs_diff_eq!(a, 6.82297, epsilon = 1e-5);
    }

    #[test]
    fn nonpolynomial_feature_is_noise_free_response() {
        let m = NonPolynomialExample::new();
        let mut s = RngStream::new(1, 1);
        for _ in 0..1000 {
            let mut x = [0.0; 5];
            s.fill_normal(&mut x);
            assert_eq!(m.additional_feature(&x).unwrap().to_bits(), m.response(&x, &[0.0; 5]).to_bits());
        }
    }

    #[test]
    fn nonpolynomial_response_bound() {
        let m = NonPolynomialExample::new();
        let mut s = RngStream::new(2, 1);
        for _ in 0..10_000 {
            let (mut x, mut v) = ([0.0; 5], [0.0; 5]);
            s.fill_normal(&mut x);
            s.fill_normal(&mut v);
            let bound = 5.0 * (5.0 + ((x[0] + v[0]) * x[1]).powi(2) + v[1] * v[1]).ln();
            assert!(m.response(&x, &v).abs() <= bound);
        }
    }

    #[test]
    fn market_defaults() {
        let p = MarketParams::new(3);
        assert_abs_diff_eq!(p.sigma[0], 0.105, epsilon = 1e-15);
        assert_abs_diff_eq!(p.sigma[2], 0.115, epsilon = 1e-15);
        p.validate().unwrap();
    }

    #[test]
    fn market_validation() {
        let mut p = MarketParams::new(5);
        p.rho = -0.25;
        assert!(MarketModel::new(p.clone(), Payoff::MaxCall).is_err());
        p.rho = 0.3;
        p.t = p.maturity;
        assert!(MarketModel::new(p.clone(), Payoff::MaxCall).is_err());
        let mut p = MarketParams::new(5);
        p.sigma.pop();
        assert!(matches!(MarketModel::new(p, Payoff::Binary), Err(Error::Config(_))));
    }

    #[test]
    fn degenerate_volatility_max_call_is_worthless() {
        let mut p = MarketParams::new(4);
        p.sigma = vec![1e-12; 4];
        let m = MarketModel::new(p, Payoff::MaxCall).unwrap();
        let mut s = RngStream::new(3, 0);
        let x = m.sample_inputs(&DistortionSpec::None, &mut s, 100).unwrap();
        let v = m.sample_noise(&mut s, 100);
        for i in 0..100 {
            assert!(x.row(i).iter().all(|xi| (xi - 10.0).abs() < 1e-9));
            assert_eq!(m.response(x.row(i), v.row(i)), 0.0);
        }
    }

    #[test]
    fn payoffs_increase_in_every_coordinate() {
        for payoff in [Payoff::MaxCall, Payoff::Binary] {
            let m = MarketModel::new(MarketParams::new(3), payoff).unwrap();
            let mut s = RngStream::new(4, 0);
            for _ in 0..2000 {
                let (mut x, mut v) = ([0.0; 3], [0.0; 3]);
                s.fill_uniform(&mut x);
                s.fill_normal(&mut v);
                x.iter_mut().for_each(|xi| *xi = 12.0 + 6.0 * *xi);
                v.iter_mut().for_each(|vi| *vi *= 0.1);
                let base = m.response(&x, &v);
                for j in 0..3 {
                    let mut up = x;
                    up[j] += 0.5;
                    assert!(m.response(&up, &v) >= base);
                }
            }
        }
    }

    #[test]
    fn tilt_shift_length() {
        let p = MarketParams::new(10);
        let region = tilt_region(&p, 0.99).unwrap();
        let b = region.shift();
        let norm = b.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert_abs_diff_eq!(norm, 2.3263478740408408, epsilon = 1e-9);
        assert!(tilt_region(&p, 0.5).unwrap().shift().iter().all(|&x| x == 0.0));
        assert!(tilt_distortion(&p, 1.0).is_err());
    }

    #[test]
    fn registry() {
        let ids: Vec<_> = list_examples().iter().map(|e| e.id).collect();
        assert_eq!(ids, ["poly4", "nonpoly5", "maxcall", "binary"]);
        let none = ExampleOverrides::default();
        for id in ids {
            let m = example_by_id(id, &none).unwrap();
            assert_eq!(m.name(), id);
        }
        assert_eq!(example_by_id("maxcall", &none).unwrap().input_dim(), 10);
        let over = ExampleOverrides { dim: Some(3), strike: Some(11.0) };
        assert_eq!(example_by_id("binary", &over).unwrap().input_dim(), 3);
        assert!(example_by_id("poly4", &over).is_err());
        assert!(example_by_id("nope", &none).is_err());
    }
}
