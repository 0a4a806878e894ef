//! Least-squares approximation of conditional expectations, with Monte Carlo
//! certificates of how far a fitted regressor is from the true regression
//! function.
//!
//! For a model `Y = h(X, V)` with `V` independent of `X`, drawing a second
//! response `Z = h(X, Ṽ)` on an independent copy of the noise turns the
//! unknown distance `‖f̂ − E[Y|X]‖²` into a plain expectation. The
//! [`estimators`] module estimates it with confidence bounds; [`linear`] and
//! [`nn`] produce the regressors; [`examples`] holds the benchmark models.

pub mod error;
pub mod estimators;
pub mod examples;
pub mod linalg;
pub mod linear;
pub mod model;
pub mod nn;
pub mod regressor;
pub mod sampling;

pub use error::{Error, Result};
pub use estimators::{certify, certify_many, CertifyPlan, EstimateReport, Interval, MomentAccumulator};
pub use examples::{example_by_id, list_examples, ExampleOverrides, MarketModel, MarketParams, Payoff};
pub use linalg::Matrix;
pub use linear::{FeatureSpec, FitOptions, LinearModelFit};
pub use model::{DistortionSpec, PairStreams, StructuralModel, TripleBatch, TripleStreams};
pub use nn::{Activation, NetworkSpec, TrainSchedule, TrainStreams, TrainedNetwork};
pub use regressor::{BoundRegressor, CandidateRegressor, ConditionalMean, FeaturePredictor, PointwiseFn};
pub use sampling::{CorrelationFactor, RngStream};
