//! The candidate regression functions `f̂` that get certified.

use std::sync::Arc;

use crate::error::Result;
use crate::linalg::Matrix;
use crate::model::{eval_conditional_mean, eval_feature, StructuralModel};

/// A fitted, immutable approximation of the regression function.
pub trait CandidateRegressor: Send + Sync {
    fn evaluate(&self, x: &Matrix) -> Result<Vec<f64>>;
}

/// A fitted predictor that may take the model's additional feature `a(x)`
/// as an extra input column.
pub trait FeaturePredictor: Send + Sync {
    fn uses_additional_feature(&self) -> bool;

    fn predict(&self, x: &Matrix, feature: Option<&[f64]>) -> Result<Vec<f64>>;
}

/// Binds a predictor to the model that supplies `a(x)`.
pub struct BoundRegressor<P> {
    model: Arc<dyn StructuralModel>,
    predictor: P,
}

impl<P: FeaturePredictor> BoundRegressor<P> {
    pub fn new(model: Arc<dyn StructuralModel>, predictor: P) -> Self {
        BoundRegressor { model, predictor }
    }

    pub fn predictor(&self) -> &P {
        &self.predictor
    }
}

impl<P: FeaturePredictor> CandidateRegressor for BoundRegressor<P> {
    fn evaluate(&self, x: &Matrix) -> Result<Vec<f64>> {
        let feature = if self.predictor.uses_additional_feature() {
            Some(eval_feature(self.model.as_ref(), x)?)
        } else {
            None
        };
        self.predictor.predict(x, feature.as_deref())
    }
}

/// The model's closed-form regression function `f̄`, for benchmarking.
pub struct ConditionalMean(pub Arc<dyn StructuralModel>);

impl CandidateRegressor for ConditionalMean {
    fn evaluate(&self, x: &Matrix) -> Result<Vec<f64>> {
        eval_conditional_mean(self.0.as_ref(), x)
    }
}

/// Any pointwise function of one input row.
pub struct PointwiseFn<F>(pub F);

impl<F> CandidateRegressor for PointwiseFn<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    fn evaluate(&self, x: &Matrix) -> Result<Vec<f64>> {
        Ok(x.iter_rows().map(|r| (self.0)(r)).collect())
    }
}

impl<R: CandidateRegressor + ?Sized> CandidateRegressor for Box<R> {
    fn evaluate(&self, x: &Matrix) -> Result<Vec<f64>> {
        (**self).evaluate(x)
    }
}

impl<R: CandidateRegressor + ?Sized> CandidateRegressor for Arc<R> {
    fn evaluate(&self, x: &Matrix) -> Result<Vec<f64>> {
        (**self).evaluate(x)
    }
}
