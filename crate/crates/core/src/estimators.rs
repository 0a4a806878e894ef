//! Monte Carlo estimates of the four quantities that certify a candidate
//! regression function `f̂`, computed from triples `(X, Y, Z)` with
//! `Z = h(X, Ṽ)`:
//!
//! | statistic | per-sample term          | expectation                     |
//! |-----------|--------------------------|---------------------------------|
//! | `U`       | `(Y − f̂)²`               | mean squared distance of `f̂`    |
//! | `C`       | `Y Z`                    | `‖f̄‖²`                          |
//! | `D`       | `Y (Y − Z)`              | minimal mean squared distance   |
//! | `F`       | `YZ + f̂ (f̂ − Y − Z)`     | `‖f̂ − f̄‖²`                      |
//!
//! None of them needs the true regression function `f̄`. Accumulators are
//! mergeable, so certification streams through fixed-size batches that can
//! be processed in parallel and combined in a fixed order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{sample_triples, DistortionSpec, StructuralModel, TripleBatch, TripleStreams};
use crate::regressor::CandidateRegressor;
use crate::sampling::norm_quantile;

/// Count, mean and sum of squared deviations of one statistic.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Two-pass summary of a slice.
    pub fn from_slice(values: &[f64]) -> Self {
        if values.is_empty() {
            return Welford::default();
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let m2 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        Welford {
            count: values.len() as u64,
            mean,
            m2,
        }
    }

    pub fn merge(&self, other: &Welford) -> Welford {
        if other.count == 0 {
            return *self;
        }
        if self.count == 0 {
            return *other;
        }
        let count = self.count + other.count;
        let (na, nb, n) = (self.count as f64, other.count as f64, count as f64);
        let delta = other.mean - self.mean;
        Welford {
            count,
            mean: self.mean + delta * (nb / n),
            m2: self.m2 + other.m2 + delta * delta * (na * nb / n),
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample variance with the `N − 1` denominator.
    pub fn sample_variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }
}

/// Running moments of the `U`, `C`, `D` and `F` terms over a common set of samples.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MomentAccumulator {
    pub u: Welford,
    pub c: Welford,
    pub d: Welford,
    pub f: Welford,
}

/// The four per-sample terms for one `(Y, Z, f̂(X))`.
///
/// The `F` term `YZ + f̂(f̂ − Y − Z)` is evaluated in the equivalent form
/// `(Y − f̂)(Z − f̂)`: it avoids cancellation, and when `Y = Z` it is
/// bit-identical to the `U` term.
#[inline]
pub fn sample_terms(y: f64, z: f64, fhat: f64) -> [f64; 4] {
    let ry = y - fhat;
    let rz = z - fhat;
    [ry * ry, y * z, y * (y - z), ry * rz]
}

impl MomentAccumulator {
    pub fn count(&self) -> u64 {
        self.u.count
    }

    pub fn push(&mut self, y: f64, z: f64, fhat: f64) {
        let [u, c, d, f] = sample_terms(y, z, fhat);
        self.u.push(u);
        self.c.push(c);
        self.d.push(d);
        self.f.push(f);
    }

    pub fn merge(&self, other: &MomentAccumulator) -> MomentAccumulator {
        MomentAccumulator {
            u: self.u.merge(&other.u),
            c: self.c.merge(&other.c),
            d: self.d.merge(&other.d),
            f: self.f.merge(&other.f),
        }
    }
}

/// Accumulates one batch against the candidate's values on its rows.
pub fn accumulate(batch: &TripleBatch, fhat_values: &[f64]) -> Result<MomentAccumulator> {
    let n = batch.len();
    if fhat_values.len() != n || batch.z.len() != n || batch.x.rows() != n {
        return Err(Error::shape(format!("{n} aligned rows"), fhat_values.len()));
    }
    if let Some(i) = fhat_values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            row: i,
            value: fhat_values[i],
        });
    }
    let mut terms: [Vec<f64>; 4] = std::array::from_fn(|_| Vec::with_capacity(n));
    for ((&y, &z), &f) in batch.y.iter().zip(&batch.z).zip(fhat_values) {
        for (col, t) in terms.iter_mut().zip(sample_terms(y, z, f)) {
            col.push(t);
        }
    }
    Ok(MomentAccumulator {
        u: Welford::from_slice(&terms[0]),
        c: Welford::from_slice(&terms[1]),
        d: Welford::from_slice(&terms[2]),
        f: Welford::from_slice(&terms[3]),
    })
}

/// Merges accumulators pairwise in a fixed tree order.
pub fn merge_all(mut accs: Vec<MomentAccumulator>) -> MomentAccumulator {
    if accs.is_empty() {
        return MomentAccumulator::default();
    }
    while accs.len() > 1 {
        accs = accs
            .chunks(2)
            .map(|pair| match pair {
                [a, b] => a.merge(b),
                [a] => *a,
                _ => unreachable!(),
            })
            .collect();
    }
    accs[0]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Point estimates, standard errors and confidence statements for one candidate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub u_n: f64,
    pub c_n: f64,
    pub d_n: f64,
    pub f_n: f64,
    pub stderr_u: f64,
    pub stderr_c: f64,
    pub stderr_d: f64,
    pub stderr_f: f64,
    pub ci_level: f64,
    pub ci_u: Interval,
    pub ci_c: Interval,
    pub ci_d: Interval,
    /// One-sided upper confidence bound for `F`.
    pub f_upper: f64,
    /// `sign(F_N) √(|F_N| / C_N)`; `None` when `C_N ≤ 0`.
    pub rel_err: Option<f64>,
    /// The upper bound `F_upper` expressed the same way as `rel_err`.
    pub rel_err_upper: Option<f64>,
    pub n_total: u64,
}

/// `sign(f) √(|f| / c)`, or `None` when `c` is not positive.
pub fn signed_relative_error(f: f64, c: f64) -> Option<f64> {
    if c > 0.0 {
        Some(f.signum() * (f.abs() / c).sqrt())
    } else {
        None
    }
}

/// Turns accumulated moments into a report at two-sided coverage `ci_level`.
///
/// The `F` bound is one-sided at the same level.
pub fn finalize(acc: &MomentAccumulator, ci_level: f64) -> Result<EstimateReport> {
    let n = acc.count();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    if !(ci_level > 0.0 && ci_level < 1.0) {
        return Err(Error::Domain(format!("confidence level must lie in (0, 1), got {ci_level}")));
    }
    let two_sided = norm_quantile(0.5 + 0.5 * ci_level)?;
    let one_sided = norm_quantile(ci_level)?;
    let stderr = |w: &Welford| (w.sample_variance() / n as f64).sqrt();
    let interval = |w: &Welford| {
        let half = two_sided * stderr(w);
        Interval {
            lo: w.mean() - half,
            hi: w.mean() + half,
        }
    };
    let f_upper = acc.f.mean() + one_sided * stderr(&acc.f);
    Ok(EstimateReport {
        u_n: acc.u.mean(),
        c_n: acc.c.mean(),
        d_n: acc.d.mean(),
        f_n: acc.f.mean(),
        stderr_u: stderr(&acc.u),
        stderr_c: stderr(&acc.c),
        stderr_d: stderr(&acc.d),
        stderr_f: stderr(&acc.f),
        ci_level,
        ci_u: interval(&acc.u),
        ci_c: interval(&acc.c),
        ci_d: interval(&acc.d),
        f_upper,
        rel_err: signed_relative_error(acc.f.mean(), acc.c.mean()),
        rel_err_upper: signed_relative_error(f_upper, acc.c.mean()),
        n_total: n,
    })
}

/// Sample sizes and confidence level of one certification run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyPlan {
    pub n_total: u64,
    pub batch_size: u64,
    pub ci_level: f64,
}

impl CertifyPlan {
    pub fn new(n_total: u64, batch_size: u64, ci_level: f64) -> Self {
        CertifyPlan {
            n_total,
            batch_size,
            ci_level,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.batch_size < 2 || self.n_total < self.batch_size {
            return Err(Error::Config(format!(
                "need n_total >= batch_size >= 2, got n_total = {}, batch_size = {}",
                self.n_total, self.batch_size
            )));
        }
        Ok(())
    }
}

/// Certifies several candidates on one shared set of triples.
///
/// Sampling failures abort the whole run; a candidate that fails to
/// evaluate only fails its own entry.
pub fn certify_many(
    model: &dyn StructuralModel,
    distortion: &DistortionSpec,
    candidates: &[&dyn CandidateRegressor],
    plan: CertifyPlan,
    streams: TripleStreams,
) -> Result<Vec<Result<EstimateReport>>> {
    plan.validate()?;
    distortion.validate(model.input_dim())?;
    let batches = plan.n_total.div_ceil(plan.batch_size);
    let (d, k) = (model.input_dim(), model.noise_dim());

    let per_batch: Vec<Vec<Result<MomentAccumulator>>> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let start = b * plan.batch_size;
            let len = plan.batch_size.min(plan.n_total - start) as usize;
            let mut s = streams.at_row(start, d, k);
            let batch = sample_triples(model, distortion, len, &mut s).map_err(|e| offset_row(e, start))?;
            Ok(candidates
                .iter()
                .map(|c| {
                    let values = c.evaluate(&batch.x)?;
                    accumulate(&batch, &values).map_err(|e| offset_row(e, start))
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    (0..candidates.len())
        .map(|j| {
            let accs = per_batch
                .iter()
                .map(|row| row[j].clone())
                .collect::<Result<Vec<_>>>();
            Ok(accs.and_then(|a| finalize(&merge_all(a), plan.ci_level)))
        })
        .collect()
}

/// Certifies a single candidate.
pub fn certify(
    model: &dyn StructuralModel,
    distortion: &DistortionSpec,
    fhat: &dyn CandidateRegressor,
    plan: CertifyPlan,
    streams: TripleStreams,
) -> Result<EstimateReport> {
    certify_many(model, distortion, &[fhat], plan, streams)?
        .pop()
        .expect("one candidate yields one report")
}

fn offset_row(err: Error, start: u64) -> Error {
    match err {
        Error::NonFinite { row, value } => Error::NonFinite {
            row: row + start as usize,
            value,
        },
        other => other,
    }
}
