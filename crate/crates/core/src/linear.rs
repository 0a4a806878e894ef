//! Linear and second-order polynomial least squares.
//!
//! Normal equations are solved through a Cholesky factorization when the
//! Gram matrix is well conditioned; otherwise the minimum-norm solution of a
//! truncated singular value decomposition of the design matrix is used.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cholesky_lower, dot, gemm, solve_lower, solve_lower_transposed, Matrix, Op};
use crate::regressor::FeaturePredictor;

/// Which columns the design matrix has.
///
/// Column order: intercept, `x₁ … x_d`, then (degree 2) `x_i x_j` for
/// `i ≤ j` in lexicographic order, then `a(x)` when included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub degree: u8,
    pub include_additional: bool,
    pub d: usize,
}

impl FeatureSpec {
    pub fn linear(d: usize) -> Self {
        FeatureSpec {
            degree: 1,
            include_additional: false,
            d,
        }
    }

    pub fn quadratic(d: usize) -> Self {
        FeatureSpec {
            degree: 2,
            include_additional: false,
            d,
        }
    }

    pub fn with_additional(self, include: bool) -> Self {
        FeatureSpec {
            include_additional: include,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree == 1 || self.degree == 2 {
            Ok(())
        } else {
            Err(Error::Config(format!("polynomial degree must be 1 or 2, got {}", self.degree)))
        }
    }

    pub fn column_count(&self) -> usize {
        let d = self.d;
        let quadratic = if self.degree == 2 { d * (d + 1) / 2 } else { 0 };
        1 + d + quadratic + usize::from(self.include_additional)
    }

    fn write_row(&self, x: &[f64], a: Option<f64>, out: &mut [f64]) {
        out[0] = 1.0;
        out[1..=self.d].copy_from_slice(x);
        let mut k = self.d + 1;
        if self.degree == 2 {
            for i in 0..self.d {
                for j in i..self.d {
                    out[k] = x[i] * x[j];
                    k += 1;
                }
            }
        }
        if let Some(a) = a {
            out[k] = a;
        }
    }

    fn check_inputs(&self, x: &Matrix, a_values: Option<&[f64]>) -> Result<()> {
        self.validate()?;
        if x.cols() != self.d {
            return Err(Error::shape(format!("{} input columns", self.d), x.cols()));
        }
        match (self.include_additional, a_values) {
            (true, Some(a)) if a.len() == x.rows() => Ok(()),
            (true, Some(a)) => Err(Error::shape(format!("{} feature values", x.rows()), a.len())),
            (true, None) => Err(Error::shape("additional feature values", "none")),
            (false, Some(_)) => Err(Error::shape("no additional feature values", "some")),
            (false, None) => Ok(()),
        }
    }
}

/// The design matrix `A` for inputs `X` (and `a(X)` when the spec asks for it).
pub fn build_design(x: &Matrix, spec: &FeatureSpec, a_values: Option<&[f64]>) -> Result<Matrix> {
    spec.check_inputs(x, a_values)?;
    let mut design = Matrix::zeros(x.rows(), spec.column_count());
    for i in 0..x.rows() {
        spec.write_row(x.row(i), a_values.map(|a| a[i]), design.row_mut(i));
    }
    Ok(design)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverUsed {
    Cholesky,
    TruncatedSvd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverChoice {
    /// Cholesky when the condition estimate allows it, truncated SVD otherwise.
    #[default]
    Auto,
    Cholesky,
    TruncatedSvd,
}

/// How the singular value cutoff `c` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum CutoffPolicy {
    /// `ε_machine · λ₁ · max(n, p)`.
    #[default]
    Default,
    Absolute(f64),
    /// `value · λ₁`.
    Relative(f64),
}

impl CutoffPolicy {
    fn resolve(&self, largest: f64, n: usize, p: usize) -> f64 {
        match *self {
            CutoffPolicy::Default => f64::EPSILON * largest * n.max(p) as f64,
            CutoffPolicy::Absolute(c) => c,
            CutoffPolicy::Relative(r) => r * largest,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub solver: SolverChoice,
    pub cutoff: CutoffPolicy,
    /// Largest acceptable condition estimate of `AᵀA` for the Cholesky path.
    pub condition_threshold: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            solver: SolverChoice::Auto,
            cutoff: CutoffPolicy::Default,
            condition_threshold: 1e10,
        }
    }
}

/// A fitted linear-in-parameters regressor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModelFit {
    pub beta: Vec<f64>,
    pub spec: FeatureSpec,
    pub solver_used: SolverUsed,
    pub cutoff_c: Option<f64>,
    pub singular_values: Option<Vec<f64>>,
    pub condition_estimate: Option<f64>,
    pub fit_seconds: f64,
}

impl LinearModelFit {
    /// A fit with given coefficients, e.g. a closed-form projection.
    pub fn from_coefficients(spec: FeatureSpec, beta: Vec<f64>) -> Result<Self> {
        spec.validate()?;
        if beta.len() != spec.column_count() {
            return Err(Error::shape(format!("{} coefficients", spec.column_count()), beta.len()));
        }
        Ok(LinearModelFit {
            beta,
            spec,
            solver_used: SolverUsed::Cholesky,
            cutoff_c: None,
            singular_values: None,
            condition_estimate: None,
            fit_seconds: 0.0,
        })
    }

    /// `A(X) β`, evaluated row by row without materializing `A`.
    pub fn predict(&self, x: &Matrix, a_values: Option<&[f64]>) -> Result<Vec<f64>> {
        self.spec.check_inputs(x, a_values)?;
        let mut row = vec![0.0; self.spec.column_count()];
        Ok((0..x.rows())
            .map(|i| {
                self.spec.write_row(x.row(i), a_values.map(|a| a[i]), &mut row);
                dot(&row, &self.beta)
            })
            .collect())
    }
}

impl FeaturePredictor for LinearModelFit {
    fn uses_additional_feature(&self) -> bool {
        self.spec.include_additional
    }

    fn predict(&self, x: &Matrix, feature: Option<&[f64]>) -> Result<Vec<f64>> {
        LinearModelFit::predict(self, x, feature)
    }
}

fn check_system(a: &Matrix, y: &[f64]) -> Result<()> {
    if a.rows() != y.len() {
        return Err(Error::shape(format!("{} responses", a.rows()), y.len()));
    }
    if a.rows() == 0 || a.cols() == 0 {
        return Err(Error::InsufficientData {
            needed: 1,
            got: a.rows().min(a.cols()) as u64,
        });
    }
    Ok(())
}

fn gram(a: &Matrix) -> Matrix {
    let p = a.cols();
    let mut g = Matrix::zeros(p, p);
    gemm(1.0, a, Op::T, a, Op::N, 0.0, &mut g);
    g
}

/// Estimates the 2-norm condition number of `g = L Lᵀ` with power iteration
/// for the largest eigenvalue and inverse iteration for the smallest.
fn condition_estimate(g: &Matrix, l: &Matrix) -> f64 {
    const ITERATIONS: usize = 50;
    let p = g.rows();
    let start: Vec<f64> = (0..p).map(|i| 1.0 + (i as f64 + 1.0).sqrt() / p as f64).collect();
    let normalize = |v: &mut Vec<f64>| {
        let n = dot(v, v).sqrt();
        v.iter_mut().for_each(|x| *x /= n);
        n
    };

    let mut v = start.clone();
    normalize(&mut v);
    let mut largest = 0.0;
    for _ in 0..ITERATIONS {
        v = g.mul_vec(&v);
        largest = normalize(&mut v);
    }

    let mut v = start;
    normalize(&mut v);
    let mut inverse_smallest = 0.0;
    for _ in 0..ITERATIONS {
        v = solve_lower_transposed(l, &solve_lower(l, &v));
        inverse_smallest = normalize(&mut v);
    }
    largest * inverse_smallest
}

/// Outcome of the Cholesky path: coefficients and the condition estimate.
fn cholesky_path(a: &Matrix, y: &[f64], threshold: f64) -> Result<(Vec<f64>, f64)> {
    check_system(a, y)?;
    let g = gram(a);
    let rhs = a.tr_mul_vec(y);
    let l = match cholesky_lower(&g) {
        Ok(l) => l,
        Err(Error::NotPositiveDefinite { .. }) => {
            return Err(Error::IllConditioned { estimate: f64::INFINITY })
        }
        Err(e) => return Err(e),
    };
    let estimate = condition_estimate(&g, &l);
    if !(estimate <= threshold) {
        return Err(Error::IllConditioned { estimate });
    }
    let z = solve_lower(&l, &rhs);
    Ok((solve_lower_transposed(&l, &z), estimate))
}

/// Solves `AᵀA β = Aᵀy` with `AᵀA = R ᵀR`, in two triangular solves.
///
/// Fails with [`Error::IllConditioned`] on a non-positive pivot or when the
/// condition estimate of `AᵀA` exceeds 1e10.
pub fn solve_cholesky(a: &Matrix, y: &[f64]) -> Result<Vec<f64>> {
    cholesky_path(a, y, FitOptions::default().condition_threshold).map(|(beta, _)| beta)
}

/// Minimum-norm solution over the singular directions of `A` with
/// singular value above `cutoff`. Returns the coefficients and the singular
/// values of `A` in decreasing order.
pub fn solve_truncated_svd(a: &Matrix, y: &[f64], cutoff: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    check_system(a, y)?;
    if !(cutoff >= 0.0) {
        return Err(Error::Domain(format!("cutoff must be non-negative, got {cutoff}")));
    }
    let svd = ProjectedSvd::new(a, y)?;
    Ok((svd.solution(cutoff), svd.sorted_singular_values()))
}

/// `A = U Σ Vᵀ` kept only as far as the least-squares solution needs it:
/// the singular values, the right singular vectors, and `Uᵀ y`.
struct ProjectedSvd {
    sigma: Vec<f64>,
    v: Vec<Vec<f64>>,
    uty: Vec<f64>,
}

impl ProjectedSvd {
    /// Tall `A` is first reduced to its `p × p` triangular factor `R`, with
    /// `Qᵀ y` as the new right-hand side.
    fn new(a: &Matrix, y: &[f64]) -> Result<Self> {
        let (n, p) = (a.rows(), a.cols());
        let (columns, rhs) = if n > p {
            let qr = DMatrix::from_row_slice(n, p, a.as_slice()).qr();
            let mut qty = DVector::from_column_slice(y);
            qr.q_tr_mul(&mut qty);
            let r = qr.r();
            let columns = (0..p).map(|j| r.column(j).iter().copied().collect()).collect();
            (columns, qty.as_slice()[..p].to_vec())
        } else {
            ((0..p).map(|j| a.column(j)).collect(), y.to_vec())
        };
        let (sigma, u, v) = jacobi_svd(columns)?;
        let uty = u.iter().map(|uj| dot(uj, &rhs)).collect();
        Ok(ProjectedSvd { sigma, v, uty })
    }

    fn largest(&self) -> f64 {
        self.sigma.iter().copied().fold(0.0, f64::max)
    }

    fn solution(&self, cutoff: f64) -> Vec<f64> {
        let mut beta = vec![0.0; self.v.len()];
        for ((&s, vj), uty) in self.sigma.iter().zip(&self.v).zip(&self.uty) {
            if s > cutoff {
                let coef = uty / s;
                beta.iter_mut().zip(vj).for_each(|(b, v)| *b += coef * v);
            }
        }
        beta
    }

    fn sorted_singular_values(&self) -> Vec<f64> {
        let mut sorted = self.sigma.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        sorted
    }
}

/// One-sided Jacobi SVD of the matrix with the given columns.
///
/// Returns `σ_j`, the unit left vectors (zero where `σ_j = 0`) and the right
/// vectors, column by column.
fn jacobi_svd(mut g: Vec<Vec<f64>>) -> Result<(Vec<f64>, Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    const MAX_SWEEPS: usize = 80;
    let p = g.len();
    let mut v: Vec<Vec<f64>> = (0..p)
        .map(|j| {
            let mut e = vec![0.0; p];
            e[j] = 1.0;
            e
        })
        .collect();
    let rotate = |x: &mut Vec<Vec<f64>>, i: usize, j: usize, c: f64, s: f64| {
        let (lo, hi) = x.split_at_mut(j);
        for (a, b) in lo[i].iter_mut().zip(hi[0].iter_mut()) {
            let (ai, bj) = (*a, *b);
            *a = c * ai - s * bj;
            *b = s * ai + c * bj;
        }
    };
    // Columns this short are rounding residue of a rank deficiency; rotating
    // them against each other never settles.
    let frobenius_sq: f64 = g.iter().map(|gj| dot(gj, gj)).sum();
    let negligible = (f64::EPSILON * f64::EPSILON) * frobenius_sq;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..p {
            for j in i + 1..p {
                let alpha = dot(&g[i], &g[i]);
                let beta = dot(&g[j], &g[j]);
                let gamma = dot(&g[i], &g[j]);
                if alpha <= negligible || beta <= negligible || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut g, i, j, c, s);
                rotate(&mut v, i, j, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical("Jacobi singular value iteration did not converge".into()));
    }
    let sigma: Vec<f64> = g.iter().map(|gj| dot(gj, gj).sqrt()).collect();
    let u = g
        .into_iter()
        .zip(&sigma)
        .map(|(gj, &s)| if s > 0.0 { gj.iter().map(|x| x / s).collect() } else { vec![0.0; gj.len()] })
        .collect();
    Ok((sigma, u, v))
}

/// Fits a linear or quadratic regression on `(X, y)`.
pub fn fit(
    spec: FeatureSpec,
    x: &Matrix,
    y: &[f64],
    a_values: Option<&[f64]>,
    options: &FitOptions,
) -> Result<LinearModelFit> {
    let started = Instant::now();
    if x.rows() == 0 {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let design = build_design(x, &spec, a_values)?;
    let (n, p) = (design.rows(), design.cols());
    if n <= p {
        log::warn!("fitting {p} coefficients from only {n} samples");
    }

    let mut condition_estimate = None;
    if options.solver != SolverChoice::TruncatedSvd {
        match cholesky_path(&design, y, options.condition_threshold) {
            Ok((beta, estimate)) => {
                return Ok(LinearModelFit {
                    beta,
                    spec,
                    solver_used: SolverUsed::Cholesky,
                    cutoff_c: None,
                    singular_values: None,
                    condition_estimate: Some(estimate),
                    fit_seconds: started.elapsed().as_secs_f64(),
                })
            }
            Err(Error::IllConditioned { estimate }) if options.solver == SolverChoice::Auto => {
                condition_estimate = Some(estimate);
            }
            Err(e) => return Err(e),
        }
    }

    let svd = ProjectedSvd::new(&design, y)?;
    let cutoff = options.cutoff.resolve(svd.largest(), n, p);
    Ok(LinearModelFit {
        beta: svd.solution(cutoff),
        spec,
        solver_used: SolverUsed::TruncatedSvd,
        cutoff_c: Some(cutoff),
        singular_values: Some(svd.sorted_singular_values()),
        condition_estimate,
        fit_seconds: started.elapsed().as_secs_f64(),
    })
}
