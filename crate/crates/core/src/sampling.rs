//! Counter-based random streams, the standard normal quantile, and
//! correlated Gaussian draws.
//!
//! Every stream is addressed by `(seed, stream_id, position)`. A draw at a
//! given position is a pure function of that triple, so batches can be
//! generated out of order or in parallel and still reproduce the sequential
//! output bit for bit.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::linalg::{cholesky_lower, dot, Matrix};

/// A reproducible source of uniform and normal draws.
///
/// Each normal or uniform draw consumes exactly one 64-bit word, so the
/// `position` is also the number of draws taken so far.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    position: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngStream {
            seed,
            stream_id,
            position: 0,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn position(&self) -> u64 {
        self.position
    }

    /// The same stream, repositioned to absolute draw index `position`.
    pub fn at(self, position: u64) -> Self {
        RngStream { position, ..self }
    }

    fn generator(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        // ChaCha counts 32-bit words; one draw is two words.
        rng.set_word_pos(2 * self.position as u128);
        rng
    }

    pub fn fill_u64(&mut self, out: &mut [u64]) {
        let mut rng = self.generator();
        for v in out.iter_mut() {
            *v = rng.next_u64();
        }
        self.position += out.len() as u64;
    }

    /// Uniform draws on the open interval (0, 1).
    pub fn fill_uniform(&mut self, out: &mut [f64]) {
        let mut rng = self.generator();
        for v in out.iter_mut() {
            *v = open_unit(rng.next_u64());
        }
        self.position += out.len() as u64;
    }

    /// Standard normal draws by inversion of the uniform draws.
    pub fn fill_normal(&mut self, out: &mut [f64]) {
        let mut rng = self.generator();
        for v in out.iter_mut() {
            *v = quantile_unchecked(open_unit(rng.next_u64()));
        }
        self.position += out.len() as u64;
    }
}

#[inline]
fn open_unit(bits: u64) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    ((bits >> 11) as f64 + 0.5) * SCALE
}

/// `n` i.i.d. standard normal draws, advancing the stream.
pub fn standard_normal_batch(stream: &mut RngStream, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    stream.fill_normal(&mut out);
    out
}

/// Standard normal distribution function.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Standard normal density.
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Inverse of the standard normal distribution function.
pub fn norm_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("normal quantile needs p in (0, 1), got {p}")));
    }
    Ok(quantile_unchecked(p))
}

// Acklam's rational approximation (relative error about 1e-9).
const A: [f64; 6] = [
    -3.969683028665376e+01,
    2.209460984245205e+02,
    -2.759285104469687e+02,
    1.383577518672690e+02,
    -3.066479806614716e+01,
    2.506628277459239e+00,
];
const B: [f64; 5] = [
    -5.447609879822406e+01,
    1.615858368580409e+02,
    -1.556989798598866e+02,
    6.680131188771972e+01,
    -1.328068155288572e+01,
];
const C: [f64; 6] = [
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e+00,
    -2.549732539343734e+00,
    4.374664141464968e+00,
    2.938163982698783e+00,
];
const D: [f64; 4] = [
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e+00,
    3.754408661907416e+00,
];
const P_LOW: f64 = 0.02425;

fn quantile_unchecked(p: f64) -> f64 {
    if p > 0.5 {
        // 1 - p is exact on [0.5, 1)
        return -lower_quantile(1.0 - p);
    }
    lower_quantile(p)
}

/// Quantile for p in (0, 0.5], where the distribution function has full
/// relative precision.
fn lower_quantile(p: f64) -> f64 {
    let mut x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    };
    for _ in 0..2 {
        let e = norm_cdf(x) - p;
        let u = e * (2.0 * std::f64::consts::PI).sqrt() * (0.5 * x * x).exp();
        x -= u / (1.0 + 0.5 * x * u);
    }
    x
}

/// Lower Cholesky factor `Q` of a correlation (or covariance) matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationFactor {
    lower: Matrix,
}

impl CorrelationFactor {
    pub fn identity(d: usize) -> Self {
        CorrelationFactor {
            lower: Matrix::identity(d),
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.rows()
    }

    pub fn lower(&self) -> &Matrix {
        &self.lower
    }

    /// `Q Qᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let q = &self.lower;
        let d = q.rows();
        let mut r = Matrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                r[(i, j)] = dot(q.row(i), q.row(j));
            }
        }
        r
    }

    /// Writes `Q w` into `out`.
    #[inline]
    pub fn apply(&self, w: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = dot(&self.lower.row(i)[..=i], &w[..=i]);
        }
    }

    /// `Qᵀ v`.
    pub fn transpose_apply(&self, v: &[f64]) -> Vec<f64> {
        self.lower.tr_mul_vec(v)
    }
}

/// Factors a symmetric positive-definite matrix as `Q Qᵀ`.
pub fn cholesky_factor(r: &Matrix) -> Result<CorrelationFactor> {
    let d = r.rows();
    if r.cols() != d {
        return Err(Error::shape("square matrix", format!("{}x{}", r.rows(), r.cols())));
    }
    for i in 0..d {
        for j in 0..i {
            let (a, b) = (r[(i, j)], r[(j, i)]);
            if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                return Err(Error::Domain(format!("matrix is not symmetric at ({i}, {j})")));
            }
        }
    }
    Ok(CorrelationFactor {
        lower: cholesky_lower(r)?,
    })
}

/// Equicorrelation matrix with unit diagonal and `rho` off the diagonal.
pub fn equicorrelation(d: usize, rho: f64) -> Matrix {
    let mut r = Matrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            r[(i, j)] = if i == j { 1.0 } else { rho };
        }
    }
    r
}

/// `n` rows of `Q (W + b)` with `W` standard normal; `b` defaults to zero.
pub fn correlated_normal_batch(
    stream: &mut RngStream,
    factor: &CorrelationFactor,
    n: usize,
    shift: Option<&[f64]>,
) -> Result<Matrix> {
    let d = factor.dim();
    if let Some(b) = shift {
        if b.len() != d {
            return Err(Error::shape(format!("shift of length {d}"), b.len()));
        }
    }
    let mut w = Matrix::zeros(n, d);
    stream.fill_normal(w.as_mut_slice());
    let mut out = Matrix::zeros(n, d);
    let mut shifted = vec![0.0; d];
    for i in 0..n {
        let wi = w.row(i);
        match shift {
            Some(b) => {
                for ((s, wk), bk) in shifted.iter_mut().zip(wi).zip(b) {
                    *s = wk + bk;
                }
                factor.apply(&shifted, out.row_mut(i));
            }
            None => factor.apply(wi, out.row_mut(i)),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    /// Φ via the Taylor series of erf, summed in extended steps; independent
    /// of libm and accurate to ~1e-15 for |x| ≤ 4.
    fn phi_series(x: f64) -> f64 {
        let z = x / std::f64::consts::SQRT_2;
        let mut term = z;
        let mut sum = z;
        let mut n = 0.0;
        while term.abs() > 1e-18 * sum.abs().max(1e-300) {
            n += 1.0;
            term *= -z * z / n;
            sum += term / (2.0 * n + 1.0);
            if n > 400.0 {
                break;
            }
        }
        0.5 + sum / std::f64::consts::PI.sqrt()
    }

    fn bisect_quantile(p: f64) -> f64 {
        let (mut lo, mut hi) = (-8.0, 8.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if phi_series(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn quantile_reference_values() {
        assert_eq!(norm_quantile(0.5).unwrap(), 0.0);
        assert_abs_diff_eq!(norm_quantile(0.975).unwrap(), 1.959963985, epsilon = 1e-9);
        assert_abs_diff_eq!(norm_quantile(0.99).unwrap(), 2.326347874, epsilon = 1e-9);
        assert_abs_diff_eq!(bisect_quantile(0.975), 1.959963985, epsilon = 1e-9);
        assert_abs_diff_eq!(bisect_quantile(0.99), 2.326347874, epsilon = 1e-9);
    }

    #[test]
    fn quantile_rejects_outside_unit_interval() {
        for p in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(norm_quantile(p), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn quantile_inverts_series_cdf_on_grid() {
        for k in 1..1000 {
            let p = k as f64 / 1000.0;
            let q = norm_quantile(p).unwrap();
            assert!((phi_series(q) - p).abs() <= 1e-9, "p = {p}");
        }
    }

    #[test]
    fn quantile_is_antisymmetric() {
        for p in [1e-12, 1e-6, 0.01, 0.2, 0.4999] {
            // 1 - p rounds for tiny p; compare against the probability actually represented.
            let upper = 1.0 - p;
            let a = norm_quantile(1.0 - upper).unwrap();
            let b = norm_quantile(upper).unwrap();
            assert_abs_diff_eq!(a, -b, epsilon = 1e-9 * a.abs().max(1.0));
        }
    }

    #[test]
    fn cholesky_examples() {
        let id = cholesky_factor(&Matrix::identity(4)).unwrap();
        assert_eq!(id.lower(), &Matrix::identity(4));

        let r = Matrix::from_rows(&[[1.0, 0.3], [0.3, 1.0]]).unwrap();
        let q = cholesky_factor(&r).unwrap();
        let expected = Matrix::from_rows(&[[1.0, 0.0], [0.3, 0.91f64.sqrt()]]).unwrap();
        assert!(q.lower().max_abs_diff(&expected) < 1e-15);

        let r5 = equicorrelation(5, 0.3);
        let q5 = cholesky_factor(&r5).unwrap();
        assert!(q5.reconstruct().max_abs_diff(&r5) <= 1e-12);
        for i in 0..5 {
            assert!(q5.lower()[(i, i)] > 0.0);
            for j in i + 1..5 {
                assert_eq!(q5.lower()[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn cholesky_rejects_indefinite_and_asymmetric() {
        let r = Matrix::from_rows(&[[1.0, 2.0], [2.0, 1.0]]).unwrap();
        assert!(matches!(cholesky_factor(&r), Err(Error::NotPositiveDefinite { index: 1, .. })));
        let r = Matrix::from_rows(&[[1.0, 0.2], [0.3, 1.0]]).unwrap();
        assert!(matches!(cholesky_factor(&r), Err(Error::Domain(_))));
    }

    #[test]
    fn streams_replay_and_split() {
        let s = RngStream::new(7, 3);
        let a = standard_normal_batch(&mut s.clone(), 100);
        let b = standard_normal_batch(&mut s.clone(), 100);
        assert_eq!(a, b);

        // Sequential draws equal draws taken from the absolute position.
        let mut seq = s;
        let first = standard_normal_batch(&mut seq, 40);
        let second = standard_normal_batch(&mut seq, 60);
        assert_eq!(&a[..40], &first[..]);
        assert_eq!(&a[40..], &second[..]);
        assert_eq!(standard_normal_batch(&mut s.at(40), 60), second);

        let other = standard_normal_batch(&mut RngStream::new(7, 4), 100);
        assert_ne!(a, other);
    }

    #[test]
    fn normal_batch_moments() {
        let n = 1_000_000;
        let x = standard_normal_batch(&mut RngStream::new(11, 0), n);
        let mean = x.iter().sum::<f64>() / n as f64;
        let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 0.005, "mean {mean}");
        assert!((var - 1.0).abs() < 0.01, "var {var}");
    }

    #[test]
    fn correlated_batch_identity_and_correlation() {
        let n = 1_000_000;
        let id = CorrelationFactor::identity(2);
        let x = correlated_normal_batch(&mut RngStream::new(1, 1), &id, 1000, None).unwrap();
        let w = standard_normal_batch(&mut RngStream::new(1, 1), 2000);
        assert_eq!(x.as_slice(), &w[..]);

        let q = cholesky_factor(&equicorrelation(2, 0.3)).unwrap();
        let x = correlated_normal_batch(&mut RngStream::new(2, 1), &q, n, None).unwrap();
        let (a, b) = (x.column(0), x.column(1));
        let ma = a.iter().sum::<f64>() / n as f64;
        let mb = b.iter().sum::<f64>() / n as f64;
        let cov = a.iter().zip(&b).map(|(u, v)| (u - ma) * (v - mb)).sum::<f64>();
        let va = a.iter().map(|u| (u - ma).powi(2)).sum::<f64>();
        let vb = b.iter().map(|v| (v - mb).powi(2)).sum::<f64>();
        let rho = cov / (va * vb).sqrt();
        assert!((rho - 0.3).abs() < 0.005, "rho {rho}");
        let bound = 4.0 / (n as f64).sqrt();
        assert!(ma.abs() < bound && mb.abs() < bound);
    }

    #[test]
    fn tilted_batch_hits_region_half_the_time() {
        let d = 5;
        let q = cholesky_factor(&equicorrelation(d, 0.3)).unwrap();
        let v = vec![1.0; d];
        let qtv = q.transpose_apply(&v);
        let norm = crate::linalg::norm2(&qtv);
        let level = norm_quantile(0.99).unwrap();
        let b: Vec<f64> = qtv.iter().map(|c| c / norm * level).collect();
        let n = 1_000_000;
        // Q(W + b) projected on v is vᵀQ(W + b); divide by ‖vᵀQ‖.
        let x = correlated_normal_batch(&mut RngStream::new(5, 9), &q, n, Some(&b)).unwrap();
        let hits = x
            .iter_rows()
            .filter(|row| row.iter().sum::<f64>() / norm >= level)
            .count();
        let frac = hits as f64 / n as f64;
        assert!((frac - 0.5).abs() < 0.01, "fraction {frac}");
    }

    #[test]
    fn shift_length_is_checked() {
        let q = CorrelationFactor::identity(3);
        let err = correlated_normal_batch(&mut RngStream::new(0, 0), &q, 2, Some(&[1.0])).unwrap_err();
        assert!(matches!(err, Error::Shape { .. }));
    }

    proptest! {
        #[test]
        fn cholesky_recovers_lower_factor(
            diag in proptest::collection::vec(0.5f64..2.0, 1..7),
            off in proptest::collection::vec(-0.5f64..0.5, 21),
        ) {
            let d = diag.len();
            let mut l = Matrix::zeros(d, d);
            let mut k = 0;
            for i in 0..d {
                l[(i, i)] = diag[i];
                for j in 0..i {
                    l[(i, j)] = off[k];
                    k += 1;
                }
            }
            let r = crate::linalg::matmul(&l, crate::linalg::Op::N, &l, crate::linalg::Op::T);
            let q = cholesky_factor(&r).unwrap();
            prop_assert!(q.lower().max_abs_diff(&l) < 1e-10);
        }
    }
}
