use condexp::linalg::{cholesky_lower, dot, matmul, solve_lower, solve_lower_transposed, Matrix, Op};
use condexp::linear::{fit, solve_cholesky, solve_truncated_svd, FeatureSpec, FitOptions, SolverUsed};
use condexp::RngStream;
use proptest::prelude::*;

fn normal_matrix(rows: usize, cols: usize, stream: &mut RngStream) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    stream.fill_normal(m.as_mut_slice());
    m
}

fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let diff = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    diff / dot(b, b).sqrt().max(f64::MIN_POSITIVE)
}

/// `(MᵀM)⁻¹ v` through a Cholesky factorization.
fn gram_solve(m: &Matrix, v: &[f64]) -> Vec<f64> {
    let l = cholesky_lower(&matmul(m, Op::T, m, Op::N)).unwrap();
    solve_lower_transposed(&l, &solve_lower(&l, v))
}

/// For `A = B C` with `B` of full column rank and `C` of full row rank,
/// `A⁺ = Cᵀ (C Cᵀ)⁻¹ (BᵀB)⁻¹ Bᵀ`.
fn factored_pinv_apply(b: &Matrix, c: &Matrix, y: &[f64]) -> Vec<f64> {
    let w = gram_solve(b, &b.tr_mul_vec(y));
    let ct = c.transpose();
    let u = gram_solve(&ct, &w);
    ct.mul_vec(&u)
}

#[test]
fn cholesky_and_svd_agree_on_well_conditioned_problems() {
    let mut stream = RngStream::new(2024, 1);
    for k in 0..50 {
        let p = 1 + (k * 7) % 50;
        let a = normal_matrix(1000, p, &mut stream);
        let y = normal_matrix(1000, 1, &mut stream).into_vec();
        let chol = solve_cholesky(&a, &y).unwrap();
        let (svd, _) = solve_truncated_svd(&a, &y, 0.0).unwrap();
        assert!(rel_diff(&svd, &chol) <= 1e-8, "instance {k}");
    }
}

#[test]
fn svd_matches_pseudoinverse_on_rank_deficient_problems() {
    let mut stream = RngStream::new(77, 1);
    for k in 0..20 {
        let p = 5 + k % 30;
        let r = 1 + (k * 3) % (p - 1);
        let b = normal_matrix(1000, r, &mut stream);
        let c = normal_matrix(r, p, &mut stream);
        let a = matmul(&b, Op::N, &c, Op::N);
        let y = normal_matrix(1000, 1, &mut stream).into_vec();
        let oracle = factored_pinv_apply(&b, &c, &y);
        let fitted = {
            let (_, sigma) = solve_truncated_svd(&a, &y, 0.0).unwrap();
            let cutoff = f64::EPSILON * sigma[0] * 1000.0;
            solve_truncated_svd(&a, &y, cutoff).unwrap().0
        };
        assert!(rel_diff(&fitted, &oracle) <= 1e-8, "instance {k}: rank {r} of {p}");
    }
}

#[test]
fn auto_solver_falls_back_on_collinear_features() {
    let mut stream = RngStream::new(5, 1);
    let base = normal_matrix(500, 2, &mut stream);
    let x = base.with_column(&base.column(0)).unwrap();
    let y: Vec<f64> = (0..500).map(|i| 2.0 * x[(i, 0)] - x[(i, 1)]).collect();
    let f = fit(FeatureSpec::linear(3), &x, &y, None, &FitOptions::default()).unwrap();
    assert_eq!(f.solver_used, SolverUsed::TruncatedSvd);
    assert!((f.beta[1] - 1.0).abs() < 1e-9 && (f.beta[3] - 1.0).abs() < 1e-9);
    assert!(f.condition_estimate.unwrap() > 1e10);
}

#[test]
fn cutoff_shrinks_solution_norm() {
    let mut stream = RngStream::new(8, 1);
    let a = normal_matrix(300, 12, &mut stream);
    let y = normal_matrix(300, 1, &mut stream).into_vec();
    let (_, sigma) = solve_truncated_svd(&a, &y, 0.0).unwrap();
    let mut previous = f64::INFINITY;
    for s in sigma.iter().rev().map(|s| s * 1.0001) {
        let (beta, _) = solve_truncated_svd(&a, &y, s).unwrap();
        let norm = dot(&beta, &beta).sqrt();
        assert!(norm <= previous + 1e-12);
        previous = norm;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn least_squares_residual_is_orthogonal_to_columns(
        seed in 0u64..1_000_000, n in 20usize..200, p in 1usize..8,
    ) {
        let mut stream = RngStream::new(seed, 3);
        let a = normal_matrix(n, p, &mut stream);
        let y = normal_matrix(n, 1, &mut stream).into_vec();
        let (beta, _) = solve_truncated_svd(&a, &y, 0.0).unwrap();
        let fitted = a.mul_vec(&beta);
        let resid: Vec<f64> = y.iter().zip(&fitted).map(|(u, v)| u - v).collect();
        let normal = a.tr_mul_vec(&resid);
        let scale = dot(&y, &y).sqrt() * (n as f64).sqrt();
        prop_assert!(normal.iter().all(|g| g.abs() <= 1e-10 * scale));
    }

    #[test]
    fn perturbing_the_solution_never_lowers_the_residual(
        seed in 0u64..1_000_000, scale in 1e-4f64..1.0,
    ) {
        let mut stream = RngStream::new(seed, 4);
        let a = normal_matrix(60, 4, &mut stream);
        let y = normal_matrix(60, 1, &mut stream).into_vec();
        let beta = solve_cholesky(&a, &y).unwrap();
        let rss = |b: &[f64]| a.mul_vec(b).iter().zip(&y).map(|(f, t)| (f - t) * (f - t)).sum::<f64>();
        let mut dir = vec![0.0; 4];
        stream.fill_normal(&mut dir);
        let moved: Vec<f64> = beta.iter().zip(&dir).map(|(b, d)| b + scale * d).collect();
        prop_assert!(rss(&moved) >= rss(&beta) * (1.0 - 1e-12));
    }
}

