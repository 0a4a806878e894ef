use std::hint::black_box;
use std::sync::Arc;

use condexp::examples::{MarketModel, MarketParams, Payoff, PolynomialExample};
use condexp::linalg::{gemm, Matrix, Op};
use condexp::linear::{fit, FeatureSpec, FitOptions};
use condexp::model::sample_pairs;
use condexp::nn::xavier_init;
use condexp::{
    certify, Activation, BoundRegressor, CertifyPlan, DistortionSpec, NetworkSpec, PairStreams, PointwiseFn,
    RngStream, StructuralModel, TripleStreams,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

fn normal(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    RngStream::new(seed, 1).fill_normal(m.as_mut_slice());
    m
}

fn bench_gemm(c: &mut Criterion) {
    let mut group = c.benchmark_group("gemm");
    for (n, k, m) in [(1024, 32, 32), (1024, 10, 32), (100_000, 67, 1)] {
        let a = normal(n, k, 1);
        let b = normal(m, k, 2);
        let mut out = Matrix::zeros(n, m);
        group.throughput(Throughput::Elements((2 * n * k * m) as u64));
        group.bench_function(BenchmarkId::from_parameter(format!("{n}x{k}x{m}")), |bench| {
            bench.iter(|| gemm(1.0, &a, Op::N, &b, Op::T, 0.0, black_box(&mut out)))
        });
    }
    group.finish();
}

fn bench_certify(c: &mut Criterion) {
    let mut group = c.benchmark_group("certify");
    group.sample_size(10);
    let n = 100_000;
    group.throughput(Throughput::Elements(n));
    let poly: Arc<dyn StructuralModel> = Arc::new(PolynomialExample::new());
    let line = PointwiseFn(|x: &[f64]| 1.0 + x[0]);
    group.bench_function("poly4", |b| {
        b.iter(|| certify(poly.as_ref(), &DistortionSpec::None, &line, CertifyPlan::new(n, 50_000, 0.95), TripleStreams::from_seed(1, 1)))
    });
    let market = MarketModel::new(MarketParams::new(10), Payoff::MaxCall).unwrap();
    group.bench_function("maxcall_d10", |b| {
        b.iter(|| certify(&market, &DistortionSpec::None, &line, CertifyPlan::new(n, 50_000, 0.95), TripleStreams::from_seed(1, 1)))
    });
    group.finish();
}

fn bench_linear_fit(c: &mut Criterion) {
    let mut group = c.benchmark_group("linear_fit");
    group.sample_size(10);
    let model = MarketModel::new(MarketParams::new(10), Payoff::MaxCall).unwrap();
    let (x, y) = sample_pairs(&model, &DistortionSpec::None, 100_000, &mut PairStreams::from_seed(3, 10)).unwrap();
    for (name, spec) in [("linear_d10", FeatureSpec::linear(10)), ("quadratic_d10", FeatureSpec::quadratic(10))] {
        group.bench_function(name, |b| b.iter(|| fit(spec, &x, &y, None, &FitOptions::default()).unwrap()));
    }
    group.finish();
}

fn bench_nn_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("nn");
    let poly: Arc<dyn StructuralModel> = Arc::new(PolynomialExample::new());
    let (x, y) = sample_pairs(poly.as_ref(), &DistortionSpec::None, 1024, &mut PairStreams::from_seed(4, 10)).unwrap();
    for activation in [Activation::Tanh, Activation::Relu, Activation::Lse] {
        let spec = NetworkSpec::new(4, false, activation);
        let net = xavier_init(&spec, &mut RngStream::new(5, 1)).unwrap();
        group.bench_function(format!("loss_and_gradients_{}", activation.label()), |b| {
            b.iter(|| net.loss_and_gradients(black_box(&x), &y).unwrap())
        });
    }
    let spec = NetworkSpec::new(4, false, Activation::Tanh);
    let net = BoundRegressor::new(poly.clone(), xavier_init(&spec, &mut RngStream::new(5, 1)).unwrap());
    let big = normal(100_000, 4, 6);
    group.bench_function("inference_100k", |b| b.iter(|| condexp::CandidateRegressor::evaluate(&net, &big).unwrap()));
    group.finish();
}

criterion_group!(benches, bench_gemm, bench_certify, bench_linear_fit, bench_nn_step);
criterion_main!(benches);
