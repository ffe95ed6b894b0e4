use criterion::{criterion_group, criterion_main, Criterion};
use evaqs_core::seed::rng_from_seed;
use evaqs_core::DiscreteSampler;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

// Alias table against a cumulative table with binary search at d = 2^20.
fn sampling(c: &mut Criterion) {
    let d = 1 << 20;
    let mut rng = rng_from_seed(1);
    let weights: Vec<f64> = (0..d).map(|_| rng.random::<f64>().powi(4)).collect();

    let alias = DiscreteSampler::new(&weights).unwrap();
    let cumulative = WeightedIndex::new(&weights).unwrap();

    let mut group = c.benchmark_group("sample_2^20");
    group.bench_function("alias", |b| {
        let mut rng = rng_from_seed(2);
        b.iter(|| alias.sample(&mut rng))
    });
    group.bench_function("cumulative", |b| {
        let mut rng = rng_from_seed(2);
        b.iter(|| cumulative.sample(&mut rng))
    });
    group.finish();

    c.bench_function("build_alias_2^20", |b| b.iter(|| DiscreteSampler::new(&weights).unwrap()));
}

criterion_group!(benches, sampling);
criterion_main!(benches);
