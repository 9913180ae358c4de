//! Benchmarks for the hot paths: posterior construction, pairwise
//! comparison probabilities, the rankers at a moderate instance size, and
//! the loss metrics at large p.

use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ranklab_core::losses::{additive_loss, footrule_loss, inversion_loss};
use ranklab_core::posterior::{pairwise_less_prob, posterior, DEFAULT_TOL};
use ranklab_core::rankers::{rank_footrule, rank_per, rank_posterior_mean};
use ranklab_core::{ErrorModel, PairwiseLoss, PriorSpec, Ranking, ScalingRule, UnitData};

fn bench_posterior_build(c: &mut Criterion) {
    let mut g = c.benchmark_group("posterior_build");
    let cases: [(&str, PriorSpec, ErrorModel, f64, f64); 3] = [
        (
            "normal_prior_normal_err",
            PriorSpec::Normal {
                mean: 0.0,
                var: 1.0,
            },
            ErrorModel::NormalErr,
            2.0,
            0.5,
        ),
        (
            "superlight_prior_normal_err",
            PriorSpec::SuperLight,
            ErrorModel::NormalErr,
            3.0,
            0.1,
        ),
        (
            "pareto_prior_quartic_err",
            PriorSpec::Pareto {
                theta_min: 1.0,
                alpha: 4.0,
            },
            ErrorModel::QuarticErr,
            2.5,
            0.7,
        ),
    ];
    for (name, prior, error, x, sigma) in cases {
        g.bench_function(name, |b| {
            b.iter(|| {
                posterior(
                    black_box(&prior),
                    black_box(&error),
                    black_box(x),
                    black_box(sigma),
                    DEFAULT_TOL,
                )
                .unwrap()
            })
        });
    }
    g.finish();
}

fn bench_posterior_use(c: &mut Criterion) {
    let prior = PriorSpec::Normal {
        mean: 0.0,
        var: 4.0,
    };
    let a = posterior(&prior, &ErrorModel::NormalErr, 1.0, 0.5, DEFAULT_TOL).unwrap();
    let b_grid = posterior(&prior, &ErrorModel::NormalErr, 1.4, 0.7, DEFAULT_TOL).unwrap();

    let mut g = c.benchmark_group("posterior_use");
    g.bench_function("moments", |b| {
        b.iter(|| (black_box(&a).mean(), black_box(&a).variance()))
    });
    g.bench_function("pairwise_less_prob", |b| {
        b.iter(|| pairwise_less_prob(black_box(&a), black_box(&b_grid)))
    });
    g.bench_function("sample_1000", |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        b.iter(|| black_box(&a).sample(&mut rng, 1000))
    });
    g.finish();
}

/// Moderate instance shared by the ranker benchmarks: p units with latent
/// scale comparable to the noise, so every ranker does real work.
fn make_units(p: usize, seed: u64) -> Vec<UnitData> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..p)
        .map(|id| {
            let x = 4.0 * rng.random::<f64>() - 2.0;
            let sigma = 0.3 + 0.5 * rng.random::<f64>();
            UnitData::new(x, sigma, id).unwrap()
        })
        .collect()
}

fn bench_rankers(c: &mut Criterion) {
    let units = make_units(16, 11);
    let prior = PriorSpec::Normal {
        mean: 0.0,
        var: 4.0,
    };
    let error = ErrorModel::NormalErr;

    let mut g = c.benchmark_group("rankers_p16");
    g.sample_size(10).measurement_time(Duration::from_secs(8));
    g.bench_function("posterior_mean", |b| {
        b.iter(|| rank_posterior_mean(black_box(&units), &prior, &error).unwrap())
    });
    g.bench_function("expected_rank", |b| {
        b.iter(|| rank_per(black_box(&units), &prior, &error).unwrap())
    });
    g.bench_function("footrule_mc2000", |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        b.iter(|| rank_footrule(black_box(&units), &prior, &error, 2000, &mut rng).unwrap())
    });
    g.finish();
}

fn bench_losses(c: &mut Criterion) {
    const P: usize = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let theta: Vec<f64> = (0..P).map(|_| 6.0 * rng.random::<f64>() - 3.0).collect();
    // a fixed mildly-wrong ranking: random permutation of the units
    let mut order: Vec<usize> = (0..P).collect();
    for k in (1..P).rev() {
        order.swap(k, rng.random_range(0..=k));
    }
    let ranking = Ranking::from_order(&order).unwrap();

    let mut g = c.benchmark_group("losses_p1000");
    g.bench_function("inversion_count", |b| {
        b.iter(|| inversion_loss(black_box(&ranking), black_box(&theta)).unwrap())
    });
    g.bench_function("footrule_distance", |b| {
        b.iter(|| footrule_loss(black_box(&ranking), black_box(&theta)).unwrap())
    });
    g.bench_function("hinge_pair_sum", |b| {
        b.iter(|| {
            additive_loss(
                black_box(&ranking),
                black_box(&theta),
                &PairwiseLoss::HingeDiff,
                &ScalingRule::PerPair,
            )
            .unwrap()
        })
    });
    g.finish();
}

criterion_group!(
    benches,
    bench_posterior_build,
    bench_posterior_use,
    bench_rankers,
    bench_losses
);
criterion_main!(benches);
