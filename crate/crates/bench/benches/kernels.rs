use criterion::{criterion_group, criterion_main, Criterion};
use pmr_core::env::generate_grid;
use pmr_core::nn::{lstm_step, Matrix, Optimizer};
use pmr_core::policy::{rollout, PolicyDims, QuestionerPolicy, RolloutConfig};
use pmr_core::trainers::{retention_pass, MemoryBuffer, RetentionConfig, TrustRegion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn bench_lstm_step(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (input, hidden) = (32, 64);
    let w = Matrix::uniform(4 * hidden, input + hidden, 0.1, &mut rng);
    let b = vec![0.0; 4 * hidden];
    let x = vec![0.5; input];
    let h = vec![0.1; hidden];
    let cell = vec![0.0; hidden];
    c.bench_function("lstm_step_h64", |bench| {
        bench.iter(|| lstm_step(black_box(&x), &h, &cell, &w, &b).unwrap())
    });
}

fn policy() -> QuestionerPolicy {
    QuestionerPolicy::new(PolicyDims::default(), &mut ChaCha8Rng::seed_from_u64(1))
}

fn bench_rollout(c: &mut Criterion) {
    let p = policy();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let grid = generate_grid(&mut rng);
    c.bench_function("rollout", |bench| {
        bench.iter(|| rollout(&p, &grid, 4, RolloutConfig::default(), &mut rng).unwrap())
    });
}

fn bench_retention(c: &mut Criterion) {
    let p = policy();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut memory = MemoryBuffer::new(false);
    for _ in 0..100 {
        let grid = generate_grid(&mut rng);
        memory.push(rollout(&p, &grid, 0, RolloutConfig::default(), &mut rng).unwrap());
    }
    let cfg = RetentionConfig {
        region: TrustRegion::new(10.0, true, true),
        prob_update: true,
        clip_norm: 5.0,
        shuffle: false,
    };
    c.bench_function("retention_pass_100", |bench| {
        bench.iter_batched(
            || (p.clone(), memory.clone()),
            |(mut q, mut m)| {
                retention_pass(
                    &mut q,
                    &mut m,
                    &cfg,
                    0.5,
                    &mut Optimizer::sgd(0.01),
                    &mut rng,
                )
            },
            criterion::BatchSize::LargeInput,
        )
    });
}

criterion_group!(benches, bench_lstm_step, bench_rollout, bench_retention);
criterion_main!(benches);
