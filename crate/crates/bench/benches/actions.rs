use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use formal_galois::kervaire::KervaireMode;
use formal_galois::sample;
use formal_galois::structure::{galois_odd, galois_two};

fn bench_galois_odd(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (x, s) = sample::odd_pair(&mut rng, 3, 12).unwrap();
    let sigma = sample::padic_unit(&mut rng, 3, 12);
    c.bench_function("galois_odd p=3 k=12", |b| {
        b.iter(|| galois_odd(&x, &s, &sigma).unwrap())
    });
}

fn bench_galois_two(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (x, s) = sample::two_pair(&mut rng, 20, 17).unwrap();
    let sigma = sample::padic_unit(&mut rng, 2, 20);
    c.bench_function("galois_two k=20", |b| {
        b.iter(|| galois_two(&x, &s, &sigma, &KervaireMode::PaperPreset).unwrap())
    });
}

criterion_group!(benches, bench_galois_odd, bench_galois_two);
criterion_main!(benches);
