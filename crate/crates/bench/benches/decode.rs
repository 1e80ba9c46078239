use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use toric_core::code::sample_iid_errors;
use toric_core::decoder::{Decoder, Sparsifier};
use toric_core::rng::stream;
use toric_core::{Family, PeriodicLattice};

fn decode(c: &mut Criterion) {
    let lat = PeriodicLattice::generate(Family::Square, 32).unwrap();
    let errors: Vec<_> = (0..64)
        .map(|s| sample_iid_errors(&lat, 0.1, &mut stream(1, &[s])).unwrap())
        .collect();
    let mut group = c.benchmark_group("decode_square_L32_p0.1");
    for sp in [Sparsifier::Knn(6), Sparsifier::Delaunay, Sparsifier::Complete] {
        let mut decoder = Decoder::new(&lat, sp);
        let mut k = 0;
        group.bench_function(BenchmarkId::from_parameter(sp), |b| {
            b.iter(|| {
                k = (k + 1) % errors.len();
                black_box(decoder.judge(&errors[k]))
            })
        });
    }
    group.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = decode
}
criterion_main!(benches);
