use bchforge_core::{min_distance, BchCode, Method, SearchConfig};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

// (q, m, h, w_max), each resolving to an exact distance.
const CASES: [(u64, u32, u64, u64); 3] = [(2, 5, 15, 10), (4, 2, 7, 7), (8, 2, 31, 5)];

fn modes() -> [(&'static str, SearchConfig); 2] {
    [("parallel", SearchConfig::default()), ("sequential", SearchConfig::sequential())]
}

fn bench_methods(c: &mut Criterion) {
    for method in [Method::SupportEnum, Method::MitmSyndrome] {
        let mut group = c.benchmark_group(method.name());
        group.sample_size(10);
        for (q, m, h, w) in CASES {
            let code = BchCode::build(q, m, 3, h).unwrap();
            // Skip cases the method refuses under its default budget.
            if min_distance(&code, w, method, &SearchConfig::default()).is_err() {
                continue;
            }
            for (mode, cfg) in modes() {
                let id = BenchmarkId::new(mode, format!("q{q}_n{}_h{h}", code.n()));
                group.bench_with_input(id, &cfg, |b, cfg| {
                    b.iter(|| min_distance(&code, w, method, cfg).unwrap())
                });
            }
        }
        group.finish();
    }
}

fn bench_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("build");
    for (q, m, h) in [(2u64, 8u32, 1u64), (3, 4, 3)] {
        group.bench_function(format!("q{q}_m{m}_h{h}"), |b| b.iter(|| BchCode::build(q, m, 3, h).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, bench_methods, bench_build);
criterion_main!(benches);
