use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_bigint::BigInt;

use tripillai_core::exec::Exec;
use tripillai_core::padic::smin_table;
use tripillai_core::search::{count_representations, CountOptions, SearchBox, Sign};

fn strategies() -> [(&'static str, Exec); 2] {
    [("sequential", Exec::Sequential), ("parallel", Exec::Parallel { threads: 0 })]
}

fn search_enumeration(c: &mut Criterion) {
    let bx = SearchBox { n_max: 120, x_max: 120, y_max: 80, sign: Sign::All, min_reps: 3 };
    let mut g = c.benchmark_group("search_enumeration");
    g.sample_size(10);
    for (name, exec) in strategies() {
        let opts = CountOptions { exec, ..CountOptions::default() };
        g.bench_with_input(BenchmarkId::new(name, "120x120x80"), &opts, |b, o| {
            b.iter(|| count_representations(&bx, o).expect("valid box"))
        });
    }
    g.finish();
}

fn padic_tasks(c: &mut Criterion) {
    let n_cap: BigInt = "12000000000000000000000000000000000000".parse().unwrap();
    let mut g = c.benchmark_group("padic_per_d");
    g.sample_size(10);
    for p in [2u32, 3] {
        for (name, exec) in strategies() {
            g.bench_with_input(BenchmarkId::new(name, format!("p{p}_d40")), &p, |b, &p| {
                b.iter(|| smin_table(p, 40, &n_cap, 128, exec).expect("precision suffices"))
            });
        }
    }
    g.finish();
}

criterion_group!(benches, search_enumeration, padic_tasks);
criterion_main!(benches);
