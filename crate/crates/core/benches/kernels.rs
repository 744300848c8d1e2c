use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use reductor_core::catalog::{self, get_example};
use reductor_core::config::Subject;
use reductor_core::freealg::Presentation;
use reductor_core::reductor::build_reductor;

fn presentation(name: &str) -> Presentation {
    match get_example(name).unwrap().config.validate().unwrap().subject {
        Subject::Algebra(p) => p,
        Subject::Lattice(_) => unreachable!(),
    }
}

type Runner = Box<dyn Fn(&mut (dyn FnMut() + Send)) + Sync>;

/// Thread counts to compare: the full pool and a single worker. Without the
/// `parallel` feature every kernel is sequential and only one row is run.
fn pools() -> Vec<(String, Runner)> {
    #[cfg(feature = "parallel")]
    {
        let mut sizes = vec![rayon::current_num_threads(), 1];
        sizes.dedup();
        sizes
            .into_iter()
            .map(|n| {
                let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap();
                let run: Runner = Box::new(move |f: &mut (dyn FnMut() + Send)| pool.install(f));
                (format!("rayon-{n}"), run)
            })
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let run: Runner = Box::new(|f: &mut (dyn FnMut() + Send)| f());
        vec![("sequential".to_string(), run)]
    }
}

fn kernels(c: &mut Criterion) {
    let usl2 = presentation("usl2");
    let weyl = presentation("weyl_a1");
    let weyl_r = build_reductor(&weyl, 6).unwrap();
    let pool = weyl_r.element_pool(None);
    let qplane = build_reductor(&presentation("quantum_plane"), 4).unwrap();

    let mut g = c.benchmark_group("kernels");
    g.sample_size(10).measurement_time(Duration::from_secs(5));
    for (label, run) in pools() {
        g.bench_function(BenchmarkId::new("build_reductor_usl2_n5", &label), |b| b.iter(|| run(&mut || drop(build_reductor(&usl2, 5).unwrap()))));
        g.bench_function(BenchmarkId::new("valuation_axioms_weyl_n6", &label), |b| b.iter(|| run(&mut || drop(weyl_r.valuation_axioms_check(&pool).unwrap()))));
        g.bench_function(BenchmarkId::new("tensor_qplane_n4", &label), |b| b.iter(|| run(&mut || drop(qplane.tensor_reductor(&qplane, 4).unwrap()))));
        g.bench_function(BenchmarkId::new("normal_forms_usl2_deg4", &label), |b| b.iter(|| run(&mut || drop(usl2.strategy_discrepancies(4).unwrap()))));
        g.bench_function(BenchmarkId::new("catalog_run_all_n4", &label), |b| b.iter(|| run(&mut || drop(catalog::run_all(4)))));
    }
    g.finish();
}

criterion_group!(benches, kernels);
criterion_main!(benches);
