use tracelab_core::arith::SieveTables;
use tracelab_core::modular::PrimeContext;
use tracelab_core::sums::{
    decompose_mobius, digit_restricted_sum, divisor_twisted_sum, mobius_twisted_sum,
};
use tracelab_core::trace::{TraceSpec, TraceTable};
use tracelab_core::Complex64;

fn k2(p: u64) -> TraceTable {
    let ctx = PrimeContext::new(p).unwrap();
    TraceTable::build(
        &ctx,
        &"kloosterman:s=2:normalized".parse::<TraceSpec>().unwrap(),
    )
    .unwrap()
}

#[test]
fn twisted_sums_match_naive_loops() {
    let p = 1009;
    let n = 300;
    let k = k2(p);
    let tables = SieveTables::build(n, 3).unwrap();

    let naive_mu: Complex64 = (1..=n).map(|m| k.at(m) * tables.mu(m) as f64).sum();
    let rep = mobius_twisted_sum(&k, &tables, n).unwrap();
    assert!((rep.value.to_complex() - naive_mu).norm() < 1e-10);

    let naive_tau: Complex64 = (1..=n).map(|m| k.at(m) * tables.tau(m) as f64).sum();
    let rep = divisor_twisted_sum(&k, &tables, n, 3).unwrap();
    assert!((rep.value.to_complex() - naive_tau).norm() < 1e-9);
    assert_eq!(
        rep.trivial_bound,
        (1..=n).map(|m| tables.tau(m) as f64).sum::<f64>()
    );
}

#[test]
fn cached_tables_give_the_same_decomposition() {
    let p = 10007;
    let k = k2(p);
    let built = SieveTables::build(1500, 2).unwrap();
    let path = std::env::temp_dir().join(format!("pipeline-{}.trcl", std::process::id()));
    built.save(&path).unwrap();
    let loaded = SieveTables::load(&path).unwrap();
    std::fs::remove_file(&path).unwrap();

    let a = decompose_mobius(&k, &built, 1500, 4.0, 40.0).unwrap();
    let b = decompose_mobius(&k, &loaded, 1500, 4.0, 40.0).unwrap();
    assert_eq!(format!("{:?}", a.headline), format!("{:?}", b.headline));
    assert_eq!(a.sum_of_classes.re.to_bits(), b.sum_of_classes.re.to_bits());
}

#[test]
fn digit_sum_over_ones_counts_the_set() {
    let ones = TraceTable::ones(1_048_583);
    let rep = digit_restricted_sum(&ones, 20, 7).unwrap();
    assert_eq!(rep.terms, 77_520);
    assert_eq!(rep.value.re, 77_520.0);
}
