use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use m0n_core::reduction::all_monomials;
use m0n_core::{
    enumerate_standard, graded_rank_oracle, pairing_matrix, parse_polynomial, Budget, ChowRing,
    OrderConvention, ReductionTable,
};

const CONV: OrderConvention = OrderConvention::Asc;

fn basis(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_standard");
    for (n, d) in [(7, 2), (8, 2), (9, 3)] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("n{n}_d{d}")), &(n, d), |b, &(n, d)| {
            b.iter(|| enumerate_standard(black_box(n), d, CONV).unwrap().len())
        });
    }
    g.finish();
}

fn tables(c: &mut Criterion) {
    let mut g = c.benchmark_group("reduction_table");
    g.sample_size(10);
    for (n, d) in [(6, 2), (7, 2), (7, 3)] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("n{n}_d{d}")), &(n, d), |b, &(n, d)| {
            b.iter(|| ReductionTable::build(n, d, CONV, &Budget::unlimited()).unwrap())
        });
    }
    g.finish();
}

fn normal_forms(c: &mut Criterion) {
    let ring = ChowRing::new(7, CONV).unwrap();
    for d in 0..=4 {
        ring.table(d).unwrap();
    }
    let p = parse_polynomial("(D{1,2,3,4,5} + D{2,3,4} + a1)^3 * (a2 - D{1,2,5})", 7).unwrap();
    c.bench_function("reduce_n7_product", |b| b.iter(|| ring.reduce(black_box(&p)).unwrap()));
    let monomials = all_monomials(7, 4);
    let top = ring.table(4).unwrap();
    c.bench_function("integrate_all_n7_top_monomials", |b| {
        b.iter(|| monomials.iter().map(|m| top.monomial_form(m).len()).sum::<usize>())
    });
}

fn pairing(c: &mut Criterion) {
    let mut g = c.benchmark_group("pairing_matrix");
    g.sample_size(10);
    let ring = ChowRing::new(7, CONV).unwrap();
    for d in 0..=4 {
        ring.table(d).unwrap();
    }
    for d in [1, 2] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("n7_d{d}")), &d, |b, &d| {
            b.iter(|| pairing_matrix(&ring, d).unwrap().passed())
        });
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("graded_rank_oracle");
    g.sample_size(10);
    g.bench_function("n6_d2", |b| b.iter(|| graded_rank_oracle(6, 2, &Budget::unlimited()).unwrap().rank));
    g.finish();
}

criterion_group!(benches, basis, tables, normal_forms, pairing, oracle);
criterion_main!(benches);
