use criterion::{black_box, criterion_group, criterion_main, Criterion};

use lattice_square::*;

fn bench_norms(c: &mut Criterion) {
    let spaces = [
        NormedLatticeSpace::lp(4, 1.5).unwrap(),
        NormedLatticeSpace::interlace(4, 1.0, 2.0, 1.3).unwrap(),
    ];
    let x: LatticeVector = vec![0.4, -1.2, 0.7, 0.1].into();
    for s in &spaces {
        c.bench_function(&format!("norm/{s}"), |b| {
            b.iter(|| s.norm(black_box(&x)).unwrap())
        });
        c.bench_function(&format!("dual_norm/{s}"), |b| {
            b.iter(|| s.dual_norm(black_box(&x)).unwrap())
        });
    }
}

fn bench_regular_norm(c: &mut Criterion) {
    let s = NormedLatticeSpace::lp(3, 1.5).unwrap();
    let t = RegularOperator::from_rows(
        s.clone(),
        s,
        vec![
            vec![0.4, 0.1, 0.9],
            vec![0.2, 0.8, 0.3],
            vec![0.5, 0.0, 0.6],
        ],
    )
    .unwrap();
    c.bench_function("regular_norm/l1.5^3", |b| {
        b.iter(|| regular_norm(black_box(&t)))
    });
}

fn bench_seminorm(c: &mut Criterion) {
    let l4 = NormedLatticeSpace::lp(3, 4.0).unwrap();
    let x: LatticeVector = vec![0.9, -0.5, 1.2].into();
    c.bench_function("seminorm/l4^3/p2", |b| {
        b.iter(|| seminorm(black_box(&l4), black_box(&x), 2.0).unwrap())
    });
    c.bench_function("seminorm_oracle/l4^2/res64", |b| {
        let l4 = NormedLatticeSpace::lp(2, 4.0).unwrap();
        let x: LatticeVector = vec![0.9, 0.5].into();
        b.iter(|| seminorm_bruteforce_oracle(black_box(&l4), black_box(&x), 2.0, 64).unwrap())
    });
}

fn bench_fremlin(c: &mut Criterion) {
    let s = NormedLatticeSpace::lp(2, 2.0).unwrap();
    let u = TensorElement::from_rows(
        s.clone(),
        s.clone(),
        vec![vec![1.0, 0.4], vec![0.4, 0.7]],
    )
    .unwrap();
    c.bench_function("fremlin_norm/l2^2/cold", |b| {
        b.iter(|| fremlin_norm(black_box(&u)).unwrap())
    });
    c.bench_function("fremlin_norm/l2^2/warm", |b| {
        let mut solver = FremlinSolver::new(s.clone(), s.clone()).unwrap();
        solver.norm(&u).unwrap();
        b.iter(|| solver.norm(black_box(&u)).unwrap())
    });
}

fn bench_quotient(c: &mut Criterion) {
    let s = NormedLatticeSpace::lp(3, 3.0).unwrap();
    let d = DiagonalElement::new(s, vec![0.8, -0.3, 1.1]).unwrap();
    c.bench_function("quotient_norm_dual/l3^3", |b| {
        b.iter(|| quotient_norm_dual(black_box(&d)).unwrap())
    });
}

fn bench_trinorm(c: &mut Criterion) {
    let s = NormedLatticeSpace::lp(8, 2.0).unwrap();
    let x: LatticeVector = vec![0.3, -0.4, 0.5, 0.1, -0.9, 0.2, 0.7, -0.6].into();
    c.bench_function("al_trinorm/dim8", |b| {
        b.iter(|| al_trinorm(black_box(&s), black_box(&x)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_norms,
    bench_regular_norm,
    bench_seminorm,
    bench_fremlin,
    bench_quotient,
    bench_trinorm
);
criterion_main!(benches);
