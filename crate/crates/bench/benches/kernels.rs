use algcomm::certify::{cc_lower_bound, inner_product, orthant_adversary};
use algcomm::sampling::{monte_carlo, McSubject};
use algcomm::scalar::integer;
use algcomm::zoo::{self, FamilyMode};
use algcomm::{Frame, Polynomial, RankOptions, SetDescriptor, SignPoint, TermOrder, VarSpace};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn dense(space: VarSpace, deg: u32) -> Polynomial {
    let n = space.dim();
    let mut terms = Vec::new();
    for i in 0..n {
        for d in 1..=deg {
            let mut e = vec![0; n];
            e[i] = d;
            e[(i + 1) % n] += 1;
            terms.push((e, integer(i as i64 + d as i64)));
        }
    }
    Polynomial::from_terms(space, terms).unwrap()
}

fn poly_mul(c: &mut Criterion) {
    let s = VarSpace::xy(3, 3);
    let a = dense(s, 4);
    let b = dense(s, 3);
    c.bench_function("poly mul 6 vars", |bch| bch.iter(|| black_box(&a) * black_box(&b)));
}

fn sign_at_point(c: &mut Criterion) {
    let s = VarSpace::xy(3, 3);
    let g = &dense(s, 4) * &dense(s, 3);
    let order = TermOrder::default_for(6);
    let p = SignPoint::new(vec![1, -1, 0, 1, -1, 1], Frame::XY).unwrap();
    c.bench_function("sign_at product", |b| b.iter(|| algcomm::sign_at(black_box(&g), &p, &order).unwrap()));
}

fn hessian_rank(c: &mut Criterion) {
    let mut group = c.benchmark_group("cc_lower_bound inner product");
    for n in [4usize, 8, 12] {
        let f = inner_product(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| cc_lower_bound(f, &RankOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn adversary(c: &mut Criterion) {
    let tree = zoo::build_orthant_det(3, 3).unwrap();
    let order = TermOrder::default_for(6);
    c.bench_function("orthant adversary 3x3", |b| b.iter(|| orthant_adversary(&tree, &order).unwrap()));
}

fn probabilistic(c: &mut Criterion) {
    let pp = zoo::build_orthant_prob(2, 2, FamilyMode::Exact).unwrap();
    let x = vec![integer(1), integer(-1), integer(1), integer(1)];
    c.bench_function("orthant family probability 2x2", |b| b.iter(|| pp.acceptance_probability(&x).unwrap()));
}

fn sampling(c: &mut Criterion) {
    let tree = zoo::build_polyhedron_det(3).unwrap();
    let set = SetDescriptor::PolyhedronS { n: 3 };
    c.bench_function("monte carlo polyhedron 1000", |b| {
        b.iter(|| monte_carlo(McSubject::Tree(&tree), &set, 1000, 1).unwrap())
    });
}

criterion_group!(benches, poly_mul, sign_at_point, hessian_rank, adversary, probabilistic, sampling);
criterion_main!(benches);
