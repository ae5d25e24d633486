use std::collections::HashMap;

use m0n_core::forest::Forest;
use m0n_core::linalg::{integer_kernel, Echelon, SparseVec};
use m0n_core::reduction::all_monomials;
use m0n_core::relations::normalized_boundary_sets;
use m0n_core::standard::{d_forest, laminar_families};
use m0n_core::{
    admissible_sets, ambient_class, enumerate_standard, generate_relations, graded_rank_oracle,
    is_standard, kernel_generators, monomial_much_less, rank, sign_epsilon, top_product_fast,
    Budget, ChowRing, IndexSet, KeelRing, Monomial, OrderConvention, Polynomial,
    StandardMonomial,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CONV: OrderConvention = OrderConvention::Asc;

fn all_standard(n: usize) -> Vec<StandardMonomial> {
    (0..=n - 3).flat_map(|d| enumerate_standard(n, d, CONV).unwrap()).collect()
}

pub fn dual_is_a_standard_involution() {
    for n in 4..=7 {
        for v in all_standard(n) {
            let w = v.dual();
            assert!(is_standard(w.monomial(), n), "{}", w.monomial());
            assert_eq!(v.degree() + w.degree(), n - 3, "{}", v.monomial());
            assert_eq!(w.dual(), v);
        }
    }
}

pub fn closure_sums() {
    for n in 4..=7 {
        for v in all_standard(n) {
            let f = v.forest();
            let (i, j) = (v.exponents(), v.dual_exponents());
            for k in 0..f.len() {
                let sum: u32 = f.closure(k).iter().map(|&r| i[r] + j[r]).sum();
                assert_eq!(sum as usize, f.vertex(k).len() - 1, "{}", v.monomial());
            }
        }
    }
}

pub fn ranks_are_symmetric() {
    for n in 4..=8 {
        for d in 0..=n - 3 {
            assert_eq!(rank(n, d).unwrap(), rank(n, n - 3 - d).unwrap());
        }
    }
}

pub fn oracle_ranks_match_standard_counts() {
    for n in 4..=6 {
        for d in 0..=n - 3 {
            let r = graded_rank_oracle(n, d, &Budget::unlimited()).unwrap();
            assert_eq!(r.rank, rank(n, d).unwrap(), "n={n} d={d}");
            assert!(r.torsion_free, "n={n} d={d}");
        }
    }
}

pub fn filtration_vanishing() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut instances = Vec::new();
    for n in 5..=6 {
        let top = n - 3;
        for v in all_standard(n) {
            if v.monomial().d_degree() == 0 {
                continue;
            }
            let p = v.filtration_p();
            for dw in 1..=top - v.degree() {
                if p + dw <= top {
                    continue;
                }
                for w in all_monomials(n, dw) {
                    if monomial_much_less(&w, v.monomial(), CONV) {
                        instances.push((n, v.monomial().mul(&w)));
                    }
                }
            }
        }
    }
    assert!(instances.len() > 100, "{}", instances.len());
    let rings: HashMap<usize, ChowRing> =
        (5..=6).map(|n| (n, ChowRing::new(n, CONV).unwrap())).collect();
    let mut checked = 0;
    while checked < 1000 {
        let (n, m) = instances.choose(&mut rng).unwrap();
        let p = Polynomial::monomial(m.clone(), 1);
        assert!(rings[n].reduce(&p).unwrap().is_zero(), "n={n}: {m}");
        checked += 1;
    }
    for (n, m) in &instances {
        assert!(rings[n].reduce(&Polynomial::monomial(m.clone(), 1)).unwrap().is_zero());
    }
}

fn square_free_basis(r: usize) -> Vec<Monomial> {
    (0u32..1 << r)
        .map(|bits| Monomial::from_parts((0..r).filter(|k| bits >> k & 1 == 1).map(|k| (k + 1, 1)), []))
        .collect()
}

fn coords(p: &Polynomial, index: &HashMap<Monomial, usize>) -> Vec<i64> {
    let mut v = vec![0; index.len()];
    for (m, c) in p.terms() {
        if m.is_a_square_free() {
            v[index[m]] += c;
        }
    }
    v
}

fn hermite_of(rows: impl IntoIterator<Item = Vec<i64>>, ncols: usize) -> Vec<SparseVec> {
    let mut e = Echelon::new(ncols);
    for row in rows {
        let sv: SparseVec =
            row.iter().enumerate().filter(|e| *e.1 != 0).map(|(k, &x)| (k as u32, x)).collect();
        e.insert(sv).unwrap();
    }
    e.hermite().unwrap()
}

pub fn kernels_match_brute_force() {
    for n in 5..=7 {
        let basis = square_free_basis(n - 3);
        let index: HashMap<Monomial, usize> =
            basis.iter().enumerate().map(|(k, m)| (m.clone(), k)).collect();
        for set in admissible_sets(n) {
            let class = ambient_class(set).unwrap().poly;
            let columns: Vec<Vec<i64>> =
                basis.iter().map(|m| coords(&class.mul_monomial(m), &index)).collect();
            let matrix: Vec<Vec<i64>> =
                (0..basis.len()).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
            let brute = integer_kernel(&matrix, basis.len());
            let mut ideal = Vec::new();
            for g in kernel_generators(set).unwrap() {
                for m in &basis {
                    ideal.push(coords(&g.mul_monomial(m), &index));
                }
            }
            assert_eq!(
                hermite_of(ideal, basis.len()),
                hermite_of(brute, basis.len()),
                "{}",
                set.render()
            );
        }
    }
}

pub fn ambient_class_times_kernel_vanishes() {
    for n in 4..=8 {
        for set in admissible_sets(n) {
            let class = ambient_class(set).unwrap().poly;
            for g in kernel_generators(set).unwrap() {
                let prod = &class * &g;
                assert!(prod.terms().all(|(m, _)| !m.is_a_square_free()), "{}", set.render());
            }
        }
    }
}

pub fn relations_reduce_to_zero() {
    for n in 4..=7 {
        let ring = ChowRing::new(n, CONV).unwrap();
        for r in generate_relations(n, n - 3).unwrap().relations {
            assert!(ring.reduce(&r.poly).unwrap().is_zero(), "{} {}", r.family.as_str(), r.poly);
        }
    }
}

pub fn relations_vanish_in_boundary_ring() {
    for n in 4..=6 {
        let keel = KeelRing::new(n, &Budget::unlimited()).unwrap();
        for r in generate_relations(n, n - 3).unwrap().relations {
            assert!(keel.kills(&r.poly).unwrap(), "{} {}", r.family.as_str(), r.poly);
        }
    }
}

pub fn relation_multiples_vanish_at_seven() {
    let n = 7;
    let ring = ChowRing::new(n, CONV).unwrap();
    let rels = generate_relations(n, n - 3).unwrap().relations;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let monomials: Vec<Vec<Monomial>> = (0..=n - 3).map(|d| all_monomials(n, d)).collect();
    for _ in 0..1000 {
        let r = rels.choose(&mut rng).unwrap();
        let e = r.poly.homogeneous_degree().unwrap();
        let d = rng.gen_range(0..=n - 3 - e);
        let m = monomials[d].choose(&mut rng).unwrap();
        let p = r.poly.mul_monomial(m);
        assert!(ring.reduce(&p).unwrap().is_zero(), "{} * {m}", r.poly);
    }
}

fn random_poly(rng: &mut ChaCha8Rng, d: usize, monomials: &[Vec<Monomial>]) -> Polynomial {
    let mut p = Polynomial::zero();
    for _ in 0..rng.gen_range(1..4) {
        p.add_term(monomials[d].choose(rng).unwrap().clone(), rng.gen_range(-3..=3));
    }
    p
}

pub fn normal_form_is_multiplicative() {
    let n = 6;
    let ring = ChowRing::new(n, CONV).unwrap();
    let monomials: Vec<Vec<Monomial>> = (0..=n - 3).map(|d| all_monomials(n, d)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let d1 = rng.gen_range(0..=n - 3);
        let d2 = rng.gen_range(0..=n - 3 - d1);
        let p = random_poly(&mut rng, d1, &monomials);
        let q = random_poly(&mut rng, d2, &monomials);
        let lhs = ring.reduce(&(&p * &q)).unwrap();
        let rhs = ring.reduce(&(&ring.reduce(&p).unwrap() * &ring.reduce(&q).unwrap())).unwrap();
        assert_eq!(lhs, rhs, "({p}) * ({q})");
        let sum = ring.reduce(&(&p + &q)).unwrap();
        let parts = &ring.reduce(&p).unwrap() + &ring.reduce(&q).unwrap();
        assert_eq!(sum, parts);
    }
}

pub fn maximal_products_follow_the_sign_rule() {
    for n in 5..=6 {
        let ring = ChowRing::new(n, CONV).unwrap();
        let mut seen = 0;
        for fam in laminar_families(n, n - 3) {
            if fam.is_empty() {
                continue;
            }
            let f = Forest::build(n, &fam).unwrap();
            if (0..f.len()).any(|i| f.slack(i) < 2) {
                continue;
            }
            let d = Monomial::from_parts(
                [],
                fam.iter().enumerate().map(|(i, &s)| (s, (f.slack(i) - 1) as u32)),
            );
            let (g, _) = d_forest(&d, n).unwrap();
            let roots: usize = g.roots().iter().map(|&r| g.vertex(r).len() - 1).sum();
            if roots > n - 3 {
                continue;
            }
            let need = n - 3 - roots;
            let s = g.support_s();
            for a in square_free_subsets(s, need) {
                let fpoly = Polynomial::monomial(a.clone(), 1);
                let fast = top_product_fast(&fpoly, &d, n).unwrap();
                let want: i64 = fast.terms().map(|(_, c)| c).sum();
                let got = ring.integral_monomial(&a.mul(&d)).unwrap();
                assert_eq!(got, want, "{} * {}", a, d);
                assert_eq!(want.abs(), 1);
                assert_eq!(want, sign_epsilon(&g));
                seen += 1;
            }
        }
        assert!(seen > 0);
    }
}

fn square_free_subsets(s: IndexSet, k: usize) -> Vec<Monomial> {
    let elems = s.elems();
    let mut out = Vec::new();
    for bits in 0u32..1 << elems.len() {
        if bits.count_ones() as usize == k {
            out.push(Monomial::from_parts(
                (0..elems.len()).filter(|&j| bits >> j & 1 == 1).map(|j| (elems[j], 1)),
                [],
            ));
        }
    }
    out
}

pub fn boundary_ring_ranks_match() {
    for n in 4..=6 {
        for d in 0..=n - 3 {
            let k = m0n_core::keel::KeelDegree::build(n, d, &Budget::unlimited()).unwrap();
            assert_eq!(k.rank(), rank(n, d).unwrap(), "n={n} d={d}");
            assert!(k.torsion_free().unwrap());
        }
    }
    assert_eq!(normalized_boundary_sets(6).len(), 25);
}
