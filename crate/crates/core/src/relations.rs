//! The five relation families of the presentation and the dictionary to
//! the boundary-divisor presentation.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::index_set::{admissible_sets, IndexSet};
use crate::monomial::{Generator, Monomial};
use crate::polynomial::Polynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    /// `a_i^2`
    R1,
    /// `D_I D_J`, incompatible pairs
    R2,
    /// kernel generator times `D_I`
    R3,
    /// mixed Chern relation for `J ⊊ I`
    R4,
    /// full Chern relation for `I`
    R5,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::R1 => "R1",
            Family::R2 => "R2",
            Family::R3 => "R3",
            Family::R4 => "R4",
            Family::R5 => "R5",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub family: Family,
    pub poly: Polynomial,
    /// Index sets the relation was built from (`[I]`, `[I, J]`, …).
    pub sets: Vec<IndexSet>,
    pub note: String,
}

impl Relation {
    pub fn degree(&self) -> usize {
        self.poly.max_degree().unwrap_or(0)
    }
}

#[derive(Clone, Debug, Default)]
pub struct RelationSet {
    pub n: usize,
    pub relations: Vec<Relation>,
}

impl RelationSet {
    pub fn family(&self, f: Family) -> impl Iterator<Item = &Relation> + '_ {
        self.relations.iter().filter(move |r| r.family == f)
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbientClass {
    pub set: IndexSet,
    pub poly: Polynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningDivisor {
    pub class: Polynomial,
    /// The divisor contains `X_J` exactly when `pair ⊆ J`.
    pub pair: IndexSet,
}

fn a(i: usize) -> Polynomial {
    Polynomial::generator(Generator::A(i))
}

fn d(s: IndexSet) -> Polynomial {
    Polynomial::generator(Generator::D(s))
}

fn check(set: &IndexSet) -> Result<()> {
    if set.is_admissible() {
        Ok(())
    } else {
        Err(Error::NotAdmissible(set.render()))
    }
}

/// Class of `X_I` in `Z[a]/(a_i^2)`.
pub fn ambient_class(set: IndexSet) -> Result<AmbientClass> {
    check(&set)?;
    let poly = match set.special() {
        Some(s) => Polynomial::monomial(Monomial::a_product(&set.without(s)), 1),
        None => {
            let mut p = Polynomial::zero();
            for i in set.iter() {
                p.add_term(Monomial::a_product(&set.without(i)), 1);
            }
            p
        }
    };
    Ok(AmbientClass { set, poly })
}

/// Generators of the kernel of multiplication by `[X_I]` on `Z[a]/(a_i^2)`.
pub fn kernel_generators(set: IndexSet) -> Result<Vec<Polynomial>> {
    check(&set)?;
    let mut out = Vec::new();
    match set.special() {
        Some(s) => {
            for i in set.without(s).iter() {
                out.push(a(i));
            }
        }
        None => {
            let e = set.elems();
            for (x, &i) in e.iter().enumerate() {
                for &j in &e[x + 1..] {
                    out.push(&a(i) - &a(j));
                    out.push(&a(i) * &a(j));
                }
            }
        }
    }
    Ok(out)
}

/// The transversal divisors cutting out `X_I`.
pub fn defining_divisors(set: IndexSet) -> Result<Vec<DefiningDivisor>> {
    check(&set)?;
    let n = set.n();
    Ok(match set.special() {
        Some(s) => set
            .without(s)
            .iter()
            .map(|i| DefiningDivisor { class: a(i), pair: IndexSet::empty(n).with(i).with(s) })
            .collect(),
        None => {
            let b = set.first().expect("nonempty");
            set.without(b)
                .iter()
                .map(|i| DefiningDivisor { class: &a(b) + &a(i), pair: IndexSet::empty(n).with(b).with(i) })
                .collect()
        }
    })
}

/// `D_I + Σ_{J ⊋ I} D_J`: the exceptional part of the pullback of a
/// divisor containing `X_I`.
pub fn correction(set: IndexSet) -> Polynomial {
    let mut p = d(set);
    for j in admissible_sets(set.n()) {
        if set.is_proper_subset(&j) {
            p = &p + &d(j);
        }
    }
    p
}

fn chern_product(classes: &[Polynomial], corr: &Polynomial) -> Polynomial {
    classes.iter().fold(Polynomial::one(), |acc, c| &acc * &(c - corr))
}

/// `∏_c (c - D_I - Σ_{J ⊋ I} D_J)` over the defining divisors of `I`.
pub fn chern_relation_full(set: IndexSet) -> Result<Polynomial> {
    let classes: Vec<_> = defining_divisors(set)?.into_iter().map(|c| c.class).collect();
    Ok(chern_product(&classes, &correction(set)))
}

/// Divisor classes `W(I, J)` completing `X_J` to `X_I`.
pub fn complement_divisors(outer: IndexSet, inner: IndexSet) -> Result<Vec<Polynomial>> {
    check(&outer)?;
    check(&inner)?;
    if !inner.is_proper_subset(&outer) {
        return Err(Error::NotProperSubset(inner.render(), outer.render()));
    }
    let rest = outer.difference(&inner);
    Ok(match (outer.special(), inner.special()) {
        (None, _) => {
            let b = inner.first().expect("nonempty");
            rest.iter().map(|i| &a(b) + &a(i)).collect()
        }
        (Some(_), Some(_)) => rest.iter().map(a).collect(),
        (Some(s), None) => {
            let mut v = vec![a(inner.first().expect("nonempty"))];
            v.extend(rest.without(s).iter().map(a));
            v
        }
    })
}

/// `D_J · ∏_{c ∈ W(I,J)} (c - D_I - Σ_{J' ⊋ I} D_{J'})`.
pub fn chern_relation_mixed(outer: IndexSet, inner: IndexSet) -> Result<Polynomial> {
    let classes = complement_divisors(outer, inner)?;
    Ok(&d(inner) * &chern_product(&classes, &correction(outer)))
}

/// Mixed relation along several pairwise disjoint `J_1, …, J_k ⊊ I`.
pub fn chern_relation_multi(outer: IndexSet, inners: &[IndexSet]) -> Result<Polynomial> {
    check(&outer)?;
    let n = outer.n();
    let mut covered = IndexSet::empty(n);
    for j in inners {
        check(j)?;
        if !j.is_proper_subset(&outer) {
            return Err(Error::NotProperSubset(j.render(), outer.render()));
        }
        if !covered.is_disjoint(j) {
            return Err(Error::Incompatible(covered.render(), j.render()));
        }
        covered = covered.union(j);
    }
    // X_{J_1} ∩ … ∩ X_{J_k} ∩ W = X_I with W glueing the pieces together.
    let mut classes = Vec::new();
    let reps: Vec<usize> = inners.iter().map(|j| j.first().unwrap()).collect();
    let rest = outer.difference(&covered);
    match outer.special() {
        Some(s) => {
            for (j, &r) in inners.iter().zip(&reps) {
                if !j.contains(s) {
                    classes.push(a(r));
                }
            }
            classes.extend(rest.without(s).iter().map(a));
        }
        None => {
            let b = reps.first().copied().unwrap_or_else(|| outer.first().unwrap());
            for &r in reps.iter().skip(1) {
                classes.push(&a(b) + &a(r));
            }
            for i in rest.iter() {
                classes.push(&a(b) + &a(i));
            }
        }
    }
    let head = inners.iter().fold(Polynomial::one(), |acc, &j| &acc * &d(j));
    Ok(&head * &chern_product(&classes, &correction(outer)))
}

/// Options for [`generate_relations_with`].
#[derive(Clone, Copy, Debug, Default)]
pub struct RelationOptions {
    /// Also emit mixed relations along several disjoint inner sets.
    pub multi_inner: bool,
}

pub fn generate_relations(n: usize, maxdeg: usize) -> Result<RelationSet> {
    generate_relations_with(n, maxdeg, RelationOptions::default())
}

pub fn generate_relations_with(n: usize, maxdeg: usize, opts: RelationOptions) -> Result<RelationSet> {
    crate::index_set::check_n(n)?;
    let top = n.saturating_sub(3);
    if maxdeg > top {
        return Err(Error::DegreeOutOfRange { degree: maxdeg, max: top });
    }
    let sets = admissible_sets(n);
    let mut rels = Vec::new();
    for i in 1..=top {
        rels.push(Relation { family: Family::R1, poly: a(i).pow(2), sets: vec![], note: format!("a{i}^2") });
    }
    let mut push = |family, poly: Polynomial, sets: Vec<IndexSet>, note: String| {
        if poly.max_degree().is_some_and(|dg| dg <= maxdeg) {
            rels.push(Relation { family, poly, sets, note });
        }
    };
    for (x, &s) in sets.iter().enumerate() {
        for &t in &sets[x + 1..] {
            if !s.is_compatible(&t) {
                push(Family::R2, &d(s) * &d(t), vec![s, t], "incompatible".into());
            }
        }
    }
    for &s in &sets {
        for g in kernel_generators(s)? {
            let note = format!("({g})*D{s}");
            push(Family::R3, &g * &d(s), vec![s], note);
        }
    }
    for &outer in &sets {
        for &inner in &sets {
            if inner.is_proper_subset(&outer) && outer.len() - inner.len() < maxdeg {
                push(Family::R4, chern_relation_mixed(outer, inner)?, vec![outer, inner], "mixed".into());
            }
        }
        if opts.multi_inner {
            let inside: Vec<IndexSet> = sets.iter().copied().filter(|j| j.is_proper_subset(&outer)).collect();
            for (x, &j1) in inside.iter().enumerate() {
                for &j2 in &inside[x + 1..] {
                    if j1.is_disjoint(&j2) && outer.len() - j1.len() - j2.len() + 3 <= maxdeg {
                        let p = chern_relation_multi(outer, &[j1, j2])?;
                        push(Family::R4, p, vec![outer, j1, j2], "mixed-multi".into());
                    }
                }
            }
        }
    }
    for &s in &sets {
        if s.len() - 1 <= maxdeg {
            push(Family::R5, chern_relation_full(s)?, vec![s], "full".into());
        }
    }
    Ok(RelationSet { n, relations: rels })
}

/// A boundary divisor of the other presentation: the side of a two-part
/// partition holding at most one special point. Sides have size `>= 2`.
pub fn normalized_boundary_sets(n: usize) -> Vec<IndexSet> {
    let full = IndexSet::full(n);
    let mut out: Vec<IndexSet> = (1..full.bits())
        .map(|b| IndexSet::from_bits(n, b))
        .filter(|t| t.len() >= 2 && n - t.len() >= 2 && t.special_count() <= 1)
        .collect();
    out.sort_by(|x, y| x.cmp_order(y));
    out
}

/// Normalized side of the partition `{t, complement}`.
pub fn normalize(t: IndexSet) -> IndexSet {
    if t.special_count() <= 1 {
        t
    } else {
        IndexSet::full(t.n()).difference(&t)
    }
}

/// Does the partition with side `t` separate `{i, j}` from `{k, l}`?
fn separates(t: IndexSet, i: usize, j: usize, k: usize, l: usize) -> bool {
    let side = |x: usize| t.contains(x);
    side(i) == side(j) && side(k) == side(l) && side(i) != side(k)
}

#[derive(Clone, Debug)]
pub struct KeelDictionary {
    pub n: usize,
    /// For each `a_i`, its three boundary sums (one per special point),
    /// as polynomials in boundary divisors.
    pub forward: BTreeMap<usize, Vec<Polynomial>>,
    /// Each two-element boundary divisor in terms of the `a_i` and `D_I`.
    pub backward: BTreeMap<IndexSet, Polynomial>,
    /// Linear four-point relations, as differences of boundary sums.
    pub four_point: Vec<Polynomial>,
    /// Products of incompatible boundary divisors.
    pub incompatible: Vec<Polynomial>,
}

/// Four-point sum `Σ D_T` over partitions separating `{i,j}` from `{k,l}`.
pub fn four_point_sum(n: usize, i: usize, j: usize, k: usize, l: usize) -> Polynomial {
    let mut p = Polynomial::zero();
    for t in normalized_boundary_sets(n) {
        if separates(t, i, j, k, l) {
            p = &p + &d(t);
        }
    }
    p
}

pub fn keel_dictionary(n: usize) -> Result<KeelDictionary> {
    crate::index_set::check_n(n)?;
    if n < 4 {
        return Err(Error::InvalidMarkingCount(n));
    }
    let boundary = normalized_boundary_sets(n);
    let specials = IndexSet::specials(n).elems();
    let mut forward = BTreeMap::new();
    for i in 1..=n - 3 {
        let sums = specials
            .iter()
            .map(|&s| {
                let others: Vec<usize> = specials.iter().copied().filter(|&x| x != s).collect();
                four_point_sum(n, i, s, others[0], others[1])
            })
            .collect();
        forward.insert(i, sums);
    }
    let mut backward = BTreeMap::new();
    for t in boundary.iter().filter(|t| t.len() == 2) {
        let mut p = match t.special() {
            Some(s) => a(t.without(s).first().unwrap()),
            None => {
                let e = t.elems();
                &a(e[0]) + &a(e[1])
            }
        };
        for j in admissible_sets(n) {
            if t.is_proper_subset(&j) {
                p = &p - &d(j);
            }
        }
        backward.insert(*t, p);
    }
    let mut four_point = Vec::new();
    for q in quadruples(n) {
        let [i, j, k, l] = q;
        let s1 = four_point_sum(n, i, j, k, l);
        let s2 = four_point_sum(n, i, k, j, l);
        let s3 = four_point_sum(n, i, l, j, k);
        four_point.push(&s1 - &s2);
        four_point.push(&s1 - &s3);
    }
    let mut incompatible = Vec::new();
    for (x, &s) in boundary.iter().enumerate() {
        for &t in &boundary[x + 1..] {
            if !s.is_compatible(&t) {
                incompatible.push(&d(s) * &d(t));
            }
        }
    }
    Ok(KeelDictionary { n, forward, backward, four_point, incompatible })
}

fn quadruples(n: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                for l in k + 1..=n {
                    out.push([i, j, k, l]);
                }
            }
        }
    }
    out
}

/// Substitutes a polynomial for every generator.
pub fn substitute(p: &Polynomial, f: &mut impl FnMut(Generator) -> Polynomial) -> Polynomial {
    let mut cache: BTreeMap<Generator, Polynomial> = BTreeMap::new();
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        let mut term = Polynomial::monomial(Monomial::one(), c);
        for (g, e) in m.generators() {
            let image = cache.entry(g).or_insert_with(|| f(g)).clone();
            for _ in 0..e {
                term = &term * &image;
            }
        }
        out = &out + &term;
    }
    out
}

impl KeelDictionary {
    /// Image of a presentation polynomial in the boundary ring.
    pub fn to_boundary(&self, p: &Polynomial) -> Polynomial {
        substitute(p, &mut |g| match g {
            Generator::A(i) => self.forward[&i][0].clone(),
            Generator::D(s) => d(s),
        })
    }

    /// Image of a boundary polynomial in the presentation ring.
    pub fn to_presentation(&self, p: &Polynomial) -> Polynomial {
        substitute(p, &mut |g| match g {
            Generator::D(s) if s.len() == 2 => self.backward[&s].clone(),
            g => Polynomial::generator(g),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, e: &[usize]) -> IndexSet {
        IndexSet::new(n, e.iter().copied()).unwrap()
    }

    #[test]
    fn ambient_classes() {
        assert_eq!(ambient_class(set(6, &[1, 2, 3])).unwrap().poly.render(), "a1*a2 + a1*a3 + a2*a3");
        assert_eq!(ambient_class(set(6, &[2, 3, 4])).unwrap().poly.render(), "a2*a3");
        assert_eq!(ambient_class(set(6, &[1, 2, 3, 4])).unwrap().poly.render(), "a1*a2*a3");
        assert!(ambient_class(set(6, &[4, 5, 6])).is_err());
    }

    #[test]
    fn defining_divisors_multiply_to_ambient_class() {
        for n in 5..=8 {
            for s in admissible_sets(n) {
                let prod = defining_divisors(s)
                    .unwrap()
                    .iter()
                    .fold(Polynomial::one(), |acc, c| &acc * &c.class);
                let reduced = Polynomial::from_terms(
                    prod.terms().filter(|(m, _)| m.is_a_square_free()).map(|(m, c)| (m.clone(), c)),
                );
                assert_eq!(reduced, ambient_class(s).unwrap().poly, "{s}");
            }
        }
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_generators(set(7, &[1, 2, 3])).unwrap();
        assert!(k.contains(&(&a(1) - &a(2))));
        assert_eq!(kernel_generators(set(6, &[2, 3, 4])).unwrap(), vec![a(2), a(3)]);
        assert_eq!(kernel_generators(set(6, &[1, 2, 3, 4])).unwrap(), vec![a(1), a(2), a(3)]);
    }

    #[test]
    fn mixed_relation_example() {
        let p = chern_relation_mixed(set(6, &[1, 2, 3, 4]), set(6, &[1, 2, 3])).unwrap();
        let expect = &(&a(1) - &d(set(6, &[1, 2, 3, 4]))) * &d(set(6, &[1, 2, 3]));
        assert_eq!(p, expect);
        assert!(chern_relation_mixed(set(6, &[1, 2, 3]), set(6, &[1, 2, 3, 4])).is_err());
    }

    #[test]
    fn small_relation_sets() {
        let r4 = generate_relations(4, 1).unwrap();
        assert_eq!(r4.len(), 1);
        assert_eq!(r4.relations[0].poly, a(1).pow(2));
        let r5 = generate_relations(5, 2).unwrap();
        let target = &d(set(5, &[1, 2, 3])) * &d(set(5, &[1, 2, 4]));
        assert!(r5.family(Family::R2).any(|r| r.poly == target));
        let target = &a(1) * &d(set(5, &[1, 2, 3]));
        assert!(r5.family(Family::R3).any(|r| r.poly == target));
    }

    #[test]
    fn boundary_sums() {
        let k = keel_dictionary(4).unwrap();
        let sums: Vec<String> = k.forward[&1].iter().map(|p| p.render()).collect();
        assert_eq!(sums, ["D{1,2}", "D{1,3}", "D{1,4}"]);
        let k = keel_dictionary(5).unwrap();
        let sums: Vec<String> = k.forward[&1].iter().map(|p| p.render()).collect();
        assert_eq!(sums, ["D{1,2,3} + D{1,3}", "D{1,2,4} + D{1,4}", "D{1,2,5} + D{1,5}"]);
        let k = keel_dictionary(6).unwrap();
        let sums: Vec<String> = k.forward[&1].iter().map(|p| p.render()).collect();
        assert_eq!(sums[0], "D{1,2,3,4} + D{1,3,4} + D{1,2,4} + D{1,4}");
        assert_eq!(normalized_boundary_sets(6).len(), 25);
    }
}
