//! Standard monomials, their enumeration, the duality involution and the
//! filtration value `p(v)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forest::Forest;
use crate::index_set::{admissible_sets, IndexSet};
use crate::monomial::Monomial;
use crate::order::{monomial_cmp, OrderConvention};

/// A monomial certified standard, with the data of its forest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardMonomial {
    n: usize,
    mono: Monomial,
    forest: Forest,
    /// D-exponent of each forest vertex.
    exps: Vec<u32>,
    s: IndexSet,
    a_support: IndexSet,
}

#[derive(Clone, Debug, Serialize)]
pub struct StandardDocument {
    pub monomial: String,
    pub degree: usize,
    pub support_s: Vec<usize>,
    pub a_support: Vec<usize>,
    pub filtration: usize,
}

/// Forest of the D-part of `v`, if the D-part is a laminar family of
/// admissible sets.
pub fn d_forest(v: &Monomial, n: usize) -> Option<(Forest, Vec<u32>)> {
    let sets: Vec<IndexSet> = v.d_sets().collect();
    let exps: Vec<u32> = v.d_exponents().map(|p| p.1).collect();
    for (k, s) in sets.iter().enumerate() {
        if s.n() != n || !s.is_admissible() {
            return None;
        }
        if sets[..k].iter().any(|t| !t.is_compatible(s)) {
            return None;
        }
    }
    Some((Forest::build_unchecked(n, &sets), exps))
}

/// Largest exponent a standard monomial may carry at vertex `i`.
pub fn exponent_bound(f: &Forest, i: usize) -> usize {
    (f.vertex(i).len() - 2).min(f.slack(i).saturating_sub(2))
}

impl StandardMonomial {
    pub fn new(v: Monomial, n: usize) -> Result<StandardMonomial> {
        v.validate(n)?;
        let bad = || Error::NotStandard(v.render());
        let (forest, exps) = d_forest(&v, n).ok_or_else(bad)?;
        for (i, &e) in exps.iter().enumerate() {
            if e == 0 || e as usize > exponent_bound(&forest, i) {
                return Err(bad());
            }
        }
        if !v.is_a_square_free() {
            return Err(bad());
        }
        let s = forest.support_s();
        let a_support = v.a_support(n);
        if !a_support.is_subset(&s) {
            return Err(bad());
        }
        Ok(StandardMonomial { n, mono: v, forest, exps, s, a_support })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn monomial(&self) -> &Monomial {
        &self.mono
    }

    pub fn into_monomial(self) -> Monomial {
        self.mono
    }

    pub fn forest(&self) -> &Forest {
        &self.forest
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn support_s(&self) -> IndexSet {
        self.s
    }

    pub fn a_support(&self) -> IndexSet {
        self.a_support
    }

    pub fn degree(&self) -> usize {
        self.mono.degree()
    }

    /// Exponents `j_r` of the dual at each vertex.
    pub fn dual_exponents(&self) -> Vec<u32> {
        (0..self.forest.len())
            .map(|i| (self.forest.slack(i) - 1) as u32 - self.exps[i])
            .collect()
    }

    pub fn dual(&self) -> StandardMonomial {
        let t = self.s.difference(&self.a_support);
        let js = self.dual_exponents();
        let mono = Monomial::from_parts(
            t.iter().map(|i| (i, 1)),
            self.forest.vertices().iter().copied().zip(js.iter().copied()),
        );
        StandardMonomial {
            n: self.n,
            mono,
            forest: self.forest.clone(),
            exps: js,
            s: self.s,
            a_support: t,
        }
    }

    /// `deg a(v) + Σ_roots (|J| - 1)`.
    pub fn filtration_p(&self) -> usize {
        self.a_support.len()
            + self.forest.roots().iter().map(|&r| self.forest.vertex(r).len() - 1).sum::<usize>()
    }

    pub fn document(&self) -> StandardDocument {
        StandardDocument {
            monomial: self.mono.render(),
            degree: self.degree(),
            support_s: self.s.elems(),
            a_support: self.a_support.elems(),
            filtration: self.filtration_p(),
        }
    }
}

pub fn is_standard(v: &Monomial, n: usize) -> bool {
    StandardMonomial::new(v.clone(), n).is_ok()
}

pub fn dual(v: &StandardMonomial) -> StandardMonomial {
    v.dual()
}

pub fn filtration_p(v: &StandardMonomial) -> usize {
    v.filtration_p()
}

/// Every laminar family of admissible sets with at most `max_len`
/// members, each given as indices into `admissible_sets(n)`.
pub fn laminar_families(n: usize, max_len: usize) -> Vec<Vec<IndexSet>> {
    let sets = admissible_sets(n);
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        sets: &[IndexSet],
        start: usize,
        max_len: usize,
        cur: &mut Vec<IndexSet>,
        out: &mut Vec<Vec<IndexSet>>,
    ) {
        out.push(cur.clone());
        if cur.len() == max_len {
            return;
        }
        for j in start..sets.len() {
            if cur.iter().all(|c| c.is_compatible(&sets[j])) {
                cur.push(sets[j]);
                rec(sets, j + 1, max_len, cur, out);
                cur.pop();
            }
        }
    }
    rec(&sets, 0, max_len, &mut cur, &mut out);
    out
}

/// Calls `f` with every exponent vector `e` with `lo[i] <= e[i] <= hi[i]`
/// and `Σ e = total`.
pub(crate) fn for_each_exponents(lo: &[u32], hi: &[u32], total: u32, f: &mut impl FnMut(&[u32])) {
    fn rec(k: usize, lo: &[u32], hi: &[u32], left: u32, cur: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if k == lo.len() {
            if left == 0 {
                f(cur);
            }
            return;
        }
        let rest_lo: u32 = lo[k + 1..].iter().sum();
        let rest_hi: u32 = hi[k + 1..].iter().sum();
        for e in lo[k]..=hi[k].min(left) {
            if left - e < rest_lo || left - e > rest_hi {
                continue;
            }
            cur.push(e);
            rec(k + 1, lo, hi, left - e, cur, f);
            cur.pop();
        }
    }
    rec(0, lo, hi, total, &mut Vec::with_capacity(lo.len()), f);
}

/// Calls `f` with every `k`-element subset of `set`.
pub(crate) fn for_each_subset(set: IndexSet, k: usize, f: &mut impl FnMut(IndexSet)) {
    let elems = set.elems();
    fn rec(elems: &[usize], k: usize, start: usize, cur: IndexSet, f: &mut impl FnMut(IndexSet)) {
        if k == 0 {
            f(cur);
            return;
        }
        for j in start..elems.len() {
            if elems.len() - j < k {
                break;
            }
            rec(elems, k - 1, j + 1, cur.with(elems[j]), f);
        }
    }
    rec(&elems, k, 0, IndexSet::empty(set.n()), f);
}

/// All standard monomials of degree `d`, sorted by the monomial order.
pub fn enumerate_standard(n: usize, d: usize, conv: OrderConvention) -> Result<Vec<StandardMonomial>> {
    crate::index_set::check_n(n)?;
    let top = n.saturating_sub(3);
    if d > top {
        return Err(Error::DegreeOutOfRange { degree: d, max: top });
    }
    let mut out = Vec::new();
    for fam in laminar_families(n, d) {
        let forest = Forest::build_unchecked(n, &fam);
        let hi: Vec<u32> = (0..forest.len()).map(|i| exponent_bound(&forest, i) as u32).collect();
        if hi.contains(&0) {
            continue;
        }
        let lo = vec![1u32; forest.len()];
        let s = forest.support_s();
        let max_d: u32 = hi.iter().sum();
        let min_d = forest.len() as u32;
        for dd in min_d..=max_d.min(d as u32) {
            let k = d - dd as usize;
            if k > s.len() {
                continue;
            }
            let mut d_parts = Vec::new();
            for_each_exponents(&lo, &hi, dd, &mut |e| d_parts.push(e.to_vec()));
            for e in &d_parts {
                for_each_subset(s, k, &mut |a| {
                    let mono = Monomial::from_parts(
                        a.iter().map(|i| (i, 1)),
                        fam.iter().copied().zip(e.iter().copied()),
                    );
                    out.push(StandardMonomial {
                        n,
                        mono,
                        forest: forest.clone(),
                        exps: e.clone(),
                        s,
                        a_support: a,
                    });
                });
            }
        }
    }
    out.sort_by(|x, y| monomial_cmp(&x.mono, &y.mono, conv));
    Ok(out)
}

/// Number of standard monomials of degree `d`.
pub fn rank(n: usize, d: usize) -> Result<usize> {
    Ok(enumerate_standard(n, d, OrderConvention::default())?.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, e: &[usize]) -> IndexSet {
        IndexSet::new(n, e.iter().copied()).unwrap()
    }

    fn std(n: usize, a: &[usize], d: &[(&[usize], u32)]) -> StandardMonomial {
        let m = Monomial::from_parts(
            a.iter().map(|&i| (i, 1)),
            d.iter().map(|(s, e)| (set(n, s), *e)),
        );
        StandardMonomial::new(m, n).unwrap()
    }

    #[test]
    fn standardness_examples() {
        let n = 6;
        let m = |a: &[usize], d: &[(&[usize], u32)]| {
            Monomial::from_parts(a.iter().map(|&i| (i, 1)), d.iter().map(|(s, e)| (set(n, s), *e)))
        };
        assert!(is_standard(&m(&[1], &[(&[2, 3, 4], 1)]), n));
        assert!(!is_standard(&m(&[], &[(&[1, 2, 3, 4], 3)]), n));
        assert!(!is_standard(&m(&[1], &[(&[1, 2, 3, 4], 1)]), n));
        assert!(!is_standard(&m(&[], &[(&[1, 2, 3], 1), (&[2, 3, 4], 1)]), n));
        assert!(is_standard(&Monomial::one(), n));
    }

    #[test]
    fn small_bases() {
        let conv = OrderConvention::default();
        let b: Vec<String> =
            enumerate_standard(5, 1, conv).unwrap().iter().map(|v| v.monomial().render()).collect();
        let mut sorted = b.clone();
        sorted.sort();
        assert_eq!(sorted, ["D{1,2,3}", "D{1,2,4}", "D{1,2,5}", "a1", "a2"]);
        assert_eq!(enumerate_standard(6, 1, conv).unwrap().len(), 16);
        assert_eq!(enumerate_standard(6, 2, conv).unwrap().len(), 16);
        let b4: Vec<String> =
            enumerate_standard(4, 1, conv).unwrap().iter().map(|v| v.monomial().render()).collect();
        assert_eq!(b4, ["a1"]);
        assert!(enumerate_standard(6, 4, conv).is_err());
    }

    #[test]
    fn known_betti_numbers() {
        let r7: Vec<usize> = (0..=4).map(|d| rank(7, d).unwrap()).collect();
        assert_eq!(r7, [1, 42, 127, 42, 1]);
        let r8: Vec<usize> = (0..=5).map(|d| rank(8, d).unwrap()).collect();
        assert_eq!(r8, [1, 99, 715, 715, 99, 1]);
    }

    #[test]
    fn duals_table() {
        let n = 6;
        assert_eq!(std(n, &[1], &[]).dual().monomial().render(), "a2*a3");
        assert_eq!(std(n, &[], &[(&[1, 2, 3, 4], 1)]).dual().monomial().render(), "D{1,2,3,4}^2");
        assert_eq!(std(n, &[], &[(&[1, 2, 4], 1)]).dual().monomial().render(), "a3*D{1,2,4}");
        assert_eq!(std(n, &[], &[(&[1, 2, 3], 1)]).dual().monomial().render(), "a1*D{1,2,3}");
    }

    #[test]
    fn twenty_point_duals() {
        let n = 20;
        let i1: Vec<usize> = (1..=11).collect();
        let v1 = std(n, &[], &[(&i1, 1), (&[1, 2, 3], 1), (&[4, 5, 6], 1), (&[7, 8, 9], 1)]);
        assert_eq!(v1.degree(), 4);
        assert_eq!(
            v1.dual().monomial().render(),
            "a1*a12*a13*a14*a15*a16*a17*D{1,2,3,4,5,6,7,8,9,10,11}^3*D{1,2,3}*D{4,5,6}*D{7,8,9}"
        );
        let v2 = std(n, &[11], &[(&[12, 13, 18], 1), (&[14, 15, 19], 1), (&[16, 17, 20], 1)]);
        assert_eq!(
            v2.dual().monomial().render(),
            "a1*a2*a3*a4*a5*a6*a7*a8*a9*a10*D{12,13,18}*D{14,15,19}*D{16,17,20}"
        );
        assert_eq!(v2.degree(), 4);
        assert_eq!(v2.dual().degree(), 13);
        assert_eq!(v1.dual().degree(), 13);
    }

    #[test]
    fn filtration_examples() {
        assert_eq!(std(6, &[], &[(&[1, 2, 3], 1)]).filtration_p(), 2);
        assert_eq!(std(6, &[1], &[(&[2, 3, 4], 1)]).filtration_p(), 3);
        assert_eq!(std(6, &[], &[]).filtration_p(), 0);
    }

    #[test]
    fn involution_and_degrees() {
        for n in 4..=7 {
            for d in 0..=n - 3 {
                for v in enumerate_standard(n, d, OrderConvention::Asc).unwrap() {
                    let w = v.dual();
                    assert!(is_standard(w.monomial(), n), "{}", w.monomial());
                    assert_eq!(w.degree(), n - 3 - d);
                    assert_eq!(w.dual(), v);
                    let f = v.forest();
                    let js = v.dual_exponents();
                    for i in 0..f.len() {
                        let sum: u32 = f.closure(i).iter().map(|&r| v.exponents()[r] + js[r]).sum();
                        assert_eq!(sum as usize, f.vertex(i).len() - 1);
                    }
                    let roots: usize = f.roots().iter().map(|&r| f.vertex(r).len() - 1).sum();
                    assert_eq!(v.monomial().d_degree() + w.monomial().d_degree(), roots);
                }
            }
        }
    }
}
