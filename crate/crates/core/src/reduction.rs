//! Normal forms over the standard basis.
//!
//! Monomials are first rewritten modulo the quadratic, incompatibility and
//! kernel relations, which leaves *canonical* monomials: a laminar D-part
//! and a square-free a-part supported on `S`. The Chern relations are then
//! multiplied out against canonical monomials of the complementary degree
//! and eliminated exactly, non-standard columns first. A table is accepted
//! only if every non-standard column gets a unit pivot and no standard
//! column gets any pivot, i.e. the standard monomials are a `Z`-basis.

use std::collections::HashMap;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::index_set::{check_n, IndexSet};
use crate::linalg::{Echelon, SparseVec};
use crate::monomial::Monomial;
use crate::order::{monomial_cmp, OrderConvention};
use crate::polynomial::Polynomial;
use crate::relations::{generate_relations_with, Family, RelationOptions};
use crate::standard::{
    exponent_bound, for_each_exponents, for_each_subset, laminar_families, StandardMonomial,
};
use crate::forest::Forest;

/// Rewrites `m` modulo `a_i^2`, incompatible products and the kernel
/// relations. `None` means the monomial vanishes.
pub fn canonicalize(m: &Monomial, n: usize) -> Option<Monomial> {
    let sets: Vec<(IndexSet, u32)> = m.d_exponents().collect();
    for (k, (s, _)) in sets.iter().enumerate() {
        if sets[..k].iter().any(|(t, _)| !t.is_compatible(s)) {
            return None;
        }
    }
    let mut a = IndexSet::empty(n);
    for (i, e) in m.a_exponents() {
        if e > 1 {
            return None;
        }
        let mut target = i;
        let mut largest: Option<IndexSet> = None;
        for &(s, _) in &sets {
            if s.contains(i) && largest.is_none_or(|l| l.is_proper_subset(&s)) {
                largest = Some(s);
            }
        }
        if let Some(r) = largest {
            if r.special().is_some() {
                return None;
            }
            target = r.first().unwrap();
        }
        if a.contains(target) {
            return None;
        }
        a = a.with(target);
    }
    if m.a_exponents().all(|(i, _)| a.contains(i)) && m.a_degree() == a.len() {
        // Fast path: nothing moved.
        return Some(m.clone());
    }
    Some(Monomial::from_parts(a.iter().map(|i| (i, 1)), sets))
}

/// Canonical form of a polynomial: every term canonicalized, zeros dropped.
pub fn canonicalize_poly(p: &Polynomial, n: usize) -> Polynomial {
    Polynomial::from_terms(p.terms().filter_map(|(m, c)| canonicalize(m, n).map(|m| (m, c))))
}

/// All canonical monomials of degree `d`.
pub fn canonical_monomials(n: usize, d: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    for fam in laminar_families(n, d) {
        let forest = Forest::build_unchecked(n, &fam);
        let s = forest.support_s();
        let lo = vec![1u32; fam.len()];
        let hi = vec![d as u32; fam.len()];
        for dd in fam.len()..=d {
            let k = d - dd;
            if k > s.len() {
                continue;
            }
            for_each_exponents(&lo, &hi, dd as u32, &mut |e| {
                for_each_subset(s, k, &mut |a| {
                    out.push(Monomial::from_parts(
                        a.iter().map(|i| (i, 1)),
                        fam.iter().copied().zip(e.iter().copied()),
                    ));
                });
            });
        }
    }
    out
}

fn is_standard_canonical(m: &Monomial, n: usize) -> bool {
    let sets: Vec<IndexSet> = m.d_sets().collect();
    let f = Forest::build_unchecked(n, &sets);
    m.d_exponents().enumerate().all(|(i, (_, e))| e as usize <= exponent_bound(&f, i))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TableStats {
    pub columns: usize,
    pub standard: usize,
    pub relation_rows: usize,
    pub pivots: usize,
}

/// Normal forms of every canonical monomial of one degree.
#[derive(Clone, Debug)]
pub struct ReductionTable {
    n: usize,
    d: usize,
    conv: OrderConvention,
    basis: Vec<StandardMonomial>,
    columns: Vec<Monomial>,
    index: HashMap<Monomial, u32>,
    /// Per column: coefficients over `basis` indices.
    forms: Vec<SparseVec>,
    stats: TableStats,
}

/// Plain-data form of a table for persistence.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TableData {
    pub n: usize,
    pub d: usize,
    pub conv: OrderConvention,
    pub basis: Vec<Monomial>,
    pub columns: Vec<Monomial>,
    pub forms: Vec<SparseVec>,
    pub stats: TableStats,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalForm {
    pub n: usize,
    pub degree: usize,
    /// Nonzero coefficients over standard monomials, in basis order.
    pub terms: Vec<(Monomial, i64)>,
}

impl NormalForm {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().cloned())
    }

    pub fn render(&self) -> String {
        crate::polynomial::render_terms(self.terms.iter().map(|(m, c)| (m, *c)))
    }
}

impl ReductionTable {
    pub fn build(n: usize, d: usize, conv: OrderConvention, budget: &Budget) -> Result<Self> {
        Self::build_with(n, d, conv, RelationOptions::default(), budget)
    }

    pub fn build_with(
        n: usize,
        d: usize,
        conv: OrderConvention,
        opts: RelationOptions,
        budget: &Budget,
    ) -> Result<Self> {
        check_n(n)?;
        let top = n - 3;
        if d > top {
            return Err(Error::DegreeOutOfRange { degree: d, max: top });
        }
        let basis = crate::standard::enumerate_standard(n, d, conv)?;
        let basis_pos: HashMap<Monomial, u32> =
            basis.iter().enumerate().map(|(k, v)| (v.monomial().clone(), k as u32)).collect();

        let canon = canonical_monomials(n, d);
        let (mut nonstd, std): (Vec<Monomial>, Vec<Monomial>) =
            canon.into_iter().partition(|m| !basis_pos.contains_key(m));
        debug_assert!(std.iter().all(|m| is_standard_canonical(m, n)));
        if std.len() != basis.len() {
            return Err(Error::Certification {
                degree: d,
                detail: format!("{} canonical standard monomials, {} in basis", std.len(), basis.len()),
            });
        }
        // Heavier D-parts first: they are the ones the Chern relations
        // express through lighter monomials.
        nonstd.sort_by(|x, y| {
            y.d_degree().cmp(&x.d_degree()).then_with(|| monomial_cmp(y, x, conv))
        });
        let n_nonstd = nonstd.len();
        let mut columns = nonstd;
        columns.extend(basis.iter().map(|v| v.monomial().clone()));
        let index: HashMap<Monomial, u32> =
            columns.iter().enumerate().map(|(k, m)| (m.clone(), k as u32)).collect();

        let rels = generate_relations_with(n, d.max(1).min(top), opts)?;
        let chern: Vec<Polynomial> = rels
            .relations
            .iter()
            .filter(|r| matches!(r.family, Family::R4 | Family::R5))
            .map(|r| canonicalize_poly(&r.poly, n))
            .filter(|p| !p.is_zero() && p.homogeneous_degree().is_some_and(|e| e <= d))
            .collect();
        let mut lower: Vec<Option<Vec<Monomial>>> = vec![None; d + 1];
        for p in &chern {
            let e = p.homogeneous_degree().unwrap();
            if lower[d - e].is_none() {
                lower[d - e] = Some(canonical_monomials(n, d - e));
            }
        }

        let mut ech = Echelon::new(columns.len());
        let mut relation_rows = 0usize;
        for p in &chern {
            budget.check("reduction table")?;
            let e = p.homogeneous_degree().unwrap();
            let ms = lower[d - e].as_ref().unwrap();
            let rows: Vec<SparseVec> = ms
                .par_iter()
                .filter_map(|m| {
                    let mut acc: HashMap<u32, i64> = HashMap::new();
                    for (t, c) in p.terms() {
                        if let Some(x) = canonicalize(&t.mul(m), n) {
                            *acc.entry(index[&x]).or_insert(0) += c;
                        }
                    }
                    let mut row: SparseVec = acc.into_iter().filter(|e| e.1 != 0).collect();
                    row.sort_unstable();
                    (!row.is_empty()).then_some(row)
                })
                .collect();
            for row in rows {
                relation_rows += 1;
                ech.insert(row)?;
            }
        }

        let fail = |detail: String| Error::Certification { degree: d, detail };
        for (c, col) in columns.iter().enumerate() {
            match (ech.pivot(c), c < n_nonstd) {
                (Some(p), true) if p[0].1 != 1 => {
                    return Err(fail(format!("pivot {} at {col}", p[0].1)));
                }
                (None, true) => return Err(fail(format!("{col} is not reducible"))),
                (Some(_), false) => {
                    return Err(fail(format!("standard monomial {col} is dependent")));
                }
                _ => {}
            }
        }

        // Back-substitution from the right: e_c = -Σ_{j>c} row_j e_j.
        let mut forms: Vec<SparseVec> = vec![Vec::new(); columns.len()];
        for (k, form) in forms.iter_mut().enumerate().skip(n_nonstd) {
            *form = vec![((k - n_nonstd) as u32, 1)];
        }
        for c in (0..n_nonstd).rev() {
            if c % 4096 == 0 {
                budget.check("back-substitution")?;
            }
            let row = ech.pivot(c).unwrap();
            let mut acc: HashMap<u32, i64> = HashMap::new();
            for &(j, x) in &row[1..] {
                for &(b, y) in &forms[j as usize] {
                    let v = acc.entry(b).or_insert(0);
                    *v = v
                        .checked_sub(x.checked_mul(y).ok_or(Error::Overflow)?)
                        .ok_or(Error::Overflow)?;
                }
            }
            let mut f: SparseVec = acc.into_iter().filter(|e| e.1 != 0).collect();
            f.sort_unstable();
            forms[c] = f;
        }

        let stats = TableStats {
            columns: columns.len(),
            standard: basis.len(),
            relation_rows,
            pivots: ech.rank(),
        };
        Ok(ReductionTable { n, d, conv, basis, columns, index, forms, stats })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn convention(&self) -> OrderConvention {
        self.conv
    }

    pub fn basis(&self) -> &[StandardMonomial] {
        &self.basis
    }

    pub fn stats(&self) -> &TableStats {
        &self.stats
    }

    /// Coefficients of a single monomial over the basis.
    pub fn monomial_form(&self, m: &Monomial) -> &[(u32, i64)] {
        match canonicalize(m, self.n) {
            None => &[],
            Some(c) => &self.forms[self.index[&c] as usize],
        }
    }

    /// Normal form of a homogeneous polynomial of this table's degree, as
    /// coefficients over basis indices.
    pub fn reduce_vec(&self, p: &Polynomial) -> Result<Vec<i64>> {
        let mut out = vec![0i64; self.basis.len()];
        for (m, c) in p.terms() {
            if m.degree() != self.d {
                return Err(Error::WrongDegree { expected: self.d, found: m.degree() });
            }
            m.validate(self.n)?;
            for &(b, y) in self.monomial_form(m) {
                let v = &mut out[b as usize];
                *v = v.checked_add(c.checked_mul(y).ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
            }
        }
        Ok(out)
    }

    pub fn normal_form(&self, p: &Polynomial) -> Result<NormalForm> {
        let v = self.reduce_vec(p)?;
        let terms = v
            .into_iter()
            .enumerate()
            .filter(|e| e.1 != 0)
            .map(|(k, c)| (self.basis[k].monomial().clone(), c))
            .collect();
        Ok(NormalForm { n: self.n, degree: self.d, terms })
    }

    pub fn to_data(&self) -> TableData {
        TableData {
            n: self.n,
            d: self.d,
            conv: self.conv,
            basis: self.basis.iter().map(|v| v.monomial().clone()).collect(),
            columns: self.columns.clone(),
            forms: self.forms.clone(),
            stats: self.stats.clone(),
        }
    }

    /// Rebuilds a table from persisted data, re-validating its shape.
    pub fn from_data(data: TableData) -> Result<Self> {
        let bad = |detail: &str| Error::Certification { degree: data.d, detail: detail.to_string() };
        if data.columns.len() != data.forms.len() {
            return Err(bad("column and form counts differ"));
        }
        let basis = data
            .basis
            .iter()
            .map(|m| StandardMonomial::new(m.clone(), data.n))
            .collect::<Result<Vec<_>>>()?;
        if data.forms.iter().flatten().any(|&(b, _)| b as usize >= basis.len()) {
            return Err(bad("form refers to a missing basis element"));
        }
        let index = data.columns.iter().enumerate().map(|(k, m)| (m.clone(), k as u32)).collect();
        Ok(ReductionTable {
            n: data.n,
            d: data.d,
            conv: data.conv,
            basis,
            columns: data.columns,
            index,
            forms: data.forms,
            stats: data.stats,
        })
    }
}

/// The Chow ring for a fixed `n`, with lazily built per-degree tables.
#[derive(Debug)]
pub struct ChowRing {
    n: usize,
    conv: OrderConvention,
    opts: RelationOptions,
    tables: Vec<OnceLock<ReductionTable>>,
}

impl ChowRing {
    pub fn new(n: usize, conv: OrderConvention) -> Result<Self> {
        check_n(n)?;
        Ok(ChowRing {
            n,
            conv,
            opts: RelationOptions::default(),
            tables: (0..=n - 3).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn with_options(mut self, opts: RelationOptions) -> Self {
        self.opts = opts;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn convention(&self) -> OrderConvention {
        self.conv
    }

    pub fn top_degree(&self) -> usize {
        self.n - 3
    }

    /// Installs a prebuilt table (e.g. loaded from a cache).
    pub fn install(&self, table: ReductionTable) -> Result<()> {
        if table.n != self.n || table.conv != self.conv {
            return Err(Error::Certification { degree: table.d, detail: "table does not match ring".into() });
        }
        let _ = self.tables[table.d].set(table);
        Ok(())
    }

    pub fn table(&self, d: usize) -> Result<&ReductionTable> {
        self.table_within(d, &Budget::unlimited())
    }

    pub fn table_within(&self, d: usize, budget: &Budget) -> Result<&ReductionTable> {
        let top = self.top_degree();
        let slot = self.tables.get(d).ok_or(Error::DegreeOutOfRange { degree: d, max: top })?;
        if let Some(t) = slot.get() {
            return Ok(t);
        }
        let t = ReductionTable::build_with(self.n, d, self.conv, self.opts, budget)?;
        let _ = slot.set(t);
        Ok(slot.get().unwrap())
    }

    /// Normal form of each homogeneous component; components above the top
    /// degree vanish.
    pub fn normal_form(&self, p: &Polynomial) -> Result<Vec<NormalForm>> {
        let mut out = Vec::new();
        for (d, part) in p.homogeneous_parts() {
            if d > self.top_degree() {
                part.terms().try_for_each(|(m, _)| m.validate(self.n))?;
                continue;
            }
            let nf = self.table(d)?.normal_form(&part)?;
            if !nf.is_zero() {
                out.push(nf);
            }
        }
        Ok(out)
    }

    /// Normal form as a single polynomial over standard monomials.
    pub fn reduce(&self, p: &Polynomial) -> Result<Polynomial> {
        let mut out = Polynomial::zero();
        for nf in self.normal_form(p)? {
            out = &out + &nf.to_polynomial();
        }
        Ok(out)
    }

    /// Degree of the point class; `a_1 ⋯ a_{n-3}` integrates to 1.
    pub fn integral(&self, p: &Polynomial) -> Result<i64> {
        let top = self.top_degree();
        if let Some(m) = p.terms().map(|(m, _)| m).find(|m| m.degree() != top) {
            return Err(Error::WrongDegree { expected: top, found: m.degree() });
        }
        let v = self.table(top)?.reduce_vec(p)?;
        Ok(v.first().copied().unwrap_or(0))
    }

    pub fn integral_monomial(&self, m: &Monomial) -> Result<i64> {
        let top = self.top_degree();
        if m.degree() != top {
            return Err(Error::WrongDegree { expected: top, found: m.degree() });
        }
        Ok(self.table(top)?.monomial_form(m).first().map_or(0, |e| e.1))
    }

    pub fn rank(&self, d: usize) -> Result<usize> {
        Ok(self.table(d)?.basis().len())
    }
}

pub fn normal_form(p: &Polynomial, n: usize) -> Result<Polynomial> {
    ChowRing::new(n, OrderConvention::default())?.reduce(p)
}

pub fn integral(p: &Polynomial, n: usize) -> Result<i64> {
    ChowRing::new(n, OrderConvention::default())?.integral(p)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GradedOracleReport {
    pub n: usize,
    pub d: usize,
    pub monomials: usize,
    pub relation_rows: usize,
    /// Columns removed up front by single-term unit rows.
    pub killed: usize,
    /// Invariant factors of the relation lattice other than 1.
    pub nontrivial_factors: Vec<String>,
    pub unit_factors: usize,
    pub rank: usize,
    pub torsion_free: bool,
}

/// Every monomial of degree `d` in the generators.
pub fn all_monomials(n: usize, d: usize) -> Vec<Monomial> {
    let gens = crate::index_set::admissible_sets(n);
    let mut alphabet: Vec<Monomial> = (1..=n - 3).map(Monomial::a_var).collect();
    alphabet.extend(gens.into_iter().map(Monomial::d_var));
    let mut out = Vec::new();
    fn rec(alpha: &[Monomial], start: usize, left: usize, cur: Monomial, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(cur);
            return;
        }
        for k in start..alpha.len() {
            rec(alpha, k, left - 1, cur.mul(&alpha[k]), out);
        }
    }
    rec(&alphabet, 0, d, Monomial::one(), &mut out);
    out
}

/// Rank and torsion of degree `d` computed from scratch: the free module on
/// all monomials modulo every relation times every monomial, with no
/// rewriting.
pub fn graded_rank_oracle(n: usize, d: usize, budget: &Budget) -> Result<GradedOracleReport> {
    check_n(n)?;
    let top = n - 3;
    if d > top {
        return Err(Error::DegreeOutOfRange { degree: d, max: top });
    }
    let cols = all_monomials(n, d);
    let index: HashMap<Monomial, u32> = cols.iter().enumerate().map(|(k, m)| (m.clone(), k as u32)).collect();
    let rels = generate_relations_with(n, top, RelationOptions::default())?;
    let mut rows: Vec<SparseVec> = Vec::new();
    let mut lower: HashMap<usize, Vec<Monomial>> = HashMap::new();
    for r in &rels.relations {
        budget.check("oracle rows")?;
        let Some(e) = r.poly.homogeneous_degree() else { continue };
        if e > d {
            continue;
        }
        let ms = lower.entry(d - e).or_insert_with(|| all_monomials(n, d - e));
        for m in ms.iter() {
            let mut row: SparseVec =
                r.poly.terms().map(|(t, c)| (index[&t.mul(m)], c)).collect();
            row.sort_unstable();
            rows.push(row);
        }
    }
    let relation_rows = rows.len();
    let mut killed = vec![false; cols.len()];
    for row in &rows {
        if row.len() == 1 && row[0].1.abs() == 1 {
            killed[row[0].0 as usize] = true;
        }
    }
    let nkilled = killed.iter().filter(|&&k| k).count();
    let mut ech = Echelon::new(cols.len());
    for (k, row) in rows.into_iter().enumerate() {
        if k % 1024 == 0 {
            budget.check("oracle elimination")?;
        }
        let row: SparseVec = row.into_iter().filter(|e| !killed[e.0 as usize]).collect();
        ech.insert(row)?;
    }
    let factors = ech.invariant_factors()?;
    let one = num_bigint::BigInt::from(1);
    let unit_factors = nkilled + factors.iter().filter(|f| **f == one).count();
    let nontrivial: Vec<String> = factors.iter().filter(|f| **f != one).map(|f| f.to_string()).collect();
    Ok(GradedOracleReport {
        n,
        d,
        monomials: cols.len(),
        relation_rows,
        killed: nkilled,
        torsion_free: nontrivial.is_empty(),
        nontrivial_factors: nontrivial,
        unit_factors,
        rank: cols.len() - nkilled - ech.rank(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::Generator;

    fn set(n: usize, e: &[usize]) -> IndexSet {
        IndexSet::new(n, e.iter().copied()).unwrap()
    }

    fn a(i: usize) -> Polynomial {
        Polynomial::generator(Generator::A(i))
    }

    fn d(n: usize, e: &[usize]) -> Polynomial {
        Polynomial::generator(Generator::D(set(n, e)))
    }

    #[test]
    fn canonical_rewrites() {
        let n = 7;
        let m = Monomial::from_parts([(2, 1)], [(set(n, &[1, 2, 3]), 1)]);
        assert_eq!(canonicalize(&m, n).unwrap().render(), "a1*D{1,2,3}");
        let m = Monomial::from_parts([(1, 1), (3, 1)], [(set(n, &[1, 2, 3]), 1)]);
        assert!(canonicalize(&m, n).is_none());
        let m = Monomial::from_parts([(2, 1)], [(set(n, &[2, 3, 5]), 1)]);
        assert!(canonicalize(&m, n).is_none());
        let m = Monomial::from_parts([], [(set(n, &[1, 2, 3]), 1), (set(n, &[2, 3, 4]), 1)]);
        assert!(canonicalize(&m, n).is_none());
        let m = Monomial::from_parts([(1, 2)], []);
        assert!(canonicalize(&m, n).is_none());
    }

    #[test]
    fn small_normal_forms() {
        let r5 = ChowRing::new(5, OrderConvention::default()).unwrap();
        assert_eq!(r5.reduce(&d(5, &[1, 2, 3]).pow(2)).unwrap(), (&a(1) * &a(2)).scale(-1));
        assert_eq!(r5.integral(&d(5, &[1, 2, 3]).pow(2)).unwrap(), -1);
        let r6 = ChowRing::new(6, OrderConvention::default()).unwrap();
        for s in [4, 5, 6] {
            let p = d(6, &[1, 2, 3, s]).pow(3);
            assert_eq!(r6.reduce(&p).unwrap().render(), "a1*a2*a3");
        }
        let p = &(&d(6, &[1, 2, 3, 4]) + &d(6, &[2, 3, 4])).pow(2) + &(&a(2) * &a(3));
        assert!(r6.reduce(&p).unwrap().is_zero());
        assert_eq!(r6.integral(&(&(&a(1) * &a(2)) * &a(3))).unwrap(), 1);
        assert!(r6.integral(&a(1)).is_err());
    }

    #[test]
    fn oracle_small() {
        let b = Budget::unlimited();
        let r = graded_rank_oracle(5, 1, &b).unwrap();
        assert_eq!(r.rank, 5);
        assert!(r.torsion_free);
        assert_eq!(graded_rank_oracle(4, 1, &b).unwrap().rank, 1);
    }
}
