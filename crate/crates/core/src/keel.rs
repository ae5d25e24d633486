//! Independent oracle: the ring generated by all boundary divisors modulo
//! the four-point relations and products of crossing divisors.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::index_set::{check_n, IndexSet};
use crate::linalg::{Echelon, SparseVec};
use crate::monomial::Monomial;
use crate::polynomial::Polynomial;
use crate::relations::{keel_dictionary, normalized_boundary_sets, KeelDictionary};
use crate::standard::for_each_exponents;

/// Degree-`d` part of the boundary ring.
#[derive(Clone, Debug)]
pub struct KeelDegree {
    n: usize,
    d: usize,
    columns: Vec<Monomial>,
    index: HashMap<Monomial, u32>,
    lattice: Echelon,
}

#[derive(Clone, Debug, Serialize)]
pub struct KeelReport {
    pub n: usize,
    pub d: usize,
    pub monomials: usize,
    pub relation_rows: usize,
    pub rank: usize,
    pub torsion_free: bool,
}

/// Products of pairwise nested-or-disjoint boundary divisors of degree `d`.
pub fn laminar_boundary_monomials(n: usize, d: usize) -> Vec<Monomial> {
    let sets = normalized_boundary_sets(n);
    let mut out = Vec::new();
    fn rec(
        sets: &[IndexSet],
        start: usize,
        left: usize,
        cur: &mut Vec<IndexSet>,
        out: &mut Vec<Vec<IndexSet>>,
    ) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for j in start..sets.len() {
            if cur.iter().all(|c| c.is_compatible(&sets[j])) {
                cur.push(sets[j]);
                rec(sets, j + 1, left - 1, cur, out);
                cur.pop();
            }
        }
    }
    let mut fams = Vec::new();
    rec(&sets, 0, d, &mut Vec::new(), &mut fams);
    for fam in fams {
        if fam.len() > d || (fam.is_empty() && d > 0) {
            continue;
        }
        let lo = vec![1u32; fam.len()];
        let hi = vec![d as u32; fam.len()];
        for_each_exponents(&lo, &hi, d as u32, &mut |e| {
            out.push(Monomial::from_parts([], fam.iter().copied().zip(e.iter().copied())));
        });
    }
    out
}

fn laminar(m: &Monomial) -> bool {
    let sets: Vec<IndexSet> = m.d_sets().collect();
    sets.iter().enumerate().all(|(k, s)| sets[..k].iter().all(|t| t.is_compatible(s)))
}

impl KeelDegree {
    pub fn build(n: usize, d: usize, budget: &Budget) -> Result<Self> {
        check_n(n)?;
        if n < 4 || d > n - 3 {
            return Err(Error::DegreeOutOfRange { degree: d, max: n.saturating_sub(3) });
        }
        let dict = keel_dictionary(n)?;
        let columns = laminar_boundary_monomials(n, d);
        let index: HashMap<Monomial, u32> =
            columns.iter().enumerate().map(|(k, m)| (m.clone(), k as u32)).collect();
        let mut lattice = Echelon::new(columns.len());
        if d > 0 {
            let lower = laminar_boundary_monomials(n, d - 1);
            for rel in &dict.four_point {
                budget.check("boundary ring")?;
                for m in &lower {
                    let mut acc: HashMap<u32, i64> = HashMap::new();
                    for (t, c) in rel.terms() {
                        let x = t.mul(m);
                        if laminar(&x) {
                            *acc.entry(index[&x]).or_insert(0) += c;
                        }
                    }
                    let mut row: SparseVec = acc.into_iter().filter(|e| e.1 != 0).collect();
                    row.sort_unstable();
                    lattice.insert(row)?;
                }
            }
        }
        Ok(KeelDegree { n, d, columns, index, lattice })
    }

    pub fn rank(&self) -> usize {
        self.columns.len() - self.lattice.rank()
    }

    pub fn torsion_free(&self) -> Result<bool> {
        Ok(self.lattice.invariant_factors()?.iter().all(|f| *f == BigInt::from(1)))
    }

    pub fn report(&self) -> Result<KeelReport> {
        Ok(KeelReport {
            n: self.n,
            d: self.d,
            monomials: self.columns.len(),
            relation_rows: self.lattice.rank(),
            rank: self.rank(),
            torsion_free: self.torsion_free()?,
        })
    }

    /// Whether a homogeneous boundary polynomial of this degree vanishes.
    pub fn vanishes(&self, p: &Polynomial) -> Result<bool> {
        let mut acc: HashMap<u32, i64> = HashMap::new();
        for (m, c) in p.terms() {
            if m.degree() != self.d || m.a_degree() != 0 {
                return Err(Error::WrongDegree { expected: self.d, found: m.degree() });
            }
            if laminar(m) {
                *acc.entry(self.index[m]).or_insert(0) += c;
            }
        }
        let mut v: SparseVec = acc.into_iter().filter(|e| e.1 != 0).collect();
        v.sort_unstable();
        self.lattice.contains(&v)
    }
}

/// The boundary ring in all degrees, plus the dictionary.
#[derive(Clone, Debug)]
pub struct KeelRing {
    pub dict: KeelDictionary,
    degrees: Vec<KeelDegree>,
}

impl KeelRing {
    pub fn new(n: usize, budget: &Budget) -> Result<Self> {
        let dict = keel_dictionary(n)?;
        let degrees = (0..=n - 3).map(|d| KeelDegree::build(n, d, budget)).collect::<Result<_>>()?;
        Ok(KeelRing { dict, degrees })
    }

    pub fn degree(&self, d: usize) -> &KeelDegree {
        &self.degrees[d]
    }

    /// Does a presentation polynomial map to zero?
    pub fn kills(&self, p: &Polynomial) -> Result<bool> {
        let image = self.dict.to_boundary(p);
        for (d, part) in image.homogeneous_parts() {
            if d < self.degrees.len() && !self.degrees[d].vanishes(&part)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_match_known_values() {
        let b = Budget::unlimited();
        let r: Vec<usize> = (0..=1).map(|d| KeelDegree::build(4, d, &b).unwrap().rank()).collect();
        assert_eq!(r, [1, 1]);
        let r: Vec<usize> = (0..=2).map(|d| KeelDegree::build(5, d, &b).unwrap().rank()).collect();
        assert_eq!(r, [1, 5, 1]);
    }
}
