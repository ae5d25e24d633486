//! Generators and monomials of the free presentation ring
//! `R = Z[a_i, D_I]`.

use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::index_set::IndexSet;

/// A degree-one generator: `a_i` (`1 <= i <= n-3`) or `D_I` (`I` admissible).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    A(usize),
    D(IndexSet),
}

impl Generator {
    pub fn a(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i + 3 > n {
            return Err(Error::IndexOutOfRange { index: i, n: n - 3 });
        }
        Ok(Generator::A(i))
    }

    pub fn d(set: IndexSet) -> Result<Self> {
        if !set.is_admissible() {
            return Err(Error::NotAdmissible(set.render()));
        }
        Ok(Generator::D(set))
    }

    pub fn degree(&self) -> usize {
        1
    }

    pub fn render(&self) -> String {
        match self {
            Generator::A(i) => format!("a{i}"),
            Generator::D(s) => format!("D{}", s.render()),
        }
    }
}

/// A monomial `a(v) · D(v)`. Exponents are unrestricted; whether a
/// monomial is standard is a separate predicate.
///
/// Storage order: `a` ascending by index, `d` ascending by raw bitmask.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Monomial {
    a: SmallVec<[(u8, u32); 4]>,
    d: SmallVec<[(IndexSet, u32); 4]>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn generator(g: Generator) -> Self {
        let mut m = Monomial::one();
        m.mul_generator(g, 1);
        m
    }

    pub fn a_var(i: usize) -> Self {
        Monomial::generator(Generator::A(i))
    }

    pub fn d_var(set: IndexSet) -> Self {
        Monomial::generator(Generator::D(set))
    }

    /// Builds a monomial from explicit parts, merging repeated factors.
    pub fn from_parts(
        a: impl IntoIterator<Item = (usize, u32)>,
        d: impl IntoIterator<Item = (IndexSet, u32)>,
    ) -> Self {
        let mut m = Monomial::one();
        for (i, e) in a {
            m.mul_generator(Generator::A(i), e);
        }
        for (s, e) in d {
            m.mul_generator(Generator::D(s), e);
        }
        m
    }

    /// Square-free product of `a_i` over the elements of `support`.
    pub fn a_product(support: &IndexSet) -> Self {
        Monomial::from_parts(support.iter().map(|i| (i, 1)), [])
    }

    pub fn mul_generator(&mut self, g: Generator, e: u32) {
        if e == 0 {
            return;
        }
        match g {
            Generator::A(i) => {
                let i = i as u8;
                match self.a.binary_search_by_key(&i, |p| p.0) {
                    Ok(k) => self.a[k].1 += e,
                    Err(k) => self.a.insert(k, (i, e)),
                }
            }
            Generator::D(s) => match self.d.binary_search_by_key(&s, |p| p.0) {
                Ok(k) => self.d[k].1 += e,
                Err(k) => self.d.insert(k, (s, e)),
            },
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.clone();
        for &(i, e) in &other.a {
            out.mul_generator(Generator::A(i as usize), e);
        }
        for &(s, e) in &other.d {
            out.mul_generator(Generator::D(s), e);
        }
        out
    }

    pub fn degree(&self) -> usize {
        self.a_degree() + self.d_degree()
    }

    pub fn a_degree(&self) -> usize {
        self.a.iter().map(|p| p.1 as usize).sum()
    }

    pub fn d_degree(&self) -> usize {
        self.d.iter().map(|p| p.1 as usize).sum()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_empty() && self.d.is_empty()
    }

    /// `(i, exponent)` pairs, ascending in `i`.
    pub fn a_exponents(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.a.iter().map(|&(i, e)| (i as usize, e))
    }

    /// `(I, exponent)` pairs in storage order.
    pub fn d_exponents(&self) -> impl Iterator<Item = (IndexSet, u32)> + '_ {
        self.d.iter().copied()
    }

    pub fn d_sets(&self) -> impl Iterator<Item = IndexSet> + '_ {
        self.d.iter().map(|p| p.0)
    }

    pub fn a_exp(&self, i: usize) -> u32 {
        self.a.iter().find(|p| p.0 as usize == i).map_or(0, |p| p.1)
    }

    pub fn d_exp(&self, s: &IndexSet) -> u32 {
        self.d.binary_search_by_key(s, |p| p.0).map_or(0, |k| self.d[k].1)
    }

    pub fn is_a_square_free(&self) -> bool {
        self.a.iter().all(|p| p.1 == 1)
    }

    /// Support of the a-part as an index set over `n`.
    pub fn a_support(&self, n: usize) -> IndexSet {
        IndexSet::new(n, self.a.iter().map(|p| p.0 as usize)).expect("a-index in range")
    }

    /// `a(v)`.
    pub fn a_part(&self) -> Monomial {
        Monomial { a: self.a.clone(), d: SmallVec::new() }
    }

    /// `D(v)`.
    pub fn d_part(&self) -> Monomial {
        Monomial { a: SmallVec::new(), d: self.d.clone() }
    }

    /// `(a(v), D(v))`.
    pub fn split(&self) -> (Monomial, Monomial) {
        (self.a_part(), self.d_part())
    }

    pub fn with_a_part(&self, a: &Monomial) -> Monomial {
        Monomial { a: a.a.clone(), d: self.d.clone() }
    }

    pub fn generators(&self) -> impl Iterator<Item = (Generator, u32)> + '_ {
        self.a
            .iter()
            .map(|&(i, e)| (Generator::A(i as usize), e))
            .chain(self.d.iter().map(|&(s, e)| (Generator::D(s), e)))
    }

    /// D-factors in rendering order: larger sets first, equal sizes by the
    /// subset order.
    pub fn d_render_order(&self) -> Vec<(IndexSet, u32)> {
        let mut d: Vec<_> = self.d.to_vec();
        d.sort_by(|x, y| y.0.len().cmp(&x.0.len()).then_with(|| x.0.cmp_order(&y.0)));
        d
    }

    /// Canonical text form, e.g. `a1*a3*D{1,2,3,4}^2*D{1,2,4}`; the empty
    /// product renders as `1`.
    pub fn render(&self) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for &(i, e) in &self.a {
            parts.push(power(format!("a{i}"), e));
        }
        for (s, e) in self.d_render_order() {
            parts.push(power(format!("D{}", s.render()), e));
        }
        parts.join("*")
    }

    /// Checks every generator is legal for `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        for &(i, _) in &self.a {
            let i = i as usize;
            if i == 0 || i + 3 > n {
                return Err(Error::IndexOutOfRange { index: i, n: n.saturating_sub(3) });
            }
        }
        for &(s, _) in &self.d {
            if s.n() != n || !s.is_admissible() {
                return Err(Error::NotAdmissible(s.render()));
            }
        }
        Ok(())
    }
}

fn power(base: String, e: u32) -> String {
    if e == 1 {
        base
    } else {
        format!("{base}^{e}")
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
