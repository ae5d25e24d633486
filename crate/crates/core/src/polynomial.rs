use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::monomial::{Generator, Monomial};
use crate::order::{monomial_cmp, OrderConvention};

/// Finite integer combination of monomials; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, i64>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::monomial(Monomial::one(), 1)
    }

    pub fn monomial(m: Monomial, c: i64) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, c);
        p
    }

    pub fn generator(g: Generator) -> Self {
        Polynomial::monomial(Monomial::generator(g), 1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, i64)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().checked_add(c).expect("coefficient overflow");
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, i64)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, m: &Monomial) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn scale(&self, k: i64) -> Polynomial {
        if k == 0 {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (m.clone(), c.checked_mul(k).expect("coefficient overflow")))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(t, &c)| (t.mul(m), c)))
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Largest total degree of a term; `None` for the zero polynomial.
    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// The common degree of all terms, if homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Splits into homogeneous components keyed by degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<usize, Polynomial> {
        let mut out: BTreeMap<usize, Polynomial> = BTreeMap::new();
        for (m, &c) in &self.terms {
            out.entry(m.degree()).or_default().add_term(m.clone(), c);
        }
        out
    }

    /// Terms sorted by an external comparator, for presentation.
    pub fn sorted_terms_by<F>(&self, mut cmp: F) -> Vec<(Monomial, i64)>
    where
        F: FnMut(&Monomial, &Monomial) -> std::cmp::Ordering,
    {
        let mut v: Vec<_> = self.terms.iter().map(|(m, &c)| (m.clone(), c)).collect();
        v.sort_by(|x, y| cmp(&x.0, &y.0));
        v
    }

    /// Terms in ascending monomial order.
    pub fn render(&self) -> String {
        self.render_with(OrderConvention::default())
    }

    pub fn render_with(&self, conv: OrderConvention) -> String {
        let terms = self.sorted_terms_by(|x, y| monomial_cmp(x, y, conv));
        render_terms(terms.iter().map(|(m, c)| (m, *c)))
    }
}

/// Renders `c*m` terms in the given order: `2*a1*a2 - D{1,2,3}^2 + 1`.
pub fn render_terms<'a>(terms: impl IntoIterator<Item = (&'a Monomial, i64)>) -> String {
    let mut out = String::new();
    for (k, (m, c)) in terms.into_iter().enumerate() {
        let (sign, abs) = if c < 0 { ("-", c.unsigned_abs()) } else { ("+", c as u64) };
        if k == 0 {
            if sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        if m.is_one() {
            out.push_str(&abs.to_string());
        } else if abs == 1 {
            out.push_str(&m.render());
        } else {
            out.push_str(&format!("{abs}*{}", m.render()));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1.checked_mul(c2).expect("coefficient overflow"));
            }
        }
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

/// Exact distributive product.
pub fn poly_mul(p: &Polynomial, q: &Polynomial) -> Polynomial {
    p * q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index_set::IndexSet;

    fn a(i: usize) -> Polynomial {
        Polynomial::generator(Generator::A(i))
    }

    fn d(n: usize, e: &[usize]) -> Polynomial {
        Polynomial::generator(Generator::D(IndexSet::new(n, e.iter().copied()).unwrap()))
    }

    #[test]
    fn distributive_product() {
        let p = &a(1) + &a(2);
        let q = &a(1) + &a(3);
        let expect = Polynomial::from_terms([
            (Monomial::from_parts([(1, 2)], []), 1),
            (Monomial::from_parts([(1, 1), (3, 1)], []), 1),
            (Monomial::from_parts([(1, 1), (2, 1)], []), 1),
            (Monomial::from_parts([(2, 1), (3, 1)], []), 1),
        ]);
        assert_eq!(poly_mul(&p, &q), expect);
        assert!(poly_mul(&p, &Polynomial::zero()).is_zero());
    }

    #[test]
    fn expansion_before_reduction() {
        let big = d(6, &[1, 2, 3, 4]);
        let lhs = poly_mul(&(&a(1) - &big), &(&a(2) - &big));
        let rhs = &(&(&a(1) * &a(2)) - &(&(&a(1) + &a(2)) * &big)) + &big.pow(2);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.homogeneous_degree(), Some(2));
    }

    #[test]
    fn rendering() {
        let p = &(&a(1) * &a(2)).scale(2) - &d(5, &[1, 2, 3]).pow(2);
        assert_eq!(p.render(), "2*a1*a2 - D{1,2,3}^2");
        assert_eq!(Polynomial::zero().render(), "0");
        assert_eq!(Polynomial::one().scale(-3).render(), "-3");
    }
}
