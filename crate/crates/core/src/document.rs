//! JSON interchange form of polynomials.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::monomial::Monomial;
use crate::order::{monomial_cmp, OrderConvention};
use crate::polynomial::Polynomial;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DFactor {
    pub set: Vec<usize>,
    pub exp: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDocument {
    pub coeff: i64,
    /// Indices of the a-factors, repeated for powers.
    #[serde(default)]
    pub a: Vec<usize>,
    #[serde(rename = "D", default)]
    pub d: Vec<DFactor>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialDocument {
    pub n: usize,
    pub terms: Vec<TermDocument>,
}

impl PolynomialDocument {
    /// Terms ordered by the monomial order.
    pub fn from_polynomial(p: &Polynomial, n: usize, conv: OrderConvention) -> Self {
        let terms = p
            .sorted_terms_by(|x, y| monomial_cmp(x, y, conv))
            .into_iter()
            .map(|(m, c)| TermDocument {
                coeff: c,
                a: m.a_exponents().flat_map(|(i, e)| std::iter::repeat_n(i, e as usize)).collect(),
                d: m.d_render_order().into_iter().map(|(s, e)| DFactor { set: s.elems(), exp: e }).collect(),
            })
            .collect();
        PolynomialDocument { n, terms }
    }

    pub fn to_polynomial(&self) -> Result<Polynomial> {
        crate::index_set::check_n(self.n)?;
        let mut p = Polynomial::zero();
        for t in &self.terms {
            let mut d = Vec::new();
            for f in &t.d {
                let s = IndexSet::new(self.n, f.set.iter().copied())?;
                if s.len() != f.set.len() {
                    return Err(Error::NotAdmissible(format!("{:?}", f.set)));
                }
                if f.exp == 0 {
                    continue;
                }
                d.push((s, f.exp));
            }
            let m = Monomial::from_parts(t.a.iter().map(|&i| (i, 1)), d);
            m.validate(self.n)?;
            p.add_term(m, t.coeff);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;

    #[test]
    fn roundtrip() {
        let p = parse_polynomial("2*a1*a2 - D{1,2,3}^2 + a1^2*D{2,3,4}", 6).unwrap();
        let doc = PolynomialDocument::from_polynomial(&p, 6, OrderConvention::Asc);
        let text = serde_json::to_string(&doc).unwrap();
        let back: PolynomialDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_polynomial().unwrap(), p);
    }

    #[test]
    fn rejects_bad_sets() {
        let doc = PolynomialDocument {
            n: 6,
            terms: vec![TermDocument { coeff: 1, a: vec![], d: vec![DFactor { set: vec![4, 5, 6], exp: 1 }] }],
        };
        assert!(doc.to_polynomial().is_err());
    }
}
