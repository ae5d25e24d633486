//! Total order on monomials of the presentation ring.
//!
//! D-parts are compared by their exponent vectors over the admissible sets,
//! scanned in subset order; the first set where the exponents differ decides
//! and the smaller exponent gives the smaller monomial. The scan direction is
//! a parameter ([`OrderConvention`]). Ties on the D-part fall back to a fixed
//! order on a-monomials.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::index_set::IndexSet;
use crate::monomial::Monomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OrderConvention {
    /// Scan from the largest subset down.
    Desc,
    /// Scan from the smallest subset up.
    #[default]
    Asc,
}

impl OrderConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            OrderConvention::Desc => "desc",
            OrderConvention::Asc => "asc",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "desc" => Some(OrderConvention::Desc),
            "asc" => Some(OrderConvention::Asc),
            _ => None,
        }
    }
}

/// Compares only the D-parts.
pub fn cmp_d_parts(v1: &Monomial, v2: &Monomial, conv: OrderConvention) -> Ordering {
    let mut sets: Vec<IndexSet> = v1.d_sets().chain(v2.d_sets()).collect();
    sets.sort_by(|x, y| x.cmp_order(y));
    sets.dedup();
    if conv == OrderConvention::Desc {
        sets.reverse();
    }
    for s in sets {
        match v1.d_exp(&s).cmp(&v2.d_exp(&s)) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// The fixed order on a-monomials: lexicographic on the sorted support,
/// then total degree, then the exponent sequence.
pub fn cmp_a_parts(v1: &Monomial, v2: &Monomial) -> Ordering {
    let s1: Vec<usize> = v1.a_exponents().map(|p| p.0).collect();
    let s2: Vec<usize> = v2.a_exponents().map(|p| p.0).collect();
    s1.cmp(&s2)
        .then_with(|| v1.a_degree().cmp(&v2.a_degree()))
        .then_with(|| {
            let e1: Vec<u32> = v1.a_exponents().map(|p| p.1).collect();
            let e2: Vec<u32> = v2.a_exponents().map(|p| p.1).collect();
            e1.cmp(&e2)
        })
}

pub fn monomial_cmp(v1: &Monomial, v2: &Monomial, conv: OrderConvention) -> Ordering {
    cmp_d_parts(v1, v2, conv).then_with(|| cmp_a_parts(v1, v2))
}

pub fn monomial_less(v1: &Monomial, v2: &Monomial, conv: OrderConvention) -> bool {
    monomial_cmp(v1, v2, conv) == Ordering::Less
}

/// `v1 ≪ v2`: `v1 < D_I` for every `D_I` dividing `v2`.
pub fn monomial_much_less(v1: &Monomial, v2: &Monomial, conv: OrderConvention) -> bool {
    v2.d_sets().all(|s| monomial_less(v1, &Monomial::d_var(s), conv))
}

pub fn subset_less(i: &IndexSet, j: &IndexSet) -> bool {
    i.order_less(j)
}
