//! The pairing `A^d × A^{n-3-d} → Z` on standard monomials and their duals,
//! the sign formula for maximal D-products, and the structural checks on
//! the pairing matrix.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forest::Forest;
use crate::index_set::IndexSet;
use crate::linalg::bareiss_determinant;
use crate::monomial::Monomial;
use crate::order::{cmp_d_parts, OrderConvention};
use crate::polynomial::Polynomial;
use crate::reduction::{canonicalize, ChowRing};
use crate::standard::{d_forest, StandardMonomial};

/// `(-1)^ε` with `ε = |⋃ I_r| + Σ deg(i)`.
pub fn sign_epsilon(f: &Forest) -> i64 {
    if f.epsilon().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Evaluates `f · D` for a D-part in maximal-exponent form without general
/// reduction: `(-1)^ε · f · ∏_{i ∉ S, i ≤ n-3} a_i`.
pub fn top_product_fast(f: &Polynomial, d: &Monomial, n: usize) -> Result<Polynomial> {
    let (forest, exps) =
        d_forest(d, n).ok_or_else(|| Error::NotMaximalExponents(d.render()))?;
    if d.a_degree() != 0 {
        return Err(Error::NotMaximalExponents(d.render()));
    }
    for (i, &e) in exps.iter().enumerate() {
        if e as usize != forest.slack(i) - 1 {
            return Err(Error::NotMaximalExponents(d.render()));
        }
    }
    let s = forest.support_s();
    let need = (n - 3)
        - forest.roots().iter().map(|&r| forest.vertex(r).len() - 1).sum::<usize>();
    let outside = IndexSet::ordinary(n).difference(&s);
    let tail = Monomial::a_product(&outside);
    let sign = sign_epsilon(&forest);
    let mut out = Polynomial::zero();
    for (m, c) in f.terms() {
        if m.d_degree() != 0 || m.degree() != need || !m.a_support(n).is_subset(&s) {
            return Err(Error::WrongDegree { expected: need, found: m.degree() });
        }
        if m.is_a_square_free() {
            out.add_term(m.mul(&tail), c * sign);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub row: usize,
    pub col: usize,
    pub value: i64,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingReport {
    pub n: usize,
    pub d: usize,
    pub convention: OrderConvention,
    pub basis: Vec<String>,
    pub duals: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
    /// Start index of each run of equal D-parts in the basis.
    pub blocks: Vec<usize>,
    pub diagonal_signs: Vec<i64>,
    pub determinant: String,
    pub block_lower_zero: bool,
    pub diag_plus_minus_identity: bool,
    pub unimodular: bool,
    pub counterexamples: Vec<Counterexample>,
}

impl PairingReport {
    pub fn passed(&self) -> bool {
        self.block_lower_zero && self.diag_plus_minus_identity && self.unimodular
    }

    pub fn sign_counts(&self) -> (usize, usize) {
        let plus = self.diagonal_signs.iter().filter(|&&s| s == 1).count();
        (plus, self.diagonal_signs.len() - plus)
    }

    /// Checks the matrix is `P · diag(±1) · P^T` for a permutation `P`
    /// with the given sign counts.
    pub fn permutation_similar_to_signs(&self, plus: usize, minus: usize) -> bool {
        let m = &self.matrix;
        let size = m.len();
        if size != plus + minus {
            return false;
        }
        let mut p = 0;
        for (i, row) in m.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if i != j && x != 0 {
                    return false;
                }
            }
            match row[i] {
                1 => p += 1,
                -1 => {}
                _ => return false,
            }
        }
        p == plus
    }
}

/// `∫ v_i · v_j^*` for all pairs of degree-`d` standard monomials.
pub fn pairing_matrix(ring: &ChowRing, d: usize) -> Result<PairingReport> {
    let n = ring.n();
    let conv = ring.convention();
    let basis: Vec<StandardMonomial> = ring.table(d)?.basis().to_vec();
    let duals: Vec<StandardMonomial> = basis.iter().map(|v| v.dual()).collect();
    let top = ring.table(ring.top_degree())?;
    let matrix: Vec<Vec<i64>> = basis
        .par_iter()
        .map(|v| {
            duals
                .iter()
                .map(|w| {
                    let m = v.monomial().mul(w.monomial());
                    top.monomial_form(&m).first().map_or(0, |e| e.1)
                })
                .collect()
        })
        .collect();
    Ok(assemble(n, d, conv, &basis, &duals, matrix))
}

fn assemble(
    n: usize,
    d: usize,
    conv: OrderConvention,
    basis: &[StandardMonomial],
    duals: &[StandardMonomial],
    matrix: Vec<Vec<i64>>,
) -> PairingReport {
    let size = basis.len();
    let mut blocks = Vec::new();
    for i in 0..size {
        if i == 0 || basis[i].monomial().d_part() != basis[i - 1].monomial().d_part() {
            blocks.push(i);
        }
    }
    let mut counterexamples = Vec::new();
    let mut block_lower_zero = true;
    let mut diag_ok = true;
    for i in 0..size {
        for j in 0..size {
            let x = matrix[i][j];
            let (vi, vj) = (basis[i].monomial(), basis[j].monomial());
            match cmp_d_parts(vi, vj, conv) {
                Ordering::Less if x != 0 => {
                    block_lower_zero = false;
                    counterexamples.push(Counterexample {
                        row: i,
                        col: j,
                        value: x,
                        detail: format!("D({vi}) < D({vj}) but {vi} * ({}) = {x}", duals[j].monomial()),
                    });
                }
                Ordering::Equal => {
                    let want = if i == j {
                        let prod = vi.d_part().mul(&duals[i].monomial().d_part());
                        let (f, _) = d_forest(&prod, n).expect("laminar");
                        sign_epsilon(&f)
                    } else {
                        0
                    };
                    if x != want {
                        diag_ok = false;
                        counterexamples.push(Counterexample {
                            row: i,
                            col: j,
                            value: x,
                            detail: format!("diagonal block entry expected {want}"),
                        });
                    }
                }
                _ => {}
            }
        }
    }
    counterexamples.truncate(20);
    let det = bareiss_determinant(&matrix);
    let unimodular = det == 1.into() || det == (-1).into();
    PairingReport {
        n,
        d,
        convention: conv,
        basis: basis.iter().map(|v| v.monomial().render()).collect(),
        duals: duals.iter().map(|v| v.monomial().render()).collect(),
        diagonal_signs: (0..size).map(|i| matrix[i][i]).collect(),
        matrix,
        blocks,
        determinant: det.to_string(),
        block_lower_zero,
        diag_plus_minus_identity: diag_ok,
        unimodular,
        counterexamples,
    }
}

/// Certification summary of a report.
#[derive(Clone, Debug, Serialize)]
pub struct Certification {
    pub block_lower_zero: bool,
    pub diag_plus_minus_identity: bool,
    pub unimodular: bool,
    pub counterexamples: Vec<Counterexample>,
}

pub fn verify_block_triangular(r: &PairingReport) -> Certification {
    Certification {
        block_lower_zero: r.block_lower_zero,
        diag_plus_minus_identity: r.diag_plus_minus_identity,
        unimodular: r.unimodular,
        counterexamples: r.counterexamples.clone(),
    }
}

/// The two twenty-point monomials of the worked example.
pub fn n20_example_monomials() -> (StandardMonomial, StandardMonomial) {
    let n = 20;
    let set = |e: &[usize]| IndexSet::new(n, e.iter().copied()).unwrap();
    let i1: Vec<usize> = (1..=11).collect();
    let v1 = Monomial::from_parts(
        [],
        [(set(&i1), 1), (set(&[1, 2, 3]), 1), (set(&[4, 5, 6]), 1), (set(&[7, 8, 9]), 1)],
    );
    let v2 = Monomial::from_parts([(11, 1)], [(set(&[12, 13, 18]), 1), (set(&[14, 15, 19]), 1), (set(&[16, 17, 20]), 1)]);
    (StandardMonomial::new(v1, n).unwrap(), StandardMonomial::new(v2, n).unwrap())
}

#[derive(Clone, Debug, Serialize)]
pub struct N20Report {
    pub v1: String,
    pub v2: String,
    pub v1_dual: String,
    pub v2_dual: String,
    pub product_vanishes: bool,
}

/// `v_1 · v_2^* = 0` for the twenty-point example, by kernel rewriting.
pub fn verify_n20_example() -> N20Report {
    let (v1, v2) = n20_example_monomials();
    let w = v2.dual();
    let prod = v1.monomial().mul(w.monomial());
    N20Report {
        v1: v1.monomial().render(),
        v2: v2.monomial().render(),
        v1_dual: v1.dual().monomial().render(),
        v2_dual: w.monomial().render(),
        product_vanishes: canonicalize(&prod, 20).is_none(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::Generator;

    fn set(n: usize, e: &[usize]) -> IndexSet {
        IndexSet::new(n, e.iter().copied()).unwrap()
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(sign_epsilon(&Forest::build(5, &[set(5, &[1, 2, 3])]).unwrap()), -1);
        assert_eq!(sign_epsilon(&Forest::build(6, &[set(6, &[1, 2, 3, 4])]).unwrap()), 1);
    }

    #[test]
    fn fast_products() {
        let dm = |n: usize, e: &[usize], k: u32| Monomial::from_parts([], [(set(n, e), k)]);
        let one = Polynomial::one();
        assert_eq!(top_product_fast(&one, &dm(6, &[1, 2, 3, 4], 3), 6).unwrap().render(), "a1*a2*a3");
        assert_eq!(top_product_fast(&one, &dm(5, &[1, 2, 3], 2), 5).unwrap().render(), "-a1*a2");
        let a1 = Polynomial::generator(Generator::A(1));
        assert_eq!(top_product_fast(&a1, &dm(6, &[1, 2, 3], 2), 6).unwrap().render(), "-a1*a2*a3");
        assert!(top_product_fast(&one, &dm(6, &[1, 2, 3, 4], 2), 6).is_err());
    }

    #[test]
    fn n20_example() {
        let r = verify_n20_example();
        assert!(r.product_vanishes);
    }
}
