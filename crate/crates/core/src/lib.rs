//! Exact computations in the integral Chow ring of the moduli space of
//! stable `n`-pointed genus-zero curves, presented by the classes `a_i` of
//! `(P^1)^(n-3)` and the exceptional divisors `D_I` of the iterated blow-up.
//!
//! ```
//! use m0n_core::{parse_polynomial, ChowRing, OrderConvention};
//!
//! let ring = ChowRing::new(6, OrderConvention::default()).unwrap();
//! let p = parse_polynomial("D{1,2,3,4}^3", 6).unwrap();
//! assert_eq!(ring.reduce(&p).unwrap().render(), "a1*a2*a3");
//! assert_eq!(ring.integral(&p).unwrap(), 1);
//! ```

pub mod budget;
pub mod document;
pub mod error;
pub mod forest;
pub mod index_set;
pub mod keel;
pub mod linalg;
pub mod monomial;
pub mod order;
pub mod pairing;
pub mod parse;
pub mod polynomial;
pub mod reduction;
pub mod relations;
pub mod standard;

pub use budget::Budget;
pub use document::PolynomialDocument;
pub use error::{Error, Result};
pub use forest::{Forest, ForestDocument};
pub use index_set::{admissible_sets, is_admissible, IndexSet};
pub use keel::KeelRing;
pub use monomial::{Generator, Monomial};
pub use order::{monomial_cmp, monomial_less, monomial_much_less, subset_less, OrderConvention};
pub use pairing::{
    pairing_matrix, sign_epsilon, top_product_fast, verify_block_triangular, verify_n20_example,
    PairingReport,
};
pub use parse::parse_polynomial;
pub use polynomial::{poly_mul, Polynomial};
pub use reduction::{
    canonicalize, graded_rank_oracle, integral, normal_form, ChowRing, GradedOracleReport,
    NormalForm, ReductionTable,
};
pub use relations::{
    ambient_class, chern_relation_full, chern_relation_mixed, defining_divisors,
    generate_relations, keel_dictionary, kernel_generators, Family, RelationSet,
};
pub use standard::{dual, enumerate_standard, filtration_p, is_standard, rank, StandardMonomial};
