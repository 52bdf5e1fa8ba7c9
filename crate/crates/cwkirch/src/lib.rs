//! Exact-arithmetic toolkit for Kirchhoff-type theorems on finite CW complexes.
//!
//! A CW complex is represented purely by its integer boundary matrices
//! `D_1, ..., D_d` (one per degree) together with optional positive rational
//! cell weights (resistances). On top of that representation the crate
//! provides:
//!
//! * exact integer/rational linear algebra in [`linalg`]: Smith and Hermite
//!   normal forms, lattice bases, Gram determinants,
//! * higher-dimensional spanning trees and their invariants in [`trees`],
//! * the resistive network problem and the spanning-tree projection
//!   formula in [`network`],
//! * weighted restricted Laplacians and matrix-tree identities in
//!   [`matrix_tree`],
//! * squared Reidemeister torsion by four independent methods in [`torsion`],
//! * a structured document format and a bundled example corpus in [`doc`]
//!   and [`corpus`].
//!
//! Everything is computed over arbitrary-precision integers and rationals;
//! there is no floating point anywhere in this crate. All identities checked
//! by the verification routines are exact equalities of rationals.
//!
//! ```
//! use cwkirch::corpus;
//! use cwkirch::matrix_tree::{verify_matrix_tree, WeightAssignment};
//! use cwkirch::torsion::torsion_report;
//!
//! // det L = gamma_X * sum over spanning trees, as an exact identity
//! let k4 = corpus::k4();
//! let report = verify_matrix_tree(&k4, &WeightAssignment::ones(&k4));
//! assert!(report.passed());
//! assert_eq!(report.lhs.to_string(), "64");
//!
//! // squared torsion of the projective plane, four ways
//! let rp2 = corpus::rp2_min();
//! let torsion = torsion_report(&rp2, None, None, None).unwrap();
//! assert!(torsion.agree());
//! assert_eq!(torsion.tau2().to_string(), "1/4");
//! ```

#![forbid(unsafe_code)]

pub mod complex;
pub mod corpus;
pub mod doc;
pub mod linalg;
pub mod matrix_tree;
pub mod network;
pub mod torsion;
pub mod trees;

mod error;

pub use error::Error;

/// Arbitrary-precision integer used throughout the crate.
pub type Int = num_bigint::BigInt;

/// Arbitrary-precision rational used throughout the crate.
pub type Rat = num_rational::BigRational;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Parses an exact rational from `"p/q"` or `"n"` form.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: Int = num.parse().map_err(|_| Error::BadRational(s.to_string()))?;
    let den: Int = den.parse().map_err(|_| Error::BadRational(s.to_string()))?;
    if den == Int::from(0) {
        return Err(Error::BadRational(s.to_string()));
    }
    Ok(Rat::new(num, den))
}
