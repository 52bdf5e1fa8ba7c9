//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision scalars: Smith and Hermite
//! normal forms, ranks and determinants, lattice bases of kernels and images,
//! Gram determinants (squared covolumes), and cokernel torsion orders.

mod lattice;
mod matrix;
mod snf;

pub use lattice::{
    column_hnf, gram_determinant, image_lattice_basis, inclusion_index, kernel_lattice_basis,
    saturate, LatticeBasis,
};
pub use matrix::{dot, dot_weighted, IntMatrix, RatMatrix};
pub use snf::{rank, snf, torsion_order_cokernel, SnfResult};
