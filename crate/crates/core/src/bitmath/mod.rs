//! GF(2) linear algebra on bit-packed vectors and matrices, plus GF(2^m)
//! arithmetic used to build extended BCH codes.

mod bitvec;
mod gf2m;
mod matrix;

pub use bitvec::BitVec;
pub use gf2m::{gf2m_mul, GF2mField, PRIMITIVE_POLYNOMIALS};
pub use matrix::{BitMatrix, Rref};

/// Row rank of `mat` over GF(2).
pub fn rank(mat: &BitMatrix) -> usize {
    mat.rank()
}

/// Reduced row echelon form and pivot columns of `mat`.
pub fn rref(mat: &BitMatrix) -> Rref {
    mat.rref()
}

/// Basis of `{x : mat · xᵀ = 0}`.
pub fn kernel_basis(mat: &BitMatrix) -> BitMatrix {
    mat.kernel_basis()
}
