//! Integer linear algebra for skew-symmetric forms.

mod canonical;
mod groups;
mod matrix;

pub use canonical::{canonical_form, kernel_basis, pfaffian, pfaffian_expansion, CanonicalDecomposition};
pub use groups::{anti_aut_check, coprime_ladder, q_membership, sp_membership, standard_form};
pub use matrix::{IntMatrix, SkewMatrix};
