//! Exact computation in quasi polynomial algebras: scalars in `Q(q)`, skew
//! integer forms, normal-ordered algebra elements, torus-type automorphisms,
//! simple modules of the quantum plane and q-difference operators.

pub mod automorphism;
pub mod error;
pub mod intlinalg;
pub mod qalgebra;
pub mod qdiff;
pub mod qscalar;
pub mod repn;

pub use error::{Error, Result};
