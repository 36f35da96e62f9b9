//! Quasi polynomial algebras `A_q[H]` and quasi Laurent polynomial algebras
//! `L_q[H]` with normal-ordered arithmetic.

mod derivation;
mod element;
mod presentation;
mod structure;

pub use derivation::{apply_derivation, QDerivation};
pub use element::AlgebraElement;
pub use presentation::{AlgebraKind, Presentation};
pub use structure::{
    factorization_data, graded_degree, step_operators, transport, FactorizationData, GeneratorPair, StepTriple,
};
