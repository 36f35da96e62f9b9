//! Formal Laurent series and the algebra `D_q` of q-difference operators:
//! first-order solvers, degree-2 factorization, cyclic modules.

mod cyclic;
mod factor;
mod operator;
mod series;
mod solve;

pub use cyclic::{
    companion_module, dq_quotient_module, fixed_vectors, vectors_agree_below, CyclicModule, CyclicVector, DqQuotient,
    FixedMarker, FixedVector, FixedVectorSearch, SpectrumEntry,
};
pub use factor::{factor_degree2, BranchMarker, FactorPair, FactorSearch};
pub use operator::{monic_normalize, MonicNormalization, QDiffOperator};
pub use series::LaurentSeries;
pub use solve::{first_order_operator, solve_first_order, solve_ramified, verify_annihilation, FirstOrderSolution};
