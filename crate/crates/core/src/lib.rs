//! Numerical laboratory for finite-dimensional Banach lattices with
//! 1-unconditional bases.
//!
//! The crate implements, at desk scale, the homogeneous functional calculus,
//! the p-concavification seminorm, the Fremlin projective tensor norm with
//! two-sided certificates, and the quotient norm on the diagonal of the
//! tensor square, together with the numerical verification that the diagonal
//! of the Fremlin tensor square is lattice-isometric to the
//! 2-concavification.

pub mod calculus;
pub mod concavify;
pub mod diagonal;
pub mod error;
pub mod fremlin;
mod optimize;
pub mod sampling;
pub mod simplex;
pub mod space;
pub mod vector;

pub use calculus::{
    apply_homogeneous, half_power_product, signed_power, signed_power_vec, HomogeneousFunction,
};
pub use concavify::{
    al_trinorm, lower_estimate_constant, odot, oplus, seminorm, seminorm_bruteforce_oracle,
    upper_estimate_constant, verify_estimate_transfer, ConcaveSeminormResult,
    EstimateConstantReport, TransferReport,
};
pub use diagonal::{
    diagonal_map, ioc_residual, quotient_norm_dual, quotient_norm_primal, split_offdiagonal,
    verify_main_isometry, DiagonalElement, IsometryReport, QuotientDualReport,
    QuotientPrimalReport,
};
pub use error::{Error, Result};
pub use fremlin::{
    fremlin_norm, operator_modulus, pairing, regular_norm, tensor_meet_eval, tensor_meet_eval_lp,
    FremlinSolver, NormBracket, RegularOperator, TensorElement,
};
pub use space::{NormFamily, NormedLatticeSpace, SpaceDescriptor};
pub use vector::{is_disjoint, pairwise_disjoint, LatticeVector};
