//! Exact cohomology tables of sums of line bundles and twisted exterior
//! powers of the cotangent bundle on projective space, and the splitting
//! type of their Frobenius pushforwards.

pub mod beilinson;
pub mod bundle;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod exact_arith;
pub mod frobenius;
pub mod oracles;
pub mod splitting;

pub use bundle::{FormalBundle, Summand};
pub use cohomology::{CohomologyTable, HSet, Window};
pub use error::{Error, Result};
pub use exact_arith::Scalar;
pub use splitting::{Decomposition, PushforwardReport};

/// Default exact integer.
pub type Int = num_bigint::BigInt;
/// Cohomology table over [`Int`].
pub type Table = CohomologyTable<Int>;
/// Decomposition over [`Int`].
pub type Decomp = Decomposition<Int>;
