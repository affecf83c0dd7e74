//! Special values: Carlitz constants, power sums, multiple zeta values,
//! Carlitz multiple polylogarithms and their t-deformations.

pub mod at_poly;
pub mod carlitz;
pub mod cmpl;
mod index;
pub mod lseries;
pub mod mzv;
pub mod power_sum;

pub use at_poly::at_polynomial;
pub use carlitz::{carlitz_constants, carlitz_d, carlitz_ell, carlitz_gamma, carlitz_l, CarlitzConstants};
pub use cmpl::{cmpl_eval, within_norm_bound};
pub use index::Index;
pub use lseries::{lseries_build, lseries_recursion_check, lseries_recursion_check_with, lseries_value_at_theta, scalar_point, RecursionReport, TPoint};
pub use mzv::{mzv_bruteforce, mzv_fast, mzv_fast_with, zeta};
pub use power_sum::{power_sum, power_sum_with, PowerSumMethod};
