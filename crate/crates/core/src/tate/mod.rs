//! Power series in t over the Laurent field, twisting, and the special
//! functions Omega and pi~.

mod ktpoly;
mod omega;
mod series;

pub use ktpoly::KtPoly;
pub use omega::{carlitz_pi, omega, omega_at_theta, omega_functional_check, omega_uniform, pi_reciprocal_check, OmegaReport};
pub use series::{required_t, SeriesPrecision, TSeries, Tail};
