//! Period matrices of the pre-t-motives attached to an index and a point.

pub mod index_set;
pub mod psi_tilde;
pub mod system;

pub use index_set::{index_set, predecessor, slice, successor, IdElement};
pub use psi_tilde::{psi_tilde_check, psi_tilde_check_with, PsiTildeReport};
pub use system::{unit_point, EntryResidual, PeriodSystem, ResidualReport, ResidualStatus};
