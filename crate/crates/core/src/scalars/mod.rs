//! Finite fields F_q and polynomials in theta over them.

mod field;
mod poly;

pub use field::{prime_power, FieldDesc, Fq, MAX_ORDER};
pub use poly::{enumerate_monics, monic_count, monic_from_index, PolyTheta};
