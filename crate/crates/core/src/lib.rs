//! Coordinate algebras of SU_q(N) and U_q(N), their Schurmann triples and the
//! decomposition of generating functionals along the chain of subgroups
//! SU_q(1) < SU_q(2) < ... < SU_q(N).

pub mod algebra;
pub mod error;
pub mod gauss;
pub mod hopf;
pub mod par;
pub mod repkit;
pub mod schurmann;
pub mod uqn;

pub use error::{QError, QResult};
