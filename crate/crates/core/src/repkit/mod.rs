//! Numerical *-representations on truncated Hilbert spaces.

pub mod decompose;
pub mod export;
pub mod keylemma;
pub mod op;
pub mod rep;

pub use decompose::{decompose, eigen_one_symmetry, maximal_gaussian_subspace, projector_distance, Decomposition, Dense, Level};
pub use keylemma::{engineered_contraction, key_lemma_limit, KeyLemmaReport};
pub use op::{Op, Vector, C};
pub use rep::{MatRep, Residual, DEEP};
