//! Schurmann triples: cocycles, the two evaluation routes for generating
//! functionals, the level-by-level assembly and finite GNS data.

pub mod cocycle;
pub mod counter;
pub mod gns;
pub mod hunt;
pub mod plimit;
pub mod psi;

pub use gns::{gns_build, GnsData, IntertwinerReport};
pub use cocycle::{coboundary, cocycle_from_eta_nn, gaussian_cocycle, h_pi_norm, Cocycle, Method, Origin};
pub use counter::{counterexample_n3, recursion_oracle, CounterReport, Oracle};
pub use hunt::{hunt_decompose, EtaSpec, HuntDecomposition, HuntLevel, HuntOptions, LevelSummary};
pub use plimit::{romberg, romberg_scalar, Schedule, Trace};
pub use psi::{projection_defect, triple_check, PsiExact, PsiPLimit, PsiValue, TripleReport};
