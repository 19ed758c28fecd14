//! Bialgebra structure and the calculus of linear functionals.

pub mod battery;
pub mod conv;
pub mod functional;
pub mod generating;
pub mod kernel;
pub mod morphism;
pub mod structure;

pub use battery::{k1_battery, BatterySpec};
pub use conv::{ConvExpConfig, ConvSemigroup};
pub use functional::{Flags, Functional};
pub use generating::{gram, is_generating, min_eig, GeneratingReport};
pub use kernel::{split_k2, K2Term};
pub use morphism::{Morphism, Step};
pub use structure::{
    basis_extension, centered_word, coproduct_iter, counit, counit_exact, directions, eps_prime_exact,
    eps_second_exact, eps_theta, proj_p,
};
