//! Exact symbolic layer.

pub mod catalog;
pub mod det;
pub mod elt;
pub mod gen;
pub mod normal;
pub mod parse;
pub mod qcoeff;

pub use catalog::{relation_catalog, Relation};
pub use det::{inversions, permutations, quantum_determinant, quantum_minor, twisted_determinant};
pub use elt::AlgElt;
pub use gen::{Ctx, GenSym, QPoint, Variant, Word};
pub use normal::{
    adjoint_expand, check_confluence, equals_exact, is_zero_exact, normal_form, normal_form_with, reduce,
    Equality, Reduced, Strategy,
};
pub use parse::parse_elt;
pub use qcoeff::{Gq, LPoly, QCoeff};
