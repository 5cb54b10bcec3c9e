//! Tensor-product operator algebra.

mod operator;
mod space;
mod sparse;

pub use operator::{basis_ket, embed, embed_named, local_operator, Ket, LocalOp, Operator};
pub use space::{CompositeSpace, SubsystemKind, SubsystemSpec};
pub use sparse::SparseMatrix;
