//! Lie-algebra data, the symmetric tensor spaces `W_beta` over `V = k ⊗ R^3`,
//! the product/splitting combinatorics between them, and the quadratic and
//! cubic nonlinearity coefficient tensors.

mod lie;
mod nonlin;
mod wbasis;

pub use lie::LieData;
pub use nonlin::{nonlin_tensors, NonlinTensors};
pub use wbasis::{dim_space, product_iso, split_triples, WBasis, WBasisElem};
