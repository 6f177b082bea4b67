//! Computational tools for global pseudodifferential operators over
//! ultradifferentiable classes defined by a weight function ω.

pub mod calculus;
pub mod entire;
pub mod error;
pub mod function_spaces;
pub mod jet;
pub mod multi_index;
pub mod operators;
pub mod sampling;
pub mod symbols;
pub mod terms;
pub mod weights;

pub use error::{Error, Result};
