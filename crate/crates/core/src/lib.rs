//! Numerical tools for mediated tripartite dynamics `A – M – B`: correlation
//! quantifiers, decomposable maps, Trotter products and witnesses that
//! lower-bound how far a dynamics is from any decomposable one.

pub mod error;
mod optim;
pub mod correlations;
pub mod dynamics;
pub mod tensor;
pub mod witness;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
