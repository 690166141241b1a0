//! Finite classical polar spaces over small Galois fields, with exhaustive checks
//! of the incidence properties that characterize the symplectic ones.

pub mod cli;
pub mod derived;
pub mod embed;
pub mod error;
pub mod forms;
pub mod gf;
pub mod hyperbolic;
pub mod hyperplanes;
pub mod linalg;
pub mod props;
pub mod space;

pub use error::{Error, Result};
