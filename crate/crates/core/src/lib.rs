//! Ergodic theory of diagonal-orthogonal-covariant channels and the dual
//! unitary brickwork circuits built from them.

pub mod brickwork;
pub mod digraph;
pub mod doc;
mod eigen;
pub mod error;
pub mod gates;
pub mod io;
pub mod lambda;
pub mod linalg;
pub mod sampling;
pub mod stochastic;

pub use error::{Error, Result};
