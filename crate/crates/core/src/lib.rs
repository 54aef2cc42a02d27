pub mod banded;
pub mod builders;
pub mod duals;
pub mod error;
pub mod matclass;
pub mod rational;
pub mod seq;
pub mod spaces;
pub mod triangle;

pub use error::{Error, Result};
pub use rational::Rational;
pub use seq::Seq;
pub use triangle::{DenseTrunc, MatrixView, Triangle};
