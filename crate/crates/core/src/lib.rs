pub mod cartan;
pub mod conventions;
pub mod einstein;
pub mod error;
pub mod fibercalc;
pub mod linalg;
pub mod podles;
pub mod scalar;
pub mod uqrep;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use scalar::Scalar;
