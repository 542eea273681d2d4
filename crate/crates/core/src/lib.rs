pub mod algebra;
pub mod cli;
pub mod constructors;
pub mod error;
pub mod gluing;
pub mod koszul;
pub mod linalg;
pub mod scenarios;

pub use error::{Error, Result};
pub use linalg::{FpMatrix, Prime, Rref, Subspace};
