pub mod clifford;
pub mod error;
pub mod ideal;
pub mod instance;
pub mod mf;
pub mod orbifold;
pub mod poly;
pub mod scalar;
pub mod twjac;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{CycField, CycRat};
