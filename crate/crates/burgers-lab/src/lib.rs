pub mod error;
pub mod field;
pub mod grid;

pub use error::{LabError, Result};
pub use field::{Mollifier, MollifierShape, RenormConstants, SpectralField, TestFunction};
