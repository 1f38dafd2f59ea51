pub mod arith;
pub mod cli;
pub mod envelope;
pub mod error;
pub mod geometry;
pub mod invariants;
pub mod logvalue;
pub mod places;

pub use error::{Error, Result};
pub use logvalue::LogValue;
