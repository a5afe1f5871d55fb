pub mod bounds;
pub mod circle;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod norms;
pub mod poly;
pub mod roots;
pub mod zerostats;

pub use error::{Error, Result};
