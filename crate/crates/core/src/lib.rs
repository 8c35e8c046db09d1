pub mod arith;
pub mod confining;
pub mod error;
pub mod group;
pub mod models;
pub mod numeric;
pub mod plane;
pub mod structures;
pub mod tree;
pub mod words;

pub use error::{Error, Result};
