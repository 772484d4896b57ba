//! Entropy of uniform transmission through deletion and insertion channels.

pub mod capacity;
pub mod cli;
pub mod embedding;
pub mod entropy;
pub mod error;
pub mod extremal;
pub mod math;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use words::Word;
