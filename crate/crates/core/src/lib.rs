pub mod calculus;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod independence;
pub mod semantics;
pub mod syntax;
mod text;
pub mod translation;

pub use error::{Error, Result};
