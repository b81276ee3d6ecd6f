pub mod arith;
pub mod error;
pub mod ff;
pub mod formulas;
pub mod oracle;
pub mod quadforms;
pub mod rings;
pub mod towers;

pub use error::{Error, Result};
