//! Toeplitz subshifts built from viable pairs, and exact orbit statistics
//! along polynomial sequences.

pub mod error;
pub mod ntcore;
pub mod words;
pub mod constructions;
pub mod orbitstats;

pub use error::{Error, Result};
