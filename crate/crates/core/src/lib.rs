pub mod error;
pub mod jet;
pub mod linalg;
pub mod rings;

pub use error::{Error, Result};
pub mod io;
pub mod spectrum;
pub mod centralizer;
pub mod linearizer;
pub mod smalldivisors;
pub mod potential;
pub mod fixtures;
