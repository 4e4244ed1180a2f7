pub mod catalog;
pub mod certify;
pub mod cli;
pub mod continuation;
pub mod degree;
pub mod error;
pub mod geometry;
pub mod interval;
pub mod localize;
pub mod mapdsl;
pub mod problem;

pub use error::{Error, Result};
