pub mod error;
pub mod field;
pub mod graph;
pub mod independent_sets;
pub mod k4free;
pub mod pipeline;
pub mod plane;
pub mod report;
pub mod secant_graph;
pub mod streams;
pub mod unital;

pub use error::{Error, Result};
