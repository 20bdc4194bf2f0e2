pub mod algebra;
pub mod branchings;
pub mod cli;
pub mod error;
pub mod graph;
pub mod hamcount;
pub mod hamdetect;
pub mod matrix;
pub mod oracle;
pub mod report;

pub use error::{Error, Result};
