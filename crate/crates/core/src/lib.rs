pub mod bench;
pub mod cuts;
pub mod error;
pub mod generators;
pub mod instance;
pub mod lp;
pub mod oracles;
pub mod polymatroid;
pub mod separation;
pub mod solver;

pub use error::{Error, Result};
