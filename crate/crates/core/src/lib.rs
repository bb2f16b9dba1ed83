pub mod acquisition;
pub mod bounds;
pub mod error;
pub mod evo;
pub mod gp;
pub mod harness;
pub mod metrics;
pub mod problems;
pub mod sched;
pub mod transfer;

pub use bounds::Bounds;
pub use error::{Error, Result};
