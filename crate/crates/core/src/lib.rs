pub mod asymptotics;
pub mod cache;
pub mod contour;
pub mod dilog;
pub mod error;
pub mod exact;
pub mod saddle;

pub use error::{Error, Result};
