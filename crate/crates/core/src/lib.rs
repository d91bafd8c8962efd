pub mod error;
pub mod exactalg;

pub use error::{Error, Result};
pub mod system;
pub mod newton;
pub mod blowup;
pub mod resolve;
pub mod classify;
