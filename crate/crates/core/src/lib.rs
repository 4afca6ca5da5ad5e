pub mod equations;
pub mod error;
pub mod funcspace;
pub mod mellin;
pub mod memo;
pub mod quadrature;
pub mod specfun;
pub mod transforms;
pub mod verify;

mod dd;

pub use error::{Error, Result};
