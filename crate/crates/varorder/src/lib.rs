pub mod error;
pub mod geom;
pub mod par;
pub mod specfun;
pub mod util;

pub use error::{Error, Result};
