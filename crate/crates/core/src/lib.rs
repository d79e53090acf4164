pub mod apps;
pub mod arith;
pub mod bounds;
pub mod error;
pub mod groups;
pub mod series;

pub use arith::{legendre_valuation, vp, Prime, Rat, Valuation};
pub use error::{Error, Result};
