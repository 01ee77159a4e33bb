#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod finring;
pub mod gabriel;
pub mod quotient;
pub mod derivext;
pub mod symmetric;
pub mod io;
pub mod corpus;
pub mod suites;
pub mod reports;

pub use error::{Error, Result, Side};
pub use finring::*;
