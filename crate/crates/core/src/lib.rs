#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod export;
pub mod fibration;
pub mod galois;
pub mod klcert;
pub mod lfun;
pub mod modl;
pub mod ortho;
pub mod scan;
pub mod store;

pub use error::{Error, Result};
