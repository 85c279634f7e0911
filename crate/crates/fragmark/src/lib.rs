//! Host-side companion to `fragmark-core`: Netpbm IO, key and parameter
//! files, the multi-threaded permutation search, and the command line.

pub mod assignment;
pub mod cli;
mod error;
pub mod keyfile;
pub mod paramsfile;
pub mod pnm;
pub mod search;

pub use crate::error::{Error, Result};
pub use fragmark_core as core;
