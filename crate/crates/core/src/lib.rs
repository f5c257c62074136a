//! Exact arithmetic for type-A conformal block ranks and parabolic weights.
//!
//! The crate is `no_std` with `alloc`. File formats, caching on disk and the
//! command-line front end live in the `parblocks` crate.

#![no_std]

extern crate alloc;

pub mod curves;
pub mod error;
pub mod fusion;
pub mod picard;
pub mod ranks;
pub mod weights;

pub use error::{Error, Result};
