//! Discovery of inclusion and functional dependencies over collections of
//! JSON documents, addressed by JSONPath-style paths.
//!
//! The crate is `no_std` and needs only `alloc`. Parsing, file formats and
//! the command line live in the `nestprof` crate.

#![no_std]

extern crate alloc;

pub mod approx;
pub mod datagen;
mod error;
pub mod fd;
pub mod ind;
pub mod json_model;
pub mod oracle;
pub mod unroll;

pub use error::MineError;
