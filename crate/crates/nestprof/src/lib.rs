//! Command-line front end and file formats for `nestprof-core`.

pub mod bench;
pub mod cli;
pub mod input;
pub mod pipeline;
pub mod record;
pub mod table;
pub mod verify;
