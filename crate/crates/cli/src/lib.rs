//! Instance files, result records and the commands behind the `mdist` binary.

pub mod commands;
pub mod format;
pub mod record;
pub mod suite;
