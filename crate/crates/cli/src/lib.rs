//! Document format and command-line front end for `morita-core`.

pub mod commands;
pub mod document;
