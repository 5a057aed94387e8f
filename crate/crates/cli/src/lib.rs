//! Command-line front end for `cdsp-core`.

pub mod checks;
pub mod commands;
pub mod complex_lit;
pub mod json;
pub mod report;
pub mod schema;
pub mod selftest;
