//! Library surface of the command-line crate: the configuration-file
//! schema, reused by the integration and acceptance test suites.

pub mod config;
