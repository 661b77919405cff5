//! Library surface of the command-line front end, shared by the binary and
//! the integration tests.

pub mod checks;
pub mod commands;
pub mod corpus;
pub mod report;
