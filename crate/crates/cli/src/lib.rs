//! Command-line front end for the `bvspaces` library: spec parsing,
//! deterministic instance generation, the verify suites and the commands.

pub mod commands;
pub mod instances;
pub mod specs;
pub mod verify;
