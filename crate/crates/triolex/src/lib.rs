//! Library surface of the `triolex` CLI: workspace schema, validation
//! assembly, and the analysis-command registry.

pub mod commands;
pub mod fixture;
pub mod validate;
pub mod workspace;
