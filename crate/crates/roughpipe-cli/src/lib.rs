//! Campaign orchestration, persistence, and reporting for the rough-pipe
//! flow laboratory. The binary exposes one subcommand per campaign; the
//! acceptance suite drives the same campaign functions directly.

pub mod campaign;
pub mod config;
pub mod criteria;
pub mod manifest;
pub mod report;
pub mod svg;
pub mod tables;
