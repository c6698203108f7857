//! Configuration, commands and output writers behind the `oswlab` binary.

pub mod commands;
pub mod config;
pub mod output;
