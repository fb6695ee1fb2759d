//! Std companion to `qdefense-core`: configuration, file formats, atomic
//! output and the experiment runners used by the `qdefense` binary.

pub mod commands;
pub mod config;
pub mod formats;
pub mod output;

pub use formats::Format;
