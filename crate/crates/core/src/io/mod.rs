//! Run configuration, versioned reports and file formats.

pub mod config;
pub mod export;
pub mod json;

pub use config::{GridField, GridSpec, InitialSpec, OutputSpec, RunConfig, SearchSpec};
pub use json::{to_json_string, Document, SCHEMA_VERSION};
