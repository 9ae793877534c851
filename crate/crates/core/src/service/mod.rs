//! Dataset store, request dispatch and the HTTP server behind the CLI.

pub mod api;
pub mod config;
pub mod http;
pub mod plot;
pub mod store;

pub use api::{dispatch, ApiResponse};
pub use config::ConeConfig;
pub use store::{DatasetRecord, Store};
