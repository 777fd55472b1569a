//! CLI and HTTP surface over the contact-tracing engine: ingestion, explicit reasoning, risk
//! lookups and contact queries.

pub mod api;
pub mod cli;
pub mod error;
pub mod event_doc;
pub mod names;
pub mod state;

pub use error::ApiError;
pub use state::{AppState, Snapshot};
