//! Knowledge-graph engine for contact-tracing records.
//!
//! Event-centric records (who, when, where, what) are held as RDF triples, classified into
//! Three-Cs infection-risk levels by a forward-chaining evaluator of the risk axioms, and
//! queried for spatiotemporal contacts.

pub mod bench;
pub mod datagen;
pub mod rdf;
pub mod reasoner;
pub mod query;
pub mod risk;
pub mod time;
pub mod vocab;
