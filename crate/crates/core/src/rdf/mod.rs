//! In-memory RDF store: terms, an indexed triple set, and Turtle/N-Triples I/O.

mod graph;
pub mod ns;
mod store;
mod term;
mod turtle;
mod write;

pub use graph::{Graph, Layers};
pub use store::SharedStore;
pub use term::{parse_date_time, Datatype, Iri, Literal, Term, TermError, Triple};
pub use turtle::{parse_into, parse_ntriples, parse_turtle, ParseError};
pub use write::{abbreviate, serialize_ntriples, serialize_turtle};
