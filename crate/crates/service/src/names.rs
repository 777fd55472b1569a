//! Turning user-typed names into IRIs.
//!
//! Absolute IRIs and known `prefix:local` forms are taken as written. A bare name is read as an
//! `id:` entity or a `plod:` vocabulary term depending on where it appears.

use ciro_core::rdf::{ns, Graph, Iri, Literal, Term};
use ciro_core::vocab::resolve_name;

use crate::error::ApiError;

pub fn entity(name: &str) -> Result<Iri, ApiError> {
    let name = name.trim();
    if is_bare(name) {
        return Iri::new(format!("{}{name}", ns::PLOD_ID)).map_err(|e| invalid(name, e));
    }
    resolve_name(name).map_err(|e| invalid(name, e))
}

pub fn term(name: &str) -> Result<Iri, ApiError> {
    resolve_name(name).map_err(|e| invalid(name, e))
}

/// A person by IRI, or failing that by a unique `schema:name`.
pub fn person(graph: &Graph, name: &str) -> Result<Iri, ApiError> {
    if let Ok(iri) = entity(name) {
        if graph.mentions(&Term::Iri(iri.clone())) {
            return Ok(iri);
        }
    }
    let by_name: Vec<&Iri> =
        graph.subjects_with(&ns::schema("name"), &Term::Literal(Literal::plain(name.trim()))).collect();
    match by_name.as_slice() {
        [one] => Ok((*one).clone()),
        [] => Err(ApiError::not_found("unknown-iri", format!("no person `{name}` in the store"))),
        many => Err(ApiError::bad_request(
            "ambiguous-name",
            format!("{} subjects are named `{name}`; use an IRI", many.len()),
        )),
    }
}

fn is_bare(name: &str) -> bool {
    !name.contains(':') && !name.is_empty() && !name.contains(char::is_whitespace)
}

fn invalid(name: &str, e: impl std::fmt::Display) -> ApiError {
    ApiError::bad_request("invalid-iri", format!("`{name}`: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bare_names_by_position() {
        assert_eq!(entity("event_a1").unwrap(), ns::id("event_a1"));
        assert_eq!(term("ClosedSpace").unwrap(), ns::plod("ClosedSpace"));
        assert_eq!(entity("plod:talk").unwrap(), ns::plod("talk"));
        assert_eq!(entity("http://example.org/x").unwrap().as_str(), "http://example.org/x");
        assert!(entity("nope:x").is_err());
    }

    #[test]
    fn person_by_label() {
        let g = ciro_core::rdf::parse_turtle(
            "@prefix id: <http://plod.info/rdf/id/> . id:person_a_A schema:name \"A\" . id:e plod:agent id:person_a_A .",
        )
        .unwrap();
        assert_eq!(person(&g, "A").unwrap(), ns::id("person_a_A"));
        assert_eq!(person(&g, "person_a_A").unwrap(), ns::id("person_a_A"));
        assert_eq!(person(&g, "Z").unwrap_err().status, axum::http::StatusCode::NOT_FOUND);
    }
}
