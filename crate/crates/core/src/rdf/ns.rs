//! Namespaces and well-known IRIs.

use super::Iri;

pub const PLOD: &str = "http://plod.info/rdf/";
pub const PLOD_ID: &str = "http://plod.info/rdf/id/";
pub const SCHEMA: &str = "http://schema.org/";
pub const TIME: &str = "http://www.w3.org/2006/time#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL: &str = "http://www.w3.org/2002/07/owl#";

/// Prefixes every parser knows without an `@prefix` directive.
pub const BUILTIN_PREFIXES: &[(&str, &str)] = &[
    ("owl", OWL),
    ("plod", PLOD),
    ("rdf", RDF),
    ("rdfs", RDFS),
    ("schema", SCHEMA),
    ("time", TIME),
    ("xsd", XSD),
];

/// Prefixes written at the top of every serialized document.
pub const SERIALIZER_PREFIXES: &[(&str, &str)] = &[
    ("id", PLOD_ID),
    ("owl", OWL),
    ("plod", PLOD),
    ("rdf", RDF),
    ("rdfs", RDFS),
    ("schema", SCHEMA),
    ("time", TIME),
    ("xsd", XSD),
];

pub fn plod(local: &str) -> Iri {
    Iri::new_unchecked(format!("{PLOD}{local}"))
}

pub fn id(local: &str) -> Iri {
    Iri::new_unchecked(format!("{PLOD_ID}{local}"))
}

pub fn schema(local: &str) -> Iri {
    Iri::new_unchecked(format!("{SCHEMA}{local}"))
}

pub fn time(local: &str) -> Iri {
    Iri::new_unchecked(format!("{TIME}{local}"))
}

pub fn rdf_type() -> Iri {
    Iri::new_unchecked(format!("{RDF}type"))
}

pub fn rdfs(local: &str) -> Iri {
    Iri::new_unchecked(format!("{RDFS}{local}"))
}

pub fn owl(local: &str) -> Iri {
    Iri::new_unchecked(format!("{OWL}{local}"))
}

/// Predicates of the event-centric contact-tracing schema.
pub mod pred {
    use super::*;

    pub fn agent() -> Iri {
        plod("agent")
    }
    pub fn action() -> Iri {
        plod("action")
    }
    pub fn context() -> Iri {
        plod("context")
    }
    pub fn time() -> Iri {
        plod("time")
    }
    pub fn location() -> Iri {
        schema("location")
    }
    pub fn is_situation_of() -> Iri {
        plod("isSituationOf")
    }
    pub fn following_event() -> Iri {
        plod("followingEvent")
    }
    pub fn city() -> Iri {
        plod("city")
    }
    pub fn afford() -> Iri {
        plod("afford")
    }
    pub fn potential_action() -> Iri {
        plod("potentialAction")
    }
    pub fn age() -> Iri {
        plod("age")
    }
    pub fn value() -> Iri {
        plod("value")
    }
    pub fn health_condition() -> Iri {
        schema("healthCondition")
    }
    pub fn home_location() -> Iri {
        schema("homeLocation")
    }
    pub fn has_beginning() -> Iri {
        super::time("hasBeginning")
    }
    pub fn has_end() -> Iri {
        super::time("hasEnd")
    }
    pub fn has_reliable_beginning() -> Iri {
        plod("hasReliableBeginning")
    }
    pub fn has_possible_beginning() -> Iri {
        plod("hasPossibleBeginning")
    }
    pub fn has_reliable_end() -> Iri {
        plod("hasReliableEnd")
    }
    pub fn has_possible_end() -> Iri {
        plod("hasPossibleEnd")
    }
    pub fn has_duration() -> Iri {
        super::time("hasDuration")
    }
    pub fn numeric_duration() -> Iri {
        super::time("numericDuration")
    }
    pub fn sub_class_of() -> Iri {
        rdfs("subClassOf")
    }
}
