use std::fmt::Write as _;

use super::term::{escape_string, is_decimal_lexical, is_integer_lexical};
use super::{ns, Datatype, Graph, Iri, Term};

/// Serializes to the supported Turtle subset: one block per subject, `rdf:type` first, other
/// predicates in IRI order, objects in term order. Output is deterministic.
pub fn serialize_turtle(graph: &Graph) -> String {
    let mut out = String::new();
    for (prefix, iri) in ns::SERIALIZER_PREFIXES {
        let _ = writeln!(out, "@prefix {prefix}: <{iri}> .");
    }
    let rdf_type = ns::rdf_type();
    for subject in graph.subjects() {
        out.push('\n');
        out.push_str(&abbreviate(subject));
        let mut predicates: Vec<&Iri> = Vec::new();
        let mut last: Option<&Iri> = None;
        for (p, _) in graph.outgoing(subject) {
            if last != Some(p) {
                predicates.push(p);
                last = Some(p);
            }
        }
        predicates.sort_by_key(|p| (*p != &rdf_type, *p));
        for (i, p) in predicates.iter().enumerate() {
            if i > 0 {
                out.push_str(" ;\n   ");
            }
            out.push(' ');
            if **p == rdf_type {
                out.push('a');
            } else {
                out.push_str(&abbreviate(p));
            }
            for (j, o) in graph.objects(subject, p).enumerate() {
                out.push_str(if j == 0 { " " } else { ", " });
                out.push_str(&turtle_term(o));
            }
        }
        out.push_str(" .\n");
    }
    out
}

pub fn serialize_ntriples(graph: &Graph) -> String {
    let mut out = String::new();
    for t in graph.iter() {
        let _ = writeln!(out, "{t}");
    }
    out
}

fn turtle_term(term: &Term) -> String {
    match term {
        Term::Iri(iri) => abbreviate(iri),
        Term::Literal(lit) => {
            let value = lit.value();
            match lit.datatype() {
                Datatype::Plain => format!("\"{}\"", escape_string(value)),
                Datatype::Integer if is_integer_lexical(value) => value.to_string(),
                Datatype::Decimal if is_decimal_lexical(value) => value.to_string(),
                dt => format!("\"{}\"^^{}", escape_string(value), abbreviate(&dt.iri())),
            }
        }
    }
}

/// Shortens an IRI with the longest serializer prefix that leaves a valid local name.
pub fn abbreviate(iri: &Iri) -> String {
    let s = iri.as_str();
    let best = ns::SERIALIZER_PREFIXES
        .iter()
        .filter_map(|(prefix, base)| s.strip_prefix(base).map(|local| (prefix, base.len(), local)))
        .filter(|(_, _, local)| is_safe_local(local))
        .max_by_key(|(_, len, _)| *len);
    match best {
        Some((prefix, _, local)) => format!("{prefix}:{local}"),
        None => format!("<{s}>"),
    }
}

fn is_safe_local(local: &str) -> bool {
    let Some(first) = local.chars().next() else { return true };
    (first.is_alphanumeric() || first == '_')
        && !local.ends_with('.')
        && local.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::{parse_turtle, Literal};

    #[test]
    fn empty_graph_is_header_only() {
        let text = serialize_turtle(&Graph::new());
        assert!(text.lines().all(|l| l.starts_with("@prefix")));
        assert_eq!(text.lines().count(), ns::SERIALIZER_PREFIXES.len());
    }

    #[test]
    fn single_triple_is_one_statement_line() {
        let mut g = Graph::new();
        g.add(&ns::id("event_0"), &ns::rdf_type(), ns::schema("Event"));
        let text = serialize_turtle(&g);
        let body: Vec<_> = text.lines().filter(|l| !l.starts_with("@prefix") && !l.is_empty()).collect();
        assert_eq!(body, vec!["id:event_0 a schema:Event ."]);
    }

    #[test]
    fn unsafe_locals_fall_back_to_full_iris() {
        let iri = Iri::new("http://plod.info/rdf/id/a/b").unwrap();
        assert_eq!(abbreviate(&iri), "<http://plod.info/rdf/id/a/b>");
        assert_eq!(abbreviate(&ns::id("event_0")), "id:event_0");
    }

    #[test]
    fn awkward_literals_round_trip() {
        let mut g = Graph::new();
        let s = ns::id("x");
        g.add(&s, &ns::plod("a"), Literal::typed("1", Datatype::Decimal).unwrap());
        g.add(&s, &ns::plod("b"), Literal::plain("tab\there \"q\" \\ back"));
        g.add(&s, &ns::plod("c"), Literal::typed("+5", Datatype::Integer).unwrap());
        g.add(&s, &ns::plod("d"), Literal::typed(".5", Datatype::Decimal).unwrap());
        let text = serialize_turtle(&g);
        assert_eq!(parse_turtle(&text).unwrap(), g);
        let nt = serialize_ntriples(&g);
        assert_eq!(parse_turtle(&nt).unwrap(), g);
    }
}
