use std::collections::BTreeSet;
use std::sync::OnceLock;

use chrono::NaiveDateTime;
use serde::Serialize;

use super::{Diagnostic, DiagnosticCode};
use crate::rdf::{ns, Graph, Iri, Term};
use crate::time::TimeSpan;

/// Predicate IRIs used on the hot path, built once.
pub(crate) struct Preds {
    pub rdf_type: Iri,
    pub agent: Iri,
    pub action: Iri,
    pub context: Iri,
    pub time: Iri,
    pub location: Iri,
    pub is_situation_of: Iri,
    pub following_event: Iri,
    pub afford: Iri,
    pub age: Iri,
    pub value: Iri,
    pub health_condition: Iri,
    pub home_location: Iri,
    pub has_beginning: Iri,
    pub has_end: Iri,
    pub reliable_begin: Iri,
    pub possible_begin: Iri,
    pub reliable_end: Iri,
    pub possible_end: Iri,
    pub has_duration: Iri,
    pub numeric_duration: Iri,
    pub event: Term,
    pub situation: Term,
}

pub(crate) fn preds() -> &'static Preds {
    static P: OnceLock<Preds> = OnceLock::new();
    P.get_or_init(|| {
        use ns::pred::*;
        Preds {
            rdf_type: ns::rdf_type(),
            agent: agent(),
            action: action(),
            context: context(),
            time: time(),
            location: location(),
            is_situation_of: is_situation_of(),
            following_event: following_event(),
            afford: afford(),
            age: age(),
            value: value(),
            health_condition: health_condition(),
            home_location: home_location(),
            has_beginning: has_beginning(),
            has_end: has_end(),
            reliable_begin: has_reliable_beginning(),
            possible_begin: has_possible_beginning(),
            reliable_end: has_reliable_end(),
            possible_end: has_possible_end(),
            has_duration: has_duration(),
            numeric_duration: numeric_duration(),
            event: Term::Iri(ns::schema("Event")),
            situation: Term::Iri(ns::plod("Situation")),
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventView {
    pub id: Iri,
    pub agents: BTreeSet<Iri>,
    pub location: Option<Iri>,
    pub actions: BTreeSet<Iri>,
    pub contexts: BTreeSet<Iri>,
    pub time: Option<TimeSpan>,
    pub following_event: Option<Iri>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SituationView {
    pub id: Iri,
    pub place: Option<Iri>,
    pub contexts: BTreeSet<Iri>,
    pub time: Option<TimeSpan>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PersonView {
    pub id: Iri,
    pub age: Option<u32>,
    /// Node carrying the age value; the person itself when the age is a bare literal.
    pub age_node: Option<Iri>,
    pub health_condition: Option<String>,
    pub home_location: Option<Iri>,
}

fn iri_set(graph: &Graph, s: &Iri, p: &Iri) -> BTreeSet<Iri> {
    graph.object_iris(s, p).cloned().collect()
}

pub fn event_ids(graph: &Graph) -> impl Iterator<Item = &Iri> {
    let p = preds();
    graph.subjects_with(&p.rdf_type, &p.event)
}

pub fn situation_ids(graph: &Graph) -> impl Iterator<Item = &Iri> {
    let p = preds();
    graph.subjects_with(&p.rdf_type, &p.situation)
}

pub fn read_event(graph: &Graph, id: &Iri, diags: &mut Vec<Diagnostic>) -> EventView {
    let p = preds();
    let location = graph.object_iris(id, &p.location).next().cloned();
    if location.is_none() {
        diags.push(Diagnostic::new(id, DiagnosticCode::MissingLocation, "event has no schema:location"));
    }
    EventView {
        id: id.clone(),
        agents: iri_set(graph, id, &p.agent),
        location,
        actions: iri_set(graph, id, &p.action),
        contexts: iri_set(graph, id, &p.context),
        time: read_time(graph, id, diags),
        following_event: graph.object_iris(id, &p.following_event).next().cloned(),
    }
}

pub fn read_situation(graph: &Graph, id: &Iri, diags: &mut Vec<Diagnostic>) -> SituationView {
    let p = preds();
    let place = graph.object_iris(id, &p.is_situation_of).next().cloned();
    if place.is_none() {
        diags.push(Diagnostic::new(id, DiagnosticCode::MissingLocation, "situation has no plod:isSituationOf"));
    }
    SituationView {
        id: id.clone(),
        place,
        contexts: iri_set(graph, id, &p.context),
        time: read_time(graph, id, diags),
    }
}

pub fn read_person(graph: &Graph, id: &Iri) -> PersonView {
    let p = preds();
    let (age, age_node) = match graph.object(id, &p.age) {
        Some(Term::Iri(node)) => (graph.object(node, &p.value).and_then(literal_age), Some(node.clone())),
        Some(lit @ Term::Literal(_)) => (literal_age(lit), Some(id.clone())),
        None => (None, None),
    };
    PersonView {
        id: id.clone(),
        age,
        age_node,
        health_condition: graph.object(id, &p.health_condition).map(|t| t.value().to_string()),
        home_location: graph.object_iris(id, &p.home_location).next().cloned(),
    }
}

fn literal_age(t: &Term) -> Option<u32> {
    let lit = t.as_literal()?;
    lit.as_i64().or_else(|| lit.as_f64().filter(|f| f.fract() == 0.0).map(|f| f as i64)).and_then(|v| u32::try_from(v).ok())
}

/// Subjects with a `plod:age` edge.
pub fn person_ids(graph: &Graph) -> BTreeSet<&Iri> {
    graph.pairs(&preds().age).map(|(s, _)| s).collect()
}

fn date_of(graph: &Graph, s: &Iri, p: &Iri) -> Option<NaiveDateTime> {
    graph.objects(s, p).find_map(|t| match t {
        Term::Literal(l) => l.as_date_time(),
        Term::Iri(_) => None,
    })
}

/// Reads `entity plod:time ?t` and the bounds and duration hanging off `?t`.
pub fn read_time(graph: &Graph, entity: &Iri, diags: &mut Vec<Diagnostic>) -> Option<TimeSpan> {
    let p = preds();
    let node = graph.object_iris(entity, &p.time).next()?;
    let explicit_duration = graph
        .object_iris(node, &p.has_duration)
        .find_map(|d| graph.object(d, &p.numeric_duration))
        .or_else(|| graph.object(node, &p.numeric_duration))
        .and_then(|t| t.as_literal()?.as_f64());
    let part_of_day = graph.object_iris(node, &p.rdf_type).find(|c| !c.as_str().starts_with(ns::TIME)).cloned();
    let span = TimeSpan {
        begin: date_of(graph, node, &p.has_beginning),
        end: date_of(graph, node, &p.has_end),
        reliable_begin: date_of(graph, node, &p.reliable_begin),
        possible_begin: date_of(graph, node, &p.possible_begin),
        reliable_end: date_of(graph, node, &p.reliable_end),
        possible_end: date_of(graph, node, &p.possible_end),
        explicit_duration,
        part_of_day,
    };
    for problem in span.problems() {
        diags.push(Diagnostic::new(entity, DiagnosticCode::InvalidTime, &problem));
    }
    Some(span)
}
