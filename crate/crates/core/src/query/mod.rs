//! Contact-tracing queries over asserted data plus the inference layer.

mod intersect;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rdf::{ns, Iri, Layers, Term};
use crate::reasoner::{preds, Classification, Diagnostic, DiagnosticCode};
use crate::risk::Levels;
use crate::vocab::{ClassKind, Vocabulary};

pub use crate::time::{intervals_overlap, MissingBound, OverlapMode, TimeSpan};
pub use intersect::{
    event_spans, find_intersections, intersections_to_csv, EventSpan, IntersectionResult, IntersectionScope,
    PlaceIndex,
};

pub const DEFAULT_FANOUT: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("{0} is not a registered risk class")]
    UnknownRiskClass(Iri),
    #[error("{0} does not occur in the graph")]
    UnknownIri(Iri),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoAttendeeRow {
    pub agent: Iri,
    pub cnt: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CoAttendees {
    pub rows: Vec<CoAttendeeRow>,
    pub diagnostics: Vec<Diagnostic>,
}

/// People sharing events with `person` at a place that has a situation typed (in either layer)
/// by `risk_class` or one of its subclasses. Counts distinct events; sorted by count descending,
/// then agent.
pub fn co_attendees(
    layers: &Layers<'_>,
    vocab: &Vocabulary,
    person: &Iri,
    risk_class: &Iri,
) -> Result<CoAttendees, QueryError> {
    if vocab.kind(risk_class) != Some(ClassKind::Risk) {
        return Err(QueryError::UnknownRiskClass(risk_class.clone()));
    }
    let mut out = CoAttendees::default();
    let person_term = Term::Iri(person.clone());
    if !layers.mentions(&person_term) {
        out.diagnostics.push(Diagnostic::new(person, DiagnosticCode::UnknownEntity, "person does not occur in the graph"));
        return Ok(out);
    }
    let p = preds();
    let qualifying: BTreeSet<Term> = vocab.descendants(risk_class).into_iter().map(Term::Iri).collect();
    let situation_qualifies = |s: &Iri| layers.objects(s, &p.rdf_type).into_iter().any(|t| qualifying.contains(t));
    let place_qualifies = |place: &Iri| {
        layers.subjects_with(&p.is_situation_of, &Term::Iri(place.clone())).into_iter().any(|s| situation_qualifies(s))
    };

    let mut counts: BTreeMap<Iri, usize> = BTreeMap::new();
    for event in layers.subjects_with(&p.agent, &person_term) {
        let at_risk = layers.objects(event, &p.location).into_iter().filter_map(Term::as_iri).any(place_qualifies);
        if !at_risk {
            continue;
        }
        for agent in layers.objects(event, &p.agent).into_iter().filter_map(Term::as_iri) {
            if agent != person {
                *counts.entry(agent.clone()).or_default() += 1;
            }
        }
    }
    out.rows = counts.into_iter().map(|(agent, cnt)| CoAttendeeRow { agent, cnt }).collect();
    out.rows.sort_by(|a, b| b.cnt.cmp(&a.cnt).then_with(|| a.agent.cmp(&b.agent)));
    Ok(out)
}

pub fn co_attendees_to_csv(rows: &[CoAttendeeRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["agent", "cnt"]).unwrap();
    for r in rows {
        w.write_record([r.agent.as_str(), &r.cnt.to_string()]).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct NeighborhoodNode {
    pub id: Term,
    /// Local name of the node's first asserted or inferred type, if any.
    pub label: Option<String>,
    pub badge: Option<Levels>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct NeighborhoodEdge {
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Term,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Neighborhood {
    pub center: Iri,
    pub nodes: Vec<NeighborhoodNode>,
    pub edges: Vec<NeighborhoodEdge>,
}

impl Neighborhood {
    pub fn node_ids(&self) -> BTreeSet<&Term> {
        self.nodes.iter().map(|n| &n.id).collect()
    }
}

/// Incident edges of `node`, outgoing then incoming, each in term order.
fn incident(layers: &Layers<'_>, node: &Iri) -> Vec<(NeighborhoodEdge, Term)> {
    let mut out: Vec<(NeighborhoodEdge, Term)> = layers
        .outgoing(node)
        .into_iter()
        .map(|(p, o)| {
            (NeighborhoodEdge { subject: node.clone(), predicate: p.clone(), object: o.clone() }, o.clone())
        })
        .collect();
    out.extend(layers.incoming(&Term::Iri(node.clone())).into_iter().map(|(s, p)| {
        (
            NeighborhoodEdge { subject: s.clone(), predicate: p.clone(), object: Term::Iri(node.clone()) },
            Term::Iri(s.clone()),
        )
    }));
    out
}

/// Undirected breadth-first expansion from `center` over both layers, taking at most `fanout`
/// incident edges per expanded node. Literals are leaves.
pub fn neighborhood(
    layers: &Layers<'_>,
    classification: Option<&Classification>,
    center: &Iri,
    depth: usize,
    fanout: usize,
) -> Result<Neighborhood, QueryError> {
    let center_term = Term::Iri(center.clone());
    if !layers.mentions(&center_term) {
        return Err(QueryError::UnknownIri(center.clone()));
    }
    let mut seen: BTreeSet<Term> = BTreeSet::from([center_term.clone()]);
    let mut edges: BTreeSet<NeighborhoodEdge> = BTreeSet::new();
    let mut queue = VecDeque::from([(center.clone(), 0usize)]);
    while let Some((node, d)) = queue.pop_front() {
        if d >= depth {
            continue;
        }
        for (edge, other) in incident(layers, &node).into_iter().take(fanout) {
            edges.insert(edge);
            if seen.insert(other.clone()) {
                if let Term::Iri(i) = other {
                    queue.push_back((i, d + 1));
                }
            }
        }
    }
    let rdf_type = ns::rdf_type();
    let nodes = seen
        .into_iter()
        .map(|id| {
            let (label, badge) = match &id {
                Term::Iri(i) => (
                    layers.objects(i, &rdf_type).into_iter().find_map(Term::as_iri).map(|t| t.local_name().to_string()),
                    classification.and_then(|c| c.get(i)).map(|a| a.levels()),
                ),
                Term::Literal(_) => (None, None),
            };
            NeighborhoodNode { id, label, badge }
        })
        .collect();
    Ok(Neighborhood { center: center.clone(), nodes, edges: edges.into_iter().collect() })
}
