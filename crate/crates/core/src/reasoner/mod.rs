//! Forward-chaining Three-Cs classifier.
//!
//! [`classify_all`] reads every `schema:Event` and `plod:Situation` in a graph, evaluates the
//! close-contact, crowding and closed-space axioms, and returns the levels together with a
//! separate inference layer. The asserted graph is never modified.

mod views;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::rdf::{ns, Graph, Iri, Term, Triple};
use crate::risk::{Dimension, Level, Levels};
use crate::time::{intervals_overlap, OverlapMode, TimeSpan};
use crate::vocab::{AgeClassDef, ClosePrecedence, ContextKind, RiskAxiomConfig, Vocabulary};

pub(crate) use views::preds;
pub use views::{
    event_ids, person_ids, read_event, read_person, read_situation, read_time, situation_ids, EventView,
    PersonView, SituationView,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagnosticCode {
    MissingLocation,
    UntypedPlace,
    UnregisteredContext,
    UndefinedDuration,
    InvalidTime,
    InvalidAge,
    UnknownEntity,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticCode::MissingLocation => "missing-location",
            DiagnosticCode::UntypedPlace => "untyped-place",
            DiagnosticCode::UnregisteredContext => "unregistered-context",
            DiagnosticCode::UndefinedDuration => "undefined-duration",
            DiagnosticCode::InvalidTime => "invalid-time",
            DiagnosticCode::InvalidAge => "invalid-age",
            DiagnosticCode::UnknownEntity => "unknown-entity",
        }
    }
}

/// A data-quality finding about one entity. Never fatal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Diagnostic {
    pub entity: Iri,
    pub code: DiagnosticCode,
    pub message: String,
}

impl Diagnostic {
    pub fn new(entity: &Iri, code: DiagnosticCode, message: &str) -> Self {
        Diagnostic { entity: entity.clone(), code, message: message.to_string() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}] {}", self.entity, self.code.as_str(), self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityKind {
    Event,
    Situation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiskAssignment {
    pub entity: Iri,
    pub kind: EntityKind,
    /// Events only.
    pub closeness: Option<Level>,
    /// Events only.
    pub crowdedness: Option<Level>,
    /// Situations: own level. Events: maximum over matched situations, LOW if none.
    pub enclosedness: Option<Level>,
    /// Risk classes the entity is materialized into, whether or not already asserted.
    pub derived_classes: BTreeSet<Iri>,
    /// Actions the event's place affords (events only).
    pub potential_actions: BTreeSet<Iri>,
}

impl RiskAssignment {
    pub fn level(&self, dim: Dimension) -> Option<Level> {
        match dim {
            Dimension::Closeness => self.closeness,
            Dimension::Crowdedness => self.crowdedness,
            Dimension::Enclosedness => self.enclosedness,
        }
    }

    /// All three levels, with LOW for dimensions not evaluated on this entity kind.
    pub fn levels(&self) -> Levels {
        Levels {
            closeness: self.closeness.unwrap_or(Level::Low),
            crowdedness: self.crowdedness.unwrap_or(Level::Low),
            enclosedness: self.enclosedness.unwrap_or(Level::Low),
        }
    }
}

/// Event and situation contexts after pooling, partitioned by kind.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PooledContexts {
    pub behavioral: BTreeSet<Iri>,
    pub spatial: BTreeSet<Iri>,
}

/// Everything the axioms looked at for one event.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventReport {
    pub event: EventView,
    pub affordances: BTreeSet<Iri>,
    pub matched_situations: Vec<(Iri, Level)>,
    pub pooled: PooledContexts,
    /// `A`: afforded droplet-reachable actions.
    pub afforded_droplets: usize,
    /// `B`: performed droplet-reachable actions.
    pub performed_droplets: usize,
    /// `D`: effective duration in minutes.
    pub duration: Option<f64>,
    pub closeness: Level,
    pub crowdedness: Level,
    pub enclosedness: Level,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Classification {
    pub assignments: BTreeMap<Iri, RiskAssignment>,
    /// Age node → age classes.
    pub age_classes: BTreeMap<Iri, BTreeSet<Iri>>,
    #[serde(skip)]
    pub inferred: Graph,
    pub diagnostics: Vec<Diagnostic>,
}

impl Classification {
    pub fn get(&self, entity: &Iri) -> Option<&RiskAssignment> {
        self.assignments.get(entity)
    }

    pub fn events(&self) -> impl Iterator<Item = &RiskAssignment> {
        self.assignments.values().filter(|a| a.kind == EntityKind::Event)
    }

    pub fn situations(&self) -> impl Iterator<Item = &RiskAssignment> {
        self.assignments.values().filter(|a| a.kind == EntityKind::Situation)
    }

    /// Number of events at each level of `dim`.
    pub fn event_level_counts(&self, dim: Dimension) -> BTreeMap<Level, usize> {
        let mut out: BTreeMap<Level, usize> = Level::ALL.iter().map(|l| (*l, 0)).collect();
        for a in self.events() {
            *out.entry(a.levels().get(dim)).or_default() += 1;
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("classification serializes")
    }

    /// One row per entity: `entity,kind,closeness,crowdedness,enclosedness`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["entity", "kind", "closeness", "crowdedness", "enclosedness"]).unwrap();
        let show = |l: Option<Level>| l.map(Level::as_str).unwrap_or("");
        for a in self.assignments.values() {
            let kind = match a.kind {
                EntityKind::Event => "event",
                EntityKind::Situation => "situation",
            };
            w.write_record([a.entity.as_str(), kind, show(a.closeness), show(a.crowdedness), show(a.enclosedness)])
                .unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }
}

/// Age classes whose interval contains `age`.
pub fn classify_age(age: u32, defs: &[AgeClassDef]) -> BTreeSet<Iri> {
    defs.iter().filter(|d| d.contains(age)).map(|d| d.class.clone()).collect()
}

/// Registered place classes asserted on `place`.
pub fn place_types(place: &Iri, graph: &Graph, vocab: &Vocabulary) -> BTreeSet<Iri> {
    graph.object_iris(place, &preds().rdf_type).filter(|c| vocab.is_place_class(c)).cloned().collect()
}

/// Actions afforded by `place`: inherited class affordances plus per-instance `plod:afford` triples.
/// An untyped place affords nothing and yields a diagnostic.
pub fn derive_affordances(place: &Iri, graph: &Graph, vocab: &Vocabulary) -> (BTreeSet<Iri>, Option<Diagnostic>) {
    let types = place_types(place, graph, vocab);
    if types.is_empty() {
        return (BTreeSet::new(), Some(untyped(place)));
    }
    let mut out: BTreeSet<Iri> =
        types.iter().filter_map(|t| vocab.class_affordances(t)).flatten().cloned().collect();
    out.extend(graph.object_iris(place, &preds().afford).cloned());
    (out, None)
}

fn untyped(place: &Iri) -> Diagnostic {
    Diagnostic::new(place, DiagnosticCode::UntypedPlace, "place has no registered place type")
}

/// Situations attached to `place`.
pub fn situations_at(place: &Iri, graph: &Graph) -> Vec<SituationView> {
    let mut scratch = Vec::new();
    graph
        .subjects_with(&preds().is_situation_of, &Term::Iri(place.clone()))
        .map(|s| read_situation(graph, s, &mut scratch))
        .collect()
}

/// Whether a situation's time matches an event's time on reliable bounds. A situation without
/// usable bounds matches every event; an event without usable bounds matches only those.
pub fn situation_matches(event: Option<&TimeSpan>, situation: Option<&TimeSpan>) -> bool {
    let mode = OverlapMode::Reliable;
    match situation.filter(|s| s.bounds(mode).is_some()) {
        None => true,
        Some(s) => event.is_some_and(|e| intervals_overlap(e, s, mode).unwrap_or(false)),
    }
}

/// Situations at the event's location whose time matches the event's.
pub fn matched_situations(event: &EventView, graph: &Graph) -> Vec<SituationView> {
    let Some(loc) = &event.location else { return Vec::new() };
    situations_at(loc, graph)
        .into_iter()
        .filter(|s| situation_matches(event.time.as_ref(), s.time.as_ref()))
        .collect()
}

fn partition<'a>(
    contexts: impl IntoIterator<Item = &'a Iri>,
    owner: &Iri,
    vocab: &Vocabulary,
    out: &mut PooledContexts,
    diags: &mut Vec<Diagnostic>,
) {
    for c in contexts {
        match vocab.context_kind(c) {
            Some(ContextKind::Behavioral) => {
                out.behavioral.insert(c.clone());
            }
            Some(ContextKind::Spatial) => {
                out.spatial.insert(c.clone());
            }
            None => diags.push(Diagnostic::new(
                owner,
                DiagnosticCode::UnregisteredContext,
                &format!("context {c} is not a registered risk context"),
            )),
        }
    }
}

fn pool(
    event: &EventView,
    matched: &[SituationView],
    vocab: &Vocabulary,
    diags: &mut Vec<Diagnostic>,
) -> PooledContexts {
    let mut out = PooledContexts::default();
    partition(&event.contexts, &event.id, vocab, &mut out, diags);
    if vocab.thresholds().context_pooling {
        for s in matched {
            partition(&s.contexts, &s.id, vocab, &mut out, diags);
        }
    }
    out
}

/// The event's contexts, unioned with those of matched situations when pooling is enabled.
pub fn pooled_contexts(event: &EventView, graph: &Graph, vocab: &Vocabulary) -> (PooledContexts, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    let matched = matched_situations(event, graph);
    let pooled = pool(event, &matched, vocab, &mut diags);
    (pooled, diags)
}

/// Close contact from its four counts.
pub fn close_contact_level(a: usize, b: usize, d: Option<f64>, c: usize, cfg: &RiskAxiomConfig) -> Level {
    let long = d.is_some_and(|d| d > cfg.duration_threshold);
    let social = c >= cfg.behavioral_count as usize;
    let branch = |n: u32| {
        let n = n as usize;
        match cfg.close_contact_precedence {
            ClosePrecedence::Grouped => (a >= n || b >= n) && long && social,
            ClosePrecedence::DlStandard => a >= n || (b >= n && long && social),
        }
    };
    if branch(cfg.high_droplet_count) {
        Level::High
    } else if branch(cfg.medium_droplet_count) {
        Level::Medium
    } else {
        Level::Low
    }
}

/// Crowding from pooled behavioral and spatial counts.
pub fn crowding_level(behavioral: usize, spatial: usize, cfg: &RiskAxiomConfig) -> Level {
    if behavioral < cfg.behavioral_count as usize {
        Level::Low
    } else if spatial >= cfg.high_crowding_spatial_count as usize {
        Level::High
    } else if spatial >= cfg.medium_crowding_spatial_count as usize {
        Level::Medium
    } else {
        Level::Low
    }
}

/// Closed space from the place condition and the situation's own spatial context count.
pub fn closed_space_level(enclosing: bool, spatial: usize) -> Level {
    match (enclosing, spatial >= 1) {
        (true, true) => Level::High,
        (true, false) => Level::Medium,
        (false, _) => Level::Low,
    }
}

pub fn classify_closed_space(
    situation: &SituationView,
    graph: &Graph,
    vocab: &Vocabulary,
) -> (Level, Vec<Diagnostic>) {
    let mut diags = Vec::new();
    let Some(place) = &situation.place else {
        return (Level::Low, diags);
    };
    let types = place_types(place, graph, vocab);
    if types.is_empty() {
        diags.push(untyped(place));
        return (Level::Low, diags);
    }
    let enclosing = types.iter().any(|t| vocab.is_enclosing_place(t));
    let mut own = PooledContexts::default();
    partition(&situation.contexts, &situation.id, vocab, &mut own, &mut diags);
    (closed_space_level(enclosing, own.spatial.len()), diags)
}

pub fn classify_crowding(event: &EventView, graph: &Graph, vocab: &Vocabulary) -> Level {
    let (pooled, _) = pooled_contexts(event, graph, vocab);
    crowding_level(pooled.behavioral.len(), pooled.spatial.len(), vocab.thresholds())
}

pub fn classify_close_contact(event: &EventView, graph: &Graph, vocab: &Vocabulary) -> Level {
    explain_view(event.clone(), graph, vocab, &mut Vec::new()).closeness
}

/// Full evaluation of one event, with intermediate values.
pub fn explain_event(graph: &Graph, vocab: &Vocabulary, event: &Iri) -> Option<(EventReport, Vec<Diagnostic>)> {
    if !graph.contains(&Triple::new(event.clone(), ns::rdf_type(), ns::schema("Event"))) {
        return None;
    }
    let mut diags = Vec::new();
    let view = read_event(graph, event, &mut diags);
    let report = explain_view(view, graph, vocab, &mut diags);
    diags.sort();
    diags.dedup();
    Some((report, diags))
}

fn explain_view(event: EventView, graph: &Graph, vocab: &Vocabulary, diags: &mut Vec<Diagnostic>) -> EventReport {
    let cfg = vocab.thresholds();
    let affordances = match &event.location {
        Some(loc) => {
            let (a, d) = derive_affordances(loc, graph, vocab);
            diags.extend(d);
            a
        }
        None => BTreeSet::new(),
    };
    let matched = matched_situations(&event, graph);
    let pooled = pool(&event, &matched, vocab, diags);
    let matched_situations: Vec<(Iri, Level)> = matched
        .iter()
        .map(|s| (s.id.clone(), classify_closed_space(s, graph, vocab).0))
        .collect();

    let afforded_droplets = affordances.iter().filter(|a| vocab.is_droplet_action(a)).count();
    let performed_droplets = event.actions.iter().filter(|a| vocab.is_droplet_action(a)).count();
    let duration = event.time.as_ref().and_then(TimeSpan::effective_duration);
    if duration.is_none() {
        diags.push(Diagnostic::new(
            &event.id,
            DiagnosticCode::UndefinedDuration,
            "no duration or begin/end; close contact cannot hold",
        ));
    }
    let closeness = close_contact_level(afforded_droplets, performed_droplets, duration, pooled.behavioral.len(), cfg);
    let crowdedness = crowding_level(pooled.behavioral.len(), pooled.spatial.len(), cfg);
    let enclosedness = matched_situations.iter().map(|(_, l)| *l).max().unwrap_or(Level::Low);
    EventReport {
        event,
        affordances,
        matched_situations,
        pooled,
        afforded_droplets,
        performed_droplets,
        duration,
        closeness,
        crowdedness,
        enclosedness,
    }
}

struct Partial {
    assignment: RiskAssignment,
    triples: Vec<Triple>,
    diagnostics: Vec<Diagnostic>,
}

fn type_triples(entity: &Iri, dim: Dimension, level: Level, graph: &Graph, out: &mut Vec<Triple>) -> BTreeSet<Iri> {
    let classes: BTreeSet<Iri> = dim.classes_for(level).into_iter().collect();
    for c in &classes {
        let t = Triple::new(entity.clone(), ns::rdf_type(), c.clone());
        if !graph.contains(&t) {
            out.push(t);
        }
    }
    classes
}

fn classify_event(id: &Iri, graph: &Graph, vocab: &Vocabulary) -> Partial {
    let p = preds();
    let mut diagnostics = Vec::new();
    let view = read_event(graph, id, &mut diagnostics);
    let report = explain_view(view, graph, vocab, &mut diagnostics);
    let mut triples = Vec::new();
    let mut derived = type_triples(id, Dimension::Closeness, report.closeness, graph, &mut triples);
    derived.extend(type_triples(id, Dimension::Crowdedness, report.crowdedness, graph, &mut triples));

    if let Some(loc) = &report.event.location {
        let types = place_types(loc, graph, vocab);
        for action in types.iter().filter_map(|t| vocab.class_affordances(t)).flatten() {
            let t = Triple::new(loc.clone(), p.afford.clone(), action.clone());
            if !graph.contains(&t) {
                triples.push(t);
            }
        }
    }
    for action in &report.affordances {
        let t = Triple::new(id.clone(), ns::pred::potential_action(), action.clone());
        if !graph.contains(&t) {
            triples.push(t);
        }
    }
    Partial {
        assignment: RiskAssignment {
            entity: id.clone(),
            kind: EntityKind::Event,
            closeness: Some(report.closeness),
            crowdedness: Some(report.crowdedness),
            enclosedness: Some(report.enclosedness),
            derived_classes: derived,
            potential_actions: report.affordances,
        },
        triples,
        diagnostics,
    }
}

fn classify_situation(id: &Iri, graph: &Graph, vocab: &Vocabulary) -> Partial {
    let mut diagnostics = Vec::new();
    let view = read_situation(graph, id, &mut diagnostics);
    let (level, d) = classify_closed_space(&view, graph, vocab);
    diagnostics.extend(d);
    let mut triples = Vec::new();
    let derived = type_triples(id, Dimension::Enclosedness, level, graph, &mut triples);
    Partial {
        assignment: RiskAssignment {
            entity: id.clone(),
            kind: EntityKind::Situation,
            closeness: None,
            crowdedness: None,
            enclosedness: Some(level),
            derived_classes: derived,
            potential_actions: BTreeSet::new(),
        },
        triples,
        diagnostics,
    }
}

/// Classifies every event, situation and aged person in `graph`.
///
/// Per-entity work runs in parallel; the merged result is independent of scheduling.
pub fn classify_all(graph: &Graph, vocab: &Vocabulary) -> Classification {
    let events: Vec<&Iri> = event_ids(graph).collect();
    let situations: Vec<&Iri> = situation_ids(graph).collect();

    let mut partials: Vec<Partial> = situations.par_iter().map(|s| classify_situation(s, graph, vocab)).collect();
    partials.extend(events.par_iter().map(|e| classify_event(e, graph, vocab)).collect::<Vec<_>>());

    let mut out = Classification::default();
    for part in partials {
        out.inferred.extend(part.triples);
        out.diagnostics.extend(part.diagnostics);
        out.assignments.insert(part.assignment.entity.clone(), part.assignment);
    }

    let rdf_type = ns::rdf_type();
    let age_pred = &preds().age;
    for person in person_ids(graph) {
        let view = read_person(graph, person);
        let (Some(age), Some(node)) = (view.age, view.age_node) else {
            out.diagnostics.push(Diagnostic::new(
                person,
                DiagnosticCode::InvalidAge,
                &format!("age is not a non-negative integer: {:?}", graph.object(person, age_pred).map(Term::value)),
            ));
            continue;
        };
        let classes = classify_age(age, vocab.age_classes());
        for c in &classes {
            let t = Triple::new(node.clone(), rdf_type.clone(), c.clone());
            if !graph.contains(&t) {
                out.inferred.insert(t);
            }
        }
        out.age_classes.insert(node, classes);
    }

    out.diagnostics.sort();
    out.diagnostics.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::parse_turtle;

    const PREFIXES: &str = "@prefix : <http://plod.info/rdf/> .\n@prefix id: <http://plod.info/rdf/id/> .\n";

    fn graph(body: &str) -> Graph {
        parse_turtle(&format!("{PREFIXES}{body}")).unwrap()
    }

    fn event_at(place_class: &str, actions: &str, contexts: &str, begin: &str, end: &str) -> Graph {
        graph(&format!(
            r#"
            id:e a schema:Event ; schema:location id:p ; :time id:t {actions} {contexts} .
            id:p a :{place_class} .
            id:t a time:TemporalEntity ;
                time:hasBeginning "2020-04-01T{begin}:00"^^xsd:dateTime ;
                time:hasEnd "2020-04-01T{end}:00"^^xsd:dateTime .
            "#
        ))
    }

    fn level_of(g: &Graph, dim: Dimension) -> Level {
        let c = classify_all(g, &Vocabulary::standard());
        c.get(&ns::id("e")).unwrap().levels().get(dim)
    }

    #[test]
    fn ages() {
        let defs = Vocabulary::core().age_classes().to_vec();
        assert_eq!(classify_age(35, &defs), [ns::plod("AgeOf30s"), ns::plod("AgeOfUnder60s")].into_iter().collect());
        assert!(classify_age(30, &defs).contains(&ns::plod("AgeOf30s")));
        assert!(!classify_age(60, &defs).contains(&ns::plod("AgeOfUnder60s")));
    }

    #[test]
    fn affordances_by_place() {
        let v = Vocabulary::core();
        let g = graph("id:r a :Restaurant . id:g a :Gym . id:o a :OutdoorFacility . id:u :city \"x\" .");
        let set = |names: &[&str]| names.iter().map(|n| ns::plod(n)).collect::<BTreeSet<_>>();
        assert_eq!(derive_affordances(&ns::id("r"), &g, &v).0, set(&["removeMask", "talk"]));
        assert_eq!(derive_affordances(&ns::id("g"), &g, &v).0, set(&["shareThing"]));
        assert!(derive_affordances(&ns::id("o"), &g, &v).0.is_empty());
        let (a, d) = derive_affordances(&ns::id("u"), &g, &v);
        assert!(a.is_empty());
        assert_eq!(d.unwrap().code, DiagnosticCode::UntypedPlace);
    }

    #[test]
    fn restaurant_dinner_is_high_close_contact() {
        let g = event_at("Restaurant", "", "; :context :relax", "12:00", "13:00");
        assert_eq!(level_of(&g, Dimension::Closeness), Level::High);
        let c = classify_all(&g, &Vocabulary::standard());
        let pa = Triple::new(ns::id("e"), ns::pred::potential_action(), ns::plod("removeMask"));
        assert!(c.inferred.contains(&pa));
        for class in ["HighLevelCloseContact", "MediumLevelCloseContact", "CloseContact"] {
            assert!(c.inferred.contains(&Triple::new(ns::id("e"), ns::rdf_type(), ns::plod(class))));
        }
    }

    #[test]
    fn fifteen_minutes_is_not_enough() {
        let g = event_at("Restaurant", "", "; :context :relax", "12:00", "12:15");
        assert_eq!(level_of(&g, Dimension::Closeness), Level::Low);
        let g = event_at("Restaurant", "", "; :context :relax", "12:00", "12:16");
        assert_eq!(level_of(&g, Dimension::Closeness), Level::High);
    }

    #[test]
    fn gym_talk_is_medium() {
        let g = event_at("Gym", "; :action :talk", "; :context :facetoface", "10:00", "10:30");
        assert_eq!(level_of(&g, Dimension::Closeness), Level::Medium);
    }

    #[test]
    fn grouped_and_dl_precedence_differ_without_duration() {
        let grouped = RiskAxiomConfig::default();
        let dl = RiskAxiomConfig { close_contact_precedence: ClosePrecedence::DlStandard, ..grouped };
        assert_eq!(close_contact_level(2, 0, Some(5.0), 0, &grouped), Level::Low);
        assert_eq!(close_contact_level(2, 0, Some(5.0), 0, &dl), Level::High);
        assert_eq!(close_contact_level(0, 2, None, 1, &dl), Level::Low);
    }

    const BUS: &str = r#"
        id:event_0 a schema:Event ;
            :agent id:person_0 ;
            :action :talk ;
            :context :facetoface, :relax ;
            schema:location id:Bus_0 .
        id:Bus_0 a :Bus .
        id:situation_0 a :Situation ;
            :isSituationOf id:Bus_0 ;
            :context :crowded, :smallSpace .
    "#;

    #[test]
    fn bus_listing() {
        let g = graph(BUS);
        let v = Vocabulary::core();
        let c = classify_all(&g, &v);
        let e = c.get(&ns::id("event_0")).unwrap();
        assert_eq!(e.crowdedness, Some(Level::High));
        assert_eq!(e.enclosedness, Some(Level::High));
        assert_eq!(e.closeness, Some(Level::Low));
        assert_eq!(c.get(&ns::id("situation_0")).unwrap().enclosedness, Some(Level::High));
        assert!(c.diagnostics.iter().any(|d| d.code == DiagnosticCode::UndefinedDuration));

        let mut d = Vec::new();
        let view = read_event(&g, &ns::id("event_0"), &mut d);
        let (pooled, _) = pooled_contexts(&view, &g, &v);
        assert_eq!(pooled.behavioral, [ns::plod("facetoface"), ns::plod("relax")].into_iter().collect());
        assert_eq!(pooled.spatial, [ns::plod("crowded"), ns::plod("smallSpace")].into_iter().collect());

        let off = v.with_thresholds(RiskAxiomConfig::default().with_context_pooling(false)).unwrap();
        assert_eq!(classify_all(&g, &off).get(&ns::id("event_0")).unwrap().crowdedness, Some(Level::Low));
    }

    #[test]
    fn crowding_levels() {
        let cfg = RiskAxiomConfig::default();
        assert_eq!(crowding_level(1, 2, &cfg), Level::High);
        assert_eq!(crowding_level(1, 1, &cfg), Level::Medium);
        assert_eq!(crowding_level(0, 2, &cfg), Level::Low);
    }

    #[test]
    fn closed_space_levels() {
        let g = graph(
            r#"
            id:s1 a :Situation ; :isSituationOf id:r .
            id:r a :Restaurant .
            id:s2 a :Situation ; :isSituationOf id:o ; :context :crowded .
            id:o a :OutdoorFacility .
            id:s3 a :Situation ; :isSituationOf id:u .
            "#,
        );
        let c = classify_all(&g, &Vocabulary::core());
        assert_eq!(c.get(&ns::id("s1")).unwrap().enclosedness, Some(Level::Medium));
        assert_eq!(c.get(&ns::id("s2")).unwrap().enclosedness, Some(Level::Low));
        assert_eq!(c.get(&ns::id("s3")).unwrap().enclosedness, Some(Level::Low));
        assert!(c.diagnostics.iter().any(|d| d.code == DiagnosticCode::UntypedPlace && d.entity == ns::id("u")));
    }

    #[test]
    fn timed_situation_must_overlap() {
        let g = graph(
            r#"
            id:e a schema:Event ; schema:location id:b ; :context :relax ; :time id:te .
            id:te time:hasBeginning "2020-04-01T10:00:00"^^xsd:dateTime ;
                  time:hasEnd "2020-04-01T11:00:00"^^xsd:dateTime .
            id:b a :Bus .
            id:s a :Situation ; :isSituationOf id:b ; :context :crowded, :smallSpace ; :time id:ts .
            id:ts time:hasBeginning "2020-04-01T11:00:00"^^xsd:dateTime ;
                  time:hasEnd "2020-04-01T12:00:00"^^xsd:dateTime .
            "#,
        );
        assert_eq!(level_of(&g, Dimension::Crowdedness), Level::Low);
        assert_eq!(level_of(&g, Dimension::Enclosedness), Level::Low);
    }

    #[test]
    fn empty_graph_and_layering() {
        assert!(classify_all(&Graph::new(), &Vocabulary::core()).assignments.is_empty());
        let g = graph(BUS);
        let before = g.clone();
        let c = classify_all(&g, &Vocabulary::core());
        assert_eq!(g, before);
        for t in c.inferred.iter() {
            assert!(!g.contains(&t));
            assert!(t.predicate == ns::rdf_type() || t.predicate == ns::pred::afford() || t.predicate == ns::pred::potential_action());
        }
    }

    #[test]
    fn unregistered_context_is_ignored() {
        let g = event_at("Restaurant", "", "; :context :relax, :mystery", "12:00", "13:00");
        let c = classify_all(&g, &Vocabulary::standard());
        assert!(c.diagnostics.iter().any(|d| d.code == DiagnosticCode::UnregisteredContext));
        assert_eq!(c.get(&ns::id("e")).unwrap().closeness, Some(Level::High));
    }

    #[test]
    fn age_inference() {
        let g = graph("id:p a schema:Person ; :age id:p_age . id:p_age a :Age ; :value 35 .");
        let c = classify_all(&g, &Vocabulary::core());
        assert!(c.inferred.contains(&Triple::new(ns::id("p_age"), ns::rdf_type(), ns::plod("AgeOf30s"))));
        assert_eq!(c.age_classes[&ns::id("p_age")].len(), 2);
    }

    #[test]
    fn csv_report() {
        let c = classify_all(&graph(BUS), &Vocabulary::core());
        let csv = c.to_csv();
        assert!(csv.starts_with("entity,kind,closeness,crowdedness,enclosedness\n"));
        assert!(csv.contains("http://plod.info/rdf/id/event_0,event,low,high,high"));
    }
}
