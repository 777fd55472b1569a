//! Brute-force re-derivations used as test oracles.
//!
//! Every lookup is a linear scan over the triple list and every closure is a naive fixpoint
//! over the raw registry tables. Nothing here calls into the reasoner or the query module.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDateTime;
use ciro_core::rdf::{Graph, Iri, Term, Triple};
use ciro_core::risk::{Level, Levels};
use ciro_core::vocab::{ClassKind, ClosePrecedence, Registry, RiskAxiomConfig};

const PLOD: &str = "http://plod.info/rdf/";
const SCHEMA: &str = "http://schema.org/";
const TIME: &str = "http://www.w3.org/2006/time#";
const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

fn iri(s: String) -> Iri {
    Iri::new(s).unwrap()
}
fn plod(l: &str) -> Iri {
    iri(format!("{PLOD}{l}"))
}
fn schema(l: &str) -> Iri {
    iri(format!("{SCHEMA}{l}"))
}
fn time(l: &str) -> Iri {
    iri(format!("{TIME}{l}"))
}
fn rdf_type() -> Iri {
    iri(RDF_TYPE.to_string())
}

/// A graph as a flat triple list.
pub struct Scan {
    triples: Vec<Triple>,
}

impl Scan {
    pub fn new(graphs: &[&Graph]) -> Self {
        let mut triples: Vec<Triple> = graphs.iter().flat_map(|g| g.iter()).collect();
        triples.sort();
        triples.dedup();
        Scan { triples }
    }

    pub fn objects(&self, s: &Iri, p: &Iri) -> Vec<Term> {
        self.triples.iter().filter(|t| &t.subject == s && &t.predicate == p).map(|t| t.object.clone()).collect()
    }

    pub fn object_iris(&self, s: &Iri, p: &Iri) -> Vec<Iri> {
        self.objects(s, p).into_iter().filter_map(|t| t.as_iri().cloned()).collect()
    }

    /// The smallest IRI object, which is what a single-valued read sees.
    pub fn first_iri(&self, s: &Iri, p: &Iri) -> Option<Iri> {
        self.object_iris(s, p).into_iter().min()
    }

    pub fn subjects(&self, p: &Iri, o: &Term) -> Vec<Iri> {
        self.triples.iter().filter(|t| &t.predicate == p && &t.object == o).map(|t| t.subject.clone()).collect()
    }

    pub fn typed(&self, class: &Iri) -> Vec<Iri> {
        let mut v = self.subjects(&rdf_type(), &Term::Iri(class.clone()));
        v.sort();
        v.dedup();
        v
    }

    fn date(&self, s: &Iri, p: &Iri) -> Option<NaiveDateTime> {
        let mut v = self.objects(s, p);
        v.sort();
        v.iter().find_map(|t| t.as_literal()?.as_date_time())
    }

    fn number(&self, s: &Iri, p: &Iri) -> Option<f64> {
        let mut v = self.objects(s, p);
        v.sort();
        v.first().and_then(|t| t.as_literal()?.as_f64())
    }

    pub fn time_of(&self, entity: &Iri) -> Option<NaiveTime> {
        let node = self.first_iri(entity, &plod("time"))?;
        let mut duration_nodes = self.object_iris(&node, &time("hasDuration"));
        duration_nodes.sort();
        let duration = duration_nodes
            .iter()
            .find_map(|d| self.number(d, &time("numericDuration")))
            .or_else(|| self.number(&node, &time("numericDuration")));
        Some(NaiveTime {
            begin: self.date(&node, &time("hasBeginning")),
            end: self.date(&node, &time("hasEnd")),
            reliable_begin: self.date(&node, &plod("hasReliableBeginning")),
            reliable_end: self.date(&node, &plod("hasReliableEnd")),
            possible_begin: self.date(&node, &plod("hasPossibleBeginning")),
            possible_end: self.date(&node, &plod("hasPossibleEnd")),
            duration,
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct NaiveTime {
    pub begin: Option<NaiveDateTime>,
    pub end: Option<NaiveDateTime>,
    pub reliable_begin: Option<NaiveDateTime>,
    pub reliable_end: Option<NaiveDateTime>,
    pub possible_begin: Option<NaiveDateTime>,
    pub possible_end: Option<NaiveDateTime>,
    pub duration: Option<f64>,
}

impl NaiveTime {
    pub fn reliable(&self) -> Option<(NaiveDateTime, NaiveDateTime)> {
        Some((self.reliable_begin.or(self.begin)?, self.reliable_end.or(self.end)?))
    }

    pub fn possible(&self) -> Option<(NaiveDateTime, NaiveDateTime)> {
        Some((
            self.possible_begin.or(self.reliable_begin).or(self.begin)?,
            self.possible_end.or(self.reliable_end).or(self.end)?,
        ))
    }

    pub fn minutes(&self) -> Option<f64> {
        if self.duration.is_some() {
            return self.duration;
        }
        let (b, e) = self.reliable()?;
        if e < b {
            return None;
        }
        Some((e - b).num_seconds() as f64 / 60.0)
    }
}

fn overlaps(a: (NaiveDateTime, NaiveDateTime), b: (NaiveDateTime, NaiveDateTime)) -> bool {
    a.0 < b.1 && b.0 < a.1
}

/// Class facts recomputed from the registry tables.
pub struct NaiveVocab {
    kinds: BTreeMap<Iri, ClassKind>,
    /// Reflexive-transitive superclasses.
    supers: BTreeMap<Iri, BTreeSet<Iri>>,
    individuals: BTreeMap<Iri, BTreeSet<Iri>>,
    affordances: BTreeMap<Iri, BTreeSet<Iri>>,
    pub cfg: RiskAxiomConfig,
}

impl NaiveVocab {
    pub fn new(r: &Registry) -> Self {
        let mut supers: BTreeMap<Iri, BTreeSet<Iri>> = r
            .classes
            .keys()
            .map(|c| {
                let mut s: BTreeSet<Iri> = r.parents.get(c).cloned().unwrap_or_default();
                s.insert(c.clone());
                (c.clone(), s)
            })
            .collect();
        loop {
            let mut changed = false;
            let snapshot = supers.clone();
            for set in supers.values_mut() {
                let extra: Vec<Iri> = set.iter().flat_map(|s| snapshot.get(s).into_iter().flatten()).cloned().collect();
                for x in extra {
                    changed |= set.insert(x);
                }
            }
            if !changed {
                break;
            }
        }
        NaiveVocab {
            kinds: r.classes.clone(),
            supers,
            individuals: r.individuals.clone(),
            affordances: r.affordances.clone(),
            cfg: r.thresholds,
        }
    }

    pub fn is_a(&self, class: &Iri, target: &Iri) -> bool {
        self.supers.get(class).is_some_and(|s| s.contains(target))
    }

    fn member(&self, individual: &Iri, target: &str) -> bool {
        let t = plod(target);
        self.individuals.get(individual).is_some_and(|cs| cs.iter().any(|c| self.is_a(c, &t)))
    }

    pub fn droplet(&self, action: &Iri) -> bool {
        self.member(action, "DropletReachableAction")
    }
    pub fn spatial(&self, context: &Iri) -> bool {
        self.member(context, "SpatialRiskContext")
    }
    pub fn behavioral(&self, context: &Iri) -> bool {
        self.member(context, "BehavioralRiskContext")
    }

    pub fn is_place_class(&self, c: &Iri) -> bool {
        self.kinds.get(c) == Some(&ClassKind::Place)
    }

    pub fn enclosing(&self, c: &Iri) -> bool {
        self.is_a(c, &plod("IndoorFacility")) || self.is_a(c, &plod("Public_transportation"))
    }

    pub fn afforded_by_class(&self, c: &Iri) -> BTreeSet<Iri> {
        let mut out = BTreeSet::new();
        for s in self.supers.get(c).into_iter().flatten() {
            out.extend(self.affordances.get(s).into_iter().flatten().cloned());
        }
        out
    }

    /// The class and all its subclasses.
    pub fn below(&self, c: &Iri) -> BTreeSet<Iri> {
        self.supers.iter().filter(|(_, s)| s.contains(c)).map(|(k, _)| k.clone()).collect()
    }
}

/// Everything the oracle derives for one event.
#[derive(Debug, Clone, PartialEq)]
pub struct EventFacts {
    pub afforded_droplets: usize,
    pub performed_droplets: usize,
    pub behavioral: usize,
    pub spatial: usize,
    pub minutes: Option<f64>,
    pub matched: Vec<(Iri, Level)>,
    pub levels: Levels,
}

fn place_classes(g: &Scan, v: &NaiveVocab, place: &Iri) -> Vec<Iri> {
    g.object_iris(place, &rdf_type()).into_iter().filter(|c| v.is_place_class(c)).collect()
}

/// Closed-space level of one situation, from its own contexts only.
pub fn situation_level(g: &Scan, v: &NaiveVocab, s: &Iri) -> Level {
    let Some(place) = g.first_iri(s, &plod("isSituationOf")) else { return Level::Low };
    let types = place_classes(g, v, &place);
    if !types.iter().any(|t| v.enclosing(t)) {
        return Level::Low;
    }
    let own: BTreeSet<Iri> = g.object_iris(s, &plod("context")).into_iter().filter(|c| v.spatial(c)).collect();
    if own.is_empty() { Level::Medium } else { Level::High }
}

fn close_contact(f: &EventFacts, cfg: &RiskAxiomConfig) -> Level {
    let long = matches!(f.minutes, Some(m) if m > cfg.duration_threshold);
    let social = f.behavioral >= cfg.behavioral_count as usize;
    let holds = |n: u32| {
        let n = n as usize;
        let afford = f.afforded_droplets >= n;
        let act = f.performed_droplets >= n;
        match cfg.close_contact_precedence {
            ClosePrecedence::Grouped => (afford || act) && long && social,
            ClosePrecedence::DlStandard => afford || (act && long && social),
        }
    };
    if holds(cfg.high_droplet_count) {
        Level::High
    } else if holds(cfg.medium_droplet_count) {
        Level::Medium
    } else {
        Level::Low
    }
}

fn crowding(f: &EventFacts, cfg: &RiskAxiomConfig) -> Level {
    let social = f.behavioral >= cfg.behavioral_count as usize;
    if social && f.spatial >= cfg.high_crowding_spatial_count as usize {
        Level::High
    } else if social && f.spatial >= cfg.medium_crowding_spatial_count as usize {
        Level::Medium
    } else {
        Level::Low
    }
}

pub fn event_facts(g: &Scan, v: &NaiveVocab, e: &Iri) -> EventFacts {
    let place = g.first_iri(e, &schema("location"));
    let when = g.time_of(e);

    let mut afforded = BTreeSet::new();
    let mut matched = Vec::new();
    let mut contexts: BTreeSet<Iri> = g.object_iris(e, &plod("context")).into_iter().collect();
    if let Some(place) = &place {
        let types = place_classes(g, v, place);
        if !types.is_empty() {
            for t in &types {
                afforded.extend(v.afforded_by_class(t));
            }
            afforded.extend(g.object_iris(place, &plod("afford")));
        }
        let mut situations = g.subjects(&plod("isSituationOf"), &Term::Iri(place.clone()));
        situations.sort();
        situations.dedup();
        for s in situations {
            let st = g.time_of(&s);
            let ok = match st.as_ref().and_then(NaiveTime::reliable) {
                None => true,
                Some(sb) => when.as_ref().and_then(NaiveTime::reliable).is_some_and(|eb| overlaps(eb, sb)),
            };
            if ok {
                if v.cfg.context_pooling {
                    contexts.extend(g.object_iris(&s, &plod("context")));
                }
                matched.push((s.clone(), situation_level(g, v, &s)));
            }
        }
    }
    let actions: BTreeSet<Iri> = g.object_iris(e, &plod("action")).into_iter().collect();
    let mut f = EventFacts {
        afforded_droplets: afforded.iter().filter(|a| v.droplet(a)).count(),
        performed_droplets: actions.iter().filter(|a| v.droplet(a)).count(),
        behavioral: contexts.iter().filter(|c| v.behavioral(c)).count(),
        spatial: contexts.iter().filter(|c| v.spatial(c)).count(),
        minutes: when.as_ref().and_then(NaiveTime::minutes),
        matched,
        levels: Levels::new(Level::Low, Level::Low, Level::Low),
    };
    f.levels = Levels::new(
        close_contact(&f, &v.cfg),
        crowding(&f, &v.cfg),
        f.matched.iter().map(|(_, l)| *l).max().unwrap_or(Level::Low),
    );
    f
}

/// Levels of every event in `g`.
pub fn classify(g: &Graph, registry: &Registry) -> BTreeMap<Iri, Levels> {
    let scan = Scan::new(&[g]);
    let v = NaiveVocab::new(registry);
    scan.typed(&schema("Event")).into_iter().map(|e| {
        let l = event_facts(&scan, &v, &e).levels;
        (e, l)
    }).collect()
}

/// Closed-space level of every situation in `g`.
pub fn classify_situations(g: &Graph, registry: &Registry) -> BTreeMap<Iri, Level> {
    let scan = Scan::new(&[g]);
    let v = NaiveVocab::new(registry);
    scan.typed(&plod("Situation")).into_iter().map(|s| {
        let l = situation_level(&scan, &v, &s);
        (s, l)
    }).collect()
}

/// Oracle scope, mirroring the fields of the engine's scope type.
#[derive(Debug, Clone, Default)]
pub struct Scope {
    pub place: Option<Iri>,
    pub city: Option<String>,
    pub window: Option<(NaiveDateTime, NaiveDateTime)>,
    pub possible: bool,
}

pub type Row = (Iri, Iri, Option<String>, Iri, Iri, Option<String>);

/// Strict ancestors of `place` under `schema:location`, grouped by distance.
fn ancestor_layers(g: &Scan, place: &Iri) -> Vec<Vec<Iri>> {
    let loc = schema("location");
    let mut seen: BTreeSet<Iri> = BTreeSet::new();
    let mut layers = Vec::new();
    let mut frontier = vec![place.clone()];
    loop {
        let mut next: Vec<Iri> = Vec::new();
        for p in &frontier {
            for a in g.object_iris(p, &loc) {
                if &a != place && !seen.contains(&a) && !next.contains(&a) {
                    next.push(a);
                }
            }
        }
        if next.is_empty() {
            return layers;
        }
        next.sort();
        seen.extend(next.iter().cloned());
        frontier = next.clone();
        layers.push(next);
    }
}

fn city_of(g: &Scan, place: &Iri, layers: &[Vec<Iri>]) -> Option<String> {
    let c = plod("city");
    let own = |p: &Iri| {
        let mut v = g.objects(p, &c);
        v.sort();
        v.first().map(|t| t.value().to_string())
    };
    own(place).or_else(|| layers.iter().flatten().find_map(own))
}

/// All ordered co-located, time-overlapping pairs, by a full nested loop.
pub fn intersections(g: &Graph, scope: &Scope) -> BTreeSet<Row> {
    let scan = Scan::new(&[g]);
    struct Ev {
        id: Iri,
        place: Iri,
        span: (NaiveDateTime, NaiveDateTime),
        ancestors: BTreeSet<Iri>,
        city: Option<String>,
    }
    let mut evs = Vec::new();
    for e in scan.typed(&schema("Event")) {
        let Some(place) = scan.first_iri(&e, &schema("location")) else { continue };
        let Some(t) = scan.time_of(&e) else { continue };
        let Some(span) = (if scope.possible { t.possible() } else { t.reliable() }) else { continue };
        let layers = ancestor_layers(&scan, &place);
        let city = city_of(&scan, &place, &layers);
        evs.push(Ev { id: e, place, span, ancestors: layers.into_iter().flatten().collect(), city });
    }
    let in_scope = |e: &Ev| {
        scope.place.as_ref().is_none_or(|p| &e.place == p || e.ancestors.contains(p))
            && scope.city.as_ref().is_none_or(|c| e.city.as_ref() == Some(c))
            && scope.window.is_none_or(|w| overlaps(e.span, w))
    };
    let mut out = BTreeSet::new();
    for a in &evs {
        for b in &evs {
            if a.id == b.id || !overlaps(a.span, b.span) {
                continue;
            }
            let co = a.place == b.place || a.ancestors.contains(&b.place) || b.ancestors.contains(&a.place);
            if co && (in_scope(a) || in_scope(b)) {
                out.insert((a.id.clone(), a.place.clone(), a.city.clone(), b.id.clone(), b.place.clone(), b.city.clone()));
            }
        }
    }
    out
}

/// Co-attendee counts over the union of `layers`, sorted by count descending then agent.
pub fn co_attendees(layers: &[&Graph], registry: &Registry, person: &Iri, risk: &Iri) -> Vec<(Iri, usize)> {
    let g = Scan::new(layers);
    let v = NaiveVocab::new(registry);
    let qualifying = v.below(risk);
    let agent = plod("agent");
    let mut counts: BTreeMap<Iri, usize> = BTreeMap::new();
    let mut events = g.subjects(&agent, &Term::Iri(person.clone()));
    events.sort();
    events.dedup();
    for e in events {
        let mut risky = false;
        for place in g.object_iris(&e, &schema("location")) {
            for s in g.subjects(&plod("isSituationOf"), &Term::Iri(place.clone())) {
                for t in g.object_iris(&s, &rdf_type()) {
                    risky |= qualifying.contains(&t);
                }
            }
        }
        if !risky {
            continue;
        }
        let mut others = g.object_iris(&e, &agent);
        others.sort();
        others.dedup();
        for a in others {
            if &a != person {
                *counts.entry(a).or_default() += 1;
            }
        }
    }
    let mut rows: Vec<(Iri, usize)> = counts.into_iter().collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    rows
}

/// Nodes within `depth` undirected hops of `center`, and the edges touching nodes closer
/// than `depth`. Literals are never expanded.
pub fn neighborhood(layers: &[&Graph], center: &Iri, depth: usize) -> (BTreeSet<Term>, BTreeSet<Triple>) {
    let g = Scan::new(layers);
    let mut dist: BTreeMap<Term, usize> = BTreeMap::from([(Term::Iri(center.clone()), 0)]);
    let mut edges = BTreeSet::new();
    for d in 0..depth {
        let frontier: Vec<Iri> =
            dist.iter().filter(|(_, k)| **k == d).filter_map(|(t, _)| t.as_iri().cloned()).collect();
        for n in frontier {
            for t in &g.triples {
                let other = if t.subject == n {
                    t.object.clone()
                } else if t.object == Term::Iri(n.clone()) {
                    Term::Iri(t.subject.clone())
                } else {
                    continue;
                };
                edges.insert(t.clone());
                dist.entry(other).or_insert(d + 1);
            }
        }
    }
    (dist.into_keys().collect(), edges)
}
