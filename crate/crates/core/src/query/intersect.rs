use std::collections::{BTreeMap, BTreeSet, VecDeque};

use chrono::NaiveDateTime;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::rdf::{Graph, Iri};
use crate::reasoner::{event_ids, preds, read_time};
use crate::time::OverlapMode;

/// One row of the intersection table; field names follow the projection variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct IntersectionResult {
    pub event1: Iri,
    pub place1: Iri,
    pub city1: Option<String>,
    pub event2: Iri,
    pub place2: Iri,
    pub city2: Option<String>,
}

/// Optional restriction of [`find_intersections`]. A pair is kept when either event matches.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IntersectionScope {
    /// Event place equals this place or lies inside it.
    pub place: Option<Iri>,
    pub city: Option<String>,
    /// Event interval overlaps this window.
    pub window: Option<(NaiveDateTime, NaiveDateTime)>,
    #[serde(default)]
    pub mode: OverlapMode,
}

/// Place containment via `place schema:location parent`, closed transitively.
pub struct PlaceIndex {
    ancestors: BTreeMap<Iri, BTreeSet<Iri>>,
    cities: BTreeMap<Iri, Option<String>>,
}

impl PlaceIndex {
    pub fn build<'a>(graph: &Graph, places: impl IntoIterator<Item = &'a Iri>) -> Self {
        let p = preds();
        let city = crate::rdf::ns::pred::city();
        let mut ancestors = BTreeMap::new();
        let mut cities = BTreeMap::new();
        for place in places {
            if ancestors.contains_key(place) {
                continue;
            }
            // Breadth-first, so the inherited city is the nearest one.
            let mut seen = BTreeSet::new();
            let mut order: Vec<&Iri> = Vec::new();
            let mut queue: VecDeque<&Iri> = graph.object_iris(place, &p.location).collect();
            while let Some(x) = queue.pop_front() {
                if x != place && seen.insert(x.clone()) {
                    order.push(x);
                    queue.extend(graph.object_iris(x, &p.location));
                }
            }
            let own = graph.object(place, &city).map(|t| t.value().to_string());
            let inherited = || order.iter().find_map(|a| graph.object(a, &city)).map(|t| t.value().to_string());
            cities.insert(place.clone(), own.or_else(inherited));
            ancestors.insert(place.clone(), seen);
        }
        PlaceIndex { ancestors, cities }
    }

    pub fn ancestors(&self, place: &Iri) -> Option<&BTreeSet<Iri>> {
        self.ancestors.get(place)
    }

    /// Same place, or one contains the other.
    pub fn co_located(&self, a: &Iri, b: &Iri) -> bool {
        a == b
            || self.ancestors.get(a).is_some_and(|s| s.contains(b))
            || self.ancestors.get(b).is_some_and(|s| s.contains(a))
    }

    /// The place's own city, else that of the nearest-named containing place.
    pub fn city(&self, place: &Iri) -> Option<&str> {
        self.cities.get(place)?.as_deref()
    }

    /// Connected component of each indexed place under containment.
    fn components(&self) -> BTreeMap<&Iri, usize> {
        let mut ids: BTreeMap<&Iri, usize> = BTreeMap::new();
        for (p, anc) in &self.ancestors {
            for x in std::iter::once(p).chain(anc) {
                let n = ids.len();
                ids.entry(x).or_insert(n);
            }
        }
        let mut uf = UnionFind::new(ids.len());
        for (p, anc) in &self.ancestors {
            for a in anc {
                uf.union(ids[p], ids[a]);
            }
        }
        ids.into_iter().map(|(p, i)| (p, uf.find(i))).collect()
    }
}

/// An event with usable bounds and a location, ready for the sweep.
#[derive(Debug, Clone)]
pub struct EventSpan {
    pub event: Iri,
    pub place: Iri,
    pub begin: NaiveDateTime,
    pub end: NaiveDateTime,
}

pub fn event_spans(graph: &Graph, mode: OverlapMode) -> Vec<EventSpan> {
    let p = preds();
    let mut scratch = Vec::new();
    let mut out = Vec::new();
    for e in event_ids(graph) {
        let Some(place) = graph.object_iris(e, &p.location).next() else { continue };
        let Some((begin, end)) = read_time(graph, e, &mut scratch).and_then(|t| t.bounds(mode)) else { continue };
        out.push(EventSpan { event: e.clone(), place: place.clone(), begin, end });
    }
    out
}

fn in_scope(s: &EventSpan, scope: &IntersectionScope, places: &PlaceIndex) -> bool {
    if let Some(p) = &scope.place {
        if s.place != *p && !places.ancestors(&s.place).is_some_and(|a| a.contains(p)) {
            return false;
        }
    }
    if let Some(c) = &scope.city {
        if places.city(&s.place) != Some(c.as_str()) {
            return false;
        }
    }
    if let Some((b, e)) = scope.window {
        if !(s.end > b && s.begin < e) {
            return false;
        }
    }
    true
}

/// All ordered pairs of distinct events that overlap in time and are co-located.
///
/// Events are bucketed by containment component, sorted by begin, and swept with an
/// active set; both orderings of every pair are reported, sorted.
pub fn find_intersections(graph: &Graph, scope: &IntersectionScope) -> Vec<IntersectionResult> {
    let spans = event_spans(graph, scope.mode);
    let places = PlaceIndex::build(graph, spans.iter().map(|s| &s.place));

    let components = places.components();
    let mut buckets: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, s) in spans.iter().enumerate() {
        buckets.entry(components[&s.place]).or_default().push(i);
    }

    let mut pairs = BTreeSet::new();
    for idx in buckets.values_mut() {
        idx.sort_by(|a, b| spans[*a].begin.cmp(&spans[*b].begin).then(a.cmp(b)));
        let mut active: Vec<usize> = Vec::new();
        for &i in idx.iter() {
            let cur = &spans[i];
            active.retain(|&j| spans[j].end > cur.begin);
            for &j in &active {
                let other = &spans[j];
                if other.event != cur.event
                    && cur.begin < other.end
                    && other.begin < cur.end
                    && places.co_located(&cur.place, &other.place) {
                    pairs.insert((j.min(i), j.max(i)));
                }
            }
            active.push(i);
        }
    }

    let mut out = Vec::with_capacity(pairs.len() * 2);
    for (a, b) in pairs {
        let (x, y) = (&spans[a], &spans[b]);
        if !(in_scope(x, scope, &places) || in_scope(y, scope, &places)) {
            continue;
        }
        out.push(row(x, y, &places));
        out.push(row(y, x, &places));
    }
    out.sort();
    out.dedup();
    out
}

fn row(a: &EventSpan, b: &EventSpan, places: &PlaceIndex) -> IntersectionResult {
    IntersectionResult {
        event1: a.event.clone(),
        place1: a.place.clone(),
        city1: places.city(&a.place).map(str::to_string),
        event2: b.event.clone(),
        place2: b.place.clone(),
        city2: places.city(&b.place).map(str::to_string),
    }
}

pub fn intersections_to_csv(rows: &[IntersectionResult]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).unwrap();
    }
    if rows.is_empty() {
        w.write_record(["event1", "place1", "city1", "event2", "place2", "city2"]).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}
