use std::collections::{BTreeMap, BTreeSet};

use super::{Iri, Term, Triple};

type Index<A, B, C> = BTreeMap<A, BTreeMap<B, BTreeSet<C>>>;

/// An indexed set of triples.
///
/// Three nested indexes (subject/predicate/object, predicate/object/subject and
/// object/subject/predicate) cover every bound-position combination. All iteration is
/// in (subject, predicate, object) order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    spo: Index<Iri, Iri, Term>,
    pos: Index<Iri, Term, Iri>,
    osp: Index<Term, Iri, Iri>,
    len: usize,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Returns `true` if the triple was not already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        let Triple { subject, predicate, object } = triple;
        let added = self
            .spo
            .entry(subject.clone())
            .or_default()
            .entry(predicate.clone())
            .or_default()
            .insert(object.clone());
        if !added {
            return false;
        }
        self.pos
            .entry(predicate.clone())
            .or_default()
            .entry(object.clone())
            .or_default()
            .insert(subject.clone());
        self.osp.entry(object).or_default().entry(subject).or_default().insert(predicate);
        self.len += 1;
        true
    }

    pub fn add(&mut self, subject: &Iri, predicate: &Iri, object: impl Into<Term>) -> bool {
        self.insert(Triple::new(subject.clone(), predicate.clone(), object))
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        let removed = remove_nested(&mut self.spo, &triple.subject, &triple.predicate, &triple.object);
        if removed {
            remove_nested(&mut self.pos, &triple.predicate, &triple.object, &triple.subject);
            remove_nested(&mut self.osp, &triple.object, &triple.subject, &triple.predicate);
            self.len -= 1;
        }
        removed
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.spo
            .get(&triple.subject)
            .and_then(|m| m.get(&triple.predicate))
            .is_some_and(|set| set.contains(&triple.object))
    }

    pub fn extend<I: IntoIterator<Item = Triple>>(&mut self, triples: I) -> usize {
        triples.into_iter().filter(|t| self.insert(t.clone())).count()
    }

    pub fn merge(&mut self, other: &Graph) -> usize {
        self.extend(other.iter())
    }

    /// All triples in (subject, predicate, object) order.
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().flat_map(|(s, by_p)| {
            by_p.iter()
                .flat_map(move |(p, objs)| objs.iter().map(move |o| Triple::new(s.clone(), p.clone(), o.clone())))
        })
    }

    pub fn subjects(&self) -> impl Iterator<Item = &Iri> + '_ {
        self.spo.keys()
    }

    /// Pattern match; `None` positions are wildcards. Results are sorted by
    /// (subject, predicate, object).
    pub fn match_pattern(&self, s: Option<&Iri>, p: Option<&Iri>, o: Option<&Term>) -> Vec<Triple> {
        let mut out = Vec::new();
        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => {
                let t = Triple::new(s.clone(), p.clone(), o.clone());
                if self.contains(&t) {
                    out.push(t);
                }
            }
            (Some(s), Some(p), None) => {
                out.extend(self.objects(s, p).map(|o| Triple::new(s.clone(), p.clone(), o.clone())));
            }
            (Some(s), None, o) => {
                if let Some(by_p) = self.spo.get(s) {
                    for (p, objs) in by_p {
                        for obj in objs {
                            if o.is_none_or(|o| o == obj) {
                                out.push(Triple::new(s.clone(), p.clone(), obj.clone()));
                            }
                        }
                    }
                }
            }
            (None, Some(p), Some(o)) => {
                out.extend(self.subjects_with(p, o).map(|s| Triple::new(s.clone(), p.clone(), o.clone())));
            }
            (None, Some(p), None) => {
                if let Some(by_o) = self.pos.get(p) {
                    for (obj, subs) in by_o {
                        for sub in subs {
                            out.push(Triple::new(sub.clone(), p.clone(), obj.clone()));
                        }
                    }
                }
                out.sort();
            }
            (None, None, Some(o)) => {
                if let Some(by_s) = self.osp.get(o) {
                    for (sub, preds) in by_s {
                        for pred in preds {
                            out.push(Triple::new(sub.clone(), pred.clone(), o.clone()));
                        }
                    }
                }
            }
            (None, None, None) => out.extend(self.iter()),
        }
        out
    }

    /// Objects of `(s, p, ?)` in term order.
    pub fn objects<'a>(&'a self, s: &Iri, p: &Iri) -> impl Iterator<Item = &'a Term> + 'a {
        self.spo.get(s).and_then(|m| m.get(p)).into_iter().flatten()
    }

    pub fn object<'a>(&'a self, s: &Iri, p: &Iri) -> Option<&'a Term> {
        self.objects(s, p).next()
    }

    pub fn object_iris<'a>(&'a self, s: &Iri, p: &Iri) -> impl Iterator<Item = &'a Iri> + 'a {
        self.objects(s, p).filter_map(Term::as_iri)
    }

    /// Subjects of `(?, p, o)` in IRI order.
    pub fn subjects_with<'a>(&'a self, p: &Iri, o: &Term) -> impl Iterator<Item = &'a Iri> + 'a {
        self.pos.get(p).and_then(|m| m.get(o)).into_iter().flatten()
    }

    /// `(subject, object)` pairs for predicate `p`.
    pub fn pairs<'a>(&'a self, p: &Iri) -> impl Iterator<Item = (&'a Iri, &'a Term)> + 'a {
        self.pos
            .get(p)
            .into_iter()
            .flat_map(|by_o| by_o.iter().flat_map(|(o, subs)| subs.iter().map(move |s| (s, o))))
    }

    /// Outgoing `(predicate, object)` edges of `s`.
    pub fn outgoing<'a>(&'a self, s: &Iri) -> impl Iterator<Item = (&'a Iri, &'a Term)> + 'a {
        self.spo
            .get(s)
            .into_iter()
            .flat_map(|by_p| by_p.iter().flat_map(|(p, objs)| objs.iter().map(move |o| (p, o))))
    }

    /// Incoming `(subject, predicate)` edges of `o`.
    pub fn incoming<'a>(&'a self, o: &Term) -> impl Iterator<Item = (&'a Iri, &'a Iri)> + 'a {
        self.osp
            .get(o)
            .into_iter()
            .flat_map(|by_s| by_s.iter().flat_map(|(s, preds)| preds.iter().map(move |p| (s, p))))
    }

    pub fn mentions(&self, term: &Term) -> bool {
        if self.osp.contains_key(term) {
            return true;
        }
        match term {
            Term::Iri(iri) => self.spo.contains_key(iri) || self.pos.contains_key(iri),
            Term::Literal(_) => false,
        }
    }
}

fn remove_nested<A: Ord, B: Ord, C: Ord>(index: &mut Index<A, B, C>, a: &A, b: &B, c: &C) -> bool {
    let Some(by_b) = index.get_mut(a) else { return false };
    let Some(set) = by_b.get_mut(b) else { return false };
    let removed = set.remove(c);
    if set.is_empty() {
        by_b.remove(b);
    }
    if by_b.is_empty() {
        index.remove(a);
    }
    removed
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        g.extend(iter);
        g
    }
}

/// Read-only union of an asserted graph and an optional inference layer.
#[derive(Debug, Clone, Copy)]
pub struct Layers<'a> {
    pub asserted: &'a Graph,
    pub inferred: Option<&'a Graph>,
}

impl<'a> Layers<'a> {
    pub fn new(asserted: &'a Graph, inferred: Option<&'a Graph>) -> Self {
        Layers { asserted, inferred }
    }

    pub fn asserted_only(asserted: &'a Graph) -> Self {
        Layers { asserted, inferred: None }
    }

    fn layers(&self) -> impl Iterator<Item = &'a Graph> {
        std::iter::once(self.asserted).chain(self.inferred)
    }

    pub fn match_pattern(&self, s: Option<&Iri>, p: Option<&Iri>, o: Option<&Term>) -> Vec<Triple> {
        let mut out: Vec<Triple> = self.layers().flat_map(|g| g.match_pattern(s, p, o)).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.layers().any(|g| g.contains(t))
    }

    pub fn objects(&self, s: &Iri, p: &Iri) -> BTreeSet<&'a Term> {
        self.layers().flat_map(|g| g.objects(s, p)).collect()
    }

    pub fn subjects_with(&self, p: &Iri, o: &Term) -> BTreeSet<&'a Iri> {
        self.layers().flat_map(|g| g.subjects_with(p, o)).collect()
    }

    pub fn outgoing(&self, s: &Iri) -> BTreeSet<(&'a Iri, &'a Term)> {
        self.layers().flat_map(|g| g.outgoing(s)).collect()
    }

    pub fn incoming(&self, o: &Term) -> BTreeSet<(&'a Iri, &'a Iri)> {
        self.layers().flat_map(|g| g.incoming(o)).collect()
    }

    pub fn mentions(&self, term: &Term) -> bool {
        self.layers().any(|g| g.mentions(term))
    }
}
