use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use super::{ClassKind, Registry, RiskAxiomConfig};
use crate::rdf::{ns, Iri};

/// A violated registry invariant, naming the offending entity.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "invariant", rename_all = "kebab-case")]
pub enum LintDiagnostic {
    Cycle { classes: Vec<Iri> },
    DisjointIndividual { individual: Iri, first: Iri, second: Iri },
    ThresholdOrder { name: &'static str, high: u32, medium: u32 },
    UnknownClass { class: Iri, referenced_by: Iri },
    KindMismatch { class: Iri, parent: Iri },
    IndividualNotInstanceable { individual: Iri, class: Iri },
    UnknownAffordedAction { place: Iri, action: Iri },
    AffordanceOnNonPlace { class: Iri },
    AgeBounds { class: Iri, lower: u32, upper: u32 },
    InvalidDuration { value: f64 },
}

impl LintDiagnostic {
    pub fn invariant(&self) -> &'static str {
        match self {
            LintDiagnostic::Cycle { .. } => "acyclic-hierarchy",
            LintDiagnostic::DisjointIndividual { .. } => "disjoint-individual-classes",
            LintDiagnostic::ThresholdOrder { .. } => "high-threshold-at-least-medium",
            LintDiagnostic::UnknownClass { .. } => "registered-classes",
            LintDiagnostic::KindMismatch { .. } => "consistent-class-kind",
            LintDiagnostic::IndividualNotInstanceable { .. } => "individual-class-kind",
            LintDiagnostic::UnknownAffordedAction { .. } => "afforded-action-registered",
            LintDiagnostic::AffordanceOnNonPlace { .. } => "affordance-on-place",
            LintDiagnostic::AgeBounds { .. } => "age-lower-at-most-upper",
            LintDiagnostic::InvalidDuration { .. } => "duration-threshold-non-negative",
        }
    }
}

impl fmt::Display for LintDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] ", self.invariant())?;
        match self {
            LintDiagnostic::Cycle { classes } => {
                let names: Vec<_> = classes.iter().map(|c| c.local_name()).collect();
                write!(f, "subclass cycle through {}", names.join(" -> "))
            }
            LintDiagnostic::DisjointIndividual { individual, first, second } => write!(
                f,
                "{} is both {} and {}",
                individual.local_name(),
                first.local_name(),
                second.local_name()
            ),
            LintDiagnostic::ThresholdOrder { name, high, medium } => {
                write!(f, "high {name} ({high}) is below medium {name} ({medium})")
            }
            LintDiagnostic::UnknownClass { class, referenced_by } => {
                write!(f, "{} references unregistered class {}", referenced_by.local_name(), class)
            }
            LintDiagnostic::KindMismatch { class, parent } => {
                write!(f, "{} and its superclass {} have different kinds", class.local_name(), parent.local_name())
            }
            LintDiagnostic::IndividualNotInstanceable { individual, class } => write!(
                f,
                "{} is asserted in {}, which is neither an action nor a context class",
                individual.local_name(),
                class.local_name()
            ),
            LintDiagnostic::UnknownAffordedAction { place, action } => {
                write!(f, "{} affords unregistered action {}", place.local_name(), action.local_name())
            }
            LintDiagnostic::AffordanceOnNonPlace { class } => {
                write!(f, "{} has affordances but is not a place class", class.local_name())
            }
            LintDiagnostic::AgeBounds { class, lower, upper } => {
                write!(f, "{}: lower bound {lower} exceeds upper bound {upper}", class.local_name())
            }
            LintDiagnostic::InvalidDuration { value } => write!(f, "duration threshold {value} is negative"),
        }
    }
}

/// Checks every registry invariant. An empty result means the registry is coherent.
pub fn lint(registry: &Registry) -> Vec<LintDiagnostic> {
    let mut out = Vec::new();
    out.extend(check_cycles(registry));

    for (class, parents) in &registry.parents {
        for p in parents {
            match (registry.classes.get(class), registry.classes.get(p)) {
                (_, None) => out.push(LintDiagnostic::UnknownClass { class: p.clone(), referenced_by: class.clone() }),
                (None, _) => out.push(LintDiagnostic::UnknownClass { class: class.clone(), referenced_by: p.clone() }),
                (Some(a), Some(b)) if a != b => {
                    out.push(LintDiagnostic::KindMismatch { class: class.clone(), parent: p.clone() })
                }
                _ => {}
            }
        }
    }

    let disjoint_pairs = [
        (ns::plod("SpatialRiskContext"), ns::plod("BehavioralRiskContext")),
        (ns::plod("IndirectContact"), ns::plod("DropletReachableAction")),
    ];
    for (ind, classes) in &registry.individuals {
        let mut closure = BTreeSet::new();
        for c in classes {
            match registry.classes.get(c) {
                None => out.push(LintDiagnostic::UnknownClass { class: c.clone(), referenced_by: ind.clone() }),
                Some(ClassKind::Action | ClassKind::Context) => closure.extend(registry.ancestors(c)),
                Some(_) => out.push(LintDiagnostic::IndividualNotInstanceable {
                    individual: ind.clone(),
                    class: c.clone(),
                }),
            }
        }
        for (a, b) in &disjoint_pairs {
            if closure.contains(a) && closure.contains(b) {
                out.push(LintDiagnostic::DisjointIndividual {
                    individual: ind.clone(),
                    first: a.clone(),
                    second: b.clone(),
                });
            }
        }
    }

    for (place, actions) in &registry.affordances {
        match registry.classes.get(place) {
            None => out.push(LintDiagnostic::UnknownClass { class: place.clone(), referenced_by: place.clone() }),
            Some(ClassKind::Place) => {}
            Some(_) => out.push(LintDiagnostic::AffordanceOnNonPlace { class: place.clone() }),
        }
        for a in actions {
            if !registry.individuals.contains_key(a) {
                out.push(LintDiagnostic::UnknownAffordedAction { place: place.clone(), action: a.clone() });
            }
        }
    }

    for def in &registry.age_classes {
        if let (Some(lower), Some(upper)) = (def.lower, def.upper) {
            if lower > upper {
                out.push(LintDiagnostic::AgeBounds { class: def.class.clone(), lower, upper });
            }
        }
    }

    out.extend(check_thresholds(&registry.thresholds));
    out
}

pub(super) fn check_thresholds(t: &RiskAxiomConfig) -> Vec<LintDiagnostic> {
    let mut out = Vec::new();
    if t.high_droplet_count < t.medium_droplet_count {
        out.push(LintDiagnostic::ThresholdOrder {
            name: "droplet-count",
            high: t.high_droplet_count,
            medium: t.medium_droplet_count,
        });
    }
    if t.high_crowding_spatial_count < t.medium_crowding_spatial_count {
        out.push(LintDiagnostic::ThresholdOrder {
            name: "crowding-spatial-count",
            high: t.high_crowding_spatial_count,
            medium: t.medium_crowding_spatial_count,
        });
    }
    if !(t.duration_threshold >= 0.0) {
        out.push(LintDiagnostic::InvalidDuration { value: t.duration_threshold });
    }
    out
}

/// One diagnostic per strongly connected component that contains a cycle.
fn check_cycles(registry: &Registry) -> Vec<LintDiagnostic> {
    let mut graph = DiGraph::<&Iri, ()>::new();
    let mut nodes = BTreeMap::new();
    let mut self_loops = BTreeSet::new();
    for (child, parents) in &registry.parents {
        let c = *nodes.entry(child).or_insert_with(|| graph.add_node(child));
        for p in parents {
            if p == child {
                self_loops.insert(child);
            }
            let pn = *nodes.entry(p).or_insert_with(|| graph.add_node(p));
            graph.add_edge(c, pn, ());
        }
    }
    let mut out: Vec<LintDiagnostic> = tarjan_scc(&graph)
        .into_iter()
        .filter(|scc| scc.len() > 1 || self_loops.contains(graph[scc[0]]))
        .map(|scc| {
            let mut classes: Vec<Iri> = scc.iter().map(|n| graph[*n].clone()).collect();
            classes.sort();
            LintDiagnostic::Cycle { classes }
        })
        .collect();
    out.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vocab::{load_vocabulary, STANDARD_EXTENSIONS};

    #[test]
    fn core_and_standard_registries_are_clean() {
        assert!(lint(&Registry::core()).is_empty());
        let std = load_vocabulary(STANDARD_EXTENSIONS).unwrap();
        assert!(lint(std.registry()).is_empty());
    }

    #[test]
    fn self_cycle_yields_one_diagnostic() {
        let mut r = Registry::core();
        r.subclass(ns::plod("Restaurant"), ns::plod("Restaurant"));
        let d = lint(&r);
        assert_eq!(d.len(), 1, "{d:?}");
        assert!(matches!(&d[0], LintDiagnostic::Cycle { classes } if classes == &vec![ns::plod("Restaurant")]));
    }

    #[test]
    fn threshold_inversion_yields_one_diagnostic() {
        let mut r = Registry::core();
        r.thresholds.high_droplet_count = 1;
        r.thresholds.medium_droplet_count = 2;
        let d = lint(&r);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].invariant(), "high-threshold-at-least-medium");
    }

    #[test]
    fn disjoint_action_yields_one_diagnostic() {
        let mut r = Registry::core();
        r.individual(ns::plod("talk"), ns::plod("IndirectContact"));
        let d = lint(&r);
        assert_eq!(d.len(), 1);
        assert!(matches!(&d[0], LintDiagnostic::DisjointIndividual { individual, .. } if *individual == ns::plod("talk")));
    }

    #[test]
    fn dangling_references() {
        let mut r = Registry::core();
        r.subclass(ns::plod("Restaurant"), ns::plod("Nowhere"));
        r.afford(ns::plod("Gym"), ns::plod("lift"));
        let d = lint(&r);
        assert_eq!(d.len(), 2);
        assert!(d.iter().any(|x| matches!(x, LintDiagnostic::UnknownClass { .. })));
        assert!(d.iter().any(|x| matches!(x, LintDiagnostic::UnknownAffordedAction { .. })));
    }
}
