//! Data-driven registry of the risk ontology: class hierarchy, named individuals,
//! place affordances, age classes, and the tunable thresholds of the risk axioms.
//!
//! A [`Registry`] is the raw, editable table set. [`Vocabulary`] wraps a registry that passed
//! [`lint`] and caches the subclass closure and the lookups the reasoner needs.

mod document;
mod lint;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rdf::{ns, Graph, Iri, Literal};
use crate::risk::{Dimension, Level};

pub use document::{resolve_name, VocabularyDocument};
pub use lint::{lint, LintDiagnostic};

/// Optional shipped extensions: extra individuals and places that are not part of the core
/// axioms but let demo and generated data exercise every rule branch.
pub const STANDARD_EXTENSIONS: &str = include_str!("standard_extensions.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassKind {
    Place,
    Action,
    Context,
    Risk,
    Age,
    Event,
    Situation,
    Person,
    Time,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OntologyClassId {
    pub iri: Iri,
    pub kind: ClassKind,
}

/// How the two affordance/action branches of the close-contact axiom bind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosePrecedence {
    /// `(afford ⊔ action) ⊓ duration ⊓ context`
    #[default]
    Grouped,
    /// `afford ⊔ (action ⊓ duration ⊓ context)`
    DlStandard,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default, deny_unknown_fields)]
pub struct RiskAxiomConfig {
    /// Close contact requires a duration strictly above this many minutes.
    pub duration_threshold: f64,
    pub high_droplet_count: u32,
    pub medium_droplet_count: u32,
    pub high_crowding_spatial_count: u32,
    pub medium_crowding_spatial_count: u32,
    pub behavioral_count: u32,
    pub close_contact_precedence: ClosePrecedence,
    /// Pool an event's contexts with those of co-located, time-overlapping situations.
    pub context_pooling: bool,
}

impl Default for RiskAxiomConfig {
    fn default() -> Self {
        RiskAxiomConfig {
            duration_threshold: 15.0,
            high_droplet_count: 2,
            medium_droplet_count: 1,
            high_crowding_spatial_count: 2,
            medium_crowding_spatial_count: 1,
            behavioral_count: 1,
            close_contact_precedence: ClosePrecedence::Grouped,
            context_pooling: true,
        }
    }
}

impl RiskAxiomConfig {
    pub fn with_context_pooling(mut self, on: bool) -> Self {
        self.context_pooling = on;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgeClassDef {
    pub class: Iri,
    /// Inclusive lower bound in years.
    pub lower: Option<u32>,
    pub upper: Option<u32>,
    pub upper_inclusive: bool,
}

impl AgeClassDef {
    pub fn contains(&self, age: u32) -> bool {
        self.lower.is_none_or(|lo| age >= lo)
            && self.upper.is_none_or(|hi| if self.upper_inclusive { age <= hi } else { age < hi })
    }
}

/// Raw ontology tables. Freely editable; validate with [`lint`] or [`Vocabulary::new`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Registry {
    pub classes: BTreeMap<Iri, ClassKind>,
    /// Direct superclasses.
    pub parents: BTreeMap<Iri, BTreeSet<Iri>>,
    /// Named individual → asserted classes (action or context classes).
    pub individuals: BTreeMap<Iri, BTreeSet<Iri>>,
    /// Place class → afforded action individuals.
    pub affordances: BTreeMap<Iri, BTreeSet<Iri>>,
    pub thresholds: RiskAxiomConfig,
    pub age_classes: Vec<AgeClassDef>,
}

impl Registry {
    /// The fixed core: classes, individuals, affordances and age classes every registry has.
    pub fn core() -> Self {
        let mut r = Registry::default();
        use ClassKind::*;

        r.class(ns::schema("Place"), Place, &[]);
        for c in ["IndoorFacility", "OutdoorFacility", "Public_transportation"] {
            r.class(ns::plod(c), Place, &[ns::schema("Place")]);
        }
        for c in ["Restaurant", "Gym", "Bar"] {
            r.class(ns::plod(c), Place, &[ns::plod("IndoorFacility")]);
        }
        r.class(ns::plod("Bus"), Place, &[ns::plod("Public_transportation")]);

        r.class(ns::plod("Action"), Action, &[]);
        r.class(ns::plod("RiskAction"), Action, &[ns::plod("Action")]);
        r.class(ns::plod("IndirectContact"), Action, &[ns::plod("RiskAction")]);
        r.class(ns::plod("DropletReachableAction"), Action, &[ns::plod("RiskAction")]);

        r.class(ns::plod("Context"), Context, &[]);
        r.class(ns::plod("RiskContext"), Context, &[ns::plod("Context")]);
        r.class(ns::plod("SpatialRiskContext"), Context, &[ns::plod("RiskContext")]);
        r.class(ns::plod("BehavioralRiskContext"), Context, &[ns::plod("RiskContext")]);

        for dim in Dimension::ALL {
            let root = dim.root_class();
            let medium = dim.level_class(Level::Medium).unwrap();
            let high = dim.level_class(Level::High).unwrap();
            r.class(root.clone(), Risk, &[]);
            r.class(medium.clone(), Risk, &[root]);
            r.class(high, Risk, &[medium]);
        }

        r.class(ns::plod("Time"), Time, &[]);
        r.class(ns::time("TemporalEntity"), Time, &[ns::plod("Time")]);
        r.class(ns::time("TemporalDuration"), Time, &[ns::plod("Time")]);
        r.class(ns::plod("PartOfDay"), Time, &[]);
        for c in ["Morning", "Afternoon", "Evening", "Night"] {
            r.class(ns::plod(c), Time, &[ns::plod("PartOfDay")]);
        }

        r.class(ns::schema("Event"), Event, &[]);
        r.class(ns::plod("Situation"), Situation, &[]);
        r.class(ns::schema("Person"), Person, &[]);
        r.class(ns::plod("Patient"), Person, &[ns::schema("Person")]);
        r.class(ns::plod("Age"), Age, &[]);

        for a in ["talk", "removeMask"] {
            r.individual(ns::plod(a), ns::plod("DropletReachableAction"));
        }
        r.individual(ns::plod("shareThing"), ns::plod("IndirectContact"));
        for c in ["crowded", "smallSpace"] {
            r.individual(ns::plod(c), ns::plod("SpatialRiskContext"));
        }
        for c in ["facetoface", "relax"] {
            r.individual(ns::plod(c), ns::plod("BehavioralRiskContext"));
        }

        r.afford(ns::plod("Restaurant"), ns::plod("removeMask"));
        r.afford(ns::plod("Restaurant"), ns::plod("talk"));
        r.afford(ns::plod("Gym"), ns::plod("shareThing"));

        r.age_class(AgeClassDef {
            class: ns::plod("AgeOf30s"),
            lower: Some(30),
            upper: Some(39),
            upper_inclusive: true,
        });
        r.age_class(AgeClassDef {
            class: ns::plod("AgeOfUnder60s"),
            lower: None,
            upper: Some(60),
            upper_inclusive: false,
        });
        r
    }

    pub fn class(&mut self, iri: Iri, kind: ClassKind, parents: &[Iri]) {
        self.classes.insert(iri.clone(), kind);
        let entry = self.parents.entry(iri).or_default();
        entry.extend(parents.iter().cloned());
    }

    pub fn subclass(&mut self, child: Iri, parent: Iri) {
        self.parents.entry(child).or_default().insert(parent);
    }

    pub fn individual(&mut self, individual: Iri, class: Iri) {
        self.individuals.entry(individual).or_default().insert(class);
    }

    pub fn afford(&mut self, place_class: Iri, action: Iri) {
        self.affordances.entry(place_class).or_default().insert(action);
    }

    pub fn age_class(&mut self, def: AgeClassDef) {
        self.classes.insert(def.class.clone(), ClassKind::Age);
        self.parents.entry(def.class.clone()).or_default().insert(ns::plod("Age"));
        self.age_classes.retain(|d| d.class != def.class);
        self.age_classes.push(def);
    }

    /// Reflexive-transitive superclasses of `class`; tolerates cycles.
    pub fn ancestors(&self, class: &Iri) -> BTreeSet<Iri> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![class.clone()];
        while let Some(c) = stack.pop() {
            if seen.insert(c.clone()) {
                if let Some(ps) = self.parents.get(&c) {
                    stack.extend(ps.iter().cloned());
                }
            }
        }
        seen
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VocabError {
    #[error("vocabulary document is malformed: {0}")]
    Document(String),
    #[error("class hierarchy has a cycle through {}", join(classes))]
    Cycle { classes: Vec<Iri> },
    #[error("individual {individual} is asserted in disjoint classes {first} and {second}")]
    Disjoint { individual: Iri, first: Iri, second: Iri },
    #[error("threshold {name}: high value {high} is below medium value {medium}")]
    ThresholdOrder { name: &'static str, high: u32, medium: u32 },
    #[error("{0}")]
    Invalid(LintDiagnostic),
    #[error("unknown class {0}")]
    UnknownClass(Iri),
}

fn join(iris: &[Iri]) -> String {
    iris.iter().map(|i| i.local_name().to_string()).collect::<Vec<_>>().join(", ")
}

impl From<LintDiagnostic> for VocabError {
    fn from(d: LintDiagnostic) -> Self {
        match d {
            LintDiagnostic::Cycle { classes } => VocabError::Cycle { classes },
            LintDiagnostic::DisjointIndividual { individual, first, second } => {
                VocabError::Disjoint { individual, first, second }
            }
            LintDiagnostic::ThresholdOrder { name, high, medium } => {
                VocabError::ThresholdOrder { name, high, medium }
            }
            other => VocabError::Invalid(other),
        }
    }
}

/// Parses a vocabulary document (TOML) and layers it over the core registry.
pub fn load_vocabulary(source: &str) -> Result<Vocabulary, VocabError> {
    let doc = VocabularyDocument::parse(source)?;
    let mut registry = Registry::core();
    doc.apply(&mut registry)?;
    Vocabulary::new(registry)
}

/// How a context individual is partitioned by the risk axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContextKind {
    Spatial,
    Behavioral,
}

/// A validated, immutable registry with cached closures.
#[derive(Debug, Clone)]
pub struct Vocabulary {
    registry: Registry,
    ancestors: BTreeMap<Iri, BTreeSet<Iri>>,
    /// Place class → affordances inherited from all superclasses.
    affordances: BTreeMap<Iri, BTreeSet<Iri>>,
    droplet_actions: BTreeSet<Iri>,
    indirect_actions: BTreeSet<Iri>,
    contexts: BTreeMap<Iri, ContextKind>,
    enclosing_places: BTreeSet<Iri>,
}

impl Default for Vocabulary {
    fn default() -> Self {
        Vocabulary::standard()
    }
}

impl Vocabulary {
    pub fn new(registry: Registry) -> Result<Self, VocabError> {
        if let Some(d) = lint(&registry).into_iter().next() {
            return Err(d.into());
        }
        let ancestors: BTreeMap<Iri, BTreeSet<Iri>> =
            registry.classes.keys().map(|c| (c.clone(), registry.ancestors(c))).collect();

        let mut affordances = BTreeMap::new();
        for (class, kind) in &registry.classes {
            if *kind == ClassKind::Place {
                let set: BTreeSet<Iri> = ancestors[class]
                    .iter()
                    .filter_map(|a| registry.affordances.get(a))
                    .flatten()
                    .cloned()
                    .collect();
                affordances.insert(class.clone(), set);
            }
        }

        let sub = |ind_classes: &BTreeSet<Iri>, target: &str| {
            let target = ns::plod(target);
            ind_classes.iter().any(|c| ancestors.get(c).is_some_and(|a| a.contains(&target)))
        };
        let mut droplet_actions = BTreeSet::new();
        let mut indirect_actions = BTreeSet::new();
        let mut contexts = BTreeMap::new();
        for (ind, classes) in &registry.individuals {
            if sub(classes, "DropletReachableAction") {
                droplet_actions.insert(ind.clone());
            }
            if sub(classes, "IndirectContact") {
                indirect_actions.insert(ind.clone());
            }
            if sub(classes, "SpatialRiskContext") {
                contexts.insert(ind.clone(), ContextKind::Spatial);
            } else if sub(classes, "BehavioralRiskContext") {
                contexts.insert(ind.clone(), ContextKind::Behavioral);
            }
        }
        let indoor = ns::plod("IndoorFacility");
        let transport = ns::plod("Public_transportation");
        let enclosing_places = ancestors
            .iter()
            .filter(|(_, a)| a.contains(&indoor) || a.contains(&transport))
            .map(|(c, _)| c.clone())
            .collect();

        Ok(Vocabulary {
            registry,
            ancestors,
            affordances,
            droplet_actions,
            indirect_actions,
            contexts,
            enclosing_places,
        })
    }

    /// Core registry plus the shipped extension document.
    pub fn standard() -> Self {
        load_vocabulary(STANDARD_EXTENSIONS).expect("shipped extensions are valid")
    }

    /// Core registry only.
    pub fn core() -> Self {
        Vocabulary::new(Registry::core()).expect("core registry is valid")
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn thresholds(&self) -> &RiskAxiomConfig {
        &self.registry.thresholds
    }

    /// Same vocabulary with different thresholds. Fails if the thresholds are inconsistent.
    pub fn with_thresholds(&self, thresholds: RiskAxiomConfig) -> Result<Self, VocabError> {
        let mut out = self.clone();
        out.registry.thresholds = thresholds;
        if let Some(d) = lint::check_thresholds(&thresholds).into_iter().next() {
            return Err(d.into());
        }
        Ok(out)
    }

    pub fn kind(&self, class: &Iri) -> Option<ClassKind> {
        self.registry.classes.get(class).copied()
    }

    pub fn class_id(&self, class: &Iri) -> Option<OntologyClassId> {
        self.kind(class).map(|kind| OntologyClassId { iri: class.clone(), kind })
    }

    pub fn is_subclass_of(&self, a: &Iri, b: &Iri) -> Result<bool, VocabError> {
        let ancestors = self.ancestors.get(a).ok_or_else(|| VocabError::UnknownClass(a.clone()))?;
        if !self.ancestors.contains_key(b) {
            return Err(VocabError::UnknownClass(b.clone()));
        }
        Ok(ancestors.contains(b))
    }

    pub fn ancestors(&self, class: &Iri) -> Option<&BTreeSet<Iri>> {
        self.ancestors.get(class)
    }

    /// Registered classes that are subclasses of `class` (reflexive).
    pub fn descendants(&self, class: &Iri) -> BTreeSet<Iri> {
        self.ancestors.iter().filter(|(_, a)| a.contains(class)).map(|(c, _)| c.clone()).collect()
    }

    pub fn is_place_class(&self, class: &Iri) -> bool {
        self.kind(class) == Some(ClassKind::Place)
    }

    /// Affordances of a place class, inherited from every superclass.
    pub fn class_affordances(&self, place_class: &Iri) -> Option<&BTreeSet<Iri>> {
        self.affordances.get(place_class)
    }

    /// `IndoorFacility ⊔ Public_transportation`.
    pub fn is_enclosing_place(&self, place_class: &Iri) -> bool {
        self.enclosing_places.contains(place_class)
    }

    pub fn is_droplet_action(&self, individual: &Iri) -> bool {
        self.droplet_actions.contains(individual)
    }

    pub fn is_indirect_contact(&self, individual: &Iri) -> bool {
        self.indirect_actions.contains(individual)
    }

    pub fn context_kind(&self, individual: &Iri) -> Option<ContextKind> {
        self.contexts.get(individual).copied()
    }

    pub fn droplet_actions(&self) -> &BTreeSet<Iri> {
        &self.droplet_actions
    }

    pub fn indirect_actions(&self) -> &BTreeSet<Iri> {
        &self.indirect_actions
    }

    pub fn contexts_of(&self, kind: ContextKind) -> impl Iterator<Item = &Iri> {
        self.contexts.iter().filter(move |(_, k)| **k == kind).map(|(i, _)| i)
    }

    pub fn place_classes(&self) -> impl Iterator<Item = &Iri> {
        self.registry.classes.iter().filter(|(_, k)| **k == ClassKind::Place).map(|(c, _)| c)
    }

    pub fn age_classes(&self) -> &[AgeClassDef] {
        &self.registry.age_classes
    }

    /// Turtle-ready rendering: subclass links, individual typings, and affordances as
    /// `plod:afford` annotations on place classes.
    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::new();
        let owl_class = ns::owl("Class");
        let named = ns::owl("NamedIndividual");
        let rdf_type = ns::rdf_type();
        let sub = ns::pred::sub_class_of();
        for (class, parents) in &self.registry.parents {
            g.add(class, &rdf_type, owl_class.clone());
            for p in parents {
                g.add(class, &sub, p.clone());
            }
        }
        for (ind, classes) in &self.registry.individuals {
            g.add(ind, &rdf_type, named.clone());
            for c in classes {
                g.add(ind, &rdf_type, c.clone());
            }
        }
        for (place, actions) in &self.registry.affordances {
            for a in actions {
                g.add(place, &ns::pred::afford(), a.clone());
            }
        }
        for def in &self.registry.age_classes {
            if let Some(lo) = def.lower {
                g.add(&def.class, &ns::plod("minAge"), Literal::integer(lo.into()));
            }
            if let Some(hi) = def.upper {
                let p = if def.upper_inclusive { "maxAgeInclusive" } else { "maxAgeExclusive" };
                g.add(&def.class, &ns::plod(p), Literal::integer(hi.into()));
            }
        }
        g
    }
}

impl fmt::Display for OntologyClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({:?})", self.iri.local_name(), self.kind)
    }
}
