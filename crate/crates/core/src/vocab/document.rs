use serde::Deserialize;

use super::{AgeClassDef, ClassKind, Registry, RiskAxiomConfig, VocabError};
use crate::rdf::{ns, Iri};

/// Human-editable vocabulary extension document (TOML).
///
/// ```toml
/// [thresholds]
/// duration-threshold = 15
/// high-droplet-count = 2
///
/// [[class]]
/// name = "Karaoke"
/// kind = "place"
/// parents = ["IndoorFacility"]
/// affords = ["talk", "removeMask"]
///
/// [[individual]]
/// name = "sing"
/// classes = ["DropletReachableAction"]
///
/// [[affordance]]
/// place = "Bar"
/// actions = ["talk"]
///
/// [[age-class]]
/// name = "AgeOf40s"
/// lower = 40
/// upper = 49
/// upper-inclusive = true
/// ```
///
/// Bare names resolve into the `plod:` namespace; `prefix:local` and absolute IRIs are
/// accepted too.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct VocabularyDocument {
    #[serde(default)]
    pub thresholds: Option<RiskAxiomConfig>,
    #[serde(default, rename = "class")]
    pub classes: Vec<ClassEntry>,
    #[serde(default, rename = "individual")]
    pub individuals: Vec<IndividualEntry>,
    #[serde(default, rename = "affordance")]
    pub affordances: Vec<AffordanceEntry>,
    #[serde(default, rename = "age-class")]
    pub age_classes: Vec<AgeClassEntry>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ClassEntry {
    pub name: String,
    pub kind: ClassKind,
    #[serde(default)]
    pub parents: Vec<String>,
    #[serde(default)]
    pub affords: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct IndividualEntry {
    pub name: String,
    pub classes: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct AffordanceEntry {
    pub place: String,
    pub actions: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct AgeClassEntry {
    pub name: String,
    pub lower: Option<u32>,
    pub upper: Option<u32>,
    #[serde(default)]
    pub upper_inclusive: bool,
}

/// Resolves a vocabulary name: absolute IRI, known `prefix:local`, or a bare `plod:` local name.
pub fn resolve_name(name: &str) -> Result<Iri, VocabError> {
    let name = name.trim();
    if name.contains("://") || name.starts_with("urn:") {
        return Iri::new(name).map_err(|e| VocabError::Document(e.to_string()));
    }
    if let Some((prefix, local)) = name.split_once(':') {
        let base = ns::BUILTIN_PREFIXES
            .iter()
            .chain(ns::SERIALIZER_PREFIXES)
            .find(|(p, _)| *p == prefix)
            .map(|(_, b)| *b)
            .ok_or_else(|| VocabError::Document(format!("unknown prefix `{prefix}` in `{name}`")))?;
        return Iri::new(format!("{base}{local}")).map_err(|e| VocabError::Document(e.to_string()));
    }
    if name.is_empty() || name.contains(char::is_whitespace) {
        return Err(VocabError::Document(format!("invalid name `{name}`")));
    }
    Ok(ns::plod(name))
}

impl VocabularyDocument {
    pub fn parse(source: &str) -> Result<Self, VocabError> {
        toml::from_str(source).map_err(|e| VocabError::Document(e.to_string()))
    }

    /// Layers the document over `registry`. Entries only add; they never remove core entries.
    pub fn apply(&self, registry: &mut Registry) -> Result<(), VocabError> {
        if let Some(t) = self.thresholds {
            registry.thresholds = t;
        }
        for c in &self.classes {
            let iri = resolve_name(&c.name)?;
            if let Some(existing) = registry.classes.get(&iri) {
                if *existing != c.kind {
                    return Err(VocabError::Document(format!(
                        "class {} redeclared as {:?} (was {:?})",
                        iri, c.kind, existing
                    )));
                }
            }
            let parents = c.parents.iter().map(|p| resolve_name(p)).collect::<Result<Vec<_>, _>>()?;
            registry.class(iri.clone(), c.kind, &parents);
            for a in &c.affords {
                registry.afford(iri.clone(), resolve_name(a)?);
            }
        }
        for ind in &self.individuals {
            let iri = resolve_name(&ind.name)?;
            for c in &ind.classes {
                registry.individual(iri.clone(), resolve_name(c)?);
            }
        }
        for a in &self.affordances {
            let place = resolve_name(&a.place)?;
            for action in &a.actions {
                registry.afford(place.clone(), resolve_name(action)?);
            }
        }
        for a in &self.age_classes {
            registry.age_class(AgeClassDef {
                class: resolve_name(&a.name)?,
                lower: a.lower,
                upper: a.upper,
                upper_inclusive: a.upper_inclusive,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        assert_eq!(resolve_name("talk").unwrap(), ns::plod("talk"));
        assert_eq!(resolve_name("schema:Place").unwrap(), ns::schema("Place"));
        assert_eq!(resolve_name("http://example.org/X").unwrap().as_str(), "http://example.org/X");
        assert!(resolve_name("nope:x").is_err());
    }

    #[test]
    fn partial_thresholds_keep_defaults() {
        let doc = VocabularyDocument::parse("[thresholds]\nduration-threshold = 20\n").unwrap();
        let t = doc.thresholds.unwrap();
        assert_eq!(t.duration_threshold, 20.0);
        assert_eq!(t.high_droplet_count, 2);
        assert!(t.context_pooling);
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(VocabularyDocument::parse("[[class]]\nname = \"X\"\nkind = \"place\"\ncolour = 1\n").is_err());
    }
}
