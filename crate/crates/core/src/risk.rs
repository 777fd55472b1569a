//! Three-Cs dimensions and levels.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::rdf::{ns, Iri};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Low,
    Medium,
    High,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::High, Level::Medium, Level::Low];

    pub fn as_str(self) -> &'static str {
        match self {
            Level::High => "high",
            Level::Medium => "medium",
            Level::Low => "low",
        }
    }

    pub fn initial(self) -> char {
        match self {
            Level::High => 'h',
            Level::Medium => 'm',
            Level::Low => 'l',
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Level {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "high" | "h" => Ok(Level::High),
            "medium" | "m" => Ok(Level::Medium),
            "low" | "l" => Ok(Level::Low),
            other => Err(format!("unknown level `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dimension {
    Closeness,
    Crowdedness,
    Enclosedness,
}

impl Dimension {
    pub const ALL: [Dimension; 3] = [Dimension::Closeness, Dimension::Crowdedness, Dimension::Enclosedness];

    pub fn as_str(self) -> &'static str {
        match self {
            Dimension::Closeness => "closeness",
            Dimension::Crowdedness => "crowdedness",
            Dimension::Enclosedness => "enclosedness",
        }
    }

    fn class_stem(self) -> &'static str {
        match self {
            Dimension::Closeness => "CloseContact",
            Dimension::Crowdedness => "Crowding",
            Dimension::Enclosedness => "ClosedSpace",
        }
    }

    /// Root risk class, e.g. `plod:ClosedSpace`.
    pub fn root_class(self) -> Iri {
        ns::plod(self.class_stem())
    }

    /// Class for a level; `None` for [`Level::Low`], which has no class.
    pub fn level_class(self, level: Level) -> Option<Iri> {
        match level {
            Level::High => Some(ns::plod(&format!("HighLevel{}", self.class_stem()))),
            Level::Medium => Some(ns::plod(&format!("MediumLevel{}", self.class_stem()))),
            Level::Low => None,
        }
    }

    /// Every class an entity at `level` belongs to: the level class and its superclasses.
    pub fn classes_for(self, level: Level) -> Vec<Iri> {
        match level {
            Level::High => vec![
                self.level_class(Level::High).unwrap(),
                self.level_class(Level::Medium).unwrap(),
                self.root_class(),
            ],
            Level::Medium => vec![self.level_class(Level::Medium).unwrap(), self.root_class()],
            Level::Low => Vec::new(),
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Dimension {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "closeness" => Ok(Dimension::Closeness),
            "crowdedness" => Ok(Dimension::Crowdedness),
            "enclosedness" => Ok(Dimension::Enclosedness),
            other => Err(format!("unknown dimension `{other}`")),
        }
    }
}

/// One level per dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Levels {
    pub closeness: Level,
    pub crowdedness: Level,
    pub enclosedness: Level,
}

impl Levels {
    pub fn new(closeness: Level, crowdedness: Level, enclosedness: Level) -> Self {
        Levels { closeness, crowdedness, enclosedness }
    }

    pub fn get(&self, dim: Dimension) -> Level {
        match dim {
            Dimension::Closeness => self.closeness,
            Dimension::Crowdedness => self.crowdedness,
            Dimension::Enclosedness => self.enclosedness,
        }
    }

    pub fn set(&mut self, dim: Dimension, level: Level) {
        match dim {
            Dimension::Closeness => self.closeness = level,
            Dimension::Crowdedness => self.crowdedness = level,
            Dimension::Enclosedness => self.enclosedness = level,
        }
    }

    /// All 27 level triples, high before medium before low.
    pub fn all() -> impl Iterator<Item = Levels> {
        Level::ALL.into_iter().flat_map(|cl| {
            Level::ALL
                .into_iter()
                .flat_map(move |cr| Level::ALL.into_iter().map(move |en| Levels::new(cl, cr, en)))
        })
    }
}

impl fmt::Display for Levels {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.closeness, self.crowdedness, self.enclosedness)
    }
}
