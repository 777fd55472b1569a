//! Uncertain time intervals and strict interval overlap.

use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rdf::Iri;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OverlapMode {
    /// Reliable bounds, falling back to plain begin/end.
    #[default]
    Reliable,
    /// Widest interval: possible bounds where present.
    Possible,
}

impl std::str::FromStr for OverlapMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "reliable" => Ok(OverlapMode::Reliable),
            "possible" => Ok(OverlapMode::Possible),
            other => Err(format!("unknown overlap mode `{other}`")),
        }
    }
}

/// A time description attached to an event or situation.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TimeSpan {
    pub begin: Option<NaiveDateTime>,
    pub end: Option<NaiveDateTime>,
    pub reliable_begin: Option<NaiveDateTime>,
    pub possible_begin: Option<NaiveDateTime>,
    pub reliable_end: Option<NaiveDateTime>,
    pub possible_end: Option<NaiveDateTime>,
    /// Minutes.
    pub explicit_duration: Option<f64>,
    pub part_of_day: Option<Iri>,
}

impl TimeSpan {
    pub fn between(begin: NaiveDateTime, end: NaiveDateTime) -> Self {
        TimeSpan { begin: Some(begin), end: Some(end), ..Default::default() }
    }

    pub fn begin_in(&self, mode: OverlapMode) -> Option<NaiveDateTime> {
        match mode {
            OverlapMode::Reliable => self.reliable_begin.or(self.begin),
            OverlapMode::Possible => self.possible_begin.or(self.reliable_begin).or(self.begin),
        }
    }

    pub fn end_in(&self, mode: OverlapMode) -> Option<NaiveDateTime> {
        match mode {
            OverlapMode::Reliable => self.reliable_end.or(self.end),
            OverlapMode::Possible => self.possible_end.or(self.reliable_end).or(self.end),
        }
    }

    pub fn bounds(&self, mode: OverlapMode) -> Option<(NaiveDateTime, NaiveDateTime)> {
        Some((self.begin_in(mode)?, self.end_in(mode)?))
    }

    /// Explicit duration if given, else `end − begin` in minutes.
    pub fn effective_duration(&self) -> Option<f64> {
        if let Some(d) = self.explicit_duration {
            return Some(d);
        }
        let (b, e) = self.bounds(OverlapMode::Reliable)?;
        (e >= b).then(|| (e - b).num_seconds() as f64 / 60.0)
    }

    /// Violated ordering constraints, as human-readable messages.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut check = |a: Option<NaiveDateTime>, b: Option<NaiveDateTime>, what: &str| {
            if let (Some(a), Some(b)) = (a, b) {
                if a > b {
                    out.push(format!("{what}: {a} is after {b}"));
                }
            }
        };
        check(self.begin, self.end, "begin after end");
        check(self.reliable_begin, self.reliable_end, "reliable begin after reliable end");
        check(self.possible_begin, self.reliable_begin, "possible begin after reliable begin");
        check(self.reliable_end, self.possible_end, "reliable end after possible end");
        if self.explicit_duration.is_some_and(|d| !(d >= 0.0)) {
            out.push("negative duration".to_string());
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpanRole {
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{role:?} interval lacks a usable begin/end in {mode:?} mode")]
pub struct MissingBound {
    pub role: SpanRole,
    pub mode: OverlapMode,
}

/// Strict overlap: `end(a) > begin(b) ∧ begin(a) < end(b)`.
pub fn intervals_overlap(a: &TimeSpan, b: &TimeSpan, mode: OverlapMode) -> Result<bool, MissingBound> {
    let (ab, ae) = a.bounds(mode).ok_or(MissingBound { role: SpanRole::First, mode })?;
    let (bb, be) = b.bounds(mode).ok_or(MissingBound { role: SpanRole::Second, mode })?;
    Ok(ae > bb && ab < be)
}
