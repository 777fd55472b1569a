use std::fmt;
use std::sync::Arc;

use chrono::{DateTime, NaiveDateTime};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ns;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("IRI `{0}` is not absolute")]
    RelativeIri(String),
    #[error("invalid {datatype} literal `{value}`")]
    InvalidLiteral { value: String, datatype: &'static str },
    #[error("subject and predicate must be IRIs, got literal `{0}`")]
    LiteralInIriPosition(String),
}

/// An absolute IRI.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Iri(Arc<str>);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, TermError> {
        let value = value.into();
        if !is_absolute(&value) {
            return Err(TermError::RelativeIri(value));
        }
        Ok(Iri(value.into()))
    }

    /// Callers guarantee the value is absolute (namespace constants).
    pub(crate) fn new_unchecked(value: impl Into<Arc<str>>) -> Self {
        Iri(value.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The part after the last `/` or `#`.
    pub fn local_name(&self) -> &str {
        let s = self.as_str();
        match s.rfind(['/', '#']) {
            Some(i) if i + 1 < s.len() => &s[i + 1..],
            _ => s,
        }
    }
}

fn is_absolute(value: &str) -> bool {
    match value.find(':') {
        Some(i) if i > 0 => {
            let scheme = &value[..i];
            scheme.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && scheme
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
                && !value.chars().any(|c| c.is_whitespace() || matches!(c, '<' | '>' | '"'))
        }
        _ => false,
    }
}

impl TryFrom<String> for Iri {
    type Error = TermError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        Iri::new(value)
    }
}

impl From<Iri> for String {
    fn from(iri: Iri) -> Self {
        iri.0.to_string()
    }
}

impl fmt::Debug for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Datatype {
    Plain,
    Integer,
    Decimal,
    DateTime,
    Other(Iri),
}

impl Datatype {
    pub fn from_iri(iri: &Iri) -> Datatype {
        match iri.as_str().strip_prefix(ns::XSD) {
            Some("string") => Datatype::Plain,
            Some("integer") => Datatype::Integer,
            Some("decimal") => Datatype::Decimal,
            Some("dateTime") => Datatype::DateTime,
            _ => Datatype::Other(iri.clone()),
        }
    }

    pub fn iri(&self) -> Iri {
        match self {
            Datatype::Plain => Iri::new_unchecked(format!("{}string", ns::XSD)),
            Datatype::Integer => Iri::new_unchecked(format!("{}integer", ns::XSD)),
            Datatype::Decimal => Iri::new_unchecked(format!("{}decimal", ns::XSD)),
            Datatype::DateTime => Iri::new_unchecked(format!("{}dateTime", ns::XSD)),
            Datatype::Other(iri) => iri.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    value: Arc<str>,
    datatype: Datatype,
}

impl Literal {
    pub fn plain(value: impl Into<Arc<str>>) -> Self {
        Literal { value: value.into(), datatype: Datatype::Plain }
    }

    pub fn integer(value: i64) -> Self {
        Literal { value: value.to_string().into(), datatype: Datatype::Integer }
    }

    pub fn decimal(value: f64) -> Self {
        let mut text = format!("{value}");
        if !text.contains('.') {
            text.push_str(".0");
        }
        Literal { value: text.into(), datatype: Datatype::Decimal }
    }

    pub fn date_time(value: NaiveDateTime) -> Self {
        Literal {
            value: value.format("%Y-%m-%dT%H:%M:%S").to_string().into(),
            datatype: Datatype::DateTime,
        }
    }

    /// Builds a literal, validating the lexical form of numeric and dateTime values.
    pub fn typed(value: impl Into<Arc<str>>, datatype: Datatype) -> Result<Self, TermError> {
        let value = value.into();
        let ok = match datatype {
            Datatype::Integer => is_integer_lexical(&value),
            Datatype::Decimal => is_decimal_lexical(&value) || is_integer_lexical(&value),
            Datatype::DateTime => parse_date_time(&value).is_some(),
            Datatype::Plain | Datatype::Other(_) => true,
        };
        if !ok {
            let name = match datatype {
                Datatype::Integer => "integer",
                Datatype::Decimal => "decimal",
                _ => "dateTime",
            };
            return Err(TermError::InvalidLiteral { value: value.to_string(), datatype: name });
        }
        Ok(Literal { value, datatype })
    }

    pub fn value(&self) -> &str {
        &self.value
    }

    pub fn datatype(&self) -> &Datatype {
        &self.datatype
    }

    pub fn as_date_time(&self) -> Option<NaiveDateTime> {
        match self.datatype {
            Datatype::DateTime | Datatype::Plain => parse_date_time(&self.value),
            _ => None,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match &self.datatype {
            Datatype::Integer | Datatype::Decimal => self.value.parse().ok(),
            Datatype::Other(iri) if iri.as_str().starts_with(ns::XSD) => self.value.parse().ok(),
            _ => None,
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self.datatype {
            Datatype::Integer => self.value.trim_start_matches('+').parse().ok(),
            Datatype::Decimal => self.as_f64().filter(|v| v.fract() == 0.0).map(|v| v as i64),
            _ => None,
        }
    }
}

pub(crate) fn is_integer_lexical(s: &str) -> bool {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

pub(crate) fn is_decimal_lexical(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    match body.split_once('.') {
        Some((int, frac)) => {
            int.bytes().all(|b| b.is_ascii_digit())
                && !frac.is_empty()
                && frac.bytes().all(|b| b.is_ascii_digit())
        }
        None => false,
    }
}

/// Parses an ISO-8601 combined date-time. Offsets are normalized to UTC.
pub fn parse_date_time(s: &str) -> Option<NaiveDateTime> {
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Some(dt.naive_utc());
    }
    NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M:%S%.f")
        .or_else(|_| NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M"))
        .ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(Iri),
    Literal(Literal),
}

/// JSON form: `{"kind": "iri", "value": …}` or `{"kind": "literal", "value": …, "datatype": …}`.
impl serde::Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        match self {
            Term::Iri(i) => {
                let mut st = serializer.serialize_struct("Term", 2)?;
                st.serialize_field("kind", "iri")?;
                st.serialize_field("value", i.as_str())?;
                st.end()
            }
            Term::Literal(l) => {
                let mut st = serializer.serialize_struct("Term", 3)?;
                st.serialize_field("kind", "literal")?;
                st.serialize_field("value", l.value())?;
                st.serialize_field("datatype", l.datatype().iri().as_str())?;
                st.end()
            }
        }
    }
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            Term::Literal(_) => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            Term::Iri(_) => None,
        }
    }

    pub fn is_iri(&self) -> bool {
        matches!(self, Term::Iri(_))
    }

    /// IRI string or literal lexical form.
    pub fn value(&self) -> &str {
        match self {
            Term::Iri(iri) => iri.as_str(),
            Term::Literal(lit) => lit.value(),
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "{iri}"),
            Term::Literal(lit) => {
                write!(f, "\"{}\"", escape_string(lit.value()))?;
                match lit.datatype() {
                    Datatype::Plain => Ok(()),
                    dt => write!(f, "^^{}", dt.iri()),
                }
            }
        }
    }
}

pub(crate) fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out
}

/// A subject–predicate–object statement. Subjects and predicates are IRIs by construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Iri, predicate: Iri, object: impl Into<Term>) -> Self {
        Triple { subject, predicate, object: object.into() }
    }

    /// Builds a triple from arbitrary terms, rejecting literals in subject or predicate position.
    pub fn from_terms(subject: Term, predicate: Term, object: Term) -> Result<Self, TermError> {
        let subject = match subject {
            Term::Iri(iri) => iri,
            Term::Literal(lit) => return Err(TermError::LiteralInIriPosition(lit.value().into())),
        };
        let predicate = match predicate {
            Term::Iri(iri) => iri,
            Term::Literal(lit) => return Err(TermError::LiteralInIriPosition(lit.value().into())),
        };
        Ok(Triple { subject, predicate, object })
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_iri_rejected() {
        assert!(Iri::new("event_0").is_err());
        assert!(Iri::new("http://plod.info/rdf/id/event_0").is_ok());
        assert!(Iri::new("urn:x").is_ok());
    }

    #[test]
    fn literal_validation() {
        assert!(Literal::typed("12", Datatype::Integer).is_ok());
        assert!(Literal::typed("1.5", Datatype::Integer).is_err());
        assert!(Literal::typed("2020-04-01T12:00:00", Datatype::DateTime).is_ok());
        assert!(Literal::typed("2020-04-01T12:00:00+09:00", Datatype::DateTime).is_ok());
        assert!(Literal::typed("yesterday", Datatype::DateTime).is_err());
    }

    #[test]
    fn date_times_compare_chronologically() {
        let a = Literal::typed("2020-04-01T12:00:00+09:00", Datatype::DateTime).unwrap();
        let b = Literal::typed("2020-04-01T04:00:00", Datatype::DateTime).unwrap();
        // 12:00 JST is 03:00 UTC
        assert!(a.as_date_time().unwrap() < b.as_date_time().unwrap());
    }

    #[test]
    fn local_names() {
        assert_eq!(ns::id("event_0").local_name(), "event_0");
        assert_eq!(ns::time("hasEnd").local_name(), "hasEnd");
    }
}
