//! The structured event accepted by `POST /events`. Fields mirror the reasoner's event view.

use ciro_core::rdf::{ns, parse_date_time, Graph, Iri, Literal};
use serde::{Deserialize, Serialize};

use crate::error::ApiError;
use crate::names;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventDocument {
    pub id: String,
    #[serde(default)]
    pub agents: Vec<String>,
    pub location: Option<String>,
    /// Place classes asserted on `location`, for places not yet in the store.
    #[serde(default)]
    pub location_types: Vec<String>,
    #[serde(default)]
    pub actions: Vec<String>,
    #[serde(default)]
    pub contexts: Vec<String>,
    pub time: Option<TimeDocument>,
    pub following_event: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeDocument {
    pub begin: Option<String>,
    pub end: Option<String>,
    pub reliable_begin: Option<String>,
    pub reliable_end: Option<String>,
    pub possible_begin: Option<String>,
    pub possible_end: Option<String>,
    pub duration_minutes: Option<f64>,
}

impl EventDocument {
    /// The event's triples. The time node is `<event>_time`; its duration node `<event>_time_duration`.
    pub fn to_graph(&self) -> Result<(Iri, Graph), ApiError> {
        let mut g = Graph::new();
        let event = names::entity(&self.id)?;
        g.add(&event, &ns::rdf_type(), ns::schema("Event"));
        for a in &self.agents {
            g.add(&event, &ns::pred::agent(), names::entity(a)?);
        }
        if let Some(loc) = &self.location {
            let place = names::entity(loc)?;
            for t in &self.location_types {
                g.add(&place, &ns::rdf_type(), names::term(t)?);
            }
            g.add(&event, &ns::pred::location(), place);
        } else if !self.location_types.is_empty() {
            return Err(ApiError::bad_request("invalid-event", "location_types given without a location"));
        }
        for a in &self.actions {
            g.add(&event, &ns::pred::action(), names::term(a)?);
        }
        for c in &self.contexts {
            g.add(&event, &ns::pred::context(), names::term(c)?);
        }
        if let Some(next) = &self.following_event {
            g.add(&event, &ns::pred::following_event(), names::entity(next)?);
        }
        if let Some(t) = &self.time {
            t.write(&event, &mut g)?;
        }
        Ok((event, g))
    }
}

impl TimeDocument {
    fn write(&self, event: &Iri, g: &mut Graph) -> Result<(), ApiError> {
        let node = Iri::new(format!("{}_time", event.as_str())).expect("derived from a valid IRI");
        g.add(event, &ns::pred::time(), node.clone());
        g.add(&node, &ns::rdf_type(), ns::time("TemporalEntity"));
        let bounds = [
            (&self.begin, ns::pred::has_beginning()),
            (&self.end, ns::pred::has_end()),
            (&self.reliable_begin, ns::pred::has_reliable_beginning()),
            (&self.reliable_end, ns::pred::has_reliable_end()),
            (&self.possible_begin, ns::pred::has_possible_beginning()),
            (&self.possible_end, ns::pred::has_possible_end()),
        ];
        for (value, pred) in bounds {
            if let Some(v) = value {
                let dt = parse_date_time(v).ok_or_else(|| {
                    ApiError::bad_request("invalid-time", format!("`{v}` is not an xsd:dateTime"))
                })?;
                g.add(&node, &pred, Literal::date_time(dt));
            }
        }
        if let (Some(b), Some(e)) = (&self.begin, &self.end) {
            if parse_date_time(b) > parse_date_time(e) {
                return Err(ApiError::bad_request("invalid-time", "end precedes begin"));
            }
        }
        if let Some(d) = self.duration_minutes {
            if !(d.is_finite() && d >= 0.0) {
                return Err(ApiError::bad_request("invalid-time", "duration must be a non-negative number"));
            }
            let dur = Iri::new(format!("{}_duration", node.as_str())).expect("derived from a valid IRI");
            g.add(&node, &ns::pred::has_duration(), dur.clone());
            g.add(&dur, &ns::rdf_type(), ns::time("TemporalDuration"));
            let lit = if d.fract() == 0.0 { Literal::integer(d as i64) } else { Literal::decimal(d) };
            g.add(&dur, &ns::pred::numeric_duration(), lit);
        }
        Ok(())
    }
}
