use chrono::NaiveDateTime;

use crate::rdf::{ns, Graph, Iri, Literal};

/// Writes `entity plod:time node` and the bounds and duration of `node`.
pub(crate) fn time_node(
    g: &mut Graph,
    entity: &Iri,
    node: &Iri,
    begin: NaiveDateTime,
    end: NaiveDateTime,
    duration_minutes: Option<i64>,
) {
    g.add(entity, &ns::pred::time(), node.clone());
    g.add(node, &ns::rdf_type(), ns::time("TemporalEntity"));
    g.add(node, &ns::pred::has_beginning(), Literal::date_time(begin));
    g.add(node, &ns::pred::has_end(), Literal::date_time(end));
    if let Some(d) = duration_minutes {
        let dur = Iri::new(format!("{}_duration", node.as_str())).expect("derived from a valid IRI");
        g.add(node, &ns::pred::has_duration(), dur.clone());
        g.add(&dur, &ns::rdf_type(), ns::time("TemporalDuration"));
        g.add(&dur, &ns::pred::numeric_duration(), Literal::integer(d));
    }
}

pub(crate) fn person(g: &mut Graph, person: &Iri, age: u32) {
    let node = Iri::new(format!("{}_age", person.as_str())).expect("derived from a valid IRI");
    g.add(person, &ns::rdf_type(), ns::schema("Person"));
    g.add(person, &ns::pred::age(), node.clone());
    g.add(&node, &ns::rdf_type(), ns::plod("Age"));
    g.add(&node, &ns::pred::value(), Literal::integer(age.into()));
}

pub(crate) fn event(g: &mut Graph, event: &Iri, place: &Iri, agents: &[Iri], actions: &[Iri], contexts: &[Iri]) {
    g.add(event, &ns::rdf_type(), ns::schema("Event"));
    g.add(event, &ns::pred::location(), place.clone());
    for a in agents {
        g.add(event, &ns::pred::agent(), a.clone());
    }
    for a in actions {
        g.add(event, &ns::pred::action(), a.clone());
    }
    for c in contexts {
        g.add(event, &ns::pred::context(), c.clone());
    }
}

pub(crate) fn situation(g: &mut Graph, situation: &Iri, place: &Iri, contexts: &[Iri]) {
    g.add(situation, &ns::rdf_type(), ns::plod("Situation"));
    g.add(situation, &ns::pred::is_situation_of(), place.clone());
    for c in contexts {
        g.add(situation, &ns::pred::context(), c.clone());
    }
}
