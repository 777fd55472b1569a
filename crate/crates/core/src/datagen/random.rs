use chrono::Duration;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{base_time, emit};
use crate::rdf::{ns, Graph, Iri, Literal};
use crate::vocab::{ContextKind, Vocabulary};

/// Shape of an unlabeled contact graph. Unlike the suite datasets, places are shared between
/// events, nested, sometimes untyped, and times come in every supported form (or not at all),
/// which is what the query and axiom oracles need to be exercised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomGraphSpec {
    pub events: usize,
    pub persons: usize,
    pub places: usize,
    pub seed: u64,
}

impl RandomGraphSpec {
    pub fn new(events: usize, persons: usize, places: usize, seed: u64) -> Self {
        RandomGraphSpec { events, persons, places, seed }
    }
}

pub fn random_graph(spec: &RandomGraphSpec, vocab: &Vocabulary) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut g = Graph::new();
    let window = 3 * 24 * 60;

    let persons: Vec<Iri> = (0..spec.persons.max(1)).map(|k| ns::id(&format!("person_{k}"))).collect();
    for p in &persons {
        emit::person(&mut g, p, rng.gen_range(1..95));
    }

    let classes: Vec<Iri> = vocab.place_classes().cloned().collect();
    let places: Vec<Iri> = (0..spec.places.max(1)).map(|k| ns::id(&format!("place_{k}"))).collect();
    for (k, p) in places.iter().enumerate() {
        if rng.gen_bool(0.9) {
            g.add(p, &ns::rdf_type(), classes.choose(&mut rng).unwrap().clone());
        }
        if k > 0 && rng.gen_bool(0.4) {
            let parent = &places[rng.gen_range(0..k)];
            g.add(p, &ns::pred::location(), parent.clone());
        } else {
            g.add(p, &ns::pred::city(), Literal::plain(format!("city-{}", k % 5)));
        }
    }

    let mut spatial: Vec<Iri> = vocab.contexts_of(ContextKind::Spatial).cloned().collect();
    let mut behavioral: Vec<Iri> = vocab.contexts_of(ContextKind::Behavioral).cloned().collect();
    spatial.push(ns::plod("noisy"));
    behavioral.push(ns::plod("whisper"));
    let actions: Vec<Iri> = vocab.droplet_actions().iter().chain(vocab.indirect_actions()).cloned().collect();

    for (k, place) in places.iter().enumerate() {
        for j in 0..rng.gen_range(0..=2) {
            let s = ns::id(&format!("situation_{k}_{j}"));
            let n = rng.gen_range(0..=3);
            let ctx: Vec<Iri> = spatial.choose_multiple(&mut rng, n).cloned().collect();
            emit::situation(&mut g, &s, place, &ctx);
            if rng.gen_bool(0.6) {
                let begin = base_time() + Duration::minutes(rng.gen_range(0..window));
                let end = begin + Duration::minutes(rng.gen_range(30..=600));
                emit::time_node(&mut g, &s, &ns::id(&format!("stime_{k}_{j}")), begin, end, None);
            }
        }
    }

    for k in 0..spec.events {
        let event = ns::id(&format!("event_{k}"));
        let place = places.choose(&mut rng).unwrap();
        let n = rng.gen_range(1..=3).min(persons.len());
        let agents: Vec<Iri> = persons.choose_multiple(&mut rng, n).cloned().collect();
        let n = rng.gen_range(0..=3);
        let acts: Vec<Iri> = actions.choose_multiple(&mut rng, n).cloned().collect();
        let n = rng.gen_range(0..=2);
        let mut ctx: Vec<Iri> = behavioral.choose_multiple(&mut rng, n).cloned().collect();
        let n = rng.gen_range(0..=2);
        ctx.extend(spatial.choose_multiple(&mut rng, n).cloned());
        emit::event(&mut g, &event, place, &agents, &acts, &ctx);

        let node = ns::id(&format!("time_{k}"));
        let begin = base_time() + Duration::minutes(rng.gen_range(0..window));
        let minutes = rng.gen_range(0..=240);
        let end = begin + Duration::minutes(minutes);
        match rng.gen_range(0..20) {
            0..=9 => emit::time_node(&mut g, &event, &node, begin, end, None),
            10..=12 => {
                let explicit = if rng.gen_bool(0.5) { minutes } else { rng.gen_range(1..=60) };
                emit::time_node(&mut g, &event, &node, begin, end, Some(explicit));
            }
            13..=15 => {
                g.add(&event, &ns::pred::time(), node.clone());
                g.add(&node, &ns::rdf_type(), ns::time("TemporalEntity"));
                let slack = Duration::minutes(rng.gen_range(0..=90));
                g.add(&node, &ns::pred::has_reliable_beginning(), Literal::date_time(begin));
                g.add(&node, &ns::pred::has_reliable_end(), Literal::date_time(end));
                g.add(&node, &ns::pred::has_possible_beginning(), Literal::date_time(begin - slack));
                g.add(&node, &ns::pred::has_possible_end(), Literal::date_time(end + slack));
            }
            16 => {
                g.add(&event, &ns::pred::time(), node.clone());
                g.add(&node, &ns::pred::has_beginning(), Literal::date_time(begin));
            }
            _ => {}
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reasoner::event_ids;

    #[test]
    fn deterministic_and_sized() {
        let v = Vocabulary::standard();
        let spec = RandomGraphSpec::new(200, 10, 30, 11);
        let a = random_graph(&spec, &v);
        assert_eq!(a, random_graph(&spec, &v));
        assert_eq!(event_ids(&a).count(), 200);
        assert_ne!(a, random_graph(&RandomGraphSpec { seed: 12, ..spec }, &v));
    }
}
