use chrono::Duration;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{base_time, emit};
use crate::rdf::{ns, parse_turtle, Graph, Iri, Literal};

/// The demo dataset as shipped, in canonical serialization.
pub const DEMO_TURTLE: &str = include_str!("../../data/demo.ttl");

const SCENARIOS: &str = r#"
@prefix : <http://plod.info/rdf/> .
@prefix id: <http://plod.info/rdf/id/> .

id:person_a_A a :Patient ; schema:name "A" ; schema:healthCondition "confirmed positive" ;
    schema:homeLocation id:home_a ; :age id:person_a_A_age .
id:person_a_A_age a :Age ; :value 35 .

# Dinner with B and C.
id:event_a1 a schema:Event ;
    :agent id:person_a_A, id:person_b_B, id:person_c_C ;
    schema:location id:restaurant_a1 ;
    :context :relax ;
    :time id:time_a1 .
id:time_a1 a time:TemporalEntity ;
    time:hasBeginning "2020-04-01T12:00:00"^^xsd:dateTime ;
    time:hasEnd "2020-04-01T13:00:00"^^xsd:dateTime .
id:restaurant_a1 a :Restaurant ; :city "shibuya-ku" .
id:situation_a1 a :Situation ; :isSituationOf id:restaurant_a1 ; :time id:time_a1 .

# Bus ride: an event and the situation of the bus it happens on.
<http://plod.info/rdf/id/event_0>
  a schema:Event ;
  :action :talk ;
  schema:location <http://plod.info/rdf/id/Bus_0> ;
  :context :facetoface, :relax .

<http://plod.info/rdf/id/situation_0>
  a :Situation ;
  :isSituationOf <http://plod.info/rdf/id/Bus_0> ;
  :context :crowded, :smallSpace .

id:Bus_0 a :Bus ; :city "shinjuku-ku" .
id:event_0 :agent id:person_a_A, id:person_d_D ; :time id:time_0 .
id:time_0 a time:TemporalEntity ;
    time:hasBeginning "2020-04-02T08:00:00"^^xsd:dateTime ;
    time:hasEnd "2020-04-02T08:40:00"^^xsd:dateTime .

# Two overlapping visits to the same bar.
id:bar_a3 a :Bar ; :city "minato-ku" .
id:event_c16 a schema:Event ;
    :agent id:person_c_C ;
    schema:location id:bar_a3 ;
    :action :talk ;
    :context :relax ;
    :time id:time_c16 .
id:time_c16 a time:TemporalEntity ;
    time:hasBeginning "2020-04-03T19:00:00"^^xsd:dateTime ;
    time:hasEnd "2020-04-03T21:00:00"^^xsd:dateTime .
id:event_a21 a schema:Event ;
    :agent id:person_a_A, id:person_e_E ;
    schema:location id:bar_a3 ;
    :context :facetoface ;
    :time id:time_a21 .
id:time_a21 a time:TemporalEntity ;
    time:hasBeginning "2020-04-03T20:30:00"^^xsd:dateTime ;
    time:hasEnd "2020-04-03T22:30:00"^^xsd:dateTime .
id:situation_a3 a :Situation ; :isSituationOf id:bar_a3 ; :context :crowded ; :time id:time_s3 .
id:time_s3 a time:TemporalEntity ;
    time:hasBeginning "2020-04-03T19:00:00"^^xsd:dateTime ;
    time:hasEnd "2020-04-03T23:00:00"^^xsd:dateTime .
"#;

const PEOPLE: [(&str, u32); 9] = [
    ("b_B", 32),
    ("c_C", 61),
    ("d_D", 24),
    ("e_E", 47),
    ("f_F", 19),
    ("g_G", 38),
    ("h_H", 72),
    ("i_I", 55),
    ("j_J", 29),
];

/// (place, class, city, enclosing venue)
const PLACES: [(&str, &str, &str, Option<&str>); 8] = [
    ("gym_1", "Gym", "shibuya-ku", None),
    ("park_1", "Park", "shibuya-ku", None),
    ("train_1", "Train", "chiyoda-ku", None),
    ("restaurant_2", "Restaurant", "minato-ku", None),
    ("bar_b1", "Bar", "shinjuku-ku", None),
    ("mall_1", "IndoorFacility", "setagaya-ku", None),
    ("cafe_m1", "Restaurant", "setagaya-ku", Some("mall_1")),
    ("shop_m2", "IndoorFacility", "setagaya-ku", Some("mall_1")),
];

/// Hand-authored scenarios plus seeded filler events for ten people.
pub fn build_demo_dataset() -> Graph {
    let mut g = parse_turtle(SCENARIOS).expect("demo scenarios parse");
    let mut rng = ChaCha8Rng::seed_from_u64(2020_04_01);

    let mut persons = vec![ns::id("person_a_A")];
    for (name, age) in PEOPLE {
        let p = ns::id(&format!("person_{name}"));
        emit::person(&mut g, &p, age);
        g.add(&p, &ns::schema("name"), Literal::plain(&name[2..]));
        persons.push(p);
    }

    let mut places = Vec::new();
    for (name, class, city, venue) in PLACES {
        let p = ns::id(name);
        g.add(&p, &ns::rdf_type(), ns::plod(class));
        match venue {
            Some(v) => {
                g.add(&p, &ns::pred::location(), ns::id(v));
            }
            None => {
                g.add(&p, &ns::pred::city(), Literal::plain(city));
            }
        }
        places.push(p);
    }
    let spatial = ["crowded", "smallSpace", "poorVentilation"].map(ns::plod);
    let behavioral = ["facetoface", "relax"].map(ns::plod);
    let actions = ["talk", "removeMask", "eat", "sing", "shareThing", "touchSurface"].map(ns::plod);

    for (k, place) in places.iter().enumerate() {
        if k % 3 == 2 {
            continue;
        }
        let s = ns::id(&format!("situation_f{k}"));
        let n = rng.gen_range(0..=2);
        let ctx: Vec<Iri> = spatial.choose_multiple(&mut rng, n).cloned().collect();
        emit::situation(&mut g, &s, place, &ctx);
    }

    for k in 0..40 {
        let event = ns::id(&format!("event_f{k}"));
        let place = places.choose(&mut rng).unwrap();
        let n = rng.gen_range(1..=3);
        let mut agents: Vec<Iri> = persons[1..].choose_multiple(&mut rng, n).cloned().collect();
        if rng.gen_bool(0.4) {
            agents.push(persons[0].clone());
        }
        let n = rng.gen_range(0..=2);
        let acts: Vec<Iri> = actions.choose_multiple(&mut rng, n).cloned().collect();
        let n = rng.gen_range(0..=2);
        let mut ctx: Vec<Iri> = behavioral.choose_multiple(&mut rng, n).cloned().collect();
        if rng.gen_bool(0.3) {
            ctx.push(spatial.choose(&mut rng).unwrap().clone());
        }
        emit::event(&mut g, &event, place, &agents, &acts, &ctx);
        let begin = base_time() + Duration::minutes(rng.gen_range(6 * 60..7 * 24 * 60) / 15 * 15);
        let end = begin + Duration::minutes(rng.gen_range(2..=10) * 15);
        emit::time_node(&mut g, &event, &ns::id(&format!("time_f{k}")), begin, end, None);
    }
    g
}
