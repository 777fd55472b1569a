mod common;

use std::collections::BTreeSet;

use ciro_core::datagen::{build_demo_dataset, random_graph, RandomGraphSpec};
use ciro_core::query::{co_attendees, neighborhood};
use ciro_core::rdf::{ns, Graph, Iri, Layers, Term, Triple};
use ciro_core::reasoner::classify_all;
use ciro_core::vocab::Vocabulary;

fn edges_of(n: &ciro_core::query::Neighborhood) -> BTreeSet<Triple> {
    n.edges.iter().map(|e| Triple::new(e.subject.clone(), e.predicate.clone(), e.object.clone())).collect()
}

fn compare_unbounded(g: &Graph, inferred: &Graph, center: &Iri, depth: usize) {
    let layers = Layers::new(g, Some(inferred));
    let n = neighborhood(&layers, None, center, depth, usize::MAX).unwrap();
    let (nodes, edges) = common::neighborhood(&[g, inferred], center, depth);
    let got: BTreeSet<Term> = n.node_ids().into_iter().cloned().collect();
    assert_eq!(got, nodes, "{center} at depth {depth}");
    assert_eq!(edges_of(&n), edges, "{center} at depth {depth}");
}

#[test]
fn unbounded_neighborhood_is_plain_bfs() {
    let vocab = Vocabulary::standard();
    for seed in 0..5 {
        let g = random_graph(&RandomGraphSpec::new(30, 10, 6, seed), &vocab);
        let c = classify_all(&g, &vocab);
        for center in ["event_0", "person_1", "place_2"] {
            for depth in 0..3 {
                compare_unbounded(&g, &c.inferred, &ns::id(center), depth);
            }
        }
    }
    let demo = build_demo_dataset();
    let c = classify_all(&demo, &vocab);
    compare_unbounded(&demo, &c.inferred, &ns::id("event_a1"), 2);
}

#[test]
fn fanout_limit_keeps_a_sub_neighborhood() {
    let vocab = Vocabulary::standard();
    let g = random_graph(&RandomGraphSpec::new(60, 15, 8, 9), &vocab);
    let layers = Layers::asserted_only(&g);
    let (all_nodes, all_edges) = common::neighborhood(&[&g], &ns::id("place_0"), 2);
    let limited = neighborhood(&layers, None, &ns::id("place_0"), 2, 3).unwrap();
    let edges = edges_of(&limited);
    assert!(edges.is_subset(&all_edges));
    assert!(limited.node_ids().into_iter().all(|n| all_nodes.contains(n)));
    // The center plus at most 3 neighbors, each expanded by at most 3 edges.
    assert!(edges.len() <= 3 + 3 * 3, "{}", edges.len());
}

#[test]
fn co_attendees_over_asserted_layer_only() {
    let vocab = Vocabulary::standard();
    let g = random_graph(&RandomGraphSpec::new(200, 40, 20, 21), &vocab);
    // Without inference no situation carries a risk type, so nobody qualifies.
    let layers = Layers::asserted_only(&g);
    for k in 0..10 {
        let p = ns::id(&format!("person_{k}"));
        let got = co_attendees(&layers, &vocab, &p, &ns::plod("ClosedSpace")).unwrap();
        let want = common::co_attendees(&[&g], vocab.registry(), &p, &ns::plod("ClosedSpace"));
        assert!(want.is_empty());
        assert!(got.rows.is_empty());
    }
}
