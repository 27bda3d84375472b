use proptest::prelude::*;
use reeb_core::format::{parse_reeb, write_reeb};
use reeb_core::graph::{canonicalize, find_isomorphism, is_isomorphic, validate, Edge, Vertex};
use reeb_core::harness::generate_random_reeb;
use reeb_core::{ReebGraph, Value};

fn graph_strategy() -> impl Strategy<Value = ReebGraph> {
    (2usize..=8, 0usize..=2, any::<u64>()).prop_map(|(n, l, seed)| {
        let l = l.min(n * (n - 1) / 2 - (n - 1));
        generate_random_reeb(n, l, seed).unwrap()
    })
}

/// Same graph with ids renamed and both lists reversed.
fn relabel(g: &ReebGraph, offset: u64) -> ReebGraph {
    let rename = |id: u64| 1000 - id + offset;
    let vertices = g.vertices().iter().rev().map(|v| Vertex { id: rename(v.id), value: v.value }).collect();
    let edges = g
        .edges()
        .iter()
        .rev()
        .map(|e| Edge {
            id: e.id + 7 * offset,
            lower: rename(e.lower),
            upper: rename(e.upper),
        })
        .collect();
    ReebGraph::new(vertices, edges)
}

/// Inserts a regular vertex at the midpoint of every edge.
fn subdivide(g: &ReebGraph) -> ReebGraph {
    let mut vertices = g.vertices().to_vec();
    let mut edges = Vec::new();
    let next = vertices.iter().map(|v| v.id).max().unwrap_or(0) + 1;
    for (k, e) in g.edges().iter().enumerate() {
        let lo = g.value_of(e.lower).unwrap();
        let hi = g.value_of(e.upper).unwrap();
        let mid = Value::from_units(lo.units() + (hi.units() - lo.units()) / 2);
        let id = next + k as u64;
        vertices.push(Vertex { id, value: mid });
        edges.push(Edge { id: 2 * k as u64, lower: e.lower, upper: id });
        edges.push(Edge { id: 2 * k as u64 + 1, lower: id, upper: e.upper });
    }
    ReebGraph::new(vertices, edges)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonicalize_is_idempotent(g in graph_strategy()) {
        prop_assert!(validate(&g).is_ok());
        prop_assert_eq!(canonicalize(&g), g);
    }

    #[test]
    fn subdivision_canonicalizes_back(g in graph_strategy()) {
        let s = subdivide(&g);
        prop_assert!(validate(&s).is_ok());
        prop_assert!(is_isomorphic(&canonicalize(&s), &g));
    }

    #[test]
    fn isomorphism_is_an_equivalence(g in graph_strategy()) {
        let h = canonicalize(&relabel(&g, 3));
        let k = canonicalize(&relabel(&h, 11));
        prop_assert!(is_isomorphic(&g, &g));
        prop_assert_eq!(is_isomorphic(&g, &h), is_isomorphic(&h, &g));
        prop_assert!(is_isomorphic(&g, &h) && is_isomorphic(&h, &k) && is_isomorphic(&g, &k));
        let c = find_isomorphism(&g, &h, Value::ZERO).unwrap();
        prop_assert_eq!(c.vertices.len(), g.vertex_count());
        prop_assert_eq!(c.edges.len(), g.edge_count());
    }

    #[test]
    fn shift_breaks_isomorphism(g in graph_strategy()) {
        prop_assert!(!is_isomorphic(&g, &g.shifted(Value::from_units(1_000_000))));
    }

    #[test]
    fn text_format_round_trips(g in graph_strategy()) {
        let back = parse_reeb(&write_reeb(&g)).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn betti_number_is_cycle_rank(g in graph_strategy()) {
        prop_assert_eq!(
            g.betti_1() + g.vertex_count(),
            g.edge_count() + g.component_count()
        );
    }
}
