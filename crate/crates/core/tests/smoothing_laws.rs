use proptest::prelude::*;
use reeb_core::graph::{is_isomorphic, validate};
use reeb_core::harness::generate_random_reeb;
use reeb_core::smoothing::{fiber_components_oracle, points_at_level, smooth, smooth_with, Diagonal};
use reeb_core::{ReebGraph, Value};

fn v(s: &str) -> Value {
    s.parse().unwrap()
}

fn graph_strategy() -> impl Strategy<Value = ReebGraph> {
    (2usize..=8, 0usize..=2, any::<u64>()).prop_map(|(n, l, seed)| {
        let l = l.min(n * (n - 1) / 2 - (n - 1));
        generate_random_reeb(n, l, seed).unwrap()
    })
}

fn eps_strategy() -> impl Strategy<Value = Value> {
    (0i64..=400).prop_map(|k| Value::from_units(k * 1_000_000))
}

#[test]
fn loop_of_height_h_dies_at_half_h() {
    let g = ReebGraph::loop_graph(v("0"), v("1"));
    assert_eq!(smooth(&g, v("0.499")).unwrap().betti_1(), 1);
    let killed = smooth(&g, v("0.5")).unwrap();
    assert_eq!(killed.betti_1(), 0);
    assert!(is_isomorphic(&killed, &ReebGraph::segment(v("-0.5"), v("1.5"))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn semigroup_law(g in graph_strategy(), e in eps_strategy(), d in eps_strategy()) {
        let twice = smooth(&smooth(&g, e).unwrap(), d).unwrap();
        let once = smooth(&g, e + d).unwrap();
        prop_assert!(is_isomorphic(&twice, &once));
    }

    #[test]
    fn range_dilates_and_components_persist(g in graph_strategy(), e in eps_strategy()) {
        let s = smooth(&g, e).unwrap();
        prop_assert!(validate(&s).is_ok());
        prop_assert_eq!(s.min_value().unwrap(), g.min_value().unwrap() - e);
        prop_assert_eq!(s.max_value().unwrap(), g.max_value().unwrap() + e);
        prop_assert_eq!(s.component_count(), g.component_count());
    }

    #[test]
    fn loops_only_attenuate(g in graph_strategy(), e in eps_strategy(), d in eps_strategy()) {
        let a = smooth(&g, e).unwrap();
        let b = smooth(&g, e + d).unwrap();
        prop_assert!(a.betti_1() <= g.betti_1());
        prop_assert!(b.betti_1() <= a.betti_1());
        let span = g.max_value().unwrap() - g.min_value().unwrap();
        let flat = smooth(&g, Value::from_units(span.units() / 2 + 1)).unwrap();
        prop_assert_eq!(flat.betti_1(), 0);
    }

    #[test]
    fn fiber_identity(g in graph_strategy(), e in eps_strategy(), t in 0i64..=1200) {
        let s = smooth(&g, e).unwrap();
        let level = Value::from_units((t - 100) * 1_000_000);
        prop_assert_eq!(points_at_level(&s, level), fiber_components_oracle(&g, e, level).len());
    }

    #[test]
    fn triangulation_choice_is_irrelevant(g in graph_strategy(), e in eps_strategy()) {
        let a = smooth_with(&g, e, Diagonal::Rising).unwrap();
        let b = smooth_with(&g, e, Diagonal::Falling).unwrap();
        prop_assert!(is_isomorphic(&a, &b));
    }
}
