use proptest::prelude::*;
use reeb_core::cosheaf::{
    cosheaf_of, decide_interleaving, evaluate, realize, shift, verify_certificate, ConstructibleCosheaf, Decision,
    Endpoint, OpenInterval, SearchBudget, Side,
};
use reeb_core::graph::is_isomorphic;
use reeb_core::harness::generate_random_reeb;
use reeb_core::smoothing::smooth;
use reeb_core::{ReebGraph, Value};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = ReebGraph> {
    (2usize..=max_n, 0usize..=2, any::<u64>()).prop_map(|(n, l, seed)| {
        let l = l.min(n * (n - 1) / 2 - (n - 1));
        generate_random_reeb(n, l, seed).unwrap()
    })
}

fn exact(v: Value) -> Endpoint {
    Endpoint::At(v, Side::Exact)
}

/// Strata, infinitesimal neighbourhoods of critical values, and open stars
/// of critical values, each star paired with the cells it contains.
fn atomic_cells(grid: &[Value]) -> Vec<(OpenInterval, Vec<OpenInterval>)> {
    let bound = |i: isize| -> Endpoint {
        if i < 0 {
            Endpoint::NegInf
        } else if i as usize >= grid.len() {
            Endpoint::PosInf
        } else {
            exact(grid[i as usize])
        }
    };
    let stratum = |i: isize| OpenInterval { lo: bound(i - 1), hi: bound(i) };
    (0..grid.len() as isize)
        .map(|i| {
            let star = OpenInterval { lo: bound(i - 1), hi: bound(i + 1) };
            let parts = vec![stratum(i), OpenInterval::around(grid[i as usize]), stratum(i + 1)];
            (star, parts)
        })
        .collect()
}

/// Sorted fibre sizes of a corestriction map, which do not depend on how
/// either set is labelled.
fn fibre_profile(map: &[usize], target_len: usize) -> Vec<usize> {
    let mut sizes = vec![0; target_len];
    for &t in map {
        sizes[t] += 1;
    }
    sizes.sort_unstable();
    sizes
}

fn check_coherent(f: &ConstructibleCosheaf, s: &ConstructibleCosheaf, eps: Value) -> Result<(), TestCaseError> {
    for (star, parts) in atomic_cells(s.critical_values()) {
        let s_star = evaluate(s, &star);
        let f_star = evaluate(f, &star.thicken(eps));
        prop_assert_eq!(s_star.len(), f_star.len());
        for part in parts {
            let s_part = evaluate(s, &part);
            let f_part = evaluate(f, &part.thicken(eps));
            prop_assert_eq!(s_part.len(), f_part.len());
            prop_assert_eq!(
                fibre_profile(&s_part.corestriction(&s_star), s_star.len()),
                fibre_profile(&f_part.corestriction(&f_star), f_star.len())
            );
        }
    }
    Ok(())
}

fn eps(k: i64) -> Value {
    Value::from_units(k * 1_000_000)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn realize_inverts_cosheaf_of(g in graph_strategy(8)) {
        let back = realize(&cosheaf_of(&g)).unwrap();
        prop_assert!(is_isomorphic(&back, &g));
    }

    #[test]
    fn shift_agrees_with_smoothing(g in graph_strategy(8), k in 0i64..=400) {
        let f = cosheaf_of(&g);
        let s = shift(&f, eps(k)).unwrap();
        prop_assert!(is_isomorphic(&realize(&s).unwrap(), &smooth(&g, eps(k)).unwrap()));
        check_coherent(&f, &s, eps(k))?;
        check_coherent(&f, &cosheaf_of(&smooth(&g, eps(k)).unwrap()), eps(k))?;
    }

    #[test]
    fn shifts_compose(g in graph_strategy(6), a in 0i64..=200, b in 0i64..=200) {
        let f = cosheaf_of(&g);
        let twice = shift(&shift(&f, eps(a)).unwrap(), eps(b)).unwrap();
        let once = shift(&f, eps(a + b)).unwrap();
        prop_assert!(is_isomorphic(&realize(&twice).unwrap(), &realize(&once).unwrap()));
    }
}

fn decide(f: &ConstructibleCosheaf, g: &ConstructibleCosheaf, e: Value) -> Decision {
    decide_interleaving(f, g, e, SearchBudget::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn decision_is_monotone_and_symmetric(x in graph_strategy(5), y in graph_strategy(5)) {
        let (f, g) = (cosheaf_of(&x), cosheaf_of(&y));
        let mut seen_yes = false;
        for k in [0i64, 100, 200, 350, 500, 800, 1200] {
            let e = eps(k);
            let fg = decide(&f, &g, e);
            let gf = decide(&g, &f, e);
            let undecided = matches!(fg, Decision::Undecided { .. });
            prop_assert!(!undecided);
            prop_assert_eq!(fg.is_yes(), gf.is_yes(), "epsilon {}", e);
            if seen_yes {
                prop_assert!(fg.is_yes(), "yes below {} but no at it", e);
            }
            if let Decision::Yes(cert) = &fg {
                seen_yes = true;
                prop_assert!(verify_certificate(&f, &g, cert).is_ok());
            }
        }
    }
}

#[test]
fn every_graph_is_zero_interleaved_with_itself() {
    for seed in 0..20 {
        let n = 2 + seed as usize % 7;
        let g = generate_random_reeb(n, (seed as usize % 3).min(n * (n - 1) / 2), seed).unwrap();
        let f = cosheaf_of(&g);
        assert!(decide(&f, &f, Value::ZERO).is_yes(), "seed {seed}");
    }
}

#[test]
fn shifted_copy_is_interleaved_at_the_shift() {
    let g = generate_random_reeb(6, 2, 42).unwrap();
    let f = cosheaf_of(&g);
    let h = cosheaf_of(&g.shifted(eps(30)));
    assert!(!decide(&f, &h, eps(29)).is_yes());
    assert!(decide(&f, &h, eps(30)).is_yes());
}
