//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any fails.

use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use reeb_core::cosheaf::{
    cosheaf_of, d_i_bounds, decide_interleaving, evaluate, realize, shift, Endpoint, OpenInterval, SearchBudget, Side,
};
use reeb_core::graph::is_isomorphic;
use reeb_core::harness::{random_pairs, sandwich_report, RowStatus, SandwichConfig};
use reeb_core::metric::{path_height, PathHeight};
use reeb_core::persistence::{bottleneck, DiagramPoint, PersistenceDiagram, PointKind};
use reeb_core::smoothing::{fiber_components_oracle, points_at_level, smooth};
use reeb_core::{GraphPoint, ReebGraph, Value};

const CORPUS_SEED: u64 = 2024;
const SANDWICH_SEED: u64 = 1;

fn v(s: &str) -> Value {
    s.parse().unwrap()
}

/// Twenty seeded graphs with at most `max_vertices` vertices and two loops.
fn corpus(max_vertices: usize) -> Vec<ReebGraph> {
    random_pairs(20, CORPUS_SEED, max_vertices, 2)
        .into_iter()
        .map(|(a, _)| a)
        .collect()
}

type Verdict = Result<String, String>;

fn fiber_identity() -> Verdict {
    let start = Instant::now();
    let mut checked = 0;
    for (i, g) in corpus(8).iter().enumerate() {
        for eps in [v("0.1"), v("0.3")] {
            let s = smooth(g, eps).map_err(|e| e.to_string())?;
            let (lo, hi) = (g.min_value().unwrap() - eps, g.max_value().unwrap() + eps);
            for k in 0..10 {
                let level = Value::from_units(lo.units() + (hi.units() - lo.units()) * k / 9);
                let (got, want) = (points_at_level(&s, level), fiber_components_oracle(g, eps, level).len());
                if got != want {
                    return Err(format!("graph {i}, eps {eps}, level {level}: {got} points vs {want} components"));
                }
                checked += 1;
            }
        }
    }
    let took = start.elapsed();
    if took >= Duration::from_secs(60) {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("{checked} levels in {took:.2?}"))
}

fn semigroup() -> Verdict {
    let mut checked = 0;
    for (i, g) in corpus(8).iter().enumerate() {
        for (e, d) in [(v("0.1"), v("0.1")), (v("0.1"), v("0.2"))] {
            let twice = smooth(&smooth(g, e).unwrap(), d).unwrap();
            if !is_isomorphic(&twice, &smooth(g, e + d).unwrap()) {
                return Err(format!("graph {i}, ({e}, {d})"));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} isomorphisms"))
}

fn exact(x: Value) -> Endpoint {
    Endpoint::At(x, Side::Exact)
}

/// Strata, infinitesimal neighbourhoods and open stars of a critical grid.
fn atomic_cells(grid: &[Value]) -> Vec<OpenInterval> {
    let bound = |i: isize| {
        if i < 0 {
            Endpoint::NegInf
        } else if i as usize >= grid.len() {
            Endpoint::PosInf
        } else {
            exact(grid[i as usize])
        }
    };
    let mut cells = Vec::new();
    for i in 0..=grid.len() as isize {
        cells.push(OpenInterval { lo: bound(i - 1), hi: bound(i) });
    }
    for (i, &t) in grid.iter().enumerate() {
        let i = i as isize;
        cells.push(OpenInterval::around(t));
        cells.push(OpenInterval { lo: bound(i - 1), hi: bound(i + 1) });
    }
    cells
}

fn cosheaf_round_trip() -> Verdict {
    let mut cells = 0;
    for (i, g) in corpus(8).iter().enumerate() {
        let f = cosheaf_of(g);
        let back = realize(&f).map_err(|e| e.to_string())?;
        if !is_isomorphic(&back, g) {
            return Err(format!("graph {i}: realize(cosheaf_of(G)) differs from G"));
        }
        for eps in [v("0.1"), v("0.3")] {
            let s = shift(&f, eps).map_err(|e| e.to_string())?;
            let smoothed = smooth(g, eps).unwrap();
            if !is_isomorphic(&realize(&s).unwrap(), &smoothed) {
                return Err(format!("graph {i}, eps {eps}: shifted cosheaf does not realize the smoothing"));
            }
            let t = cosheaf_of(&smoothed);
            for cell in atomic_cells(s.critical_values()) {
                let want = evaluate(&f, &cell.thicken(eps)).len();
                let (a, b) = (evaluate(&s, &cell).len(), evaluate(&t, &cell).len());
                if a != want || b != want {
                    return Err(format!("graph {i}, eps {eps}, cell {cell:?}: {a}, {b} vs {want}"));
                }
                cells += 1;
            }
        }
    }
    Ok(format!("20 round trips, {cells} cells coherent"))
}

/// Minimum height range over simple paths in the midpoint subdivision.
fn brute_force_df(g: &ReebGraph, p: usize, q: usize) -> Option<f64> {
    let d = g.dense();
    let n = d.values.len();
    let mut values: Vec<f64> = d.values.iter().map(|x| x.to_f64()).collect();
    let mut adj = vec![Vec::new(); n + d.edges.len()];
    for (k, &(a, b)) in d.edges.iter().enumerate() {
        values.push((values[a] + values[b]) / 2.0);
        for end in [a, b] {
            adj[end].push(n + k);
            adj[n + k].push(end);
        }
    }
    let mut best: Option<f64> = None;
    let mut stack = vec![(p, values[p], values[p], vec![p])];
    while let Some((at, lo, hi, path)) = stack.pop() {
        if at == q {
            best = Some(best.map_or(hi - lo, |b| b.min(hi - lo)));
            continue;
        }
        for &nb in &adj[at] {
            if !path.contains(&nb) {
                let mut next = path.clone();
                next.push(nb);
                stack.push((nb, lo.min(values[nb]), hi.max(values[nb]), next));
            }
        }
    }
    best
}

fn df_oracle() -> Verdict {
    let mut pairs = 0;
    for (i, g) in corpus(6).iter().enumerate() {
        let mut pts: Vec<GraphPoint> = g.vertices().iter().map(|x| GraphPoint::Vertex(x.id)).collect();
        pts.extend(g.edges().iter().map(|e| GraphPoint::Edge { edge: e.id, s: 0.5 }));
        for (a, p) in pts.iter().enumerate() {
            for (b, q) in pts.iter().enumerate() {
                let got = path_height(g, p, q).map_err(|e| e.to_string())?;
                let ok = match (got, brute_force_df(g, a, b)) {
                    (PathHeight::Finite(x), Some(y)) => (x - y).abs() <= 1e-9,
                    (PathHeight::Disconnected, None) => true,
                    _ => false,
                };
                if !ok {
                    return Err(format!("graph {i}, {p} to {q}: {got:?}"));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} point pairs"))
}

fn landmarks() -> Verdict {
    let tol = v("0.001");
    let budget = SearchBudget::default();
    let (lp, e1, e2) = (
        ReebGraph::loop_graph(v("0"), v("1")),
        ReebGraph::segment(v("0"), v("1")),
        ReebGraph::segment(v("0"), v("2")),
    );
    let a = d_i_bounds(&cosheaf_of(&lp), &cosheaf_of(&e1), tol, budget)
        .map_err(|e| e.to_string())?
        .to_bound_interval();
    if !(a.contains(0.25) && a.width() <= 1e-3 && !a.undecided) {
        return Err(format!("loop vs edge: {a:?}"));
    }
    let b = d_i_bounds(&cosheaf_of(&e1), &cosheaf_of(&e2), tol, budget)
        .map_err(|e| e.to_string())?
        .to_bound_interval();
    if !b.contains(1.0) {
        return Err(format!("edge vs edge: {b:?}"));
    }
    let pt = |birth, death| PersistenceDiagram {
        points: vec![DiagramPoint { dim: 0, kind: PointKind::Ordinary, birth, death }],
    };
    let off = bottleneck(&pt(1.0, 0.0), &PersistenceDiagram::default());
    let moved = bottleneck(&pt(0.0, 1.0), &pt(0.0, 2.0));
    if off != 0.5 || moved != 1.0 {
        return Err(format!("bottleneck {off}, {moved}"));
    }
    Ok(format!(
        "d_I(loop, edge) in [{}, {}], d_I(edges) in [{}, {}], bottlenecks 0.5 and 1",
        a.lo, a.hi, b.lo, b.hi
    ))
}

struct SandwichSummary {
    rows: Vec<reeb_core::harness::SandwichRow>,
    took: Duration,
}

fn run_sandwich() -> SandwichSummary {
    let start = Instant::now();
    let pairs = random_pairs(50, SANDWICH_SEED, 8, 2);
    let config = SandwichConfig { seed: SANDWICH_SEED, ..SandwichConfig::default() };
    let rows = sandwich_report(&pairs, &config).into_iter().map(|(r, _)| r).collect();
    SandwichSummary { rows, took: start.elapsed() }
}

fn sandwich_consistency(s: &SandwichSummary) -> Verdict {
    let bad: Vec<usize> = s.rows.iter().filter(|r| !(r.c1 && r.c2)).map(|r| r.pair_id).collect();
    let falsified = s.rows.iter().filter(|r| r.status == RowStatus::Falsified).count();
    let undecided = s.rows.iter().filter(|r| r.status == RowStatus::Undecided).count();
    if !bad.is_empty() || falsified > 0 {
        return Err(format!("c1/c2 fail on pairs {bad:?}, {falsified} falsified rows"));
    }
    if s.took >= Duration::from_secs(30 * 60) {
        return Err(format!("took {:?}", s.took));
    }
    if s.rows.iter().any(|r| r.recheck() != r.checks()) {
        return Err("stored checks disagree with stored bounds".into());
    }
    Ok(format!("{} rows, 0 falsified, {undecided} undecided, {:.2?}", s.rows.len(), s.took))
}

fn bottleneck_stability(s: &SandwichSummary) -> Verdict {
    let bad: Vec<usize> = s.rows.iter().filter(|r| !(r.c3 && r.c4 && r.c5)).map(|r| r.pair_id).collect();
    if bad.is_empty() {
        Ok(format!("c3, c4, c5 hold on {} rows", s.rows.len()))
    } else {
        Err(format!("c3-c5 fail on pairs {bad:?}"))
    }
}

fn decision_sanity() -> Verdict {
    let budget = SearchBudget::default();
    for (i, g) in corpus(8).iter().enumerate() {
        let f = cosheaf_of(g);
        if !decide_interleaving(&f, &f, Value::ZERO, budget).unwrap().is_yes() {
            return Err(format!("graph {i} not 0-interleaved with itself"));
        }
    }
    let lp = cosheaf_of(&ReebGraph::loop_graph(v("0"), v("1")));
    let e1 = cosheaf_of(&ReebGraph::segment(v("0"), v("1")));
    if decide_interleaving(&lp, &e1, v("0.2"), budget).unwrap().is_yes() {
        return Err("loop vs edge interleaved at 0.2".into());
    }
    let samples = [v("0"), v("0.05"), v("0.15"), v("0.3"), v("0.6")];
    for (i, (x, y)) in random_pairs(10, CORPUS_SEED + 1, 8, 2).iter().enumerate() {
        let (f, g) = (cosheaf_of(x), cosheaf_of(y));
        let answers: Vec<bool> = samples
            .iter()
            .map(|&e| decide_interleaving(&f, &g, e, budget).unwrap().is_yes())
            .collect();
        if answers.windows(2).any(|w| w[0] && !w[1]) {
            return Err(format!("pair {i} not monotone: {answers:?}"));
        }
    }
    Ok("20 self-interleavings, loop/edge no at 0.2, 10 pairs monotone".into())
}

fn determinism() -> Verdict {
    let dir = std::env::temp_dir().join(format!("reebctl-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let run = |name: &str| -> Result<Vec<u8>, String> {
        let out = dir.join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_reebctl"))
            .args(["sandwich", "--trials", "10", "--seed", "7", "--no-timestamp", "-o"])
            .arg(&out)
            .stderr(Stdio::null())
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("reebctl exited with {status}"));
        }
        std::fs::read(&out).map_err(|e| e.to_string())
    };
    let (a, b) = (run("a.csv")?, run("b.csv")?);
    let _ = std::fs::remove_dir_all(&dir);
    if a == b {
        Ok(format!("{} identical bytes", a.len()))
    } else {
        Err("CSV outputs differ".into())
    }
}

fn main() {
    let sandwich = run_sandwich();
    let criteria: Vec<(&str, Verdict)> = vec![
        ("fiber identity", fiber_identity()),
        ("semigroup law", semigroup()),
        ("cosheaf round trip", cosheaf_round_trip()),
        ("d_f oracle equivalence", df_oracle()),
        ("landmark values", landmarks()),
        ("sandwich consistency", sandwich_consistency(&sandwich)),
        ("bottleneck stability", bottleneck_stability(&sandwich)),
        ("decision sanity", decision_sanity()),
        ("determinism", determinism()),
    ];
    let mut failed = 0;
    for (i, (name, verdict)) in criteria.iter().enumerate() {
        match verdict {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
