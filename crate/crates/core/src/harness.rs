//! Random instances and the distance sandwich experiment.
//!
//! Each row brackets `d_I` and `d_FD` between two graphs, computes the
//! bottleneck distances of their diagrams, and checks
//!
//! * c1: `d_I.lo ≤ d_FD.hi`
//! * c2: `d_FD.lo ≤ 7 · d_I.hi`
//! * c3: `d_B(Dg₀) ≤ d_FD.hi`
//! * c4: `d_B(ExDg₁) ≤ 3 · d_FD.hi`
//! * c5: `d_B(Dg₀) ≤ 7 · d_I.hi` and `d_B(ExDg₁) ≤ 21 · d_I.hi`
//!
//! with an absolute slack of 1e-9. Only bound endpoints enter the checks.

use std::io::Write;
use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{de_extended, ser_extended, BoundInterval};
use crate::cosheaf::{cosheaf_of, d_i_bounds, InterleavingCertificate, SearchBudget};
use crate::distortion::{fdd_upper_bound, lower_bound_from_parts, MapPairRecord};
use crate::error::HarnessError;
use crate::graph::{canonicalize, ReebGraph};
use crate::persistence::{bottleneck, extended_diagrams};
use crate::value::Value;

pub const CHECK_SLACK: f64 = 1e-9;
/// Values are drawn from `k / VALUE_GRID` for `0 < k < VALUE_GRID`.
pub const VALUE_GRID: i64 = 1000;

/// A canonical random graph with `n_vertices` distinct values in `(0, 1)`,
/// a random increasing spanning tree and `n_loops` extra edges.
pub fn generate_random_reeb(n_vertices: usize, n_loops: usize, seed: u64) -> Result<ReebGraph, HarnessError> {
    if n_vertices < 2 {
        return Err(HarnessError::Infeasible(format!("need at least 2 vertices, got {n_vertices}")));
    }
    if n_vertices as i64 >= VALUE_GRID {
        return Err(HarnessError::Infeasible(format!("at most {} vertices", VALUE_GRID - 1)));
    }
    let pairs = n_vertices * (n_vertices - 1) / 2;
    if n_loops > pairs {
        return Err(HarnessError::Infeasible(format!(
            "{n_loops} loops need more than the {pairs} vertex pairs"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ks: Vec<usize> = sample(&mut rng, VALUE_GRID as usize - 1, n_vertices).into_vec();
    ks.sort_unstable();
    let values: Vec<Value> = ks
        .iter()
        .map(|&k| Value::from_units((k as i64 + 1) * (crate::value::SCALE / VALUE_GRID)))
        .collect();
    let mut edges: Vec<(usize, usize)> = (1..n_vertices).map(|i| (rng.gen_range(0..i), i)).collect();
    for p in sample(&mut rng, pairs, n_loops) {
        edges.push(unrank_pair(p));
    }
    Ok(canonicalize(&ReebGraph::from_values(&values, &edges)))
}

/// The `p`-th pair `(i, j)` with `i < j` in the order (0,1), (0,2), (1,2), (0,3), …
fn unrank_pair(p: usize) -> (usize, usize) {
    let mut j = 1;
    while j * (j + 1) / 2 <= p {
        j += 1;
    }
    (p - j * (j - 1) / 2, j)
}

/// `trials` pairs of random graphs with 2 to `max_vertices` vertices and up
/// to `max_loops` loops each.
pub fn random_pairs(trials: usize, seed: u64, max_vertices: usize, max_loops: usize) -> Vec<(ReebGraph, ReebGraph)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        let n = rng.gen_range(2..=max_vertices.max(2));
        let loops = rng.gen_range(0..=max_loops.min(n * (n - 1) / 2));
        generate_random_reeb(n, loops, rng.gen()).expect("parameters are feasible by construction")
    };
    (0..trials).map(|_| (draw(&mut rng), draw(&mut rng))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SandwichConfig {
    pub tolerance: Value,
    pub mesh: Value,
    /// Local-search moves for the `d_FD` upper bound.
    pub budget: usize,
    pub search: SearchBudget,
    pub seed: u64,
}

impl Default for SandwichConfig {
    fn default() -> Self {
        Self {
            tolerance: Value::from_units(1_000_000),
            mesh: Value::from_units(50_000_000),
            budget: 200,
            search: SearchBudget::default(),
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Ok,
    Undecided,
    Falsified,
}

/// One pair's bounds and checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SandwichRow {
    pub pair_id: usize,
    pub seed: u64,
    #[serde(serialize_with = "ser_extended", deserialize_with = "de_extended")]
    pub di_lo: f64,
    #[serde(serialize_with = "ser_extended", deserialize_with = "de_extended")]
    pub di_hi: f64,
    #[serde(serialize_with = "ser_extended", deserialize_with = "de_extended")]
    pub dfd_lo: f64,
    #[serde(serialize_with = "ser_extended", deserialize_with = "de_extended")]
    pub dfd_hi: f64,
    pub db0: f64,
    pub db1: f64,
    pub mesh_error: f64,
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    pub c4: bool,
    pub c5: bool,
    pub status: RowStatus,
    pub runtime_ms: u64,
}

impl SandwichRow {
    pub fn checks(&self) -> [bool; 5] {
        [self.c1, self.c2, self.c3, self.c4, self.c5]
    }

    /// Recomputes the checks from the stored bounds.
    pub fn recheck(&self) -> [bool; 5] {
        let le = |a: f64, b: f64| a <= b + CHECK_SLACK;
        [
            le(self.di_lo, self.dfd_hi),
            le(self.dfd_lo, 7.0 * self.di_hi),
            le(self.db0, self.dfd_hi),
            le(self.db1, 3.0 * self.dfd_hi),
            le(self.db0, 7.0 * self.di_hi) && le(self.db1, 21.0 * self.di_hi),
        ]
    }
}

/// Everything behind one row, for the JSON sidecar.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowEvidence {
    pub pair_id: usize,
    pub di: BoundInterval,
    pub dfd: BoundInterval,
    pub interleaving_certificate: Option<InterleavingCertificate>,
    pub map_pair: Option<MapPairRecord>,
}

pub fn sandwich_row(pair_id: usize, x: &ReebGraph, y: &ReebGraph, config: &SandwichConfig) -> (SandwichRow, RowEvidence) {
    let start = Instant::now();
    let seed = config.seed.wrapping_add(pair_id as u64);
    let di = d_i_bounds(&cosheaf_of(x), &cosheaf_of(y), config.tolerance, config.search).ok();
    let di_interval = di
        .as_ref()
        .map_or_else(|| BoundInterval::unknown("interleaving search failed"), |b| b.to_bound_interval());
    let (px, py) = (extended_diagrams(x), extended_diagrams(y));
    let db0 = bottleneck(&px.dg0, &py.dg0);
    let db1 = bottleneck(&px.exdg1, &py.exdg1);

    let lower = di.as_ref().map(|b| lower_bound_from_parts(db0, db1, b));
    let (dfd_lo, lo_from) = match &lower {
        Some(l) => (l.lo, l.provenance.clone()),
        None => (db0.max(db1 / 3.0), "bottleneck stability".to_string()),
    };
    let upper = fdd_upper_bound(x, y, config.mesh, config.budget, seed).ok();
    let (dfd_hi, hi_from, mesh_error) = match &upper {
        Some(u) => (u.hi, u.provenance.clone(), u.evaluation.map_or(0.0, |e| e.mesh_error)),
        None => (f64::INFINITY, "distortion search failed".to_string(), 0.0),
    };
    let mut dfd = BoundInterval::new(dfd_lo, dfd_hi, lo_from, hi_from);
    dfd.undecided = di_interval.undecided;

    let mut row = SandwichRow {
        pair_id,
        seed,
        di_lo: di_interval.lo,
        di_hi: di_interval.hi,
        dfd_lo,
        dfd_hi,
        db0,
        db1,
        mesh_error,
        c1: true,
        c2: true,
        c3: true,
        c4: true,
        c5: true,
        status: RowStatus::Ok,
        runtime_ms: 0,
    };
    [row.c1, row.c2, row.c3, row.c4, row.c5] = row.recheck();
    row.status = if row.checks().contains(&false) {
        RowStatus::Falsified
    } else if di_interval.undecided {
        RowStatus::Undecided
    } else {
        RowStatus::Ok
    };
    row.runtime_ms = start.elapsed().as_millis() as u64;
    let evidence = RowEvidence {
        pair_id,
        di: di_interval,
        dfd,
        interleaving_certificate: di.and_then(|b| b.certificate),
        map_pair: upper.and_then(|u| u.maps),
    };
    (row, evidence)
}

/// Rows for all pairs, computed in parallel and returned in pair order.
pub fn sandwich_report(pairs: &[(ReebGraph, ReebGraph)], config: &SandwichConfig) -> Vec<(SandwichRow, RowEvidence)> {
    pairs
        .par_iter()
        .enumerate()
        .map(|(i, (x, y))| sandwich_row(i, x, y, config))
        .collect()
}

/// CSV columns; runtimes stay in the JSON sidecar so that reports are
/// reproducible byte for byte.
const CSV_HEADER: [&str; 15] = [
    "pair_id", "seed", "di_lo", "di_hi", "dfd_lo", "dfd_hi", "db0", "db1", "mesh_error", "c1", "c2", "c3", "c4", "c5",
    "status",
];

pub fn write_csv<W: Write>(out: W, rows: &[SandwichRow], header_comment: Option<&str>) -> csv::Result<()> {
    let mut out = out;
    if let Some(line) = header_comment {
        writeln!(out, "# {line}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        let status = match r.status {
            RowStatus::Ok => "ok",
            RowStatus::Undecided => "undecided",
            RowStatus::Falsified => "falsified",
        };
        w.write_record([
            r.pair_id.to_string(),
            r.seed.to_string(),
            r.di_lo.to_string(),
            r.di_hi.to_string(),
            r.dfd_lo.to_string(),
            r.dfd_hi.to_string(),
            r.db0.to_string(),
            r.db1.to_string(),
            r.mesh_error.to_string(),
            r.c1.to_string(),
            r.c2.to_string(),
            r.c3.to_string(),
            r.c4.to_string(),
            r.c5.to_string(),
            status.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Sidecar<'a> {
    rows: Vec<SidecarRow<'a>>,
}

#[derive(Serialize)]
struct SidecarRow<'a> {
    row: &'a SandwichRow,
    evidence: &'a RowEvidence,
}

pub fn write_json<W: Write>(out: W, report: &[(SandwichRow, RowEvidence)]) -> serde_json::Result<()> {
    let sidecar = Sidecar {
        rows: report.iter().map(|(row, evidence)| SidecarRow { row, evidence }).collect(),
    };
    serde_json::to_writer_pretty(out, &sidecar)
}
