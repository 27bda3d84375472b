//! The functional distortion objective on explicit map pairs, and certified
//! bounds on its infimum.
//!
//! Both graphs are subdivided at a common set of levels `L` (all vertex
//! values plus a uniform grid of spacing at most `mesh`). A map sends each
//! mesh vertex of the source to a mesh vertex of the target; a mesh cell
//! goes to a monotone target path between the images, parameterized
//! linearly in value. Under this restriction the value terms
//! `‖f − g∘φ‖_∞` are attained at mesh vertices, and the distortion sampled
//! at mesh vertices is off by at most half the largest
//! `height(cell) + height(route)`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{de_extended, ser_extended};
use crate::cosheaf::{cosheaf_of, d_i_bounds, InterleavingBounds, SearchBudget};
use crate::error::{CosheafError, DistortionError};
use crate::graph::{find_isomorphism, GraphPoint, ReebGraph, DEFAULT_VALUE_TOLERANCE};
use crate::metric::all_pairs_path_height;
use crate::persistence::{bottleneck, extended_diagrams};
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Origin {
    Vertex(usize),
    Edge(usize),
}

/// A graph subdivided at a set of levels.
#[derive(Clone, Debug)]
pub struct Mesh {
    pub values: Vec<Value>,
    pub points: Vec<GraphPoint>,
    /// `(lower, upper)` node pairs.
    pub edges: Vec<(usize, usize)>,
    origin: Vec<Origin>,
    vertex_node: Vec<usize>,
    /// Nodes along each graph edge, bottom to top, endpoints included.
    chains: Vec<Vec<usize>>,
}

impl Mesh {
    pub fn build(graph: &ReebGraph, levels: &[Value]) -> Mesh {
        let dense = graph.dense();
        let mut values = dense.values.clone();
        let mut points: Vec<GraphPoint> = graph.vertices().iter().map(|v| GraphPoint::Vertex(v.id)).collect();
        let mut origin: Vec<Origin> = (0..values.len()).map(Origin::Vertex).collect();
        let vertex_node: Vec<usize> = (0..values.len()).collect();
        let mut edges = Vec::new();
        let mut chains = Vec::with_capacity(dense.edges.len());
        for (k, &(a, b)) in dense.edges.iter().enumerate() {
            let (va, vb) = (dense.values[a], dense.values[b]);
            let start = levels.partition_point(|&l| l <= va);
            let end = levels.partition_point(|&l| l < vb);
            let mut chain = vec![a];
            for &l in &levels[start..end.max(start)] {
                let s = (l - va).to_f64() / (vb - va).to_f64();
                chain.push(values.len());
                values.push(l);
                points.push(GraphPoint::Edge {
                    edge: graph.edges()[k].id,
                    s,
                });
                origin.push(Origin::Edge(k));
            }
            chain.push(b);
            edges.extend(chain.windows(2).map(|w| (w[0], w[1])));
            chains.push(chain);
        }
        Mesh {
            values,
            points,
            edges,
            origin,
            vertex_node,
            chains,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest cell height.
    pub fn height(&self) -> Value {
        self.edges
            .iter()
            .map(|&(a, b)| self.values[b] - self.values[a])
            .max()
            .unwrap_or(Value::ZERO)
    }

    fn nearest_on_chain(&self, k: usize, level: Value) -> usize {
        let chain = &self.chains[k];
        let i = chain.partition_point(|&n| self.values[n] < level);
        match (i.checked_sub(1), chain.get(i)) {
            (Some(j), Some(&hi)) if level - self.values[chain[j]] < self.values[hi] - level => chain[j],
            (_, Some(&hi)) => hi,
            (Some(j), None) => chain[j],
            (None, None) => unreachable!("chains hold both endpoints"),
        }
    }
}

/// All vertex values of both graphs plus `⌈range / mesh⌉ + 1` evenly spaced
/// levels across their joint range.
pub fn common_levels(x: &ReebGraph, y: &ReebGraph, mesh: Value) -> Result<Vec<Value>, DistortionError> {
    if mesh <= Value::ZERO {
        return Err(DistortionError::BadMesh);
    }
    let mut levels: Vec<Value> = x.vertices().iter().chain(y.vertices()).map(|v| v.value).collect();
    if let (Some(&lo), Some(&hi)) = (levels.iter().min(), levels.iter().max()) {
        let span = (hi - lo).units();
        let steps = (span + mesh.units() - 1) / mesh.units();
        for i in 1..steps {
            let offset = (span as i128 * i as i128 / steps as i128) as i64;
            levels.push(lo + Value::from_units(offset));
        }
    }
    levels.sort_unstable();
    levels.dedup();
    Ok(levels)
}

/// One graph's mesh with the data the objective needs.
struct Side {
    mesh: Mesh,
    dist: Vec<Vec<f64>>,
    adjacency: Vec<Vec<usize>>,
    /// `up[u]`: bitset of nodes reachable from `u` by an ascending path.
    up: Vec<Vec<u64>>,
    by_level: HashMap<Value, Vec<usize>>,
    min: Value,
    max: Value,
}

impl Side {
    fn new(graph: &ReebGraph, levels: &[Value]) -> Side {
        let mesh = Mesh::build(graph, levels);
        let n = mesh.len();
        let dense = crate::graph::DenseGraph {
            values: mesh.values.clone(),
            edges: mesh.edges.clone(),
        };
        let dist = all_pairs_path_height(&dense);
        let mut adjacency = vec![Vec::new(); n];
        let mut upward = vec![Vec::new(); n];
        for &(a, b) in &mesh.edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
            upward[a].push(b);
        }
        let words = n.div_ceil(64);
        let mut up = vec![vec![0u64; words]; n];
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(mesh.values[i]));
        for &u in &order {
            let mut bits = vec![0u64; words];
            bits[u / 64] |= 1 << (u % 64);
            for &w in &upward[u] {
                for (acc, &x) in bits.iter_mut().zip(&up[w]) {
                    *acc |= x;
                }
            }
            up[u] = bits;
        }
        let mut by_level: HashMap<Value, Vec<usize>> = HashMap::new();
        for (i, &v) in mesh.values.iter().enumerate() {
            by_level.entry(v).or_default().push(i);
        }
        let min = mesh.values.iter().copied().min().unwrap_or(Value::ZERO);
        let max = mesh.values.iter().copied().max().unwrap_or(Value::ZERO);
        Side {
            mesh,
            dist,
            adjacency,
            up,
            by_level,
            min,
            max,
        }
    }

    fn reaches(&self, from: usize, to: usize) -> bool {
        self.up[from][to / 64] >> (to % 64) & 1 == 1
    }

    /// Joined by a monotone path (in either direction).
    fn comparable(&self, a: usize, b: usize) -> bool {
        self.reaches(a, b) || self.reaches(b, a)
    }

    fn value(&self, i: usize) -> f64 {
        self.mesh.values[i].to_f64()
    }
}

/// A map between meshes: source node `i` goes to target node `targets[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdividedMap {
    pub targets: Vec<usize>,
}

/// The objective terms of one map pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairEvaluation {
    /// Distortion sampled at mesh vertices.
    #[serde(serialize_with = "ser_extended", deserialize_with = "de_extended")]
    pub d: f64,
    pub sup_fg: f64,
    pub sup_gf: f64,
    /// `max(d, sup_fg, sup_gf)`.
    #[serde(serialize_with = "ser_extended", deserialize_with = "de_extended")]
    pub objective: f64,
    /// Bound on the gap between sampled and true distortion.
    pub mesh_error: f64,
    /// `max(d + mesh_error, sup_fg, sup_gf)`, an upper bound on the true
    /// objective of the pair.
    #[serde(serialize_with = "ser_extended", deserialize_with = "de_extended")]
    pub certified: f64,
}

/// Both meshes, their `d_f` tables and reachability.
pub struct DistortionContext {
    pub levels: Vec<Value>,
    x: Side,
    y: Side,
}

impl DistortionContext {
    pub fn new(x: &ReebGraph, y: &ReebGraph, mesh: Value) -> Result<Self, DistortionError> {
        Ok(Self::with_levels(x, y, common_levels(x, y, mesh)?))
    }

    pub fn with_levels(x: &ReebGraph, y: &ReebGraph, mut levels: Vec<Value>) -> Self {
        levels.sort_unstable();
        levels.dedup();
        Self {
            x: Side::new(x, &levels),
            y: Side::new(y, &levels),
            levels,
        }
    }

    pub fn x_mesh(&self) -> &Mesh {
        &self.x.mesh
    }

    pub fn y_mesh(&self) -> &Mesh {
        &self.y.mesh
    }

    fn check(src: &Side, tgt: &Side, map: &SubdividedMap) -> Result<(), DistortionError> {
        if map.targets.len() != src.mesh.len() {
            return Err(DistortionError::Shape(format!(
                "{} targets for {} mesh vertices",
                map.targets.len(),
                src.mesh.len()
            )));
        }
        if let Some(&t) = map.targets.iter().find(|&&t| t >= tgt.mesh.len()) {
            return Err(DistortionError::Shape(format!("target node {t} out of range")));
        }
        for (cell, &(a, b)) in src.mesh.edges.iter().enumerate() {
            let (ta, tb) = (map.targets[a], map.targets[b]);
            if !tgt.comparable(ta, tb) {
                return Err(DistortionError::Discontinuous {
                    cell,
                    reason: format!("no monotone route between target nodes {ta} and {tb}"),
                });
            }
        }
        Ok(())
    }

    fn valid(src: &Side, tgt: &Side, targets: &[usize]) -> bool {
        src.mesh
            .edges
            .iter()
            .all(|&(a, b)| tgt.comparable(targets[a], targets[b]))
    }

    fn sup(src: &Side, tgt: &Side, map: &SubdividedMap) -> f64 {
        map.targets
            .iter()
            .enumerate()
            .map(|(i, &t)| (src.value(i) - tgt.value(t)).abs())
            .fold(0.0, f64::max)
    }

    fn cell_error(src: &Side, tgt: &Side, map: &SubdividedMap) -> f64 {
        src.mesh
            .edges
            .iter()
            .map(|&(a, b)| {
                let cell = src.value(b) - src.value(a);
                let route = (tgt.value(map.targets[b]) - tgt.value(map.targets[a])).abs();
                (cell + route) / 2.0
            })
            .fold(0.0, f64::max)
    }

    /// Evaluates a map pair; fails when either map breaks continuity.
    pub fn evaluate(&self, phi: &SubdividedMap, psi: &SubdividedMap) -> Result<PairEvaluation, DistortionError> {
        Self::check(&self.x, &self.y, phi)?;
        Self::check(&self.y, &self.x, psi)?;
        Ok(self.evaluate_unchecked(phi, psi))
    }

    fn evaluate_unchecked(&self, phi: &SubdividedMap, psi: &SubdividedMap) -> PairEvaluation {
        let sup_fg = Self::sup(&self.x, &self.y, phi);
        let sup_gf = Self::sup(&self.y, &self.x, psi);
        let mesh_error = Self::cell_error(&self.x, &self.y, phi).max(Self::cell_error(&self.y, &self.x, psi));
        let mut samples: Vec<(usize, usize)> = phi.targets.iter().copied().enumerate().collect();
        samples.extend(psi.targets.iter().enumerate().map(|(j, &i)| (i, j)));
        samples.sort_unstable();
        samples.dedup();
        if sup_fg == 0.0 && sup_gf == 0.0 && self.is_mesh_isomorphism(phi, psi) {
            return PairEvaluation {
                d: 0.0,
                sup_fg,
                sup_gf,
                objective: 0.0,
                mesh_error: 0.0,
                certified: 0.0,
            };
        }
        let d = self.sampled_distortion(&samples);
        let objective = d.max(sup_fg).max(sup_gf);
        PairEvaluation {
            d,
            sup_fg,
            sup_gf,
            objective,
            mesh_error,
            certified: (d + mesh_error).max(sup_fg).max(sup_gf),
        }
    }

    /// `ψ = φ⁻¹` and `φ` carries mesh cells onto mesh cells. With values
    /// preserved, `φ` is then a function-preserving homeomorphism and the
    /// distortion vanishes identically.
    fn is_mesh_isomorphism(&self, phi: &SubdividedMap, psi: &SubdividedMap) -> bool {
        if phi.targets.len() != psi.targets.len()
            || phi.targets.iter().enumerate().any(|(i, &t)| psi.targets[t] != i)
        {
            return false;
        }
        let mut image: Vec<(usize, usize)> = self
            .x
            .mesh
            .edges
            .iter()
            .map(|&(a, b)| (phi.targets[a], phi.targets[b]))
            .collect();
        let mut target = self.y.mesh.edges.clone();
        image.sort_unstable();
        target.sort_unstable();
        image == target
    }

    fn sampled_distortion(&self, samples: &[(usize, usize)]) -> f64 {
        let mut worst = 0.0f64;
        for (s, &(xs, ys)) in samples.iter().enumerate() {
            let (row_x, row_y) = (&self.x.dist[xs], &self.y.dist[ys]);
            for &(xt, yt) in &samples[s + 1..] {
                let (a, b) = (row_x[xt], row_y[yt]);
                let gap = if a == b { 0.0 } else { (a - b).abs() };
                if gap > worst {
                    worst = gap;
                    if worst.is_infinite() {
                        return worst;
                    }
                }
            }
        }
        worst / 2.0
    }

    /// The pair as indices into the meshes, for replay.
    pub fn record(&self, phi: &SubdividedMap, psi: &SubdividedMap) -> MapPairRecord {
        MapPairRecord {
            levels: self.levels.clone(),
            phi: phi.targets.clone(),
            psi: psi.targets.clone(),
        }
    }
}

/// `evaluate_pair` for maps given on the meshes of `DistortionContext::new(x, y, mesh)`.
pub fn evaluate_pair(
    x: &ReebGraph,
    y: &ReebGraph,
    mesh: Value,
    phi: &SubdividedMap,
    psi: &SubdividedMap,
) -> Result<PairEvaluation, DistortionError> {
    DistortionContext::new(x, y, mesh)?.evaluate(phi, psi)
}

/// JSON form of a map pair: the level set fixes both meshes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapPairRecord {
    pub levels: Vec<Value>,
    pub phi: Vec<usize>,
    pub psi: Vec<usize>,
}

impl MapPairRecord {
    pub fn replay(&self, x: &ReebGraph, y: &ReebGraph) -> Result<PairEvaluation, DistortionError> {
        let ctx = DistortionContext::with_levels(x, y, self.levels.clone());
        ctx.evaluate(
            &SubdividedMap {
                targets: self.phi.clone(),
            },
            &SubdividedMap {
                targets: self.psi.clone(),
            },
        )
    }
}

const MAX_SPINES: usize = 16;

/// Maximal ascending paths of the target mesh, at most [`MAX_SPINES`].
fn spines(side: &Side) -> Vec<Vec<usize>> {
    let n = side.mesh.len();
    let mut has_lower = vec![false; n];
    let mut upward = vec![Vec::new(); n];
    for &(a, b) in &side.mesh.edges {
        has_lower[b] = true;
        upward[a].push(b);
    }
    let mut out = Vec::new();
    for start in (0..n).filter(|&i| !has_lower[i]) {
        let mut stack = vec![(start, 0usize)];
        let mut path = vec![start];
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            if upward[u].is_empty() {
                out.push(path.clone());
                if out.len() >= MAX_SPINES {
                    return out;
                }
            }
            if *next < upward[u].len() {
                let w = upward[u][*next];
                *next += 1;
                stack.push((w, 0));
                path.push(w);
            } else {
                stack.pop();
                path.pop();
            }
        }
    }
    out
}

fn nearest_on_path(tgt: &Side, path: &[usize], level: f64) -> usize {
    let i = path.partition_point(|&n| tgt.value(n) < level);
    let lo = i.checked_sub(1).map(|j| path[j]);
    let hi = path.get(i).copied();
    match (lo, hi) {
        (Some(a), Some(b)) if level - tgt.value(a) < tgt.value(b) - level => a,
        (_, Some(b)) => b,
        (Some(a), None) => a,
        (None, None) => unreachable!("spines are non-empty"),
    }
}

/// Candidate maps `src → tgt` built from value-driven heuristics.
fn seed_maps(src: &Side, tgt: &Side) -> Vec<(String, Vec<usize>)> {
    let mut out = Vec::new();
    if src.mesh.is_empty() || tgt.mesh.is_empty() {
        return out;
    }
    let (fmin, fmax) = (src.min.to_f64(), src.max.to_f64());
    for (p, path) in spines(tgt).iter().enumerate() {
        let (pmin, pmax) = (tgt.value(path[0]), tgt.value(*path.last().unwrap()));
        let clamp: Vec<usize> = (0..src.mesh.len())
            .map(|i| nearest_on_path(tgt, path, src.value(i).clamp(pmin, pmax)))
            .collect();
        out.push((format!("spine {p} clamped"), clamp));
        if fmax > fmin {
            let rescaled: Vec<usize> = (0..src.mesh.len())
                .map(|i| nearest_on_path(tgt, path, pmin + (src.value(i) - fmin) * (pmax - pmin) / (fmax - fmin)))
                .collect();
            out.push((format!("spine {p} rescaled"), rescaled));
        }
    }
    for ascending in [true, false] {
        if let Some(m) = level_matched(src, tgt, ascending) {
            out.push((format!("level-matched {}", if ascending { "up" } else { "down" }), m));
        }
    }
    out.retain(|(_, m)| DistortionContext::valid(src, tgt, m));
    out.dedup_by(|a, b| a.1 == b.1);
    out
}

/// Sends each source node to a target node at the same (clamped) level,
/// sweeping in value order and keeping every route monotone.
fn level_matched(src: &Side, tgt: &Side, ascending: bool) -> Option<Vec<usize>> {
    let mut levels: Vec<Value> = tgt.by_level.keys().copied().collect();
    levels.sort_unstable();
    let candidates_at = |v: Value| -> &Vec<usize> {
        let v = v.clamp(tgt.min, tgt.max);
        let i = levels.partition_point(|&l| l < v).min(levels.len() - 1);
        let best = if i > 0 && v - levels[i - 1] < levels[i] - v { levels[i - 1] } else { levels[i] };
        &tgt.by_level[&best]
    };
    let mut order: Vec<usize> = (0..src.mesh.len()).collect();
    order.sort_by_key(|&i| (src.mesh.values[i], i));
    if !ascending {
        order.reverse();
    }
    let mut map = vec![usize::MAX; src.mesh.len()];
    for &x in &order {
        let cands = candidates_at(src.mesh.values[x]);
        let assigned: Vec<usize> = src.adjacency[x]
            .iter()
            .filter(|&&nb| map[nb] != usize::MAX)
            .map(|&nb| map[nb])
            .collect();
        let pick = cands
            .iter()
            .copied()
            .max_by_key(|&t| (assigned.iter().filter(|&&a| tgt.comparable(t, a)).count(), std::cmp::Reverse(t)))?;
        map[x] = pick;
    }
    Some(map)
}

/// Maps induced by a function-preserving isomorphism, if one exists.
fn identity_pair(x: &ReebGraph, y: &ReebGraph, ctx: &DistortionContext) -> Option<(Vec<usize>, Vec<usize>)> {
    let corr = find_isomorphism(x, y, DEFAULT_VALUE_TOLERANCE)?;
    let (dx, dy) = (index_maps(x), index_maps(y));
    let mut vx = vec![0; x.vertex_count()];
    let mut vy = vec![0; y.vertex_count()];
    for &(a, b) in &corr.vertices {
        vx[dx.0[&a]] = dy.0[&b];
        vy[dy.0[&b]] = dx.0[&a];
    }
    let mut ex = vec![0; x.edge_count()];
    let mut ey = vec![0; y.edge_count()];
    for &(a, b) in &corr.edges {
        ex[dx.1[&a]] = dy.1[&b];
        ey[dy.1[&b]] = dx.1[&a];
    }
    let transfer = |src: &Mesh, tgt: &Mesh, vmap: &[usize], emap: &[usize]| -> Vec<usize> {
        (0..src.len())
            .map(|i| match src.origin[i] {
                Origin::Vertex(v) => tgt.vertex_node[vmap[v]],
                Origin::Edge(k) => tgt.nearest_on_chain(emap[k], src.values[i]),
            })
            .collect()
    };
    Some((
        transfer(&ctx.x.mesh, &ctx.y.mesh, &vx, &ex),
        transfer(&ctx.y.mesh, &ctx.x.mesh, &vy, &ey),
    ))
}

type IndexMaps = (HashMap<u64, usize>, HashMap<u64, usize>);

fn index_maps(g: &ReebGraph) -> IndexMaps {
    (
        g.vertices().iter().enumerate().map(|(i, v)| (v.id, i)).collect(),
        g.edges().iter().enumerate().map(|(k, e)| (e.id, k)).collect(),
    )
}

/// Result of [`fdd_upper_bound`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperBound {
    /// Certified upper bound on `d_FD`.
    #[serde(serialize_with = "ser_extended", deserialize_with = "de_extended")]
    pub hi: f64,
    pub provenance: String,
    pub evaluation: Option<PairEvaluation>,
    pub maps: Option<MapPairRecord>,
    pub evaluated: usize,
}

/// Best certified objective over seeded heuristic pairs refined by `budget`
/// random single-vertex moves. Deterministic for a given seed.
pub fn fdd_upper_bound(
    x: &ReebGraph,
    y: &ReebGraph,
    mesh: Value,
    budget: usize,
    seed: u64,
) -> Result<UpperBound, DistortionError> {
    let ctx = DistortionContext::new(x, y, mesh)?;
    if x.is_empty() && y.is_empty() {
        return Ok(UpperBound {
            hi: 0.0,
            provenance: "both graphs empty".into(),
            evaluation: None,
            maps: None,
            evaluated: 0,
        });
    }

    let mut pairs: Vec<(String, Vec<usize>, Vec<usize>)> = Vec::new();
    if let Some((phi, psi)) = identity_pair(x, y, &ctx) {
        pairs.push(("isomorphism".into(), phi, psi));
    }
    let phis = seed_maps(&ctx.x, &ctx.y);
    let psis = seed_maps(&ctx.y, &ctx.x);
    for (pn, phi) in &phis {
        for (qn, psi) in &psis {
            pairs.push((format!("{pn} / {qn}"), phi.clone(), psi.clone()));
        }
    }

    let mut evaluated = 0;
    let mut best: Option<(String, SubdividedMap, SubdividedMap, PairEvaluation)> = None;
    for (name, phi, psi) in pairs {
        let (phi, psi) = (SubdividedMap { targets: phi }, SubdividedMap { targets: psi });
        let Ok(e) = ctx.evaluate(&phi, &psi) else { continue };
        evaluated += 1;
        if best.as_ref().is_none_or(|b| e.certified < b.3.certified) {
            best = Some((name, phi, psi, e));
        }
    }
    let Some((name, mut phi, mut psi, mut current)) = best else {
        return Ok(UpperBound {
            hi: f64::INFINITY,
            provenance: "no continuous seed pair".into(),
            evaluation: None,
            maps: None,
            evaluated,
        });
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut moves = 0usize;
    for _ in 0..budget {
        if current.certified == 0.0 {
            break;
        }
        let forward = rng.gen_bool(0.5);
        let (src, tgt, map) = if forward {
            (&ctx.x, &ctx.y, &phi)
        } else {
            (&ctx.y, &ctx.x, &psi)
        };
        let node = rng.gen_range(0..src.mesh.len());
        let here = src.value(node);
        let candidates: Vec<usize> = (0..tgt.mesh.len())
            .filter(|&t| {
                t != map.targets[node]
                    && (tgt.value(t) - here).abs() <= current.certified
                    && src.adjacency[node].iter().all(|&nb| tgt.comparable(t, map.targets[nb]))
            })
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let pick = candidates[rng.gen_range(0..candidates.len())];
        let mut trial = map.clone();
        trial.targets[node] = pick;
        let e = if forward {
            ctx.evaluate_unchecked(&trial, &psi)
        } else {
            ctx.evaluate_unchecked(&phi, &trial)
        };
        evaluated += 1;
        if e.certified <= current.certified {
            if e.certified < current.certified {
                moves += 1;
            }
            current = e;
            if forward {
                phi = trial;
            } else {
                psi = trial;
            }
        }
    }
    let provenance = if moves > 0 {
        format!("seed {name} improved by {moves} local moves")
    } else {
        format!("seed {name}")
    };
    Ok(UpperBound {
        hi: current.certified,
        provenance,
        evaluation: Some(current),
        maps: Some(ctx.record(&phi, &psi)),
        evaluated,
    })
}

/// Result of [`fdd_lower_bound`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    #[serde(serialize_with = "ser_extended", deserialize_with = "de_extended")]
    pub lo: f64,
    pub provenance: String,
    pub db0: f64,
    pub db1: f64,
    /// Interleaving lower bound, absent when its search was undecided.
    #[serde(serialize_with = "ser_opt", deserialize_with = "de_opt")]
    pub di_lo: Option<f64>,
}

fn ser_opt<S: serde::Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => ser_extended(v, s),
        None => s.serialize_none(),
    }
}

fn de_opt<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
    #[derive(Deserialize)]
    struct Wrap(#[serde(deserialize_with = "de_extended")] f64);
    Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
}

/// `max(d_B(Dg₀), d_B(ExDg₁) / 3, d_I lower bound)`.
pub fn lower_bound_from_parts(db0: f64, db1: f64, di: &InterleavingBounds) -> LowerBound {
    let di_lo = (!di.undecided).then(|| di.to_bound_interval().lo);
    let mut terms = vec![(db0, "bottleneck Dg0"), (db1 / 3.0, "bottleneck ExDg1 / 3")];
    if let Some(v) = di_lo {
        terms.push((v, "interleaving lower bound"));
    }
    let (lo, provenance) = terms
        .into_iter()
        .fold((0.0, "nonnegative"), |acc, t| if t.0 > acc.0 { t } else { acc });
    LowerBound {
        lo,
        provenance: provenance.into(),
        db0,
        db1,
        di_lo,
    }
}

/// Lower bound on `d_FD` from bottleneck stability and interleavings.
pub fn fdd_lower_bound(
    x: &ReebGraph,
    y: &ReebGraph,
    tolerance: Value,
    budget: SearchBudget,
) -> Result<LowerBound, CosheafError> {
    let (px, py) = (extended_diagrams(x), extended_diagrams(y));
    let db0 = bottleneck(&px.dg0, &py.dg0);
    let db1 = bottleneck(&px.exdg1, &py.exdg1);
    let di = d_i_bounds(&cosheaf_of(x), &cosheaf_of(y), tolerance, budget)?;
    Ok(lower_bound_from_parts(db0, db1, &di))
}
