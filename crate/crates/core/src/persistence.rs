//! Extended persistence of a Reeb graph and the bottleneck distance.
//!
//! The extended filtration is reduced as ordinary persistence of a cone: a
//! cone vertex `ω` first, then vertices and edges in ascending order (an edge
//! enters at its upper value), then the cones `ω·v` and `ω·e` in descending
//! order (`ω·e` enters at the lower value of `e`). Ties put lower-dimensional
//! cells first and otherwise follow vertex and edge order.
//!
//! Pairs are read off by cell type:
//!
//! | birth cell | death cell | point |
//! |---|---|---|
//! | vertex | edge | ordinary, dim 0 |
//! | vertex | `ω·v` | extended, dim 0 (component min, max) |
//! | edge | `ω·e` | extended, dim 1 (ascending value, descending value) |
//! | `ω·v` | `ω·e` | relative, dim 1 |
//!
//! Zero-length pairs are dropped. Extended dim-1 points are stored with
//! `birth ≥ death`.

use serde::{Deserialize, Serialize};

use crate::graph::ReebGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointKind {
    #[serde(rename = "ord")]
    Ordinary,
    #[serde(rename = "ext")]
    Extended,
    #[serde(rename = "rel")]
    Relative,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramPoint {
    pub dim: u8,
    pub kind: PointKind,
    pub birth: f64,
    pub death: f64,
}

impl DiagramPoint {
    /// `L∞` distance to the diagonal.
    pub fn diagonal_gap(&self) -> f64 {
        (self.death - self.birth).abs() / 2.0
    }
}

/// A finite multiset of diagram points.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    pub points: Vec<DiagramPoint>,
}

/// Point classes compared by [`bottleneck`] in practice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagramClass {
    /// All dimension-0 points, ordinary and extended.
    Dim0,
    /// Extended dimension-1 points.
    Ext1,
}

impl PersistenceDiagram {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn filter(&self, class: DiagramClass) -> PersistenceDiagram {
        let keep = |p: &&DiagramPoint| match class {
            DiagramClass::Dim0 => p.dim == 0,
            DiagramClass::Ext1 => p.dim == 1 && p.kind == PointKind::Extended,
        };
        PersistenceDiagram {
            points: self.points.iter().filter(keep).copied().collect(),
        }
    }

    /// Points sorted by `(dim, kind, birth, death)`, for stable output.
    pub fn sorted(mut self) -> Self {
        self.points.sort_by(|a, b| {
            (a.dim, kind_rank(a.kind))
                .cmp(&(b.dim, kind_rank(b.kind)))
                .then(a.birth.total_cmp(&b.birth))
                .then(a.death.total_cmp(&b.death))
        });
        self
    }
}

fn kind_rank(k: PointKind) -> u8 {
    match k {
        PointKind::Ordinary => 0,
        PointKind::Extended => 1,
        PointKind::Relative => 2,
    }
}

/// The diagrams of one graph.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExtendedDiagrams {
    /// Ordinary and extended dimension-0 points.
    pub dg0: PersistenceDiagram,
    /// Extended dimension-1 points, one per independent cycle.
    pub exdg1: PersistenceDiagram,
    /// Relative dimension-1 points.
    pub relative: PersistenceDiagram,
}

impl ExtendedDiagrams {
    /// All points in one diagram, for serialization.
    pub fn combined(&self) -> PersistenceDiagram {
        let mut points = self.dg0.points.clone();
        points.extend(&self.exdg1.points);
        points.extend(&self.relative.points);
        PersistenceDiagram { points }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cell {
    Cone,
    Vertex(usize),
    Edge(usize),
    ConeVertex(usize),
    ConeEdge(usize),
}

/// Adds `b` into `a` over Z2; both sorted.
fn add_column(a: &mut Vec<usize>, b: &[usize]) {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    *a = out;
}

/// `Dg₀`, `ExDg₁` and the relative points of a graph.
pub fn extended_diagrams(graph: &ReebGraph) -> ExtendedDiagrams {
    let dense = graph.dense();
    let (n, m) = (dense.values.len(), dense.edges.len());
    let value = |i: usize| dense.values[i];

    let mut ascending: Vec<(crate::Value, u8, usize, Cell)> = Vec::with_capacity(n + m);
    for i in 0..n {
        ascending.push((value(i), 0, i, Cell::Vertex(i)));
    }
    for (k, &(_, b)) in dense.edges.iter().enumerate() {
        ascending.push((value(b), 1, k, Cell::Edge(k)));
    }
    ascending.sort_by_key(|&(v, d, i, _)| (v, d, i));
    let mut descending: Vec<(crate::Value, u8, usize, Cell)> = Vec::with_capacity(n + m);
    for i in 0..n {
        descending.push((value(i), 0, i, Cell::ConeVertex(i)));
    }
    for (k, &(a, _)) in dense.edges.iter().enumerate() {
        descending.push((value(a), 1, k, Cell::ConeEdge(k)));
    }
    descending.sort_by_key(|&(v, d, i, _)| (std::cmp::Reverse(v), d, i));

    let mut order = vec![Cell::Cone];
    order.extend(ascending.iter().map(|t| t.3));
    order.extend(descending.iter().map(|t| t.3));
    let mut index_of_vertex = vec![0; n];
    let mut index_of_cone_vertex = vec![0; n];
    let mut index_of_edge = vec![0; m];
    for (idx, cell) in order.iter().enumerate() {
        match *cell {
            Cell::Vertex(i) => index_of_vertex[i] = idx,
            Cell::ConeVertex(i) => index_of_cone_vertex[i] = idx,
            Cell::Edge(k) => index_of_edge[k] = idx,
            _ => {}
        }
    }
    let cell_value = |c: Cell| match c {
        Cell::Cone => crate::Value::ZERO,
        Cell::Vertex(i) | Cell::ConeVertex(i) => value(i),
        Cell::Edge(k) => value(dense.edges[k].1),
        Cell::ConeEdge(k) => value(dense.edges[k].0),
    };

    let mut columns: Vec<Vec<usize>> = order
        .iter()
        .map(|&c| {
            let mut col = match c {
                Cell::Cone | Cell::Vertex(_) => vec![],
                Cell::Edge(k) => vec![index_of_vertex[dense.edges[k].0], index_of_vertex[dense.edges[k].1]],
                Cell::ConeVertex(i) => vec![0, index_of_vertex[i]],
                Cell::ConeEdge(k) => {
                    let (a, b) = dense.edges[k];
                    vec![index_of_edge[k], index_of_cone_vertex[a], index_of_cone_vertex[b]]
                }
            };
            col.sort_unstable();
            col
        })
        .collect();

    let mut owner_of_low: Vec<Option<usize>> = vec![None; order.len()];
    let mut pairs = Vec::new();
    for j in 0..columns.len() {
        while let Some(&low) = columns[j].last() {
            match owner_of_low[low] {
                Some(k) => {
                    let other = columns[k].clone();
                    add_column(&mut columns[j], &other);
                }
                None => {
                    owner_of_low[low] = Some(j);
                    pairs.push((low, j));
                    break;
                }
            }
        }
    }

    let mut out = ExtendedDiagrams::default();
    for (b, d) in pairs {
        let (birth, death) = (cell_value(order[b]), cell_value(order[d]));
        let (dim, kind, target) = match (order[b], order[d]) {
            (Cell::Vertex(_), Cell::Edge(_)) => (0, PointKind::Ordinary, &mut out.dg0),
            (Cell::Vertex(_), Cell::ConeVertex(_)) => (0, PointKind::Extended, &mut out.dg0),
            (Cell::Edge(_), Cell::ConeEdge(_)) => (1, PointKind::Extended, &mut out.exdg1),
            (Cell::ConeVertex(_), Cell::ConeEdge(_)) => (1, PointKind::Relative, &mut out.relative),
            other => unreachable!("unexpected persistence pair {other:?}"),
        };
        if kind != PointKind::Extended && birth == death {
            continue;
        }
        target.points.push(DiagramPoint {
            dim,
            kind,
            birth: birth.to_f64(),
            death: death.to_f64(),
        });
    }
    out.dg0 = std::mem::take(&mut out.dg0).sorted();
    out.exdg1 = std::mem::take(&mut out.exdg1).sorted();
    out.relative = std::mem::take(&mut out.relative).sorted();
    out
}

fn linf(a: &DiagramPoint, b: &DiagramPoint) -> f64 {
    (a.birth - b.birth).abs().max((a.death - b.death).abs())
}

/// Bottleneck distance between two diagrams, matching points of any kind;
/// unmatched points pay their distance to the diagonal.
pub fn bottleneck(d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> f64 {
    let (a, b) = (&d1.points, &d2.points);
    let mut candidates: Vec<f64> = vec![0.0];
    candidates.extend(a.iter().chain(b).map(DiagramPoint::diagonal_gap));
    for p in a {
        candidates.extend(b.iter().map(|q| linf(p, q)));
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching_within(a, b, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    candidates[lo]
}

/// Whether the diagonal-augmented bipartite graph with edges of cost at most
/// `r` has a perfect matching. Left side: `a` then diagonal copies of `b`;
/// right side: `b` then diagonal copies of `a`.
fn perfect_matching_within(a: &[DiagramPoint], b: &[DiagramPoint], r: f64) -> bool {
    let (n, m) = (a.len(), b.len());
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n + m];
    for (i, p) in a.iter().enumerate() {
        for (j, q) in b.iter().enumerate() {
            if linf(p, q) <= r {
                adj[i].push(j);
            }
        }
        if p.diagonal_gap() <= r {
            adj[i].push(m + i);
        }
    }
    for (j, q) in b.iter().enumerate() {
        if q.diagonal_gap() <= r {
            adj[n + j].push(j);
        }
        adj[n + j].extend(m..m + n);
    }
    let mut matched_right: Vec<Option<usize>> = vec![None; n + m];
    for left in 0..n + m {
        let mut seen = vec![false; n + m];
        if !augment(left, &adj, &mut seen, &mut matched_right) {
            return false;
        }
    }
    true
}

fn augment(left: usize, adj: &[Vec<usize>], seen: &mut [bool], matched_right: &mut [Option<usize>]) -> bool {
    for &right in &adj[left] {
        if seen[right] {
            continue;
        }
        seen[right] = true;
        if matched_right[right].is_none_or(|other| augment(other, adj, seen, matched_right)) {
            matched_right[right] = Some(left);
            return true;
        }
    }
    false
}
