//! Reeb graph data model: validation, canonical form and
//! function-preserving isomorphism.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::union_find::UnionFind;
use crate::value::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub id: u64,
    pub value: Value,
}

/// An edge oriented from its lower to its upper endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub id: u64,
    pub lower: u64,
    pub upper: u64,
}

/// A finite multigraph whose vertices carry real values and whose edges are
/// strictly increasing. The function on an edge interpolates linearly
/// between its endpoint values.
///
/// Construction does not validate: use [`validate`] on candidate data and
/// [`canonicalize`] to obtain the normal form most operations expect.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReebGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl ReebGraph {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Self {
        Self { vertices, edges }
    }

    /// Builds a graph with vertex ids `0..values.len()` and edge ids in
    /// list order. Each pair is `(lower, upper)` by position.
    pub fn from_values(values: &[Value], edges: &[(usize, usize)]) -> Self {
        let vertices = values
            .iter()
            .enumerate()
            .map(|(i, &value)| Vertex {
                id: i as u64,
                value,
            })
            .collect();
        let edges = edges
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| Edge {
                id: k as u64,
                lower: a as u64,
                upper: b as u64,
            })
            .collect();
        Self { vertices, edges }
    }

    /// A single edge `lo -> hi`.
    pub fn segment(lo: Value, hi: Value) -> Self {
        Self::from_values(&[lo, hi], &[(0, 1)])
    }

    /// Two vertices joined by two parallel edges.
    pub fn loop_graph(lo: Value, hi: Value) -> Self {
        Self::from_values(&[lo, hi], &[(0, 1), (0, 1)])
    }

    /// Disjoint union; ids of `other` are shifted past those of `self`.
    pub fn disjoint_union(&self, other: &ReebGraph) -> ReebGraph {
        let v_off = self.vertices.iter().map(|v| v.id + 1).max().unwrap_or(0);
        let e_off = self.edges.iter().map(|e| e.id + 1).max().unwrap_or(0);
        let mut vertices = self.vertices.clone();
        vertices.extend(other.vertices.iter().map(|v| Vertex {
            id: v.id + v_off,
            value: v.value,
        }));
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|e| Edge {
            id: e.id + e_off,
            lower: e.lower + v_off,
            upper: e.upper + v_off,
        }));
        ReebGraph { vertices, edges }
    }

    /// Adds a constant to every vertex value.
    pub fn shifted(&self, c: Value) -> ReebGraph {
        ReebGraph {
            vertices: self
                .vertices
                .iter()
                .map(|v| Vertex {
                    id: v.id,
                    value: v.value + c,
                })
                .collect(),
            edges: self.edges.clone(),
        }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, id: u64) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    pub fn edge(&self, id: u64) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn value_of(&self, id: u64) -> Option<Value> {
        self.vertex(id).map(|v| v.value)
    }

    pub fn min_value(&self) -> Option<Value> {
        self.vertices.iter().map(|v| v.value).min()
    }

    pub fn max_value(&self) -> Option<Value> {
        self.vertices.iter().map(|v| v.value).max()
    }

    /// Dense view: vertex values by position and edges as position pairs.
    /// Panics on dangling references; callers validate first.
    pub fn dense(&self) -> DenseGraph {
        let index: HashMap<u64, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id, i))
            .collect();
        DenseGraph {
            values: self.vertices.iter().map(|v| v.value).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| (index[&e.lower], index[&e.upper]))
                .collect(),
        }
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        self.dense().component_labels().1
    }

    /// First Betti number `|E| - |V| + components`.
    pub fn betti_1(&self) -> usize {
        self.edges.len() + self.component_count() - self.vertices.len()
    }

    /// Value of a point, or an error if it does not reference this graph.
    pub fn point_value(&self, p: &GraphPoint) -> Result<f64, GraphError> {
        match *p {
            GraphPoint::Vertex(id) => self
                .value_of(id)
                .map(Value::to_f64)
                .ok_or(GraphError::UnknownVertex(id)),
            GraphPoint::Edge { edge, s } => {
                if !(s > 0.0 && s < 1.0) {
                    return Err(GraphError::BadParameter(s.to_string()));
                }
                let e = self.edge(edge).ok_or(GraphError::UnknownEdge(edge))?;
                let lo = self
                    .value_of(e.lower)
                    .ok_or(GraphError::UnknownVertex(e.lower))?;
                let hi = self
                    .value_of(e.upper)
                    .ok_or(GraphError::UnknownVertex(e.upper))?;
                Ok((1.0 - s) * lo.to_f64() + s * hi.to_f64())
            }
        }
    }
}

/// Index-based copy of a graph used by the numeric algorithms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseGraph {
    pub values: Vec<Value>,
    pub edges: Vec<(usize, usize)>,
}

impl DenseGraph {
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let mut uf = UnionFind::new(self.values.len());
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        uf.labels()
    }
}

/// A point of a Reeb graph: a vertex, or an interior point of an edge at
/// parameter `s` in `(0, 1)` measured from the lower endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum GraphPoint {
    Vertex(u64),
    Edge { edge: u64, s: f64 },
}

impl fmt::Display for GraphPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphPoint::Vertex(id) => write!(f, "v{id}"),
            GraphPoint::Edge { edge, s } => write!(f, "e{edge}:{s}"),
        }
    }
}

impl std::str::FromStr for GraphPoint {
    type Err = GraphError;

    /// `v<id>` or `e<id>:<s>`.
    fn from_str(text: &str) -> Result<Self, GraphError> {
        let bad = || GraphError::BadPointSyntax(text.to_string());
        if let Some(rest) = text.strip_prefix('v') {
            return rest.parse().map(GraphPoint::Vertex).map_err(|_| bad());
        }
        let rest = text.strip_prefix('e').ok_or_else(bad)?;
        let (id, s) = rest.split_once(':').ok_or_else(bad)?;
        let edge = id.parse().map_err(|_| bad())?;
        let s: f64 = s.parse().map_err(|_| bad())?;
        if !(s > 0.0 && s < 1.0) {
            return Err(GraphError::BadParameter(s.to_string()));
        }
        Ok(GraphPoint::Edge { edge, s })
    }
}

/// One broken invariant, naming the offending id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    DuplicateVertexId { vertex: u64 },
    DuplicateEdgeId { edge: u64 },
    DanglingReference { edge: u64, vertex: u64 },
    SelfLoop { edge: u64 },
    NonMonotoneEdge { edge: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateVertexId { vertex } => {
                write!(f, "duplicate vertex id: vertex {vertex}")
            }
            Violation::DuplicateEdgeId { edge } => write!(f, "duplicate edge id: edge {edge}"),
            Violation::DanglingReference { edge, vertex } => {
                write!(f, "dangling reference: edge {edge} -> vertex {vertex}")
            }
            Violation::SelfLoop { edge } => write!(f, "self-loop: edge {edge}"),
            Violation::NonMonotoneEdge { edge } => write!(f, "non-monotone edge: edge {edge}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every structural invariant; violations are returned as data.
pub fn validate(graph: &ReebGraph) -> ValidationReport {
    validate_inner(graph, false)
}

fn validate_inner(graph: &ReebGraph, allow_flat: bool) -> ValidationReport {
    let mut violations = Vec::new();
    let mut values = HashMap::new();
    for v in &graph.vertices {
        if values.insert(v.id, v.value).is_some() {
            violations.push(Violation::DuplicateVertexId { vertex: v.id });
        }
    }
    let mut seen_edges = HashMap::new();
    for e in &graph.edges {
        if seen_edges.insert(e.id, ()).is_some() {
            violations.push(Violation::DuplicateEdgeId { edge: e.id });
        }
        let mut dangling = false;
        for end in [e.lower, e.upper] {
            if !values.contains_key(&end) {
                violations.push(Violation::DanglingReference {
                    edge: e.id,
                    vertex: end,
                });
                dangling = true;
            }
        }
        if e.lower == e.upper {
            violations.push(Violation::SelfLoop { edge: e.id });
            continue;
        }
        if dangling {
            continue;
        }
        let (lo, hi) = (values[&e.lower], values[&e.upper]);
        if lo > hi || (lo == hi && !allow_flat) {
            violations.push(Violation::NonMonotoneEdge { edge: e.id });
        }
    }
    ValidationReport { violations }
}

/// Something [`canonicalize`] had to repair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CanonWarning {
    /// A cycle of zero-height edges at one value collapsed to a point.
    CollapsedFlatLoop { edge: u64, value: Value },
}

/// Normal form; see [`canonicalize_with_warnings`].
pub fn canonicalize(graph: &ReebGraph) -> ReebGraph {
    canonicalize_with_warnings(graph).0
}

/// Contracts zero-height edges, removes vertices with exactly one incoming
/// and one outgoing edge by merging those edges, and renumbers vertices and
/// edges deterministically (by value first). The result is a valid graph,
/// and the operation is idempotent up to [`is_isomorphic`].
///
/// Input must be valid apart from zero-height edges.
pub fn canonicalize_with_warnings(graph: &ReebGraph) -> (ReebGraph, Vec<CanonWarning>) {
    debug_assert!(
        validate_inner(graph, true).is_ok(),
        "canonicalize needs a structurally valid graph"
    );
    let dense = graph.dense();
    let n = dense.values.len();
    let mut warnings = Vec::new();

    let mut uf = UnionFind::new(n);
    for (k, &(a, b)) in dense.edges.iter().enumerate() {
        if dense.values[a] == dense.values[b] && !uf.union(a, b) {
            warnings.push(CanonWarning::CollapsedFlatLoop {
                edge: graph.edges[k].id,
                value: dense.values[a],
            });
        }
    }
    let (class, n_class) = uf.labels();
    let mut class_value = vec![Value::ZERO; n_class];
    for (i, &c) in class.iter().enumerate() {
        class_value[c] = dense.values[i];
    }
    // Surviving edges, by original position.
    let mut edges: Vec<Option<(usize, usize)>> = dense
        .edges
        .iter()
        .map(|&(a, b)| {
            let (ca, cb) = (class[a], class[b]);
            (ca != cb).then_some((ca, cb))
        })
        .collect();

    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n_class];
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); n_class];
    for (k, e) in edges.iter().enumerate() {
        if let Some((a, b)) = *e {
            outgoing[a].push(k);
            incoming[b].push(k);
        }
    }
    let mut alive = vec![true; n_class];
    for w in 0..n_class {
        if incoming[w].len() == 1 && outgoing[w].len() == 1 {
            let e_in = incoming[w][0];
            let e_out = outgoing[w][0];
            let (a, _) = edges[e_in].expect("live edge");
            let (_, b) = edges[e_out].expect("live edge");
            // Reuse the incoming slot for the merged edge.
            edges[e_in] = Some((a, b));
            edges[e_out] = None;
            let slot = incoming[b].iter().position(|&k| k == e_out).expect("incidence");
            incoming[b][slot] = e_in;
            incoming[w].clear();
            outgoing[w].clear();
            alive[w] = false;
        }
    }

    // Deterministic renumbering: value, degrees, neighbour values, position.
    let mut order: Vec<usize> = (0..n_class).filter(|&w| alive[w]).collect();
    let key = |w: usize| {
        let mut down: Vec<Value> = incoming[w]
            .iter()
            .map(|&k| class_value[edges[k].unwrap().0])
            .collect();
        let mut up: Vec<Value> = outgoing[w]
            .iter()
            .map(|&k| class_value[edges[k].unwrap().1])
            .collect();
        down.sort();
        up.sort();
        (class_value[w], incoming[w].len(), outgoing[w].len(), down, up)
    };
    order.sort_by_cached_key(|&w| (key(w), w));
    let mut new_id = vec![usize::MAX; n_class];
    for (i, &w) in order.iter().enumerate() {
        new_id[w] = i;
    }
    let vertices = order
        .iter()
        .enumerate()
        .map(|(i, &w)| Vertex {
            id: i as u64,
            value: class_value[w],
        })
        .collect();
    let mut new_edges: Vec<(usize, usize, usize)> = edges
        .iter()
        .enumerate()
        .filter_map(|(k, e)| e.map(|(a, b)| (new_id[a], new_id[b], k)))
        .collect();
    new_edges.sort();
    let edges = new_edges
        .into_iter()
        .enumerate()
        .map(|(k, (a, b, _))| Edge {
            id: k as u64,
            lower: a as u64,
            upper: b as u64,
        })
        .collect();
    (ReebGraph { vertices, edges }, warnings)
}

/// Absolute value tolerance used by [`is_isomorphic`] by default (1e-9).
pub const DEFAULT_VALUE_TOLERANCE: Value = Value::QUANTUM;

/// Witness of a function-preserving isomorphism: `(id in a, id in b)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Correspondence {
    pub vertices: Vec<(u64, u64)>,
    pub edges: Vec<(u64, u64)>,
}

/// Function-preserving isomorphism test with the default tolerance.
pub fn is_isomorphic(a: &ReebGraph, b: &ReebGraph) -> bool {
    find_isomorphism(a, b, DEFAULT_VALUE_TOLERANCE).is_some()
}

/// Backtracking search for a bijection of vertices and edges preserving
/// incidence, orientation and values (up to `tolerance`).
pub fn find_isomorphism(a: &ReebGraph, b: &ReebGraph, tolerance: Value) -> Option<Correspondence> {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return None;
    }
    let (da, db) = (a.dense(), b.dense());
    let n = da.values.len();
    let mut sa = da.values.clone();
    let mut sb = db.values.clone();
    sa.sort();
    sb.sort();
    if sa.iter().zip(&sb).any(|(x, y)| (*x - *y).abs() > tolerance) {
        return None;
    }

    let multiplicity = |g: &DenseGraph| {
        let mut m: HashMap<(usize, usize), usize> = HashMap::new();
        for &e in &g.edges {
            *m.entry(e).or_default() += 1;
        }
        m
    };
    let (ma, mb) = (multiplicity(&da), multiplicity(&db));
    let degrees = |g: &DenseGraph| {
        let mut d = vec![(0usize, 0usize); g.values.len()];
        for &(x, y) in &g.edges {
            d[x].1 += 1;
            d[y].0 += 1;
        }
        d
    };
    let (dega, degb) = (degrees(&da), degrees(&db));
    let mut neighbours = vec![Vec::new(); n];
    for &(x, y) in &da.edges {
        neighbours[x].push(y);
        neighbours[y].push(x);
    }

    // Visit order: by value, but prefer vertices adjacent to visited ones.
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    let mut by_value: Vec<usize> = (0..n).collect();
    by_value.sort_by_key(|&i| (da.values[i], i));
    for &start in &by_value {
        if placed[start] {
            continue;
        }
        placed[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            let mut next: Vec<usize> = neighbours[x].iter().copied().filter(|&y| !placed[y]).collect();
            next.sort_by_key(|&i| (da.values[i], i));
            next.dedup();
            for y in next {
                placed[y] = true;
                queue.push_back(y);
            }
        }
    }

    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| {
                    dega[i] == degb[j] && (da.values[i] - db.values[j]).abs() <= tolerance
                })
                .collect()
        })
        .collect();

    struct Search<'s> {
        order: &'s [usize],
        candidates: &'s [Vec<usize>],
        ma: &'s HashMap<(usize, usize), usize>,
        mb: &'s HashMap<(usize, usize), usize>,
        map: Vec<usize>,
        used: Vec<bool>,
    }
    impl Search<'_> {
        fn run(&mut self, depth: usize) -> bool {
            if depth == self.order.len() {
                return true;
            }
            let i = self.order[depth];
            for &j in &self.candidates[i] {
                if self.used[j] || !self.consistent(depth, i, j) {
                    continue;
                }
                self.map[i] = j;
                self.used[j] = true;
                if self.run(depth + 1) {
                    return true;
                }
                self.used[j] = false;
                self.map[i] = usize::MAX;
            }
            false
        }

        fn consistent(&self, depth: usize, i: usize, j: usize) -> bool {
            let count = |m: &HashMap<(usize, usize), usize>, x, y| m.get(&(x, y)).copied().unwrap_or(0);
            self.order[..depth].iter().all(|&k| {
                let l = self.map[k];
                count(self.ma, i, k) == count(self.mb, j, l) && count(self.ma, k, i) == count(self.mb, l, j)
            })
        }
    }

    let mut search = Search {
        order: &order,
        candidates: &candidates,
        ma: &ma,
        mb: &mb,
        map: vec![usize::MAX; n],
        used: vec![false; n],
    };
    if !search.run(0) {
        return None;
    }
    let map = search.map;

    let mut b_edges: BTreeMap<(usize, usize), Vec<u64>> = BTreeMap::new();
    for (k, &e) in db.edges.iter().enumerate() {
        b_edges.entry(e).or_default().push(b.edges[k].id);
    }
    let mut edges = Vec::with_capacity(a.edge_count());
    for (k, &(x, y)) in da.edges.iter().enumerate() {
        let bucket = b_edges.get_mut(&(map[x], map[y])).expect("multiplicities agree");
        edges.push((a.edges[k].id, bucket.pop().expect("multiplicities agree")));
    }
    let vertices = (0..n)
        .map(|i| (a.vertices[i].id, b.vertices[map[i]].id))
        .collect();
    Some(Correspondence { vertices, edges })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Value {
        s.parse().unwrap()
    }

    #[test]
    fn single_edge_is_valid() {
        assert!(validate(&ReebGraph::segment(v("0"), v("1"))).is_ok());
    }

    #[test]
    fn flat_edge_is_non_monotone() {
        let g = ReebGraph::from_values(&[v("2"), v("2")], &[(0, 1)]);
        let report = validate(&g);
        assert_eq!(report.violations, vec![Violation::NonMonotoneEdge { edge: 0 }]);
        assert!(report.violations[0].to_string().contains("non-monotone edge"));
    }

    #[test]
    fn dangling_reference_is_reported() {
        let g = ReebGraph::new(
            vec![Vertex { id: 0, value: v("0") }],
            vec![Edge { id: 0, lower: 0, upper: 7 }],
        );
        let report = validate(&g);
        assert_eq!(
            report.violations,
            vec![Violation::DanglingReference { edge: 0, vertex: 7 }]
        );
        assert!(report.violations[0].to_string().contains("dangling reference"));
    }

    #[test]
    fn duplicates_and_self_loops_are_reported() {
        let g = ReebGraph::new(
            vec![Vertex { id: 1, value: v("0") }, Vertex { id: 1, value: v("1") }],
            vec![Edge { id: 0, lower: 1, upper: 1 }, Edge { id: 0, lower: 1, upper: 1 }],
        );
        let report = validate(&g);
        assert!(report.violations.contains(&Violation::DuplicateVertexId { vertex: 1 }));
        assert!(report.violations.contains(&Violation::DuplicateEdgeId { edge: 0 }));
        assert!(report.violations.contains(&Violation::SelfLoop { edge: 0 }));
    }

    #[test]
    fn regular_vertex_is_removed() {
        let chain = ReebGraph::from_values(&[v("0"), v("1"), v("2")], &[(0, 1), (1, 2)]);
        let c = canonicalize(&chain);
        assert!(find_isomorphism(&c, &ReebGraph::segment(v("0"), v("2")), Value::ZERO).is_some());
        assert_eq!(c.vertex_count(), 2);
    }

    #[test]
    fn canonical_graph_is_fixed() {
        let g = ReebGraph::loop_graph(v("0"), v("1"));
        let c = canonicalize(&g);
        assert_eq!(canonicalize(&c), c);
        assert!(is_isomorphic(&c, &g));
    }

    #[test]
    fn subdivided_double_edge_becomes_loop() {
        let g = ReebGraph::from_values(&[v("0"), v("1"), v("0.5")], &[(0, 1), (0, 2), (2, 1)]);
        let c = canonicalize(&g);
        assert!(is_isomorphic(&c, &ReebGraph::loop_graph(v("0"), v("1"))));
    }

    #[test]
    fn flat_edges_contract_and_flat_cycles_warn() {
        // Two flat parallel edges at value 1 between vertices 1 and 2.
        let g = ReebGraph::from_values(
            &[v("0"), v("1"), v("1"), v("2")],
            &[(0, 1), (1, 2), (1, 2), (2, 3)],
        );
        let (c, warnings) = canonicalize_with_warnings(&g);
        assert_eq!(warnings.len(), 1);
        assert!(is_isomorphic(&c, &ReebGraph::segment(v("0"), v("2"))));
        assert!(validate(&c).is_ok());
    }

    #[test]
    fn isomorphism_examples() {
        let loop01 = ReebGraph::loop_graph(v("0"), v("1"));
        let permuted = ReebGraph::new(
            vec![Vertex { id: 9, value: v("1") }, Vertex { id: 4, value: v("0") }],
            vec![Edge { id: 3, lower: 4, upper: 9 }, Edge { id: 8, lower: 4, upper: 9 }],
        );
        let witness = find_isomorphism(&loop01, &permuted, DEFAULT_VALUE_TOLERANCE).unwrap();
        assert!(witness.vertices.contains(&(0, 4)));
        assert_eq!(witness.edges.len(), 2);
        assert!(!is_isomorphic(&loop01, &ReebGraph::segment(v("0"), v("1"))));
        assert!(!is_isomorphic(&loop01, &ReebGraph::loop_graph(v("0"), v("2"))));
    }

    #[test]
    fn tolerance_is_absolute() {
        let a = ReebGraph::segment(v("0"), v("1"));
        let b = ReebGraph::segment(v("0"), v("1.000000001"));
        assert!(is_isomorphic(&a, &b));
        let c = ReebGraph::segment(v("0"), v("1.000000002"));
        assert!(!is_isomorphic(&a, &c));
    }

    #[test]
    fn betti_and_components() {
        let g = ReebGraph::loop_graph(v("0"), v("1")).disjoint_union(&ReebGraph::segment(v("0"), v("2")));
        assert_eq!(g.component_count(), 2);
        assert_eq!(g.betti_1(), 1);
    }

    #[test]
    fn point_syntax() {
        assert_eq!("v3".parse::<GraphPoint>().unwrap(), GraphPoint::Vertex(3));
        assert_eq!(
            "e2:0.5".parse::<GraphPoint>().unwrap(),
            GraphPoint::Edge { edge: 2, s: 0.5 }
        );
        assert!("e2:1.0".parse::<GraphPoint>().is_err());
        assert!("x1".parse::<GraphPoint>().is_err());
    }
}
