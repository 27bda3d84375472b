//! Constructible cosheaves over the real line, encoded as zigzags of finite
//! sets.
//!
//! A cosheaf with critical values `s_0 < … < s_{n-1}` is stored as
//!
//! ```text
//!   A_0 → B_0 ← A_1 → B_1 ← … ← A_{n-1} → B_{n-1} ← A_n
//! ```
//!
//! where `A_i` is its value on the open stratum `(s_{i-1}, s_i)` (with
//! `s_{-1} = -∞`, `s_n = +∞`), `B_j` its value on a small open interval
//! around `s_j`, and the arrows are the inclusion-induced maps. `A_0` and
//! `A_n` are empty. Elements are plain indices.
//!
//! Evaluation on an arbitrary open interval glues the cells meeting it.
//! Interval endpoints may sit infinitesimally below or above a value, which
//! lets small neighbourhoods of critical values be named exactly.

mod interleave;

pub use interleave::{
    d_i_bounds, decide_interleaving, verify_certificate, CellMaps, Decision, InterleavingBounds,
    InterleavingCertificate, SearchBudget, DEFAULT_NODE_BUDGET,
};

use serde::{Deserialize, Serialize};

use crate::error::CosheafError;
use crate::graph::{canonicalize, ReebGraph};
use crate::union_find::UnionFind;
use crate::value::Value;

/// Infinitesimal offset of an interval endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Below,
    Exact,
    Above,
}

/// Endpoint of an open interval, ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Endpoint {
    NegInf,
    At(Value, Side),
    PosInf,
}

impl Endpoint {
    fn exact(v: Value) -> Self {
        Endpoint::At(v, Side::Exact)
    }

    fn moved(self, delta: Value) -> Self {
        match self {
            Endpoint::At(v, side) => Endpoint::At(v + delta, side),
            other => other,
        }
    }
}

/// An open interval `(lo, hi)`; empty when `lo >= hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OpenInterval {
    pub lo: Endpoint,
    pub hi: Endpoint,
}

impl OpenInterval {
    pub fn new(a: Value, b: Value) -> Self {
        Self {
            lo: Endpoint::exact(a),
            hi: Endpoint::exact(b),
        }
    }

    pub fn whole_line() -> Self {
        Self {
            lo: Endpoint::NegInf,
            hi: Endpoint::PosInf,
        }
    }

    /// An interval around `t` smaller than any positive real.
    pub fn around(t: Value) -> Self {
        Self {
            lo: Endpoint::At(t, Side::Below),
            hi: Endpoint::At(t, Side::Above),
        }
    }

    /// `I^ε = (a - ε, b + ε)`.
    pub fn thicken(self, eps: Value) -> Self {
        Self {
            lo: self.lo.moved(-eps),
            hi: self.hi.moved(eps),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lo >= self.hi
    }

    pub fn contains(&self, inner: &OpenInterval) -> bool {
        self.lo <= inner.lo && inner.hi <= self.hi
    }

    fn meets(&self, lo: Endpoint, hi: Endpoint) -> bool {
        self.lo.max(lo) < self.hi.min(hi)
    }
}

/// A constructible cosheaf in zigzag form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructibleCosheaf {
    critical: Vec<Value>,
    strata: Vec<usize>,
    nodes: Vec<usize>,
    below: Vec<Vec<usize>>,
    above: Vec<Vec<usize>>,
}

impl ConstructibleCosheaf {
    /// Checks shapes: `strata.len() == n + 1`, outer strata empty, maps total
    /// and in range, critical values strictly increasing.
    pub fn new(
        critical: Vec<Value>,
        strata: Vec<usize>,
        nodes: Vec<usize>,
        below: Vec<Vec<usize>>,
        above: Vec<Vec<usize>>,
    ) -> Result<Self, CosheafError> {
        let n = critical.len();
        let fail = |m: String| Err(CosheafError::Structure(m));
        if critical.windows(2).any(|w| w[0] >= w[1]) {
            return fail("critical values must be strictly increasing".into());
        }
        if strata.len() != n + 1 || nodes.len() != n || below.len() != n || above.len() != n {
            return fail(format!(
                "expected {} strata and {n} nodes/maps, found {}/{}/{}/{}",
                n + 1,
                strata.len(),
                nodes.len(),
                below.len(),
                above.len()
            ));
        }
        if strata[0] != 0 || strata[n] != 0 {
            return fail("outer strata must be empty".into());
        }
        for j in 0..n {
            if below[j].len() != strata[j] {
                return fail(format!("stratum {j} element lacks an upward attachment"));
            }
            if above[j].len() != strata[j + 1] {
                return fail(format!("stratum {} element lacks a downward attachment", j + 1));
            }
            if below[j].iter().chain(&above[j]).any(|&b| b >= nodes[j]) {
                return fail(format!("map into node {j} out of range"));
            }
        }
        Ok(Self {
            critical,
            strata,
            nodes,
            below,
            above,
        })
    }

    pub fn empty() -> Self {
        Self {
            critical: Vec::new(),
            strata: vec![0],
            nodes: Vec::new(),
            below: Vec::new(),
            above: Vec::new(),
        }
    }

    pub fn critical_values(&self) -> &[Value] {
        &self.critical
    }

    /// Sizes of `A_0 … A_n`.
    pub fn strata_sizes(&self) -> &[usize] {
        &self.strata
    }

    /// Sizes of `B_0 … B_{n-1}`.
    pub fn node_sizes(&self) -> &[usize] {
        &self.nodes
    }

    /// `A_j → B_j`.
    pub fn below_map(&self, j: usize) -> &[usize] {
        &self.below[j]
    }

    /// `A_{j+1} → B_j`.
    pub fn above_map(&self, j: usize) -> &[usize] {
        &self.above[j]
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.iter().all(|&b| b == 0)
    }

    fn stratum_bounds(&self, i: usize) -> (Endpoint, Endpoint) {
        let n = self.critical.len();
        let lo = if i == 0 { Endpoint::NegInf } else { Endpoint::exact(self.critical[i - 1]) };
        let hi = if i == n { Endpoint::PosInf } else { Endpoint::exact(self.critical[i]) };
        (lo, hi)
    }

    fn stratum_offset(&self) -> Vec<usize> {
        offsets(&self.strata)
    }

    fn node_offset(&self) -> Vec<usize> {
        offsets(&self.nodes)
    }

    fn cell_count(&self) -> usize {
        self.strata.iter().sum::<usize>() + self.nodes.iter().sum::<usize>()
    }
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0;
    for &s in sizes {
        out.push(acc);
        acc += s;
    }
    out.push(acc);
    out
}

/// The value of a cosheaf on one open interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    interval: OpenInterval,
    /// Component of each cell (strata elements first, then node elements),
    /// `usize::MAX` for cells outside the interval.
    cell_component: Vec<usize>,
    /// One member cell per component.
    representative: Vec<usize>,
}

impl Evaluation {
    pub fn interval(&self) -> OpenInterval {
        self.interval
    }

    /// Number of elements of `F(I)`.
    pub fn len(&self) -> usize {
        self.representative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representative.is_empty()
    }

    /// The map `F(I) → F(J)` for `I ⊆ J`, both evaluated on the same cosheaf.
    pub fn corestriction(&self, larger: &Evaluation) -> Vec<usize> {
        debug_assert!(larger.interval.contains(&self.interval));
        self.representative
            .iter()
            .map(|&cell| larger.cell_component[cell])
            .collect()
    }

    /// Component of stratum element `a` of `A_i`, if that cell meets the
    /// interval.
    pub fn component_of_stratum(&self, cs: &ConstructibleCosheaf, i: usize, a: usize) -> Option<usize> {
        let c = self.cell_component[cs.stratum_offset()[i] + a];
        (c != usize::MAX).then_some(c)
    }

    /// Component of node element `b` of `B_j`, if inside the interval.
    pub fn component_of_node(&self, cs: &ConstructibleCosheaf, j: usize, b: usize) -> Option<usize> {
        let base = cs.strata.iter().sum::<usize>();
        let c = self.cell_component[base + cs.node_offset()[j] + b];
        (c != usize::MAX).then_some(c)
    }
}

/// `F(I)`: components of the cells meeting `I`, glued along the zigzag maps.
pub fn evaluate(cs: &ConstructibleCosheaf, interval: &OpenInterval) -> Evaluation {
    let total = cs.cell_count();
    let mut cell_component = vec![usize::MAX; total];
    if interval.is_empty() {
        return Evaluation {
            interval: *interval,
            cell_component,
            representative: Vec::new(),
        };
    }
    let so = cs.stratum_offset();
    let node_base = so[cs.strata.len()];
    let no = cs.node_offset();
    let n = cs.critical.len();

    let mut included = vec![false; total];
    let strata_in: Vec<bool> = (0..=n)
        .map(|i| {
            let (lo, hi) = cs.stratum_bounds(i);
            interval.meets(lo, hi)
        })
        .collect();
    let nodes_in: Vec<bool> = cs
        .critical
        .iter()
        .map(|&s| interval.lo < Endpoint::exact(s) && Endpoint::exact(s) < interval.hi)
        .collect();
    for i in 0..=n {
        if strata_in[i] {
            included[so[i]..so[i + 1]].fill(true);
        }
    }
    for j in 0..n {
        if nodes_in[j] {
            included[node_base + no[j]..node_base + no[j + 1]].fill(true);
        }
    }

    let mut uf = UnionFind::new(total);
    for j in 0..n {
        if !nodes_in[j] {
            continue;
        }
        if strata_in[j] {
            for (a, &b) in cs.below[j].iter().enumerate() {
                uf.union(so[j] + a, node_base + no[j] + b);
            }
        }
        if strata_in[j + 1] {
            for (a, &b) in cs.above[j].iter().enumerate() {
                uf.union(so[j + 1] + a, node_base + no[j] + b);
            }
        }
    }
    let mut root_label = vec![usize::MAX; total];
    let mut representative = Vec::new();
    for cell in 0..total {
        if !included[cell] {
            continue;
        }
        let r = uf.find(cell);
        if root_label[r] == usize::MAX {
            root_label[r] = representative.len();
            representative.push(cell);
        }
        cell_component[cell] = root_label[r];
    }
    Evaluation {
        interval: *interval,
        cell_component,
        representative,
    }
}

/// The cosheaf `I ↦ π₀ f⁻¹(I)` of a canonical Reeb graph.
///
/// Critical values are the distinct vertex values. `A_i` holds the edges
/// spanning stratum `i`; `B_j` holds the vertices at `s_j` followed by the
/// edges passing through `s_j`; each edge maps to its endpoint vertex when
/// it ends at `s_j` and to its own pass-through element otherwise.
pub fn cosheaf_of(graph: &ReebGraph) -> ConstructibleCosheaf {
    let dense = graph.dense();
    let mut critical = dense.values.clone();
    critical.sort_unstable();
    critical.dedup();
    let n = critical.len();
    if n == 0 {
        return ConstructibleCosheaf::empty();
    }

    // Node element of a vertex or pass-through edge at each critical value.
    let mut node_of_vertex = vec![0; dense.values.len()];
    let mut pass_through: Vec<std::collections::HashMap<usize, usize>> = vec![Default::default(); n];
    let mut nodes = vec![0; n];
    for (j, &s) in critical.iter().enumerate() {
        for (i, &x) in dense.values.iter().enumerate() {
            if x == s {
                node_of_vertex[i] = nodes[j];
                nodes[j] += 1;
            }
        }
        for (k, &(a, b)) in dense.edges.iter().enumerate() {
            if dense.values[a] < s && s < dense.values[b] {
                pass_through[j].insert(k, nodes[j]);
                nodes[j] += 1;
            }
        }
    }

    let mut strata = vec![0; n + 1];
    let mut below = vec![Vec::new(); n];
    let mut above = vec![Vec::new(); n];
    for i in 1..n {
        let (s_lo, s_hi) = (critical[i - 1], critical[i]);
        for (k, &(a, b)) in dense.edges.iter().enumerate() {
            if dense.values[a] <= s_lo && dense.values[b] >= s_hi {
                strata[i] += 1;
                above[i - 1].push(if dense.values[a] == s_lo {
                    node_of_vertex[a]
                } else {
                    pass_through[i - 1][&k]
                });
                below[i].push(if dense.values[b] == s_hi {
                    node_of_vertex[b]
                } else {
                    pass_through[i][&k]
                });
            }
        }
    }
    ConstructibleCosheaf::new(critical, strata, nodes, below, above).expect("graph cosheaf is well formed")
}

/// The Reeb graph of a cosheaf: a vertex per node element, an edge per
/// stratum element attached through the zigzag maps; canonicalized.
pub fn realize(cs: &ConstructibleCosheaf) -> Result<ReebGraph, CosheafError> {
    // Re-validate: hand-built values may bypass `new` through deserialization.
    let cs = ConstructibleCosheaf::new(
        cs.critical.clone(),
        cs.strata.clone(),
        cs.nodes.clone(),
        cs.below.clone(),
        cs.above.clone(),
    )?;
    let no = cs.node_offset();
    let mut values = Vec::new();
    for (j, &s) in cs.critical.iter().enumerate() {
        values.extend(std::iter::repeat_n(s, cs.nodes[j]));
    }
    let mut edges = Vec::new();
    for i in 1..cs.critical.len() {
        for a in 0..cs.strata[i] {
            edges.push((no[i - 1] + cs.above[i - 1][a], no[i] + cs.below[i][a]));
        }
    }
    Ok(canonicalize(&ReebGraph::from_values(&values, &edges)))
}

/// Re-expresses `I ↦ cs(I^shift)` over the critical grid `grid`, which must
/// contain every shifted critical value of `cs`.
///
/// Stratum sets are the evaluations on the grid strata, node sets the
/// evaluations on infinitesimal intervals around grid points, and the
/// zigzag maps pass through the open stars of the grid points.
pub fn tabulate(cs: &ConstructibleCosheaf, shift: Value, grid: &[Value]) -> Result<ConstructibleCosheaf, CosheafError> {
    Ok(GridTable::build(cs, shift, grid)?.cosheaf)
}

/// A cosheaf tabulated on a grid together with the evaluations that name
/// its elements.
pub(crate) struct GridTable {
    pub(crate) cosheaf: ConstructibleCosheaf,
}

/// Interval of grid cell `c`: even `c` is stratum `c / 2`, odd `c` the
/// infinitesimal neighbourhood of grid point `(c - 1) / 2`.
pub(crate) fn grid_cell(grid: &[Value], c: usize) -> OpenInterval {
    if c % 2 == 1 {
        return OpenInterval::around(grid[(c - 1) / 2]);
    }
    let i = c / 2;
    let lo = if i == 0 { Endpoint::NegInf } else { Endpoint::exact(grid[i - 1]) };
    let hi = if i == grid.len() { Endpoint::PosInf } else { Endpoint::exact(grid[i]) };
    OpenInterval { lo, hi }
}

fn grid_star(grid: &[Value], j: usize) -> OpenInterval {
    let lo = if j == 0 { Endpoint::NegInf } else { Endpoint::exact(grid[j - 1]) };
    let hi = if j + 1 == grid.len() { Endpoint::PosInf } else { Endpoint::exact(grid[j + 1]) };
    OpenInterval { lo, hi }
}

impl GridTable {
    pub(crate) fn build(cs: &ConstructibleCosheaf, shift: Value, grid: &[Value]) -> Result<Self, CosheafError> {
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CosheafError::Grid("grid must be strictly increasing".into()));
        }
        let m = grid.len();
        let eval_cell = |c: usize| evaluate(cs, &grid_cell(grid, c).thicken(shift));
        let strata_evals: Vec<Evaluation> = (0..=m).map(|i| eval_cell(2 * i)).collect();
        let node_evals: Vec<Evaluation> = (0..m).map(|j| eval_cell(2 * j + 1)).collect();
        if !strata_evals[0].is_empty() || !strata_evals[m].is_empty() {
            return Err(CosheafError::Grid("cosheaf is non-empty outside the grid".into()));
        }
        let mut below = Vec::with_capacity(m);
        let mut above = Vec::with_capacity(m);
        for j in 0..m {
            let star = evaluate(cs, &grid_star(grid, j).thicken(shift));
            let node_to_star = node_evals[j].corestriction(&star);
            let mut star_to_node = vec![usize::MAX; star.len()];
            for (b, &s) in node_to_star.iter().enumerate() {
                star_to_node[s] = b;
            }
            if node_to_star.len() != star.len() || star_to_node.contains(&usize::MAX) {
                return Err(CosheafError::Grid(format!(
                    "grid point {} misses a critical value of the cosheaf",
                    grid[j]
                )));
            }
            let through = |e: &Evaluation| -> Vec<usize> {
                e.corestriction(&star).into_iter().map(|s| star_to_node[s]).collect()
            };
            below.push(through(&strata_evals[j]));
            above.push(through(&strata_evals[j + 1]));
        }
        let cosheaf = ConstructibleCosheaf::new(
            grid.to_vec(),
            strata_evals.iter().map(Evaluation::len).collect(),
            node_evals.iter().map(Evaluation::len).collect(),
            below,
            above,
        )?;
        Ok(Self { cosheaf })
    }
}

/// `I ↦ F(I^ε)` as a constructible cosheaf. Candidate critical values are
/// `s ± ε`; those whose flanking maps are both bijections are pruned.
pub fn shift(cs: &ConstructibleCosheaf, eps: Value) -> Result<ConstructibleCosheaf, CosheafError> {
    if eps.is_negative() {
        return Err(CosheafError::Structure(format!("negative shift {eps}")));
    }
    if eps == Value::ZERO {
        return Ok(cs.clone());
    }
    let mut grid: Vec<Value> = cs.critical.iter().flat_map(|&s| [s - eps, s + eps]).collect();
    grid.sort_unstable();
    grid.dedup();
    Ok(prune(tabulate(cs, eps, &grid)?))
}

fn bijection_inverse(map: &[usize], codomain: usize) -> Option<Vec<usize>> {
    if map.len() != codomain {
        return None;
    }
    let mut inv = vec![usize::MAX; codomain];
    for (a, &b) in map.iter().enumerate() {
        if inv[b] != usize::MAX {
            return None;
        }
        inv[b] = a;
    }
    Some(inv)
}

/// Removes critical values at which nothing happens (both zigzag maps are
/// bijections), merging the two flanking strata.
pub fn prune(mut cs: ConstructibleCosheaf) -> ConstructibleCosheaf {
    let mut j = 0;
    while j < cs.critical.len() {
        let inv_below = bijection_inverse(&cs.below[j], cs.nodes[j]);
        let inv_above = bijection_inverse(&cs.above[j], cs.nodes[j]);
        let (Some(_), Some(inv_above)) = (inv_below, inv_above) else {
            j += 1;
            continue;
        };
        // Element a of A_j continues as element corr[a] of A_{j+1}.
        let corr: Vec<usize> = cs.below[j].iter().map(|&b| inv_above[b]).collect();
        cs.critical.remove(j);
        cs.nodes.remove(j);
        cs.below.remove(j);
        cs.above.remove(j);
        cs.strata.remove(j + 1);
        if j < cs.critical.len() {
            let old = std::mem::take(&mut cs.below[j]);
            cs.below[j] = corr.iter().map(|&a| old[a]).collect();
        }
    }
    cs
}
