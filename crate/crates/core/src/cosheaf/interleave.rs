//! Deciding ε-interleavings between constructible cosheaves.
//!
//! Both cosheaves are re-expressed on the common grid
//! `S* = S_F ∪ S_G ∪ (S_F ± ε) ∪ (S_G ± ε) ∪ (S_F ± 2ε) ∪ (S_G ± 2ε)`.
//! Its atomic cells are the open strata between grid points and the
//! infinitesimal neighbourhoods of the grid points. A natural family
//! `φ_I: F(I) → G(I^ε)` is determined by its components on atomic cells,
//! and naturality reduces to the squares along the zigzag maps.
//!
//! The search treats every element `x ∈ F(c)` of every atomic cell `c` as a
//! variable with domain `G(c^ε)`, and symmetrically for `ψ`. Constraints:
//!
//! * naturality: `G^ε[c ⊆ star](φ_c(x)) = φ_node(F[c ⊆ star](x))` along
//!   each zigzag map;
//! * composition: `ψ_{c^ε}(φ_c(x)) = F[c ⊆ c^{2ε}](x)`. The left side is
//!   read off one atomic cell `d ⊆ c^ε` whose element `z` reaches
//!   `φ_c(x)`, since naturality gives `ψ_{c^ε}(φ_c(x)) = F[d^ε ⊆ c^{2ε}](ψ_d(z))`.
//!
//! Backtracking with forward checking and smallest-domain-first ordering
//! finds an assignment or proves there is none.

use serde::{Deserialize, Serialize};

use super::{evaluate, grid_cell, tabulate, ConstructibleCosheaf, Endpoint, Evaluation, OpenInterval};
use crate::bounds::BoundInterval;
use crate::error::CosheafError;
use crate::value::Value;

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Cap on the number of tentative assignments explored by one decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_nodes: DEFAULT_NODE_BUDGET,
        }
    }
}

/// One atomic cell's component map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellMaps {
    pub cell: usize,
    pub interval: String,
    pub map: Vec<usize>,
}

/// The maps `φ` and `ψ` on every atomic cell of the common grid. Element
/// indices follow [`evaluate`] on the cell (source) and on the thickened
/// cell (target).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterleavingCertificate {
    pub epsilon: Value,
    pub grid: Vec<Value>,
    pub phi: Vec<CellMaps>,
    pub psi: Vec<CellMaps>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Yes(Box<InterleavingCertificate>),
    No,
    /// The node budget ran out before the search finished.
    Undecided { nodes: u64 },
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }
}

fn common_grid(f: &ConstructibleCosheaf, g: &ConstructibleCosheaf, eps: Value) -> Vec<Value> {
    let mut grid = Vec::new();
    for &s in f.critical_values().iter().chain(g.critical_values()) {
        grid.extend([s, s - eps, s + eps, s - eps.double(), s + eps.double()]);
    }
    grid.sort_unstable();
    grid.dedup();
    grid
}

fn cell_label(grid: &[Value], c: usize) -> String {
    let show = |e: Endpoint| match e {
        Endpoint::NegInf => "-inf".to_string(),
        Endpoint::PosInf => "inf".to_string(),
        Endpoint::At(v, _) => v.to_string(),
    };
    if c % 2 == 1 {
        format!("around {}", grid[(c - 1) / 2])
    } else {
        let i = grid_cell(grid, c);
        format!("({}, {})", show(i.lo), show(i.hi))
    }
}

/// A cosheaf evaluated on the atomic cells, their ε- and 2ε-thickenings,
/// and the tabulated zigzags of the first two.
struct Views {
    zero: Vec<Evaluation>,
    one: Vec<Evaluation>,
    two: Vec<Evaluation>,
    table_zero: ConstructibleCosheaf,
    table_one: ConstructibleCosheaf,
}

impl Views {
    fn new(cs: &ConstructibleCosheaf, eps: Value, grid: &[Value]) -> Result<Self, CosheafError> {
        let cells: Vec<OpenInterval> = (0..2 * grid.len() + 1).map(|c| grid_cell(grid, c)).collect();
        let at = |shift: Value| -> Vec<Evaluation> { cells.iter().map(|i| evaluate(cs, &i.thicken(shift))).collect() };
        Ok(Self {
            zero: at(Value::ZERO),
            one: at(eps),
            two: at(eps.double()),
            table_zero: tabulate(cs, Value::ZERO, grid)?,
            table_one: tabulate(cs, eps, grid)?,
        })
    }
}

/// `map[value of a] == value of b`.
struct Link {
    a: usize,
    b: usize,
    map: usize,
}

struct Problem {
    grid: Vec<Value>,
    cells: usize,
    /// `offset[d][c]`: first variable of direction `d` (0 = φ, 1 = ψ) on cell `c`.
    offset: [Vec<usize>; 2],
    domain: Vec<usize>,
    maps: Vec<Vec<usize>>,
    links: Vec<Link>,
    links_of: Vec<Vec<usize>>,
    /// `composite[v][k]`: assigning `k` to `v` restricts the named variable
    /// to the marked values.
    composite: Vec<Vec<(usize, Vec<bool>)>>,
}

impl Problem {
    fn build(f: &ConstructibleCosheaf, g: &ConstructibleCosheaf, eps: Value) -> Result<Self, CosheafError> {
        if eps.is_negative() {
            return Err(CosheafError::Structure(format!("negative epsilon {eps}")));
        }
        let grid = common_grid(f, g, eps);
        let cells = 2 * grid.len() + 1;
        let views = [Views::new(f, eps, &grid)?, Views::new(g, eps, &grid)?];

        let mut offset = [Vec::with_capacity(cells + 1), Vec::with_capacity(cells + 1)];
        let mut domain = Vec::new();
        for d in 0..2 {
            let (src, tgt) = (&views[d], &views[1 - d]);
            for c in 0..cells {
                offset[d].push(domain.len());
                domain.extend(std::iter::repeat_n(tgt.one[c].len(), src.zero[c].len()));
            }
            offset[d].push(domain.len());
        }
        let var = |d: usize, c: usize, x: usize| offset[d][c] + x;

        let mut maps = Vec::new();
        let mut links = Vec::new();
        for d in 0..2 {
            let (src, tgt) = (&views[d].table_zero, &views[1 - d].table_one);
            for j in 0..grid.len() {
                maps.push(tgt.below_map(j).to_vec());
                for (a, &b) in src.below_map(j).iter().enumerate() {
                    links.push(Link {
                        a: var(d, 2 * j, a),
                        b: var(d, 2 * j + 1, b),
                        map: maps.len() - 1,
                    });
                }
                maps.push(tgt.above_map(j).to_vec());
                for (a, &b) in src.above_map(j).iter().enumerate() {
                    links.push(Link {
                        a: var(d, 2 * j + 2, a),
                        b: var(d, 2 * j + 1, b),
                        map: maps.len() - 1,
                    });
                }
            }
        }
        let mut links_of = vec![Vec::new(); domain.len()];
        for (k, l) in links.iter().enumerate() {
            links_of[l.a].push(k);
            links_of[l.b].push(k);
        }

        let mut composite = vec![Vec::new(); domain.len()];
        for d in 0..2 {
            let (src, tgt) = (&views[d], &views[1 - d]);
            for c in 0..cells {
                if src.zero[c].is_empty() {
                    continue;
                }
                let sigma = src.zero[c].corestriction(&src.two[c]);
                let reach = tgt.one[c].interval();
                let mut hit: Vec<Option<(usize, usize)>> = vec![None; tgt.one[c].len()];
                for dc in 0..cells {
                    if !reach.contains(&tgt.zero[dc].interval()) || tgt.zero[dc].is_empty() {
                        continue;
                    }
                    for (z, k) in tgt.zero[dc].corestriction(&tgt.one[c]).into_iter().enumerate() {
                        hit[k].get_or_insert((dc, z));
                    }
                }
                let mut rules = Vec::with_capacity(hit.len());
                for h in hit {
                    let (dc, z) = h.ok_or_else(|| {
                        CosheafError::Structure(format!("no atomic cell reaches a component over {}", cell_label(&grid, c)))
                    })?;
                    let push = src.one[dc].corestriction(&src.two[c]);
                    rules.push((var(1 - d, dc, z), push));
                }
                for (x, &sx) in sigma.iter().enumerate() {
                    composite[var(d, c, x)] = rules
                        .iter()
                        .map(|(other, push)| (*other, push.iter().map(|&p| p == sx).collect()))
                        .collect();
                }
            }
        }

        Ok(Self {
            grid,
            cells,
            offset,
            domain,
            maps,
            links,
            links_of,
            composite,
        })
    }

    fn certificate(&self, eps: Value, values: &[usize]) -> InterleavingCertificate {
        let side = |d: usize| -> Vec<CellMaps> {
            (0..self.cells)
                .map(|c| CellMaps {
                    cell: c,
                    interval: cell_label(&self.grid, c),
                    map: values[self.offset[d][c]..self.offset[d][c + 1]].to_vec(),
                })
                .collect()
        };
        InterleavingCertificate {
            epsilon: eps,
            grid: self.grid.clone(),
            phi: side(0),
            psi: side(1),
        }
    }

    /// First violated constraint of a complete assignment.
    fn violation(&self, values: &[usize]) -> Option<String> {
        for (v, (&x, &n)) in values.iter().zip(&self.domain).enumerate() {
            if x >= n {
                return Some(format!("variable {v} takes {x} outside a domain of size {n}"));
            }
        }
        for l in &self.links {
            if self.maps[l.map][values[l.a]] != values[l.b] {
                return Some(format!("naturality fails between variables {} and {}", l.a, l.b));
            }
        }
        for (v, rules) in self.composite.iter().enumerate() {
            let (other, allowed) = &rules[values[v]];
            if !allowed[values[*other]] {
                return Some(format!("composite condition fails at variable {v}"));
            }
        }
        None
    }
}

enum Outcome {
    Found(Vec<usize>),
    Exhausted,
    OutOfBudget(u64),
}

struct Search<'a> {
    p: &'a Problem,
    allowed: Vec<Vec<bool>>,
    size: Vec<usize>,
    assigned: Vec<Option<usize>>,
    trail: Vec<(usize, usize)>,
}

struct Frame {
    var: usize,
    values: Vec<usize>,
    next: usize,
    mark: usize,
}

impl<'a> Search<'a> {
    fn new(p: &'a Problem) -> Self {
        Self {
            p,
            allowed: p.domain.iter().map(|&n| vec![true; n]).collect(),
            size: p.domain.clone(),
            assigned: vec![None; p.domain.len()],
            trail: Vec::new(),
        }
    }

    fn restrict(&mut self, var: usize, keep: impl Fn(usize) -> bool) -> bool {
        for k in 0..self.allowed[var].len() {
            if self.allowed[var][k] && !keep(k) {
                self.allowed[var][k] = false;
                self.size[var] -= 1;
                self.trail.push((var, k));
            }
        }
        self.size[var] > 0
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (var, k) = self.trail.pop().unwrap();
            self.allowed[var][k] = true;
            self.size[var] += 1;
        }
    }

    fn assign(&mut self, var: usize, val: usize) -> bool {
        let p = self.p;
        if !self.restrict(var, |k| k == val) {
            return false;
        }
        for &li in &p.links_of[var] {
            let l = &p.links[li];
            let map = &p.maps[l.map];
            let ok = if l.a == var {
                let target = map[val];
                self.restrict(l.b, |k| k == target)
            } else {
                self.restrict(l.a, |k| map[k] == val)
            };
            if !ok {
                return false;
            }
        }
        let (other, allowed) = &p.composite[var][val];
        self.restrict(*other, |k| allowed[k])
    }

    fn pick(&self) -> Option<usize> {
        (0..self.size.len())
            .filter(|&v| self.assigned[v].is_none())
            .min_by_key(|&v| self.size[v])
    }

    fn run(mut self, budget: u64) -> Outcome {
        if self.size.contains(&0) {
            return Outcome::Exhausted;
        }
        let mut nodes = 0u64;
        let mut stack: Vec<Frame> = Vec::new();
        loop {
            let Some(var) = self.pick() else {
                return Outcome::Found(self.assigned.iter().map(|a| a.unwrap()).collect());
            };
            let values = (0..self.allowed[var].len()).filter(|&k| self.allowed[var][k]).collect();
            stack.push(Frame {
                var,
                values,
                next: 0,
                mark: self.trail.len(),
            });
            loop {
                let Some(top) = stack.last_mut() else {
                    return Outcome::Exhausted;
                };
                let (var, mark) = (top.var, top.mark);
                if top.next == top.values.len() {
                    stack.pop();
                    self.undo(mark);
                    self.assigned[var] = None;
                    continue;
                }
                let val = top.values[top.next];
                top.next += 1;
                self.undo(mark);
                nodes += 1;
                if nodes > budget {
                    return Outcome::OutOfBudget(nodes - 1);
                }
                self.assigned[var] = Some(val);
                if self.assign(var, val) {
                    break;
                }
            }
        }
    }
}

/// Decides whether `F` and `G` are ε-interleaved.
pub fn decide_interleaving(
    f: &ConstructibleCosheaf,
    g: &ConstructibleCosheaf,
    epsilon: Value,
    budget: SearchBudget,
) -> Result<Decision, CosheafError> {
    let problem = Problem::build(f, g, epsilon)?;
    Ok(match Search::new(&problem).run(budget.max_nodes) {
        Outcome::Found(values) => {
            debug_assert!(problem.violation(&values).is_none());
            Decision::Yes(Box::new(problem.certificate(epsilon, &values)))
        }
        Outcome::Exhausted => Decision::No,
        Outcome::OutOfBudget(nodes) => Decision::Undecided { nodes },
    })
}

/// Replays a certificate: rebuilds the constraint system for its ε and
/// checks every naturality square and composite condition.
pub fn verify_certificate(
    f: &ConstructibleCosheaf,
    g: &ConstructibleCosheaf,
    cert: &InterleavingCertificate,
) -> Result<(), CosheafError> {
    let problem = Problem::build(f, g, cert.epsilon)?;
    let reject = |m: String| Err(CosheafError::Certificate(m));
    if problem.grid != cert.grid {
        return reject("grid differs from the common refinement".into());
    }
    let mut values = Vec::with_capacity(problem.domain.len());
    for (d, side) in [&cert.phi, &cert.psi].into_iter().enumerate() {
        if side.len() != problem.cells {
            return reject(format!("expected {} cells, found {}", problem.cells, side.len()));
        }
        for (c, maps) in side.iter().enumerate() {
            let want = problem.offset[d][c + 1] - problem.offset[d][c];
            if maps.cell != c || maps.map.len() != want {
                return reject(format!("cell {c} map has {} entries, expected {want}", maps.map.len()));
            }
            values.extend(&maps.map);
        }
    }
    match problem.violation(&values) {
        Some(m) => reject(m),
        None => Ok(()),
    }
}

/// Outcome of one probe of the distance search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeOutcome {
    Yes,
    No,
    Undecided,
}

/// Enclosure of `d_I` found by [`d_i_bounds`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterleavingBounds {
    /// Largest ε tested without an interleaving, or zero.
    pub lo: Value,
    /// Smallest ε tested with one.
    pub hi: Option<Value>,
    /// The cosheaves have different numbers of global sections, so no ε
    /// works and `d_I = ∞`.
    pub infinite: bool,
    pub undecided: bool,
    pub certificate: Option<InterleavingCertificate>,
    pub probes: Vec<(Value, ProbeOutcome)>,
}

impl InterleavingBounds {
    pub fn to_bound_interval(&self) -> BoundInterval {
        if self.infinite {
            return BoundInterval::new(
                f64::INFINITY,
                f64::INFINITY,
                "component counts differ",
                "component counts differ",
            );
        }
        let lo_from = if self.lo > Value::ZERO {
            format!("interleaving: none at epsilon {}", self.lo)
        } else {
            "interleaving: nonnegative".to_string()
        };
        let (hi, hi_from) = match self.hi {
            Some(h) => (h.to_f64(), format!("interleaving: certificate at epsilon {h}")),
            None => (f64::INFINITY, "interleaving: none found".to_string()),
        };
        let mut b = BoundInterval::new(self.lo.to_f64(), hi, lo_from, hi_from);
        b.undecided = self.undecided;
        b
    }
}

/// Brackets `d_I(F, G)` to within `tolerance` by binary search over the
/// candidate values `|a − b|` and `|a − b| / 2`, then bisection.
pub fn d_i_bounds(
    f: &ConstructibleCosheaf,
    g: &ConstructibleCosheaf,
    tolerance: Value,
    budget: SearchBudget,
) -> Result<InterleavingBounds, CosheafError> {
    if tolerance <= Value::ZERO {
        return Err(CosheafError::Structure(format!("tolerance must be positive, got {tolerance}")));
    }
    let mut out = InterleavingBounds {
        lo: Value::ZERO,
        hi: None,
        infinite: false,
        undecided: false,
        certificate: None,
        probes: Vec::new(),
    };
    let whole = OpenInterval::whole_line();
    if evaluate(f, &whole).len() != evaluate(g, &whole).len() {
        out.infinite = true;
        return Ok(out);
    }
    let mut values: Vec<Value> = f.critical_values().iter().chain(g.critical_values()).copied().collect();
    values.sort_unstable();
    values.dedup();
    let (Some(&bottom), Some(&top)) = (values.first(), values.last()) else {
        out.hi = Some(Value::ZERO);
        return Ok(out);
    };
    let span = top - bottom;
    let mut candidates = vec![Value::ZERO, span];
    for (i, &a) in values.iter().enumerate() {
        for &b in &values[i + 1..] {
            candidates.extend([b - a, (b - a).half_floor()]);
        }
    }
    candidates.sort_unstable();
    candidates.dedup();

    // Returns false when the search must stop.
    let probe = |eps: Value, out: &mut InterleavingBounds| -> Result<bool, CosheafError> {
        let outcome = match decide_interleaving(f, g, eps, budget)? {
            Decision::Yes(cert) => {
                if out.hi.is_none_or(|h| eps < h) {
                    out.hi = Some(eps);
                    out.certificate = Some(*cert);
                }
                ProbeOutcome::Yes
            }
            Decision::No => {
                out.lo = out.lo.max(eps);
                ProbeOutcome::No
            }
            Decision::Undecided { .. } => {
                out.undecided = true;
                ProbeOutcome::Undecided
            }
        };
        out.probes.push((eps, outcome));
        Ok(outcome != ProbeOutcome::Undecided)
    };

    if !probe(span, &mut out)? || out.hi.is_none() {
        return Ok(out);
    }
    let (mut lo_i, mut hi_i) = (0, candidates.len() - 1);
    while lo_i < hi_i {
        let mid = (lo_i + hi_i) / 2;
        if !probe(candidates[mid], &mut out)? {
            return Ok(out);
        }
        if out.hi == Some(candidates[mid]) {
            hi_i = mid;
        } else {
            lo_i = mid + 1;
        }
    }
    while let Some(hi) = out.hi {
        if hi - out.lo <= tolerance {
            break;
        }
        let mid = out.lo + (hi - out.lo).half_floor();
        if mid == out.lo || !probe(mid, &mut out)? {
            break;
        }
    }
    Ok(out)
}
