//! The ε-smoothing operator and an independent fiber oracle.
//!
//! The smoothing of `(X, f)` is the Reeb graph of `X × [-ε, ε]` with the
//! function `f(x) + t`. For a graph this space is a union of prisms: every
//! vertex becomes a vertical segment and every edge a quadrilateral on which
//! `f + t` is affine. Triangulating the quadrilaterals gives a PL complex
//! whose Reeb graph is computed exactly by [`reeb_of_complex`].

use serde::Serialize;

use crate::complex::{reeb_of_complex, PLComplex};
use crate::error::GraphError;
use crate::graph::{canonicalize, ReebGraph};
use crate::union_find::UnionFind;
use crate::value::Value;

/// Which diagonal splits each prism quadrilateral.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Diagonal {
    /// From the bottom corner of the lower column to the top corner of the
    /// upper column.
    Rising,
    /// From the top corner of the lower column to the bottom corner of the
    /// upper column.
    Falling,
}

/// `T_ε(G)` in canonical form.
pub fn smooth(graph: &ReebGraph, epsilon: Value) -> Result<ReebGraph, GraphError> {
    smooth_with(graph, epsilon, Diagonal::Rising)
}

/// [`smooth`] with an explicit quadrilateral diagonal. The result does not
/// depend on the choice.
pub fn smooth_with(graph: &ReebGraph, epsilon: Value, diagonal: Diagonal) -> Result<ReebGraph, GraphError> {
    if epsilon.is_negative() {
        return Err(GraphError::NegativeEpsilon(epsilon.to_string()));
    }
    let complex = prism_complex(graph, epsilon, diagonal);
    let doubled = reeb_of_complex(&complex);
    halve_values(&doubled)
}

/// The triangulated thickening of `graph`, with every value doubled so that
/// edge midpoints stay on the exact value grid.
pub fn prism_complex(graph: &ReebGraph, epsilon: Value, diagonal: Diagonal) -> PLComplex {
    let dense = graph.dense();
    let two_eps = epsilon.double();
    let mut vertices: Vec<(u64, Value)> = Vec::new();
    let mut edges: Vec<(u64, u64)> = Vec::new();
    let mut triangles: Vec<(u64, u64, u64)> = Vec::new();

    let column = |centre: Value, vertices: &mut Vec<(u64, Value)>, edges: &mut Vec<(u64, u64)>| {
        let bottom = vertices.len() as u64;
        vertices.push((bottom, centre - two_eps));
        vertices.push((bottom + 1, centre + two_eps));
        edges.push((bottom, bottom + 1));
        (bottom, bottom + 1)
    };

    let vertex_columns: Vec<(u64, u64)> = dense
        .values
        .iter()
        .map(|&x| column(x.double(), &mut vertices, &mut edges))
        .collect();

    for &(a, b) in &dense.edges {
        let mid = column(dense.values[a] + dense.values[b], &mut vertices, &mut edges);
        for (lower, upper) in [(vertex_columns[a], mid), (mid, vertex_columns[b])] {
            let ((p0, p1), (q0, q1)) = (lower, upper);
            edges.push((p0, q0));
            edges.push((p1, q1));
            match diagonal {
                Diagonal::Rising => {
                    edges.push((p0, q1));
                    triangles.push((p0, q0, q1));
                    triangles.push((p0, p1, q1));
                }
                Diagonal::Falling => {
                    edges.push((p1, q0));
                    triangles.push((p0, p1, q0));
                    triangles.push((p1, q0, q1));
                }
            }
        }
    }
    PLComplex::new(&vertices, &edges, &triangles).expect("prism complex is face-closed by construction")
}

fn halve_values(graph: &ReebGraph) -> Result<ReebGraph, GraphError> {
    let mut vertices = graph.vertices().to_vec();
    for v in &mut vertices {
        v.value = v.value.half_exact().ok_or_else(|| {
            GraphError::Invalid(format!("smoothing produced a critical value off the grid: {}", v.value))
        })?;
    }
    Ok(canonicalize(&ReebGraph::new(vertices, graph.edges().to_vec())))
}

/// Number of points of `graph` at value `level`.
pub fn points_at_level(graph: &ReebGraph, level: Value) -> usize {
    let dense = graph.dense();
    let at_vertices = dense.values.iter().filter(|&&x| x == level).count();
    let crossing = dense
        .edges
        .iter()
        .filter(|&&(a, b)| dense.values[a] < level && level < dense.values[b])
        .count();
    at_vertices + crossing
}

/// One path component of `f⁻¹([level - ε, level + ε])`, by the vertex and
/// edge ids of the cells it meets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FiberComponent {
    pub vertices: Vec<u64>,
    pub edges: Vec<u64>,
}

/// Components of the preimage of the closed band `[level - ε, level + ε]`,
/// found by union-find over the truncated graph. Their number equals the
/// number of points of `T_ε(G)` at `level`.
pub fn fiber_components_oracle(graph: &ReebGraph, epsilon: Value, level: Value) -> Vec<FiberComponent> {
    let dense = graph.dense();
    let (lo, hi) = (level - epsilon, level + epsilon);
    let n = dense.values.len();
    let inside = |x: Value| lo <= x && x <= hi;
    // Slots 0..n are vertices, n.. are edges.
    let mut uf = UnionFind::new(n + dense.edges.len());
    let mut present = vec![false; n + dense.edges.len()];
    for (i, &x) in dense.values.iter().enumerate() {
        present[i] = inside(x);
    }
    for (k, &(a, b)) in dense.edges.iter().enumerate() {
        if dense.values[a] > hi || dense.values[b] < lo {
            continue;
        }
        present[n + k] = true;
        for end in [a, b] {
            if present[end] {
                uf.union(n + k, end);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, FiberComponent> = Default::default();
    for (slot, _) in present.iter().enumerate().filter(|(_, &p)| p) {
        let comp = groups.entry(uf.find(slot)).or_default();
        if slot < n {
            comp.vertices.push(graph.vertices()[slot].id);
        } else {
            comp.edges.push(graph.edges()[slot - n].id);
        }
    }
    let mut out: Vec<FiberComponent> = groups.into_values().collect();
    out.sort_by(|a, b| (&a.vertices, &a.edges).cmp(&(&b.vertices, &b.edges)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_isomorphic;

    fn v(s: &str) -> Value {
        s.parse().unwrap()
    }

    #[test]
    fn smoothing_an_edge_extends_it() {
        let g = smooth(&ReebGraph::segment(v("0"), v("1")), v("0.25")).unwrap();
        assert!(is_isomorphic(&g, &ReebGraph::segment(v("-0.25"), v("1.25"))));
    }

    #[test]
    fn smoothing_the_loop_shrinks_it() {
        let g = smooth(&ReebGraph::loop_graph(v("0"), v("1")), v("0.25")).unwrap();
        let expected = ReebGraph::from_values(
            &[v("-0.25"), v("0.25"), v("0.75"), v("1.25")],
            &[(0, 1), (1, 2), (1, 2), (2, 3)],
        );
        assert!(is_isomorphic(&g, &expected), "{g:?}");
        for (level, count) in [("-0.1", 1), ("0.5", 2), ("1.1", 1)] {
            assert_eq!(points_at_level(&g, v(level)), count);
        }
    }

    #[test]
    fn loop_vanishes_at_half_height() {
        let g = smooth(&ReebGraph::loop_graph(v("0"), v("1")), v("0.5")).unwrap();
        assert!(is_isomorphic(&g, &ReebGraph::segment(v("-0.5"), v("1.5"))));
    }

    #[test]
    fn zero_epsilon_is_identity() {
        let g = canonicalize(&ReebGraph::loop_graph(v("0"), v("1")).disjoint_union(&ReebGraph::segment(v("0.3"), v("2"))));
        assert!(is_isomorphic(&smooth(&g, Value::ZERO).unwrap(), &g));
    }

    #[test]
    fn negative_epsilon_is_rejected() {
        assert!(smooth(&ReebGraph::segment(v("0"), v("1")), v("-0.1")).is_err());
    }

    #[test]
    fn fiber_oracle_examples() {
        let g = ReebGraph::loop_graph(v("0"), v("1"));
        assert_eq!(fiber_components_oracle(&g, v("0.25"), v("0.5")).len(), 2);
        assert_eq!(fiber_components_oracle(&g, v("0.25"), v("0.1")).len(), 1);
        let iso = ReebGraph::from_values(&[v("3")], &[]).disjoint_union(&g);
        let comps = fiber_components_oracle(&iso, Value::ZERO, v("3"));
        assert_eq!(comps, vec![FiberComponent { vertices: vec![0], edges: vec![] }]);
    }

    #[test]
    fn both_diagonals_agree() {
        let g = ReebGraph::from_values(
            &[v("0"), v("0.2"), v("0.7"), v("1")],
            &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)],
        );
        let eps = v("0.1");
        let a = smooth_with(&g, eps, Diagonal::Rising).unwrap();
        let b = smooth_with(&g, eps, Diagonal::Falling).unwrap();
        assert!(is_isomorphic(&a, &b));
    }
}
