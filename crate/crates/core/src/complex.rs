//! Simplicial complexes of dimension at most two carrying a PL function,
//! and their Reeb graphs.

use std::collections::{HashMap, HashSet};

use crate::error::ComplexError;
use crate::graph::{canonicalize, ReebGraph};
use crate::union_find::UnionFind;
use crate::value::Value;

/// A face-closed simplicial complex with vertex values. Simplices are stored
/// by dense vertex position; the original ids are kept for diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLComplex {
    ids: Vec<u64>,
    values: Vec<Value>,
    edges: Vec<[usize; 2]>,
    triangles: Vec<[usize; 3]>,
}

impl PLComplex {
    /// Strict construction: every triangle's edges must be listed.
    pub fn new(
        vertices: &[(u64, Value)],
        edges: &[(u64, u64)],
        triangles: &[(u64, u64, u64)],
    ) -> Result<Self, ComplexError> {
        Self::build(vertices, edges, triangles, false)
    }

    /// Like [`PLComplex::new`], but missing triangle edges are added.
    pub fn with_closure(
        vertices: &[(u64, Value)],
        edges: &[(u64, u64)],
        triangles: &[(u64, u64, u64)],
    ) -> Result<Self, ComplexError> {
        Self::build(vertices, edges, triangles, true)
    }

    fn build(
        vertices: &[(u64, Value)],
        edges: &[(u64, u64)],
        triangles: &[(u64, u64, u64)],
        complete: bool,
    ) -> Result<Self, ComplexError> {
        let mut index = HashMap::new();
        for (i, &(id, _)) in vertices.iter().enumerate() {
            if index.insert(id, i).is_some() {
                return Err(ComplexError::DuplicateVertex(id));
            }
        }
        let lookup = |simplex: String, id: u64| {
            index
                .get(&id)
                .copied()
                .ok_or(ComplexError::Dangling { simplex, vertex: id })
        };

        let mut edge_set = HashSet::new();
        let mut out_edges = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            let name = format!("{a} {b}");
            let (i, j) = (lookup(name.clone(), a)?, lookup(name.clone(), b)?);
            if i == j {
                return Err(ComplexError::Degenerate(name));
            }
            let key = [i.min(j), i.max(j)];
            if !edge_set.insert(key) {
                return Err(ComplexError::DuplicateSimplex(name));
            }
            out_edges.push(key);
        }

        let mut tri_set = HashSet::new();
        let mut out_tris = Vec::with_capacity(triangles.len());
        for &(a, b, c) in triangles {
            let name = format!("{a} {b} {c}");
            let mut t = [
                lookup(name.clone(), a)?,
                lookup(name.clone(), b)?,
                lookup(name.clone(), c)?,
            ];
            t.sort_unstable();
            if t[0] == t[1] || t[1] == t[2] {
                return Err(ComplexError::Degenerate(name));
            }
            if !tri_set.insert(t) {
                return Err(ComplexError::DuplicateSimplex(name));
            }
            for key in [[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]] {
                if edge_set.contains(&key) {
                    continue;
                }
                if !complete {
                    return Err(ComplexError::MissingFace {
                        triangle: name,
                        edge: format!("{} {}", vertices[key[0]].0, vertices[key[1]].0),
                    });
                }
                edge_set.insert(key);
                out_edges.push(key);
            }
            out_tris.push(t);
        }

        Ok(Self {
            ids: vertices.iter().map(|v| v.0).collect(),
            values: vertices.iter().map(|v| v.1).collect(),
            edges: out_edges,
            triangles: out_tris,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.values.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn vertex_ids(&self) -> &[u64] {
        &self.ids
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Same complex with every simplex listed in a different order and the
    /// vertices relabelled by `perm` (a permutation of positions).
    pub fn permuted(&self, perm: &[usize], reverse_simplices: bool) -> PLComplex {
        let n = self.values.len();
        let mut ids = vec![0; n];
        let mut values = vec![Value::ZERO; n];
        for i in 0..n {
            ids[perm[i]] = self.ids[i];
            values[perm[i]] = self.values[i];
        }
        let mut edges: Vec<[usize; 2]> = self
            .edges
            .iter()
            .map(|&[a, b]| {
                let (x, y) = (perm[a], perm[b]);
                [x.min(y), x.max(y)]
            })
            .collect();
        let mut triangles: Vec<[usize; 3]> = self
            .triangles
            .iter()
            .map(|t| {
                let mut u = t.map(|i| perm[i]);
                u.sort_unstable();
                u
            })
            .collect();
        if reverse_simplices {
            edges.reverse();
            triangles.reverse();
        }
        PLComplex {
            ids,
            values,
            edges,
            triangles,
        }
    }
}

/// Components of a level set or of a band between two consecutive levels.
struct LevelComponents {
    /// Component id of each vertex sitting exactly on the level.
    vertex: HashMap<usize, usize>,
    /// Component id of each edge crossing the level in its interior.
    edge: HashMap<usize, usize>,
    count: usize,
}

/// Reeb graph of `(|K|, f)` in canonical form.
///
/// Sweeps the distinct vertex values in increasing order. At each value `c`
/// the level set is tracked through the vertices at `c` and the edges
/// crossing `c`, glued by flat edges and by the level segment of every
/// triangle meeting `c`. Between consecutive values `c < c'` the level set
/// is tracked through the edges spanning `[c, c']`, glued by spanning
/// triangles. Level components become graph vertices, band components
/// become graph edges attached to the level components they limit to.
/// Tied values are handled by treating each distinct value as one level.
pub fn reeb_of_complex(complex: &PLComplex) -> ReebGraph {
    let values = &complex.values;
    let mut levels: Vec<Value> = values.clone();
    levels.sort_unstable();
    levels.dedup();

    let edge_index: HashMap<[usize; 2], usize> = complex
        .edges
        .iter()
        .enumerate()
        .map(|(k, &e)| (e, k))
        .collect();
    let tri_edges: Vec<[usize; 3]> = complex
        .triangles
        .iter()
        .map(|&[a, b, c]| [edge_index[&[a, b]], edge_index[&[a, c]], edge_index[&[b, c]]])
        .collect();
    let span = |k: usize| {
        let [a, b] = complex.edges[k];
        let (x, y) = (values[a], values[b]);
        (x.min(y), x.max(y))
    };
    let low_vertex = |k: usize| {
        let [a, b] = complex.edges[k];
        if values[a] <= values[b] { a } else { b }
    };
    let high_vertex = |k: usize| {
        let [a, b] = complex.edges[k];
        if values[a] <= values[b] { b } else { a }
    };

    let level_components = |c: Value| -> LevelComponents {
        let mut elems: Vec<Element> = Vec::new();
        let mut slot: HashMap<Element, usize> = HashMap::new();
        let mut add = |el: Element, elems: &mut Vec<Element>| {
            *slot.entry(el).or_insert_with(|| {
                elems.push(el);
                elems.len() - 1
            })
        };
        for (i, &x) in values.iter().enumerate() {
            if x == c {
                add(Element::Vertex(i), &mut elems);
            }
        }
        for k in 0..complex.edges.len() {
            let (lo, hi) = span(k);
            if lo < c && c < hi {
                add(Element::Edge(k), &mut elems);
            }
        }
        let mut uf = UnionFind::new(elems.len());
        for &[a, b] in &complex.edges {
            if values[a] == c && values[b] == c {
                uf.union(slot[&Element::Vertex(a)], slot[&Element::Vertex(b)]);
            }
        }
        for (t, tri) in complex.triangles.iter().enumerate() {
            let mut members = Vec::with_capacity(3);
            for &i in tri {
                if values[i] == c {
                    members.push(slot[&Element::Vertex(i)]);
                }
            }
            for &k in &tri_edges[t] {
                let (lo, hi) = span(k);
                if lo < c && c < hi {
                    members.push(slot[&Element::Edge(k)]);
                }
            }
            for w in members.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        let (labels, count) = uf.labels();
        let mut out = LevelComponents {
            vertex: HashMap::new(),
            edge: HashMap::new(),
            count,
        };
        for (el, label) in elems.iter().zip(labels) {
            match *el {
                Element::Vertex(i) => out.vertex.insert(i, label),
                Element::Edge(k) => out.edge.insert(k, label),
            };
        }
        out
    };

    let mut graph_values: Vec<Value> = Vec::new();
    let mut graph_edges: Vec<(usize, usize)> = Vec::new();
    let mut level_offset = Vec::with_capacity(levels.len());
    let mut per_level = Vec::with_capacity(levels.len());
    for &c in &levels {
        let comps = level_components(c);
        level_offset.push(graph_values.len());
        graph_values.extend(std::iter::repeat_n(c, comps.count));
        per_level.push(comps);
    }

    for w in 0..levels.len().saturating_sub(1) {
        let (c, c_next) = (levels[w], levels[w + 1]);
        let spanning: Vec<usize> = (0..complex.edges.len())
            .filter(|&k| {
                let (lo, hi) = span(k);
                lo <= c && hi >= c_next
            })
            .collect();
        if spanning.is_empty() {
            continue;
        }
        let pos: HashMap<usize, usize> = spanning.iter().enumerate().map(|(p, &k)| (k, p)).collect();
        let mut uf = UnionFind::new(spanning.len());
        for tri in &tri_edges {
            let inside: Vec<usize> = tri.iter().filter_map(|k| pos.get(k).copied()).collect();
            for pair in inside.windows(2) {
                uf.union(pair[0], pair[1]);
            }
        }
        let (labels, count) = uf.labels();
        let mut representative = vec![usize::MAX; count];
        for (p, &label) in labels.iter().enumerate() {
            if representative[label] == usize::MAX {
                representative[label] = spanning[p];
            }
        }
        for &k in &representative {
            let below = &per_level[w];
            let lower = if span(k).0 == c {
                below.vertex[&low_vertex(k)]
            } else {
                below.edge[&k]
            };
            let above = &per_level[w + 1];
            let upper = if span(k).1 == c_next {
                above.vertex[&high_vertex(k)]
            } else {
                above.edge[&k]
            };
            graph_edges.push((level_offset[w] + lower, level_offset[w + 1] + upper));
        }
    }

    canonicalize(&ReebGraph::from_values(&graph_values, &graph_edges))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Element {
    Vertex(usize),
    Edge(usize),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_isomorphic;

    fn v(s: &str) -> Value {
        s.parse().unwrap()
    }

    fn verts(vals: &[&str]) -> Vec<(u64, Value)> {
        vals.iter().enumerate().map(|(i, s)| (i as u64, v(s))).collect()
    }

    #[test]
    fn solid_triangle_is_an_edge() {
        let k = PLComplex::new(&verts(&["0", "1", "2"]), &[(0, 1), (1, 2), (0, 2)], &[(0, 1, 2)]).unwrap();
        assert!(is_isomorphic(&reeb_of_complex(&k), &ReebGraph::segment(v("0"), v("2"))));
    }

    #[test]
    fn hollow_triangle_is_a_loop() {
        let k = PLComplex::new(&verts(&["0", "1", "2"]), &[(0, 1), (1, 2), (0, 2)], &[]).unwrap();
        assert!(is_isomorphic(&reeb_of_complex(&k), &ReebGraph::loop_graph(v("0"), v("2"))));
    }

    #[test]
    fn disjoint_edges_stay_disjoint() {
        let k = PLComplex::new(&verts(&["0", "1", "2", "3"]), &[(0, 1), (2, 3)], &[]).unwrap();
        let expected = ReebGraph::segment(v("0"), v("1")).disjoint_union(&ReebGraph::segment(v("2"), v("3")));
        assert!(is_isomorphic(&reeb_of_complex(&k), &expected));
    }

    #[test]
    fn isolated_vertex_survives() {
        let k = PLComplex::new(&verts(&["0.5"]), &[], &[]).unwrap();
        let g = reeb_of_complex(&k);
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn flat_square_with_ties() {
        // Square 0-1-2-3 with values 0,1,1,2 and diagonal 1-2 (flat), two triangles.
        let k = PLComplex::new(
            &verts(&["0", "1", "1", "2"]),
            &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)],
            &[(0, 1, 2), (1, 2, 3)],
        )
        .unwrap();
        assert!(is_isomorphic(&reeb_of_complex(&k), &ReebGraph::segment(v("0"), v("2"))));
    }

    #[test]
    fn strict_mode_requires_faces() {
        let err = PLComplex::new(&verts(&["0", "1", "2"]), &[], &[(0, 1, 2)]).unwrap_err();
        assert!(matches!(err, ComplexError::MissingFace { .. }));
        let k = PLComplex::with_closure(&verts(&["0", "1", "2"]), &[], &[(0, 1, 2)]).unwrap();
        assert_eq!(k.edge_count(), 3);
    }

    #[test]
    fn rejects_duplicates_and_dangling() {
        assert!(matches!(
            PLComplex::new(&[(0, v("0")), (0, v("1"))], &[], &[]),
            Err(ComplexError::DuplicateVertex(0))
        ));
        assert!(matches!(
            PLComplex::new(&verts(&["0", "1"]), &[(0, 1), (1, 0)], &[]),
            Err(ComplexError::DuplicateSimplex(_))
        ));
        assert!(matches!(
            PLComplex::new(&verts(&["0"]), &[(0, 4)], &[]),
            Err(ComplexError::Dangling { vertex: 4, .. })
        ));
    }
}
