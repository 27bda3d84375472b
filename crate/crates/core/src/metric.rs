//! The path-height pseudo-metric `d_f`.
//!
//! `d_f(p, q)` is the least height `max f - min f` of a path from `p` to
//! `q`; equivalently the least width `b - a` of a closed band `[a, b]` whose
//! preimage has `p` and `q` in one component.

use crate::error::GraphError;
use crate::graph::{DenseGraph, GraphPoint, ReebGraph};
use crate::union_find::UnionFind;

/// Result of [`path_height`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PathHeight {
    Finite(f64),
    /// The points lie in different components of the graph.
    Disconnected,
}

impl PathHeight {
    pub fn finite(self) -> Option<f64> {
        match self {
            PathHeight::Finite(h) => Some(h),
            PathHeight::Disconnected => None,
        }
    }

    /// `+∞` for disconnected pairs.
    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

/// Where a point sits for band connectivity purposes.
#[derive(Clone, Copy)]
enum Anchor {
    Vertex(usize),
    Edge(usize),
}

fn anchor(graph: &ReebGraph, p: &GraphPoint) -> Result<(Anchor, f64), GraphError> {
    let value = graph.point_value(p)?;
    let a = match *p {
        GraphPoint::Vertex(id) => Anchor::Vertex(
            graph
                .vertices()
                .iter()
                .position(|v| v.id == id)
                .ok_or(GraphError::UnknownVertex(id))?,
        ),
        GraphPoint::Edge { edge, .. } => Anchor::Edge(
            graph
                .edges()
                .iter()
                .position(|e| e.id == edge)
                .ok_or(GraphError::UnknownEdge(edge))?,
        ),
    };
    Ok((a, value))
}

/// `d_f(p, q)` by minimising over candidate bands. Band ends are drawn from
/// the vertex values and the two point values; connectivity in each band is
/// decided by union-find over the truncated graph.
pub fn path_height(graph: &ReebGraph, p: &GraphPoint, q: &GraphPoint) -> Result<PathHeight, GraphError> {
    let (ap, fp) = anchor(graph, p)?;
    let (aq, fq) = anchor(graph, q)?;
    if p == q {
        return Ok(PathHeight::Finite(0.0));
    }
    let dense = graph.dense();
    let (low, high) = (fp.min(fq), fp.max(fq));
    let values: Vec<f64> = dense.values.iter().map(|v| v.to_f64()).collect();

    let mut lows: Vec<f64> = values.iter().copied().filter(|&x| x <= low).collect();
    lows.push(low);
    lows.sort_by(|a, b| b.total_cmp(a));
    lows.dedup();
    let mut highs: Vec<f64> = values.iter().copied().filter(|&x| x >= high).collect();
    highs.push(high);
    highs.sort_by(f64::total_cmp);
    highs.dedup();

    let mut best = f64::INFINITY;
    for &a in &lows {
        if high - a >= best {
            break;
        }
        for &b in &highs {
            if b - a >= best {
                break;
            }
            if band_connects(&dense, &values, a, b, ap, aq) {
                best = b - a;
                break;
            }
        }
    }
    Ok(if best.is_finite() {
        PathHeight::Finite(best)
    } else {
        PathHeight::Disconnected
    })
}

fn band_connects(dense: &DenseGraph, values: &[f64], a: f64, b: f64, p: Anchor, q: Anchor) -> bool {
    let n = values.len();
    let mut uf = UnionFind::new(n + dense.edges.len());
    for (k, &(x, y)) in dense.edges.iter().enumerate() {
        if values[x] > b || values[y] < a {
            continue;
        }
        for end in [x, y] {
            if a <= values[end] && values[end] <= b {
                uf.union(n + k, end);
            }
        }
    }
    let slot = |an: Anchor| match an {
        Anchor::Vertex(i) => i,
        Anchor::Edge(k) => n + k,
    };
    uf.find(slot(p)) == uf.find(slot(q))
}

/// `d_f` between every pair of vertices of a graph, as a dense matrix with
/// `+∞` for disconnected pairs.
///
/// For each candidate lower end `a`, vertices with value at least `a` are
/// added in increasing value order; when two components first meet while
/// adding a vertex of value `b`, every pair across them is joined by a path
/// inside `[a, b]`. Runs in `O(n³)` time.
pub fn all_pairs_path_height(dense: &DenseGraph) -> Vec<Vec<f64>> {
    let n = dense.values.len();
    let values: Vec<f64> = dense.values.iter().map(|v| v.to_f64()).collect();
    let mut adjacency = vec![Vec::new(); n];
    for &(x, y) in &dense.edges {
        adjacency[x].push(y);
        adjacency[y].push(x);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));
    let mut rank = vec![0; n];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }

    let mut dist = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in dist.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    let mut start = 0;
    while start < n {
        let a = values[order[start]];
        let mut uf = UnionFind::new(n);
        let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        for &v in &order[start..] {
            let b = values[v];
            for &w in &adjacency[v] {
                if rank[w] < start || rank[w] > rank[v] {
                    continue;
                }
                let (rv, rw) = (uf.find(v), uf.find(w));
                if rv == rw {
                    continue;
                }
                let height = b - a;
                for &x in &members[rv] {
                    for &y in &members[rw] {
                        if height < dist[x][y] {
                            dist[x][y] = height;
                            dist[y][x] = height;
                        }
                    }
                }
                uf.union(rv, rw);
                let root = uf.find(rv);
                let moved = std::mem::take(&mut members[if root == rv { rw } else { rv }]);
                members[root].extend(moved);
            }
        }
        // Skip ties: the same lower end gives the same bands.
        let mut next = start + 1;
        while next < n && values[order[next]] == a {
            next += 1;
        }
        start = next;
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::Value;

    fn v(s: &str) -> Value {
        s.parse().unwrap()
    }

    #[test]
    fn same_point_is_zero() {
        let g = ReebGraph::loop_graph(v("0"), v("1"));
        let p = GraphPoint::Edge { edge: 0, s: 0.3 };
        assert_eq!(path_height(&g, &p, &p).unwrap(), PathHeight::Finite(0.0));
    }

    #[test]
    fn edge_endpoints() {
        let g = ReebGraph::segment(v("0"), v("1"));
        let h = path_height(&g, &GraphPoint::Vertex(0), &GraphPoint::Vertex(1)).unwrap();
        assert_eq!(h, PathHeight::Finite(1.0));
    }

    #[test]
    fn loop_midpoints() {
        let g = ReebGraph::loop_graph(v("0"), v("1"));
        let p = GraphPoint::Edge { edge: 0, s: 0.5 };
        let q = GraphPoint::Edge { edge: 1, s: 0.5 };
        assert_eq!(path_height(&g, &p, &q).unwrap(), PathHeight::Finite(0.5));
    }

    #[test]
    fn disconnected_pairs() {
        let g = ReebGraph::segment(v("0"), v("1")).disjoint_union(&ReebGraph::segment(v("0"), v("1")));
        let h = path_height(&g, &GraphPoint::Vertex(0), &GraphPoint::Vertex(2)).unwrap();
        assert_eq!(h, PathHeight::Disconnected);
        assert!(all_pairs_path_height(&g.dense())[0][2].is_infinite());
    }

    #[test]
    fn invalid_points_are_errors() {
        let g = ReebGraph::segment(v("0"), v("1"));
        assert!(path_height(&g, &GraphPoint::Vertex(5), &GraphPoint::Vertex(0)).is_err());
        assert!(path_height(&g, &GraphPoint::Edge { edge: 0, s: 1.5 }, &GraphPoint::Vertex(0)).is_err());
    }

    #[test]
    fn all_pairs_matches_pointwise() {
        let g = ReebGraph::from_values(
            &[v("0"), v("0.4"), v("0.5"), v("1"), v("0.8")],
            &[(0, 1), (0, 2), (1, 3), (2, 3), (2, 4)],
        );
        let table = all_pairs_path_height(&g.dense());
        for i in 0..5u64 {
            for j in 0..5u64 {
                let h = path_height(&g, &GraphPoint::Vertex(i), &GraphPoint::Vertex(j)).unwrap();
                assert!((h.to_f64() - table[i as usize][j as usize]).abs() < 1e-12, "{i} {j}");
            }
        }
    }
}
