//! Line-oriented text formats.
//!
//! `.reeb`:
//! ```text
//! # comment
//! v <id> <value>
//! e <lower-id> <upper-id>
//! ```
//! Edge ids follow the order of `e` lines; repeated lines are parallel edges.
//!
//! `.plc`:
//! ```text
//! v <id> <value>
//! f <i> <j>
//! t <i> <j> <k>
//! ```

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::complex::PLComplex;
use crate::error::FormatError;
use crate::graph::{Edge, ReebGraph, Vertex};
use crate::value::Value;

struct Token<'a> {
    text: &'a str,
    col: usize,
}

/// Splits each non-comment line into whitespace-separated tokens with their
/// 1-based column.
fn tokenize(text: &str) -> impl Iterator<Item = (usize, Vec<Token<'_>>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let content = line.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    tokens.push(Token {
                        text: &content[s..pos],
                        col: content[..s].chars().count() + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        col,
        message: message.into(),
    }
}

fn arity(line: usize, tokens: &[Token<'_>], n: usize) -> Result<(), FormatError> {
    if tokens.len() == n + 1 {
        return Ok(());
    }
    let col = tokens.get(n + 1).map_or(tokens[0].col, |t| t.col);
    Err(syntax(
        line,
        col,
        format!("`{}` takes {n} fields, found {}", tokens[0].text, tokens.len() - 1),
    ))
}

fn parse_id(line: usize, tok: &Token<'_>) -> Result<u64, FormatError> {
    tok.text
        .parse()
        .map_err(|_| syntax(line, tok.col, format!("expected vertex id, found `{}`", tok.text)))
}

fn parse_value(line: usize, tok: &Token<'_>) -> Result<Value, FormatError> {
    tok.text
        .parse()
        .map_err(|e: crate::error::ParseValueError| syntax(line, tok.col, e.to_string()))
}

/// Parses a `.reeb` document; edges must be strictly increasing.
pub fn parse_reeb(text: &str) -> Result<ReebGraph, FormatError> {
    let mut vertices = Vec::new();
    let mut seen = HashMap::new();
    let mut raw_edges = Vec::new();
    for (line, tokens) in tokenize(text) {
        match tokens[0].text {
            "v" => {
                arity(line, &tokens, 2)?;
                let id = parse_id(line, &tokens[1])?;
                let value = parse_value(line, &tokens[2])?;
                if seen.insert(id, value).is_some() {
                    return Err(FormatError::Duplicate {
                        line,
                        col: tokens[1].col,
                        what: "vertex",
                        id: id.to_string(),
                    });
                }
                vertices.push(Vertex { id, value });
            }
            "e" => {
                arity(line, &tokens, 2)?;
                let a = parse_id(line, &tokens[1])?;
                let b = parse_id(line, &tokens[2])?;
                raw_edges.push((line, tokens[1].col, tokens[2].col, a, b));
            }
            other => {
                return Err(syntax(line, tokens[0].col, format!("unknown record `{other}`")));
            }
        }
    }
    let mut edges = Vec::with_capacity(raw_edges.len());
    for (k, (line, col_a, col_b, a, b)) in raw_edges.into_iter().enumerate() {
        let va = *seen.get(&a).ok_or(FormatError::Dangling { line, col: col_a, id: a })?;
        let vb = *seen.get(&b).ok_or(FormatError::Dangling { line, col: col_b, id: b })?;
        if va >= vb {
            return Err(FormatError::NonMonotone {
                line,
                col: col_a,
                lower: a,
                upper: b,
            });
        }
        edges.push(Edge {
            id: k as u64,
            lower: a,
            upper: b,
        });
    }
    Ok(ReebGraph::new(vertices, edges))
}

/// Writes a graph in `.reeb` form. Edge lines appear in edge order, so
/// parsing the output reproduces edge ids when they are `0..m`.
pub fn write_reeb(graph: &ReebGraph) -> String {
    let mut out = String::new();
    for v in graph.vertices() {
        let _ = writeln!(out, "v {} {}", v.id, v.value);
    }
    for e in graph.edges() {
        let _ = writeln!(out, "e {} {}", e.lower, e.upper);
    }
    out
}

/// Parses a `.plc` document. With `lenient`, triangle edges that were not
/// declared are added instead of reported.
pub fn parse_complex(text: &str, lenient: bool) -> Result<PLComplex, FormatError> {
    let mut vertices: Vec<(u64, Value)> = Vec::new();
    let mut vertex_ids = HashSet::new();
    let mut edges: Vec<(usize, usize, u64, u64)> = Vec::new();
    let mut triangles: Vec<(usize, usize, [u64; 3])> = Vec::new();
    for (line, tokens) in tokenize(text) {
        match tokens[0].text {
            "v" => {
                arity(line, &tokens, 2)?;
                let id = parse_id(line, &tokens[1])?;
                let value = parse_value(line, &tokens[2])?;
                if !vertex_ids.insert(id) {
                    return Err(FormatError::Duplicate {
                        line,
                        col: tokens[1].col,
                        what: "vertex",
                        id: id.to_string(),
                    });
                }
                vertices.push((id, value));
            }
            "f" => {
                arity(line, &tokens, 2)?;
                edges.push((
                    line,
                    tokens[1].col,
                    parse_id(line, &tokens[1])?,
                    parse_id(line, &tokens[2])?,
                ));
            }
            "t" => {
                arity(line, &tokens, 3)?;
                triangles.push((
                    line,
                    tokens[1].col,
                    [
                        parse_id(line, &tokens[1])?,
                        parse_id(line, &tokens[2])?,
                        parse_id(line, &tokens[3])?,
                    ],
                ));
            }
            other => {
                return Err(syntax(line, tokens[0].col, format!("unknown record `{other}`")));
            }
        }
    }

    // Check references and duplicates here so diagnostics carry positions.
    let mut edge_keys = HashSet::new();
    for &(line, col, a, b) in &edges {
        for id in [a, b] {
            if !vertex_ids.contains(&id) {
                return Err(FormatError::Dangling { line, col, id });
            }
        }
        if a == b {
            return Err(syntax(line, col, "edge repeats a vertex"));
        }
        if !edge_keys.insert((a.min(b), a.max(b))) {
            return Err(FormatError::Duplicate {
                line,
                col,
                what: "edge",
                id: format!("{a} {b}"),
            });
        }
    }
    let mut tri_keys = HashSet::new();
    for &(line, col, t) in &triangles {
        for id in t {
            if !vertex_ids.contains(&id) {
                return Err(FormatError::Dangling { line, col, id });
            }
        }
        let mut key = t;
        key.sort_unstable();
        if key[0] == key[1] || key[1] == key[2] {
            return Err(syntax(line, col, "triangle repeats a vertex"));
        }
        if !tri_keys.insert(key) {
            return Err(FormatError::Duplicate {
                line,
                col,
                what: "triangle",
                id: format!("{} {} {}", t[0], t[1], t[2]),
            });
        }
        if !lenient {
            for (a, b) in [(key[0], key[1]), (key[0], key[2]), (key[1], key[2])] {
                if !edge_keys.contains(&(a, b)) {
                    return Err(FormatError::FaceClosure {
                        line,
                        col,
                        message: format!("triangle {} {} {} needs edge {a} {b}", t[0], t[1], t[2]),
                    });
                }
            }
        }
    }

    let edge_list: Vec<(u64, u64)> = edges.iter().map(|&(_, _, a, b)| (a, b)).collect();
    let tri_list: Vec<(u64, u64, u64)> = triangles.iter().map(|&(_, _, t)| (t[0], t[1], t[2])).collect();
    PLComplex::with_closure(&vertices, &edge_list, &tri_list)
        .map_err(|e| syntax(0, 0, e.to_string()))
}

/// Writes a complex in `.plc` form using its original vertex ids.
pub fn write_complex(complex: &PLComplex) -> String {
    let ids = complex.vertex_ids();
    let mut out = String::new();
    for (id, value) in ids.iter().zip(complex.values()) {
        let _ = writeln!(out, "v {id} {value}");
    }
    for &[a, b] in complex.edges() {
        let _ = writeln!(out, "f {} {}", ids[a], ids[b]);
    }
    for &[a, b, c] in complex.triangles() {
        let _ = writeln!(out, "t {} {} {}", ids[a], ids[b], ids[c]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_isomorphic, validate};

    #[test]
    fn minimal_complex() {
        let k = parse_complex("v 0 0.0\nv 1 1.0\nf 0 1\n", false).unwrap();
        assert_eq!(k.vertex_count(), 2);
        assert_eq!(k.edge_count(), 1);
    }

    #[test]
    fn face_closure_strict_and_lenient() {
        let text = "v 0 0\nv 1 1\nv 2 2\nt 0 1 2\n";
        let err = parse_complex(text, false).unwrap_err();
        assert!(matches!(err, FormatError::FaceClosure { line: 4, col: 3, .. }), "{err}");
        let k = parse_complex(text, true).unwrap();
        assert_eq!((k.edge_count(), k.triangle_count()), (3, 1));
    }

    #[test]
    fn duplicate_vertex_has_position() {
        let err = parse_complex("v 0 0\n  v 0 1\n", false).unwrap_err();
        assert_eq!(
            err,
            FormatError::Duplicate {
                line: 2,
                col: 5,
                what: "vertex",
                id: "0".into()
            }
        );
        assert_eq!(err.to_string(), "2:5: duplicate vertex 0");
    }

    #[test]
    fn syntax_errors_point_at_token() {
        let err = parse_complex("v 0 zero\n", false).unwrap_err();
        assert!(matches!(err, FormatError::Syntax { line: 1, col: 5, .. }));
        let err = parse_reeb("# header\nq 1 2\n").unwrap_err();
        assert!(matches!(err, FormatError::Syntax { line: 2, col: 1, .. }));
        let err = parse_reeb("v 0 0 9\n").unwrap_err();
        assert!(matches!(err, FormatError::Syntax { line: 1, col: 7, .. }));
    }

    #[test]
    fn reeb_round_trip_and_parallel_edges() {
        let text = "# loop\nv 0 0\nv 1 1 # top\ne 0 1\ne 0 1\n";
        let g = parse_reeb(text).unwrap();
        assert!(validate(&g).is_ok());
        assert_eq!(g.edge_count(), 2);
        let again = parse_reeb(&write_reeb(&g)).unwrap();
        assert_eq!(again, g);
        assert!(is_isomorphic(&g, &ReebGraph::loop_graph(Value::ZERO, Value::from_int(1))));
    }

    #[test]
    fn reeb_rejects_bad_edges() {
        assert!(matches!(
            parse_reeb("v 0 1\nv 1 1\ne 0 1\n"),
            Err(FormatError::NonMonotone { line: 3, .. })
        ));
        assert!(matches!(
            parse_reeb("v 0 1\ne 0 7\n"),
            Err(FormatError::Dangling { line: 2, col: 5, id: 7 })
        ));
    }
}
