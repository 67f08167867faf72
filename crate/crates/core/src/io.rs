//! DIMACS edge format plus the modulator and clique-cover side files.
//!
//! All files use 1-indexed vertex ids; in memory everything is 0-indexed.

use std::fmt::Write as _;

use crate::classify::CliqueCover;
use crate::error::{CvcError, Result};
use crate::graph::{Graph, Vertex, VertexSet};

fn parse_err(line: usize, msg: impl Into<String>) -> CvcError {
    CvcError::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_id(tok: &str, line: usize, n: Option<usize>) -> Result<Vertex> {
    let id: usize = tok
        .parse()
        .map_err(|_| parse_err(line, format!("invalid vertex id {tok:?}")))?;
    if id == 0 || n.is_some_and(|n| id > n) {
        return Err(parse_err(line, format!("vertex id {id} out of range")));
    }
    Ok(id - 1)
}

/// Parses a DIMACS edge file (`p edge n m` header, `e u v` lines, `c` comments).
pub fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None | Some("c") => continue,
            Some(t) if t.starts_with('c') && t.len() > 1 => continue,
            Some("p") => {
                if n.is_some() {
                    return Err(parse_err(line, "duplicate header"));
                }
                let (Some(fmt), Some(nv), Some(_m), None) =
                    (toks.next(), toks.next(), toks.next(), toks.next())
                else {
                    return Err(parse_err(
                        line,
                        "malformed header, expected `p edge <n> <m>`",
                    ));
                };
                if fmt != "edge" && fmt != "col" {
                    return Err(parse_err(line, format!("unsupported format {fmt:?}")));
                }
                n = Some(
                    nv.parse()
                        .map_err(|_| parse_err(line, format!("invalid vertex count {nv:?}")))?,
                );
            }
            Some("e") => {
                let Some(nv) = n else {
                    return Err(parse_err(line, "edge before header"));
                };
                let (Some(a), Some(b), None) = (toks.next(), toks.next(), toks.next()) else {
                    return Err(parse_err(line, "malformed edge line"));
                };
                let u = parse_id(a, line, Some(nv))?;
                let v = parse_id(b, line, Some(nv))?;
                if u == v {
                    return Err(parse_err(line, format!("self-loop on vertex {}", u + 1)));
                }
                edges.push((u, v));
            }
            Some(other) => return Err(parse_err(line, format!("unknown line type {other:?}"))),
        }
    }
    let n = n.ok_or_else(|| parse_err(1, "missing `p edge` header"))?;
    Graph::from_edges(n, edges)
}

pub fn write_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

/// One 1-indexed vertex id per line; blank lines and `c` comments are ignored.
pub fn parse_modulator(text: &str, n: usize) -> Result<VertexSet> {
    let mut set = VertexSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        for tok in t.split_whitespace() {
            set.insert(parse_id(tok, idx + 1, Some(n))?);
        }
    }
    Ok(set)
}

pub fn write_modulator(set: &VertexSet) -> String {
    set.iter().map(|v| format!("{}\n", v + 1)).collect()
}

/// One clique per line, space-separated 1-indexed ids.
pub fn parse_cover(text: &str, n: usize) -> Result<CliqueCover> {
    let mut parts = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        let part = t
            .split_whitespace()
            .map(|tok| parse_id(tok, idx + 1, Some(n)))
            .collect::<Result<VertexSet>>()?;
        parts.push(part);
    }
    Ok(CliqueCover { parts })
}

pub fn write_cover(cover: &CliqueCover) -> String {
    let mut out = String::new();
    for part in &cover.parts {
        let ids: Vec<String> = part.iter().map(|v| (v + 1).to_string()).collect();
        out.push_str(&ids.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_graph() {
        let g = parse_dimacs("p edge 2 1\ne 1 2\n").unwrap();
        assert_eq!(g, Graph::complete(2));
    }

    #[test]
    fn triangle_with_comments() {
        let g = parse_dimacs("c a triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
        assert_eq!(g, Graph::complete(3));
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = parse_dimacs("p edge 3 2\ne 1 2\ne 1 2\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn errors_name_the_line() {
        let err = parse_dimacs("p edge 2 1\ne 1 3\n").unwrap_err();
        assert!(matches!(err, CvcError::Parse { line: 2, .. }), "{err}");
        let err = parse_dimacs("p edge 2 1\n\ne 2 2\n").unwrap_err();
        assert!(matches!(err, CvcError::Parse { line: 3, .. }), "{err}");
        let err = parse_dimacs("p edge two 1\n").unwrap_err();
        assert!(matches!(err, CvcError::Parse { line: 1, .. }), "{err}");
        assert!(parse_dimacs("e 1 2\n").is_err());
        assert!(parse_dimacs("p edge 3\n").is_err());
    }

    #[test]
    fn dimacs_round_trip() {
        let g = Graph::cycle(5);
        assert_eq!(parse_dimacs(&write_dimacs(&g)).unwrap(), g);
    }

    #[test]
    fn side_files() {
        let s = parse_modulator("3\n1\n\n", 4).unwrap();
        assert_eq!(s, VertexSet::from([0, 2]));
        assert_eq!(write_modulator(&s), "1\n3\n");
        assert!(parse_modulator("5\n", 4).is_err());
        let cover = parse_cover("1 2\n3\n", 3).unwrap();
        assert_eq!(
            cover.parts,
            vec![VertexSet::from([0, 1]), VertexSet::from([2])]
        );
        assert_eq!(write_cover(&cover), "1 2\n3\n");
    }
}
