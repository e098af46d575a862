use std::fmt::Write as _;

use crate::error::{KgError, Result};
use crate::factorization::{FactorizationSquare, FactorizationTable, KGraph};
use crate::skeleton::{Edge, Skeleton, VertexId};

fn perr(line: usize, message: impl Into<String>) -> KgError {
    KgError::Parse { line, message: message.into() }
}

#[derive(PartialEq)]
enum Section {
    Start,
    Vertices,
    Edges,
    Squares,
}

/// Parses the text format. Sections appear in order: `RANK k`, `VERTICES`
/// (`index label` lines), `EDGES` (`id color source range [label]` lines) and
/// `SQUARES` (`e1 e2 = e3 e4` lines, edges in traversal order). `#` starts a
/// comment.
pub fn parse(text: &str) -> Result<(Skeleton, Vec<FactorizationSquare>)> {
    let mut section = Section::Start;
    let mut k = None;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut squares = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "RANK" => {
                if section != Section::Start || k.is_some() {
                    return Err(perr(ln, "RANK must appear once, before any section"));
                }
                if fields.len() != 2 {
                    return Err(perr(ln, "expected `RANK k`"));
                }
                let rank: usize = fields[1]
                    .parse()
                    .map_err(|_| perr(ln, format!("invalid rank `{}`", fields[1])))?;
                k = Some(rank);
            }
            "VERTICES" => section = Section::Vertices,
            "EDGES" => section = Section::Edges,
            "SQUARES" => section = Section::Squares,
            _ => match section {
                Section::Start => {
                    return Err(perr(ln, format!("unexpected line before any section: `{line}`")))
                }
                Section::Vertices => {
                    if fields.len() != 2 {
                        return Err(perr(ln, "expected `index label`"));
                    }
                    let index: usize = fields[0]
                        .parse()
                        .map_err(|_| perr(ln, format!("invalid vertex index `{}`", fields[0])))?;
                    vertices.push(VertexId { index, label: fields[1].to_string() });
                }
                Section::Edges => {
                    if fields.len() != 4 && fields.len() != 5 {
                        return Err(perr(ln, "expected `id color source range [label]`"));
                    }
                    let nums: Vec<usize> = fields[..4]
                        .iter()
                        .map(|f| {
                            f.parse()
                                .map_err(|_| perr(ln, format!("invalid integer `{f}`")))
                        })
                        .collect::<Result<_>>()?;
                    edges.push(Edge {
                        id: nums[0],
                        color: nums[1],
                        source: nums[2],
                        range: nums[3],
                        label: fields.get(4).map(|s| s.to_string()),
                    });
                }
                Section::Squares => {
                    if fields.len() != 5 || fields[2] != "=" {
                        return Err(perr(ln, "expected `e1 e2 = e3 e4`"));
                    }
                    let ids: Vec<usize> = [fields[0], fields[1], fields[3], fields[4]]
                        .iter()
                        .map(|f| {
                            f.parse()
                                .map_err(|_| perr(ln, format!("invalid edge id `{f}`")))
                        })
                        .collect::<Result<_>>()?;
                    squares.push(FactorizationSquare {
                        left: (ids[0], ids[1]),
                        right: (ids[2], ids[3]),
                    });
                }
            },
        }
    }
    let k = k.ok_or_else(|| perr(text.lines().count(), "missing RANK header"))?;
    Ok((Skeleton { k, vertices, edges }, squares))
}

/// Parses and fully validates a graph file.
pub fn load(text: &str) -> Result<KGraph> {
    let (skeleton, squares) = parse(text)?;
    let table = FactorizationTable::from_squares(&skeleton, squares)?;
    KGraph::new(skeleton, table)
}

/// Canonical serialization: fixed section order, squares oriented with the
/// lower color first and sorted. Parsing then re-serializing is bit-exact.
pub fn to_text(g: &KGraph) -> String {
    let mut out = String::new();
    writeln!(out, "RANK {}", g.skeleton.k).unwrap();
    writeln!(out).unwrap();
    writeln!(out, "VERTICES").unwrap();
    for v in &g.skeleton.vertices {
        writeln!(out, "{} {}", v.index, v.label).unwrap();
    }
    writeln!(out).unwrap();
    writeln!(out, "EDGES").unwrap();
    for e in &g.skeleton.edges {
        match &e.label {
            Some(l) => writeln!(out, "{} {} {} {} {}", e.id, e.color, e.source, e.range, l).unwrap(),
            None => writeln!(out, "{} {} {} {}", e.id, e.color, e.source, e.range).unwrap(),
        }
    }
    writeln!(out).unwrap();
    writeln!(out, "SQUARES").unwrap();
    let mut squares: Vec<((usize, usize), (usize, usize))> = g
        .table
        .squares
        .iter()
        .map(|sq| {
            let c_left = g.skeleton.edge(sq.left.0).color;
            let c_right = g.skeleton.edge(sq.right.0).color;
            if c_left <= c_right {
                (sq.left, sq.right)
            } else {
                (sq.right, sq.left)
            }
        })
        .collect();
    squares.sort_unstable();
    for (l, r) in squares {
        writeln!(out, "{} {} = {} {}", l.0, l.1, r.0, r.1).unwrap();
    }
    out
}
