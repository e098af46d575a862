use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::degree::DegreeVector;
use crate::error::{KgError, Result};
use crate::factorization::KGraph;

/// A morphism represented as an edge-id word in traversal order. `source`
/// carries the base vertex so identity morphisms are representable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Path {
    pub source: usize,
    pub edges: Vec<usize>,
}

impl Path {
    pub fn identity(vertex: usize) -> Self {
        Path { source: vertex, edges: Vec::new() }
    }

    pub fn range(&self, g: &KGraph) -> usize {
        self.edges
            .last()
            .map(|&id| g.skeleton.edge(id).range)
            .unwrap_or(self.source)
    }

    pub fn degree(&self, g: &KGraph) -> DegreeVector {
        let mut d = DegreeVector::zero(g.skeleton.k);
        for &id in &self.edges {
            d.0[g.skeleton.edge(id).color - 1] += 1;
        }
        d
    }

    /// Checks consecutive edges compose and the first edge starts at `source`.
    pub fn check_composable(&self, g: &KGraph) -> Result<()> {
        let mut at = self.source;
        for (i, &id) in self.edges.iter().enumerate() {
            let e = g.skeleton.edge(id);
            if e.source != at {
                let left = if i == 0 {
                    format!("id@{}", g.skeleton.vertices[self.source - 1].label)
                } else {
                    g.skeleton.edge(self.edges[i - 1]).display(&g.skeleton)
                };
                return Err(KgError::NotComposable {
                    position: i,
                    left,
                    left_range: g.skeleton.vertices[at - 1].label.clone(),
                    right: e.display(&g.skeleton),
                    right_source: g.skeleton.vertices[e.source - 1].label.clone(),
                });
            }
            at = e.range;
        }
        Ok(())
    }

    /// Rewrites to the unique color-sorted word: all color-1 edges first,
    /// then color 2 and so on. Swaps the leftmost descent each pass; each
    /// swap removes one color inversion, so this terminates.
    pub fn normal_form(&self, g: &KGraph) -> Result<Path> {
        self.check_composable(g)?;
        let mut word = self.edges.clone();
        loop {
            let colors: Vec<usize> =
                word.iter().map(|&id| g.skeleton.edge(id).color).collect();
            let descent = (0..word.len().saturating_sub(1))
                .find(|&i| colors[i] > colors[i + 1]);
            match descent {
                Some(i) => {
                    let (a, b) = g.table.swap(&g.skeleton, word[i], word[i + 1])?;
                    word[i] = a;
                    word[i + 1] = b;
                }
                None => return Ok(Path { source: self.source, edges: word }),
            }
        }
    }

    /// Splits the morphism as `head * tail` with `degree(head) == m`. The
    /// required edges are peeled to the front one color at a time using the
    /// squares, so both parts name the original morphism's factors.
    pub fn factor(&self, g: &KGraph, m: &DegreeVector) -> Result<(Path, Path)> {
        let d = self.degree(g);
        if m.rank() != d.rank() || !m.leq(&d) {
            return Err(KgError::Degree(format!(
                "cannot split degree {m} from a path of degree {d}"
            )));
        }
        let mut word = self.edges.clone();
        let mut done = 0usize;
        for c in 1..=g.skeleton.k {
            for _ in 0..m[c - 1] {
                let pos = (done..word.len())
                    .find(|&i| g.skeleton.edge(word[i]).color == c)
                    .expect("degree accounting guarantees an edge of this color");
                for i in (done..pos).rev() {
                    let (a, b) = g.table.swap(&g.skeleton, word[i], word[i + 1])?;
                    word[i] = a;
                    word[i + 1] = b;
                }
                done += 1;
            }
        }
        let tail_edges = word.split_off(done);
        let head = Path { source: self.source, edges: word };
        let tail = Path { source: head.range(g), edges: tail_edges };
        Ok((head, tail))
    }

    pub fn compose(&self, g: &KGraph, other: &Path) -> Result<Path> {
        let joined = Path {
            source: self.source,
            edges: self.edges.iter().chain(&other.edges).copied().collect(),
        };
        joined.check_composable(g)?;
        Ok(joined)
    }

    pub fn display(&self, g: &KGraph) -> String {
        if self.edges.is_empty() {
            return format!("id@{}", g.skeleton.vertices[self.source - 1].label);
        }
        self.edges
            .iter()
            .map(|&id| {
                let e = g.skeleton.edge(id);
                e.label.clone().unwrap_or_else(|| format!("e{id}"))
            })
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// All morphisms of degree `m` from `from` to `to`, each as its color-sorted
/// normal form. Distinct color-sorted words are distinct morphisms.
pub fn enumerate_paths(g: &KGraph, from: usize, to: usize, m: &DegreeVector) -> Result<Vec<Path>> {
    if m.rank() != g.skeleton.k {
        return Err(KgError::Degree(format!(
            "degree {m} has rank {} but the graph has rank {}",
            m.rank(),
            g.skeleton.k
        )));
    }
    let mut out = Vec::new();
    let mut word = Vec::new();
    search(g, from, to, m, 1, 0, &mut word, &mut out);
    Ok(out)
}

fn search(
    g: &KGraph,
    at: usize,
    to: usize,
    m: &DegreeVector,
    color: usize,
    used_in_color: u32,
    word: &mut Vec<usize>,
    out: &mut Vec<Path>,
) {
    if color > g.skeleton.k {
        if at == to {
            let source = word
                .first()
                .map(|&id| g.skeleton.edge(id).source)
                .unwrap_or(to);
            out.push(Path { source, edges: word.clone() });
        }
        return;
    }
    if used_in_color == m[color - 1] {
        search(g, at, to, m, color + 1, 0, word, out);
        return;
    }
    for e in &g.skeleton.edges {
        if e.color == color && e.source == at {
            word.push(e.id);
            search(g, e.range, to, m, color, used_in_color + 1, word, out);
            word.pop();
        }
    }
}

/// Explores every word reachable from `p` by single square applications and
/// checks all of them normalize to the same word. Returns the set size.
pub fn check_confluence(g: &KGraph, p: &Path) -> Result<usize> {
    p.check_composable(g)?;
    let target = p.normal_form(g)?.edges;
    let mut seen = BTreeSet::new();
    let mut stack = vec![p.edges.clone()];
    while let Some(word) = stack.pop() {
        if !seen.insert(word.clone()) {
            continue;
        }
        let q = Path { source: p.source, edges: word.clone() };
        if q.normal_form(g)?.edges != target {
            return Err(KgError::Structural(format!(
                "word {:?} normalizes differently from {:?}",
                word, p.edges
            )));
        }
        for i in 0..word.len().saturating_sub(1) {
            if g.skeleton.edge(word[i]).color != g.skeleton.edge(word[i + 1]).color {
                let (a, b) = g.table.swap(&g.skeleton, word[i], word[i + 1])?;
                let mut next = word.clone();
                next[i] = a;
                next[i + 1] = b;
                stack.push(next);
            }
        }
    }
    Ok(seen.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::{FactorizationSquare, FactorizationTable};
    use crate::skeleton::{Edge, Skeleton, VertexId};

    fn single_loop_graph() -> KGraph {
        let skeleton = Skeleton {
            k: 2,
            vertices: vec![VertexId { index: 1, label: "v".into() }],
            edges: vec![
                Edge { id: 1, color: 1, source: 1, range: 1, label: Some("a".into()) },
                Edge { id: 2, color: 2, source: 1, range: 1, label: Some("x".into()) },
            ],
        };
        let squares = vec![FactorizationSquare { left: (1, 2), right: (2, 1) }];
        let table = FactorizationTable::from_squares(&skeleton, squares).unwrap();
        KGraph::new(skeleton, table).unwrap()
    }

    #[test]
    fn normal_form_sorts_colors() {
        let g = single_loop_graph();
        let p = Path { source: 1, edges: vec![2, 1, 2, 1] };
        let nf = p.normal_form(&g).unwrap();
        assert_eq!(nf.edges, vec![1, 1, 2, 2]);
        assert_eq!(nf.degree(&g), DegreeVector(vec![2, 2]));
    }

    #[test]
    fn factor_splits_by_degree() {
        let g = single_loop_graph();
        let p = Path { source: 1, edges: vec![2, 1, 2] };
        let (head, tail) = p.factor(&g, &DegreeVector(vec![0, 1])).unwrap();
        assert_eq!(head.degree(&g), DegreeVector(vec![0, 1]));
        assert_eq!(tail.degree(&g), DegreeVector(vec![1, 1]));
        let rejoined = head.compose(&g, &tail).unwrap();
        assert_eq!(rejoined.normal_form(&g).unwrap(), p.normal_form(&g).unwrap());
    }

    #[test]
    fn enumerate_counts_match_transition_matrix_powers() {
        let g = single_loop_graph();
        let paths = enumerate_paths(&g, 1, 1, &DegreeVector(vec![2, 1])).unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].edges, vec![1, 1, 2]);
    }

    #[test]
    fn confluence_on_a_small_word() {
        let g = single_loop_graph();
        let p = Path { source: 1, edges: vec![2, 1, 2, 1] };
        let reachable = check_confluence(&g, &p).unwrap();
        assert_eq!(reachable, 6);
    }

    #[test]
    fn non_composable_word_reports_position() {
        let skeleton = Skeleton {
            k: 1,
            vertices: vec![
                VertexId { index: 1, label: "u".into() },
                VertexId { index: 2, label: "w".into() },
            ],
            edges: vec![
                Edge { id: 1, color: 1, source: 1, range: 2, label: None },
                Edge { id: 2, color: 1, source: 1, range: 1, label: None },
                Edge { id: 3, color: 1, source: 2, range: 1, label: None },
            ],
        };
        let table = FactorizationTable::from_squares(&skeleton, vec![]).unwrap();
        let g = KGraph { skeleton, table };
        let p = Path { source: 1, edges: vec![1, 2] };
        match p.check_composable(&g) {
            Err(KgError::NotComposable { position, .. }) => assert_eq!(position, 1),
            other => panic!("expected composability error, got {other:?}"),
        }
    }
}
