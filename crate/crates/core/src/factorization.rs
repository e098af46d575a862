use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{KgError, Result};
use crate::report::VerificationReport;
use crate::skeleton::Skeleton;

/// One commuting square: the bicolored words `left` and `right` name the same
/// morphism. Words are in traversal order (first edge traversed first) and the
/// two words use the same pair of colors in opposite order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationSquare {
    pub left: (usize, usize),
    pub right: (usize, usize),
}

/// Lookup from a composable bicolored word to its color-swapped partner.
///
/// Keys and values are edge-id pairs in traversal order. The table is stored
/// symmetrically: each square contributes both directions.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationTable {
    pub squares: Vec<FactorizationSquare>,
    swap: BTreeMap<(usize, usize), (usize, usize)>,
}

fn word_name(s: &Skeleton, w: (usize, usize)) -> (String, String) {
    (s.edge(w.0).display(s), s.edge(w.1).display(s))
}

impl FactorizationTable {
    /// Builds the table from a square list, rejecting duplicates and words
    /// covered by more than one square.
    pub fn from_squares(skeleton: &Skeleton, squares: Vec<FactorizationSquare>) -> Result<Self> {
        let mut swap = BTreeMap::new();
        for sq in &squares {
            for (a, b) in [(sq.left, sq.right), (sq.right, sq.left)] {
                let ea = skeleton.edge(a.0);
                let eb = skeleton.edge(a.1);
                if ea.color == eb.color {
                    let (f, s) = word_name(skeleton, a);
                    return Err(KgError::Structural(format!(
                        "square side ({f}, {s}) is not bicolored"
                    )));
                }
                if ea.range != eb.source {
                    return Err(KgError::NotComposable {
                        position: 1,
                        left: ea.display(skeleton),
                        left_range: skeleton.vertices[ea.range - 1].label.clone(),
                        right: eb.display(skeleton),
                        right_source: skeleton.vertices[eb.source - 1].label.clone(),
                    });
                }
                if let Some(prev) = swap.insert(a, b) {
                    let (f, s) = word_name(skeleton, a);
                    if prev != b {
                        return Err(KgError::AmbiguousTable { first: f, second: s, count: 2 });
                    }
                    return Err(KgError::Structural(format!(
                        "duplicate square for the word ({f}, {s})"
                    )));
                }
            }
        }
        // Swapped sides must name the same morphism.
        for sq in &squares {
            let (l0, l1) = (skeleton.edge(sq.left.0), skeleton.edge(sq.left.1));
            let (r0, r1) = (skeleton.edge(sq.right.0), skeleton.edge(sq.right.1));
            if l0.source != r0.source || l1.range != r1.range {
                let (f, s) = word_name(skeleton, sq.left);
                return Err(KgError::Structural(format!(
                    "square sides ({f}, {s}) and its partner do not share endpoints"
                )));
            }
            if l0.color != r1.color || l1.color != r0.color {
                let (f, s) = word_name(skeleton, sq.left);
                return Err(KgError::Structural(format!(
                    "square for ({f}, {s}) does not swap the color pair"
                )));
            }
        }
        Ok(Self { squares, swap })
    }

    /// The color-swapped partner of the composable bicolored word `(a, b)`.
    pub fn swap(&self, skeleton: &Skeleton, a: usize, b: usize) -> Result<(usize, usize)> {
        self.swap.get(&(a, b)).copied().ok_or_else(|| {
            let (f, s) = word_name(skeleton, (a, b));
            KgError::IncompleteTable(f, s)
        })
    }

    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }
}

/// A validated rank-k graph: skeleton plus unique-factorization data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KGraph {
    pub skeleton: Skeleton,
    pub table: FactorizationTable,
}

impl KGraph {
    /// Validates the skeleton, the table and (for rank >= 3) cube
    /// consistency, then assembles the graph.
    pub fn new(skeleton: Skeleton, table: FactorizationTable) -> Result<Self> {
        skeleton.check_well_formed()?;
        let g = KGraph { skeleton, table };
        let report = g.validate_factorization()?;
        if !report.all_pass() {
            let failing: Vec<&str> = report
                .checks
                .iter()
                .filter(|c| c.status == crate::report::Status::Fail)
                .map(|c| c.name.as_str())
                .collect();
            return Err(KgError::Structural(format!(
                "factorization validation failed: {failing:?}"
            )));
        }
        if g.skeleton.k >= 3 {
            g.check_cubes()?;
        }
        Ok(g)
    }

    /// All composable bicolored words (a color-`c1` edge followed by a
    /// color-`c2` edge) in traversal order.
    fn bicolored_words(&self, c1: usize, c2: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in &self.skeleton.edges {
            if a.color != c1 {
                continue;
            }
            for b in &self.skeleton.edges {
                if b.color == c2 && b.source == a.range {
                    out.push((a.id, b.id));
                }
            }
        }
        out
    }

    /// Checks the table covers every composable bicolored word exactly once
    /// and that for each color pair the swap is a bijection.
    pub fn validate_factorization(&self) -> Result<VerificationReport> {
        let mut report = VerificationReport::new();
        let k = self.skeleton.k;
        for c1 in 1..=k {
            for c2 in (c1 + 1)..=k {
                let fwd = self.bicolored_words(c1, c2);
                let bwd = self.bicolored_words(c2, c1);
                let mut missing = Vec::new();
                let mut images = Vec::new();
                for &w in &fwd {
                    match self.table.swap.get(&w) {
                        Some(&img) => images.push(img),
                        None => missing.push(word_name(&self.skeleton, w)),
                    }
                }
                report.structural(
                    format!("table_complete_{c1}_{c2}"),
                    format!("words={} missing={missing:?}", fwd.len()),
                    missing.is_empty(),
                );
                images.sort_unstable();
                let before = images.len();
                images.dedup();
                let injective = images.len() == before;
                let mut sorted_bwd = bwd.clone();
                sorted_bwd.sort_unstable();
                let surjective = images == sorted_bwd;
                report.structural(
                    format!("table_bijective_{c1}_{c2}"),
                    format!("forward={} backward={}", fwd.len(), bwd.len()),
                    injective && surjective,
                );
                // Round trip: swapping twice is the identity.
                let involutive = fwd.iter().all(|&w| {
                    self.table
                        .swap
                        .get(&w)
                        .and_then(|img| self.table.swap.get(img))
                        == Some(&w)
                });
                report.structural(
                    format!("table_involutive_{c1}_{c2}"),
                    format!("words={}", fwd.len()),
                    involutive,
                );
            }
        }
        Ok(report)
    }

    /// Applies the square at positions (i, i+1) of an edge-id word.
    fn swap_at(&self, word: &mut [usize], i: usize) -> Result<()> {
        let (a, b) = self.table.swap(&self.skeleton, word[i], word[i + 1])?;
        word[i] = a;
        word[i + 1] = b;
        Ok(())
    }

    /// Verifies that for every tricolored composable word the two hexagon
    /// routes through adjacent swaps agree. Required for rank >= 3.
    pub fn check_cubes(&self) -> Result<()> {
        for f in &self.skeleton.edges {
            for g in &self.skeleton.edges {
                if g.source != f.range || g.color == f.color {
                    continue;
                }
                for h in &self.skeleton.edges {
                    if h.source != g.range || h.color == f.color || h.color == g.color {
                        continue;
                    }
                    let start = [f.id, g.id, h.id];
                    let mut via_front = start;
                    self.swap_at(&mut via_front, 0)?;
                    self.swap_at(&mut via_front, 1)?;
                    self.swap_at(&mut via_front, 0)?;
                    let mut via_back = start;
                    self.swap_at(&mut via_back, 1)?;
                    self.swap_at(&mut via_back, 0)?;
                    self.swap_at(&mut via_back, 1)?;
                    if via_front != via_back {
                        let names: Vec<String> = start
                            .iter()
                            .map(|&id| self.skeleton.edge(id).display(&self.skeleton))
                            .collect();
                        return Err(KgError::CubeInconsistent(names.join(", ")));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skeleton::{Edge, VertexId};

    /// One vertex, two loops per color; squares pair loops by `pairing`.
    /// `pairing[(i, j)]` maps the loop choice of a color-(i+1) color-(j+1)
    /// word to its swapped word.
    fn two_loop_graph(k: usize, pairing: &dyn Fn(usize, usize, usize, usize) -> (usize, usize)) -> Result<KGraph> {
        let mut edges = Vec::new();
        for c in 1..=k {
            for _ in 0..2 {
                edges.push(Edge {
                    id: edges.len() + 1,
                    color: c,
                    source: 1,
                    range: 1,
                    label: None,
                });
            }
        }
        let skeleton = Skeleton {
            k,
            vertices: vec![VertexId { index: 1, label: "v".into() }],
            edges,
        };
        let loop_id = |c: usize, n: usize| (c - 1) * 2 + n + 1;
        let mut squares = Vec::new();
        for c1 in 1..=k {
            for c2 in (c1 + 1)..=k {
                for a in 0..2 {
                    for b in 0..2 {
                        let (b2, a2) = pairing(c1, c2, a, b);
                        squares.push(FactorizationSquare {
                            left: (loop_id(c1, a), loop_id(c2, b)),
                            right: (loop_id(c2, b2), loop_id(c1, a2)),
                        });
                    }
                }
            }
        }
        let table = FactorizationTable::from_squares(&skeleton, squares)?;
        KGraph::new(skeleton, table)
    }

    #[test]
    fn identity_pairing_passes_cube_check() {
        let g = two_loop_graph(3, &|_, _, a, b| (b, a)).unwrap();
        assert_eq!(g.table.len(), 12);
    }

    #[test]
    fn some_three_color_pairing_fails_cube_check() {
        // Coordinate swap on (1,2) plus an xor-mixing (1,3) pairing makes the
        // two hexagon routes disagree on words with distinct loop choices.
        let r = two_loop_graph(3, &|c1, c2, a, b| match (c1, c2) {
            (1, 2) => (a, b),
            (1, 3) => (a ^ b, a),
            _ => (b, a),
        });
        assert!(matches!(r, Err(KgError::CubeInconsistent(_))), "{r:?}");
    }

    #[test]
    fn incomplete_table_is_rejected() {
        let skeleton = Skeleton {
            k: 2,
            vertices: vec![VertexId { index: 1, label: "v".into() }],
            edges: vec![
                Edge { id: 1, color: 1, source: 1, range: 1, label: None },
                Edge { id: 2, color: 2, source: 1, range: 1, label: None },
            ],
        };
        let table = FactorizationTable::from_squares(&skeleton, vec![]).unwrap();
        let g = KGraph { skeleton, table };
        let report = g.validate_factorization().unwrap();
        assert!(!report.all_pass());
    }

    #[test]
    fn bijectivity_and_involution_hold_for_valid_table() {
        let g = two_loop_graph(2, &|_, _, a, b| (1 - b, 1 - a)).unwrap();
        let report = g.validate_factorization().unwrap();
        assert!(report.all_pass(), "{report:?}");
    }
}
