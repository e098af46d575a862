use crate::error::{KgError, Result};
use crate::factorization::{FactorizationSquare, FactorizationTable, KGraph};
use crate::skeleton::{Edge, IntMatrix, Skeleton, VertexId};

/// Vertex labels in index order. The two letters name the pair of edge labels
/// whose loops sit at the vertex.
pub const VERTEX_LABELS: [&str; 6] = ["CZ", "BZ", "CY", "BX", "AY", "AX"];

pub const RED: usize = 1;
pub const BLUE: usize = 2;

/// (label, source, range) triples; vertices by 1-based index.
const RED_EDGES: [(&str, usize, usize); 12] = [
    ("C", 1, 1),
    ("B", 2, 2),
    ("C", 3, 3),
    ("B", 4, 4),
    ("A", 5, 5),
    ("A", 6, 6),
    ("B", 1, 2),
    ("B", 3, 4),
    ("A", 2, 5),
    ("A", 3, 5),
    ("A", 1, 5),
    ("A", 4, 6),
];

const BLUE_EDGES: [(&str, usize, usize); 12] = [
    ("Z", 1, 1),
    ("Z", 2, 2),
    ("Y", 3, 3),
    ("X", 4, 4),
    ("Y", 5, 5),
    ("X", 6, 6),
    ("Y", 1, 3),
    ("X", 2, 4),
    ("X", 3, 4),
    ("Y", 2, 5),
    ("X", 1, 4),
    ("X", 5, 6),
];

/// Disambiguation rules for blue-then-red words with more than one partner.
/// Entries are ((blue label, red label), (red label, blue label)), both sides
/// in traversal order.
const LABEL_RULES: [((&str, &str), (&str, &str)); 4] = [
    (("Z", "A"), ("B", "Y")),
    (("Y", "A"), ("A", "Y")),
    (("Y", "B"), ("C", "X")),
    (("X", "B"), ("B", "X")),
];

fn skeleton() -> Skeleton {
    let vertices = VERTEX_LABELS
        .iter()
        .enumerate()
        .map(|(i, &l)| VertexId { index: i + 1, label: l.to_string() })
        .collect();
    let mut edges = Vec::with_capacity(24);
    for &(label, source, range) in &RED_EDGES {
        edges.push(Edge {
            id: edges.len() + 1,
            color: RED,
            source,
            range,
            label: Some(label.to_string()),
        });
    }
    for &(label, source, range) in &BLUE_EDGES {
        edges.push(Edge {
            id: edges.len() + 1,
            color: BLUE,
            source,
            range,
            label: Some(label.to_string()),
        });
    }
    Skeleton { k: 2, vertices, edges }
}

/// Builds the validated 2-graph. Squares are derived from the skeleton: each
/// composable blue-then-red word is paired with the red-then-blue word
/// sharing its endpoints, using the label rules where endpoints alone leave
/// more than one choice.
pub fn build() -> Result<KGraph> {
    let s = skeleton();
    let label = |id: usize| s.edge(id).label.clone().unwrap_or_default();
    let mut squares = Vec::new();
    for b in &s.edges {
        if b.color != BLUE {
            continue;
        }
        for r in &s.edges {
            if r.color != RED || r.source != b.range {
                continue;
            }
            let candidates: Vec<(usize, usize)> = s
                .edges
                .iter()
                .filter(|r2| r2.color == RED && r2.source == b.source)
                .flat_map(|r2| {
                    s.edges
                        .iter()
                        .filter(|b2| {
                            b2.color == BLUE && b2.source == r2.range && b2.range == r.range
                        })
                        .map(move |b2| (r2.id, b2.id))
                })
                .collect();
            let chosen = match candidates.as_slice() {
                [only] => *only,
                many => {
                    let key = (label(b.id), label(r.id));
                    let rule = LABEL_RULES
                        .iter()
                        .find(|(l, _)| (l.0.to_string(), l.1.to_string()) == key)
                        .ok_or_else(|| {
                            KgError::AmbiguousTable {
                                first: b.display(&s),
                                second: r.display(&s),
                                count: many.len() as u32,
                            }
                        })?;
                    let matched: Vec<(usize, usize)> = many
                        .iter()
                        .copied()
                        .filter(|&(r2, b2)| {
                            (label(r2), label(b2))
                                == (rule.1 .0.to_string(), rule.1 .1.to_string())
                        })
                        .collect();
                    match matched.as_slice() {
                        [only] => *only,
                        _ => {
                            return Err(KgError::AmbiguousTable {
                                first: b.display(&s),
                                second: r.display(&s),
                                count: matched.len() as u32,
                            })
                        }
                    }
                }
            };
            squares.push(FactorizationSquare { left: (b.id, r.id), right: chosen });
        }
    }
    let table = FactorizationTable::from_squares(&s, squares)?;
    KGraph::new(s, table)
}

/// Published transition matrices and their product, in the published vertex
/// order. That order swaps vertices 2 and 3 relative to [`VERTEX_LABELS`] and
/// swaps which color each matrix counts.
pub fn reference_matrices() -> (IntMatrix, IntMatrix, IntMatrix) {
    let to = |rows: [[u64; 6]; 6]| rows.iter().map(|r| r.to_vec()).collect::<IntMatrix>();
    let m_r = to([
        [1, 0, 0, 0, 0, 0],
        [1, 1, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0],
        [1, 1, 1, 1, 0, 0],
        [0, 0, 1, 0, 1, 0],
        [0, 0, 0, 0, 1, 1],
    ]);
    let m_b = to([
        [1, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0],
        [1, 0, 1, 0, 0, 0],
        [0, 1, 0, 1, 0, 0],
        [1, 1, 1, 0, 1, 0],
        [0, 0, 0, 1, 0, 1],
    ]);
    let product = to([
        [1, 0, 0, 0, 0, 0],
        [1, 1, 0, 0, 0, 0],
        [1, 0, 1, 0, 0, 0],
        [2, 2, 1, 1, 0, 0],
        [2, 1, 2, 0, 1, 0],
        [1, 1, 1, 1, 1, 1],
    ]);
    (m_r, m_b, product)
}

/// The permutation mapping this crate's vertex order to the published order.
pub fn reference_permutation() -> Vec<usize> {
    vec![0, 2, 1, 3, 4, 5]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree::DegreeVector;
    use crate::path::enumerate_paths;
    use crate::skeleton::{mat_mul, mat_permute};

    #[test]
    fn graph_builds_with_23_squares() {
        let g = build().unwrap();
        assert_eq!(g.skeleton.vertex_count(), 6);
        assert_eq!(g.skeleton.edges.len(), 24);
        assert_eq!(g.table.len(), 23);
        assert!(g.validate_factorization().unwrap().all_pass());
        assert!(g.skeleton.validate().unwrap().all_pass());
        assert!(g.skeleton.check_commuting().unwrap().all_pass());
    }

    #[test]
    fn transition_matrices_match_published_ones() {
        let g = build().unwrap();
        let red = g.skeleton.transition_matrix(RED);
        let blue = g.skeleton.transition_matrix(BLUE);
        let perm = reference_permutation();
        let (m_r, m_b, product) = reference_matrices();
        assert_eq!(mat_permute(&blue, &perm), m_r);
        assert_eq!(mat_permute(&red, &perm), m_b);
        assert_eq!(mat_mul(&m_r, &m_b), product);
        assert_eq!(mat_mul(&m_b, &m_r), product);
    }

    #[test]
    fn bicolored_path_counts_match_matrix_product() {
        let g = build().unwrap();
        let red = g.skeleton.transition_matrix(RED);
        let blue = g.skeleton.transition_matrix(BLUE);
        let product = mat_mul(&red, &blue);
        let m = DegreeVector(vec![1, 1]);
        for to in 1..=6 {
            for from in 1..=6 {
                let n = enumerate_paths(&g, from, to, &m).unwrap().len() as u64;
                assert_eq!(n, product[to - 1][from - 1], "from {from} to {to}");
            }
        }
    }
}
