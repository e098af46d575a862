use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{KgError, Result};
use crate::report::VerificationReport;

/// A vertex of the skeleton: 1-based contiguous index plus a unique label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexId {
    pub index: usize,
    pub label: String,
}

/// A colored directed edge. `color` is 1-based; color 1 edges come first in
/// path normal forms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub id: usize,
    pub color: usize,
    pub source: usize,
    pub range: usize,
    pub label: Option<String>,
}

impl Edge {
    pub fn display(&self, s: &Skeleton) -> String {
        let name = self.label.clone().unwrap_or_else(|| format!("e{}", self.id));
        format!(
            "{}:{}->{}",
            name,
            s.vertices[self.source - 1].label,
            s.vertices[self.range - 1].label
        )
    }
}

/// The colored directed multigraph underlying a k-graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skeleton {
    pub k: usize,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<Edge>,
}

/// Dense integer matrix used for transition-matrix arithmetic.
pub type IntMatrix = Vec<Vec<u64>>;

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let mut out = vec![vec![0; n]; n];
    for i in 0..n {
        for l in 0..n {
            if a[i][l] != 0 {
                for j in 0..n {
                    out[i][j] += a[i][l] * b[l][j];
                }
            }
        }
    }
    out
}

/// Conjugates `m` by the permutation `perm` (`perm[i]` = image of row/column `i`).
pub fn mat_permute(m: &IntMatrix, perm: &[usize]) -> IntMatrix {
    let n = m.len();
    let mut out = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            out[perm[i]][perm[j]] = m[i][j];
        }
    }
    out
}

impl Skeleton {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_by_label(&self, label: &str) -> Result<&VertexId> {
        self.vertices
            .iter()
            .find(|v| v.label == label)
            .ok_or_else(|| KgError::UnknownVertex(label.to_string()))
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id - 1]
    }

    /// Checks well-formedness: contiguous 1-based vertex indices, unique
    /// labels, edge endpoints and colors in range, contiguous edge ids.
    pub fn check_well_formed(&self) -> Result<()> {
        if self.k == 0 {
            return Err(KgError::Structural("rank must be at least 1".into()));
        }
        let mut labels = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if v.index != i + 1 {
                return Err(KgError::Structural(format!(
                    "vertex indices must be contiguous from 1; found {} at position {}",
                    v.index,
                    i + 1
                )));
            }
            if labels.insert(v.label.clone(), v.index).is_some() {
                return Err(KgError::Structural(format!("duplicate vertex label `{}`", v.label)));
            }
        }
        let nv = self.vertices.len();
        let mut bad = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.id != i + 1 {
                return Err(KgError::Structural(format!(
                    "edge ids must be contiguous from 1; found {} at position {}",
                    e.id,
                    i + 1
                )));
            }
            if e.color == 0 || e.color > self.k {
                return Err(KgError::Structural(format!(
                    "edge {} has color {} outside 1..={}",
                    e.id, e.color, self.k
                )));
            }
            if e.source == 0 || e.source > nv || e.range == 0 || e.range > nv {
                bad.push(e.id);
            }
        }
        if !bad.is_empty() {
            return Err(KgError::Structural(format!(
                "edges with endpoints outside the vertex set: {bad:?}"
            )));
        }
        Ok(())
    }

    /// In-adjacency count matrix: entry (i,j) counts edges of `color` with
    /// source j and range i (1-based color, 0-based matrix indices).
    pub fn transition_matrix(&self, color: usize) -> IntMatrix {
        let n = self.vertex_count();
        let mut m = vec![vec![0u64; n]; n];
        for e in &self.edges {
            if e.color == color {
                m[e.range - 1][e.source - 1] += 1;
            }
        }
        m
    }

    /// Reports row-finiteness, per-color no-source/no-sink vertices and local
    /// convexity.
    pub fn validate(&self) -> Result<VerificationReport> {
        self.check_well_formed()?;
        let mut report = VerificationReport::new();

        // Finite graphs are row-finite by definition.
        report.structural("row_finite", format!("V={} E={}", self.vertex_count(), self.edges.len()), true);

        let mut emits = vec![vec![false; self.k]; self.vertex_count()];
        let mut receives = vec![vec![false; self.k]; self.vertex_count()];
        for e in &self.edges {
            emits[e.source - 1][e.color - 1] = true;
            receives[e.range - 1][e.color - 1] = true;
        }
        for c in 0..self.k {
            let no_source: Vec<&str> = self
                .vertices
                .iter()
                .filter(|v| !emits[v.index - 1][c])
                .map(|v| v.label.as_str())
                .collect();
            let no_sink: Vec<&str> = self
                .vertices
                .iter()
                .filter(|v| !receives[v.index - 1][c])
                .map(|v| v.label.as_str())
                .collect();
            report.structural(
                format!("every_vertex_emits_color_{}", c + 1),
                format!("missing: {no_source:?}"),
                no_source.is_empty(),
            );
            report.structural(
                format!("every_vertex_receives_color_{}", c + 1),
                format!("missing: {no_sink:?}"),
                no_sink.is_empty(),
            );
        }

        // Local convexity: whenever edges f (color i) and g (color j != i)
        // share a range, s(f) emits color j and s(g) emits color i.
        let mut lc_violations = Vec::new();
        for f in &self.edges {
            for g in &self.edges {
                if f.color != g.color && f.range == g.range {
                    if !emits[f.source - 1][g.color - 1] {
                        lc_violations.push(format!(
                            "{} lacks color-{} continuation",
                            f.display(self),
                            g.color
                        ));
                    }
                }
            }
        }
        lc_violations.sort();
        lc_violations.dedup();
        report.structural(
            "locally_convex",
            format!("violations: {lc_violations:?}"),
            lc_violations.is_empty(),
        );
        Ok(report)
    }

    /// Asserts that all pairs of transition matrices commute; reports the
    /// product matrix of the first color pair.
    pub fn check_commuting(&self) -> Result<VerificationReport> {
        let mut report = VerificationReport::new();
        for c1 in 1..=self.k {
            for c2 in (c1 + 1)..=self.k {
                let a = self.transition_matrix(c1);
                let b = self.transition_matrix(c2);
                let ab = mat_mul(&a, &b);
                let ba = mat_mul(&b, &a);
                let mismatch = (0..a.len())
                    .flat_map(|i| (0..a.len()).map(move |j| (i, j)))
                    .find(|&(i, j)| ab[i][j] != ba[i][j]);
                match mismatch {
                    None => {
                        report.structural(
                            format!("commuting_{c1}_{c2}"),
                            format!("product={ab:?}"),
                            true,
                        );
                    }
                    Some((i, j)) => {
                        report.structural(
                            format!("commuting_{c1}_{c2}"),
                            format!(
                                "mismatch at ({},{}): {} vs {}",
                                i + 1,
                                j + 1,
                                ab[i][j],
                                ba[i][j]
                            ),
                            false,
                        );
                    }
                }
            }
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn one_vertex_one_loop_per_color(k: usize) -> Skeleton {
        Skeleton {
            k,
            vertices: vec![VertexId { index: 1, label: "v".into() }],
            edges: (1..=k)
                .map(|c| Edge { id: c, color: c, source: 1, range: 1, label: None })
                .collect(),
        }
    }

    #[test]
    fn one_vertex_graph_passes_all_checks() {
        let s = one_vertex_one_loop_per_color(2);
        let report = s.validate().unwrap();
        assert!(report.all_pass(), "{report:?}");
        assert!(s.check_commuting().unwrap().all_pass());
        assert_eq!(s.transition_matrix(1), vec![vec![1]]);
    }

    #[test]
    fn malformed_endpoint_is_a_structural_error() {
        let mut s = one_vertex_one_loop_per_color(2);
        s.edges[0].range = 7;
        let err = s.validate().unwrap_err();
        assert!(matches!(err, KgError::Structural(_)), "{err}");
    }
}
