use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::degree::DegreeVector;
use crate::error::{KgError, Result};
use crate::factorization::KGraph;
use crate::graded::{elementary, GradedOperator, TruncationParams};
use crate::path::{enumerate_paths, Path};
use crate::qdeform::hat_ops;
use crate::report::VerificationReport;
use crate::sparse::SparseMatrix;

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub type HatMap = BTreeMap<char, GradedOperator>;

/// Vertex projections and edge partial isometries derived from the labeled
/// operators of a graph.
#[derive(Debug, Clone)]
pub struct CKAssignment {
    pub graph: KGraph,
    pub vertex_projections: BTreeMap<usize, GradedOperator>,
    pub edge_isometries: BTreeMap<usize, GradedOperator>,
}

/// P_v = mm* nn* where the vertex label is the two-letter word mn.
pub fn vertex_projections(g: &KGraph, hat: &HatMap) -> Result<BTreeMap<usize, GradedOperator>> {
    let mut out = BTreeMap::new();
    for v in &g.skeleton.vertices {
        let mut chars = v.label.chars();
        let (m, n) = (chars.next(), chars.next());
        let (m, n) = match (m, n) {
            (Some(m), Some(n)) => (m, n),
            _ => {
                return Err(KgError::MissingOperator(v.label.clone()));
            }
        };
        let om = hat.get(&m).ok_or_else(|| KgError::MissingOperator(m.to_string()))?;
        let on = hat.get(&n).ok_or_else(|| KgError::MissingOperator(n.to_string()))?;
        let proj = om
            .mul(&om.adjoint())?
            .mul(&on.mul(&on.adjoint())?)?;
        out.insert(v.index, proj);
    }
    Ok(out)
}

/// Edge operators S_f = P_{range} e P_{source} for the labeled operator e.
pub fn edge_operators(g: &KGraph, hat: &HatMap) -> Result<CKAssignment> {
    let projections = vertex_projections(g, hat)?;
    let mut isometries = BTreeMap::new();
    for e in &g.skeleton.edges {
        let label = e
            .label
            .as_ref()
            .and_then(|l| l.chars().next())
            .ok_or_else(|| KgError::MissingOperator(format!("edge {}", e.id)))?;
        let op = hat
            .get(&label)
            .ok_or_else(|| KgError::MissingOperator(label.to_string()))?;
        let s = projections[&e.range].mul(op)?.mul(&projections[&e.source])?;
        isometries.insert(e.id, s);
    }
    Ok(CKAssignment {
        graph: g.clone(),
        vertex_projections: projections,
        edge_isometries: isometries,
    })
}

impl CKAssignment {
    /// Operator of a path: the word [e1..en] maps to S_{en} ... S_{e1}.
    /// The identity path at v maps to P_v.
    pub fn path_operator(&self, p: &Path) -> Result<GradedOperator> {
        let mut acc = self.vertex_projections[&p.source].clone();
        for &id in &p.edges {
            acc = self.edge_isometries[&id].mul(&acc)?;
        }
        Ok(acc)
    }

    fn params(&self) -> TruncationParams {
        self.vertex_projections.values().next().expect("nonempty").params
    }
}

/// Degrees at which CK4 sums are checked: the standard small list plus three
/// seeded random degrees of total weight <= d-2.
pub fn default_ck_degrees(d: usize) -> Vec<DegreeVector> {
    let mut out = vec![
        DegreeVector(vec![1, 0]),
        DegreeVector(vec![0, 1]),
        DegreeVector(vec![1, 1]),
        DegreeVector(vec![2, 1]),
        DegreeVector(vec![1, 2]),
    ];
    let cap = d.saturating_sub(2).max(1) as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(0x636b5f646567);
    // Bounded draw count: at small depths fewer than three fresh degrees
    // may exist below the cap.
    for _ in 0..64 {
        if out.len() >= 8 {
            break;
        }
        let a = rng.gen_range(0..=cap);
        let b = rng.gen_range(0..=cap.saturating_sub(a));
        let n = DegreeVector(vec![a, b]);
        if n.total() >= 1 && n.total() <= cap && !out.contains(&n) {
            out.push(n);
        }
    }
    out
}

/// Cuntz-Krieger relations for the assignment at the given degrees.
pub fn check_ck(a: &CKAssignment, degrees: &[DegreeVector], tol: f64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new();
    let params = a.params();
    let zero = GradedOperator::zero(params);
    let id = GradedOperator::identity(params);
    let g = &a.graph;

    // CK1: the vertex projections are orthogonal idempotents summing to I.
    let mut ortho = 0.0f64;
    let mut idem = 0.0f64;
    let mut sum = zero.clone();
    for (v, p) in &a.vertex_projections {
        idem = idem.max(p.mul(p)?.core_residual(p)?);
        idem = idem.max(p.adjoint().core_residual(p)?);
        sum = sum.add(p)?;
        for (w, pw) in &a.vertex_projections {
            if v < w {
                ortho = ortho.max(p.mul(pw)?.core_residual(&zero)?);
            }
        }
    }
    report.residual("ck1_orthogonal", "all vertex pairs", ortho, tol);
    report.residual("ck1_idempotent_selfadjoint", "all vertices", idem, tol);
    report.residual("ck1_sum_identity", "sum over vertices", sum.core_residual(&id)?, tol);

    // CK2: composing edge operators agrees with the normal-form path operator.
    let mut ck2 = 0.0f64;
    for f in &g.skeleton.edges {
        for h in &g.skeleton.edges {
            if h.source != f.range {
                continue;
            }
            let word = Path { source: f.source, edges: vec![f.id, h.id] };
            let direct = a.edge_isometries[&h.id].mul(&a.edge_isometries[&f.id])?;
            let normal = a.path_operator(&word.normal_form(g)?)?;
            ck2 = ck2.max(direct.core_residual(&normal)?);
        }
    }
    report.residual("ck2_composition", "all composable edge pairs", ck2, tol);

    // CK3: S_f* S_f = P_{s(f)}.
    let mut ck3 = 0.0f64;
    for e in &g.skeleton.edges {
        let s = &a.edge_isometries[&e.id];
        let r = s
            .adjoint()
            .mul(s)?
            .core_residual(&a.vertex_projections[&e.source])?;
        ck3 = ck3.max(r);
    }
    report.residual("ck3_range_projection", "all edges", ck3, tol);

    // CK4: P_v equals the sum of S_p S_p* over paths of each degree into v.
    for n in degrees {
        let mut worst = 0.0f64;
        for v in &g.skeleton.vertices {
            let mut acc = zero.clone();
            for u in &g.skeleton.vertices {
                for p in enumerate_paths(g, u.index, v.index, n)? {
                    let sp = a.path_operator(&p)?;
                    acc = acc.add(&sp.mul(&sp.adjoint())?)?;
                }
            }
            worst = worst.max(acc.core_residual(&a.vertex_projections[&v.index])?);
        }
        report.residual(format!("ck4_degree_{n}"), format!("n={n}"), worst, tol);
    }
    Ok(report)
}

fn min_core_eigenvalue(op: &GradedOperator) -> f64 {
    let core = op.params.core_indices();
    let zero_deg = vec![0i64; op.params.c];
    let m = match op.components.get(&zero_deg) {
        Some(m) => m.clone(),
        None => return 0.0,
    };
    let k = core.len();
    let mut dm = DMatrix::<Complex64>::zeros(k, k);
    let mut pos = vec![usize::MAX; op.params.dim()];
    for (a, &i) in core.iter().enumerate() {
        pos[i] = a;
    }
    for (r, c, v) in m.triplets() {
        if pos[r] != usize::MAX && pos[c] != usize::MAX {
            dm[(pos[r], pos[c])] = v;
        }
    }
    let herm = (dm.adjoint() + &dm).scale(0.5);
    herm.symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |acc, &l| acc.min(l))
}

/// The mixed-letter operator relations, plus quasinormality of each letter.
pub fn check_relation_list(hat: &HatMap, tol: f64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new();
    let o = |c: char| hat[&c].clone();
    let prod = |x: &GradedOperator, y: &GradedOperator| x.mul(y);
    let zero = GradedOperator::zero(o('A').params);

    // (name, lhs, rhs); rhs None means zero.
    let adj = |c: char| hat[&c].adjoint();
    let checks: Vec<(&str, GradedOperator, Option<GradedOperator>)> = vec![
        ("BA_zero", prod(&o('B'), &o('A'))?, None),
        ("Bstar_A_zero", prod(&adj('B'), &o('A'))?, None),
        ("YA_eq_AY", prod(&o('Y'), &o('A'))?, Some(prod(&o('A'), &o('Y'))?)),
        ("CA_zero", prod(&o('C'), &o('A'))?, None),
        ("Cstar_A_zero", prod(&adj('C'), &o('A'))?, None),
        ("ZB_eq_BZ", prod(&o('Z'), &o('B'))?, Some(prod(&o('B'), &o('Z'))?)),
        ("YB_eq_AZ", prod(&o('Y'), &o('B'))?, Some(prod(&o('A'), &o('Z'))?)),
        ("ZA_zero", prod(&o('Z'), &o('A'))?, None),
        ("Zstar_A_zero", prod(&adj('Z'), &o('A'))?, None),
        ("CB_zero", prod(&o('C'), &o('B'))?, None),
        ("Cstar_B_zero", prod(&adj('C'), &o('B'))?, None),
        ("AX_eq_XA", prod(&o('A'), &o('X'))?, Some(prod(&o('X'), &o('A'))?)),
        ("A_Xstar_eq_Xstar_A", prod(&o('A'), &adj('X'))?, Some(prod(&adj('X'), &o('A'))?)),
        ("YX_zero", prod(&o('Y'), &o('X'))?, None),
        ("Ystar_X_zero", prod(&adj('Y'), &o('X'))?, None),
        ("BX_eq_XB", prod(&o('B'), &o('X'))?, Some(prod(&o('X'), &o('B'))?)),
        ("ZX_zero", prod(&o('Z'), &o('X'))?, None),
        ("Zstar_X_zero", prod(&adj('Z'), &o('X'))?, None),
        ("CY_eq_YC", prod(&o('C'), &o('Y'))?, Some(prod(&o('Y'), &o('C'))?)),
        ("BY_eq_XC", prod(&o('B'), &o('Y'))?, Some(prod(&o('X'), &o('C'))?)),
        ("CX_zero", prod(&o('C'), &o('X'))?, None),
        ("Cstar_X_zero", prod(&adj('C'), &o('X'))?, None),
        ("ZY_zero", prod(&o('Z'), &o('Y'))?, None),
        ("Zstar_Y_zero", prod(&adj('Z'), &o('Y'))?, None),
    ];
    for (name, lhs, rhs) in checks {
        let r = match rhs {
            Some(rhs) => lhs.core_residual(&rhs)?,
            None => lhs.core_residual(&zero)?,
        };
        report.residual(format!("rel_{name}"), "", r, tol);
    }
    for c in ['A', 'B', 'C', 'X', 'Y', 'Z'] {
        let v = o(c);
        let defect = v.adjoint().mul(&v)?.sub(&v.mul(&v.adjoint())?)?;
        let min_eig = min_core_eigenvalue(&defect);
        report.structural(
            format!("quasinormal_{c}"),
            format!("min core eigenvalue {min_eig:.3e}"),
            min_eig >= -1e-12,
        );
    }
    Ok(report)
}

/// Color of an edge mapped to its gauge degree: color 1 -> (1,0), 2 -> (0,1).
fn color_degree(color: usize) -> Vec<i64> {
    if color == 1 {
        vec![1, 0]
    } else {
        vec![0, 1]
    }
}

/// Structural gauge check: each edge operator is homogeneous with degree
/// matching its color, each vertex projection has degree zero.
pub fn check_gauge(a: &CKAssignment) -> Result<VerificationReport> {
    let mut report = VerificationReport::new();
    for (v, p) in &a.vertex_projections {
        let ok = p.homogeneous_degree() == Some(&[0i64, 0][..]);
        report.structural(
            format!("gauge_vertex_{v}"),
            format!("{:?}", p.homogeneous_degree()),
            ok,
        );
    }
    for e in &a.graph.skeleton.edges {
        let s = &a.edge_isometries[&e.id];
        let want = color_degree(e.color);
        let ok = s.homogeneous_degree() == Some(want.as_slice());
        report.structural(
            format!("gauge_edge_{}", e.id),
            format!(
                "{} expected {want:?} got {:?}",
                e.display(&a.graph.skeleton),
                s.homogeneous_degree()
            ),
            ok,
        );
    }
    Ok(report)
}

/// A Fock occupation triple for the shift-part basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WoldIndex {
    pub j: usize,
    pub k: usize,
    pub m: usize,
}

/// Applies A^k B^m Y^j to e_0 (x) e_0 (x) e_0, returning the dense result
/// and the accumulated circle degree.
pub fn wold_basis(hat: &HatMap, w: WoldIndex) -> Result<(Vec<Complex64>, Vec<i64>)> {
    let params = hat[&'A'].params;
    let cap = params.n - 1 - params.d;
    if w.j > cap || w.k > cap || w.m > cap {
        return Err(KgError::Parameter(format!(
            "index ({},{},{}) leaves the core (cap {cap})",
            w.j, w.k, w.m
        )));
    }
    let mut op = GradedOperator::identity(params);
    for _ in 0..w.j {
        op = hat[&'Y'].mul(&op)?;
    }
    for _ in 0..w.m {
        op = hat[&'B'].mul(&op)?;
    }
    for _ in 0..w.k {
        op = hat[&'A'].mul(&op)?;
    }
    let degree = op
        .homogeneous_degree()
        .map(|d| d.to_vec())
        .unwrap_or_else(|| vec![0; params.c]);
    let mut vec = vec![Complex64::ZERO; params.dim()];
    if let Some(m) = op.components.get(&degree) {
        vec = m.column(0);
    } else if w == (WoldIndex { j: 0, k: 0, m: 0 }) {
        vec[0] = real(1.0);
    }
    Ok((vec, degree))
}

/// The closed-form action of a letter (or its adjoint) on a Wold index:
/// `None` means the vector is annihilated, otherwise the circle-degree
/// increment and the image index are returned.
pub fn action_oracle(label: char, adjoint: bool, w: WoldIndex) -> Option<([i64; 2], WoldIndex)> {
    let WoldIndex { j, k, m } = w;
    let idx = |j, k, m| WoldIndex { j, k, m };
    match (label, adjoint) {
        ('A', false) => Some(([1, 0], idx(j, k + 1, m))),
        ('A', true) => (k > 0).then(|| ([-1, 0], idx(j, k - 1, m))),
        ('B', false) => (k == 0).then(|| ([1, 0], idx(j, 0, m + 1))),
        ('B', true) => (k == 0 && m > 0).then(|| ([-1, 0], idx(j, 0, m - 1))),
        ('C', false) => (k == 0 && m == 0).then(|| ([1, 0], idx(j, 0, 0))),
        ('C', true) => (k == 0 && m == 0).then(|| ([-1, 0], idx(j, 0, 0))),
        ('X', false) => Some(([0, 1], idx(j + 1, k, m + 1))),
        ('X', true) => (m > 0 && j > 0).then(|| ([0, -1], idx(j - 1, k, m - 1))),
        ('Y', false) => {
            if m == 0 {
                Some(([0, 1], idx(j + 1, k, 0)))
            } else if j == 0 {
                Some(([0, 1], idx(0, k + 1, m - 1)))
            } else {
                None
            }
        }
        ('Y', true) => {
            if m == 0 && j > 0 {
                Some(([0, -1], idx(j - 1, k, 0)))
            } else if j == 0 && k > 0 {
                Some(([0, -1], idx(0, k - 1, m + 1)))
            } else {
                None
            }
        }
        ('Z', false) => (j == 0 && k == 0).then(|| ([0, 1], idx(0, 0, m))),
        ('Z', true) => (j == 0 && k == 0).then(|| ([0, -1], idx(0, 0, m))),
        _ => None,
    }
}

fn basis_position(params: &TruncationParams, w: WoldIndex) -> usize {
    (w.j * params.n + w.k) * params.n + w.m
}

/// Compares the oracle against direct sparse application of each letter and
/// adjoint on every core index; exact agreement expected.
pub fn check_action_oracle(hat: &HatMap, tol: f64) -> Result<VerificationReport> {
    let params = hat[&'A'].params;
    let cap = params.n - 1 - params.d;
    let mut report = VerificationReport::new();
    for label in ['A', 'B', 'C', 'X', 'Y', 'Z'] {
        for adjoint in [false, true] {
            let op = if adjoint { hat[&label].adjoint() } else { hat[&label].clone() };
            let mut worst = 0.0f64;
            for j in 0..=cap {
                for k in 0..=cap {
                    for m in 0..=cap {
                        let w = WoldIndex { j, k, m };
                        let col = basis_position(&params, w);
                        let mut expected = vec![Complex64::ZERO; params.dim()];
                        let mut expected_deg: Option<Vec<i64>> = None;
                        if let Some((delta, img)) = action_oracle(label, adjoint, w) {
                            expected[basis_position(&params, img)] = real(1.0);
                            expected_deg = Some(delta.to_vec());
                        }
                        let mut err = 0.0f64;
                        for (deg, mat) in &op.components {
                            let actual = mat.column(col);
                            match &expected_deg {
                                Some(want) if want == deg => {
                                    err += actual
                                        .iter()
                                        .zip(&expected)
                                        .map(|(a, b)| (a - b).norm_sqr())
                                        .sum::<f64>();
                                }
                                _ => {
                                    err += actual.iter().map(|a| a.norm_sqr()).sum::<f64>();
                                }
                            }
                        }
                        if expected_deg.is_some() && !op.components.contains_key(expected_deg.as_ref().unwrap()) {
                            err += 1.0;
                        }
                        worst = worst.max(err.sqrt());
                    }
                }
            }
            let name = format!("oracle_{}{}", label, if adjoint { "_star" } else { "" });
            report.residual(name, format!("all core indices, cap {cap}"), worst, tol);
        }
    }
    Ok(report)
}

/// Checks the Wold basis map lands on distinct exact basis vectors.
pub fn check_wold(hat: &HatMap, tol: f64) -> Result<VerificationReport> {
    let params = hat[&'A'].params;
    let cap = params.n - 1 - params.d;
    let mut report = VerificationReport::new();
    let mut worst = 0.0f64;
    let mut degrees_ok = true;
    let mut seen = std::collections::BTreeSet::new();
    for j in 0..=cap {
        for k in 0..=cap {
            for m in 0..=cap {
                let w = WoldIndex { j, k, m };
                let (vec, degree) = wold_basis(hat, w)?;
                let pos = basis_position(&params, w);
                let mut err = 0.0;
                for (i, v) in vec.iter().enumerate() {
                    let want = if i == pos { real(1.0) } else { Complex64::ZERO };
                    err += (v - want).norm_sqr();
                }
                worst = worst.max(err.sqrt());
                degrees_ok &= degree == vec![(k + m) as i64, j as i64];
                seen.insert(pos);
            }
        }
    }
    report.residual("wold_basis_exact", format!("cap {cap}"), worst, tol);
    report.structural(
        "wold_basis_distinct",
        format!("{} images", seen.len()),
        seen.len() == (cap + 1).pow(3),
    );
    report.structural("wold_degree_bookkeeping", "degree (k+m, j)", degrees_ok);
    Ok(report)
}

/// Adjacency recovered from the operators: an edge labeled e from v1 to v2
/// exists exactly when P_{v2} e P_{v1} is nonzero on the core.
pub fn check_incidence(g: &KGraph, hat: &HatMap) -> Result<VerificationReport> {
    let projections = vertex_projections(g, hat)?;
    let mut report = VerificationReport::new();
    let mut max_zero = 0.0f64;
    let mut min_nonzero = f64::INFINITY;
    let mut pattern_ok = true;
    for v1 in &g.skeleton.vertices {
        for v2 in &g.skeleton.vertices {
            for label in ['A', 'B', 'C', 'X', 'Y', 'Z'] {
                let probe = projections[&v2.index]
                    .mul(&hat[&label])?
                    .mul(&projections[&v1.index])?;
                let (norm, _) = probe.op_norm_core();
                let present = g.skeleton.edges.iter().any(|e| {
                    e.source == v1.index
                        && e.range == v2.index
                        && e.label.as_deref() == Some(&label.to_string())
                });
                if present {
                    min_nonzero = min_nonzero.min(norm);
                    pattern_ok &= norm > 0.9;
                } else {
                    max_zero = max_zero.max(norm);
                    pattern_ok &= norm < 1e-8;
                }
            }
        }
    }
    report.residual("incidence_zero_probes", "all absent edges", max_zero, 1e-8);
    report.structural(
        "incidence_nonzero_probes",
        format!("min norm {min_nonzero:.6}"),
        min_nonzero > 0.9,
    );
    report.structural("incidence_pattern", "36 vertex pairs x 6 labels", pattern_ok);
    Ok(report)
}

/// Identity list for the six limit operators: partial-isometry products,
/// printed projection forms, and both partitions of unity.
pub fn check_hat_identities(hat: &HatMap, g: &KGraph, tol: f64) -> Result<VerificationReport> {
    let params = hat[&'A'].params;
    let e = elementary(params.n, 0.0)?;
    let i = SparseMatrix::identity(params.n);
    let f3 = |a: &SparseMatrix, b: &SparseMatrix, c: &SparseMatrix| {
        GradedOperator::from_component(params, vec![0, 0], a.kron(b).kron(c))
    };
    let id = GradedOperator::identity(params);
    let mut report = VerificationReport::new();
    let star = |c: char| hat[&c].adjoint().mul(&hat[&c]);
    let costar = |c: char| hat[&c].mul(&hat[&c].adjoint());

    let cases: Vec<(&str, GradedOperator, GradedOperator)> = vec![
        ("hat_AstarA", star('A')?, id.clone()),
        ("hat_AAstar", costar('A')?, f3(&i, &e.q_proj, &i)),
        ("hat_BstarB", star('B')?, f3(&i, &e.p, &i)),
        ("hat_BBstar", costar('B')?, f3(&i, &e.p, &e.q_proj)),
        ("hat_CstarC", star('C')?, f3(&i, &e.p, &e.p)),
        ("hat_CCstar", costar('C')?, f3(&i, &e.p, &e.p)),
        ("hat_XstarX", star('X')?, id.clone()),
        ("hat_XXstar", costar('X')?, f3(&e.q_proj, &i, &e.q_proj)),
        (
            "hat_YstarY",
            star('Y')?,
            f3(&i, &i, &e.p).add(&f3(&e.p, &i, &e.q_proj))?,
        ),
        (
            "hat_YYstar",
            costar('Y')?,
            f3(&e.q_proj, &i, &e.p).add(&f3(&e.p, &e.q_proj, &i))?,
        ),
        ("hat_ZstarZ", star('Z')?, f3(&e.p, &e.p, &i)),
        ("hat_ZZstar", costar('Z')?, f3(&e.p, &e.p, &i)),
        (
            "hat_partition_red",
            costar('A')?.add(&costar('B')?)?.add(&costar('C')?)?,
            id.clone(),
        ),
        (
            "hat_partition_blue",
            costar('X')?.add(&costar('Y')?)?.add(&costar('Z')?)?,
            id.clone(),
        ),
    ];
    for (name, lhs, rhs) in cases {
        report.residual(name, "", lhs.core_residual(&rhs)?, tol);
    }

    // Printed tensor forms of the six vertex projections, and their sum.
    let printed: BTreeMap<&str, GradedOperator> = [
        ("CZ", f3(&e.p, &e.p, &e.p)),
        ("CY", f3(&e.q_proj, &e.p, &e.p)),
        ("BZ", f3(&e.p, &e.p, &e.q_proj)),
        ("BX", f3(&e.q_proj, &e.p, &e.q_proj)),
        (
            "AY",
            f3(&e.q_proj, &e.q_proj, &e.p).add(&f3(&e.p, &e.q_proj, &i))?,
        ),
        ("AX", f3(&e.q_proj, &e.q_proj, &e.q_proj)),
    ]
    .into_iter()
    .collect();
    let projections = vertex_projections(g, hat)?;
    let mut sum = GradedOperator::zero(params);
    for v in &g.skeleton.vertices {
        let p = &projections[&v.index];
        let r = p.core_residual(&printed[v.label.as_str()])?;
        report.residual(format!("proj_{}", v.label), "printed tensor form", r, tol);
        sum = sum.add(p)?;
    }
    report.residual("proj_sum_identity", "", sum.core_residual(&id)?, tol);
    Ok(report)
}

/// The full verification suite at the given truncation; tolerance `tol` is
/// used for the coarse (1e-10 class) checks, with the tighter identity
/// checks run at min(tol, 1e-12).
pub fn su3_verify(n: usize, d: usize, tol: f64) -> Result<VerificationReport> {
    let params = TruncationParams::new(n, 3, 2, d)?;
    let _ = params;
    let g = crate::su3::build()?;
    let hat = hat_ops(n, d)?;
    let tight = tol.min(1e-12);
    let mut report = VerificationReport::new();
    report.merge(check_hat_identities(&hat, &g, tight)?);
    report.merge(check_incidence(&g, &hat)?);
    report.merge(check_relation_list(&hat, tight)?);
    let a = edge_operators(&g, &hat)?;
    report.merge(check_ck(&a, &default_ck_degrees(d), tol)?);
    report.merge(check_gauge(&a)?);
    report.merge(check_wold(&hat, tight)?);
    report.merge(check_action_oracle(&hat, tight)?);
    Ok(report.sorted())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su3;

    const N: usize = 8;
    const D: usize = 4;

    fn setup() -> (KGraph, HatMap) {
        (su3::build().unwrap(), hat_ops(N, D).unwrap())
    }

    #[test]
    fn projections_match_printed_forms() {
        let (g, hat) = setup();
        let report = check_hat_identities(&hat, &g, 1e-12).unwrap();
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn specific_edge_operator_is_nonzero_and_probe_is_zero() {
        let (g, hat) = setup();
        let a = edge_operators(&g, &hat).unwrap();
        // A: CY -> AY is in the graph.
        let edge = g
            .skeleton
            .edges
            .iter()
            .find(|e| {
                e.label.as_deref() == Some("A")
                    && g.skeleton.vertices[e.source - 1].label == "CY"
                    && g.skeleton.vertices[e.range - 1].label == "AY"
            })
            .unwrap();
        assert!(a.edge_isometries[&edge.id].op_norm_core().0 > 0.9);
        // A red edge CZ -> BX is not; the probe collapses.
        let p = vertex_projections(&g, &hat).unwrap();
        let cz = g.skeleton.vertex_by_label("CZ").unwrap().index;
        let bx = g.skeleton.vertex_by_label("BX").unwrap().index;
        let probe = p[&bx].mul(&hat[&'A']).unwrap().mul(&p[&cz]).unwrap();
        assert!(probe.op_norm_core().0 < 1e-12);
    }

    #[test]
    fn labeled_operator_is_the_sum_of_its_edge_operators() {
        let (g, hat) = setup();
        let a = edge_operators(&g, &hat).unwrap();
        for letter in ['A', 'B', 'C', 'X', 'Y', 'Z'] {
            let mut sum = GradedOperator::zero(hat[&letter].params);
            for e in &g.skeleton.edges {
                if e.label.as_deref() == Some(&letter.to_string()) {
                    sum = sum.add(&a.edge_isometries[&e.id]).unwrap();
                }
            }
            let r = sum.core_residual(&hat[&letter]).unwrap();
            assert!(r <= 1e-12, "letter {letter}: {r}");
        }
    }

    #[test]
    fn relation_list_and_quasinormality_pass() {
        let (_, hat) = setup();
        let report = check_relation_list(&hat, 1e-12).unwrap();
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn ck_relations_hold_at_small_degrees() {
        let (g, hat) = setup();
        let a = edge_operators(&g, &hat).unwrap();
        let degrees = vec![DegreeVector(vec![1, 0]), DegreeVector(vec![1, 1])];
        let report = check_ck(&a, &degrees, 1e-10).unwrap();
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn gauge_degrees_follow_colors() {
        let (g, hat) = setup();
        let a = edge_operators(&g, &hat).unwrap();
        let report = check_gauge(&a).unwrap();
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn wold_and_oracle_agree_with_direct_application() {
        let (_, hat) = setup();
        let report = check_wold(&hat, 1e-12).unwrap();
        assert!(report.all_pass(), "{report:?}");
        let report = check_action_oracle(&hat, 1e-12).unwrap();
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn wold_examples() {
        let (_, hat) = setup();
        let params = hat[&'A'].params;
        let (v, deg) = wold_basis(&hat, WoldIndex { j: 1, k: 2, m: 3 }).unwrap();
        let pos = basis_position(&params, WoldIndex { j: 1, k: 2, m: 3 });
        assert_eq!(v[pos], real(1.0));
        assert_eq!(v.iter().map(|x| x.norm_sqr()).sum::<f64>(), 1.0);
        assert_eq!(deg, vec![5, 1]);
    }

    #[test]
    fn incidence_matches_skeleton() {
        let (g, hat) = setup();
        let report = check_incidence(&g, &hat).unwrap();
        assert!(report.all_pass(), "{report:?}");
    }
}
