use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{KgError, Result};
use crate::graded::{elementary, GradedOperator, TruncationParams};
use crate::report::VerificationReport;
use crate::sparse::SparseMatrix;

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Square array of graded operators: the image of the generator matrix
/// (t_ij) under a representation.
#[derive(Debug, Clone)]
pub struct GeneratorTable {
    pub entries: Vec<Vec<GradedOperator>>,
}

impl GeneratorTable {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn params(&self) -> TruncationParams {
        self.entries[0][0].params
    }

    /// 1-based entry access.
    pub fn entry(&self, i: usize, j: usize) -> &GradedOperator {
        &self.entries[i - 1][j - 1]
    }
}

/// The 2x2 table S*C_q, qD_q, -D_q, C_qS on one Fock factor.
pub fn su2_rep(q: f64, n: usize, d: usize) -> Result<GeneratorTable> {
    let e = elementary(n, q)?;
    let p = TruncationParams::new(n, 1, 0, d)?;
    let m = |m: SparseMatrix| GradedOperator::from_component(p, vec![], m);
    let t11 = m(e.s.adjoint().mul(&e.c)?);
    let t12 = m(e.d.scale(real(q)));
    let t21 = m(e.d.scale(real(-1.0)));
    let t22 = m(e.c.mul(&e.s)?);
    Ok(GeneratorTable { entries: vec![vec![t11, t12], vec![t21, t22]] })
}

/// Embeds a 2x2 table into a 3x3 one at rows/columns {i, i+1}; the remaining
/// entries are delta_jk times the identity.
fn theta_embed(two: &GeneratorTable, i: usize) -> GeneratorTable {
    let p = two.params();
    let mut entries =
        vec![vec![GradedOperator::zero(p); 3]; 3];
    for (j, row) in entries.iter_mut().enumerate() {
        for (k, slot) in row.iter_mut().enumerate() {
            let (j1, k1) = (j + 1, k + 1);
            if (i..i + 2).contains(&j1) && (i..i + 2).contains(&k1) {
                *slot = two.entry(j1 - i + 1, k1 - i + 1).clone();
            } else if j1 == k1 {
                *slot = GradedOperator::identity(p);
            }
        }
    }
    GeneratorTable { entries }
}

/// One-Fock-factor representation obtained by restricting to the SU(2) block
/// at position i.
pub fn pi_i(i: usize, q: f64, n: usize, d: usize) -> Result<GeneratorTable> {
    if !(1..=2).contains(&i) {
        return Err(KgError::Parameter(format!("block index {i} must be 1 or 2")));
    }
    Ok(theta_embed(&su2_rep(q, n, d)?, i))
}

/// Diagonal circle-valued table: the (j,j) entry carries the monomial degree
/// prescribed for block i, all off-diagonal entries vanish.
pub fn tau_i(i: usize, n: usize, d: usize) -> Result<GeneratorTable> {
    if !(1..=2).contains(&i) {
        return Err(KgError::Parameter(format!("block index {i} must be 1 or 2")));
    }
    let p = TruncationParams::new(n, 0, 1, d)?;
    let degs: [i64; 3] = if i == 1 { [1, -1, 0] } else { [0, 1, -1] };
    let mut entries = vec![vec![GradedOperator::zero(p); 3]; 3];
    for (j, row) in entries.iter_mut().enumerate() {
        row[j] = GradedOperator::from_component(p, vec![degs[j]], SparseMatrix::identity(1));
    }
    Ok(GeneratorTable { entries })
}

/// Tensor product of representations via the coproduct:
/// entry (i,j) = sum_k kron(a(i,k), b(k,j)).
pub fn boxtimes(a: &GeneratorTable, b: &GeneratorTable) -> Result<GeneratorTable> {
    if a.size() != b.size() {
        return Err(KgError::Dimension(format!(
            "table sizes {} and {} differ",
            a.size(),
            b.size()
        )));
    }
    let size = a.size();
    let mut entries = Vec::with_capacity(size);
    for i in 1..=size {
        let mut row = Vec::with_capacity(size);
        for j in 1..=size {
            let mut acc: Option<GradedOperator> = None;
            for k in 1..=size {
                let term = a.entry(i, k).kron(b.entry(k, j))?;
                acc = Some(match acc {
                    None => term,
                    Some(prev) => prev.add(&term)?,
                });
            }
            row.push(acc.expect("size >= 1"));
        }
        entries.push(row);
    }
    Ok(GeneratorTable { entries })
}

/// The faithful representation on three Fock factors and two circles.
pub fn xi(q: f64, n: usize, d: usize) -> Result<GeneratorTable> {
    let p1 = pi_i(1, q, n, d)?;
    let p2 = pi_i(2, q, n, d)?;
    let t1 = tau_i(1, n, d)?;
    let t2 = tau_i(2, n, d)?;
    boxtimes(&boxtimes(&boxtimes(&p1, &p2)?, &p1)?, &boxtimes(&t1, &t2)?)
}

/// The six limit operators on three Fock factors, keyed by their letter.
/// A, B, C carry degree (1,0); X, Y, Z carry degree (0,1).
pub fn hat_ops(n: usize, d: usize) -> Result<BTreeMap<char, GradedOperator>> {
    let e = elementary(n, 0.0)?;
    let p = TruncationParams::new(n, 3, 2, d)?;
    let f3 = |deg: [i64; 2], a: &SparseMatrix, b: &SparseMatrix, c: &SparseMatrix| {
        GradedOperator::from_component(p, deg.to_vec(), a.kron(b).kron(c))
    };
    let i = SparseMatrix::identity(n);
    let mut map = BTreeMap::new();
    map.insert('A', f3([1, 0], &i, &e.s, &i));
    map.insert('B', f3([1, 0], &i, &e.p, &e.s));
    map.insert('C', f3([1, 0], &i, &e.p, &e.p));
    map.insert('X', f3([0, 1], &e.s, &i, &e.s));
    map.insert(
        'Y',
        f3([0, 1], &e.s, &i, &e.p).add(&f3([0, 1], &e.p, &e.s, &e.s.adjoint()))?,
    );
    map.insert('Z', f3([0, 1], &e.p, &e.p, &i));
    Ok(map)
}

/// The letter whose hat operator is the q->0 limit of c_gen(i,j)*.
pub fn limit_letter(i: usize, j: usize) -> char {
    match (i, j) {
        (1, 1) => 'X',
        (1, 2) => 'Y',
        (1, 3) => 'Z',
        (2, 1) => 'A',
        (2, 2) => 'B',
        (2, 3) => 'C',
        _ => unreachable!(),
    }
}

fn degree_flip(deg: &[i64]) -> Vec<i64> {
    vec![-deg[1], -deg[0]]
}

/// Distinguished generator images under xi, normalized so that the q->0
/// limits of their adjoints are exactly the printed hat operators: the raw
/// table entry is conjugated by the Fock reversal, its circle degrees are
/// remapped by (a,b) -> (-b,-a), and a phase or q power is applied.
pub fn c_gen(q: f64, n: usize, d: usize, i: usize, j: usize) -> Result<GradedOperator> {
    if !(1..=2).contains(&i) || !(1..=3).contains(&j) {
        return Err(KgError::Parameter(format!("generator index ({i},{j}) out of range")));
    }
    if q == 0.0 && i == 2 && j > 1 {
        return Err(KgError::Parameter(format!(
            "generator (2,{j}) carries a negative q power; use the hat operator at q=0"
        )));
    }
    let table = xi(q, n, d)?;
    let raw = match i {
        1 => {
            let phase = if j == 2 { -1.0 } else { 1.0 };
            table.entry(j, 1).scale(real(phase))
        }
        _ => table
            .entry(4 - j, 3)
            .adjoint()
            .scale(real(q.powi(1 - j as i32))),
    };
    Ok(raw.reverse_fock().relabel_degrees(degree_flip))
}

/// Residuals of the three quadratic relation families and the q-determinant
/// on the xi image, all on the core.
pub fn frt_residuals(q: f64, n: usize, d: usize) -> Result<VerificationReport> {
    let t = xi(q, n, d)?;
    let p = t.params();
    let zero = GradedOperator::zero(p);
    let mut report = VerificationReport::new();
    let tol = 1e-10;
    let mut fam = [0.0f64; 3];
    for i in 1..=3 {
        for j in 1..=3 {
            for k in 1..=3 {
                for l in 1..=3 {
                    let (a, b) = (t.entry(i, j), t.entry(k, l));
                    let ab = a.mul(b)?;
                    let ba = b.mul(a)?;
                    if (i == k && j < l) || (i < k && j == l) {
                        let r = ab.sub(&ba.scale(real(q)))?.core_residual(&zero)?;
                        fam[0] = fam[0].max(r);
                    } else if i < k && j > l {
                        let r = ab.sub(&ba)?.core_residual(&zero)?;
                        fam[1] = fam[1].max(r);
                    } else if i < k && j < l {
                        let cross = t.entry(i, l).mul(t.entry(k, j))?;
                        let r = ab
                            .sub(&ba)?
                            .sub(&cross.scale(real(q - 1.0 / q)))?
                            .core_residual(&zero)?;
                        fam[2] = fam[2].max(r);
                    }
                }
            }
        }
    }
    report.residual("frt_q_commutation", format!("q={q}"), fam[0], tol);
    report.residual("frt_commutation", format!("q={q}"), fam[1], tol);
    report.residual("frt_cross", format!("q={q}"), fam[2], tol);

    // Permutations of {1,2,3} with their inversion counts.
    let perms: [([usize; 3], i32); 6] = [
        ([1, 2, 3], 0),
        ([1, 3, 2], 1),
        ([2, 1, 3], 1),
        ([2, 3, 1], 2),
        ([3, 1, 2], 2),
        ([3, 2, 1], 3),
    ];
    let mut det = GradedOperator::zero(p);
    for (sigma, len) in perms {
        let term = t
            .entry(1, sigma[0])
            .mul(t.entry(2, sigma[1]))?
            .mul(t.entry(3, sigma[2]))?;
        det = det.add(&term.scale(real((-q).powi(len))))?;
    }
    let r = det.core_residual(&GradedOperator::identity(p))?;
    report.residual("det_q", format!("q={q}"), r, tol);
    Ok(report)
}

/// Fit of log residual against log q for the limit c_gen(i,j)* -> hat.
#[derive(Debug, Clone)]
pub struct LimitFit {
    /// (q, residual) pairs in input order.
    pub points: Vec<(f64, f64)>,
    /// Points below 1e-13 are excluded from the fit as degenerate.
    pub excluded: Vec<bool>,
    /// Least-squares slope over included points; None if fewer than two.
    pub slope: Option<f64>,
}

pub fn limit_rate(i: usize, j: usize, q_list: &[f64], n: usize, d: usize) -> Result<LimitFit> {
    let hat = hat_ops(n, d)?;
    let target = &hat[&limit_letter(i, j)];
    let mut points = Vec::new();
    let mut excluded = Vec::new();
    for &q in q_list {
        if !(0.0 < q && q < 1.0) {
            return Err(KgError::Parameter(format!("q grid value {q} outside (0,1)")));
        }
        let r = c_gen(q, n, d, i, j)?
            .adjoint()
            .sub(target)?
            .op_norm_core()
            .0;
        excluded.push(r < 1e-13);
        points.push((q, r));
    }
    let fit: Vec<(f64, f64)> = points
        .iter()
        .zip(&excluded)
        .filter(|(_, &ex)| !ex)
        .map(|(&(q, r), _)| (q.ln(), r.ln()))
        .collect();
    let slope = if fit.len() >= 2 {
        let nf = fit.len() as f64;
        let mx = fit.iter().map(|p| p.0).sum::<f64>() / nf;
        let my = fit.iter().map(|p| p.1).sum::<f64>() / nf;
        let sxx: f64 = fit.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = fit.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        Some(sxy / sxx)
    } else {
        None
    };
    Ok(LimitFit { points, excluded, slope })
}

/// The two direct summands of the two-Fock-factor representation, each on
/// three circles (the in-summand circle first, then the outer two).
pub fn lambda_rep(q: f64, n: usize, d: usize) -> Result<[GeneratorTable; 2]> {
    let p1 = pi_i(1, q, n, d)?;
    let p2 = pi_i(2, q, n, d)?;
    let t1 = tau_i(1, n, d)?;
    let t2 = tau_i(2, n, d)?;
    let outer = boxtimes(&t1, &t2)?;
    let s1 = boxtimes(&boxtimes(&boxtimes(&p1, &p2)?, &t1)?, &outer)?;
    let s2 = boxtimes(&boxtimes(&boxtimes(&t1, &p2)?, &p1)?, &outer)?;
    Ok([s1, s2])
}

/// Generator image in one lambda summand, kept in the raw degree convention
/// (self-consistent between the q and q=0 tables).
pub fn lambda_c_gen(table: &GeneratorTable, q: f64, i: usize, j: usize) -> Result<GradedOperator> {
    if !(1..=2).contains(&i) || !(1..=3).contains(&j) {
        return Err(KgError::Parameter(format!("generator index ({i},{j}) out of range")));
    }
    match i {
        1 => Ok(table.entry(j, 1).clone()),
        _ => {
            if q == 0.0 && j > 1 {
                return Err(KgError::Parameter(
                    "negative q power at q=0; use the limit table".into(),
                ));
            }
            Ok(table
                .entry(4 - j, 3)
                .adjoint()
                .scale(real(q.powi(1 - j as i32))))
        }
    }
}

fn op_pow(op: &GradedOperator, k: usize) -> Result<GradedOperator> {
    let mut acc = GradedOperator::identity(op.params);
    for _ in 0..k {
        acc = acc.mul(op)?;
    }
    Ok(acc)
}

/// Square root of a positive semidefinite degree-zero operator via a dense
/// Hermitian eigendecomposition; eigenvalues are clamped at zero.
fn sqrt_psd(op: &GradedOperator) -> Result<GradedOperator> {
    if op.components.is_empty() {
        return Ok(op.clone());
    }
    let zero_deg = vec![0i64; op.params.c];
    if op.components.len() != 1 || !op.components.contains_key(&zero_deg) {
        return Err(KgError::Parameter(
            "square root requires a homogeneous degree-zero operator".into(),
        ));
    }
    let m = &op.components[&zero_deg];
    let dim = m.nrows;
    let mut dm = DMatrix::<Complex64>::zeros(dim, dim);
    for (r, c, v) in m.triplets() {
        dm[(r, c)] = v;
    }
    let herm = (dm.adjoint() + dm).scale(0.5);
    let eig = herm.symmetric_eigen();
    let sq = DMatrix::from_diagonal(
        &eig.eigenvalues.map(|l| real(l.max(0.0).sqrt())),
    );
    let root = &eig.eigenvectors * sq * eig.eigenvectors.adjoint();
    let mut triplets = Vec::new();
    for r in 0..dim {
        for c in 0..dim {
            let v = root[(r, c)];
            if v.norm() > 1e-300 {
                triplets.push((r, c, v));
            }
        }
    }
    Ok(GradedOperator::from_component(
        op.params,
        zero_deg,
        SparseMatrix::from_triplets(dim, dim, triplets),
    ))
}

/// Residuals of the three series reconstructions of the q-deformed lambda
/// generator images from the q=0 images, at truncation orders 1..=k_max.
/// The residual at each order is the larger of the two summand residuals.
pub fn series_check(formula: u8, q: f64, k_max: usize, n: usize, d: usize) -> Result<Vec<f64>> {
    if !(0.0 < q && q < 1.0) {
        return Err(KgError::Parameter(format!("q must lie in (0,1), got {q}")));
    }
    if !(1..=3).contains(&formula) {
        return Err(KgError::Parameter(format!("formula id {formula} must be 1, 2 or 3")));
    }
    let at_q = lambda_rep(q, n, d)?;
    let at_0 = lambda_rep(0.0, n, d)?;
    let mut out = vec![0.0f64; k_max];
    for (tq, t0) in at_q.iter().zip(&at_0) {
        let w: Vec<GradedOperator> = (1..=3)
            .map(|j| Ok(lambda_c_gen(t0, 0.0, 1, j)?.adjoint()))
            .collect::<Result<_>>()?;
        let target = lambda_c_gen(tq, q, 1, formula as usize)?.adjoint();
        for (idx, slot) in out.iter_mut().enumerate() {
            let kk = idx + 1;
            let rhs = match formula {
                1 => {
                    let mut inner = GradedOperator::zero(w[0].params);
                    for k in 0..kk {
                        let term = op_pow(&w[0], k)?.mul(&op_pow(&w[0].adjoint(), k)?)?;
                        inner = inner.add(&term.scale(real(q.powi(2 * k as i32))))?;
                    }
                    w[0].mul(&sqrt_psd(&inner.scale(real(1.0 - q * q)))?)?
                }
                2 => {
                    let mut inner = GradedOperator::zero(w[1].params);
                    for j in 1..=kk {
                        let term = op_pow(&w[1], j)?.mul(&op_pow(&w[1].adjoint(), j)?)?;
                        inner = inner.add(&term.scale(real(q.powi(2 * (j as i32 - 1)))))?;
                    }
                    let root = sqrt_psd(&inner.scale(real(1.0 - q * q)))?;
                    let mid = root.mul(&w[1])?;
                    let mut acc = GradedOperator::zero(w[0].params);
                    for k in 0..=n {
                        let term = op_pow(&w[0], k)?
                            .mul(&mid)?
                            .mul(&op_pow(&w[0].adjoint(), k)?)?;
                        acc = acc.add(&term.scale(real(q.powi(k as i32))))?;
                    }
                    acc
                }
                _ => {
                    let mut acc = GradedOperator::zero(w[0].params);
                    for k in 0..=kk {
                        for j in 0..=(kk - k) {
                            let term = op_pow(&w[0], k)?
                                .mul(&op_pow(&w[1], j)?)?
                                .mul(&w[2])?
                                .mul(&op_pow(&w[1].adjoint(), j)?)?
                                .mul(&op_pow(&w[0].adjoint(), k)?)?;
                            acc = acc.add(&term.scale(real(q.powi((k + j) as i32))))?;
                        }
                    }
                    acc
                }
            };
            *slot = slot.max(rhs.core_residual(&target)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: usize = 10;
    const D: usize = 6;

    fn zero_like(op: &GradedOperator) -> GradedOperator {
        GradedOperator::zero(op.params)
    }

    #[test]
    fn su2_entries_act_as_printed() {
        // (1,1) entry maps e_1 to sqrt(1-q^2) e_0.
        let t = su2_rep(0.5, N, D).unwrap();
        let m = &t.entry(1, 1).components[&Vec::<i64>::new()];
        let mut e1 = vec![Complex64::ZERO; N];
        e1[1] = real(1.0);
        let y = m.apply(&e1);
        assert!((y[0] - real(0.75f64.sqrt())).norm() <= 1e-15);
        assert!(y[1..].iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn su2_q_commutation_and_determinant() {
        let q = 0.5;
        let t = su2_rep(q, N, D).unwrap();
        let (a, b) = (t.entry(1, 1), t.entry(1, 2));
        let lhs = a.mul(b).unwrap();
        let rhs = b.mul(a).unwrap().scale(real(q));
        assert!(lhs.core_residual(&rhs).unwrap() <= 1e-12);
        let det = t
            .entry(1, 1)
            .mul(t.entry(2, 2))
            .unwrap()
            .sub(&t.entry(1, 2).mul(t.entry(2, 1)).unwrap().scale(real(q)))
            .unwrap();
        let id = GradedOperator::identity(det.params);
        assert!(det.core_residual(&id).unwrap() <= 1e-12);
    }

    #[test]
    fn pi_and_tau_place_entries_as_printed() {
        let p1 = pi_i(1, 0.5, N, D).unwrap();
        let id = GradedOperator::identity(p1.params());
        assert_eq!(p1.entry(3, 3), &id);
        assert!(p1.entry(1, 3).components.is_empty());
        let t2 = tau_i(2, N, D).unwrap();
        assert_eq!(t2.entry(2, 2).homogeneous_degree(), Some(&[1i64][..]));
        assert_eq!(t2.entry(3, 3).homogeneous_degree(), Some(&[-1i64][..]));
        assert!(t2.entry(1, 3).components.is_empty());
        let t1 = tau_i(1, N, D).unwrap();
        assert_eq!(t1.entry(1, 1).homogeneous_degree(), Some(&[1i64][..]));
    }

    #[test]
    fn boxtimes_is_associative_on_mixed_tables() {
        let p1 = pi_i(1, 0.5, N, D).unwrap();
        let p2 = pi_i(2, 0.5, N, D).unwrap();
        let t1 = tau_i(1, N, D).unwrap();
        let left = boxtimes(&boxtimes(&p1, &p2).unwrap(), &t1).unwrap();
        let right = boxtimes(&p1, &boxtimes(&p2, &t1).unwrap()).unwrap();
        for i in 1..=3 {
            for j in 1..=3 {
                assert_eq!(left.entry(i, j), right.entry(i, j), "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn xi_entries_are_homogeneous_with_column_degrees() {
        let t = xi(0.5, N, D).unwrap();
        for i in 1..=3 {
            for j in 1..=3 {
                let e = t.entry(i, j);
                assert!(
                    e.components.len() <= 1,
                    "entry ({i},{j}) has {} degrees",
                    e.components.len()
                );
            }
            assert_eq!(t.entry(i, 1).homogeneous_degree(), Some(&[1i64, 0][..]));
            assert_eq!(t.entry(i, 3).homogeneous_degree(), Some(&[0i64, -1][..]));
        }
    }

    #[test]
    fn frt_and_determinant_hold_on_core() {
        let report = frt_residuals(0.5, N, D).unwrap();
        assert!(report.all_pass(), "{report:?}");
        assert!(report.max_residual() <= 1e-10);
    }

    #[test]
    fn hat_identity_examples() {
        let hat = hat_ops(N, D).unwrap();
        let e = elementary(N, 0.0).unwrap();
        let p = hat[&'A'].params;
        let c = &hat[&'C'];
        let want = GradedOperator::from_component(
            p,
            vec![0, 0],
            SparseMatrix::identity(N).kron(&e.p).kron(&e.p),
        );
        assert!(c.adjoint().mul(c).unwrap().core_residual(&want).unwrap() <= 1e-14);
        assert!(c.mul(&c.adjoint()).unwrap().core_residual(&want).unwrap() <= 1e-14);
        let id = GradedOperator::identity(p);
        let sum = ['A', 'B', 'C']
            .iter()
            .map(|l| hat[l].mul(&hat[l].adjoint()).unwrap())
            .fold(GradedOperator::zero(p), |a, b| a.add(&b).unwrap());
        assert!(sum.core_residual(&id).unwrap() <= 1e-14);
    }

    #[test]
    fn c_gen_adjoints_limit_to_hats() {
        let hat = hat_ops(N, D).unwrap();
        let q = 1e-4;
        for i in 1..=2 {
            for j in 1..=3 {
                let c = c_gen(q, N, D, i, j).unwrap().adjoint();
                let r = c.core_residual(&hat[&limit_letter(i, j)]).unwrap();
                assert!(r <= 1e-3, "generator ({i},{j}) residual {r}");
            }
        }
    }

    #[test]
    fn c_gen_rejects_singular_scaling_at_q0() {
        assert!(c_gen(0.0, N, D, 2, 2).is_err());
        assert!(c_gen(0.0, N, D, 1, 2).is_ok());
        // (2,1) carries no q scaling at all.
        let c = c_gen(0.5, N, D, 2, 1).unwrap();
        let t = xi(0.5, N, D).unwrap();
        let direct = t
            .entry(3, 3)
            .adjoint()
            .reverse_fock()
            .relabel_degrees(degree_flip);
        assert_eq!(c, direct);
    }

    #[test]
    fn lambda_summand1_kills_the_third_generator() {
        let [s1, _] = lambda_rep(0.5, N, D).unwrap();
        let c3 = lambda_c_gen(&s1, 0.5, 1, 3).unwrap();
        assert!(c3.components.is_empty());
    }

    #[test]
    fn lambda_limit_matches_printed_image_up_to_degree_flip() {
        // Printed second-generator limit, summand 2: zbar (x) S (x) (-P)
        // under the outer circle z. Raw adjoint images carry the negated
        // circle degrees; Fock parts must agree exactly.
        let [_, s2] = lambda_rep(0.0, N, D).unwrap();
        let c2 = lambda_c_gen(&s2, 0.0, 1, 2).unwrap().adjoint();
        let e = elementary(N, 0.0).unwrap();
        let p = c2.params;
        let want = GradedOperator::from_component(
            p,
            vec![1, -1, 0],
            e.s.kron(&e.p.scale(real(-1.0))),
        );
        assert_eq!(c2, want);
    }

    #[test]
    fn series_errors_decrease_at_half() {
        let errs = series_check(1, 0.5, 5, N, D).unwrap();
        for win in errs.windows(2) {
            assert!(win[1] <= win[0], "{errs:?}");
        }
        assert!(errs[4] < 1e-2, "{errs:?}");
    }

    #[test]
    fn limit_rate_slope_is_linear_for_first_family() {
        let grid: Vec<f64> = (3..=7).map(|k| 2f64.powi(-k)).collect();
        let fit = limit_rate(1, 1, &grid, N, D).unwrap();
        let slope = fit.slope.expect("enough points");
        assert!((slope - 1.0).abs() <= 0.15, "slope {slope} points {:?}", fit.points);
        for win in fit.points.windows(2) {
            assert!(win[1].1 <= win[0].1, "{:?}", fit.points);
        }
    }

    #[test]
    fn quadratic_relations_reduce_to_su2_case() {
        let q = 0.5;
        let t = xi(q, N, D).unwrap();
        let lhs = t.entry(1, 1).mul(t.entry(1, 2)).unwrap();
        let rhs = t.entry(1, 2).mul(t.entry(1, 1)).unwrap().scale(real(q));
        assert!(lhs.core_residual(&rhs).unwrap() <= 1e-12);
        assert!(lhs.sub(&rhs).unwrap().core_residual(&zero_like(&lhs)).unwrap() <= 1e-12);
    }
}
