use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{KgError, Result};
use crate::sparse::SparseMatrix;

/// Truncation geometry shared by all operators in a computation: each Fock
/// factor is cut to dimension `n`, `f` counts Fock factors, `c` counts circle
/// factors, and `d` is the reserve depth of the core subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationParams {
    pub n: usize,
    pub f: usize,
    pub c: usize,
    pub d: usize,
}

impl TruncationParams {
    pub fn new(n: usize, f: usize, c: usize, d: usize) -> Result<Self> {
        if n < d + 2 {
            return Err(KgError::Parameter(format!(
                "truncation dimension {n} must be at least depth {d} + 2"
            )));
        }
        Ok(TruncationParams { n, f, c, d })
    }

    pub fn dim(&self) -> usize {
        self.n.pow(self.f as u32)
    }

    /// Indices of tensor basis vectors with every Fock digit <= n-1-d.
    pub fn core_indices(&self) -> Vec<usize> {
        let cap = self.n - 1 - self.d;
        (0..self.dim())
            .filter(|&i| {
                let mut x = i;
                for _ in 0..self.f {
                    if x % self.n > cap {
                        return false;
                    }
                    x /= self.n;
                }
                true
            })
            .collect()
    }

    /// The permutation reversing the order of the Fock factors.
    pub fn fock_reversal(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|i| {
                let mut x = i;
                let mut out = 0;
                for _ in 0..self.f {
                    out = out * self.n + x % self.n;
                    x /= self.n;
                }
                out
            })
            .collect()
    }
}

/// A finite sum of homogeneous terms: each circle degree in Z^c maps to a
/// sparse matrix on the truncated Fock tensor space. Zero matrices pruned.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedOperator {
    pub params: TruncationParams,
    pub components: BTreeMap<Vec<i64>, SparseMatrix>,
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl GradedOperator {
    pub fn zero(params: TruncationParams) -> Self {
        GradedOperator { params, components: BTreeMap::new() }
    }

    pub fn identity(params: TruncationParams) -> Self {
        Self::from_component(params, vec![0; params.c], SparseMatrix::identity(params.dim()))
    }

    pub fn from_component(params: TruncationParams, degree: Vec<i64>, m: SparseMatrix) -> Self {
        let mut op = Self::zero(params);
        op.insert(degree, m);
        op
    }

    pub fn insert(&mut self, degree: Vec<i64>, m: SparseMatrix) {
        debug_assert_eq!(degree.len(), self.params.c);
        debug_assert_eq!(m.nrows, self.params.dim());
        if !m.is_zero() {
            match self.components.get(&degree) {
                Some(prev) => {
                    let sum = prev.add(&m).expect("same dimension");
                    if sum.is_zero() {
                        self.components.remove(&degree);
                    } else {
                        self.components.insert(degree, sum);
                    }
                }
                None => {
                    self.components.insert(degree, m);
                }
            }
        }
    }

    pub fn nnz(&self) -> usize {
        self.components.values().map(|m| m.nnz()).sum()
    }

    /// The degree of a homogeneous operator; `None` if zero or mixed.
    pub fn homogeneous_degree(&self) -> Option<&[i64]> {
        if self.components.len() == 1 {
            self.components.keys().next().map(|d| d.as_slice())
        } else {
            None
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.params != other.params {
            return Err(KgError::Dimension(format!(
                "graded params mismatch: {:?} vs {:?}",
                self.params, other.params
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (d, m) in &other.components {
            out.insert(d.clone(), m.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(real(-1.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self::zero(self.params);
        if s == Complex64::ZERO {
            return out;
        }
        for (d, m) in &self.components {
            out.insert(d.clone(), m.scale(s));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(self.params);
        for (da, ma) in &self.components {
            for (db, mb) in &other.components {
                let d: Vec<i64> = da.iter().zip(db).map(|(a, b)| a + b).collect();
                out.insert(d, ma.mul(mb)?);
            }
        }
        Ok(out)
    }

    /// Adjoint: conjugate-transposes matrices and negates degrees.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.params);
        for (d, m) in &self.components {
            out.insert(d.iter().map(|x| -x).collect(), m.adjoint());
        }
        out
    }

    /// Tensor product; Fock factors and circle degrees concatenate.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        if self.params.n != other.params.n || self.params.d != other.params.d {
            return Err(KgError::Dimension(format!(
                "kron params mismatch: {:?} vs {:?}",
                self.params, other.params
            )));
        }
        let params = TruncationParams {
            n: self.params.n,
            f: self.params.f + other.params.f,
            c: self.params.c + other.params.c,
            d: self.params.d,
        };
        let mut out = Self::zero(params);
        for (da, ma) in &self.components {
            for (db, mb) in &other.components {
                let d: Vec<i64> = da.iter().chain(db).copied().collect();
                out.insert(d, ma.kron(mb));
            }
        }
        Ok(out)
    }

    /// Applies a degree relabeling such as a coordinate swap or negation.
    pub fn relabel_degrees(&self, map: impl Fn(&[i64]) -> Vec<i64>) -> Self {
        let mut out = Self::zero(self.params);
        for (d, m) in &self.components {
            out.insert(map(d), m.clone());
        }
        out
    }

    /// Conjugates every component by the Fock-factor reversal permutation.
    pub fn reverse_fock(&self) -> Self {
        let perm = self.params.fock_reversal();
        let mut out = Self::zero(self.params);
        for (d, m) in &self.components {
            out.insert(d.clone(), m.permute(&perm));
        }
        out
    }

    /// Gauge action: the component of degree m picks up the phase t^m.
    pub fn beta_action(&self, t: &[Complex64]) -> Self {
        debug_assert_eq!(t.len(), self.params.c);
        let mut out = Self::zero(self.params);
        for (d, m) in &self.components {
            let phase: Complex64 = d
                .iter()
                .zip(t)
                .map(|(&e, &ti)| {
                    if e >= 0 {
                        ti.powi(e as i32)
                    } else {
                        ti.conj().powi((-e) as i32)
                    }
                })
                .product();
            out.insert(d.clone(), m.scale(phase));
        }
        out
    }

    /// Max over core basis vectors of the quadrature norm of the difference
    /// columns, distinct degrees contributing orthogonally.
    pub fn core_residual(&self, other: &Self) -> Result<f64> {
        self.check_same(other)?;
        let diff = self.sub(other)?;
        let mut max = 0.0f64;
        for &i in &self.params.core_indices() {
            let mut sq = 0.0;
            for m in diff.components.values() {
                sq += m.column(i).iter().map(|v| v.norm_sqr()).sum::<f64>();
            }
            max = max.max(sq.sqrt());
        }
        Ok(max)
    }

    /// Largest singular value restricted to the core domain, by seeded power
    /// iteration on the core compression of sum_m A_m^* A_m. Returns the
    /// estimate and whether the iteration converged.
    pub fn op_norm_core(&self) -> (f64, bool) {
        let core = self.params.core_indices();
        if self.components.is_empty() || core.is_empty() {
            return (0.0, true);
        }
        let gram: Vec<SparseMatrix> = self
            .components
            .values()
            .map(|m| (m.adjoint(), m))
            .map(|(ma, m)| ma.mul(m).expect("square"))
            .collect();
        let dim = self.params.dim();
        let mut in_core = vec![false; dim];
        for &i in &core {
            in_core[i] = true;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x6b67726170685f71);
        let mut v: Vec<Complex64> = (0..dim)
            .map(|i| {
                if in_core[i] {
                    Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
                } else {
                    Complex64::ZERO
                }
            })
            .collect();
        let norm = |x: &[Complex64]| x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let nv = norm(&v);
        v.iter_mut().for_each(|x| *x /= nv);
        let mut lambda = 0.0f64;
        let tol = 1e-10;
        for _ in 0..5000 {
            let mut w = vec![Complex64::ZERO; dim];
            for g in &gram {
                let gw = g.apply(&v);
                for i in 0..dim {
                    w[i] += gw[i];
                }
            }
            for i in 0..dim {
                if !in_core[i] {
                    w[i] = Complex64::ZERO;
                }
            }
            let new_lambda = norm(&w);
            if new_lambda == 0.0 {
                return (0.0, true);
            }
            w.iter_mut().for_each(|x| *x /= new_lambda);
            let done = (new_lambda - lambda).abs() <= tol * new_lambda.max(1.0);
            lambda = new_lambda;
            v = w;
            if done {
                return (lambda.sqrt(), true);
            }
        }
        (lambda.sqrt(), false)
    }
}

/// Single-factor truncated Fock operators at a given q.
#[derive(Debug, Clone)]
pub struct ElementaryOps {
    pub n: usize,
    pub q: f64,
    /// Truncated shift, with S e_{n-1} = 0.
    pub s: SparseMatrix,
    /// Rank-1 projection onto e_0.
    pub p: SparseMatrix,
    /// I - P.
    pub q_proj: SparseMatrix,
    /// Diagonal sqrt(1 - q^{2k}); entry 0 vanishes.
    pub c: SparseMatrix,
    /// Diagonal q^k; at q=0 equals P.
    pub d: SparseMatrix,
}

pub fn elementary(n: usize, q: f64) -> Result<ElementaryOps> {
    if !(0.0..1.0).contains(&q) {
        return Err(KgError::Parameter(format!("q must lie in [0,1), got {q}")));
    }
    let s = SparseMatrix::from_triplets(
        n,
        n,
        (0..n - 1).map(|k| (k + 1, k, real(1.0))).collect(),
    );
    let p = SparseMatrix::from_triplets(n, n, vec![(0, 0, real(1.0))]);
    let q_proj = SparseMatrix::identity(n).sub(&p)?;
    let c = SparseMatrix::diagonal(
        &(0..n)
            .map(|k| real((1.0 - q.powi(2 * k as i32)).sqrt()))
            .collect::<Vec<_>>(),
    );
    let d = SparseMatrix::diagonal(
        &(0..n).map(|k| real(q.powi(k as i32))).collect::<Vec<_>>(),
    );
    Ok(ElementaryOps { n, q, s, p, q_proj, c, d })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(f: usize, c: usize) -> TruncationParams {
        TruncationParams::new(10, f, c, 6).unwrap()
    }

    #[test]
    fn params_reject_shallow_truncation() {
        assert!(TruncationParams::new(4, 3, 2, 6).is_err());
    }

    #[test]
    fn elementary_identities_hold_exactly() {
        let e = elementary(10, 0.5).unwrap();
        let i = SparseMatrix::identity(10);
        assert_eq!(e.p.add(&e.q_proj).unwrap(), i);
        let cc = e.c.mul(&e.c).unwrap();
        let dd = e.d.mul(&e.d).unwrap();
        assert!(cc.add(&dd).unwrap().sub(&i).unwrap().max_abs() <= 1e-15);
        assert!(e.p.mul(&e.s).unwrap().is_zero());
        assert_eq!(e.q_proj.mul(&e.s).unwrap(), e.s);
    }

    #[test]
    fn q0_elementary_degenerates_to_projections() {
        let e = elementary(10, 0.0).unwrap();
        assert_eq!(e.d, e.p);
        assert_eq!(e.c, e.q_proj);
    }

    #[test]
    fn shift_is_isometric_on_core_only() {
        let e = elementary(10, 0.5).unwrap();
        let p = params(1, 0);
        let s = GradedOperator::from_component(p, vec![], e.s.clone());
        let sts = s.adjoint().mul(&s).unwrap();
        let id = GradedOperator::identity(p);
        assert!(sts.core_residual(&id).unwrap() <= 1e-15);
        // Without the core restriction the defect sits at the top index.
        assert_eq!(
            sts.components[&vec![] as &Vec<i64>]
                .sub(&SparseMatrix::identity(10))
                .unwrap()
                .max_abs(),
            1.0
        );
    }

    #[test]
    fn grading_is_additive_and_adjoint_negates() {
        let p = params(1, 2);
        let e = elementary(10, 0.5).unwrap();
        let a = GradedOperator::from_component(p, vec![1, 0], e.s.clone());
        let b = GradedOperator::from_component(p, vec![0, 1], e.d.clone());
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.homogeneous_degree(), Some(&[1i64, 1][..]));
        assert_eq!(ab.adjoint().homogeneous_degree(), Some(&[-1i64, -1][..]));
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn beta_action_is_multiplicative() {
        let p = params(1, 2);
        let e = elementary(10, 0.25).unwrap();
        let mut op = GradedOperator::from_component(p, vec![1, 0], e.s.clone());
        op = op
            .add(&GradedOperator::from_component(p, vec![-2, 1], e.d.clone()))
            .unwrap();
        let t: Vec<Complex64> = vec![
            Complex64::from_polar(1.0, 0.7),
            Complex64::from_polar(1.0, -1.1),
        ];
        let s: Vec<Complex64> = vec![
            Complex64::from_polar(1.0, 2.3),
            Complex64::from_polar(1.0, 0.4),
        ];
        let ts: Vec<Complex64> = t.iter().zip(&s).map(|(a, b)| a * b).collect();
        let lhs = op.beta_action(&ts);
        let rhs = op.beta_action(&t).beta_action(&s);
        assert!(lhs.core_residual(&rhs).unwrap() <= 1e-12);
    }

    #[test]
    fn beta_commutes_with_multiplication() {
        let p = params(1, 2);
        let e = elementary(10, 0.5).unwrap();
        let a = GradedOperator::from_component(p, vec![1, 0], e.s.clone());
        let b = GradedOperator::from_component(p, vec![0, -1], e.c.clone());
        let t: Vec<Complex64> = vec![
            Complex64::from_polar(1.0, 1.9),
            Complex64::from_polar(1.0, -0.3),
        ];
        let lhs = a.mul(&b).unwrap().beta_action(&t);
        let rhs = a.beta_action(&t).mul(&b.beta_action(&t)).unwrap();
        assert!(lhs.core_residual(&rhs).unwrap() <= 1e-12);
    }

    #[test]
    fn op_norm_of_shift_and_diagonal() {
        let p = params(1, 0);
        let e = elementary(10, 0.5).unwrap();
        let s = GradedOperator::from_component(p, vec![], e.s.clone());
        let (ns, ok) = s.op_norm_core();
        assert!(ok && (ns - 1.0).abs() <= 1e-9);
        let d = GradedOperator::from_component(p, vec![], e.d.clone());
        let (nd, ok) = d.op_norm_core();
        assert!(ok && (nd - 1.0).abs() <= 1e-9);
        let z = GradedOperator::zero(p);
        assert_eq!(z.op_norm_core().0, 0.0);
    }

    #[test]
    fn fock_reversal_swaps_outer_factors() {
        let p = params(2, 0);
        let e = elementary(10, 0.5).unwrap();
        let sp = GradedOperator::from_component(p, vec![], e.s.kron(&e.p));
        let ps = GradedOperator::from_component(p, vec![], e.p.kron(&e.s));
        assert_eq!(sp.reverse_fock(), ps);
    }
}
