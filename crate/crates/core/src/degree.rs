use std::fmt;
use std::ops::{Add, Index, Sub};

use serde::{Deserialize, Serialize};

/// Element of the free abelian monoid on `k` generators: a multidegree.
///
/// Componentwise addition is the only composition; the partial order is
/// componentwise as well.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DegreeVector(pub Vec<u32>);

impl DegreeVector {
    pub fn zero(k: usize) -> Self {
        DegreeVector(vec![0; k])
    }

    /// The generator with a 1 in coordinate `i` (0-based).
    pub fn unit(k: usize, i: usize) -> Self {
        let mut v = vec![0; k];
        v[i] = 1;
        DegreeVector(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Componentwise `self <= other`.
    pub fn leq(&self, other: &DegreeVector) -> bool {
        self.rank() == other.rank() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &DegreeVector) -> Option<DegreeVector> {
        if other.leq(self) {
            Some(DegreeVector(
                self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
            ))
        } else {
            None
        }
    }
}

impl Add<&DegreeVector> for &DegreeVector {
    type Output = DegreeVector;
    fn add(self, rhs: &DegreeVector) -> DegreeVector {
        assert_eq!(self.rank(), rhs.rank());
        DegreeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&DegreeVector> for &DegreeVector {
    type Output = DegreeVector;
    fn sub(self, rhs: &DegreeVector) -> DegreeVector {
        self.checked_sub(rhs).expect("degree subtraction underflow")
    }
}

impl Index<usize> for DegreeVector {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_order_is_componentwise() {
        let a = DegreeVector(vec![1, 2]);
        let b = DegreeVector(vec![2, 2]);
        let c = DegreeVector(vec![0, 3]);
        assert!(a.leq(&b));
        assert!(!b.leq(&a));
        assert!(!a.leq(&c));
        assert!(!c.leq(&a));
    }

    #[test]
    fn addition_and_subtraction_roundtrip() {
        let a = DegreeVector(vec![1, 0, 2]);
        let b = DegreeVector(vec![0, 1, 1]);
        let s = &a + &b;
        assert_eq!(&s - &b, a);
        assert_eq!(s.total(), 5);
    }
}
