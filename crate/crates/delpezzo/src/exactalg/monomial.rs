//! Exponent vectors of Laurent monomials.
//!
//! A monomial is a vector of signed exponents, one per ambient variable.
//! The derived `Ord` is lexicographic, which is the canonical term order
//! used everywhere in the crate (serialization, division, leading terms).

use crate::error::{Error, Result};

/// Exponent vector of a Laurent monomial, e.g. `[-1, 2]` for `z1^-1*z2^2`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial {
    exps: Vec<i64>,
}

impl Monomial {
    pub fn new(exps: Vec<i64>) -> Self {
        Monomial { exps }
    }

    /// The multiplicative unit: all exponents zero.
    pub fn unit(nvars: usize) -> Self {
        Monomial { exps: vec![0; nvars] }
    }

    /// The single variable `x_i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exps
    }

    pub fn exponent(&self, i: usize) -> i64 {
        self.exps[i]
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> i64 {
        self.exps.iter().sum()
    }

    fn check_arity(&self, other: &Self) -> Result<()> {
        if self.exps.len() != other.exps.len() {
            return Err(Error::VarCountMismatch {
                left: self.exps.len(),
                right: other.exps.len(),
            });
        }
        Ok(())
    }

    /// Product of monomials: checked exponent addition.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(&a, &b)| a.checked_add(b).ok_or(Error::ExponentOverflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Monomial { exps })
    }

    /// Quotient of monomials: checked exponent subtraction. Always defined
    /// in the Laurent ring.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(&a, &b)| a.checked_sub(b).ok_or(Error::ExponentOverflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Monomial { exps })
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let exps = self
            .exps
            .iter()
            .map(|&a| a.checked_mul(k).ok_or(Error::ExponentOverflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Monomial { exps })
    }

    /// Componentwise divisibility in the ordinary polynomial ring
    /// (used by the division algorithm after shifting to nonnegative
    /// exponents).
    pub fn divides(&self, other: &Self) -> bool {
        self.exps.len() == other.exps.len()
            && self.exps.iter().zip(&other.exps).all(|(&a, &b)| a <= b)
    }

    /// Componentwise minimum, the common monomial content of two exponent
    /// vectors.
    pub fn componentwise_min(&self, other: &Self) -> Self {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a.min(b))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_order_is_derived_vec_order() {
        let a = Monomial::new(vec![-1, -1]);
        let b = Monomial::new(vec![0, 1]);
        let c = Monomial::new(vec![1, 0]);
        assert!(a < b && b < c);
    }

    #[test]
    fn mul_div_roundtrip() {
        let a = Monomial::new(vec![2, -3]);
        let b = Monomial::new(vec![-1, 5]);
        let p = a.mul(&b).unwrap();
        assert_eq!(p.exponents(), &[1, 2]);
        assert_eq!(p.div(&b).unwrap(), a);
    }

    #[test]
    fn overflow_is_an_error() {
        let a = Monomial::new(vec![i64::MAX]);
        let b = Monomial::new(vec![1]);
        assert_eq!(a.mul(&b), Err(Error::ExponentOverflow));
        assert_eq!(a.pow(2), Err(Error::ExponentOverflow));
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let a = Monomial::new(vec![1]);
        let b = Monomial::new(vec![1, 2]);
        assert!(matches!(a.mul(&b), Err(Error::VarCountMismatch { .. })));
    }
}
