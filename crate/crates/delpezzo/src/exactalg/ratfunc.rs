//! Rational functions as quotients of Laurent polynomials.
//!
//! No multivariate gcd is attempted. Canonicalization only clears the
//! common monomial content of numerator and denominator and fixes the
//! sign of the denominator's leading coefficient; equality is decided by
//! cross-multiplication, which is independent of how far a quotient has
//! been reduced.

use crate::error::{Error, Result};
use crate::exactalg::modp::PrimePoint;
use crate::exactalg::poly::LaurentPoly;
use num_traits::One;

#[derive(Clone, Debug)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFunc {
    /// Builds `num / den`, canonicalizing. The denominator must be nonzero.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if num.nvars() != den.nvars() {
            return Err(Error::VarCountMismatch { left: num.nvars(), right: den.nvars() });
        }
        if den.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        let mut f = RatFunc { num, den };
        f.canonicalize()?;
        Ok(f)
    }

    pub fn from_poly(p: LaurentPoly) -> Result<Self> {
        let den = LaurentPoly::one(p.nvars());
        RatFunc::new(p, den)
    }

    pub fn constant(nvars: usize, c: i128) -> Result<Self> {
        Self::from_poly(LaurentPoly::constant(nvars, c))
    }

    pub fn var(nvars: usize, i: usize) -> Result<Self> {
        Self::from_poly(LaurentPoly::var(nvars, i))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `Some(p)` when the denominator is a single monomial with coefficient
    /// `+/-1`, which can be folded into the numerator. Canonicalization may
    /// leave such a denominator even for honest Laurent polynomials.
    pub fn as_poly(&self) -> Option<LaurentPoly> {
        let (m, c) = self.den.as_monomial()?;
        if !c.magnitude().is_one() {
            return None;
        }
        let inv = m.pow(-1).ok()?;
        self.num.mul_term(&inv, c.clone()).ok()
    }

    /// Exact conversion to a Laurent polynomial via division, if possible.
    pub fn to_poly(&self) -> Result<Option<LaurentPoly>> {
        self.num.exact_div(&self.den)
    }

    fn canonicalize(&mut self) -> Result<()> {
        if self.num.is_zero() {
            self.den = LaurentPoly::one(self.den.nvars());
            return Ok(());
        }
        // clear the joint monomial content; monomials are units here
        let content = self
            .num
            .min_exponents()
            .expect("nonzero")
            .componentwise_min(&self.den.min_exponents().expect("den nonzero"));
        if !content.is_unit() {
            let inv = content.pow(-1)?;
            self.num = self.num.mul_term(&inv, 1)?;
            self.den = self.den.mul_term(&inv, 1)?;
        }
        let (_, lead) = self.den.leading_term().expect("den nonzero");
        if lead.sign() == num_bigint::Sign::Minus {
            self.num = self.num.neg();
            self.den = self.den.neg();
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let num = self
            .num
            .mul(&other.den)?
            .add(&other.num.mul(&self.den)?)?;
        RatFunc::new(num, self.den.mul(&other.den)?)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let num = self
            .num
            .mul(&other.den)?
            .sub(&other.num.mul(&self.den)?)?;
        RatFunc::new(num, self.den.mul(&other.den)?)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        RatFunc::new(self.num.mul(&other.num)?, self.den.mul(&other.den)?)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.num.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        RatFunc::new(self.num.mul(&other.den)?, self.den.mul(&other.num)?)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::ZeroToNegativePower);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Self::constant(self.nvars(), 1);
        }
        let (base, e) = if k > 0 {
            (self.clone(), k)
        } else {
            if self.num.is_zero() {
                return Err(Error::ZeroToNegativePower);
            }
            (self.recip()?, -k)
        };
        let e = u32::try_from(e).map_err(|_| Error::ExponentOverflow)?;
        RatFunc::new(base.num.pow_nonneg(e)?, base.den.pow_nonneg(e)?)
    }

    /// Ring-homomorphic substitution applied to numerator and denominator.
    pub fn substitute(&self, images: &[RatFunc]) -> Result<Self> {
        let num = self.num.substitute(images)?;
        let den = self.den.substitute(images)?;
        if den.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        num.div(&den)
    }

    /// Substitutes into the single variable `i`.
    pub fn substitute_single(&self, i: usize, image: &RatFunc) -> Result<Self> {
        let num = self.num.substitute_single(i, image)?;
        let den = self.den.substitute_single(i, image)?;
        if den.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        num.div(&den)
    }

    /// Evaluation over a prime field; `DegeneratePoint` if the denominator
    /// vanishes at the point.
    pub fn eval_mod_p(&self, pt: &PrimePoint) -> Result<u64> {
        let den = self.den.eval_mod_p(pt)?;
        if den == 0 {
            return Err(Error::DegeneratePoint);
        }
        let num = self.num.eval_mod_p(pt)?;
        Ok(pt.field().mul(num, pt.field().inv(den)?))
    }

    /// Exact equality by cross-multiplication.
    pub fn eq_exact(&self, other: &Self) -> Result<bool> {
        if self.nvars() != other.nvars() {
            return Err(Error::VarCountMismatch { left: self.nvars(), right: other.nvars() });
        }
        Ok(self.num.mul(&other.den)? == other.num.mul(&self.den)?)
    }

    /// The cross-multiplication difference `num1*den2 - num2*den1`; zero
    /// exactly when the two functions are equal.
    pub fn cross_difference(&self, other: &Self) -> Result<LaurentPoly> {
        self.num.mul(&other.den)?.sub(&other.num.mul(&self.den)?)
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.eq_exact(other).unwrap_or(false)
    }
}

impl Eq for RatFunc {}
