//! Sparse multivariate Laurent polynomials over the integers.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vector, so iteration
//! is always in ascending lexicographic order and the representation is
//! canonical: no zero coefficients are ever stored. Coefficients are
//! arbitrary-precision integers (iterated mutation produces binomial
//! coefficients far beyond machine range); exponents are checked `i64`,
//! and overflow surfaces as an error, never as wraparound.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::modp::PrimePoint;
use crate::exactalg::monomial::Monomial;
use crate::exactalg::ratfunc::RatFunc;

/// Coefficient type: arbitrary-precision signed integer.
pub type Coeff = BigInt;

/// A finite integer combination of Laurent monomials in a fixed number of
/// variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Coeff>,
}

/// JSON form of a single term, `{"exp":[e1,...,en],"coeff":c}`. The
/// coefficient is an arbitrary-precision JSON integer.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermJson {
    pub exp: Vec<i64>,
    pub coeff: serde_json::Number,
}

impl TermJson {
    pub fn new(exp: Vec<i64>, coeff: &Coeff) -> Self {
        let coeff = serde_json::from_str(&coeff.to_string())
            .expect("an integer literal is a valid JSON number");
        TermJson { exp, coeff }
    }

    pub fn coeff_int(&self) -> Result<Coeff> {
        Coeff::from_str(&self.coeff.to_string())
            .map_err(|_| Error::Parse(format!("coefficient {} is not an integer", self.coeff)))
    }
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    pub fn constant(nvars: usize, c: impl Into<Coeff>) -> Self {
        let mut terms = BTreeMap::new();
        let c = c.into();
        if !c.is_zero() {
            terms.insert(Monomial::unit(nvars), c);
        }
        LaurentPoly { nvars, terms }
    }

    /// The single variable `x_i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(nvars, i), 1)
    }

    pub fn monomial(m: Monomial, c: impl Into<Coeff>) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        let c = c.into();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { nvars, terms }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, combining
    /// duplicates and dropping zeros.
    pub fn from_terms<C: Into<Coeff>>(
        nvars: usize,
        it: impl IntoIterator<Item = (Vec<i64>, C)>,
    ) -> Result<Self> {
        let mut out = LaurentPoly::zero(nvars);
        for (exp, c) in it {
            if exp.len() != nvars {
                return Err(Error::VarCountMismatch { left: nvars, right: exp.len() });
            }
            out.add_term(Monomial::new(exp), c.into());
        }
        Ok(out)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().map_or(false, |(m, c)| m.is_unit() && c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic order of exponents.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn constant_term(&self) -> Coeff {
        self.coeff(&Monomial::unit(self.nvars))
    }

    /// The lexicographically largest term, if any.
    pub fn leading_term(&self) -> Option<(&Monomial, &Coeff)> {
        self.terms.iter().next_back()
    }

    /// `Some((m, c))` when the polynomial is a single term.
    pub fn as_monomial(&self) -> Option<(&Monomial, &Coeff)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Largest total degree over all terms (`None` for the zero polynomial).
    pub fn max_total_degree(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// Largest absolute exponent over all terms and variables.
    pub fn max_abs_exponent(&self) -> i64 {
        self.terms
            .keys()
            .flat_map(|m| m.exponents().iter().map(|e| e.unsigned_abs()))
            .max()
            .unwrap_or(0) as i64
    }

    /// Componentwise minimum of all exponent vectors; the monomial content
    /// in the Laurent sense. `None` for the zero polynomial.
    pub fn min_exponents(&self) -> Option<Monomial> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, m| acc.componentwise_min(m)))
    }

    fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_arity(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VarCountMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// In-place `self += c * z^m * other`; the workhorse of accumulation
    /// loops, which must not clone the accumulator per term.
    pub fn add_scaled_assign(&mut self, other: &Self, m: &Monomial, c: &Coeff) -> Result<()> {
        self.check_arity(other)?;
        if c.is_zero() {
            return Ok(());
        }
        for (t, tc) in &other.terms {
            self.add_term(t.mul(m)?, tc * c);
        }
        Ok(())
    }

    /// Builds a polynomial from monomial/coefficient pairs, combining
    /// duplicates.
    pub fn from_monomial_terms(
        nvars: usize,
        it: impl IntoIterator<Item = (Monomial, Coeff)>,
    ) -> Result<Self> {
        let mut out = LaurentPoly::zero(nvars);
        for (m, c) in it {
            if m.nvars() != nvars {
                return Err(Error::VarCountMismatch { left: nvars, right: m.nvars() });
            }
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        LaurentPoly { nvars: self.nvars, terms }
    }

    pub fn scale(&self, k: impl Into<Coeff>) -> Self {
        let k = k.into();
        if k.is_zero() {
            return LaurentPoly::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c * &k)).collect();
        LaurentPoly { nvars: self.nvars, terms }
    }

    /// Multiplies by a single term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: impl Into<Coeff>) -> Result<Self> {
        let c = c.into();
        let mut out = LaurentPoly::zero(self.nvars);
        if c.is_zero() {
            return Ok(out);
        }
        for (t, tc) in &self.terms {
            out.add_term(t.mul(m)?, tc * &c);
        }
        Ok(out)
    }

    /// Convolution product in canonical form.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = LaurentPoly::zero(self.nvars);
        // iterate over the smaller operand's terms on the outside
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        for (m, c) in &small.terms {
            for (t, tc) in &large.terms {
                out.add_term(t.mul(m)?, tc * c);
            }
        }
        Ok(out)
    }

    /// Nonnegative power, staying in the Laurent ring. Monomials and
    /// two-term polynomials expand directly (the binomial theorem with
    /// incrementally updated coefficients); everything else squares.
    pub fn pow_nonneg(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Ok(LaurentPoly::one(self.nvars));
        }
        if k == 1 {
            return Ok(self.clone());
        }
        if let Some((m, c)) = self.as_monomial() {
            let coeff = num_traits::pow::pow(c.clone(), k as usize);
            return Ok(LaurentPoly::monomial(m.pow(k as i64)?, coeff));
        }
        if self.terms.len() == 2 {
            let mut it = self.terms.iter();
            let (m1, c1) = it.next().expect("two terms");
            let (m2, c2) = it.next().expect("two terms");
            // (c1 m1 + c2 m2)^k = sum_j C(k,j) c1^(k-j) c2^j m1^(k-j) m2^j
            let mut out = LaurentPoly::zero(self.nvars);
            let mut binom = Coeff::one();
            let mut c1_pow = num_traits::pow::pow(c1.clone(), k as usize);
            let mut c2_pow = Coeff::one();
            let c1_is_one = c1.is_one();
            let c2_is_one = c2.is_one();
            let mut mono = m1.pow(k as i64)?;
            let step = m2.div(m1)?;
            for j in 0..=k as u64 {
                let mut coeff = binom.clone();
                if !c1_is_one {
                    coeff *= &c1_pow;
                }
                if !c2_is_one {
                    coeff *= &c2_pow;
                }
                out.add_term(mono.clone(), coeff);
                if j < k as u64 {
                    binom = binom * (k as u64 - j) / (j + 1);
                    if !c1_is_one {
                        c1_pow /= c1;
                    }
                    if !c2_is_one {
                        c2_pow *= c2;
                    }
                    mono = mono.mul(&step)?;
                }
            }
            return Ok(out);
        }
        let mut acc = LaurentPoly::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Signed power as a rational function: `a^k` for `k >= 0`, `1 / a^(-k)`
    /// for `k < 0` (the base must be nonzero in that case).
    pub fn pow(&self, k: i64) -> Result<RatFunc> {
        if k >= 0 {
            let p = self.pow_nonneg(u32::try_from(k).map_err(|_| Error::ExponentOverflow)?)?;
            RatFunc::from_poly(p)
        } else {
            if self.is_zero() {
                return Err(Error::ZeroToNegativePower);
            }
            let p = self.pow_nonneg(u32::try_from(-k).map_err(|_| Error::ExponentOverflow)?)?;
            RatFunc::new(LaurentPoly::one(self.nvars), p)
        }
    }

    /// Exact division in the Laurent ring: `Some(q)` with `q * divisor ==
    /// self` when such a Laurent polynomial exists, `None` otherwise.
    ///
    /// Both operands are shifted by their monomial content to ordinary
    /// polynomials and divided by long division with respect to the
    /// lexicographic order; any stuck leading term means the quotient does
    /// not exist.
    pub fn exact_div(&self, divisor: &Self) -> Result<Option<Self>> {
        self.check_arity(divisor)?;
        if divisor.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        if self.is_zero() {
            return Ok(Some(LaurentPoly::zero(self.nvars)));
        }
        // shift both to nonnegative exponents; monomials are units, so this
        // changes the quotient only by a known monomial factor
        let shift_a = self.min_exponents().expect("nonzero");
        let shift_b = divisor.min_exponents().expect("nonzero");
        let a = self.mul_term(&shift_a.pow(-1)?, 1)?;
        let b = divisor.mul_term(&shift_b.pow(-1)?, 1)?;

        let (lead_b, lead_bc) = b.leading_term().expect("nonzero");
        let (lead_b, lead_bc) = (lead_b.clone(), lead_bc.clone());
        let tail: Vec<(&Monomial, &Coeff)> =
            b.terms().filter(|(m, _)| **m != lead_b).collect();
        // in-place long division: popping the leading term and pushing the
        // scaled divisor tail keeps each step proportional to the divisor
        let mut rem = a.terms;
        let mut quo = BTreeMap::new();
        while let Some((lead_r, lead_rc)) = rem.pop_last() {
            if !lead_b.divides(&lead_r) || !(&lead_rc % &lead_bc).is_zero() {
                return Ok(None);
            }
            let qm = lead_r.div(&lead_b)?;
            let qc = lead_rc / &lead_bc;
            for (tm, tc) in &tail {
                let m = qm.mul(tm)?;
                match rem.entry(m) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-(&qc * *tc));
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() -= &qc * *tc;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                }
            }
            quo.insert(qm, qc);
        }
        let quo = LaurentPoly { nvars: self.nvars, terms: quo };
        // undo the shifts: self/divisor = (a * shift_a) / (b * shift_b)
        let fix = shift_a.div(&shift_b)?;
        Ok(Some(quo.mul_term(&fix, 1)?))
    }

    /// Ring-homomorphic substitution `x_j -> images[j]`. The images live in
    /// their own ambient ring (all of the same arity), which becomes the
    /// ring of the result.
    pub fn substitute(&self, images: &[RatFunc]) -> Result<RatFunc> {
        if images.len() != self.nvars {
            return Err(Error::VarCountMismatch { left: self.nvars, right: images.len() });
        }
        let target_nvars = match images.first() {
            Some(f) => f.nvars(),
            // a constant polynomial in zero variables keeps its arity
            None => self.nvars,
        };
        let mut acc = RatFunc::from_poly(LaurentPoly::zero(target_nvars))?;
        for (m, c) in self.terms() {
            let mut term = RatFunc::from_poly(LaurentPoly::constant(target_nvars, c.clone()))?;
            for (j, &e) in m.exponents().iter().enumerate() {
                if e != 0 {
                    term = term.mul(&images[j].pow(e)?)?;
                }
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Substitution where every image is a single Laurent monomial with a
    /// (possibly trivial) integer coefficient; the result stays polynomial.
    pub fn substitute_monomials(&self, images: &[LaurentPoly]) -> Result<LaurentPoly> {
        if images.len() != self.nvars {
            return Err(Error::VarCountMismatch { left: self.nvars, right: images.len() });
        }
        let target_nvars = images.first().map_or(self.nvars, |f| f.nvars());
        let mut out = LaurentPoly::zero(target_nvars);
        for (m, c) in self.terms() {
            let mut mono = Monomial::unit(target_nvars);
            let mut coeff = c.clone();
            for (j, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let (im, ic) = images[j]
                    .as_monomial()
                    .ok_or_else(|| Error::Invalid("image is not a monomial".into()))?;
                if !ic.is_one() {
                    if e < 0 {
                        return Err(Error::Invalid(
                            "non-unit monomial image with negative exponent".into(),
                        ));
                    }
                    for _ in 0..e {
                        coeff *= ic;
                    }
                }
                mono = mono.mul(&im.pow(e)?)?;
            }
            out.add_term(mono, coeff);
        }
        Ok(out)
    }

    /// Substitutes a rational function for the single variable `i`, leaving
    /// the other variables alone. This is the workhorse of mutation chains,
    /// where each step touches exactly one cluster variable.
    pub fn substitute_single(&self, i: usize, image: &RatFunc) -> Result<RatFunc> {
        if i >= self.nvars {
            return Err(Error::IndexOutOfRange { index: i, rank: self.nvars });
        }
        if image.nvars() != self.nvars {
            return Err(Error::VarCountMismatch { left: self.nvars, right: image.nvars() });
        }
        if self.is_zero() {
            return RatFunc::from_poly(self.clone());
        }
        let lo = self.terms.keys().map(|m| m.exponent(i)).min().unwrap();
        let hi = self.terms.keys().map(|m| m.exponent(i)).max().unwrap();
        if lo < 0 && image.num().is_zero() {
            return Err(Error::ZeroToNegativePower);
        }
        // with base = min(lo, 0) and top = max(hi, 0), every term
        //   c * rest * (n/d)^e
        // is written over the common denominator n^(-base) * d^top as
        //   c * rest * n^(e - base) * d^(top - e),
        // all powers lying in [0, top - base]
        let base = lo.min(0);
        let top = hi.max(0);
        let span = usize::try_from(top - base).map_err(|_| Error::ExponentOverflow)?;

        let mut num_pows = Vec::with_capacity(span + 1);
        let mut den_pows = Vec::with_capacity(span + 1);
        num_pows.push(LaurentPoly::one(self.nvars));
        den_pows.push(LaurentPoly::one(self.nvars));
        for k in 1..=span {
            num_pows.push(num_pows[k - 1].mul(image.num())?);
            den_pows.push(den_pows[k - 1].mul(image.den())?);
        }

        let trivial_den = image.den().is_one();
        let mut num = LaurentPoly::zero(self.nvars);
        for (m, c) in self.terms() {
            let e = m.exponent(i);
            let mut rest_exps = m.exponents().to_vec();
            rest_exps[i] = 0;
            let rest = Monomial::new(rest_exps);
            let np = usize::try_from(e - base).map_err(|_| Error::ExponentOverflow)?;
            let dp = usize::try_from(top - e).map_err(|_| Error::ExponentOverflow)?;
            if trivial_den {
                num.add_scaled_assign(&num_pows[np], &rest, c)?;
            } else {
                let prod = num_pows[np].mul(&den_pows[dp])?;
                num.add_scaled_assign(&prod, &rest, c)?;
            }
        }
        let den = num_pows[usize::try_from(-base).unwrap()]
            .mul(&den_pows[usize::try_from(top).unwrap()])?;
        RatFunc::new(num, den)
    }

    /// Evaluation over a prime field. Coordinates are nonzero, so negative
    /// exponents go through modular inverses.
    pub fn eval_mod_p(&self, pt: &PrimePoint) -> Result<u64> {
        if pt.nvars() != self.nvars {
            return Err(Error::VarCountMismatch { left: self.nvars, right: pt.nvars() });
        }
        let field = pt.field();
        let mut acc = 0u64;
        for (m, c) in self.terms() {
            let mut v = field.reduce_int(c);
            for (j, &e) in m.exponents().iter().enumerate() {
                if e != 0 {
                    v = field.mul(v, field.pow(pt.coords()[j], e)?);
                }
            }
            acc = field.add(acc, v);
        }
        Ok(acc)
    }

    // --- serialization -----------------------------------------------------

    /// Canonical JSON term list, ascending lexicographic order.
    pub fn to_json_terms(&self) -> Vec<TermJson> {
        self.terms()
            .map(|(m, c)| TermJson::new(m.exponents().to_vec(), c))
            .collect()
    }

    /// Decodes a JSON term list; duplicate exponent vectors are combined.
    pub fn from_json_terms(nvars: usize, terms: &[TermJson]) -> Result<Self> {
        let pairs = terms
            .iter()
            .map(|t| Ok((t.exp.clone(), t.coeff_int()?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(nvars, pairs)
    }

    /// True when every coefficient is strictly positive.
    pub fn has_positive_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.sign() == Sign::Plus)
    }

    /// True when every exponent is nonnegative (an ordinary polynomial).
    pub fn has_nonneg_exponents(&self) -> bool {
        !self
            .min_exponents()
            .map_or(false, |m| m.exponents().iter().any(|&e| e < 0))
    }
}
