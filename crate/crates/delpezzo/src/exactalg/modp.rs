//! Prime-field evaluation for randomized identity testing.
//!
//! The default prime is 2^61 - 1, large enough that a single random
//! evaluation refutes a false identity except with probability at most
//! (total degree)/p by the Schwartz-Zippel bound.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default modulus, the Mersenne prime 2^61 - 1.
pub const DEFAULT_PRIME: u64 = (1 << 61) - 1;

/// Arithmetic in Z/p for a fixed prime p < 2^62.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime_u64(p) || p <= 2 {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn reduce_int(&self, c: &num_bigint::BigInt) -> u64 {
        use num_traits::ToPrimitive;
        let p = num_bigint::BigInt::from(self.p);
        let r = ((c % &p) + &p) % &p;
        r.to_u64().expect("residue fits in u64")
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.p as u128) as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        let s = a as u128 + (self.p - b) as u128;
        (s % self.p as u128) as u64
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    /// Modular inverse of a nonzero residue (Fermat).
    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::DegeneratePoint);
        }
        Ok(self.pow_u64(a, self.p - 2))
    }

    fn pow_u64(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Signed power; negative exponents require a nonzero base.
    pub fn pow(&self, base: u64, e: i64) -> Result<u64> {
        if e >= 0 {
            Ok(self.pow_u64(base, e as u64))
        } else {
            let inv = self.inv(base)?;
            Ok(self.pow_u64(inv, e.unsigned_abs()))
        }
    }
}

/// A sample point with all coordinates nonzero mod p, so monomials with
/// negative exponents stay evaluable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePoint {
    prime: u64,
    coords: Vec<u64>,
}

impl PrimePoint {
    pub fn new(prime: u64, coords: Vec<u64>) -> Result<Self> {
        let field = PrimeField::new(prime)?;
        if coords.iter().any(|&c| c == 0 || c >= field.p) {
            return Err(Error::Invalid("coordinates must lie in [1, p-1]".into()));
        }
        Ok(PrimePoint { prime, coords })
    }

    /// Uniform sample from ([1, p-1])^nvars.
    pub fn sample(prime: u64, nvars: usize, rng: &mut impl Rng) -> Result<Self> {
        let field = PrimeField::new(prime)?;
        let coords = (0..nvars).map(|_| rng.gen_range(1..field.p)).collect();
        Ok(PrimePoint { prime, coords })
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.prime }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn nvars(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    /// Replaces coordinate `i`, keeping the nonzero invariant the caller's
    /// problem: a zero value is allowed here and surfaces later as a
    /// degenerate evaluation.
    pub fn with_coord(&self, i: usize, value: u64) -> Self {
        let mut coords = self.coords.clone();
        coords[i] = value % self.prime;
        PrimePoint { prime: self.prime, coords }
    }
}

/// Deterministic Miller-Rabin for u64 (the listed bases are known to be
/// exact below 2^64).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut base: u64, mut e: u64| {
        let mut acc = 1u64;
        base %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, base);
            }
            base = mulmod(base, base);
            e >>= 1;
        }
        acc
    };
    'outer: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_prime_is_prime() {
        assert!(is_prime_u64(DEFAULT_PRIME));
        assert_eq!(DEFAULT_PRIME, 2305843009213693951);
    }

    #[test]
    fn small_primality() {
        let primes: Vec<u64> = (2..50).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]);
    }

    #[test]
    fn inverse_of_two_mod_seven() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.inv(2).unwrap(), 4);
        assert_eq!(f.pow(2, -1).unwrap(), 4);
    }

    #[test]
    fn point_coordinates_validated() {
        assert!(PrimePoint::new(7, vec![1, 6]).is_ok());
        assert!(PrimePoint::new(7, vec![0, 1]).is_err());
        assert!(PrimePoint::new(7, vec![7, 1]).is_err());
        assert!(PrimePoint::new(6, vec![1]).is_err());
    }
}
