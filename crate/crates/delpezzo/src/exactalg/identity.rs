//! Exact and randomized equality of rational functions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::modp::{PrimePoint, DEFAULT_PRIME};
use crate::exactalg::poly::LaurentPoly;
use crate::exactalg::ratfunc::RatFunc;

/// How many fresh points to draw per trial before giving up on degenerate
/// denominators.
const RESAMPLE_BUDGET: u32 = 64;

/// Equality-checking mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EqMode {
    /// Cross-multiplication identity of Laurent polynomials; definitive.
    Exact,
    /// Agreement at `trials` random points of ([1, p-1])^n. A false
    /// "equal" verdict happens with probability at most
    /// (deg / p)^trials by Schwartz-Zippel; with the default prime and a
    /// cross-multiplied degree below 10^4 a single trial is already below
    /// 10^-14, and 20 trials are the suite default.
    ModP(ModPParams),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModPParams {
    pub prime: u64,
    pub trials: u32,
    pub rng_seed: u64,
}

impl Default for ModPParams {
    fn default() -> Self {
        ModPParams { prime: DEFAULT_PRIME, trials: 20, rng_seed: 0 }
    }
}

/// Outcome of an equality check, with a witness on mismatch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    NotEqual(Witness),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A point where the two sides evaluate differently.
    Point { point: PrimePoint, left: u64, right: u64 },
    /// The nonzero cross-multiplication difference.
    Difference(LaurentPoly),
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal)
    }
}

/// Decides `a == b` in the requested mode.
pub fn equal(a: &RatFunc, b: &RatFunc, mode: EqMode) -> Result<Verdict> {
    match mode {
        EqMode::Exact => {
            let diff = a.cross_difference(b)?;
            if diff.is_zero() {
                Ok(Verdict::Equal)
            } else {
                Ok(Verdict::NotEqual(Witness::Difference(diff)))
            }
        }
        EqMode::ModP(params) => equal_modp(a, b, params),
    }
}

fn equal_modp(a: &RatFunc, b: &RatFunc, params: ModPParams) -> Result<Verdict> {
    if a.nvars() != b.nvars() {
        return Err(Error::VarCountMismatch { left: a.nvars(), right: b.nvars() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
    for _ in 0..params.trials {
        let mut done = false;
        for _ in 0..RESAMPLE_BUDGET {
            let pt = PrimePoint::sample(params.prime, a.nvars(), &mut rng)?;
            let left = match a.eval_mod_p(&pt) {
                Ok(v) => v,
                Err(Error::DegeneratePoint) => continue,
                Err(e) => return Err(e),
            };
            let right = match b.eval_mod_p(&pt) {
                Ok(v) => v,
                Err(Error::DegeneratePoint) => continue,
                Err(e) => return Err(e),
            };
            if left != right {
                return Ok(Verdict::NotEqual(Witness::Point { point: pt, left, right }));
            }
            done = true;
            break;
        }
        if !done {
            return Err(Error::RetriesExhausted);
        }
    }
    Ok(Verdict::Equal)
}
