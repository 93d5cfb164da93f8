//! Exact sparse Laurent-polynomial and rational-function arithmetic over
//! the integers, with prime-field evaluation for randomized identity
//! testing.

mod identity;
mod modp;
mod monomial;
mod poly;
mod ratfunc;
pub mod text;

pub use identity::{equal, EqMode, ModPParams, Verdict, Witness};
pub use modp::{is_prime_u64, PrimeField, PrimePoint, DEFAULT_PRIME};
pub use monomial::Monomial;
pub use poly::{LaurentPoly, TermJson};
pub use ratfunc::RatFunc;
