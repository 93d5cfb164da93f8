//! Potentials with marked mutation directions, and their mutation.
//!
//! A seed is a 2-variable Laurent polynomial together with an ordered list
//! of primitive direction vectors. Mutating in direction `v` twists every
//! monomial `z^w` by `(1 + z^(v_perp))^(-(v,w))`, negates `v` and applies
//! the tropical transvection to the other directions. The result is only
//! accepted if the twisted potential is again a Laurent polynomial, which
//! is certified by exact division.
//!
//! Note that mutation may make a direction collide with a pre-existing
//! antipodal one (`-v` equals an untouched `w` whenever `{w, v} = 0`);
//! the five initial seeds have pairwise distinct directions, but their
//! mutations in general do not, and no distinctness is enforced here.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{LaurentPoly, RatFunc, TermJson};

/// A plain integer vector in the exponent plane.
pub type Vec2 = [i64; 2];

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

fn to_i64(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::ExponentOverflow)
}

/// Standard scalar product `(v, w)`.
pub fn scalar(v: Vec2, w: Vec2) -> Result<i64> {
    to_i64(v[0] as i128 * w[0] as i128 + v[1] as i128 * w[1] as i128)
}

/// Symplectic form `{v, w} = v1*w2 - v2*w1`.
pub fn symplectic(v: Vec2, w: Vec2) -> Result<i64> {
    to_i64(v[0] as i128 * w[1] as i128 - v[1] as i128 * w[0] as i128)
}

/// A primitive nonzero integer vector.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Direction(Vec2);

impl Direction {
    pub fn new(v: Vec2) -> Result<Self> {
        if v == [0, 0] || gcd(v[0], v[1]) != 1 {
            return Err(Error::NotPrimitive(v[0], v[1]));
        }
        Ok(Direction(v))
    }

    pub fn vec(self) -> Vec2 {
        self.0
    }

    /// `(a, b) -> (b, -a)`; rotation by -90 degrees, again primitive.
    pub fn perp(self) -> Direction {
        Direction([self.0[1], -self.0[0]])
    }

    pub fn neg(self) -> Direction {
        Direction([-self.0[0], -self.0[1]])
    }
}

/// Tropical mutation of a vector: `w + [{w, v}]_+ v`.
pub fn tropical_mutate(v: Direction, w: Vec2) -> Result<Vec2> {
    let k = symplectic(w, v.vec())?.max(0) as i128;
    Ok([
        to_i64(w[0] as i128 + k * v.vec()[0] as i128)?,
        to_i64(w[1] as i128 + k * v.vec()[1] as i128)?,
    ])
}

/// Mutation of a single monomial: `z^w (1 + z^(v_perp))^(-(v, w))`.
pub fn monomial_mutate(v: Direction, w: Vec2) -> Result<RatFunc> {
    let zw = LaurentPoly::from_terms(2, [(w.to_vec(), 1)])?;
    let binom = wall_binomial(v)?;
    let power = binom.pow(-scalar(v.vec(), w)?)?;
    RatFunc::from_poly(zw)?.mul(&power)
}

/// `1 + z^(v_perp)`, the wall-crossing factor of direction `v`.
pub fn wall_binomial(v: Direction) -> Result<LaurentPoly> {
    let vp = v.perp().vec();
    LaurentPoly::from_terms(2, [(vec![0, 0], 1), (vp.to_vec(), 1)])
}

/// A 2-variable potential with an ordered list of mutation directions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LGSeed {
    potential: LaurentPoly,
    directions: Vec<Direction>,
}

/// Repetition policy for mutation sequences.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RepeatPolicy {
    /// Reject any sequence with a repeated index (the default reading of
    /// "without repetitions").
    Reject,
    /// Allow arbitrary sequences; results beyond repetition-free ones are
    /// exploratory.
    Allow,
}

impl LGSeed {
    pub fn new(potential: LaurentPoly, directions: Vec<Direction>) -> Result<Self> {
        if potential.nvars() != 2 {
            return Err(Error::VarCountMismatch { left: 2, right: potential.nvars() });
        }
        Ok(LGSeed { potential, directions })
    }

    pub fn potential(&self) -> &LaurentPoly {
        &self.potential
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn rank(&self) -> usize {
        self.directions.len()
    }

    pub fn has_distinct_directions(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        self.directions.iter().all(|d| seen.insert(d.vec()))
    }

    /// Mutation in direction `i` (0-based). The potential is rewritten over
    /// the common denominator `(1 + z^(v_perp))^M` and certified Laurent by
    /// exact division; a nonzero remainder means the seed was not mutable
    /// in this direction.
    pub fn mutate(&self, i: usize) -> Result<LGSeed> {
        let n = self.directions.len();
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, rank: n });
        }
        let v = self.directions[i];
        let binom = wall_binomial(v)?;

        let mut max_pairing: i64 = 0;
        let mut pairings = Vec::with_capacity(self.potential.num_terms());
        for (m, c) in self.potential.terms() {
            let w = [m.exponent(0), m.exponent(1)];
            let p = scalar(v.vec(), w)?;
            max_pairing = max_pairing.max(p);
            pairings.push((w, c.clone(), p));
        }

        let mut numerator = LaurentPoly::zero(2);
        for (w, c, p) in pairings {
            let twist = binom
                .pow_nonneg(u32::try_from(max_pairing - p).map_err(|_| Error::ExponentOverflow)?)?;
            numerator.add_scaled_assign(&twist, &crate::exactalg::Monomial::new(w.to_vec()), &c)?;
        }
        let denominator = binom.pow_nonneg(u32::try_from(max_pairing).map_err(|_| Error::ExponentOverflow)?)?;
        let potential = numerator
            .exact_div(&denominator)?
            .ok_or(Error::NotLaurent { direction: i })?;

        let mut directions = Vec::with_capacity(n);
        for (j, &d) in self.directions.iter().enumerate() {
            if j == i {
                directions.push(d.neg());
            } else {
                directions.push(Direction::new(tropical_mutate(v, d.vec())?)?);
            }
        }
        Ok(LGSeed { potential, directions })
    }

    /// Left-to-right application of [`LGSeed::mutate`] along a sequence of
    /// 0-based indices.
    pub fn iterate(&self, seq: &[usize], policy: RepeatPolicy) -> Result<LGSeed> {
        if policy == RepeatPolicy::Reject {
            let mut seen = std::collections::BTreeSet::new();
            for &i in seq {
                if !seen.insert(i) {
                    return Err(Error::RepetitionRejected { index: i });
                }
            }
        }
        let mut seed = self.clone();
        for (step, &i) in seq.iter().enumerate() {
            seed = seed.mutate(i).map_err(|e| match e {
                Error::NotLaurent { direction } => Error::NotLaurentAtStep { step, direction },
                other => other,
            })?;
        }
        Ok(seed)
    }

    // --- serialization -----------------------------------------------------

    pub fn to_json(&self, surface: SurfaceId, sequence_1based: &[usize]) -> SeedJson {
        SeedJson {
            surface: surface.json_name().to_string(),
            sequence: sequence_1based.to_vec(),
            potential: self.potential.to_json_terms(),
            directions: self.directions.iter().map(|d| d.vec()).collect(),
        }
    }
}

/// JSON form of a seed, `{"surface":...,"sequence":[..],"potential":[..],
/// "directions":[[a,b],..]}`. Sequence indices are 1-based externally.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SeedJson {
    pub surface: String,
    pub sequence: Vec<usize>,
    pub potential: Vec<TermJson>,
    pub directions: Vec<Vec2>,
}

impl SeedJson {
    pub fn to_seed(&self) -> Result<LGSeed> {
        let potential = LaurentPoly::from_json_terms(2, &self.potential)?;
        let directions = self
            .directions
            .iter()
            .map(|&v| Direction::new(v))
            .collect::<Result<Vec<_>>>()?;
        LGSeed::new(potential, directions)
    }
}

/// The five toric del Pezzo surfaces carrying an initial seed.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Serialize, Deserialize)]
pub enum SurfaceId {
    CP2,
    CP1xCP1,
    Bl1CP2,
    Bl2CP2,
    Bl3CP2,
}

impl SurfaceId {
    pub const ALL: [SurfaceId; 5] = [
        SurfaceId::CP2,
        SurfaceId::CP1xCP1,
        SurfaceId::Bl1CP2,
        SurfaceId::Bl2CP2,
        SurfaceId::Bl3CP2,
    ];

    /// Number of directions of the initial seed.
    pub fn rank(self) -> usize {
        match self {
            SurfaceId::CP2 => 3,
            SurfaceId::CP1xCP1 => 4,
            SurfaceId::Bl1CP2 => 4,
            SurfaceId::Bl2CP2 => 5,
            SurfaceId::Bl3CP2 => 6,
        }
    }

    pub fn json_name(self) -> &'static str {
        match self {
            SurfaceId::CP2 => "CP2",
            SurfaceId::CP1xCP1 => "CP1xCP1",
            SurfaceId::Bl1CP2 => "Bl1CP2",
            SurfaceId::Bl2CP2 => "Bl2CP2",
            SurfaceId::Bl3CP2 => "Bl3CP2",
        }
    }

    /// Accepts the JSON names case-insensitively, plus the short forms
    /// `bl1`, `bl2`, `bl3` and `p1xp1`.
    pub fn parse(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "cp2" => Ok(SurfaceId::CP2),
            "cp1xcp1" | "p1xp1" | "cp1cp1" => Ok(SurfaceId::CP1xCP1),
            "bl1cp2" | "bl1" => Ok(SurfaceId::Bl1CP2),
            "bl2cp2" | "bl2" => Ok(SurfaceId::Bl2CP2),
            "bl3cp2" | "bl3" => Ok(SurfaceId::Bl3CP2),
            other => Err(Error::Invalid(format!("unknown surface `{other}`"))),
        }
    }

    /// The initial seed: exact potential and ordered directions. The order
    /// of the directions fixes the exchange matrix.
    pub fn initial_seed(self) -> LGSeed {
        let (terms, dirs): (&[[i64; 2]], &[[i64; 2]]) = match self {
            SurfaceId::CP2 => (
                &[[1, 0], [0, 1], [-1, -1]],
                &[[1, 1], [-2, 1], [1, -2]],
            ),
            SurfaceId::CP1xCP1 => (
                &[[1, 0], [0, 1], [-1, 0], [0, -1]],
                &[[1, 1], [1, -1], [-1, 1], [-1, -1]],
            ),
            SurfaceId::Bl1CP2 => (
                &[[1, 0], [0, 1], [-1, -1], [1, 1]],
                &[[-2, 1], [1, -2], [1, 0], [0, 1]],
            ),
            SurfaceId::Bl2CP2 => (
                &[[1, 0], [0, 1], [-1, 0], [0, -1], [-1, -1]],
                &[[1, -1], [-1, 1], [-1, 0], [0, -1], [1, 1]],
            ),
            SurfaceId::Bl3CP2 => (
                &[[1, 0], [0, 1], [-1, 0], [0, -1], [1, 1], [-1, -1]],
                &[[1, -1], [-1, 1], [1, 0], [-1, 0], [0, 1], [0, -1]],
            ),
        };
        let potential =
            LaurentPoly::from_terms(2, terms.iter().map(|e| (e.to_vec(), 1))).expect("static data");
        let directions = dirs
            .iter()
            .map(|&v| Direction::new(v).expect("static data"))
            .collect();
        LGSeed { potential, directions }
    }
}

impl std::fmt::Display for SurfaceId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.json_name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::text;

    fn poly2(s: &str) -> LaurentPoly {
        text::parse(s, 2).unwrap()
    }

    #[test]
    fn perp_examples() {
        assert_eq!(Direction::new([1, 1]).unwrap().perp().vec(), [1, -1]);
        assert_eq!(Direction::new([0, 1]).unwrap().perp().vec(), [1, 0]);
        let v = Direction::new([1, -2]).unwrap();
        assert_eq!(v.perp().perp().vec(), v.neg().vec());
    }

    #[test]
    fn bilinear_forms() {
        assert_eq!(scalar([1, 1], [1, 0]).unwrap(), 1);
        assert_eq!(symplectic([1, 1], [-2, 1]).unwrap(), 3);
        assert_eq!(symplectic([5, -7], [5, -7]).unwrap(), 0);
    }

    #[test]
    fn symplectic_is_minus_perp_scalar() {
        for v in [[1i64, 1], [2, -3], [-4, 7], [0, 1]] {
            for w in [[1i64, 0], [3, 5], [-2, -2], [6, -1]] {
                let lhs = symplectic(v, w).unwrap();
                let vp = [v[1], -v[0]];
                assert_eq!(lhs, -scalar(vp, w).unwrap());
            }
        }
    }

    #[test]
    fn tropical_examples() {
        let v = Direction::new([1, 1]).unwrap();
        assert_eq!(tropical_mutate(v, [-2, 1]).unwrap(), [-2, 1]);
        assert_eq!(tropical_mutate(v, [1, -2]).unwrap(), [4, 1]);
        assert_eq!(tropical_mutate(v, [1, 1]).unwrap(), [1, 1]);
    }

    #[test]
    fn monomial_mutate_examples() {
        let v = Direction::new([1, 1]).unwrap();
        // (v, (0,1)) = 1:  z2 / (1 + z1 z2^-1)
        let f = monomial_mutate(v, [0, 1]).unwrap();
        assert_eq!(f.num(), &poly2("z2^2"));
        assert_eq!(f.den(), &poly2("z2 + z1"));
        // (v, (-1,-1)) = -2:  z1^-1 z2^-1 (1 + z1 z2^-1)^2, a Laurent polynomial
        let g = monomial_mutate(v, [-1, -1]).unwrap();
        assert_eq!(g.as_poly().unwrap(), poly2("z1^-1*z2^-1 + 2*z2^-2 + z1*z2^-3"));
        // (v, w) = 0 leaves the monomial alone
        let h = monomial_mutate(v, [1, -1]).unwrap();
        assert_eq!(h.as_poly().unwrap(), poly2("z1*z2^-1"));
    }

    #[test]
    fn cp2_mutation_at_one() {
        let s = SurfaceId::CP2.initial_seed();
        let m = s.mutate(0).unwrap();
        assert_eq!(m.potential(), &poly2("z2 + z1^-1*z2^-1 + 2*z2^-2 + z1*z2^-3"));
        let dirs: Vec<Vec2> = m.directions().iter().map(|d| d.vec()).collect();
        assert_eq!(dirs, vec![[-1, -1], [-2, 1], [4, 1]]);
    }

    #[test]
    fn mutation_is_not_involutive() {
        let s = SurfaceId::CP2.initial_seed();
        let twice = s.mutate(0).unwrap().mutate(0).unwrap();
        let dirs: Vec<Vec2> = twice.directions().iter().map(|d| d.vec()).collect();
        // transvection image, not the original directions
        assert_ne!(
            dirs,
            s.directions().iter().map(|d| d.vec()).collect::<Vec<_>>()
        );
        // tropical transvection: w + {w, v} v with v = (1,1)
        let v = [1i64, 1];
        for (j, w) in [[-2i64, 1], [1, -2]].iter().enumerate() {
            let bracket = symplectic(*w, v).unwrap();
            let expected = [w[0] + bracket * v[0], w[1] + bracket * v[1]];
            assert_eq!(dirs[j + 1], expected);
        }
    }

    #[test]
    fn initial_seeds_are_valid_and_mutable_everywhere() {
        for x in SurfaceId::ALL {
            let s = x.initial_seed();
            assert!(s.has_distinct_directions(), "{x}");
            assert_eq!(s.rank(), x.rank());
            for i in 0..s.rank() {
                assert!(s.mutate(i).is_ok(), "{x} direction {i}");
            }
        }
    }

    #[test]
    fn iterate_policies() {
        let s = SurfaceId::CP2.initial_seed();
        assert_eq!(s.iterate(&[], RepeatPolicy::Reject).unwrap(), s);
        assert_eq!(
            s.iterate(&[0], RepeatPolicy::Reject).unwrap(),
            s.mutate(0).unwrap()
        );
        assert_eq!(
            s.iterate(&[0, 0], RepeatPolicy::Reject),
            Err(Error::RepetitionRejected { index: 0 })
        );
        assert!(s.iterate(&[0, 0], RepeatPolicy::Allow).is_ok());
    }

    #[test]
    fn non_laurent_is_an_error_not_a_panic() {
        // z2 mutated in direction (0,1) becomes z2/(1 + z1): not Laurent
        let s = LGSeed::new(poly2("z2"), vec![Direction::new([0, 1]).unwrap()]).unwrap();
        assert_eq!(s.mutate(0), Err(Error::NotLaurent { direction: 0 }));
        // while z1 pairs to zero with (0,1) and passes through unchanged
        let t = LGSeed::new(poly2("z1"), vec![Direction::new([0, 1]).unwrap()]).unwrap();
        assert_eq!(t.mutate(0).unwrap().potential(), &poly2("z1"));
    }

    #[test]
    fn seed_json_roundtrip() {
        let s = SurfaceId::CP2.initial_seed().mutate(0).unwrap();
        let json = s.to_json(SurfaceId::CP2, &[1]);
        let text = serde_json::to_string(&json).unwrap();
        let back: SeedJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, json);
        assert_eq!(back.to_seed().unwrap(), s);
    }
}
