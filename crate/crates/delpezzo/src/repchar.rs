//! Thin quiver representations, F-polynomials, g- and h-vectors, and
//! cluster characters.
//!
//! The representation attached to a quiver and a base vertex puts a
//! 1-dimensional space at every other vertex. An arrow class is represented
//! by zero when it is incident with the base vertex or when it bypasses it
//! (its source maps into the base and its target is mapped out of it, so
//! the relations force the class to vanish for a generic choice of
//! coefficients); all remaining classes carry nonzero scalars. Because all
//! spaces are at most 1-dimensional, a subrepresentation is exactly a
//! vertex subset closed under the nonzero classes, each contributing a
//! single point to the corresponding Grassmannian.

use std::collections::BTreeSet;

use crate::clusterkit::{initial_b_matrix, BMatrix, Quiver};
use crate::error::{Error, Result};
use crate::exactalg::{LaurentPoly, Monomial, RatFunc};
use num_traits::One;
use crate::lgseed::SurfaceId;

/// A representation with `dim = 1` everywhere except the base vertex, given
/// by the set of arrow classes carrying nonzero scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThinRep {
    quiver: Quiver,
    base: usize,
    nonzero: BTreeSet<(usize, usize)>,
}

impl ThinRep {
    /// Applies the incidence/bypass rule to fix the nonzero pattern.
    pub fn new(quiver: Quiver, base: usize) -> Result<Self> {
        let n = quiver.size();
        if base >= n {
            return Err(Error::IndexOutOfRange { index: base, rank: n });
        }
        let mut nonzero = BTreeSet::new();
        for (i, j, _) in quiver.arrow_classes() {
            if i == base || j == base {
                continue;
            }
            let bypasses = quiver.arrows(i, base) > 0 && quiver.arrows(base, j) > 0;
            if !bypasses {
                nonzero.insert((i, j));
            }
        }
        Ok(ThinRep { quiver, base, nonzero })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn base_vertex(&self) -> usize {
        self.base
    }

    pub fn nonzero_classes(&self) -> &BTreeSet<(usize, usize)> {
        &self.nonzero
    }

    /// Support vertices, i.e. everything except the base.
    fn support(&self) -> Vec<usize> {
        (0..self.quiver.size()).filter(|&v| v != self.base).collect()
    }

    /// All vertex subsets closed under the nonzero arrow classes, as sorted
    /// index sets.
    pub fn closed_subsets(&self) -> Vec<Vec<usize>> {
        let support = self.support();
        let k = support.len();
        let mut out = Vec::new();
        'subset: for mask in 0u32..(1 << k) {
            let in_set = |v: usize| {
                support
                    .iter()
                    .position(|&s| s == v)
                    .map_or(false, |p| mask >> p & 1 == 1)
            };
            for &(i, j) in &self.nonzero {
                if in_set(i) && !in_set(j) {
                    continue 'subset;
                }
            }
            out.push(
                support
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| mask >> p & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect(),
            );
        }
        out
    }

    /// Generating polynomial of the subrepresentation counts: one term per
    /// closed subset, with unit coefficients. Always has constant term 1
    /// and top term equal to the full support.
    pub fn f_polynomial(&self) -> LaurentPoly {
        let n = self.quiver.size();
        let mut f = LaurentPoly::zero(n);
        for subset in self.closed_subsets() {
            let mut exps = vec![0i64; n];
            for v in subset {
                exps[v] = 1;
            }
            f = f
                .add(&LaurentPoly::monomial(Monomial::new(exps), 1))
                .expect("unit coefficients cannot overflow");
        }
        f
    }

    /// `h_i = -1` when the vertex carries a 1-dimensional space and no
    /// nonzero class leaves it (the outgoing map has kernel); `0` otherwise.
    pub fn h_vector(&self) -> Vec<i64> {
        (0..self.quiver.size())
            .map(|v| {
                if v == self.base {
                    0
                } else if self.nonzero.iter().any(|&(i, _)| i == v) {
                    0
                } else {
                    -1
                }
            })
            .collect()
    }
}

/// The representation of the initial quiver with base vertex 1 (index 0).
pub fn initial_rep(surface: SurfaceId) -> ThinRep {
    ThinRep::new(Quiver::from_b(&initial_b_matrix(surface)), 0).expect("static data")
}

/// The g-vector of the initial virtual representation, base vertex 1.
///
/// The base entry is forced to -1: the unknown kernel dimension at the
/// base vertex cancels against the size of the negative decoration. The
/// other entries come from the kernel dimensions of the outgoing-incoming
/// maps; every value below is reproduced by [`derive_g_vector`], which
/// searches the finitely many candidates compatible with the initial
/// character identity.
pub fn g_vector(surface: SurfaceId) -> Vec<i64> {
    match surface {
        SurfaceId::CP2 => vec![-1, -1, 2],
        SurfaceId::CP1xCP1 => vec![-1, 1, -1, 1],
        SurfaceId::Bl1CP2 => vec![-1, -1, 1, 1],
        SurfaceId::Bl2CP2 => vec![-1, 1, 1, 0, -1],
        SurfaceId::Bl3CP2 => vec![-1, 1, -1, 1, 0, 0],
    }
}

/// F-polynomial and g-vector of a virtual representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualCharData {
    f_poly: LaurentPoly,
    g: Vec<i64>,
}

impl VirtualCharData {
    pub fn new(f_poly: LaurentPoly, g: Vec<i64>, base: usize) -> Result<Self> {
        if f_poly.nvars() != g.len() {
            return Err(Error::VarCountMismatch { left: f_poly.nvars(), right: g.len() });
        }
        if !f_poly.constant_term().is_one() {
            return Err(Error::Invalid("constant term must be 1".into()));
        }
        if !f_poly.has_positive_coeffs() {
            return Err(Error::Invalid("coefficients must be positive".into()));
        }
        if !f_poly.has_nonneg_exponents() {
            return Err(Error::Invalid("exponents must be nonnegative".into()));
        }
        if g.get(base) != Some(&-1) {
            return Err(Error::Invalid("base entry of the g-vector must be -1".into()));
        }
        Ok(VirtualCharData { f_poly, g })
    }

    pub fn for_surface(surface: SurfaceId) -> Self {
        VirtualCharData::new(initial_rep(surface).f_polynomial(), g_vector(surface), 0)
            .expect("static data")
    }

    pub fn f_poly(&self) -> &LaurentPoly {
        &self.f_poly
    }

    pub fn g(&self) -> &[i64] {
        &self.g
    }
}

/// `x^g * F(y)`, the Laurent polynomial character of the data.
pub fn cluster_character(g: &[i64], f: &LaurentPoly, b: &BMatrix) -> Result<LaurentPoly> {
    let n = b.size();
    if g.len() != n || f.nvars() != n {
        return Err(Error::VarCountMismatch { left: n, right: f.nvars().max(g.len()) });
    }
    let substituted = f.substitute_monomials(&b.y_variables())?;
    substituted.mul_term(&Monomial::new(g.to_vec()), 1)
}

/// Mutation of the g-vector at vertex `i`:
/// `g_i -> -g_i`, `g_j -> g_j + [b_ji]_+ g_i - b_ji h_i`.
pub fn g_mutate(b: &BMatrix, g: &[i64], h_i: i64, i: usize) -> Result<Vec<i64>> {
    let n = b.size();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, rank: n });
    }
    if g.len() != n {
        return Err(Error::VarCountMismatch { left: n, right: g.len() });
    }
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        if j == i {
            out.push(-g[i]);
        } else {
            let bji = b.entry(j, i);
            out.push(g[j] + bji.max(0) * g[i] - bji * h_i);
        }
    }
    Ok(out)
}

/// Outcome of the single-step F-polynomial mutation identity.
#[derive(Clone, Debug)]
pub struct FMutationOutcome {
    pub ok: bool,
    /// The solved mutated F-polynomial when the check passes.
    pub f_mutated: Option<LaurentPoly>,
    /// Explanation of the failure otherwise.
    pub failure: Option<String>,
}

/// Solves `(1 + y_i)^(h_i) F(y) = (1 + y_i')^(h_i') F'(y')` for `F'` in the
/// mutated variables, with `h_i' = h_i - g_i`, and checks that the result
/// is a genuine F-polynomial: polynomial, nonnegative exponents, positive
/// coefficients, constant term 1.
pub fn f_mutation_check(
    b: &BMatrix,
    f: &LaurentPoly,
    g: &[i64],
    h: &[i64],
    i: usize,
) -> Result<FMutationOutcome> {
    let n = b.size();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, rank: n });
    }
    if f.nvars() != n || g.len() != n || h.len() != n {
        return Err(Error::VarCountMismatch { left: n, right: f.nvars() });
    }
    let h_i = h[i];
    let h_mut = h_i - g[i];

    // express the old y-variables in the primed ones: mutating the mutated
    // matrix at the same vertex returns them
    let b_mut = b.mutate(i)?;
    let old_in_primed = b_mut.y_mutation_images(i)?;

    let f_old = f.substitute(&old_in_primed)?;
    let one_plus_old_yi = RatFunc::from_poly(LaurentPoly::one(n))?.add(&old_in_primed[i])?;
    let one_plus_new_yi =
        RatFunc::from_poly(LaurentPoly::one(n).add(&LaurentPoly::var(n, i))?)?;

    let f_new = one_plus_new_yi
        .pow(-h_mut)?
        .mul(&one_plus_old_yi.pow(h_i)?)?
        .mul(&f_old)?;

    let fail = |why: String| {
        Ok(FMutationOutcome { ok: false, f_mutated: None, failure: Some(why) })
    };
    let Some(poly) = f_new.to_poly()? else {
        return fail(format!(
            "not a polynomial: remainder after dividing by {}",
            crate::exactalg::text::render(f_new.den(), 'y')
        ));
    };
    if !poly.has_nonneg_exponents() {
        return fail("negative exponents in the solved polynomial".into());
    }
    if !poly.has_positive_coeffs() {
        return fail("nonpositive coefficient in the solved polynomial".into());
    }
    if !poly.constant_term().is_one() {
        return fail(format!("constant term {} instead of 1", poly.constant_term()));
    }
    Ok(FMutationOutcome { ok: true, f_mutated: Some(poly), failure: None })
}

/// Finds the unique g-vector with base entry -1 among the monomials of
/// `target` whose character reproduces `target` itself. This pins down the
/// g-vector from the initial character identity alone; the candidates are
/// the finitely many monomials of the target.
pub fn derive_g_vector(
    f: &LaurentPoly,
    b: &BMatrix,
    target: &LaurentPoly,
    base: usize,
) -> Result<Vec<i64>> {
    let mut found = Vec::new();
    for (m, _) in target.terms() {
        let g: Vec<i64> = m.exponents().to_vec();
        if g.get(base) != Some(&-1) {
            continue;
        }
        if cluster_character(&g, f, b)? == *target {
            found.push(g);
        }
    }
    match found.len() {
        1 => Ok(found.pop().expect("length checked")),
        0 => Err(Error::Invalid("no candidate g-vector matches the target".into())),
        _ => Err(Error::Invalid("g-vector candidate is not unique".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::text;

    fn classes(rep: &ThinRep) -> Vec<(usize, usize)> {
        rep.nonzero_classes().iter().copied().collect()
    }

    #[test]
    fn nonzero_patterns() {
        // 0-based pairs
        assert_eq!(classes(&initial_rep(SurfaceId::CP2)), vec![(2, 1)]);
        assert_eq!(classes(&initial_rep(SurfaceId::CP1xCP1)), vec![(1, 3), (3, 2)]);
        assert_eq!(
            classes(&initial_rep(SurfaceId::Bl1CP2)),
            vec![(2, 1), (3, 1), (3, 2)]
        );
        // the arrow 5 -> 4 bypasses the base vertex via 5 -> 1 -> 4
        let bl2 = initial_rep(SurfaceId::Bl2CP2);
        assert!(!bl2.nonzero_classes().contains(&(4, 3)));
        assert_eq!(
            classes(&bl2),
            vec![(1, 4), (2, 1), (2, 4), (3, 1), (3, 2)]
        );
        // the arrow 3 -> 6 bypasses the base vertex via 3 -> 1 -> 6
        let bl3 = initial_rep(SurfaceId::Bl3CP2);
        assert!(!bl3.nonzero_classes().contains(&(2, 5)));
        assert_eq!(
            classes(&bl3),
            vec![(1, 2), (1, 4), (3, 1), (3, 4), (4, 2), (5, 1), (5, 3)]
        );
    }

    #[test]
    fn f_polynomials() {
        let expect = [
            (SurfaceId::CP2, "1 + u2 + u2*u3"),
            (SurfaceId::CP1xCP1, "1 + u3 + u3*u4 + u2*u3*u4"),
            (SurfaceId::Bl1CP2, "1 + u2 + u2*u3 + u2*u3*u4"),
            (SurfaceId::Bl2CP2, "1 + u5 + u2*u5 + u2*u3*u5 + u2*u3*u4*u5"),
            (SurfaceId::Bl3CP2, "1 + u3 + u3*u5 + u2*u3*u5 + u2*u3*u4*u5 + u2*u3*u4*u5*u6"),
        ];
        for (surface, s) in expect {
            let f = initial_rep(surface).f_polynomial();
            assert_eq!(f, text::parse(s, surface.rank()).unwrap(), "{surface}");
            assert_eq!(text::render(&f, 'u'), s, "{surface}");
        }
    }

    #[test]
    fn f_polynomial_extremal_terms() {
        for surface in SurfaceId::ALL {
            let rep = initial_rep(surface);
            let f = rep.f_polynomial();
            assert_eq!(f.constant_term(), 1.into(), "{surface}");
            let full: Vec<i64> = (0..surface.rank())
                .map(|v| if v == rep.base_vertex() { 0 } else { 1 })
                .collect();
            assert_eq!(f.coeff(&Monomial::new(full)), 1.into(), "{surface}");
        }
    }

    #[test]
    fn closed_subsets_form_a_lattice() {
        for surface in SurfaceId::ALL {
            let rep = initial_rep(surface);
            let sets: Vec<BTreeSet<usize>> = rep
                .closed_subsets()
                .into_iter()
                .map(|s| s.into_iter().collect())
                .collect();
            let as_set: BTreeSet<&BTreeSet<usize>> = sets.iter().collect();
            for a in &sets {
                for b in &sets {
                    let union: BTreeSet<usize> = a.union(b).copied().collect();
                    let inter: BTreeSet<usize> = a.intersection(b).copied().collect();
                    assert!(as_set.contains(&union), "{surface}: union not closed");
                    assert!(as_set.contains(&inter), "{surface}: intersection not closed");
                }
            }
        }
    }

    #[test]
    fn h_vectors() {
        assert_eq!(initial_rep(SurfaceId::CP2).h_vector(), vec![0, -1, 0]);
        assert_eq!(initial_rep(SurfaceId::CP1xCP1).h_vector(), vec![0, 0, -1, 0]);
        assert_eq!(initial_rep(SurfaceId::Bl1CP2).h_vector(), vec![0, -1, 0, 0]);
        assert_eq!(initial_rep(SurfaceId::Bl2CP2).h_vector(), vec![0, 0, 0, 0, -1]);
        assert_eq!(initial_rep(SurfaceId::Bl3CP2).h_vector(), vec![0, 0, -1, 0, 0, 0]);
    }

    #[test]
    fn base_vertex_entry_is_zero() {
        for surface in SurfaceId::ALL {
            assert_eq!(initial_rep(surface).h_vector()[0], 0);
            assert_eq!(g_vector(surface)[0], -1);
        }
    }

    #[test]
    fn cluster_character_cp2() {
        let b = initial_b_matrix(SurfaceId::CP2);
        let cc = cluster_character(
            &g_vector(SurfaceId::CP2),
            &initial_rep(SurfaceId::CP2).f_polynomial(),
            &b,
        )
        .unwrap();
        let expect = text::parse(
            "x1^-1*x2^2*x3^-1 + x1^-1*x2^-1*x3^2 + x1^2*x2^-1*x3^-1",
            3,
        )
        .unwrap();
        assert_eq!(cc, expect);
    }

    #[test]
    fn cluster_character_bl2() {
        let b = initial_b_matrix(SurfaceId::Bl2CP2);
        let cc = cluster_character(
            &g_vector(SurfaceId::Bl2CP2),
            &initial_rep(SurfaceId::Bl2CP2).f_polynomial(),
            &b,
        )
        .unwrap();
        let expect = text::parse(
            "x1^-1*x2*x3*x5^-1 + x1*x2^-1*x4*x5^-1 + x1*x2^-1*x3^-1*x5 + x1^-1*x2*x4^-1*x5 + x3^-1*x4^-1*x5^2",
            5,
        )
        .unwrap();
        assert_eq!(cc, expect);
    }

    #[test]
    fn trivial_character_is_the_leading_monomial() {
        let b = initial_b_matrix(SurfaceId::CP2);
        let f = LaurentPoly::one(3);
        let cc = cluster_character(&[-1, 0, 1], &f, &b).unwrap();
        assert_eq!(cc, text::parse("x1^-1*x3", 3).unwrap());
    }

    #[test]
    fn g_mutation_fixed_point() {
        // g_i = 0 and h_i = 0 leave everything unchanged
        let b = initial_b_matrix(SurfaceId::CP2);
        let g = vec![5, 0, -2];
        assert_eq!(g_mutate(&b, &g, 0, 1).unwrap(), g);
    }

    #[test]
    fn g_mutation_is_involutive_with_propagated_h() {
        for surface in SurfaceId::ALL {
            let b = initial_b_matrix(surface);
            let g = g_vector(surface);
            let h = initial_rep(surface).h_vector();
            for i in 0..surface.rank() {
                let g1 = g_mutate(&b, &g, h[i], i).unwrap();
                let h1_i = h[i] - g[i];
                let b1 = b.mutate(i).unwrap();
                let g2 = g_mutate(&b1, &g1, h1_i, i).unwrap();
                assert_eq!(g2, g, "{surface} vertex {i}");
            }
        }
    }

    #[test]
    fn f_mutation_check_passes_on_initial_data() {
        for surface in [SurfaceId::CP2, SurfaceId::CP1xCP1] {
            let b = initial_b_matrix(surface);
            let rep = initial_rep(surface);
            let f = rep.f_polynomial();
            let g = g_vector(surface);
            let h = rep.h_vector();
            for i in 1..surface.rank() {
                let out = f_mutation_check(&b, &f, &g, &h, i).unwrap();
                assert!(out.ok, "{surface} vertex {i}: {:?}", out.failure);
                let f1 = out.f_mutated.unwrap();
                assert_eq!(f1.constant_term(), 1.into());
            }
        }
    }

    #[test]
    fn f_mutation_check_solves_known_mutation() {
        // mutating at vertex 2 of the triangle quiver data:
        // F' = 1 + y3 + 2 y2 y3 + y2^2 y3
        let b = initial_b_matrix(SurfaceId::CP2);
        let rep = initial_rep(SurfaceId::CP2);
        let out = f_mutation_check(
            &b,
            &rep.f_polynomial(),
            &g_vector(SurfaceId::CP2),
            &rep.h_vector(),
            1,
        )
        .unwrap();
        assert!(out.ok);
        assert_eq!(
            out.f_mutated.unwrap(),
            text::parse("1 + u3 + 2*u2*u3 + u2^2*u3", 3).unwrap()
        );
    }

    #[test]
    fn negative_simple_like_data_mutates_to_simple() {
        // F = 1, g the unit vector at i, h = 0: the identity reduces to
        // powers of (1 + y) and the solved polynomial is that of the
        // 1-dimensional representation at i
        let b = initial_b_matrix(SurfaceId::CP2);
        let f = LaurentPoly::one(3);
        let g = vec![0, 1, 0];
        let h = vec![0, 0, 0];
        let out = f_mutation_check(&b, &f, &g, &h, 1).unwrap();
        assert!(out.ok, "{:?}", out.failure);
        assert_eq!(out.f_mutated.unwrap(), text::parse("1 + u2", 3).unwrap());
    }

    #[test]
    fn corrupted_g_fails_polynomiality() {
        let b = initial_b_matrix(SurfaceId::CP2);
        let rep = initial_rep(SurfaceId::CP2);
        let f = rep.f_polynomial();
        let h = rep.h_vector();
        let mut bad_g = g_vector(SurfaceId::CP2);
        bad_g[2] -= 1;
        let out = f_mutation_check(&b, &f, &bad_g, &h, 2).unwrap();
        assert!(!out.ok);
        assert!(out.failure.is_some());
    }

    #[test]
    fn virtual_char_data_validation() {
        for surface in SurfaceId::ALL {
            let data = VirtualCharData::for_surface(surface);
            assert_eq!(data.g()[0], -1);
            assert_eq!(data.f_poly().constant_term(), 1.into());
        }
        // corrupted data is rejected
        let f = text::parse("1 + u2", 2).unwrap();
        assert!(VirtualCharData::new(f.clone(), vec![-1, 0], 0).is_ok());
        assert!(VirtualCharData::new(f.clone(), vec![0, -1], 0).is_err());
        let no_constant = text::parse("u1 + u2", 2).unwrap();
        assert!(VirtualCharData::new(no_constant, vec![-1, 0], 0).is_err());
    }

    #[test]
    fn derive_g_vector_recovers_stored_values() {
        for surface in SurfaceId::ALL {
            let b = initial_b_matrix(surface);
            let f = initial_rep(surface).f_polynomial();
            let target = cluster_character(&g_vector(surface), &f, &b).unwrap();
            let derived = derive_g_vector(&f, &b, &target, 0).unwrap();
            assert_eq!(derived, g_vector(surface), "{surface}");
        }
    }
}
