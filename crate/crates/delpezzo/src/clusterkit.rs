//! Exchange matrices, quivers, and the x- and y-variable mutation
//! machinery.
//!
//! The matrix mutation rule flips the sign of row and column `i` and
//! updates the remaining entries by `b_jk + [b_ji]_+ [b_ik]_+ -
//! [-b_ji]_+ [-b_ik]_+`; this is the unique convention compatible with
//! recomputing the matrix from mutated seed directions. The x-variable
//! mutation uses the one-sided rule `x_i' = x_i^-1 prod_j x_j^[b_ij]_+
//! (1 + y_i)` with `y_i = prod_j x_j^(b_ji)`.

use crate::error::{Error, Result};
use crate::exactalg::{LaurentPoly, Monomial, PrimePoint, RatFunc};

fn plus(a: i64) -> i64 {
    a.max(0)
}

/// A skew-symmetric integer exchange matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BMatrix {
    n: usize,
    entries: Vec<i64>, // row-major
}

impl BMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("matrix must be square".into()));
        }
        let entries: Vec<i64> = rows.into_iter().flatten().collect();
        let b = BMatrix { n, entries };
        for i in 0..n {
            for j in 0..n {
                if b.entry(i, j) != -b.entry(j, i) {
                    return Err(Error::Invalid("matrix must be skew-symmetric".into()));
                }
            }
        }
        Ok(b)
    }

    pub fn zero(n: usize) -> Self {
        BMatrix { n, entries: vec![0; n * n] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|i| self.entries[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    /// Mutation at vertex `i` (0-based): involutive, skew-symmetry
    /// preserving.
    pub fn mutate(&self, i: usize) -> Result<BMatrix> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange { index: i, rank: self.n });
        }
        let mut out = BMatrix::zero(self.n);
        for j in 0..self.n {
            for k in 0..self.n {
                let b = self.entry(j, k);
                let val = if j == i || k == i {
                    b.checked_neg().ok_or(Error::ExponentOverflow)?
                } else {
                    let ji = self.entry(j, i);
                    let ik = self.entry(i, k);
                    let add = plus(ji)
                        .checked_mul(plus(ik))
                        .ok_or(Error::ExponentOverflow)?;
                    let sub = plus(-ji)
                        .checked_mul(plus(-ik))
                        .ok_or(Error::ExponentOverflow)?;
                    b.checked_add(add)
                        .and_then(|x| x.checked_sub(sub))
                        .ok_or(Error::ExponentOverflow)?
                };
                out.entries[j * self.n + k] = val;
            }
        }
        Ok(out)
    }

    /// Rank over the rationals, by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let n = self.n;
        let mut m: Vec<Vec<i128>> = (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j) as i128).collect())
            .collect();
        let mut rank = 0;
        for col in 0..n {
            let pivot = (rank..n).find(|&r| m[r][col] != 0);
            let Some(pivot) = pivot else { continue };
            m.swap(rank, pivot);
            for r in rank + 1..n {
                if m[r][col] != 0 {
                    let (a, b) = (m[rank][col], m[r][col]);
                    for c in 0..n {
                        m[r][c] = m[r][c] * a - m[rank][c] * b;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// `y_i = prod_j x_j^(b_ji)` as Laurent monomials in the x-ring.
    pub fn y_variables(&self) -> Vec<LaurentPoly> {
        (0..self.n)
            .map(|i| {
                let exps: Vec<i64> = (0..self.n).map(|j| self.entry(j, i)).collect();
                LaurentPoly::monomial(Monomial::new(exps), 1)
            })
            .collect()
    }

    /// Images of the x-variables under mutation at `i`: all variables are
    /// fixed except `x_i -> x_i^-1 prod_j x_j^[b_ij]_+ (1 + y_i)`.
    pub fn x_mutation_images(&self, i: usize) -> Result<Vec<RatFunc>> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange { index: i, rank: self.n });
        }
        let mut images = Vec::with_capacity(self.n);
        for j in 0..self.n {
            if j != i {
                images.push(RatFunc::var(self.n, j)?);
            } else {
                images.push(RatFunc::from_poly(self.x_image_at(i)?)?);
            }
        }
        Ok(images)
    }

    /// The mutated variable `x_i'` itself; a two-term Laurent polynomial.
    pub fn x_image_at(&self, i: usize) -> Result<LaurentPoly> {
        let mut exps: Vec<i64> = (0..self.n).map(|j| plus(self.entry(i, j))).collect();
        exps[i] = exps[i].checked_sub(1).ok_or(Error::ExponentOverflow)?;
        let head = LaurentPoly::monomial(Monomial::new(exps), 1);
        let y = &self.y_variables()[i];
        head.add(&head.mul(y)?)
    }

    /// Images of the y-variables under mutation at `i`:
    /// `y_i -> y_i^-1`, `y_j -> y_j y_i^[b_ij]_+ (1 + y_i)^(-b_ij)`.
    pub fn y_mutation_images(&self, i: usize) -> Result<Vec<RatFunc>> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange { index: i, rank: self.n });
        }
        let yi = RatFunc::var(self.n, i)?;
        let one_plus_yi = RatFunc::from_poly(
            LaurentPoly::one(self.n).add(&LaurentPoly::var(self.n, i))?,
        )?;
        let mut images = Vec::with_capacity(self.n);
        for j in 0..self.n {
            if j == i {
                images.push(yi.pow(-1)?);
            } else {
                let b = self.entry(i, j);
                let img = RatFunc::var(self.n, j)?
                    .mul(&yi.pow(plus(b))?)?
                    .mul(&one_plus_yi.pow(-b)?)?;
                images.push(img);
            }
        }
        Ok(images)
    }

    pub fn to_json(&self) -> Vec<Vec<i64>> {
        self.rows()
    }
}

/// A loop-free, 2-cycle-free multidigraph given by arrow multiplicities.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Quiver {
    n: usize,
    mult: Vec<u64>, // row-major, mult[i][j] = arrows i -> j
}

impl Quiver {
    pub fn new(n: usize, mult: Vec<u64>) -> Result<Self> {
        if mult.len() != n * n {
            return Err(Error::Invalid("multiplicity table must be n x n".into()));
        }
        let q = Quiver { n, mult };
        for i in 0..n {
            if q.arrows(i, i) != 0 {
                return Err(Error::Invalid("quiver must have no loops".into()));
            }
            for j in 0..n {
                if q.arrows(i, j) != 0 && q.arrows(j, i) != 0 {
                    return Err(Error::Invalid("quiver must have no 2-cycles".into()));
                }
            }
        }
        Ok(q)
    }

    /// `[-b_ij]_+` arrows from `i` to `j`.
    pub fn from_b(b: &BMatrix) -> Quiver {
        let n = b.size();
        let mut mult = vec![0u64; n * n];
        for i in 0..n {
            for j in 0..n {
                mult[i * n + j] = plus(-b.entry(i, j)) as u64;
            }
        }
        Quiver { n, mult }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn arrows(&self, i: usize, j: usize) -> u64 {
        self.mult[i * self.n + j]
    }

    pub fn arrow_classes(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        (0..self.n).flat_map(move |i| {
            (0..self.n).filter_map(move |j| {
                let m = self.arrows(i, j);
                (m > 0).then_some((i, j, m))
            })
        })
    }

    pub fn total_arrows(&self) -> u64 {
        self.mult.iter().sum()
    }

    /// Quiver mutation at `i`: reverse all arrows incident with `i`, add an
    /// arrow `j -> k` for every path `j -> i -> k`, then cancel opposite
    /// pairs.
    pub fn mutate(&self, i: usize) -> Result<Quiver> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange { index: i, rank: self.n });
        }
        let n = self.n;
        let mut mult = vec![0u64; n * n];
        for j in 0..n {
            for k in 0..n {
                if j == k {
                    continue;
                }
                mult[j * n + k] = if j == i {
                    self.arrows(k, i)
                } else if k == i {
                    self.arrows(i, j)
                } else {
                    self.arrows(j, k) + self.arrows(j, i) * self.arrows(i, k)
                };
            }
        }
        // cancel 2-cycles created by the composition step
        for j in 0..n {
            for k in j + 1..n {
                let c = mult[j * n + k].min(mult[k * n + j]);
                mult[j * n + k] -= c;
                mult[k * n + j] -= c;
            }
        }
        Quiver::new(n, mult)
    }

    /// Graphviz rendering with one edge per arrow class, labelled with the
    /// multiplicity.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph {name} {{\n");
        for v in 1..=self.n {
            out.push_str(&format!("  {v};\n"));
        }
        for (i, j, m) in self.arrow_classes() {
            out.push_str(&format!("  {} -> {} [label={}];\n", i + 1, j + 1, m));
        }
        out.push_str("}\n");
        out
    }
}

/// The initial exchange matrix of each surface, entrywise frozen data.
/// Recomputing it from the initial seed directions must reproduce these.
pub fn initial_b_matrix(surface: crate::lgseed::SurfaceId) -> BMatrix {
    use crate::lgseed::SurfaceId::*;
    let rows: Vec<Vec<i64>> = match surface {
        CP2 => vec![
            vec![0, 3, -3],
            vec![-3, 0, 3],
            vec![3, -3, 0],
        ],
        CP1xCP1 => vec![
            vec![0, -2, 2, 0],
            vec![2, 0, 0, -2],
            vec![-2, 0, 0, 2],
            vec![0, 2, -2, 0],
        ],
        Bl1CP2 => vec![
            vec![0, 3, -1, -2],
            vec![-3, 0, 2, 1],
            vec![1, -2, 0, 1],
            vec![2, -1, -1, 0],
        ],
        Bl2CP2 => vec![
            vec![0, 0, -1, -1, 2],
            vec![0, 0, 1, 1, -2],
            vec![1, -1, 0, 1, -1],
            vec![1, -1, -1, 0, 1],
            vec![-2, 2, 1, -1, 0],
        ],
        Bl3CP2 => vec![
            vec![0, 0, 1, -1, 1, -1],
            vec![0, 0, -1, 1, -1, 1],
            vec![-1, 1, 0, 0, 1, -1],
            vec![1, -1, 0, 0, -1, 1],
            vec![-1, 1, -1, 1, 0, 0],
            vec![1, -1, 1, -1, 0, 0],
        ],
    };
    BMatrix::new(rows).expect("static data")
}

/// One recorded mutation step: the vertex and the exchange matrix of the
/// seed before the step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStep {
    pub vertex: usize,
    pub b_before: BMatrix,
}

/// An ordered record of x-variable mutations. Applying the chain realizes
/// the composite automorphism of the cluster field, either exactly (by
/// iterated substitution) or pointwise over a prime field.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubstitutionChain {
    steps: Vec<ChainStep>,
}

impl SubstitutionChain {
    pub fn new() -> Self {
        SubstitutionChain { steps: Vec::new() }
    }

    pub fn push(&mut self, vertex: usize, b_before: BMatrix) {
        self.steps.push(ChainStep { vertex, b_before });
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[ChainStep] {
        &self.steps
    }

    /// Exact mode: step `k` substitutes the images of its mutation into the
    /// accumulated expression, first step first.
    pub fn apply_exact(&self, f: &RatFunc) -> Result<RatFunc> {
        let mut acc = f.clone();
        for step in &self.steps {
            let image = RatFunc::from_poly(step.b_before.x_image_at(step.vertex)?)?;
            acc = acc.substitute_single(step.vertex, &image)?;
        }
        Ok(acc)
    }

    /// Pointwise mode: transform the sample point through the point maps in
    /// reverse chain order; evaluating the base expression at the image
    /// computes the composite at O(len * n) field operations.
    pub fn transform_point(&self, pt: &PrimePoint) -> Result<PrimePoint> {
        self.point_maps()?.transform(pt)
    }

    /// Precomputes the per-step image polynomials for repeated pointwise
    /// evaluation.
    pub fn point_maps(&self) -> Result<PointMaps> {
        let maps = self
            .steps
            .iter()
            .rev()
            .map(|step| Ok((step.vertex, step.b_before.x_image_at(step.vertex)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(PointMaps { maps })
    }

    /// Evaluates `apply_exact(f)` at `pt` without symbolic work.
    pub fn eval_at_point(&self, f: &RatFunc, pt: &PrimePoint) -> Result<u64> {
        let q = self.transform_point(pt)?;
        f.eval_mod_p(&q)
    }
}

/// The point maps of a chain, in application (reverse chain) order.
#[derive(Clone, Debug)]
pub struct PointMaps {
    maps: Vec<(usize, LaurentPoly)>,
}

impl PointMaps {
    pub fn transform(&self, pt: &PrimePoint) -> Result<PrimePoint> {
        let mut q = pt.clone();
        for (vertex, image) in &self.maps {
            let value = image.eval_mod_p(&q)?;
            q = q.with_coord(*vertex, value);
        }
        Ok(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::text;

    pub fn cp2_b() -> BMatrix {
        BMatrix::new(vec![vec![0, 3, -3], vec![-3, 0, 3], vec![3, -3, 0]]).unwrap()
    }

    #[test]
    fn rejects_non_skew() {
        assert!(BMatrix::new(vec![vec![0, 1], vec![1, 0]]).is_err());
        assert!(BMatrix::new(vec![vec![1, 0], vec![0, 1]]).is_err());
        assert!(BMatrix::new(vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn mutation_example() {
        let b = cp2_b().mutate(0).unwrap();
        assert_eq!(b.rows(), vec![vec![0, -3, 3], vec![3, 0, -6], vec![-3, 6, 0]]);
    }

    #[test]
    fn mutation_is_involutive() {
        let b = cp2_b();
        for i in 0..3 {
            assert_eq!(b.mutate(i).unwrap().mutate(i).unwrap(), b);
        }
        let zero = BMatrix::zero(2);
        assert_eq!(zero.mutate(0).unwrap(), zero);
        assert_eq!(zero.mutate(1).unwrap(), zero);
    }

    #[test]
    fn quiver_from_cp2() {
        let q = Quiver::from_b(&cp2_b());
        assert_eq!(q.arrows(0, 2), 3);
        assert_eq!(q.arrows(2, 1), 3);
        assert_eq!(q.arrows(1, 0), 3);
        assert_eq!(q.total_arrows(), 9);
    }

    #[test]
    fn zero_matrix_gives_arrowless_quiver() {
        let q = Quiver::from_b(&BMatrix::zero(4));
        assert_eq!(q.total_arrows(), 0);
    }

    #[test]
    fn quiver_mutation_matches_matrix_mutation() {
        let b = cp2_b();
        for i in 0..3 {
            let lhs = Quiver::from_b(&b).mutate(i).unwrap();
            let rhs = Quiver::from_b(&b.mutate(i).unwrap());
            assert_eq!(lhs, rhs);
        }
        // the mutated triangle is 3, 3, 6
        let q = Quiver::from_b(&b).mutate(0).unwrap();
        let mut sizes: Vec<u64> = q.arrow_classes().map(|(_, _, m)| m).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![3, 3, 6]);
    }

    #[test]
    fn quiver_mutation_without_incident_arrows_is_identity() {
        // vertex 3 isolated
        let b = BMatrix::new(vec![
            vec![0, 2, 0],
            vec![-2, 0, 0],
            vec![0, 0, 0],
        ])
        .unwrap();
        let q = Quiver::from_b(&b);
        assert_eq!(q.mutate(2).unwrap(), q);
    }

    #[test]
    fn y_variables_cp2() {
        let ys = cp2_b().y_variables();
        let expect = ["x2^-3*x3^3", "x1^3*x3^-3", "x1^-3*x2^3"];
        for (y, e) in ys.iter().zip(expect) {
            assert_eq!(y, &text::parse(e, 3).unwrap());
        }
        assert!(BMatrix::zero(2).y_variables().iter().all(|y| y.is_one()));
    }

    #[test]
    fn x_mutation_image_cp2() {
        // x1' = x1^-1 x2^3 (1 + x2^-3 x3^3)
        let img = cp2_b().x_image_at(0).unwrap();
        assert_eq!(img, text::parse("x1^-1*x2^3 + x1^-1*x3^3", 3).unwrap());
        let images = cp2_b().x_mutation_images(0).unwrap();
        assert_eq!(images[1].as_poly().unwrap(), LaurentPoly::var(3, 1));
        assert_eq!(images[2].as_poly().unwrap(), LaurentPoly::var(3, 2));
    }

    #[test]
    fn x_mutation_zero_row_doubles() {
        // with b_i. = 0 the image is 2 x_i^-1
        let img = BMatrix::zero(2).x_image_at(0).unwrap();
        assert_eq!(img, text::parse("2*x1^-1", 2).unwrap());
    }

    #[test]
    fn y_mutation_involution() {
        let b = cp2_b();
        for i in 0..3 {
            let first = b.y_mutation_images(i).unwrap();
            let second = b.mutate(i).unwrap().y_mutation_images(i).unwrap();
            // y -> (second composed with first) must be the identity:
            // substitute the first images into each second image
            for (j, img) in second.iter().enumerate() {
                let composed = img.substitute(&first).unwrap();
                let expect = RatFunc::var(3, j).unwrap();
                assert!(composed.eq_exact(&expect).unwrap(), "vertex {i} var {j}");
            }
        }
    }

    #[test]
    fn y_mutation_inverse_pair() {
        let b = cp2_b();
        let images = b.y_mutation_images(1).unwrap();
        let prod = images[1].mul(&RatFunc::var(3, 1).unwrap()).unwrap();
        assert!(prod.eq_exact(&RatFunc::constant(3, 1).unwrap()).unwrap());
    }

    #[test]
    fn chain_empty_is_identity() {
        let chain = SubstitutionChain::new();
        let f = RatFunc::from_poly(text::parse("x1 + x2^-1", 3).unwrap()).unwrap();
        assert!(chain.apply_exact(&f).unwrap().eq_exact(&f).unwrap());
    }

    #[test]
    fn single_step_chain_is_plain_substitution() {
        let b = cp2_b();
        let mut chain = SubstitutionChain::new();
        chain.push(0, b.clone());
        let f = RatFunc::from_poly(text::parse("x1^2*x3 + x2", 3).unwrap()).unwrap();
        let direct = f.substitute(&b.x_mutation_images(0).unwrap()).unwrap();
        let chained = chain.apply_exact(&f).unwrap();
        assert!(direct.eq_exact(&chained).unwrap());
    }
}
