//! Rank-2 Drinfeld modules: φ_a for a ∈ F_q[T], the coefficients of
//! φ_{p(T)}, supersingularity by the middle-coefficient criterion, and the
//! partition-sum coefficient formula as an independent oracle.

use crate::error::{Error, Result};
use crate::field::{FFElement, FqPoly, Level, Tower};
use crate::partition::{enumerate_p, h_eval, w_of};
use crate::twisted::{tp_add, tp_mul, FrobeniusRing, LambdaRing, LevelRing, TwistedPoly};

/// A rank-2 module over a Frobenius coefficient ring: φ_T = ι(T) + A1 τ + A2 τ².
pub struct DrinfeldModule<R: FrobeniusRing> {
    ring: R,
    a1: R::Elem,
    a2: R::Elem,
}

impl<R: FrobeniusRing> Clone for DrinfeldModule<R> {
    fn clone(&self) -> Self {
        DrinfeldModule {
            ring: self.ring.clone(),
            a1: self.a1.clone(),
            a2: self.a2.clone(),
        }
    }
}

/// The 2d+1 coefficients g_0 … g_{2d} of φ_{p(T)}.
pub struct PpCoefficients<R: FrobeniusRing> {
    pub g: Vec<R::Elem>,
}

impl<R: FrobeniusRing> PpCoefficients<R> {
    /// The middle coefficient g_d, the supersingularity discriminant.
    pub fn middle(&self) -> &R::Elem {
        &self.g[(self.g.len() - 1) / 2]
    }
}

impl<R: FrobeniusRing> DrinfeldModule<R> {
    pub fn new(ring: R, a1: R::Elem, a2: R::Elem) -> Result<Self> {
        if ring.is_zero(&a2) {
            return Err(Error::Config("A2 must be nonzero".into()));
        }
        Ok(DrinfeldModule { ring, a1, a2 })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn a1(&self) -> &R::Elem {
        &self.a1
    }

    pub fn a2(&self) -> &R::Elem {
        &self.a2
    }

    pub fn tower(&self) -> &Tower {
        self.ring.tower()
    }

    /// φ_T = α + A1 τ + A2 τ² (the constant term is ι(T) = α).
    pub fn phi_t(&self) -> TwistedPoly<R> {
        let alpha = self.ring.embed_field(&self.tower().alpha());
        TwistedPoly::new(&self.ring, vec![alpha, self.a1.clone(), self.a2.clone()])
    }

    /// φ_a = Σ ι(a_i) · (φ_T)^i, computed by iterated twisted multiplication.
    pub fn phi_of(&self, a: &FqPoly) -> Result<TwistedPoly<R>> {
        let tower = self.tower().clone();
        let phi_t = self.phi_t();
        let mut acc = TwistedPoly::zero();
        let mut power = TwistedPoly::constant(&self.ring, self.ring.one());
        for (i, &c) in a.coeffs.iter().enumerate() {
            if i > 0 {
                power = tp_mul(&self.ring, &phi_t, &power);
            }
            let ci = tower.base_elem(c)?;
            if !ci.is_zero() {
                let scaled = tp_mul(
                    &self.ring,
                    &TwistedPoly::constant(&self.ring, self.ring.embed_field(&ci)),
                    &power,
                );
                acc = tp_add(&self.ring, &acc, &scaled);
            }
        }
        Ok(acc)
    }

    /// All coefficients of φ_{p(T)}. The d low coefficients must vanish;
    /// a failure there signals an arithmetic bug, so it asserts.
    pub fn pp_coeffs(&self) -> PpCoefficients<R> {
        let tower = self.tower().clone();
        let d = tower.d();
        let pp = self
            .phi_of(&FqPoly::new(tower.ideal().indices.clone()))
            .expect("ideal coefficients are valid");
        let mut g = Vec::with_capacity(2 * d + 1);
        for i in 0..=2 * d {
            g.push(pp.coeff(&self.ring, i));
        }
        for (i, gi) in g.iter().take(d).enumerate() {
            assert!(
                self.ring.is_zero(gi),
                "low coefficient g_{i} of the ideal image must vanish"
            );
        }
        PpCoefficients { g }
    }
}

pub type NumericDrinfeld = DrinfeldModule<LevelRing>;
pub type FamilyDrinfeld = DrinfeldModule<LambdaRing>;

impl NumericDrinfeld {
    /// Supersingular at the ideal iff the middle coefficient vanishes.
    pub fn is_supersingular(&self) -> bool {
        self.pp_coeffs().middle().is_zero()
    }

    /// j = A1^(q+1) / A2.
    pub fn j_invariant(&self) -> FFElement {
        let q = self.tower().q();
        self.a1
            .pow_u64(q + 1)
            .div(&self.a2)
            .expect("A2 is nonzero by construction")
    }

    /// The τ^n coefficient of φ_{T^m} by the partition-sum formula,
    /// with the complete homogeneous factor evaluated at α^(q^i).
    /// Zero for n < 0 or n > 2m.
    pub fn c_coeff(&self, n: i64, m: usize) -> FFElement {
        let tower = self.tower().clone();
        let level = self.ring.level();
        if n < 0 || n > 2 * m as i64 {
            return tower.zero(level);
        }
        let q = tower.q();
        let mut acc = tower.zero(level);
        for pair in enumerate_p(n) {
            let mut s: Vec<usize> = pair.s1.iter().chain(pair.s2.iter()).cloned().collect();
            s.sort_unstable();
            let mut sprime = s.clone();
            sprime.push(n as usize);
            let points: Vec<FFElement> =
                sprime.iter().map(|&i| tower.alpha().frob(i)).collect();
            let h = h_eval(m as i64 - s.len() as i64, &points, &tower, level);
            let term = self
                .a1
                .pow_big(&w_of(&pair.s1, q))
                .mul(&self.a2.pow_big(&w_of(&pair.s2, q)))
                .mul(&h);
            acc = acc.add(&term);
        }
        acc
    }
}

/// The λ-parametrized normal-form family A1 = α + λ, A2 = λ over L[λ].
pub fn normal_form_family(tower: &Tower, level: Level) -> FamilyDrinfeld {
    let ring = LambdaRing::new(tower, level);
    let a1 = ring.lambda().add(&ring.embed_field(&tower.alpha()));
    let a2 = ring.lambda();
    DrinfeldModule::new(ring, a1, a2).expect("λ is nonzero as a polynomial")
}

/// The normal form specialized at λ0 ≠ 0.
pub fn normal_form_at(tower: &Tower, lambda0: &FFElement) -> Result<NumericDrinfeld> {
    let level = lambda0.level();
    let ring = LevelRing::new(tower, level);
    let a1 = tower.alpha().embed_to(level).add(lambda0);
    DrinfeldModule::new(ring, a1, lambda0.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> Tower {
        Tower::build(3, &[1, 0, 1]).unwrap()
    }

    #[test]
    fn phi_t_is_the_defining_triple() {
        let t = f9();
        let ring = LevelRing::new(&t, Level::Mid);
        let a1 = t.element_from_index(Level::Mid, 5);
        let a2 = t.element_from_index(Level::Mid, 7);
        let dm = DrinfeldModule::new(ring.clone(), a1.clone(), a2.clone()).unwrap();
        let pt = dm.phi_of(&FqPoly::t()).unwrap();
        assert_eq!(pt.coeffs(), &[t.alpha(), a1, a2]);
    }

    #[test]
    fn zero_a2_is_rejected() {
        let t = f9();
        let ring = LevelRing::new(&t, Level::Mid);
        assert!(DrinfeldModule::new(ring, t.alpha(), t.zero(Level::Mid)).is_err());
    }

    #[test]
    fn degree_one_ideal_image() {
        // q=2, d=1, λ=1: φ_T = 1 + 0τ + τ², and φ_{T+1} = τ²
        let t = Tower::build(2, &[1, 1]).unwrap();
        let dm = normal_form_at(&t, &t.one(Level::Mid)).unwrap();
        let img = dm.phi_of(&FqPoly::new(vec![1, 1])).unwrap();
        assert_eq!(img.tau_degree(), Some(2));
        assert!(img.coeff(dm.ring(), 0).is_zero());
        assert!(img.coeff(dm.ring(), 1).is_zero());
        assert_eq!(img.coeff(dm.ring(), 2), t.one(Level::Mid));
    }

    #[test]
    fn middle_coefficient_for_degree_one_is_a1() {
        let t = Tower::build(2, &[1, 1]).unwrap();
        let ring = LevelRing::new(&t, Level::Top);
        for i in 0..4u64 {
            for j in 1..4u64 {
                let a1 = t.element_from_index(Level::Top, i);
                let a2 = t.element_from_index(Level::Top, j);
                let dm = DrinfeldModule::new(ring.clone(), a1.clone(), a2).unwrap();
                let pp = dm.pp_coeffs();
                assert_eq!(pp.middle(), &a1);
            }
        }
    }

    #[test]
    fn middle_coefficient_for_degree_two() {
        // d = 2: g_2 = A1^(q+1) − [1]·A2
        let t = f9();
        let ring = LevelRing::new(&t, Level::Mid);
        let q = t.q();
        for (i, j) in [(0u64, 5u64), (4, 1), (8, 8), (2, 6)] {
            let a1 = t.element_from_index(Level::Mid, i);
            let a2 = t.element_from_index(Level::Mid, j);
            if a2.is_zero() {
                continue;
            }
            let dm = DrinfeldModule::new(ring.clone(), a1.clone(), a2.clone()).unwrap();
            let expect = a1.pow_u64(q + 1).sub(&t.bracket(1).mul(&a2));
            assert_eq!(dm.pp_coeffs().middle(), &expect);
        }
    }

    #[test]
    fn middle_coefficient_for_degree_three() {
        // d = 3: g_3 = A1^(q²+q+1) − [1]A1^(q²)A2 − [2]A1 A2^q
        let t = Tower::build_auto(2, 3).unwrap();
        let ring = LevelRing::new(&t, Level::Mid);
        let q = t.q();
        for (i, j) in [(3u64, 5u64), (7, 2), (1, 6)] {
            let a1 = t.element_from_index(Level::Mid, i);
            let a2 = t.element_from_index(Level::Mid, j);
            if a2.is_zero() {
                continue;
            }
            let dm = DrinfeldModule::new(ring.clone(), a1.clone(), a2.clone()).unwrap();
            let expect = a1
                .pow_u64(q * q + q + 1)
                .sub(&t.bracket(1).mul(&a1.pow_u64(q * q)).mul(&a2))
                .sub(&t.bracket(2).mul(&a1).mul(&a2.pow_u64(q)));
            assert_eq!(dm.pp_coeffs().middle(), &expect);
        }
    }

    #[test]
    fn top_coefficient_in_normal_form() {
        // g_{2d} = λ^((q^{2d}−1)/(q²−1)) for the symbolic family
        for (q, d) in [(2u64, 1usize), (2, 2), (3, 2)] {
            let t = Tower::build_auto(q, d).unwrap();
            let fam = normal_form_family(&t, Level::Mid);
            let pp = fam.pp_coeffs();
            let exp = (q.pow(2 * d as u32) - 1) / (q * q - 1);
            let expect = fam.ring().lambda().pow_u64(exp);
            assert_eq!(pp.g[2 * d], expect);
        }
    }

    #[test]
    fn supersingularity_examples_degree_one() {
        let t = Tower::build(2, &[1, 1]).unwrap();
        // λ = 1: A1 = 1 + 1 = 0, supersingular
        let dm = normal_form_at(&t, &t.one(Level::Mid)).unwrap();
        assert!(dm.is_supersingular());
        // λ = ω outside F_2: A1 = 1 + ω ≠ 0, ordinary
        let omega = t
            .enumerate_level(Level::Top, 16)
            .unwrap()
            .into_iter()
            .find(|x| !x.is_zero() && x != &t.one(Level::Top) && x.mul(x).add(x).add(&t.one(Level::Top)).is_zero())
            .unwrap();
        let dm = normal_form_at(&t, &omega).unwrap();
        assert!(!dm.is_supersingular());
    }

    #[test]
    fn j_invariant_examples() {
        let t = Tower::build(2, &[1, 1]).unwrap();
        let ring = LevelRing::new(&t, Level::Top);
        // A1 = 0 gives j = 0
        let dm = DrinfeldModule::new(ring.clone(), t.zero(Level::Top), t.one(Level::Top)).unwrap();
        assert!(dm.j_invariant().is_zero());
        // λ = ω: j = (1+ω)³/ω = ω²
        let omega = t
            .enumerate_level(Level::Top, 16)
            .unwrap()
            .into_iter()
            .find(|x| x.mul(x).add(x).add(&t.one(Level::Top)).is_zero())
            .unwrap();
        let dm = normal_form_at(&t, &omega).unwrap();
        assert_eq!(dm.j_invariant(), omega.mul(&omega));
    }

    #[test]
    fn c_coeff_edge_cases() {
        let t = f9();
        let ring = LevelRing::new(&t, Level::Mid);
        let dm = DrinfeldModule::new(ring, t.element_from_index(Level::Mid, 5), t.alpha()).unwrap();
        assert!(dm.c_coeff(3, 1).is_zero());
        assert!(dm.c_coeff(-1, 2).is_zero());
        // constant term of φ_{T^m} is α^m
        for m in 0..=3usize {
            assert_eq!(dm.c_coeff(0, m), t.alpha().pow_u64(m as u64));
        }
        // τ² coefficient of φ_T is A2
        assert_eq!(dm.c_coeff(2, 1), t.alpha());
    }

    #[test]
    fn c_coeff_matches_twisted_computation() {
        for (q, d) in [(2u64, 2usize), (3, 2), (2, 3)] {
            let t = Tower::build_auto(q, d).unwrap();
            for level in [Level::Mid, Level::Top] {
                let ring = LevelRing::new(&t, level);
                let size = t.level_size_u64(level).unwrap();
                for seed in [3u64, 11, 17] {
                    let a1 = t.element_from_index(level, seed % size);
                    let a2 = t.element_from_index(level, 1 + seed * 7 % (size - 1));
                    let dm = DrinfeldModule::new(ring.clone(), a1, a2).unwrap();
                    for m in 0..=d {
                        let mut ttm = FqPoly::new(vec![1]);
                        for _ in 0..m {
                            ttm = t.fqpoly_mul(&ttm, &FqPoly::t());
                        }
                        let phi = dm.phi_of(&ttm).unwrap();
                        for n in -1..=(2 * m as i64 + 1) {
                            let direct = if (0..=2 * m as i64).contains(&n) {
                                phi.coeff(dm.ring(), n as usize)
                            } else {
                                t.zero(level)
                            };
                            assert_eq!(dm.c_coeff(n, m), direct, "q={q} d={d} n={n} m={m}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn mu_weighted_coefficient_sum_gives_the_middle() {
        // Σ_{i=⌈d/2⌉}^{d} μ_i · c(d; i) equals g_d
        for (q, d) in [(2u64, 2usize), (3, 2), (2, 3)] {
            let t = Tower::build_auto(q, d).unwrap();
            let ring = LevelRing::new(&t, Level::Top);
            let size = t.level_size_u64(Level::Top).unwrap();
            for seed in [5u64, 29] {
                let a1 = t.element_from_index(Level::Top, seed % size);
                let a2 = t.element_from_index(Level::Top, 1 + seed * 13 % (size - 1));
                let dm = DrinfeldModule::new(ring.clone(), a1, a2).unwrap();
                let mut acc = t.zero(Level::Top);
                for i in d.div_ceil(2)..=d {
                    let mu = t
                        .base_elem(t.ideal().indices[i])
                        .unwrap()
                        .embed_to(Level::Top);
                    acc = acc.add(&mu.mul(&dm.c_coeff(d as i64, i)));
                }
                assert_eq!(&acc, dm.pp_coeffs().middle(), "q={q} d={d}");
            }
        }
    }

    #[test]
    fn image_is_ring_homomorphism() {
        // φ_a φ_b = φ_{ab} = φ_b φ_a for small random a, b
        let t = f9();
        let ring = LevelRing::new(&t, Level::Mid);
        let dm =
            DrinfeldModule::new(ring.clone(), t.element_from_index(Level::Mid, 4), t.alpha())
                .unwrap();
        let polys = [
            FqPoly::new(vec![1, 2]),
            FqPoly::new(vec![0, 1, 1]),
            FqPoly::new(vec![2, 0, 0, 1]),
            FqPoly::new(vec![1]),
        ];
        for a in &polys {
            for b in &polys {
                let fa = dm.phi_of(a).unwrap();
                let fb = dm.phi_of(b).unwrap();
                let fab = dm.phi_of(&t.fqpoly_mul(a, b)).unwrap();
                assert_eq!(tp_mul(&ring, &fa, &fb), fab);
                assert_eq!(tp_mul(&ring, &fb, &fa), fab);
            }
        }
    }

    #[test]
    fn coefficient_recursion_of_the_ideal_image() {
        // (α^(q^i) − α) g_i = g_{i−2}^(q²) A2 − g_{i−2} A2^(q^{i−2})
        //                     + g_{i−1}^q A1 − g_{i−1} A1^(q^{i−1})
        let t = f9();
        let ring = LevelRing::new(&t, Level::Top);
        let d = t.d();
        let a1 = t.element_from_index(Level::Top, 23);
        let a2 = t.element_from_index(Level::Top, 57);
        let dm = DrinfeldModule::new(ring, a1.clone(), a2.clone()).unwrap();
        let pp = dm.pp_coeffs();
        let g = |i: i64| -> FFElement {
            if i < 0 || i > 2 * d as i64 {
                t.zero(Level::Top)
            } else {
                pp.g[i as usize].clone()
            }
        };
        let alpha = t.alpha().embed_to(Level::Top);
        for i in 0..=(2 * d as i64 + 2) {
            let lhs = alpha.frob(i as usize).sub(&alpha).mul(&g(i));
            let i2 = (i - 2).max(0) as usize;
            let i1 = (i - 1).max(0) as usize;
            let rhs = g(i - 2)
                .frob(2)
                .mul(&a2)
                .sub(&g(i - 2).mul(&a2.frob(i2)))
                .add(&g(i - 1).frob(1).mul(&a1))
                .sub(&g(i - 1).mul(&a1.frob(i1)));
            assert_eq!(lhs, rhs, "i = {i}");
        }
    }
}
