//! The finite-field tower F_q ⊂ F_{q^d} ⊂ F_{q^{2d}} and its elements.
//!
//! The middle level is F_q[x]/(p(x)) with α the residue class of x, so
//! "evaluate T at α" is the identity on residue classes. The top level is a
//! relative quadratic extension of the middle one, which makes the embedding
//! plain coefficient injection. Both defining polynomials are chosen by a
//! deterministic lexicographic scan so identical configurations rebuild
//! bit-identical towers.

mod engine;
pub mod upoly;

pub(crate) use engine::{dp, FieldOps, Fp, QuotientField};

use crate::error::{Error, Result};
use num_bigint::BigUint;
use serde::ser::{Serialize, SerializeStruct, Serializer};
use std::fmt;
use std::sync::Arc;

pub(crate) type FqField = QuotientField<Fp>;
pub(crate) type MidField = QuotientField<FqField>;
pub(crate) type TopField = QuotientField<MidField>;

type BaseRep = Vec<u64>;
type MidRep = Vec<BaseRep>;
type TopRep = Vec<MidRep>;

/// One of the three levels of the tower.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum Level {
    Base,
    Mid,
    Top,
}

impl Level {
    pub fn as_str(self) -> &'static str {
        match self {
            Level::Base => "base",
            Level::Mid => "mid",
            Level::Top => "top",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A prime power q = p^e.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimePower {
    pub p: u64,
    pub e: u32,
    pub q: u64,
}

impl PrimePower {
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::NotPrimePower(q));
        }
        let mut p = 0u64;
        let mut n = q;
        let mut d = 2u64;
        while d * d <= n {
            if n % d == 0 {
                p = d;
                while n % d == 0 {
                    n /= d;
                }
                break;
            }
            d += 1;
        }
        if p == 0 {
            p = n;
            n = 1;
        }
        if n != 1 {
            return Err(Error::NotPrimePower(q));
        }
        let mut e = 0u32;
        let mut acc = 1u64;
        while acc < q {
            acc = acc.checked_mul(p).ok_or(Error::NotPrimePower(q))?;
            e += 1;
        }
        if acc != q {
            return Err(Error::NotPrimePower(q));
        }
        Ok(PrimePower { p, e: e.max(1), q })
    }
}

/// The monic irreducible generator p(T) of the prime ideal, over F_q.
#[derive(Clone, Debug)]
pub struct PrimeIdeal {
    /// Ascending coefficients as F_q elements.
    pub coeffs: Vec<BaseRep>,
    /// The same coefficients index-encoded (integer in `0..q`, base-p digits).
    pub indices: Vec<u64>,
    pub d: usize,
}

/// A polynomial over F_q with index-encoded coefficients, ascending.
///
/// Coefficient `c` in `0..q` encodes the F_q element with base-p digit
/// vector of `c` over the chosen basis of F_q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqPoly {
    pub coeffs: Vec<u64>,
}

impl FqPoly {
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FqPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// The monomial T.
    pub fn t() -> Self {
        FqPoly::new(vec![0, 1])
    }
}

struct TowerInner {
    prime_power: PrimePower,
    fq: FqField,
    ideal: PrimeIdeal,
    mid: MidField,
    top: TopField,
    /// Quadratic modulus of the top level, index-encoded (c0, c1) over mid.
    top_modulus_indices: (u64, u64),
}

/// The shared, immutable tower context. Cloning is cheap (`Arc`).
#[derive(Clone)]
pub struct Tower(Arc<TowerInner>);

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Tower(q={}, p(T)={:?})",
            self.q(),
            self.0.ideal.indices
        )
    }
}

/// Deterministic pick: lexicographically smallest monic irreducible of
/// degree `e` over F_p, scanning the constant coefficient outermost.
fn base_modulus_for(p: u64, e: u32) -> Vec<u64> {
    let fp = Fp { p };
    let e = e as usize;
    let mut digits = vec![0u64; e];
    loop {
        let mut cand: Vec<u64> = digits.clone();
        cand.push(1);
        if dp::is_irreducible(&fp, &cand) {
            return cand;
        }
        // odometer with digits[0] (the constant term) most significant
        let mut i = e;
        loop {
            if i == 0 {
                unreachable!("an irreducible of every degree exists over F_p");
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
        }
    }
}

impl Tower {
    /// Build the tower for a given q and ideal generator p(T), whose
    /// coefficients are index-encoded F_q elements, ascending.
    pub fn build(q: u64, p_of_t: &[u64]) -> Result<Tower> {
        let prime_power = PrimePower::new(q)?;
        let fq = QuotientField::new(
            Fp { p: prime_power.p },
            base_modulus_for(prime_power.p, prime_power.e),
        );
        // decode and validate the ideal generator
        let mut indices: Vec<u64> = p_of_t.to_vec();
        while indices.last() == Some(&0) {
            indices.pop();
        }
        if indices.len() < 2 {
            return Err(Error::NotIrreducible);
        }
        for &c in &indices {
            if c >= q {
                return Err(Error::CoefficientOutOfRange(c, q));
            }
        }
        if *indices.last().unwrap() != 1 {
            return Err(Error::NotMonic);
        }
        let d = indices.len() - 1;
        if d == 1 && indices[0] == 0 {
            return Err(Error::IdealIsT);
        }
        let coeffs: Vec<BaseRep> = indices.iter().map(|&c| fq.elem_from_index(c)).collect();
        if !dp::is_irreducible(&fq, &coeffs) {
            return Err(Error::NotIrreducible);
        }
        let ideal = PrimeIdeal {
            coeffs: coeffs.clone(),
            indices,
            d,
        };
        let mid = QuotientField::new(fq.clone(), coeffs);

        // top quadratic: scan (constant, linear) in basis order
        let mid_size = mid
            .size_u64()
            .ok_or(Error::SearchSpaceTooLarge { size: u64::MAX, cap: u64::MAX })?;
        let mut top_modulus = None;
        'outer: for c0 in 0..mid_size {
            for c1 in 0..mid_size {
                let cand = vec![
                    mid.elem_from_index(c0),
                    mid.elem_from_index(c1),
                    mid.one(),
                ];
                if dp::is_irreducible(&mid, &cand) {
                    top_modulus = Some((cand, (c0, c1)));
                    break 'outer;
                }
            }
        }
        let (quad, top_modulus_indices) =
            top_modulus.expect("an irreducible quadratic exists over every finite field");
        let top = QuotientField::new(mid.clone(), quad);

        Ok(Tower(Arc::new(TowerInner {
            prime_power,
            fq,
            ideal,
            mid,
            top,
            top_modulus_indices,
        })))
    }

    /// Build with the lexicographically smallest monic irreducible of degree
    /// `d` over F_q that has a nonzero constant term.
    pub fn build_auto(q: u64, d: usize) -> Result<Tower> {
        if d == 0 {
            return Err(Error::NotIrreducible);
        }
        let prime_power = PrimePower::new(q)?;
        let fq = QuotientField::new(
            Fp { p: prime_power.p },
            base_modulus_for(prime_power.p, prime_power.e),
        );
        let mut digits = vec![0u64; d];
        digits[0] = 1;
        loop {
            let mut cand: Vec<BaseRep> =
                digits.iter().map(|&c| fq.elem_from_index(c)).collect();
            cand.push(fq.one());
            if dp::is_irreducible(&fq, &cand) {
                let mut idx = digits.clone();
                idx.push(1);
                return Tower::build(q, &idx);
            }
            let mut i = d;
            loop {
                if i == 0 {
                    return Err(Error::NotIrreducible);
                }
                i -= 1;
                digits[i] += 1;
                let floor = if i == 0 { 1 } else { 0 };
                if digits[i] < q {
                    break;
                }
                digits[i] = floor;
            }
        }
    }

    pub fn prime_power(&self) -> PrimePower {
        self.0.prime_power
    }

    pub fn q(&self) -> u64 {
        self.0.prime_power.q
    }

    pub fn p(&self) -> u64 {
        self.0.prime_power.p
    }

    pub fn d(&self) -> usize {
        self.0.ideal.d
    }

    pub fn ideal(&self) -> &PrimeIdeal {
        &self.0.ideal
    }

    /// Index encoding (c0, c1) of the quadratic defining the top level.
    pub fn top_modulus_indices(&self) -> (u64, u64) {
        self.0.top_modulus_indices
    }

    pub(crate) fn fq_field(&self) -> &FqField {
        &self.0.fq
    }

    pub fn level_degree(&self, level: Level) -> usize {
        match level {
            Level::Base => 1,
            Level::Mid => self.d(),
            Level::Top => 2 * self.d(),
        }
    }

    /// Number of elements at a level.
    pub fn level_size(&self, level: Level) -> BigUint {
        match level {
            Level::Base => self.0.fq.size(),
            Level::Mid => self.0.mid.size(),
            Level::Top => self.0.top.size(),
        }
    }

    pub fn level_size_u64(&self, level: Level) -> Option<u64> {
        match level {
            Level::Base => self.0.fq.size_u64(),
            Level::Mid => self.0.mid.size_u64(),
            Level::Top => self.0.top.size_u64(),
        }
    }

    /// Frobenius period of a level: k with x^(q^k) = x for all x.
    pub fn frob_period(&self, level: Level) -> usize {
        match level {
            Level::Base => 1,
            Level::Mid => self.d(),
            Level::Top => 2 * self.d(),
        }
    }

    pub fn zero(&self, level: Level) -> FFElement {
        let rep = match level {
            Level::Base => Rep::Base(self.0.fq.zero()),
            Level::Mid => Rep::Mid(self.0.mid.zero()),
            Level::Top => Rep::Top(self.0.top.zero()),
        };
        FFElement { tower: self.clone(), rep }
    }

    pub fn one(&self, level: Level) -> FFElement {
        let rep = match level {
            Level::Base => Rep::Base(self.0.fq.one()),
            Level::Mid => Rep::Mid(self.0.mid.one()),
            Level::Top => Rep::Top(self.0.top.one()),
        };
        FFElement { tower: self.clone(), rep }
    }

    /// The fixed root α of p(T): the residue class of x in F_q[x]/(p(x)).
    pub fn alpha(&self) -> FFElement {
        FFElement {
            tower: self.clone(),
            rep: Rep::Mid(self.0.mid.generator()),
        }
    }

    /// bracket(n) = α^(q^n) − α, at mid level. Periodic in n with period d.
    pub fn bracket(&self, n: usize) -> FFElement {
        let a = self.alpha();
        a.frob(n).sub(&a)
    }

    /// Small integer as a field element (reduces through the characteristic).
    pub fn scalar(&self, level: Level, k: u64) -> FFElement {
        let r = k % self.p();
        let base = FFElement {
            tower: self.clone(),
            rep: Rep::Base(self.0.fq.from_base(r)),
        };
        base.embed_to(level)
    }

    /// Element from its scan index at a level (deterministic basis order).
    pub fn element_from_index(&self, level: Level, idx: u64) -> FFElement {
        let rep = match level {
            Level::Base => Rep::Base(self.0.fq.elem_from_index(idx)),
            Level::Mid => Rep::Mid(self.0.mid.elem_from_index(idx)),
            Level::Top => Rep::Top(self.0.top.elem_from_index(idx)),
        };
        FFElement { tower: self.clone(), rep }
    }

    pub fn index_of(&self, x: &FFElement) -> u64 {
        match &x.rep {
            Rep::Base(r) => self.0.fq.index_of(r),
            Rep::Mid(r) => self.0.mid.index_of(r),
            Rep::Top(r) => self.0.top.index_of(r),
        }
    }

    /// All elements of a level, guarded by a scan cap.
    pub fn enumerate_level(&self, level: Level, cap: u64) -> Result<Vec<FFElement>> {
        let size = self
            .level_size_u64(level)
            .filter(|&s| s <= cap)
            .ok_or_else(|| Error::SearchSpaceTooLarge {
                size: self.level_size_u64(level).unwrap_or(u64::MAX),
                cap,
            })?;
        Ok((0..size).map(|i| self.element_from_index(level, i)).collect())
    }

    /// Decode one index-encoded F_q coefficient into a base-level element.
    pub fn base_elem(&self, index: u64) -> Result<FFElement> {
        if index >= self.q() {
            return Err(Error::CoefficientOutOfRange(index, self.q()));
        }
        Ok(FFElement {
            tower: self.clone(),
            rep: Rep::Base(self.0.fq.elem_from_index(index)),
        })
    }

    /// Evaluate an FqPoly at a field element (coefficients embedded upward).
    pub fn eval_fqpoly(&self, a: &FqPoly, x: &FFElement) -> Result<FFElement> {
        let level = x.level();
        let mut acc = self.zero(level);
        for &c in a.coeffs.iter().rev() {
            let ce = self.base_elem(c)?.embed_to(level);
            acc = acc.mul(x).add(&ce);
        }
        Ok(acc)
    }

    pub fn fqpoly_add(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let fq = &self.0.fq;
        let av: Vec<BaseRep> = a.coeffs.iter().map(|&c| fq.elem_from_index(c)).collect();
        let bv: Vec<BaseRep> = b.coeffs.iter().map(|&c| fq.elem_from_index(c)).collect();
        let s = dp::add(fq, &av, &bv);
        FqPoly::new(s.iter().map(|c| fq.index_of(c)).collect())
    }

    pub fn fqpoly_mul(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let fq = &self.0.fq;
        let av: Vec<BaseRep> = a.coeffs.iter().map(|&c| fq.elem_from_index(c)).collect();
        let bv: Vec<BaseRep> = b.coeffs.iter().map(|&c| fq.elem_from_index(c)).collect();
        let s = dp::mul(fq, &av, &bv);
        FqPoly::new(s.iter().map(|c| fq.index_of(c)).collect())
    }

    pub(crate) fn same_tower(&self, other: &Tower) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Rep {
    Base(BaseRep),
    Mid(MidRep),
    Top(TopRep),
}

/// An element of one of the three tower levels.
#[derive(Clone)]
pub struct FFElement {
    tower: Tower,
    rep: Rep,
}

impl PartialEq for FFElement {
    fn eq(&self, other: &Self) -> bool {
        debug_assert!(self.tower.same_tower(&other.tower));
        self.rep == other.rep
    }
}

impl Eq for FFElement {}

impl fmt::Debug for FFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{:?}", self.level().as_str(), self.residue_vectors())
    }
}

macro_rules! binop {
    ($name:ident) => {
        pub fn $name(&self, other: &FFElement) -> FFElement {
            assert!(
                self.level() == other.level(),
                "level mismatch: {} vs {}",
                self.level(),
                other.level()
            );
            let t = &self.tower;
            let rep = match (&self.rep, &other.rep) {
                (Rep::Base(a), Rep::Base(b)) => Rep::Base(t.0.fq.$name(a, b)),
                (Rep::Mid(a), Rep::Mid(b)) => Rep::Mid(t.0.mid.$name(a, b)),
                (Rep::Top(a), Rep::Top(b)) => Rep::Top(t.0.top.$name(a, b)),
                _ => unreachable!(),
            };
            FFElement { tower: t.clone(), rep }
        }
    };
}

impl FFElement {
    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn level(&self) -> Level {
        match self.rep {
            Rep::Base(_) => Level::Base,
            Rep::Mid(_) => Level::Mid,
            Rep::Top(_) => Level::Top,
        }
    }

    pub fn is_zero(&self) -> bool {
        let t = &self.tower;
        match &self.rep {
            Rep::Base(r) => t.0.fq.is_zero(r),
            Rep::Mid(r) => t.0.mid.is_zero(r),
            Rep::Top(r) => t.0.top.is_zero(r),
        }
    }

    binop!(add);
    binop!(sub);
    binop!(mul);

    pub fn neg(&self) -> FFElement {
        let t = &self.tower;
        let rep = match &self.rep {
            Rep::Base(r) => Rep::Base(t.0.fq.neg(r)),
            Rep::Mid(r) => Rep::Mid(t.0.mid.neg(r)),
            Rep::Top(r) => Rep::Top(t.0.top.neg(r)),
        };
        FFElement { tower: t.clone(), rep }
    }

    pub fn inv(&self) -> Result<FFElement> {
        let t = &self.tower;
        let rep = match &self.rep {
            Rep::Base(r) => Rep::Base(t.0.fq.inv(r).ok_or(Error::DivisionByZero)?),
            Rep::Mid(r) => Rep::Mid(t.0.mid.inv(r).ok_or(Error::DivisionByZero)?),
            Rep::Top(r) => Rep::Top(t.0.top.inv(r).ok_or(Error::DivisionByZero)?),
        };
        Ok(FFElement { tower: t.clone(), rep })
    }

    pub fn div(&self, other: &FFElement) -> Result<FFElement> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow_u64(&self, mut e: u64) -> FFElement {
        let mut acc = self.tower.one(self.level());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Square-and-multiply over an arbitrary-precision exponent.
    pub fn pow_big(&self, e: &BigUint) -> FFElement {
        let mut acc = self.tower.one(self.level());
        let bits = e.bits();
        for i in (0..bits).rev() {
            acc = acc.mul(&acc);
            if e.bit(i) {
                acc = acc.mul(self);
            }
        }
        acc
    }

    /// x^(q^k), computed by repeated q-power maps. frob(x, period) = x.
    pub fn frob(&self, k: usize) -> FFElement {
        let period = self.tower.frob_period(self.level());
        let k = k % period;
        let q = self.tower.q();
        let mut out = self.clone();
        for _ in 0..k {
            out = out.pow_u64(q);
        }
        out
    }

    /// Embed into a higher (or equal) level by coefficient injection.
    pub fn embed_to(&self, target: Level) -> FFElement {
        let t = &self.tower;
        assert!(
            target >= self.level(),
            "cannot embed {} into {}",
            self.level(),
            target
        );
        let mut cur = self.clone();
        loop {
            match (cur.level(), target) {
                (a, b) if a == b => return cur,
                (Level::Base, _) => {
                    let r = match &cur.rep {
                        Rep::Base(r) => r.clone(),
                        _ => unreachable!(),
                    };
                    cur = FFElement {
                        tower: t.clone(),
                        rep: Rep::Mid(t.0.mid.from_base(r)),
                    };
                }
                (Level::Mid, Level::Top) => {
                    let r = match &cur.rep {
                        Rep::Mid(r) => r.clone(),
                        _ => unreachable!(),
                    };
                    cur = FFElement {
                        tower: t.clone(),
                        rep: Rep::Top(t.0.top.from_base(r)),
                    };
                }
                _ => unreachable!(),
            }
        }
    }

    /// The element as a list of base-level residue vectors over F_p
    /// (length 1 at base, d at mid, 2d at top).
    pub fn residue_vectors(&self) -> Vec<Vec<u64>> {
        match &self.rep {
            Rep::Base(r) => vec![r.clone()],
            Rep::Mid(r) => r.clone(),
            Rep::Top(r) => r.iter().flat_map(|m| m.iter().cloned()).collect(),
        }
    }

    /// Scan index of the element in its level's basis order.
    pub fn index(&self) -> u64 {
        self.tower.index_of(self)
    }
}

impl Serialize for FFElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("FFElement", 2)?;
        s.serialize_field("level", self.level().as_str())?;
        s.serialize_field("coeffs", &self.residue_vectors())?;
        s.end()
    }
}

/// FieldOps adapter for a tower level; lets the generic polynomial engine
/// run directly on `FFElement` values (univariate work over any level).
#[derive(Clone)]
pub(crate) struct LevelField {
    pub tower: Tower,
    pub level: Level,
}

impl FieldOps for LevelField {
    type E = FFElement;

    fn zero(&self) -> FFElement {
        self.tower.zero(self.level)
    }
    fn one(&self) -> FFElement {
        self.tower.one(self.level)
    }
    fn is_zero(&self, a: &FFElement) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &FFElement, b: &FFElement) -> FFElement {
        a.add(b)
    }
    fn sub(&self, a: &FFElement, b: &FFElement) -> FFElement {
        a.sub(b)
    }
    fn neg(&self, a: &FFElement) -> FFElement {
        a.neg()
    }
    fn mul(&self, a: &FFElement, b: &FFElement) -> FFElement {
        a.mul(b)
    }
    fn inv(&self, a: &FFElement) -> Option<FFElement> {
        a.inv().ok()
    }
    fn size(&self) -> BigUint {
        self.tower.level_size(self.level)
    }
    fn size_u64(&self) -> Option<u64> {
        self.tower.level_size_u64(self.level)
    }
    fn elem_from_index(&self, idx: u64) -> FFElement {
        self.tower.element_from_index(self.level, idx)
    }
    fn index_of(&self, a: &FFElement) -> u64 {
        self.tower.index_of(a)
    }
}
