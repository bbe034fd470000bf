//! The skew polynomial ring R{τ} with commutation rule τ·r = r^q·τ.
//!
//! The coefficient ring is abstracted behind [`FrobeniusRing`] so the same
//! multiplication code runs with numeric field coefficients and with
//! coefficients in L[λ]; on the polynomial ring the map is the genuine ring
//! Frobenius (coefficients to the q-th power, exponents times q).

use crate::error::{Error, Result};
use crate::field::upoly::UPoly;
use crate::field::{FFElement, Level, Tower};
use num_bigint::BigUint;
use serde::ser::{Serialize, SerializeStruct, Serializer};
use std::fmt::Debug;

/// A commutative coefficient ring carrying the q-power Frobenius.
pub trait FrobeniusRing: Clone {
    type Elem: Clone + PartialEq + Debug;

    fn tower(&self) -> &Tower;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// r ↦ r^q.
    fn frob(&self, a: &Self::Elem) -> Self::Elem;
    /// Embed a tower element living at or below the ring's field level.
    fn embed_field(&self, x: &FFElement) -> Self::Elem;
    fn same_ring(&self, other: &Self) -> bool;
    /// True when the element belongs to this ring (level agreement).
    fn contains(&self, a: &Self::Elem) -> bool;
    /// True when elements are single field values (not polynomial families).
    fn is_numeric(&self) -> bool;

    fn frob_k(&self, a: &Self::Elem, k: usize) -> Self::Elem {
        let mut out = a.clone();
        for _ in 0..k {
            out = self.frob(&out);
        }
        out
    }

    fn pow_big(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }
}

/// A tower level as a Frobenius ring.
#[derive(Clone)]
pub struct LevelRing {
    tower: Tower,
    level: Level,
}

impl LevelRing {
    pub fn new(tower: &Tower, level: Level) -> Self {
        LevelRing { tower: tower.clone(), level }
    }

    pub fn level(&self) -> Level {
        self.level
    }
}

impl FrobeniusRing for LevelRing {
    type Elem = FFElement;

    fn tower(&self) -> &Tower {
        &self.tower
    }
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
    fn frob(&self, a: &FFElement) -> FFElement {
        a.frob(1)
    }
    fn embed_field(&self, x: &FFElement) -> FFElement {
        x.embed_to(self.level)
    }
    fn same_ring(&self, other: &Self) -> bool {
        self.tower.same_tower(&other.tower) && self.level == other.level
    }
    fn contains(&self, a: &FFElement) -> bool {
        a.level() == self.level
    }
    fn is_numeric(&self) -> bool {
        true
    }
}

/// The polynomial ring L[λ] over a tower level as a Frobenius ring.
#[derive(Clone)]
pub struct LambdaRing {
    tower: Tower,
    level: Level,
}

impl LambdaRing {
    pub fn new(tower: &Tower, level: Level) -> Self {
        LambdaRing { tower: tower.clone(), level }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    /// The family parameter λ.
    pub fn lambda(&self) -> UPoly {
        UPoly::x(&self.tower, self.level)
    }
}

impl FrobeniusRing for LambdaRing {
    type Elem = UPoly;

    fn tower(&self) -> &Tower {
        &self.tower
    }
    fn zero(&self) -> UPoly {
        UPoly::zero(&self.tower, self.level)
    }
    fn one(&self) -> UPoly {
        UPoly::one(&self.tower, self.level)
    }
    fn is_zero(&self, a: &UPoly) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &UPoly, b: &UPoly) -> UPoly {
        a.add(b)
    }
    fn sub(&self, a: &UPoly, b: &UPoly) -> UPoly {
        a.sub(b)
    }
    fn neg(&self, a: &UPoly) -> UPoly {
        a.neg()
    }
    fn mul(&self, a: &UPoly, b: &UPoly) -> UPoly {
        a.mul(b)
    }
    fn frob(&self, a: &UPoly) -> UPoly {
        a.frobenius_q()
    }
    fn embed_field(&self, x: &FFElement) -> UPoly {
        UPoly::constant(x.embed_to(self.level))
    }
    fn same_ring(&self, other: &Self) -> bool {
        self.tower.same_tower(&other.tower) && self.level == other.level
    }
    fn contains(&self, a: &UPoly) -> bool {
        a.level() == self.level
    }
    fn is_numeric(&self) -> bool {
        false
    }
}

/// Element of R{τ}: ascending τ-coefficients, no trailing zeros.
pub struct TwistedPoly<R: FrobeniusRing> {
    coeffs: Vec<R::Elem>,
}

impl<R: FrobeniusRing> Clone for TwistedPoly<R> {
    fn clone(&self) -> Self {
        TwistedPoly { coeffs: self.coeffs.clone() }
    }
}

impl<R: FrobeniusRing> PartialEq for TwistedPoly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<R: FrobeniusRing> Debug for TwistedPoly<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TwistedPoly{:?}", self.coeffs)
    }
}

impl<R: FrobeniusRing> TwistedPoly<R> {
    pub fn new(ring: &R, mut coeffs: Vec<R::Elem>) -> Self {
        debug_assert!(coeffs.iter().all(|c| ring.contains(c)));
        while coeffs.last().map(|c| ring.is_zero(c)).unwrap_or(false) {
            coeffs.pop();
        }
        TwistedPoly { coeffs }
    }

    /// Validating constructor: every coefficient must belong to the ring.
    pub fn checked_new(ring: &R, coeffs: Vec<R::Elem>) -> Result<Self> {
        if !coeffs.iter().all(|c| ring.contains(c)) {
            return Err(Error::RingMismatch);
        }
        Ok(TwistedPoly::new(ring, coeffs))
    }

    pub fn zero() -> Self {
        TwistedPoly { coeffs: Vec::new() }
    }

    pub fn constant(ring: &R, c: R::Elem) -> Self {
        TwistedPoly::new(ring, vec![c])
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, ring: &R, i: usize) -> R::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| ring.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in τ; `None` for the zero element.
    pub fn tau_degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }
}

pub fn tp_add<R: FrobeniusRing>(ring: &R, f: &TwistedPoly<R>, g: &TwistedPoly<R>) -> TwistedPoly<R> {
    let n = f.coeffs.len().max(g.coeffs.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let a = f.coeffs.get(i).cloned().unwrap_or_else(|| ring.zero());
        let b = g.coeffs.get(i).cloned().unwrap_or_else(|| ring.zero());
        out.push(ring.add(&a, &b));
    }
    TwistedPoly::new(ring, out)
}

pub fn tp_sub<R: FrobeniusRing>(ring: &R, f: &TwistedPoly<R>, g: &TwistedPoly<R>) -> TwistedPoly<R> {
    let n = f.coeffs.len().max(g.coeffs.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let a = f.coeffs.get(i).cloned().unwrap_or_else(|| ring.zero());
        let b = g.coeffs.get(i).cloned().unwrap_or_else(|| ring.zero());
        out.push(ring.sub(&a, &b));
    }
    TwistedPoly::new(ring, out)
}

/// (a τ^i)(b τ^j) = a · b^(q^i) τ^(i+j), extended bilinearly. Noncommutative.
pub fn tp_mul<R: FrobeniusRing>(ring: &R, f: &TwistedPoly<R>, g: &TwistedPoly<R>) -> TwistedPoly<R> {
    if f.is_zero() || g.is_zero() {
        return TwistedPoly::zero();
    }
    let mut out = vec![ring.zero(); f.coeffs.len() + g.coeffs.len() - 1];
    for (i, a) in f.coeffs.iter().enumerate() {
        if ring.is_zero(a) {
            continue;
        }
        for (j, b) in g.coeffs.iter().enumerate() {
            if ring.is_zero(b) {
                continue;
            }
            let t = ring.mul(a, &ring.frob_k(b, i));
            out[i + j] = ring.add(&out[i + j], &t);
        }
    }
    TwistedPoly::new(ring, out)
}

/// Evaluate Σ g_i x^(q^i) at a point of the coefficient level or an
/// extension of it.
pub fn tp_eval_linearized(
    ring: &LevelRing,
    f: &TwistedPoly<LevelRing>,
    x: &FFElement,
) -> Result<FFElement> {
    if x.level() < ring.level() {
        return Err(Error::LevelMismatch);
    }
    let target = x.level();
    let mut acc = ring.tower().zero(target);
    for (i, c) in f.coeffs.iter().enumerate() {
        let term = c.embed_to(target).mul(&x.frob(i));
        acc = acc.add(&term);
    }
    Ok(acc)
}

impl<R: FrobeniusRing> Serialize for TwistedPoly<R>
where
    R::Elem: Serialize,
{
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("TwistedPoly", 1)?;
        s.serialize_field("tau_coeffs", &self.coeffs)?;
        s.end()
    }
}
