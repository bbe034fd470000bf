//! Dense univariate polynomials over a tower level.
//!
//! Coefficients ascend and carry no trailing zeros; the zero polynomial has
//! degree `None` (the distinguished "minus infinity" marker).

use super::{dp, FFElement, Level, LevelField, Tower};
use crate::error::{Error, Result};
use serde::ser::{Serialize, SerializeStruct, Serializer};
use std::fmt;

#[derive(Clone)]
pub struct UPoly {
    tower: Tower,
    level: Level,
    coeffs: Vec<FFElement>,
}

impl PartialEq for UPoly {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level && self.coeffs == other.coeffs
    }
}

impl Eq for UPoly {}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly[{}]{:?}", self.level, self.coeffs)
    }
}

impl UPoly {
    fn field(&self) -> LevelField {
        LevelField { tower: self.tower.clone(), level: self.level }
    }

    pub fn zero(tower: &Tower, level: Level) -> UPoly {
        UPoly { tower: tower.clone(), level, coeffs: Vec::new() }
    }

    pub fn one(tower: &Tower, level: Level) -> UPoly {
        UPoly::constant(tower.one(level))
    }

    pub fn constant(c: FFElement) -> UPoly {
        let tower = c.tower().clone();
        let level = c.level();
        let coeffs = if c.is_zero() { Vec::new() } else { vec![c] };
        UPoly { tower, level, coeffs }
    }

    /// The variable itself.
    pub fn x(tower: &Tower, level: Level) -> UPoly {
        UPoly {
            tower: tower.clone(),
            level,
            coeffs: vec![tower.zero(level), tower.one(level)],
        }
    }

    pub fn monomial(c: FFElement, deg: usize) -> UPoly {
        let tower = c.tower().clone();
        let level = c.level();
        if c.is_zero() {
            return UPoly::zero(&tower, level);
        }
        let mut coeffs = vec![tower.zero(level); deg + 1];
        coeffs[deg] = c;
        UPoly { tower, level, coeffs }
    }

    pub fn from_coeffs(tower: &Tower, level: Level, coeffs: Vec<FFElement>) -> UPoly {
        for c in &coeffs {
            assert_eq!(c.level(), level, "coefficient level mismatch");
        }
        let f = LevelField { tower: tower.clone(), level };
        UPoly {
            tower: tower.clone(),
            level,
            coeffs: dp::normalized(&f, coeffs),
        }
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn coeffs(&self) -> &[FFElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FFElement {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.tower.zero(self.level))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` is the zero polynomial's degree.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading_coeff(&self) -> Option<&FFElement> {
        self.coeffs.last()
    }

    fn wrap(&self, coeffs: Vec<FFElement>) -> UPoly {
        UPoly { tower: self.tower.clone(), level: self.level, coeffs }
    }

    fn check_level(&self, other: &UPoly) -> Result<()> {
        if self.level != other.level {
            return Err(Error::LevelMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        assert_eq!(self.level, other.level, "level mismatch");
        self.wrap(dp::add(&self.field(), &self.coeffs, &other.coeffs))
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        assert_eq!(self.level, other.level, "level mismatch");
        self.wrap(dp::sub(&self.field(), &self.coeffs, &other.coeffs))
    }

    pub fn neg(&self) -> UPoly {
        self.wrap(dp::neg(&self.field(), &self.coeffs))
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        assert_eq!(self.level, other.level, "level mismatch");
        self.wrap(dp::mul(&self.field(), &self.coeffs, &other.coeffs))
    }

    pub fn scale(&self, c: &FFElement) -> UPoly {
        assert_eq!(self.level, c.level(), "level mismatch");
        self.wrap(dp::scalar_mul(&self.field(), &self.coeffs, c))
    }

    /// Multiply by x^k.
    pub fn shift_up(&self, k: usize) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.tower.zero(self.level); k];
        coeffs.extend(self.coeffs.iter().cloned());
        self.wrap(coeffs)
    }

    pub fn pow_u64(&self, e: u64) -> UPoly {
        self.wrap(dp::pow_u64(&self.field(), &self.coeffs, e))
    }

    pub fn divrem(&self, other: &UPoly) -> Result<(UPoly, UPoly)> {
        self.check_level(other)?;
        let (q, r) =
            dp::divrem(&self.field(), &self.coeffs, &other.coeffs).ok_or(Error::DivisionByZero)?;
        Ok((self.wrap(q), self.wrap(r)))
    }

    /// True when `other` divides `self` exactly.
    pub fn divisible_by(&self, other: &UPoly) -> Result<bool> {
        let (_, r) = self.divrem(other)?;
        Ok(r.is_zero())
    }

    /// Monic greatest common divisor; gcd(f, 0) = monic(f).
    pub fn gcd(&self, other: &UPoly) -> Result<UPoly> {
        self.check_level(other)?;
        Ok(self.wrap(dp::gcd_monic(&self.field(), &self.coeffs, &other.coeffs)))
    }

    pub fn make_monic(&self) -> UPoly {
        self.wrap(dp::make_monic(&self.field(), self.coeffs.clone()))
    }

    /// Formal derivative (through the characteristic).
    pub fn derivative(&self) -> UPoly {
        self.wrap(dp::derivative(&self.field(), &self.coeffs, self.tower.p()))
    }

    /// Evaluate at a point of the same or a higher level.
    pub fn eval(&self, x: &FFElement) -> FFElement {
        assert!(x.level() >= self.level, "evaluation point below coefficient level");
        let target = x.level();
        let mut acc = self.tower.zero(target);
        if target == self.level {
            for c in self.coeffs.iter().rev() {
                acc = acc.mul(x).add(c);
            }
        } else {
            for c in self.coeffs.iter().rev() {
                acc = acc.mul(x).add(&c.embed_to(target));
            }
        }
        acc
    }

    /// Horner composition self(g).
    pub fn compose(&self, g: &UPoly) -> UPoly {
        assert_eq!(self.level, g.level(), "level mismatch");
        self.wrap(dp::compose(&self.field(), &self.coeffs, &g.coeffs))
    }

    /// Coefficient-wise embedding into a higher level.
    pub fn embed_to(&self, target: Level) -> UPoly {
        UPoly {
            tower: self.tower.clone(),
            level: target,
            coeffs: self.coeffs.iter().map(|c| c.embed_to(target)).collect(),
        }
    }

    /// The genuine ring Frobenius on the polynomial ring: coefficients are
    /// raised to the q-th power and exponents multiplied by q.
    pub fn frobenius_q(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let q = self.tower.q() as usize;
        let n = (self.coeffs.len() - 1) * q + 1;
        let mut coeffs = vec![self.tower.zero(self.level); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[i * q] = c.frob(1);
            }
        }
        self.wrap(coeffs)
    }

    /// All roots in `level`, by exhaustive evaluation under a scan cap.
    pub fn roots_exhaustive(&self, level: Level, cap: u64) -> Result<Vec<FFElement>> {
        if level < self.level {
            return Err(Error::LevelMismatch);
        }
        let size = self
            .tower
            .level_size_u64(level)
            .filter(|&s| s <= cap)
            .ok_or_else(|| Error::SearchSpaceTooLarge {
                size: self.tower.level_size_u64(level).unwrap_or(u64::MAX),
                cap,
            })?;
        let poly = if level == self.level { self.clone() } else { self.embed_to(level) };
        let mut out = Vec::new();
        for idx in 0..size {
            let x = self.tower.element_from_index(level, idx);
            if poly.eval(&x).is_zero() {
                out.push(x);
            }
        }
        Ok(out)
    }
}

impl Serialize for UPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: Vec<Vec<Vec<u64>>> =
            self.coeffs.iter().map(|c| c.residue_vectors()).collect();
        let mut s = serializer.serialize_struct("UPoly", 2)?;
        s.serialize_field("level", self.level.as_str())?;
        s.serialize_field("coeffs", &coeffs)?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> Tower {
        Tower::build(3, &[1, 0, 1]).unwrap()
    }

    #[test]
    fn gcd_with_zero_is_monic_input() {
        let t = f9();
        let a = t.alpha();
        // 2*alpha*x + 2
        let f = UPoly::from_coeffs(
            &t,
            Level::Mid,
            vec![t.scalar(Level::Mid, 2), a.add(&a)],
        );
        let z = UPoly::zero(&t, Level::Mid);
        let g = f.gcd(&z).unwrap();
        assert_eq!(g, f.make_monic());
        assert_eq!(g.leading_coeff().unwrap(), &t.one(Level::Mid));
    }

    #[test]
    fn derivative_in_characteristic_three() {
        let t = f9();
        let a = t.alpha();
        let one = t.one(Level::Mid);
        let zero = t.zero(Level::Mid);
        // x^4 + a x^3 + a x + 1 -> x^3 + a  (4 = 1, 3 = 0 mod 3)
        let f = UPoly::from_coeffs(
            &t,
            Level::Mid,
            vec![one.clone(), a.clone(), zero.clone(), a.clone(), one.clone()],
        );
        let expect = UPoly::from_coeffs(&t, Level::Mid, vec![a, zero.clone(), zero, one]);
        assert_eq!(f.derivative(), expect);
    }

    #[test]
    fn roots_over_f4() {
        let t = Tower::build(2, &[1, 1]).unwrap(); // d = 1, top = F_4
        let one = t.one(Level::Top);
        // x^2 + x + 1 over F_4
        let f = UPoly::from_coeffs(&t, Level::Top, vec![one.clone(), one.clone(), one]);
        let roots = f.roots_exhaustive(Level::Top, 1 << 20).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            // the roots are exactly the elements outside F_2
            assert_ne!(r, &t.zero(Level::Top));
            assert_ne!(r, &t.one(Level::Top));
        }
    }

    #[test]
    fn level_mismatch_is_reported() {
        let t = f9();
        let f = UPoly::one(&t, Level::Mid);
        let g = UPoly::one(&t, Level::Top);
        assert!(matches!(f.gcd(&g), Err(Error::LevelMismatch)));
    }

    #[test]
    fn scan_cap_is_enforced() {
        let t = f9();
        let f = UPoly::x(&t, Level::Top);
        assert!(matches!(
            f.roots_exhaustive(Level::Top, 10),
            Err(Error::SearchSpaceTooLarge { .. })
        ));
    }

    #[test]
    fn frobenius_q_is_ring_map() {
        let t = f9();
        let a = t.alpha();
        let f = UPoly::from_coeffs(&t, Level::Mid, vec![a.clone(), t.one(Level::Mid)]);
        let g = UPoly::from_coeffs(&t, Level::Mid, vec![t.scalar(Level::Mid, 2), a]);
        let lhs = f.mul(&g).frobenius_q();
        let rhs = f.frobenius_q().mul(&g.frobenius_q());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn compose_matches_eval() {
        let t = f9();
        let a = t.alpha();
        let f = UPoly::from_coeffs(
            &t,
            Level::Mid,
            vec![a.clone(), t.one(Level::Mid), a.clone()],
        );
        let g = UPoly::from_coeffs(&t, Level::Mid, vec![t.scalar(Level::Mid, 2), a.clone()]);
        let h = f.compose(&g);
        for idx in 0..9 {
            let x = t.element_from_index(Level::Mid, idx);
            assert_eq!(h.eval(&x), f.eval(&g.eval(&x)));
        }
    }
}
