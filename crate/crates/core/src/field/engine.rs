//! Generic dense-polynomial engine over an abstract field.
//!
//! The three tower levels are all quotient rings of the same shape
//! (`F_p[z]/(m)`, then `F_q[x]/(p)`, then a quadratic on top), so one
//! generic implementation drives every layer. Elements of a quotient are
//! fixed-length coefficient vectors over the base; polynomials handled by
//! the `dp` helpers are variable-length and trailing-zero free.

use num_bigint::BigUint;

pub(crate) trait FieldOps {
    type E: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Option<Self::E>;
    fn size(&self) -> BigUint;
    /// Field size if it fits in u64; used for deterministic element scans.
    fn size_u64(&self) -> Option<u64>;
    fn elem_from_index(&self, idx: u64) -> Self::E;
    fn index_of(&self, a: &Self::E) -> u64;
}

/// The prime field F_p with elements represented as residues in `0..p`.
#[derive(Clone, Debug)]
pub(crate) struct Fp {
    pub p: u64,
}

impl Fp {
    fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = ((acc as u128 * base as u128) % self.p as u128) as u64;
            }
            base = ((base as u128 * base as u128) % self.p as u128) as u64;
            e >>= 1;
        }
        acc
    }
}

impl FieldOps for Fp {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }
    fn size(&self) -> BigUint {
        BigUint::from(self.p)
    }
    fn size_u64(&self) -> Option<u64> {
        Some(self.p)
    }
    fn elem_from_index(&self, idx: u64) -> u64 {
        idx % self.p
    }
    fn index_of(&self, a: &u64) -> u64 {
        *a
    }
}

/// `F[x]/(modulus)` for a monic irreducible `modulus` of degree >= 1.
/// Elements are coefficient vectors of fixed length `deg(modulus)`.
#[derive(Clone, Debug)]
pub(crate) struct QuotientField<F: FieldOps> {
    pub base: F,
    /// Monic, ascending, length `deg + 1`.
    pub modulus: Vec<F::E>,
}

impl<F: FieldOps> QuotientField<F> {
    pub fn new(base: F, modulus: Vec<F::E>) -> Self {
        debug_assert!(modulus.len() >= 2);
        debug_assert!(modulus.last().map(|c| *c == base.one()).unwrap_or(false));
        QuotientField { base, modulus }
    }

    pub fn deg(&self) -> usize {
        self.modulus.len() - 1
    }

    fn fixed(&self, mut poly: Vec<F::E>) -> Vec<F::E> {
        poly.resize(self.deg(), self.base.zero());
        poly
    }

    /// Reduce an arbitrary polynomial mod the monic modulus, padded to fixed
    /// length. Works top-down in place; no quotient is materialized.
    pub fn reduce(&self, mut poly: Vec<F::E>) -> Vec<F::E> {
        let deg = self.deg();
        while poly.len() > deg {
            let lead = poly.pop().unwrap();
            if !self.base.is_zero(&lead) {
                let shift = poly.len() - deg;
                for (i, m) in self.modulus.iter().take(deg).enumerate() {
                    if !self.base.is_zero(m) {
                        let t = self.base.mul(&lead, m);
                        poly[shift + i] = self.base.sub(&poly[shift + i], &t);
                    }
                }
            }
        }
        self.fixed(poly)
    }

    pub fn from_base(&self, c: F::E) -> Vec<F::E> {
        self.fixed(vec![c])
    }

    /// The residue class of the quotient variable.
    pub fn generator(&self) -> Vec<F::E> {
        self.reduce(vec![self.base.zero(), self.base.one()])
    }
}

impl<F: FieldOps> FieldOps for QuotientField<F> {
    type E = Vec<F::E>;

    fn zero(&self) -> Self::E {
        vec![self.base.zero(); self.deg()]
    }
    fn one(&self) -> Self::E {
        self.from_base(self.base.one())
    }
    fn is_zero(&self, a: &Self::E) -> bool {
        a.iter().all(|c| self.base.is_zero(c))
    }
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn neg(&self, a: &Self::E) -> Self::E {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E {
        let prod = dp::mul(&self.base, a, b);
        self.reduce(prod)
    }
    fn inv(&self, a: &Self::E) -> Option<Self::E> {
        if self.is_zero(a) {
            return None;
        }
        let a_poly = dp::normalized(&self.base, a.clone());
        let (g, u) = dp::ext_gcd_bezout(&self.base, &a_poly, &self.modulus);
        // gcd with an irreducible modulus is a nonzero constant
        debug_assert_eq!(g.len(), 1);
        let c_inv = self.base.inv(&g[0])?;
        let u_scaled = dp::scalar_mul(&self.base, &u, &c_inv);
        Some(self.fixed(u_scaled))
    }
    fn size(&self) -> BigUint {
        self.base.size().pow(self.deg() as u32)
    }
    fn size_u64(&self) -> Option<u64> {
        let s = self.base.size_u64()?;
        let mut acc: u64 = 1;
        for _ in 0..self.deg() {
            acc = acc.checked_mul(s)?;
        }
        Some(acc)
    }
    fn elem_from_index(&self, mut idx: u64) -> Self::E {
        let s = self.base.size_u64().expect("index scan needs a small field");
        (0..self.deg())
            .map(|_| {
                let digit = idx % s;
                idx /= s;
                self.base.elem_from_index(digit)
            })
            .collect()
    }
    fn index_of(&self, a: &Self::E) -> u64 {
        let s = self.base.size_u64().expect("index scan needs a small field");
        a.iter()
            .rev()
            .fold(0u64, |acc, c| acc * s + self.base.index_of(c))
    }
}

/// Dense polynomial helpers. Polynomials are ascending coefficient vectors
/// with no trailing zeros; the empty vector is the zero polynomial.
pub(crate) mod dp {
    use super::*;

    pub fn normalized<F: FieldOps>(f: &F, mut v: Vec<F::E>) -> Vec<F::E> {
        while v.last().map(|c| f.is_zero(c)).unwrap_or(false) {
            v.pop();
        }
        v
    }

    pub fn add<F: FieldOps>(f: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
        let n = a.len().max(b.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let x = a.get(i).cloned().unwrap_or_else(|| f.zero());
            let y = b.get(i).cloned().unwrap_or_else(|| f.zero());
            out.push(f.add(&x, &y));
        }
        normalized(f, out)
    }

    pub fn sub<F: FieldOps>(f: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
        let n = a.len().max(b.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let x = a.get(i).cloned().unwrap_or_else(|| f.zero());
            let y = b.get(i).cloned().unwrap_or_else(|| f.zero());
            out.push(f.sub(&x, &y));
        }
        normalized(f, out)
    }

    pub fn neg<F: FieldOps>(f: &F, a: &[F::E]) -> Vec<F::E> {
        a.iter().map(|c| f.neg(c)).collect()
    }

    pub fn scalar_mul<F: FieldOps>(f: &F, a: &[F::E], c: &F::E) -> Vec<F::E> {
        if f.is_zero(c) {
            return Vec::new();
        }
        normalized(f, a.iter().map(|x| f.mul(x, c)).collect())
    }

    pub fn mul<F: FieldOps>(f: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![f.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if f.is_zero(y) {
                    continue;
                }
                out[i + j] = f.add(&out[i + j], &f.mul(x, y));
            }
        }
        normalized(f, out)
    }

    /// Repeated integer sum `k * a`, reduced through the field characteristic.
    pub fn int_mul_elem<F: FieldOps>(f: &F, a: &F::E, k: u64) -> F::E {
        let mut acc = f.zero();
        let mut base = a.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = f.add(&acc, &base);
            }
            base = f.add(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// Quotient and remainder; fails only when `b` has no invertible lead (b = 0).
    pub fn divrem<F: FieldOps>(
        f: &F,
        a: &[F::E],
        b: &[F::E],
    ) -> Option<(Vec<F::E>, Vec<F::E>)> {
        let b = normalized(f, b.to_vec());
        if b.is_empty() {
            return None;
        }
        let lead_inv = f.inv(b.last().unwrap())?;
        let mut r = normalized(f, a.to_vec());
        let db = b.len() - 1;
        if r.len() < b.len() {
            return Some((Vec::new(), r));
        }
        let mut q = vec![f.zero(); r.len() - db];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let coef = f.mul(r.last().unwrap(), &lead_inv);
            q[shift] = coef.clone();
            for (i, bc) in b.iter().enumerate() {
                let t = f.mul(bc, &coef);
                r[shift + i] = f.sub(&r[shift + i], &t);
            }
            r = normalized(f, r);
        }
        Some((normalized(f, q), r))
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd_monic<F: FieldOps>(f: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
        let mut r0 = normalized(f, a.to_vec());
        let mut r1 = normalized(f, b.to_vec());
        while !r1.is_empty() {
            let (_, rem) = divrem(f, &r0, &r1).expect("nonzero divisor");
            r0 = r1;
            r1 = rem;
        }
        make_monic(f, r0)
    }

    /// Returns `(g, u)` with `u * a = g  (mod m)` and `g = gcd(a, m)`.
    pub fn ext_gcd_bezout<F: FieldOps>(f: &F, a: &[F::E], m: &[F::E]) -> (Vec<F::E>, Vec<F::E>) {
        let mut r0 = normalized(f, m.to_vec());
        let mut r1 = normalized(f, a.to_vec());
        let mut t0: Vec<F::E> = Vec::new();
        let mut t1: Vec<F::E> = vec![f.one()];
        while !r1.is_empty() {
            let (q, rem) = divrem(f, &r0, &r1).expect("nonzero divisor");
            let t2 = sub(f, &t0, &mul(f, &q, &t1));
            r0 = r1;
            r1 = rem;
            t0 = t1;
            t1 = t2;
        }
        (r0, t0)
    }

    pub fn make_monic<F: FieldOps>(f: &F, v: Vec<F::E>) -> Vec<F::E> {
        match v.last() {
            None => v,
            Some(lead) => {
                let li = f.inv(lead).expect("nonzero leading coefficient");
                scalar_mul(f, &v, &li)
            }
        }
    }

    pub fn derivative<F: FieldOps>(f: &F, v: &[F::E], char_p: u64) -> Vec<F::E> {
        let mut out = Vec::new();
        for (i, c) in v.iter().enumerate().skip(1) {
            out.push(int_mul_elem(f, c, (i as u64) % char_p));
        }
        normalized(f, out)
    }

    /// Horner composition `v(g)`.
    pub fn compose<F: FieldOps>(f: &F, v: &[F::E], g: &[F::E]) -> Vec<F::E> {
        let mut acc: Vec<F::E> = Vec::new();
        for c in v.iter().rev() {
            acc = mul(f, &acc, g);
            acc = add(f, &acc, std::slice::from_ref(c));
        }
        acc
    }

    pub fn pow_u64<F: FieldOps>(f: &F, v: &[F::E], mut e: u64) -> Vec<F::E> {
        let mut acc = vec![f.one()];
        let mut base = v.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(f, &acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = mul(f, &base, &base);
            }
        }
        acc
    }

    /// `base^e mod m` by left-to-right binary exponentiation.
    pub fn pow_mod<F: FieldOps>(f: &F, base: &[F::E], e: &BigUint, m: &[F::E]) -> Vec<F::E> {
        let reduce = |v: Vec<F::E>| -> Vec<F::E> {
            let (_, r) = divrem(f, &v, m).expect("nonzero modulus");
            r
        };
        let mut acc = vec![f.one()];
        let bits = e.bits();
        for i in (0..bits).rev() {
            acc = reduce(mul(f, &acc, &acc));
            if e.bit(i) {
                acc = reduce(mul(f, &acc, base));
            }
        }
        acc
    }

    fn prime_factors(mut n: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                out.push(d);
                while n % d == 0 {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            out.push(n);
        }
        out
    }

    /// Rabin irreducibility test for a monic polynomial over a finite field.
    pub fn is_irreducible<F: FieldOps>(f: &F, v: &[F::E]) -> bool {
        let v = normalized(f, v.to_vec());
        if v.len() < 2 {
            return false; // constants and zero
        }
        let n = v.len() - 1;
        if n == 1 {
            return true;
        }
        let q = f.size();
        let x: Vec<F::E> = vec![f.zero(), f.one()];
        // x^(q^n) must reduce to x mod v
        let xq_n = pow_mod(f, &x, &q.pow(n as u32), &v);
        if normalized(f, xq_n) != x {
            return false;
        }
        for r in prime_factors(n) {
            let e = q.pow((n / r) as u32);
            let xq = pow_mod(f, &x, &e, &v);
            let diff = sub(f, &xq, &x);
            let g = gcd_monic(f, &v, &diff);
            if g.len() != 1 || !(g[0] == f.one()) {
                return false;
            }
        }
        true
    }

}
