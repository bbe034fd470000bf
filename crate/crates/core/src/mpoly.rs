//! Exact sparse multivariate polynomials over the integers, and the
//! symmetric-function identities checked on them.

use crate::error::{Error, Result};
use crate::field::{FFElement, Level, Tower};
use crate::partition::{shift, PartitionPair};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;

/// Sparse polynomial in variables X_0 … X_{nvars−1} with BigInt
/// coefficients. Exponent keys all have length `nvars`; zero coefficients
/// are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPolyZ {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MPolyZ {
    pub fn zero(nvars: usize) -> Self {
        MPolyZ { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: i64) -> Self {
        let mut p = MPolyZ::zero(nvars);
        p.add_term(vec![0; nvars], BigInt::from(c));
        p
    }

    pub fn one(nvars: usize) -> Self {
        MPolyZ::constant(nvars, 1)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut exp = vec![0u32; nvars];
        exp[i] = 1;
        let mut p = MPolyZ::zero(nvars);
        p.add_term(exp, BigInt::from(1));
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exp: Vec<u32>, c: BigInt) {
        debug_assert_eq!(exp.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MPolyZ) -> MPolyZ {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPolyZ {
        MPolyZ {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MPolyZ) -> MPolyZ {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MPolyZ) -> MPolyZ {
        assert_eq!(self.nvars, other.nvars);
        let mut out = MPolyZ::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exp: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(exp, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> MPolyZ {
        let mut acc = MPolyZ::one(self.nvars);
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

    /// Reduce all coefficients modulo p, dropping vanishing terms.
    pub fn reduce_mod(&self, p: u64) -> MPolyZ {
        let pb = BigInt::from(p);
        let mut out = MPolyZ::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut r = c % &pb;
            if r.is_negative() {
                r += &pb;
            }
            out.add_term(e.clone(), r);
        }
        out
    }

    /// Evaluate in a tower level; coefficients enter through the
    /// characteristic.
    pub fn eval_in_field(&self, tower: &Tower, level: Level, points: &[FFElement]) -> FFElement {
        assert_eq!(points.len(), self.nvars);
        let p = tower.p();
        let pb = BigInt::from(p);
        let mut acc = tower.zero(level);
        for (e, c) in &self.terms {
            let mut r = c % &pb;
            if r.is_negative() {
                r += &pb;
            }
            let scalar = tower.scalar(level, u64::try_from(&r).expect("residue fits"));
            let mut term = scalar;
            for (i, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    term = term.mul(&points[i].embed_to(level).pow_u64(exp as u64));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }
}

/// Elementary symmetric polynomial of degree k in the NEGATED variables
/// −X_i, i ∈ vars. s_0 = 1.
pub fn elem_sym_neg(k: usize, vars: &[usize], nvars: usize) -> Result<MPolyZ> {
    if k > vars.len() {
        return Err(Error::KTooLarge { k, n: vars.len() });
    }
    // dp over variables: coefficient of z^k in Π (1 − X_i z)
    let mut dp: Vec<MPolyZ> = vec![MPolyZ::one(nvars)];
    for &v in vars {
        let xv = MPolyZ::var(nvars, v);
        let mut new = Vec::with_capacity(dp.len() + 1);
        for j in 0..=dp.len() {
            let mut term = MPolyZ::zero(nvars);
            if j < dp.len() {
                term = term.add(&dp[j]);
            }
            if j > 0 {
                term = term.sub(&dp[j - 1].mul(&xv));
            }
            new.push(term);
        }
        dp = new;
    }
    Ok(dp[k].clone())
}

/// Complete homogeneous polynomial of degree n in the variables indexed by
/// `sprime`; 1 when the set is empty and n = 0, and 0 for n < 0.
pub fn h_complete(n: i64, sprime: &[usize], nvars: usize) -> MPolyZ {
    if n < 0 {
        return MPolyZ::zero(nvars);
    }
    let n = n as usize;
    let mut dp: Vec<MPolyZ> = (0..=n)
        .map(|j| {
            if j == 0 {
                MPolyZ::one(nvars)
            } else {
                MPolyZ::zero(nvars)
            }
        })
        .collect();
    for &v in sprime {
        let xv = MPolyZ::var(nvars, v);
        let mut new: Vec<MPolyZ> = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let mut acc = MPolyZ::zero(nvars);
            let mut xp = MPolyZ::one(nvars);
            for k in 0..=j {
                acc = acc.add(&dp[j - k].mul(&xp));
                if k < j {
                    xp = xp.mul(&xv);
                }
            }
            new.push(acc);
        }
        dp = new;
    }
    dp[n].clone()
}

/// Direct monomial enumeration of the same sum; retained as an independent
/// oracle for small degrees.
pub fn h_complete_enum(n: i64, sprime: &[usize], nvars: usize) -> MPolyZ {
    if n < 0 {
        return MPolyZ::zero(nvars);
    }
    let n = n as usize;
    let mut out = MPolyZ::zero(nvars);
    let mut exps = vec![0u32; sprime.len()];
    fn rec(
        out: &mut MPolyZ,
        sprime: &[usize],
        exps: &mut Vec<u32>,
        pos: usize,
        rem: usize,
        nvars: usize,
    ) {
        if pos == sprime.len() {
            if rem == 0 {
                let mut e = vec![0u32; nvars];
                for (i, &v) in sprime.iter().enumerate() {
                    e[v] = exps[i];
                }
                out.add_term(e, BigInt::from(1));
            }
            return;
        }
        for k in 0..=rem {
            exps[pos] = k as u32;
            rec(out, sprime, exps, pos + 1, rem - k, nvars);
        }
        exps[pos] = 0;
    }
    if sprime.is_empty() {
        if n == 0 {
            return MPolyZ::one(nvars);
        }
        return MPolyZ::zero(nvars);
    }
    rec(&mut out, sprime, &mut exps, 0, n, nvars);
    out
}

/// Left-hand side of the key polynomial identity for a pair in P(d):
/// Σ_{i=⌈d/2⌉}^{d} s_{d−i} · h_{i−|S|} over X_0 … X_d.
pub fn keylemma_lhs(d: usize, pair: &PartitionPair) -> Result<MPolyZ> {
    let nvars = d + 1;
    let mut s: Vec<usize> = pair.s1.iter().chain(pair.s2.iter()).cloned().collect();
    s.sort_unstable();
    let mut sprime = s.clone();
    sprime.push(d);
    let base_vars: Vec<usize> = (0..d).collect();
    let mut acc = MPolyZ::zero(nvars);
    for i in d.div_ceil(2)..=d {
        let sym = elem_sym_neg(d - i, &base_vars, nvars)?;
        let h = h_complete(i as i64 - s.len() as i64, &sprime, nvars);
        acc = acc.add(&sym.mul(&h));
    }
    Ok(acc)
}

/// Right-hand side: ∏_{i∈S2} (X_d − X_{i+1}).
pub fn keylemma_rhs(d: usize, pair: &PartitionPair) -> MPolyZ {
    let nvars = d + 1;
    let xd = MPolyZ::var(nvars, d);
    let mut acc = MPolyZ::one(nvars);
    for &i in &shift(&pair.s2, 1) {
        acc = acc.mul(&xd.sub(&MPolyZ::var(nvars, i)));
    }
    acc
}

/// Exact symbolic check of the identity for one pair.
pub fn keylemma_check(d: usize, pair: &PartitionPair) -> Result<bool> {
    Ok(keylemma_lhs(d, pair)? == keylemma_rhs(d, pair))
}
