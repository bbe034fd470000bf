//! The combinatorial layer: partition pairs (S1, S2) with
//! {S1, S2, S2+1} partitioning {0, …, d−1}, weights w(S) = Σ q^i, and the
//! signed bracket products L(S).

use crate::error::Result;
use crate::field::{FFElement, Level, Tower};
use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// A pair (S1, S2) of disjoint index sets with S1 ⊔ S2 ⊔ (S2+1) = {0,…,d−1}.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PartitionPair {
    #[serde(rename = "S1")]
    pub s1: Vec<usize>,
    #[serde(rename = "S2")]
    pub s2: Vec<usize>,
}

/// Shift S + j = { i + j | i ∈ S }.
pub fn shift(s: &[usize], j: usize) -> Vec<usize> {
    s.iter().map(|&i| i + j).collect()
}

/// All pairs for a given d, in the fixed enumeration order: ascending |S2|,
/// then S2 lexicographically. This is the order in which the explicit
/// formula's terms are conventionally listed.
///
/// d = 0 yields the single pair (∅, ∅); d < 0 yields nothing.
pub fn enumerate_p(d: i64) -> Vec<PartitionPair> {
    if d < 0 {
        return Vec::new();
    }
    let d = d as usize;
    if d == 0 {
        return vec![PartitionPair { s1: Vec::new(), s2: Vec::new() }];
    }
    assert!(d <= 30, "partition enumeration is meant for desk-scale d");
    // S2 ranges over subsets of {0,…,d−2} with no two consecutive members;
    // S1 is then forced as the complement of S2 ∪ (S2 + 1).
    let mut s2_list: Vec<Vec<usize>> = Vec::new();
    let bits = d - 1;
    for mask in 0u64..(1u64 << bits) {
        if mask & (mask << 1) != 0 {
            continue;
        }
        let s2: Vec<usize> = (0..bits).filter(|&i| mask >> i & 1 == 1).collect();
        s2_list.push(s2);
    }
    s2_list.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    s2_list
        .into_iter()
        .map(|s2| {
            let mut used = vec![false; d];
            for &i in &s2 {
                used[i] = true;
                used[i + 1] = true;
            }
            let s1: Vec<usize> = (0..d).filter(|&i| !used[i]).collect();
            PartitionPair { s1, s2 }
        })
        .collect()
}

/// w(S) = Σ_{i∈S} q^i, with w(∅) = 0.
pub fn w_of(s: &[usize], q: u64) -> BigUint {
    let q = BigUint::from(q);
    s.iter().fold(BigUint::zero(), |acc, &i| acc + q.pow(i as u32))
}

/// L(S) = (−1)^|S| ∏_{i∈S} [i], with L(∅) = 1, at mid level.
pub fn l_of(s: &[usize], tower: &Tower) -> FFElement {
    let mut acc = tower.one(Level::Mid);
    for &i in s {
        acc = acc.mul(&tower.bracket(i));
    }
    if s.len() % 2 == 1 {
        acc = acc.neg();
    }
    acc
}

/// One term of the explicit formula in symbolic form: the sign and bracket
/// indices of L(S2+1) together with the q-power supports of the A1 and A2
/// exponents.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HTerm {
    pub positive: bool,
    pub brackets: Vec<usize>,
    pub a1_powers: Vec<usize>,
    pub a2_powers: Vec<usize>,
}

/// The explicit formula's term list for degree d, in enumeration order.
pub fn h_explicit_terms(d: i64) -> Vec<HTerm> {
    enumerate_p(d)
        .into_iter()
        .map(|pair| HTerm {
            positive: pair.s2.len() % 2 == 0,
            brackets: shift(&pair.s2, 1),
            a1_powers: pair.s1.clone(),
            a2_powers: pair.s2.clone(),
        })
        .collect()
}

/// Complete homogeneous sum of degree n evaluated at the given points,
/// computed by the same dynamic program as the symbolic version.
/// Returns 0 for n < 0, and handles the empty point list as 1 at n = 0.
pub fn h_eval(n: i64, points: &[FFElement], tower: &Tower, level: Level) -> FFElement {
    if n < 0 {
        return tower.zero(level);
    }
    let n = n as usize;
    let mut dp = vec![tower.zero(level); n + 1];
    dp[0] = tower.one(level);
    for v in points {
        let v = v.embed_to(level);
        let mut new = vec![tower.zero(level); n + 1];
        for j in 0..=n {
            let mut vp = tower.one(level);
            for k in 0..=j {
                new[j] = new[j].add(&dp[j - k].mul(&vp));
                if k < j {
                    vp = vp.mul(&v);
                }
            }
        }
        dp = new;
    }
    dp[n].clone()
}

/// The key identity specialized at the prime ideal: the coefficient sum
/// Σ μ_i · h_{i−|S|} over X_j = α^(q^j) (j ∈ S ∪ {d}) collapses to L(S2+1),
/// since the leading bracket vanishes there.
pub fn key_identity_at_ideal(tower: &Tower, pair: &PartitionPair) -> Result<bool> {
    let d = tower.d();
    let mut s: Vec<usize> = pair.s1.iter().chain(pair.s2.iter()).cloned().collect();
    s.sort_unstable();
    let mut sprime = s.clone();
    sprime.push(d);
    let points: Vec<FFElement> = sprime.iter().map(|&i| tower.alpha().frob(i)).collect();
    let start = d.div_ceil(2);
    let mut acc = tower.zero(Level::Mid);
    for i in start..=d {
        let mu = tower.base_elem(tower.ideal().indices[i])?.embed_to(Level::Mid);
        let h = h_eval(i as i64 - s.len() as i64, &points, tower, Level::Mid);
        acc = acc.add(&mu.mul(&h));
    }
    Ok(acc == l_of(&shift(&pair.s2, 1), tower))
}
