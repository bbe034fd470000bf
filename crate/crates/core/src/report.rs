//! Verification bundles: the JSON/CSV shapes emitted by the pipelines.
//!
//! Exact integers are rendered as decimal strings so reports stay lossless.
//! Identical configurations serialize byte-identically; wall-clock timing is
//! therefore opt-in and omitted from the bundle unless requested.

use crate::error::Result;
use crate::field::{Level, Tower};
use crate::mpoly::keylemma_check;
use crate::partition::enumerate_p;
use crate::ssformula::{
    property_suite, ss_count_by_j, truncated_period_check, PeriodContext, SsPolynomial,
};
use crate::tower_cert::{
    covering_consistency_check, functional_identity_check, gap_decreases, genus_x0tn,
    modular_relation_check, omega_compute, ratio_table, OmegaSet,
};
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct HpolyReport {
    pub schema_version: u32,
    pub q: u64,
    #[serde(rename = "p_of_T")]
    pub p_of_t: Vec<u64>,
    pub d: usize,
    /// Coefficients of H ascending, each a list of base residue vectors.
    #[serde(rename = "H_coeffs")]
    pub h_coeffs: Vec<Vec<Vec<u64>>>,
    pub degree: u64,
    pub degree_ok: bool,
    pub h0_ok: bool,
    pub separable: bool,
    #[serde(rename = "roots_in_Fp2")]
    pub roots_in_fp2: bool,
    pub root_count: u64,
    pub subst_roots_ok: bool,
    pub subst_root_count: u64,
    pub divisibility_ok: bool,
    pub collapse_ok: bool,
    pub composite_separable: bool,
    pub even_d_value_ok: Option<bool>,
    pub minus_alpha_is_root: bool,
    pub routes_agree: Vec<String>,
    pub ss_j_count: u64,
    pub ss_j_expected: u64,
    pub fibers_ok: bool,
    /// `None` when q is even (no δ exists there).
    pub truncated_period_ok: Option<bool>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

/// Run the full polynomial pipeline for one tower.
pub fn hpoly_report(tower: &Tower, scan_cap: u64) -> Result<HpolyReport> {
    let ss = SsPolynomial::compute(tower)?;
    let prop = property_suite(&ss, scan_cap)?;
    let jcount = ss_count_by_j(&ss, scan_cap)?;
    let truncated_period_ok = if tower.p() == 2 {
        None
    } else {
        let ctx = PeriodContext::new(tower)?;
        Some(truncated_period_check(tower, &ctx)? && ctx.xi_identity_ok())
    };
    let routes_agree: Vec<String> = ss
        .routes_agree()
        .iter()
        .map(|r| r.as_str().to_string())
        .collect();
    let pass = prop.pass()
        && jcount.pass()
        && ss.all_routes_agree()
        && truncated_period_ok.unwrap_or(true);
    Ok(HpolyReport {
        schema_version: SCHEMA_VERSION,
        q: tower.q(),
        p_of_t: tower.ideal().indices.clone(),
        d: tower.d(),
        h_coeffs: ss.h().coeffs().iter().map(|c| c.residue_vectors()).collect(),
        degree: ss.h().degree().map(|d| d as u64).unwrap_or(0),
        degree_ok: prop.degree_ok,
        h0_ok: prop.h0_ok,
        separable: prop.separable,
        roots_in_fp2: prop.roots_in_top,
        root_count: prop.root_count,
        subst_roots_ok: prop.subst_roots_in_top,
        subst_root_count: prop.subst_root_count,
        divisibility_ok: prop.divisibility_ok,
        collapse_ok: prop.collapse_ok,
        composite_separable: prop.composite_separable,
        even_d_value_ok: prop.even_d_value_ok,
        minus_alpha_is_root: prop.minus_alpha_is_root,
        routes_agree,
        ss_j_count: jcount.distinct_j,
        ss_j_expected: jcount.expected,
        fibers_ok: jcount.fibers_ok,
        truncated_period_ok,
        pass,
        timing_ms: None,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioRow {
    pub n: u64,
    pub n_lower: String,
    pub genus: String,
    pub ratio_num: String,
    pub ratio_den: String,
    pub ratio_decimal: String,
    pub target: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitWitness {
    pub a: Vec<Vec<u64>>,
    pub images: Vec<Vec<Vec<u64>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerReport {
    pub schema_version: u32,
    pub q: u64,
    #[serde(rename = "p_of_T")]
    pub p_of_t: Vec<u64>,
    pub d: usize,
    pub omega_size: u64,
    pub omega_expected: String,
    pub omega_ok: bool,
    pub minus_one_excluded: bool,
    pub omega_elements: Vec<Vec<Vec<u64>>>,
    pub split_witnesses: Vec<SplitWitness>,
    pub functional_identity_ok: bool,
    pub splitting_ok: bool,
    pub covering_ok: bool,
    pub modular_relation_ok: bool,
    pub genus_spots: Vec<(u64, String)>,
    pub ratio_rows: Vec<RatioRow>,
    pub gap_monotone_ok: bool,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

/// Run the tower certification pipeline for one tower.
pub fn tower_report(tower: &Tower, n_max: u64, scan_cap: u64) -> Result<TowerReport> {
    let ss = SsPolynomial::compute(tower)?;
    let omega = omega_compute(tower, &ss, scan_cap)?;
    let omega_ok = omega.size_ok(tower);
    let minus_one_excluded = omega.minus_one_excluded(tower);
    let functional_identity_ok = functional_identity_check(tower, &ss)?;
    let mut splitting_ok = true;
    let mut split_witnesses = Vec::new();
    for a in omega.elements() {
        match crate::tower_cert::splitting_step(tower, &omega, a, scan_cap) {
            Ok(images) => split_witnesses.push(SplitWitness {
                a: a.residue_vectors(),
                images: images.iter().map(|b| b.residue_vectors()).collect(),
            }),
            Err(_) => {
                splitting_ok = false;
            }
        }
    }
    let covering_ok = covering_consistency_check(tower, &ss, &omega)?;
    let modular_relation_ok = modular_relation_check(tower.q())?;
    let rows = ratio_table(tower, &omega, n_max)?;
    let mut gap_monotone_ok = true;
    for w in rows.iter().skip(3).collect::<Vec<_>>().windows(2) {
        gap_monotone_ok &= gap_decreases(w[0], w[1]);
    }
    let genus_spots: Vec<(u64, String)> = (0..=6)
        .map(|n| Ok((n, genus_x0tn(tower.q(), n)?.to_string())))
        .collect::<Result<_>>()?;
    let pass = omega_ok
        && minus_one_excluded
        && functional_identity_ok
        && splitting_ok
        && covering_ok
        && modular_relation_ok
        && gap_monotone_ok;
    Ok(TowerReport {
        schema_version: SCHEMA_VERSION,
        q: tower.q(),
        p_of_t: tower.ideal().indices.clone(),
        d: tower.d(),
        omega_size: omega.len(),
        omega_expected: OmegaSet::expected_size(tower).to_string(),
        omega_ok,
        minus_one_excluded,
        omega_elements: omega.elements().iter().map(|s| s.residue_vectors()).collect(),
        split_witnesses,
        functional_identity_ok,
        splitting_ok,
        covering_ok,
        modular_relation_ok,
        genus_spots,
        ratio_rows: rows
            .iter()
            .map(|r| RatioRow {
                n: r.n,
                n_lower: r.n_lower.to_string(),
                genus: r.genus.to_string(),
                ratio_num: r.ratio_num.to_string(),
                ratio_den: r.ratio_den.to_string(),
                ratio_decimal: r.ratio_decimal.clone(),
                target: r.target.to_string(),
            })
            .collect(),
        gap_monotone_ok,
        pass,
        timing_ms: None,
    })
}

/// CSV rendering of the ratio table.
pub fn ratio_csv(rows: &[RatioRow]) -> String {
    let mut out = String::from("n,N_lower,genus,ratio_num,ratio_den,ratio_decimal,target\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.n, r.n_lower, r.genus, r.ratio_num, r.ratio_den, r.ratio_decimal, r.target
        ));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct KeylemmaDegreeRow {
    pub d: usize,
    pub pairs: usize,
    pub all_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct KeylemmaReport {
    pub schema_version: u32,
    pub d_max: usize,
    pub degrees: Vec<KeylemmaDegreeRow>,
    pub counts_recursion_ok: bool,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

/// Exact symbolic verification of the key identity for all pairs up to d_max.
pub fn keylemma_report(d_max: usize) -> Result<KeylemmaReport> {
    if d_max > 8 {
        return Err(crate::error::Error::CapExceeded { d: d_max, cap: 8 });
    }
    let mut degrees = Vec::new();
    for d in 1..=d_max {
        let pairs = enumerate_p(d as i64);
        let mut all_ok = true;
        for pair in &pairs {
            all_ok &= keylemma_check(d, pair)?;
        }
        degrees.push(KeylemmaDegreeRow { d, pairs: pairs.len(), all_ok });
    }
    let mut counts_recursion_ok = true;
    let mut sizes = vec![0usize, 1];
    for d in 1..=d_max {
        sizes.push(degrees[d - 1].pairs);
        counts_recursion_ok &= sizes[d + 1] == sizes[d] + sizes[d - 1];
    }
    let pass = degrees.iter().all(|r| r.all_ok) && counts_recursion_ok;
    Ok(KeylemmaReport {
        schema_version: SCHEMA_VERSION,
        d_max,
        degrees,
        counts_recursion_ok,
        pass,
        timing_ms: None,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepCell {
    pub q: u64,
    pub d: usize,
    #[serde(rename = "p_of_T")]
    pub p_of_t: Vec<u64>,
    pub hpoly_pass: bool,
    pub tower_pass: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub cells: Vec<SweepCell>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

/// One sweep cell: auto ideal for (q, d), then both pipelines.
pub fn sweep_cell(q: u64, d: usize, n_max: u64, scan_cap: u64) -> Result<SweepCell> {
    let tower = Tower::build_auto(q, d)?;
    let hp = hpoly_report(&tower, scan_cap)?;
    let tw = tower_report(&tower, n_max, scan_cap)?;
    Ok(SweepCell {
        q,
        d,
        p_of_t: tower.ideal().indices.clone(),
        hpoly_pass: hp.pass,
        tower_pass: tw.pass,
        pass: hp.pass && tw.pass,
    })
}

/// A quick structural sanity value for reports: the mid-level size q^d.
pub fn field_size_label(tower: &Tower) -> String {
    tower.level_size(Level::Mid).to_string()
}
