//! Theory-check grids driven by a [`VerifyConfig`].

use phe_core::theory::{
    constant_c_rows, hoeffding_grid, lemma2_grid, lemma3_grid, tail_optimism_coverage, theorem4_grid, Lemma2Family,
    TheoryCheckReport,
};

use crate::config::VerifyConfig;

fn range(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).collect()
}

/// All configured checks, in a fixed order.
pub fn run_checks(config: &VerifyConfig) -> Vec<TheoryCheckReport> {
    let mut rows = Vec::new();
    let t4 = &config.theorem4;
    rows.extend(theorem4_grid(&t4.a, &range(1, t4.max_pulls), &t4.mu));

    let l3 = &config.lemma3;
    rows.extend(lemma3_grid(&range(1, l3.max_pulls), &l3.a, l3.deltas));

    let l2 = &config.lemma2;
    let mut families = vec![Lemma2Family::Constant, Lemma2Family::Linear];
    families.extend(l2.reciprocal_tail_a.iter().map(|&a| Lemma2Family::ReciprocalTail { a }));
    rows.extend(lemma2_grid(&families, &range(1, l2.max_pulls), &l2.mu));

    let h = &config.hoeffding;
    rows.extend(hoeffding_grid(&range(1, h.max_pulls), &h.mu, &h.epsilon));

    rows.extend(constant_c_rows(&config.constant_c.a));

    let to = &config.tail_optimism;
    rows.extend(tail_optimism_coverage(
        &range(to.min_pulls, to.max_pulls),
        &to.mu,
        &to.a,
    ));
    rows
}

pub fn mandatory_failures(rows: &[TheoryCheckReport]) -> usize {
    rows.iter().filter(|r| r.is_failure()).count()
}
