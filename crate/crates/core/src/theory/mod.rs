//! Numerical verification of the optimism lemmas and regret bounds.
//!
//! Everything here is exact up to double rounding: binomial probabilities are
//! summed term by term rather than approximated. Grid runners return one
//! [`TheoryCheckReport`] per grid point, in grid order.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

mod bounds;
mod lemmas;
mod tails;

pub use bounds::{
    constant_c, gap_dependent_bound, gap_dependent_bound_at_log, gap_free_bound, gap_free_bound_at, ln_constant_c,
    ln_theorem4_bound, theorem4_bound, theorem4_scale_for_phe, BoundInputs,
};
pub use lemmas::{lemma2_check, lemma3_check, lemma3_deltas};
pub use tails::{
    expected_inverse_tail_exact, f_from_q, hoeffding_probe, q_exact, tail_optimism_probe, HoeffdingProbe, TailModel,
    TailProbe, ENUMERATION_BUDGET,
};

use crate::Error;

/// Relative slack allowed when comparing an exact quantity with its bound.
pub const COMPARISON_REL_TOL: f64 = 1e-9;

/// Direction of the inequality being checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `lhs <= rhs`
    AtMost,
    /// `lhs >= rhs`
    AtLeast,
}

/// Outcome of checking one inequality at one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoryCheckReport {
    pub check: String,
    /// `key=value` pairs separated by `;`.
    pub params: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Slack in the direction of the inequality; negative on failure.
    pub margin: f64,
    pub pass: bool,
    /// Informational rows never fail a verification run.
    pub mandatory: bool,
    pub note: String,
}

impl TheoryCheckReport {
    pub fn compare(check: &str, params: String, lhs: f64, relation: Relation, rhs: f64) -> Self {
        let (margin, pass) = match relation {
            Relation::AtMost => (rhs - lhs, lhs <= rhs + COMPARISON_REL_TOL * rhs.abs()),
            Relation::AtLeast => (lhs - rhs, lhs >= rhs - COMPARISON_REL_TOL * rhs.abs()),
        };
        Self {
            check: check.to_string(),
            params,
            lhs,
            rhs,
            margin,
            pass,
            mandatory: true,
            note: String::new(),
        }
    }

    /// A failing row recording a parameter that is outside the check's domain.
    pub fn domain_error(check: &str, params: String, err: &Error) -> Self {
        Self {
            check: check.to_string(),
            params,
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            pass: false,
            mandatory: true,
            note: format!("domain error: {err}"),
        }
    }

    pub fn informational(mut self) -> Self {
        self.mandatory = false;
        self
    }

    pub fn with_note(mut self, note: String) -> Self {
        self.note = note;
        self
    }

    /// A mandatory row that did not pass.
    pub fn is_failure(&self) -> bool {
        self.mandatory && !self.pass
    }
}

/// Checks `W <= theorem4_bound(a)` at every `(a, n, μ)` point. Where the
/// bound overflows a double the comparison is done on logarithms and the row
/// carries `rhs = +∞` with the log magnitude in its note.
pub fn theorem4_grid(a_values: &[f64], pulls: &[u64], mus: &[f64]) -> Vec<TheoryCheckReport> {
    let mut rows = Vec::new();
    for &a in a_values {
        for &n in pulls {
            for &mu in mus {
                let params = format!("a={a};n={n};mu={mu}");
                rows.push(theorem4_row(a, n, mu, params));
            }
        }
    }
    rows
}

fn theorem4_row(a: f64, n: u64, mu: f64, params: String) -> TheoryCheckReport {
    let ln_bound = match ln_theorem4_bound(a) {
        Ok(v) => v,
        Err(e) => return TheoryCheckReport::domain_error("theorem4", params, &e),
    };
    let w = match TailModel::new(n, mu, a).and_then(|m| {
        let w = expected_inverse_tail_exact(&m)?;
        Ok((w, m.was_rounded(), m.pseudo_trials()))
    }) {
        Ok(v) => v,
        Err(e) => return TheoryCheckReport::domain_error("theorem4", params, &e),
    };
    let (w, rounded, m) = w;
    let bound = libm::exp(ln_bound);
    let mut row = if bound.is_finite() {
        TheoryCheckReport::compare("theorem4", params, w, Relation::AtMost, bound)
    } else {
        let pass = libm::log(w) <= ln_bound;
        TheoryCheckReport {
            margin: f64::INFINITY,
            pass,
            ..TheoryCheckReport::compare("theorem4", params, w, Relation::AtMost, f64::INFINITY)
        }
        .with_note(format!("log-domain bound: ln_rhs={ln_bound}"))
    };
    if rounded {
        let note = format!(
            "{}pseudo trials rounded up to {m}",
            if row.note.is_empty() { "" } else { "; " }
        );
        row.note.push_str(&note);
    }
    row
}

/// [`lemma3_check`] on `pulls × a_values × points` evenly spaced `δ ∈ [0, an]`.
pub fn lemma3_grid(pulls: &[u64], a_values: &[f64], points: usize) -> Vec<TheoryCheckReport> {
    let mut rows = Vec::new();
    for &n in pulls {
        for &a in a_values {
            let deltas = lemma3_deltas(n, a, points);
            match lemma3_check(n, a, &deltas) {
                Ok(r) => rows.extend(r),
                Err(e) => rows.push(TheoryCheckReport::domain_error("lemma3", format!("n={n};a={a}"), &e)),
            }
        }
    }
    rows
}

/// Decreasing test functions for the partition lemma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lemma2Family {
    /// `f ≡ 1`.
    Constant,
    /// `f(x) = 1 − x/n`.
    Linear,
    /// The reciprocal conditional tail `1 / P(Y >= ⌈X̄ − x + Ȳ⌉)` with
    /// `2an` pseudo-rewards.
    ReciprocalTail { a: f64 },
}

impl Lemma2Family {
    pub fn label(&self) -> String {
        match self {
            Lemma2Family::Constant => "constant".into(),
            Lemma2Family::Linear => "linear".into(),
            Lemma2Family::ReciprocalTail { a } => format!("reciprocal-tail(a={a})"),
        }
    }
}

pub fn lemma2_grid(families: &[Lemma2Family], pulls: &[u64], mus: &[f64]) -> Vec<TheoryCheckReport> {
    let mut rows = Vec::new();
    for family in families {
        let label = family.label();
        for &n in pulls {
            for &mu in mus {
                let nf = n as f64;
                let result = match *family {
                    Lemma2Family::Constant => lemma2_check(&label, n, mu, |_| 1.0),
                    Lemma2Family::Linear => lemma2_check(&label, n, mu, |x| 1.0 - x / nf),
                    Lemma2Family::ReciprocalTail { a } => TailModel::new(n, mu, a)
                        .and_then(|model| lemma2_check(&label, n, mu, |x| model.reciprocal_tail(x))),
                };
                rows.push(result.unwrap_or_else(|e| {
                    TheoryCheckReport::domain_error("lemma2", format!("f={label};n={n};mu={mu}"), &e)
                }));
            }
        }
    }
    rows
}

/// Exact binomial deviation probabilities against `exp(−2ε²s)`, upper and
/// lower tails.
pub fn hoeffding_grid(pulls: &[u64], mus: &[f64], epsilons: &[f64]) -> Vec<TheoryCheckReport> {
    let mut rows = Vec::new();
    for &s in pulls {
        for &mu in mus {
            for &eps in epsilons {
                let params = format!("s={s};mu={mu};eps={eps}");
                match hoeffding_probe(s, mu, eps) {
                    Ok(h) => {
                        rows.push(TheoryCheckReport::compare(
                            "hoeffding-upper",
                            params.clone(),
                            h.upper,
                            Relation::AtMost,
                            h.bound,
                        ));
                        rows.push(TheoryCheckReport::compare(
                            "hoeffding-lower",
                            params,
                            h.lower,
                            Relation::AtMost,
                            h.bound,
                        ));
                    }
                    Err(e) => rows.push(TheoryCheckReport::domain_error("hoeffding", params, &e)),
                }
            }
        }
    }
    rows
}

/// Agreement of the direct and log-domain evaluations of `c(a)` to `1e-10`
/// relative; `a <= 2` yields a failing domain-error row.
pub fn constant_c_rows(a_values: &[f64]) -> Vec<TheoryCheckReport> {
    a_values
        .iter()
        .map(|&a| {
            let params = format!("a={a}");
            match (constant_c(a), ln_constant_c(a)) {
                (Ok(c), Ok(ln_c)) => {
                    let via_log = libm::exp(ln_c);
                    let rel = if c.is_finite() {
                        (c - via_log).abs() / via_log
                    } else {
                        0.0
                    };
                    TheoryCheckReport::compare("constant_c", params, rel, Relation::AtMost, 1e-10)
                        .with_note(format!("c={c};ln_c={ln_c}"))
                }
                (Err(e), _) | (_, Err(e)) => TheoryCheckReport::domain_error("constant_c", params, &e),
            }
        })
        .collect()
}

/// Fraction of achievable deviations `ε = (sμ − v)/s`, `0 <= v < sμ`, at
/// which the pseudo-reward deviation is strictly more likely than the real
/// one. One informational row per scale `a`.
pub fn tail_optimism_coverage(pulls: &[u64], mus: &[f64], a_values: &[f64]) -> Vec<TheoryCheckReport> {
    let mut rows = Vec::new();
    for &a in a_values {
        let (mut total, mut optimistic) = (0u64, 0u64);
        for &s in pulls {
            for &mu in mus {
                let mean = s as f64 * mu;
                let top = crate::math::lattice_ceil(mean);
                for v in 0..top.max(0) {
                    let eps = (mean - v as f64) / s as f64;
                    if let Ok(p) = tail_optimism_probe(s, a, mu, eps) {
                        total += 1;
                        optimistic += u64::from(p.optimistic());
                    }
                }
            }
        }
        let fraction = if total == 0 {
            0.0
        } else {
            optimistic as f64 / total as f64
        };
        rows.push(
            TheoryCheckReport {
                pass: true,
                ..TheoryCheckReport::compare(
                    "tail_optimism_coverage",
                    format!("a={a}"),
                    fraction,
                    Relation::AtMost,
                    1.0,
                )
            }
            .informational()
            .with_note(format!("{optimistic} of {total} lattice deviations optimistic")),
        );
    }
    rows
}
