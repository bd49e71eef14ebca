//! Values frozen from an independent 50-digit evaluation.
#![allow(clippy::excessive_precision)]

use phe_core::dist::{binomial_tail, BinomialParams};
use phe_core::theory::{
    constant_c, expected_inverse_tail_exact, gap_dependent_bound, gap_free_bound, theorem4_bound, BoundInputs,
    TailModel,
};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn inverse_tail_expectations() {
    let cases = [
        (5, 0.6, 2.0, 1.965_868_659_761_902_369_2),
        (50, 0.3, 1.5, 2.263_961_764_374_740_801_7),
        (17, 0.9, 3.0, 2.161_550_662_815_852_953_9),
        (40, 0.5, 6.0, 2.035_372_325_518_752_732_8),
    ];
    for (n, mu, a, expected) in cases {
        let w = expected_inverse_tail_exact(&TailModel::new(n, mu, a).unwrap()).unwrap();
        assert!(rel(w, expected) < 1e-12, "n={n} mu={mu} a={a}: {w} vs {expected}");
        assert!(w <= theorem4_bound(a).unwrap());
    }
}

#[test]
fn large_binomial_tails() {
    let cases = [
        (5400, 10_000, 0.5, 6.521_226_063_700_101_845_5e-16),
        (3100, 10_000, 0.3, 0.015_156_387_528_068_955_323),
        (700, 1000, 0.62, 7.146_575_193_492_177_624_1e-8),
    ];
    for (k, n, p, expected) in cases {
        let t = binomial_tail(k, BinomialParams::new(n, p).unwrap());
        assert!(rel(t, expected) < 1e-12, "k={k} n={n} p={p}: {t} vs {expected}");
    }
}

#[test]
fn pinned_bound_constants() {
    assert!(rel(constant_c(6.0).unwrap(), 1_393.608_477_737_161_626_9) < 1e-10);
    assert!(rel(constant_c(2.1).unwrap(), 1.015_448_407_564_464_688_5e71) < 1e-10);
    assert!(rel(theorem4_bound(1.5).unwrap(), 189_230_494.471_660_335_11) < 1e-10);
    let inputs = BoundInputs {
        a: 2.1,
        gaps: vec![0.25; 9],
        horizon: 10_000,
    };
    assert!(rel(gap_dependent_bound(&inputs).unwrap(), 1.131_293_576_107_285_658_6e75) < 1e-10);
    let inputs = BoundInputs {
        a: 6.0,
        gaps: vec![0.1, 0.3, 0.5],
        horizon: 1000,
    };
    assert!(rel(gap_dependent_bound(&inputs).unwrap(), 14_175_600.309_340_190_353) < 1e-10);
    assert!(rel(gap_free_bound(2.1, 10, 10_000).unwrap(), 3.545_409_514_204_852_062_1e39) < 1e-10);
    assert!(rel(gap_free_bound(6.0, 10, 10_000).unwrap(), 702_235.304_648_285_286_28) < 1e-10);
}
