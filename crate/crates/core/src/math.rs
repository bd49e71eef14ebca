//! Small numeric helpers shared across modules.

use core::f64::consts::PI;

/// Relative distance below which a real is snapped to the nearest integer
/// before rounding, so products like `1.1 * 10.0` land on 11 instead of 12.
pub const LATTICE_TOL: f64 = 1e-9;

fn snap(x: f64) -> Option<f64> {
    let r = libm::round(x);
    let scale = if x.abs() > 1.0 { x.abs() } else { 1.0 };
    ((x - r).abs() <= LATTICE_TOL * scale).then_some(r)
}

/// Smallest integer `>= x`, treating values within [`LATTICE_TOL`] of an
/// integer as that integer.
pub fn lattice_ceil(x: f64) -> i64 {
    snap(x).unwrap_or_else(|| libm::ceil(x)) as i64
}

/// Largest integer `<= x`, with the same snapping as [`lattice_ceil`].
pub fn lattice_floor(x: f64) -> i64 {
    snap(x).unwrap_or_else(|| libm::floor(x)) as i64
}

/// Number of pseudo-rewards for an arm with `pulls` observations at scale `a`:
/// `⌈a·pulls⌉`.
pub fn pseudo_count(a: f64, pulls: u64) -> u64 {
    lattice_ceil(a * pulls as f64).max(0) as u64
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `ln C(n, k)`.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

// stirlerr(1..=15), evaluated at 40 digits.
#[allow(clippy::excessive_precision)]
const STIRLERR_SMALL: [f64; 15] = [
    0.081_061_466_795_327_258_219_67,
    0.041_340_695_955_409_294_093_82,
    0.027_677_925_684_998_339_148_79,
    0.020_790_672_103_765_093_111_52,
    0.016_644_691_189_821_192_163_19,
    0.013_876_128_823_070_747_998_75,
    0.011_896_709_945_891_770_095_06,
    0.010_411_265_261_972_096_497_48,
    0.009_255_462_182_712_732_917_729,
    0.008_330_563_433_362_871_256_469,
    0.007_573_675_487_951_840_794_972,
    0.006_942_840_107_209_529_865_664,
    0.006_408_994_188_004_207_068_44,
    0.005_951_370_112_758_847_735_624,
    0.005_554_733_551_962_801_371_039,
];

// Stirling-formula error ln(n!) - ln(sqrt(2πn) (n/e)^n), Loader (2000).
fn stirlerr(n: f64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n <= 15.0 {
        let i = n as usize;
        if i as f64 == n && i >= 1 {
            return STIRLERR_SMALL[i - 1];
        }
        return ln_gamma(n + 1.0) - (n + 0.5) * libm::log(n) + n - 0.5 * libm::log(2.0 * PI);
    }
    let nn = n * n;
    if n > 500.0 {
        (S0 - S1 / nn) / n
    } else if n > 80.0 {
        (S0 - (S1 - S2 / nn) / nn) / n
    } else if n > 35.0 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
    }
}

// Deviance term x ln(x/np) + np - x, evaluated without cancellation.
fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let mut v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * libm::log(x / np) + np - x
    }
}

/// Natural log of the binomial pmf `P(X = k)` for `X ~ Binomial(n, p)`,
/// accurate to a few ulps in relative terms for all `n` (saddle-point form).
pub fn ln_binomial_pmf(k: u64, n: u64, p: f64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let q = 1.0 - p;
    if p == 0.0 {
        return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if q == 0.0 {
        return if k == n { 0.0 } else { f64::NEG_INFINITY };
    }
    let (nf, kf) = (n as f64, k as f64);
    if k == 0 {
        if n == 0 {
            return 0.0;
        }
        return if p < 0.1 {
            -bd0(nf, nf * q) - nf * p
        } else {
            nf * libm::log(q)
        };
    }
    if k == n {
        return if q < 0.1 {
            -bd0(nf, nf * p) - nf * q
        } else {
            nf * libm::log(p)
        };
    }
    let lc = stirlerr(nf) - stirlerr(kf) - stirlerr(nf - kf) - bd0(kf, nf * p) - bd0(nf - kf, nf * q);
    let lf = libm::log(2.0 * PI) + libm::log(kf) + libm::log1p(-kf / nf);
    lc - 0.5 * lf
}
