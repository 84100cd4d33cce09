//! Float helpers routed through libm so the crate stays no_std-clean.

#[cfg_attr(not(test), allow(dead_code))] // used by in-crate tests
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// Exact `2^-n` by repeated halving.
pub(crate) fn pow2_neg(n: u32) -> f64 {
    let mut v = 1.0f64;
    for _ in 0..n {
        v *= 0.5;
    }
    v
}

/// `count` log-spaced values from `lo` to `hi` inclusive (`count >= 2`).
pub(crate) fn log_spaced(lo: f64, hi: f64, count: usize) -> alloc::vec::Vec<f64> {
    debug_assert!(lo > 0.0 && hi > lo && count >= 2);
    let (a, b) = (ln(lo), ln(hi));
    let mut out = alloc::vec::Vec::with_capacity(count);
    for k in 0..count {
        let t = k as f64 / (count - 1) as f64;
        out.push(exp(a + t * (b - a)));
    }
    out[0] = lo;
    let last = out.len() - 1;
    out[last] = hi;
    out
}
