//! Small numeric helpers shared across the crate.

use std::cell::RefCell;

/// log(sum_i exp(terms_i)) without overflow; NEG_INFINITY for an empty slice.
pub(crate) fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = terms.iter().map(|&t| (t - max).exp()).sum();
    max + sum.ln()
}

thread_local! {
    // ln(n!) for n = 0..len, grown on demand.
    static LN_FACT: RefCell<Vec<f64>> = RefCell::new(vec![0.0, 0.0]);
}

/// ln(n!) via a thread-local cached table.
pub(crate) fn ln_factorial(n: u64) -> f64 {
    LN_FACT.with(|cell| {
        let mut table = cell.borrow_mut();
        if (n as usize) >= table.len() {
            let mut acc = *table.last().unwrap();
            for i in table.len()..=(n as usize) {
                acc += (i as f64).ln();
                table.push(acc);
            }
        }
        table[n as usize]
    })
}

/// ln(C(n, k)); requires k <= n.
pub(crate) fn ln_binomial(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Builds an owned ln-factorial table `[ln 0!, .., ln n_max!]` for hot loops.
pub(crate) fn ln_factorial_table(n_max: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(n_max + 1);
    table.push(0.0);
    let mut acc = 0.0;
    for i in 1..=n_max {
        acc += (i as f64).ln();
        table.push(acc);
    }
    table
}

/// logit^-1; maps R onto (0,1).
#[inline]
pub(crate) fn inv_logit(u: f64) -> f64 {
    if u >= 0.0 {
        1.0 / (1.0 + (-u).exp())
    } else {
        let e = u.exp();
        e / (1.0 + e)
    }
}

#[inline]
pub(crate) fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

/// SplitMix64-style counter seed: decorrelates per-replicate streams so a
/// master seed plus a replicate index yields independent, reproducible RNGs
/// regardless of thread count.
pub(crate) fn mix_seed(master: u64, stream: u64) -> u64 {
    let mut z = master
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
