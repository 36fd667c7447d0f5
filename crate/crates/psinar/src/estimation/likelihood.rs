//! Fast conditional log-likelihood evaluation for repeated optimizer calls.
//!
//! A series enters the likelihood only through its one-step transition
//! counts, so transitions are tallied once per series and each objective
//! evaluation loops over distinct (l, k) pairs with multiplicities.

use std::collections::HashMap;

use crate::distributions::{InnovationKind, ThinningFamily};
use crate::numeric::{ln_factorial_table, log_sum_exp};
use crate::process::CountSeries;
use crate::thinning::ln_thinned_pmf;

pub(crate) struct LoglikEvaluator {
    /// Distinct (from, to, multiplicity) transitions, sorted for determinism.
    pairs: Vec<(u32, u32, f64)>,
    max_k: u32,
    family: ThinningFamily,
    kind: InnovationKind,
    ln_fact: Vec<f64>,
    innov_ln: Vec<f64>,
    terms: Vec<f64>,
    custom_rows: HashMap<u32, Vec<f64>>,
}

impl LoglikEvaluator {
    pub fn new(series: &CountSeries, family: &ThinningFamily, kind: InnovationKind) -> Self {
        let mut tally: HashMap<(u32, u32), u64> = HashMap::new();
        for w in series.values().windows(2) {
            *tally.entry((w[0], w[1])).or_insert(0) += 1;
        }
        let mut pairs: Vec<(u32, u32, f64)> = tally
            .into_iter()
            .map(|((l, k), c)| (l, k, c as f64))
            .collect();
        pairs.sort_unstable_by_key(|&(l, k, _)| (l, k));

        let max_l = pairs.iter().map(|p| p.0).max().unwrap_or(0);
        let max_k = pairs.iter().map(|p| p.1).max().unwrap_or(0);
        // Largest factorial argument: l + m - 1 with m <= k (geometric case).
        let ln_fact = ln_factorial_table((max_l + max_k + 2) as usize);

        Self {
            pairs,
            max_k,
            family: family.clone(),
            kind,
            ln_fact,
            innov_ln: vec![0.0; max_k as usize + 1],
            terms: Vec::with_capacity(max_k as usize + 1),
            custom_rows: HashMap::new(),
        }
    }

    fn fill_innovation_table(&mut self, param: f64) -> bool {
        match self.kind {
            InnovationKind::PoissonLindley => {
                if !(param > 0.0 && param.is_finite()) {
                    return false;
                }
                let ln_t = param.ln();
                let ln_1pt = param.ln_1p();
                for (w, slot) in self.innov_ln.iter_mut().enumerate() {
                    let wf = w as f64;
                    *slot = 2.0 * ln_t + (wf + param + 2.0).ln() - (wf + 3.0) * ln_1pt;
                }
            }
            InnovationKind::Poisson => {
                if !(param > 0.0 && param.is_finite()) {
                    return false;
                }
                let ln_l = param.ln();
                for (w, slot) in self.innov_ln.iter_mut().enumerate() {
                    *slot = w as f64 * ln_l - param - self.ln_fact[w];
                }
            }
            InnovationKind::Geometric => {
                if !(param > 0.0 && param < 1.0) {
                    return false;
                }
                let ln_p = param.ln();
                let ln_q = (-param).ln_1p();
                for (w, slot) in self.innov_ln.iter_mut().enumerate() {
                    *slot = ln_p + w as f64 * ln_q;
                }
            }
        }
        true
    }

    /// Conditional log-likelihood at (α, innovation parameter); negative
    /// infinity outside the admissible parameter region.
    pub fn loglik(&mut self, alpha: f64, param: f64) -> f64 {
        if !(alpha > 0.0 && alpha < 1.0) {
            return f64::NEG_INFINITY;
        }
        if !self.fill_innovation_table(param) {
            return f64::NEG_INFINITY;
        }
        self.custom_rows.clear();

        let ln_a = alpha.ln();
        let ln_1ma = (1.0 - alpha).ln();
        let ln_1pa = alpha.ln_1p();

        let mut total = 0.0;
        for idx in 0..self.pairs.len() {
            let (l, k, count) = self.pairs[idx];
            let contribution = if l == 0 {
                self.innov_ln[k as usize]
            } else {
                self.terms.clear();
                match self.family {
                    ThinningFamily::Bernoulli => {
                        let lf = &self.ln_fact;
                        let l_us = l as usize;
                        for m in 0..=l.min(k) {
                            let m_us = m as usize;
                            let ln_binom = lf[l_us] - lf[m_us] - lf[l_us - m_us];
                            self.terms.push(
                                ln_binom
                                    + f64::from(m) * ln_a
                                    + f64::from(l - m) * ln_1ma
                                    + self.innov_ln[(k - m) as usize],
                            );
                        }
                    }
                    ThinningFamily::Geometric => {
                        let lf = &self.ln_fact;
                        let base = -f64::from(l) * ln_1pa;
                        let ln_ratio = ln_a - ln_1pa;
                        let l_us = l as usize;
                        for m in 0..=k {
                            let m_us = m as usize;
                            let ln_coeff = lf[l_us + m_us - 1] - lf[m_us] - lf[l_us - 1];
                            self.terms.push(
                                base + ln_coeff
                                    + f64::from(m) * ln_ratio
                                    + self.innov_ln[(k - m) as usize],
                            );
                        }
                    }
                    ThinningFamily::Poisson => {
                        let rate = alpha * f64::from(l);
                        let ln_rate = rate.ln();
                        let lf = &self.ln_fact;
                        for m in 0..=k {
                            self.terms.push(
                                -rate + f64::from(m) * ln_rate - lf[m as usize]
                                    + self.innov_ln[(k - m) as usize],
                            );
                        }
                    }
                    ThinningFamily::Custom(_) => {
                        let family = &self.family;
                        let max_k = self.max_k;
                        let row = self.custom_rows.entry(l).or_insert_with(|| {
                            (0..=max_k)
                                .map(|m| ln_thinned_pmf(family, alpha, l, m))
                                .collect()
                        });
                        for m in 0..=k {
                            self.terms
                                .push(row[m as usize] + self.innov_ln[(k - m) as usize]);
                        }
                    }
                }
                log_sum_exp(&self.terms)
            };
            total += count * contribution;
        }
        total
    }
}
