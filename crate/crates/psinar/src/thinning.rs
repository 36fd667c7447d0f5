//! The power-series thinning operator α∘X = Σᵢ Yᵢ.
//!
//! Given X = x, the thinned count is a sum of x iid counting variables with
//! mean α. For the three built-in families the sum has a closed form
//! (binomial, negative binomial, Poisson), which is what both sampling and
//! pmf evaluation use; user-supplied families fall back to convolution.

use rand::Rng;
use rand_distr::{Binomial, Distribution, Gamma, Poisson};

use crate::distributions::{check_alpha, ThinningFamily};
use crate::error::Result;
use crate::numeric::{ln_binomial, ln_factorial};

/// The conditional law of α∘X given X = x.
#[derive(Debug, Clone)]
pub struct ThinnedLaw {
    family: ThinningFamily,
    alpha: f64,
    x: u32,
}

impl ThinnedLaw {
    pub fn new(family: ThinningFamily, alpha: f64, x: u32) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self { family, alpha, x })
    }

    /// E(α∘X | X = x) = αx.
    pub fn mean(&self) -> f64 {
        self.alpha * f64::from(self.x)
    }

    /// Var(α∘X | X = x) = δ(α)x.
    pub fn variance(&self) -> f64 {
        self.family.delta_unchecked(self.alpha) * f64::from(self.x)
    }

    pub fn pmf(&self, m: u32) -> f64 {
        self.ln_pmf(m).exp()
    }

    pub fn ln_pmf(&self, m: u32) -> f64 {
        ln_thinned_pmf(&self.family, self.alpha, self.x, m)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        sample_thinned(&self.family, self.alpha, self.x, rng)
    }
}

/// Applies the thinning operator once: draws α∘X given X = x.
pub fn thin<R: Rng + ?Sized>(
    family: &ThinningFamily,
    alpha: f64,
    x: u32,
    rng: &mut R,
) -> Result<u32> {
    check_alpha(alpha)?;
    Ok(sample_thinned(family, alpha, x, rng))
}

/// P(α∘X = m | X = x).
pub fn thinned_pmf(family: &ThinningFamily, alpha: f64, x: u32, m: u32) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(ln_thinned_pmf(family, alpha, x, m).exp())
}

/// log P(α∘X = m | X = x); `-inf` outside the support.
pub fn thinned_ln_pmf(family: &ThinningFamily, alpha: f64, x: u32, m: u32) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(ln_thinned_pmf(family, alpha, x, m))
}

pub(crate) fn sample_thinned<R: Rng + ?Sized>(
    family: &ThinningFamily,
    alpha: f64,
    x: u32,
    rng: &mut R,
) -> u32 {
    if x == 0 {
        return 0;
    }
    match family {
        // Sum of x Bernoulli(alpha) is Binomial(x, alpha).
        ThinningFamily::Bernoulli => Binomial::new(u64::from(x), alpha)
            .expect("alpha in (0,1)")
            .sample(rng) as u32,
        // Sum of x mean-alpha geometrics is NB(x, 1/(1+alpha)), drawn as a
        // Gamma(x, scale alpha) mixture of Poissons.
        ThinningFamily::Geometric => {
            let rate = Gamma::new(f64::from(x), alpha)
                .expect("valid shape/scale")
                .sample(rng);
            if rate <= 0.0 {
                0
            } else {
                Poisson::new(rate).expect("rate > 0").sample(rng) as u32
            }
        }
        // Sum of x Poisson(alpha) is Poisson(alpha x).
        ThinningFamily::Poisson => Poisson::new(alpha * f64::from(x))
            .expect("positive rate")
            .sample(rng) as u32,
        // No closed form: draw the x counting variables directly by
        // inverse-cdf search on the counting pmf.
        ThinningFamily::Custom(_) => {
            let mut total = 0u32;
            for _ in 0..x {
                let u: f64 = rng.random();
                let mut cum = 0.0;
                let mut y = 0u32;
                loop {
                    cum += family.counting_pmf_unchecked(alpha, y);
                    if u < cum || cum > 1.0 - 1e-14 || y > 1_000_000 {
                        break;
                    }
                    y += 1;
                }
                total += y;
            }
            total
        }
    }
}

pub(crate) fn ln_thinned_pmf(family: &ThinningFamily, alpha: f64, x: u32, m: u32) -> f64 {
    if x == 0 {
        return if m == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    let xf = f64::from(x);
    let mf = f64::from(m);
    match family {
        ThinningFamily::Bernoulli => {
            if m > x {
                return f64::NEG_INFINITY;
            }
            ln_binomial(u64::from(x), u64::from(m))
                + mf * alpha.ln()
                + (xf - mf) * (1.0 - alpha).ln()
        }
        ThinningFamily::Geometric => {
            // NB(x, 1/(1+alpha)): C(x+m-1, m) (1/(1+alpha))^x (alpha/(1+alpha))^m
            ln_binomial(u64::from(x) + u64::from(m) - 1, u64::from(m)) - xf * alpha.ln_1p()
                + mf * (alpha.ln() - alpha.ln_1p())
        }
        ThinningFamily::Poisson => {
            let rate = alpha * xf;
            -rate + mf * rate.ln() - ln_factorial(u64::from(m))
        }
        ThinningFamily::Custom(_) => convolved_pmf(family, alpha, x, m).ln(),
    }
}

// x-fold convolution of the counting pmf, truncated once the cumulative mass
// of the partial sums exceeds 1 - 1e-14; the slow path for custom families.
fn convolved_pmf(family: &ThinningFamily, alpha: f64, x: u32, m: u32) -> f64 {
    let base = counting_vector(family, alpha, m);
    let mut acc = base.clone();
    for _ in 1..x {
        acc = convolve_truncated(&acc, &base, m as usize);
    }
    acc.get(m as usize).copied().unwrap_or(0.0)
}

fn counting_vector(family: &ThinningFamily, alpha: f64, needed: u32) -> Vec<f64> {
    let mut v = Vec::new();
    let mut cum = 0.0;
    let mut y = 0u32;
    loop {
        let p = family.counting_pmf_unchecked(alpha, y);
        v.push(p);
        cum += p;
        if (cum > 1.0 - 1e-14 && y >= needed) || y > 100_000 {
            break;
        }
        if let Some(max) = family.support_max() {
            if y >= max {
                break;
            }
        }
        y += 1;
    }
    v
}

fn convolve_truncated(a: &[f64], b: &[f64], keep: usize) -> Vec<f64> {
    let len = (a.len() + b.len() - 1).min(keep + 1);
    let mut out = vec![0.0; len];
    for (i, &ai) in a.iter().enumerate() {
        if i >= len {
            break;
        }
        for (j, &bj) in b.iter().enumerate() {
            if i + j >= len {
                break;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}
