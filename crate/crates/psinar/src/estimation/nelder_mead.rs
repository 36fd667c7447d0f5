//! Derivative-free simplex minimization (Nelder-Mead) with standard
//! reflection/expansion/contraction/shrink coefficients.

#[derive(Debug, Clone)]
pub(crate) struct NelderMeadOptions {
    /// Stop when the objective spread across the simplex falls below this.
    pub objective_tol: f64,
    /// Stop when the simplex diameter falls below this.
    pub param_tol: f64,
    pub max_iter: usize,
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            objective_tol: 1e-10,
            param_tol: 1e-8,
            max_iter: 2000,
            initial_step: 0.5,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

pub(crate) fn minimize<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    options: &NelderMeadOptions,
) -> Minimum {
    let dim = x0.len();
    assert!(dim >= 1, "need at least one coordinate");

    let mut simplex: Vec<(f64, Vec<f64>)> = Vec::with_capacity(dim + 1);
    simplex.push((sanitize(f(x0)), x0.to_vec()));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += options.initial_step;
        simplex.push((sanitize(f(&x)), x));
    }

    let order = |s: &mut Vec<(f64, Vec<f64>)>| {
        s.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    };
    order(&mut simplex);

    let mut iterations = 0;
    let mut converged = false;
    while iterations < options.max_iter {
        iterations += 1;

        let best = simplex[0].0;
        let worst = simplex[dim].0;
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(_, x)| {
                x.iter()
                    .zip(simplex[0].1.iter())
                    .map(|(a, b)| (a - b).abs())
            })
            .fold(0.0f64, f64::max);
        if worst - best <= options.objective_tol && diameter <= options.param_tol {
            converged = true;
            break;
        }

        // Centroid of all points but the worst.
        let mut centroid = vec![0.0; dim];
        for (_, x) in simplex.iter().take(dim) {
            for (c, xi) in centroid.iter_mut().zip(x.iter()) {
                *c += xi / dim as f64;
            }
        }

        let towards = |from: &[f64], to: &[f64], coef: f64| -> Vec<f64> {
            from.iter()
                .zip(to.iter())
                .map(|(a, b)| a + coef * (b - a))
                .collect()
        };

        let worst_x = simplex[dim].1.clone();
        let reflected: Vec<f64> = centroid
            .iter()
            .zip(worst_x.iter())
            .map(|(c, w)| c + REFLECT * (c - w))
            .collect();
        let f_reflected = sanitize(f(&reflected));

        if f_reflected < simplex[0].0 {
            let expanded = towards(&centroid, &reflected, EXPAND);
            let f_expanded = sanitize(f(&expanded));
            simplex[dim] = if f_expanded < f_reflected {
                (f_expanded, expanded)
            } else {
                (f_reflected, reflected)
            };
        } else if f_reflected < simplex[dim - 1].0 {
            simplex[dim] = (f_reflected, reflected);
        } else {
            let contracted = if f_reflected < simplex[dim].0 {
                towards(&centroid, &reflected, CONTRACT)
            } else {
                towards(&centroid, &worst_x, CONTRACT)
            };
            let f_contracted = sanitize(f(&contracted));
            if f_contracted < simplex[dim].0.min(f_reflected) {
                simplex[dim] = (f_contracted, contracted);
            } else {
                // Shrink towards the best point.
                let best_x = simplex[0].1.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = best_x
                        .iter()
                        .zip(entry.1.iter())
                        .map(|(b, xi)| b + SHRINK * (xi - b))
                        .collect();
                    *entry = (sanitize(f(&x)), x);
                }
            }
        }
        order(&mut simplex);
    }

    let (value, x) = simplex.swap_remove(0);
    Minimum {
        x,
        value,
        iterations,
        converged,
    }
}
