//! Derivative-free simplex optimization with the canonical Nelder-Mead
//! coefficients: reflection 1, expansion 2, contraction 0.5, shrink 0.5.

use crate::training::OptimizerRun;

/// Options for a Nelder-Mead run.
#[derive(Clone, Copy, Debug)]
pub struct NelderMeadOptions {
    /// Stop once the cost spread across the simplex falls below this value.
    pub tol: f64,
    /// Iteration budget.
    pub max_iter: usize,
    /// Offset added to each coordinate to build the initial simplex.
    pub initial_step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            tol: 1e-6,
            max_iter: 4000,
            initial_step: 0.8,
        }
    }
}

struct Vertex {
    x: Vec<f64>,
    f: f64,
}

/// Minimizes `cost` starting from `init`. Returns the best vertex, the
/// per-iteration best-cost trace and the matching parameter trace.
pub fn optimize_nelder_mead<F>(
    mut cost: F,
    init: &[f64],
    options: &NelderMeadOptions,
) -> OptimizerRun
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = init.len();
    let mut simplex: Vec<Vertex> = Vec::with_capacity(dim + 1);
    simplex.push(Vertex {
        x: init.to_vec(),
        f: cost(init),
    });
    for i in 0..dim {
        let mut x = init.to_vec();
        x[i] += options.initial_step;
        let f = cost(&x);
        simplex.push(Vertex { x, f });
    }

    let mut cost_trace = Vec::new();
    let mut param_trace = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    for _ in 0..options.max_iter {
        simplex.sort_by(|a, b| a.f.total_cmp(&b.f));
        let spread = simplex[dim].f - simplex[0].f;
        if spread.abs() < options.tol {
            converged = true;
            break;
        }
        iterations += 1;

        // Centroid of all vertices except the worst.
        let mut centroid = vec![0.0; dim];
        for v in &simplex[..dim] {
            for (c, &xi) in centroid.iter_mut().zip(&v.x) {
                *c += xi / dim as f64;
            }
        }

        let worst = simplex[dim].f;
        let second_worst = simplex[dim - 1].f;
        let best = simplex[0].f;

        let point = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[dim].x)
                .map(|(&c, &w)| c + coef * (c - w))
                .collect()
        };

        let reflected = point(1.0);
        let f_reflected = cost(&reflected);

        if f_reflected < best {
            let expanded = point(2.0);
            let f_expanded = cost(&expanded);
            if f_expanded < f_reflected {
                simplex[dim] = Vertex {
                    x: expanded,
                    f: f_expanded,
                };
            } else {
                simplex[dim] = Vertex {
                    x: reflected,
                    f: f_reflected,
                };
            }
        } else if f_reflected < second_worst {
            simplex[dim] = Vertex {
                x: reflected,
                f: f_reflected,
            };
        } else {
            let (contracted, f_contracted) = if f_reflected < worst {
                let outside = point(0.5);
                let f = cost(&outside);
                (outside, f)
            } else {
                let inside = point(-0.5);
                let f = cost(&inside);
                (inside, f)
            };
            if f_contracted < worst.min(f_reflected) {
                simplex[dim] = Vertex {
                    x: contracted,
                    f: f_contracted,
                };
            } else {
                // Shrink every vertex toward the best.
                let best_x = simplex[0].x.clone();
                for v in simplex.iter_mut().skip(1) {
                    for (xi, &bi) in v.x.iter_mut().zip(&best_x) {
                        *xi = bi + 0.5 * (*xi - bi);
                    }
                    v.f = cost(&v.x);
                }
            }
        }

        let current_best = simplex
            .iter()
            .min_by(|a, b| a.f.total_cmp(&b.f))
            .expect("non-empty simplex");
        cost_trace.push(current_best.f);
        param_trace.push(current_best.x.clone());
    }

    simplex.sort_by(|a, b| a.f.total_cmp(&b.f));
    OptimizerRun {
        best_params: simplex[0].x.clone(),
        best_cost: simplex[0].f,
        cost_trace,
        param_trace,
        iterations,
        converged,
    }
}
