//! Inequality-constrained smooth maximization by an augmented Lagrangian
//! with inner Newton steps, for likelihoods with ordering constraints
//! between pairs of parameters.

use crate::error::{NumericError, Result};
use nalgebra::{DMatrix, DVector};

/// A twice-differentiable objective to maximize. Points where the objective
/// is undefined return −∞; the line search treats them as infeasible.
pub(crate) trait Smooth {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64], out: &mut [f64]);
    /// Negative Hessian (the observed information); must be finite at
    /// feasible points.
    fn neg_hessian(&self, x: &[f64]) -> DMatrix<f64>;
}

/// Result of a successful maximization.
pub(crate) struct Solution {
    pub x: Vec<f64>,
    pub value: f64,
    #[allow(dead_code)]
    pub grad_norm: f64,
}

/// Total Newton-iteration budget across all outer multiplier updates.
const MAX_ITERS: usize = 500;
/// First-order optimality target on the augmented gradient.
const GRAD_TOL: f64 = 1e-5;
/// Step-size floor: steps below this end the inner loop.
const STEP_TOL: f64 = 1e-9;
/// Constraint satisfaction target.
const CONSTRAINT_TOL: f64 = 1e-10;

/// Maximizes `obj` subject to `x[hi] − x[lo] ≥ 0` for every `(lo, hi)` in
/// `ordering`, starting from a feasible point.
///
/// The augmented objective subtracts ψ(c) = (max(0, λ−ρc)² − λ²)/(2ρ) for
/// each constraint value c; multipliers update as λ ← max(0, λ−ρc) after
/// each inner Newton solve, and ρ grows when the worst violation stalls.
pub(crate) fn maximize_ordered(
    obj: &impl Smooth,
    start: &[f64],
    ordering: &[(usize, usize)],
) -> Result<Solution> {
    let n = obj.dim();
    assert_eq!(start.len(), n);
    let mut x = start.to_vec();
    let mut lambda = vec![0.0f64; ordering.len()];
    let mut rho = 10.0f64;
    let mut grad = vec![0.0f64; n];
    let mut iters = 0usize;
    let mut last_violation = f64::INFINITY;

    let violation = |x: &[f64]| -> f64 {
        ordering
            .iter()
            .map(|&(lo, hi)| (x[lo] - x[hi]).max(0.0))
            .fold(0.0f64, f64::max)
    };

    for _outer in 0..30 {
        // inner Newton loop on the augmented objective at fixed (λ, ρ)
        loop {
            if iters >= MAX_ITERS {
                let g = augmented_gradient(obj, &x, ordering, &lambda, rho, &mut grad);
                return Err(NumericError::NoConvergence {
                    grad_norm: g,
                    iters,
                }
                .into());
            }
            iters += 1;
            let gnorm = augmented_gradient(obj, &x, ordering, &lambda, rho, &mut grad);
            if gnorm < GRAD_TOL {
                break;
            }
            let mut info = obj.neg_hessian(&x);
            for (c, &(lo, hi)) in ordering.iter().enumerate() {
                let cval = x[hi] - x[lo];
                if lambda[c] - rho * cval > 0.0 {
                    // active penalty curvature ρ·(e_hi − e_lo)(e_hi − e_lo)ᵀ
                    info[(hi, hi)] += rho;
                    info[(lo, lo)] += rho;
                    info[(hi, lo)] -= rho;
                    info[(lo, hi)] -= rho;
                }
            }
            let dir = newton_direction(&info, &grad);
            let f0 = augmented_value(obj, &x, ordering, &lambda, rho);
            let slope: f64 = grad.iter().zip(&dir).map(|(g, d)| g * d).sum();
            if !slope.is_finite() || slope <= 0.0 {
                break; // ascent exhausted at this multiplier estimate
            }
            let mut t = 1.0f64;
            let mut stepped = false;
            for _ in 0..40 {
                let trial: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + t * di).collect();
                let f1 = augmented_value(obj, &trial, ordering, &lambda, rho);
                if f1.is_finite() && f1 >= f0 + 1e-4 * t * slope {
                    x = trial;
                    stepped = true;
                    break;
                }
                t *= 0.5;
            }
            if !stepped {
                break;
            }
            let step_norm = t * dir.iter().map(|d| d * d).sum::<f64>().sqrt();
            if step_norm < STEP_TOL {
                break;
            }
        }

        let v = violation(&x);
        let gnorm = augmented_gradient(obj, &x, ordering, &lambda, rho, &mut grad);
        if v < CONSTRAINT_TOL && gnorm < GRAD_TOL {
            return Ok(Solution {
                value: obj.value(&x),
                grad_norm: gnorm,
                x,
            });
        }
        for (c, &(lo, hi)) in ordering.iter().enumerate() {
            lambda[c] = (lambda[c] - rho * (x[hi] - x[lo])).max(0.0);
        }
        if v > 0.25 * last_violation {
            rho *= 5.0;
        }
        last_violation = v;
    }

    let gnorm = augmented_gradient(obj, &x, ordering, &lambda, rho, &mut grad);
    Err(NumericError::NoConvergence {
        grad_norm: gnorm,
        iters,
    }
    .into())
}

/// Augmented objective value (to maximize).
fn augmented_value(
    obj: &impl Smooth,
    x: &[f64],
    ordering: &[(usize, usize)],
    lambda: &[f64],
    rho: f64,
) -> f64 {
    let base = obj.value(x);
    if !base.is_finite() {
        return f64::NEG_INFINITY;
    }
    let mut penalty = 0.0;
    for (c, &(lo, hi)) in ordering.iter().enumerate() {
        let cval = x[hi] - x[lo];
        let active = (lambda[c] - rho * cval).max(0.0);
        penalty += (active * active - lambda[c] * lambda[c]) / (2.0 * rho);
    }
    base - penalty
}

/// Gradient of the augmented objective into `out`; returns its norm.
fn augmented_gradient(
    obj: &impl Smooth,
    x: &[f64],
    ordering: &[(usize, usize)],
    lambda: &[f64],
    rho: f64,
    out: &mut [f64],
) -> f64 {
    obj.gradient(x, out);
    for (c, &(lo, hi)) in ordering.iter().enumerate() {
        let cval = x[hi] - x[lo];
        let active = (lambda[c] - rho * cval).max(0.0);
        // d/dx of −ψ(c(x)): +active on the hi side, −active on the lo side
        out[hi] += active;
        out[lo] -= active;
    }
    out.iter().map(|g| g * g).sum::<f64>().sqrt()
}

/// Ascent direction solving (info + ridge)·d = grad, with the ridge grown
/// until the system factors.
fn newton_direction(info: &DMatrix<f64>, grad: &[f64]) -> Vec<f64> {
    let n = grad.len();
    let g = DVector::from_column_slice(grad);
    let mut ridge = 0.0f64;
    let scale = (0..n).map(|i| info[(i, i)].abs()).fold(1.0f64, f64::max);
    for _ in 0..60 {
        let mut m = info.clone();
        for i in 0..n {
            m[(i, i)] += ridge;
        }
        if let Some(chol) = m.cholesky() {
            let d = chol.solve(&g);
            return d.iter().copied().collect();
        }
        ridge = if ridge == 0.0 {
            1e-10 * scale
        } else {
            ridge * 10.0
        };
    }
    // fall back to steepest ascent scaled to the curvature
    grad.iter().map(|gi| gi / scale).collect()
}
