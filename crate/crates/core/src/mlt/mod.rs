//! Most-likely-transformation test for many-to-one comparisons: a monotone
//! Bernstein-basis transformation of the response to a standard normal
//! reference, with additive group shifts, fit by constrained maximum
//! likelihood; the shift coefficients are then tested jointly through the
//! max-T engine.
//!
//! The model is P(Y ≤ y | group g) = Φ(b(y)ᵀθ + β_g) with β = 0 for the
//! control, so a **positive** shift means the group is stochastically
//! *smaller* than the control (its distribution function sits higher), and a
//! negative shift means stochastically larger.

pub mod bernstein;
mod optim;

use crate::contrasts::mlt_selector;
use crate::data::Dataset;
use crate::error::{NumericError, Result};
use crate::maxt::{maxt_test, MaxTResult};
use crate::mvdist::QmcConfig;
use crate::num;
use bernstein::{bernstein_eval, BernsteinBasis};
use nalgebra::{DMatrix, DVector};
use optim::{maximize_ordered, Smooth};
use std::fmt;

/// Default Bernstein order for the transformation.
pub const DEFAULT_ORDER: usize = 5;

/// Default pooled-quantile probabilities for the basis support.
pub const DEFAULT_SUPPORT_PROBS: (f64, f64) = (0.01, 0.99);

/// A fitted transformation model: monotone baseline transformation plus one
/// shift per treatment group.
#[derive(Debug, Clone)]
pub struct TransformationModel {
    basis: BernsteinBasis,
    theta: Vec<f64>,
    beta: Vec<f64>,
    vcov: DMatrix<f64>,
    loglik: f64,
    treatments: Vec<String>,
    control: String,
}

impl TransformationModel {
    /// The basis of the baseline transformation.
    pub fn basis(&self) -> &BernsteinBasis {
        &self.basis
    }

    /// Basis coefficients, nondecreasing.
    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Group shifts, one per treatment in dataset order. Positive means
    /// stochastically smaller than the control.
    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// Inverse observed information of (θ, β), in that parameter order.
    pub fn vcov(&self) -> &DMatrix<f64> {
        &self.vcov
    }

    /// Log-likelihood at the optimum.
    pub fn loglik(&self) -> f64 {
        self.loglik
    }

    /// Baseline transformation h(y) = b(y)ᵀθ.
    pub fn transform(&self, y: f64) -> f64 {
        let (values, _) = bernstein_eval(&self.basis, y);
        values.iter().zip(&self.theta).map(|(b, t)| b * t).sum()
    }
}

impl fmt::Display for TransformationModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.basis.support();
        writeln!(f, "order {}", self.basis.order())?;
        writeln!(f, "support [{a}, {b}]")?;
        write!(f, "theta")?;
        for t in &self.theta {
            write!(f, " {t}")?;
        }
        writeln!(f)?;
        write!(f, "beta")?;
        for (name, b) in self.treatments.iter().zip(&self.beta) {
            write!(f, " {name}={b}")?;
        }
        writeln!(f, " (baseline {})", self.control)
    }
}

/// Fits the transformation model by constrained maximum likelihood.
///
/// The basis support spans the pooled response quantiles at
/// `support_probs`; θ starts at a least-squares fit of the basis to normal
/// scores of the pooled midranks and is kept nondecreasing throughout.
pub fn fit_mlt(
    ds: &Dataset,
    order: usize,
    support_probs: (f64, f64),
) -> Result<TransformationModel> {
    let fitted = fit_parts(
        ds.responses(),
        ds.group_indices(),
        ds.n_treatments(),
        order,
        support_probs,
    )?;
    Ok(TransformationModel {
        basis: fitted.basis,
        theta: fitted.theta,
        beta: fitted.beta,
        vcov: fitted.vcov,
        loglik: fitted.loglik,
        treatments: ds.treatments().to_vec(),
        control: ds.control().to_string(),
    })
}

/// The transformation-based many-to-one test: shifts of all treatments
/// against the control, referred jointly to the asymptotic normal via the
/// β block of the inverse observed information.
pub fn mlt_dunnett(ds: &Dataset, order: usize, alpha: f64, cfg: &QmcConfig) -> Result<MaxTResult> {
    let model = fit_mlt(ds, order, DEFAULT_SUPPORT_PROBS)?;
    let family = mlt_selector(order + 1, ds.treatments(), ds.control());
    let mut params = model.theta.clone();
    params.extend_from_slice(&model.beta);
    maxt_test(&params, &model.vcov, &family, 0, alpha, cfg)
}

/// Fit output before dataset labels are attached.
struct FittedParts {
    basis: BernsteinBasis,
    theta: Vec<f64>,
    beta: Vec<f64>,
    vcov: DMatrix<f64>,
    loglik: f64,
}

/// Core fit on raw parts; `k` may be 0 (baseline transformation only).
fn fit_parts(
    y: &[f64],
    group: &[usize],
    k: usize,
    order: usize,
    support_probs: (f64, f64),
) -> Result<FittedParts> {
    let n = y.len();
    let a = quantile_type7(y, support_probs.0);
    let b = quantile_type7(y, support_probs.1);
    if a.partial_cmp(&b) != Some(std::cmp::Ordering::Less) {
        return Err(NumericError::Singular(format!(
            "degenerate support [{a}, {b}] from pooled quantiles"
        ))
        .into());
    }
    let basis = BernsteinBasis::new(order, (a, b));
    let m1 = order + 1;
    let mut bmat = DMatrix::zeros(n, m1);
    let mut bpmat = DMatrix::zeros(n, m1);
    for i in 0..n {
        let (values, derivs) = bernstein_eval(&basis, y[i]);
        for j in 0..m1 {
            bmat[(i, j)] = values[j];
            bpmat[(i, j)] = derivs[j];
        }
    }
    let problem = MltProblem {
        b: bmat,
        bp: bpmat,
        group: group.to_vec(),
        k,
    };

    // start: basis fit to normal scores of the pooled midranks, nudged to
    // strict monotonicity; shifts start at zero
    let ranks = num::midranks(y);
    let z = DVector::from_iterator(
        n,
        ranks
            .iter()
            .map(|r| num::norm_quantile((r - 0.375) / (n as f64 + 0.25))),
    );
    let bt_b = problem.b.transpose() * &problem.b + DMatrix::identity(m1, m1) * 1e-8;
    let bt_z = problem.b.transpose() * z;
    let mut theta0: Vec<f64> = bt_b
        .cholesky()
        .expect("ridge-regularized Gram matrix is positive definite")
        .solve(&bt_z)
        .iter()
        .copied()
        .collect();
    for j in 1..m1 {
        if theta0[j] < theta0[j - 1] + 1e-2 {
            theta0[j] = theta0[j - 1] + 1e-2;
        }
    }
    let mut start = theta0;
    start.extend(std::iter::repeat_n(0.0, k));

    let ordering: Vec<(usize, usize)> = (0..order).map(|j| (j, j + 1)).collect();
    let sol = maximize_ordered(&problem, &start, &ordering)?;

    // the optimum must define a valid density: positive slope at every datum
    for i in 0..n {
        let hp: f64 = (0..m1).map(|j| problem.bp[(i, j)] * sol.x[j]).sum();
        if hp <= 0.0 {
            return Err(NumericError::NonMonotone.into());
        }
    }

    let info = problem.neg_hessian(&sol.x);
    let vcov = invert_information(&info)?;
    Ok(FittedParts {
        basis,
        theta: sol.x[..m1].to_vec(),
        beta: sol.x[m1..].to_vec(),
        vcov,
        loglik: sol.value,
    })
}

/// Likelihood of the transformation model under a standard normal reference.
struct MltProblem {
    b: DMatrix<f64>,
    bp: DMatrix<f64>,
    group: Vec<usize>,
    k: usize,
}

impl MltProblem {
    fn m1(&self) -> usize {
        self.b.ncols()
    }

    /// h and h' at observation i for parameters x = [θ | β].
    fn h_parts(&self, x: &[f64], i: usize) -> (f64, f64) {
        let m1 = self.m1();
        let mut h = 0.0;
        let mut hp = 0.0;
        for (j, xj) in x.iter().enumerate().take(m1) {
            h += self.b[(i, j)] * xj;
            hp += self.bp[(i, j)] * xj;
        }
        let g = self.group[i];
        if g > 0 {
            h += x[m1 + g - 1];
        }
        (h, hp)
    }
}

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

impl Smooth for MltProblem {
    fn dim(&self) -> usize {
        self.m1() + self.k
    }

    fn value(&self, x: &[f64]) -> f64 {
        let n = self.b.nrows();
        let mut ll = 0.0;
        for i in 0..n {
            let (h, hp) = self.h_parts(x, i);
            if hp <= 0.0 {
                return f64::NEG_INFINITY;
            }
            ll += -0.5 * h * h - LN_SQRT_2PI + hp.ln();
        }
        ll
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        let n = self.b.nrows();
        let m1 = self.m1();
        for o in out.iter_mut() {
            *o = 0.0;
        }
        for i in 0..n {
            let (h, hp) = self.h_parts(x, i);
            for (j, o) in out.iter_mut().enumerate().take(m1) {
                *o += -h * self.b[(i, j)] + self.bp[(i, j)] / hp;
            }
            let g = self.group[i];
            if g > 0 {
                out[m1 + g - 1] += -h;
            }
        }
    }

    fn neg_hessian(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.b.nrows();
        let m1 = self.m1();
        let p = self.dim();
        let mut info = DMatrix::zeros(p, p);
        for i in 0..n {
            let (_, hp) = self.h_parts(x, i);
            let w = 1.0 / (hp * hp);
            for j in 0..m1 {
                for l in 0..=j {
                    let v = self.b[(i, j)] * self.b[(i, l)] + w * self.bp[(i, j)] * self.bp[(i, l)];
                    info[(j, l)] += v;
                }
            }
            let g = self.group[i];
            if g > 0 {
                let col = m1 + g - 1;
                for j in 0..m1 {
                    info[(col, j)] += self.b[(i, j)];
                }
                info[(col, col)] += 1.0;
            }
        }
        // mirror the lower triangle
        for j in 0..p {
            for l in 0..j {
                info[(l, j)] = info[(j, l)];
            }
        }
        info
    }
}

/// Inverts the observed information, clipping tiny eigenvalues first if a
/// direct factorization fails.
fn invert_information(info: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if let Some(chol) = info.clone().cholesky() {
        return Ok(chol.inverse());
    }
    let eig = info.clone().symmetric_eigen();
    let max_eig = eig.eigenvalues.max();
    if max_eig.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(NumericError::Singular(
            "observed information has no positive eigenvalues".into(),
        )
        .into());
    }
    let floor = 1e-10 * max_eig;
    let inv_vals = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&v| 1.0 / v.max(floor)),
    );
    let vecs = eig.eigenvectors;
    Ok(&vecs * DMatrix::from_diagonal(&inv_vals) * vecs.transpose())
}

/// Type-7 sample quantile (linear interpolation of order statistics).
fn quantile_type7(y: &[f64], p: f64) -> f64 {
    let mut sorted = y.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let n = sorted.len();
    let h = (n as f64 - 1.0) * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(n - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}
