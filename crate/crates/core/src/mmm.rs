//! Joint covariance of coefficient estimates across multiple marginal models
//! fit to the same subjects, and the joint location–scale many-to-one test
//! built on it.
//!
//! Each model contributes per-observation influence vectors
//! φ_i = (XᵀX)⁻¹ xᵢ rᵢ; stacking them across models and summing the outer
//! products gives a covariance whose cross-model blocks capture the
//! dependence induced by the shared subjects. The joint test uses that
//! correlation structure with each coefficient rescaled to its own model's
//! standard error, so the marginal statistics coincide with the single-model
//! ones and only the family size and correlation change the calibration.

use crate::contrasts::dunnett_contrasts;
use crate::data::{levene_transform, Dataset};
use crate::error::{DataError, Result};
use crate::linmod::{fit_ols, FittedLinearModel};
use crate::maxt::{maxt_test, MaxTResult};
use crate::mvdist::QmcConfig;
use nalgebra::DMatrix;

/// Several least-squares fits on the same subjects, with the joint
/// covariance of all their coefficients.
#[derive(Debug, Clone)]
pub struct StackedFit {
    models: Vec<FittedLinearModel>,
    joint_coef: Vec<f64>,
    joint_vcov: DMatrix<f64>,
}

impl StackedFit {
    /// The stacked models, in the order given.
    pub fn models(&self) -> &[FittedLinearModel] {
        &self.models
    }

    /// Concatenated coefficient vector.
    pub fn joint_coef(&self) -> &[f64] {
        &self.joint_coef
    }

    /// Joint covariance Σᵢ φᵢφᵢᵀ of all coefficients; its diagonal blocks
    /// are each model's HC0 sandwich covariance.
    pub fn joint_vcov(&self) -> &DMatrix<f64> {
        &self.joint_vcov
    }

    /// Joint covariance recalibrated for testing: the correlation structure
    /// of [`joint_vcov`](Self::joint_vcov) with each coefficient scaled to
    /// its model-based (classical) standard error. Marginal t statistics
    /// under this covariance equal the single-model classical ones.
    pub fn calibrated_joint_vcov(&self) -> DMatrix<f64> {
        let p = self.joint_coef.len();
        let mut model_sd = Vec::with_capacity(p);
        for m in &self.models {
            let v = m.vcov_classical();
            for j in 0..v.nrows() {
                model_sd.push(v[(j, j)].sqrt());
            }
        }
        let stacked_sd: Vec<f64> = (0..p)
            .map(|j| self.joint_vcov[(j, j)].sqrt().max(f64::MIN_POSITIVE))
            .collect();
        DMatrix::from_fn(p, p, |i, j| {
            self.joint_vcov[(i, j)] / (stacked_sd[i] * stacked_sd[j]) * model_sd[i] * model_sd[j]
        })
    }
}

/// Stacks models sharing subjects and grouping into a joint fit whose
/// covariance includes the cross-model blocks.
pub fn stack_models(models: Vec<FittedLinearModel>) -> Result<StackedFit> {
    if models.is_empty() {
        return Err(DataError::StackMismatch("no models to stack".into()).into());
    }
    let n = models[0].design().nrows();
    for (m, model) in models.iter().enumerate() {
        if model.design().nrows() != n {
            return Err(DataError::StackMismatch(format!(
                "model {m} has {} observations, model 0 has {n}",
                model.design().nrows()
            ))
            .into());
        }
        if model.group_indices() != models[0].group_indices() {
            return Err(DataError::StackMismatch(format!(
                "model {m} has a different group assignment than model 0"
            ))
            .into());
        }
    }

    // per-model influence rows: row i of X(XᵀX)⁻¹ scaled by residual i
    let influences: Vec<DMatrix<f64>> = models
        .iter()
        .map(|m| {
            let mut infl = m.design() * m.xtx_inv();
            for i in 0..n {
                let r = m.residuals()[i];
                for j in 0..infl.ncols() {
                    infl[(i, j)] *= r;
                }
            }
            infl
        })
        .collect();

    let p_total: usize = influences.iter().map(|f| f.ncols()).sum();
    let mut joint_vcov = DMatrix::zeros(p_total, p_total);
    let mut row_off = 0;
    for a in &influences {
        let mut col_off = 0;
        for b in &influences {
            let block = a.transpose() * b;
            joint_vcov
                .view_mut((row_off, col_off), (a.ncols(), b.ncols()))
                .copy_from(&block);
            col_off += b.ncols();
        }
        row_off += a.ncols();
    }

    let mut joint_coef = Vec::with_capacity(p_total);
    for m in &models {
        joint_coef.extend(m.coefficients().iter().copied());
    }
    Ok(StackedFit {
        models,
        joint_coef,
        joint_vcov,
    })
}

/// The joint location–scale many-to-one test: a 2k-comparison family of
/// Dunnett contrasts on the raw response (location) and on the absolute
/// deviations from group medians (scale), calibrated together through the
/// stacked covariance with an asymptotic normal reference.
///
/// Result labels carry `location:`/`scale:` prefixes, location block first.
pub fn mmm_dunnett(ds: &Dataset, alpha: f64, cfg: &QmcConfig) -> Result<MaxTResult> {
    let location = fit_ols(ds);
    let scale = fit_ols(&levene_transform(ds));
    let stacked = stack_models(vec![location, scale])?;
    let family = joint_family(ds);
    maxt_test(
        stacked.joint_coef(),
        &stacked.calibrated_joint_vcov(),
        &family,
        0,
        alpha,
        cfg,
    )
}

/// The 2k-row block-diagonal contrast family used by [`mmm_dunnett`]:
/// k location comparisons followed by k scale comparisons.
pub fn joint_family(ds: &Dataset) -> crate::contrasts::ContrastFamily {
    let base = dunnett_contrasts(ds.treatments(), ds.control());
    let location = base.relabel(|l| format!("location: {l}"));
    let scale = base.relabel(|l| format!("scale: {l}"));
    location.block_diag(&scale)
}
