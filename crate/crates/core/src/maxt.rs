//! The single-step max-T engine: from coefficients, their covariance, and a
//! contrast family to joint statistics, adjusted p-values, and simultaneous
//! confidence intervals — plus the three single-model many-to-one variants
//! (classical, sandwich, and scale).

use crate::contrasts::{dunnett_contrasts, ContrastFamily};
use crate::data::Dataset;
use crate::error::{NumericError, Result};
use crate::linmod::{fit_ols, vcov_sandwich};
use crate::mvdist::{
    maxmod_adjusted_p, maxmod_critical, mv_rect_prob, CorrelationMatrix, QmcConfig,
};
use crate::num;
use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ContinuousCDF, StudentsT};

/// Comparisons whose variance is below this fraction of the largest variance
/// in the family are treated as degenerate.
const DEGENERATE_REL_TOL: f64 = 1e-12;

/// Result of a single-step max-T procedure over a family of comparisons.
///
/// Degenerate comparisons (zero standard error) are flagged, excluded from
/// the joint calibration, and reported with adjusted p-value 1; `corr` spans
/// the non-degenerate comparisons only, in family order.
#[derive(Debug, Clone)]
pub struct MaxTResult {
    /// One label per comparison, e.g. `"62.5 - 0"` or `"scale: d - wt"`.
    pub labels: Vec<String>,
    /// Contrast estimates Cβ̂.
    pub estimates: Vec<f64>,
    /// Standard errors √diag(CVCᵀ).
    pub std_errors: Vec<f64>,
    /// t statistics (estimate / standard error).
    pub statistics: Vec<f64>,
    /// Correlation of the non-degenerate comparisons.
    pub corr: CorrelationMatrix,
    /// Reference degrees of freedom; 0 means asymptotic normal.
    pub df: usize,
    /// Single-step adjusted p-values.
    pub adj_p: Vec<f64>,
    /// Lower simultaneous (1 − alpha) confidence bounds.
    pub sci_lower: Vec<f64>,
    /// Upper simultaneous (1 − alpha) confidence bounds.
    pub sci_upper: Vec<f64>,
    /// Equicoordinate critical value used for the intervals.
    pub critical_value: f64,
    /// Family-wise error level.
    pub alpha: f64,
    /// Flags the comparisons excluded from the joint calibration.
    pub degenerate: Vec<bool>,
}

impl MaxTResult {
    /// Number of comparisons in the family.
    pub fn n_comparisons(&self) -> usize {
        self.labels.len()
    }

    /// True if any comparison rejects at the family level.
    pub fn any_rejection(&self) -> bool {
        self.adj_p.iter().any(|&p| p < self.alpha)
    }
}

/// Applies a contrast family to fitted coefficients and computes the
/// single-step max-T summary: statistics, adjusted p-values, and
/// simultaneous confidence intervals calibrated by the equicoordinate
/// critical value of the joint normal (df = 0) or t (df > 0) reference.
pub fn maxt_test(
    coef: &[f64],
    vcov: &DMatrix<f64>,
    family: &ContrastFamily,
    df: usize,
    alpha: f64,
    cfg: &QmcConfig,
) -> Result<MaxTResult> {
    let p = coef.len();
    if vcov.nrows() != p || vcov.ncols() != p {
        return Err(NumericError::DimensionMismatch(format!(
            "covariance is {}x{} for {} coefficients",
            vcov.nrows(),
            vcov.ncols(),
            p
        ))
        .into());
    }
    if family.matrix().ncols() != p {
        return Err(NumericError::DimensionMismatch(format!(
            "contrast matrix has {} columns for {} coefficients",
            family.matrix().ncols(),
            p
        ))
        .into());
    }
    let c = family.matrix();
    let beta = DVector::from_column_slice(coef);
    let estimates: Vec<f64> = (c * &beta).iter().copied().collect();
    let cvc = c * vcov * c.transpose();
    let q = estimates.len();

    let max_var = (0..q).map(|j| cvc[(j, j)]).fold(0.0f64, f64::max);
    let degenerate: Vec<bool> = (0..q)
        .map(|j| cvc[(j, j)] <= DEGENERATE_REL_TOL * max_var.max(f64::MIN_POSITIVE))
        .collect();
    let active: Vec<usize> = (0..q).filter(|&j| !degenerate[j]).collect();

    let mut std_errors = vec![0.0f64; q];
    let mut statistics = vec![f64::NAN; q];
    for j in 0..q {
        let se = cvc[(j, j)].max(0.0).sqrt();
        std_errors[j] = se;
        if !degenerate[j] {
            statistics[j] = estimates[j] / se;
        }
    }

    let mut adj_p = vec![1.0f64; q];
    let (corr, critical_value) = if active.is_empty() {
        // nothing to calibrate; fall back to the univariate quantile
        let corr = CorrelationMatrix::new(DMatrix::identity(0, 0))?;
        (corr, two_sided_quantile(1.0 - alpha / 2.0, df))
    } else {
        let sub = DMatrix::from_fn(active.len(), active.len(), |i, j| {
            cvc[(active[i], active[j])]
        });
        let (corr, _) = CorrelationMatrix::from_covariance(&sub)?;
        let sub_stats: Vec<f64> = active.iter().map(|&j| statistics[j]).collect();
        let sub_p = maxmod_adjusted_p(&sub_stats, &corr, df, cfg)?;
        for (slot, p) in active.iter().zip(sub_p) {
            adj_p[*slot] = p;
        }
        let crit = maxmod_critical(alpha, &corr, df, cfg)?;
        (corr, crit)
    };

    let sci_lower: Vec<f64> = (0..q)
        .map(|j| estimates[j] - critical_value * std_errors[j])
        .collect();
    let sci_upper: Vec<f64> = (0..q)
        .map(|j| estimates[j] + critical_value * std_errors[j])
        .collect();

    Ok(MaxTResult {
        labels: family.labels().to_vec(),
        estimates,
        std_errors,
        statistics,
        corr,
        df,
        adj_p,
        sci_lower,
        sci_upper,
        critical_value,
        alpha,
        degenerate,
    })
}

/// Decides "any comparison rejects at level alpha" without computing the
/// full result. The decision equals `maxt_test(...).any_rejection()` because
/// the adjusted p-value is a decreasing function of |t|, so the family
/// minimum sits at the largest statistic; Bonferroni and unadjusted bounds
/// settle most cases without integration.
pub fn maxt_any_rejection(
    coef: &[f64],
    vcov: &DMatrix<f64>,
    family: &ContrastFamily,
    df: usize,
    alpha: f64,
    cfg: &QmcConfig,
) -> Result<bool> {
    let rows: Vec<usize> = (0..family.n_comparisons()).collect();
    maxt_any_rejection_among(coef, vcov, family, df, alpha, cfg, &rows)
}

/// Like [`maxt_any_rejection`], but the decision considers only the listed
/// comparison rows while the adjustment stays calibrated to the full family.
pub fn maxt_any_rejection_among(
    coef: &[f64],
    vcov: &DMatrix<f64>,
    family: &ContrastFamily,
    df: usize,
    alpha: f64,
    cfg: &QmcConfig,
    rows: &[usize],
) -> Result<bool> {
    let c = family.matrix();
    let beta = DVector::from_column_slice(coef);
    let estimates = c * &beta;
    let cvc = c * vcov * c.transpose();
    let q = estimates.len();
    let max_var = (0..q).map(|j| cvc[(j, j)]).fold(0.0f64, f64::max);
    let active: Vec<usize> = (0..q)
        .filter(|&j| cvc[(j, j)] > DEGENERATE_REL_TOL * max_var.max(f64::MIN_POSITIVE))
        .collect();
    if active.is_empty() {
        return Ok(false);
    }
    let t_max = rows
        .iter()
        .filter(|j| active.contains(j))
        .map(|&j| (estimates[j] / cvc[(j, j)].sqrt()).abs())
        .fold(0.0f64, f64::max);
    if t_max == 0.0 {
        return Ok(false);
    }
    // certain accept: even unadjusted the maximum is not significant
    let p_unadj = num::two_sided_p(t_max, df);
    if p_unadj >= alpha {
        return Ok(false);
    }
    // certain reject: even the Bonferroni bound is significant
    if (active.len() as f64) * p_unadj < alpha {
        return Ok(true);
    }
    let sub = DMatrix::from_fn(active.len(), active.len(), |i, j| {
        cvc[(active[i], active[j])]
    });
    let (corr, _) = CorrelationMatrix::from_covariance(&sub)?;
    let bound = vec![t_max; active.len()];
    let neg: Vec<f64> = bound.iter().map(|b| -b).collect();
    let (inside, err) = mv_rect_prob(&neg, &bound, &corr, df, cfg)?;
    Ok(((1.0 - inside).max(err)) < alpha)
}

/// How the scale-shift test picks its reference distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DfMode {
    /// Standard normal reference (df = 0): the transformed endpoint is
    /// non-normal, so only the asymptotic reference is defensible.
    #[default]
    Asymptotic,
    /// Multivariate t with the residual degrees of freedom.
    Classical,
}

/// Many-to-one comparisons with the pooled-variance covariance and the
/// residual degrees of freedom (multivariate t reference).
pub fn dunnett_classical(ds: &Dataset, alpha: f64, cfg: &QmcConfig) -> Result<MaxTResult> {
    let fit = fit_ols(ds);
    let family = dunnett_contrasts(ds.treatments(), ds.control());
    maxt_test(
        fit.coefficients().as_slice(),
        fit.vcov_classical(),
        &family,
        fit.df_resid(),
        alpha,
        cfg,
    )
}

/// Many-to-one comparisons with a heteroscedasticity-consistent covariance
/// and the residual degrees of freedom.
pub fn dunnett_sandwich(ds: &Dataset, alpha: f64, cfg: &QmcConfig) -> Result<MaxTResult> {
    let fit = fit_ols(ds);
    let vcov = vcov_sandwich(&fit)?;
    let family = dunnett_contrasts(ds.treatments(), ds.control());
    maxt_test(
        fit.coefficients().as_slice(),
        &vcov,
        &family,
        fit.df_resid(),
        alpha,
        cfg,
    )
}

/// Many-to-one comparisons of spread: the classical procedure applied to
/// absolute deviations from group medians. The reference distribution is
/// standard normal by default (see [`DfMode`]); `DfMode::Classical` restores
/// the residual-df t reference.
pub fn dunnett_scale(
    ds: &Dataset,
    alpha: f64,
    cfg: &QmcConfig,
    df_mode: DfMode,
) -> Result<MaxTResult> {
    let transformed = crate::data::levene_transform(ds);
    let fit = fit_ols(&transformed);
    let family = dunnett_contrasts(transformed.treatments(), transformed.control());
    let df = match df_mode {
        DfMode::Asymptotic => 0,
        DfMode::Classical => fit.df_resid(),
    };
    maxt_test(
        fit.coefficients().as_slice(),
        fit.vcov_classical(),
        &family,
        df,
        alpha,
        cfg,
    )
}

fn two_sided_quantile(p: f64, df: usize) -> f64 {
    if df == 0 {
        num::norm_quantile(p)
    } else {
        StudentsT::new(0.0, 1.0, df as f64).unwrap().inverse_cdf(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::builtin_dataset;
    use approx::assert_abs_diff_eq;

    fn single_contrast_family() -> ContrastFamily {
        ContrastFamily::new(
            DMatrix::from_row_slice(1, 2, &[0.0, 1.0]),
            vec!["t - c".into()],
        )
    }

    #[test]
    fn single_contrast_t196_gives_005() {
        let vcov = DMatrix::identity(2, 2);
        let r = maxt_test(
            &[0.0, 1.959964],
            &vcov,
            &single_contrast_family(),
            0,
            0.05,
            &QmcConfig::default(),
        )
        .unwrap();
        assert_abs_diff_eq!(r.statistics[0], 1.959964, epsilon = 1e-12);
        assert_abs_diff_eq!(r.adj_p[0], 0.05, epsilon = 1e-3);
        assert!(!r.degenerate[0]);
    }

    #[test]
    fn duplicated_rows_get_identical_adjustment() {
        let c = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 1.0]);
        let family = ContrastFamily::new(c, vec!["a - c".into(), "a - c".into()]);
        let vcov = DMatrix::identity(2, 2);
        let r = maxt_test(&[0.0, 1.7], &vcov, &family, 0, 0.05, &QmcConfig::default()).unwrap();
        assert_eq!(r.adj_p[0].to_bits(), r.adj_p[1].to_bits());
        assert_eq!(r.statistics[0].to_bits(), r.statistics[1].to_bits());
    }

    #[test]
    fn power_of_two_scaling_is_exact() {
        let ds = builtin_dataset("CHOL").unwrap();
        let fit = fit_ols(&ds);
        let family = dunnett_contrasts(ds.treatments(), ds.control());
        let cfg = QmcConfig::default();
        let base = maxt_test(
            fit.coefficients().as_slice(),
            fit.vcov_classical(),
            &family,
            fit.df_resid(),
            0.05,
            &cfg,
        )
        .unwrap();
        let lambda = 4.0f64;
        let coef: Vec<f64> = fit.coefficients().iter().map(|b| lambda * b).collect();
        let vcov = fit.vcov_classical() * (lambda * lambda);
        let scaled = maxt_test(&coef, &vcov, &family, fit.df_resid(), 0.05, &cfg).unwrap();
        for j in 0..base.n_comparisons() {
            assert_eq!(base.statistics[j].to_bits(), scaled.statistics[j].to_bits());
            assert_eq!(base.adj_p[j].to_bits(), scaled.adj_p[j].to_bits());
        }
    }

    #[test]
    fn chol_classical_matches_published_values() {
        let ds = builtin_dataset("CHOL").unwrap();
        let r = dunnett_classical(&ds, 0.05, &QmcConfig::default()).unwrap();
        let p = |label: &str| {
            let j = r.labels.iter().position(|l| l == label).unwrap();
            r.adj_p[j]
        };
        assert!(p("62.5 - 0") < 0.001, "62.5: {}", p("62.5 - 0"));
        assert_abs_diff_eq!(p("250 - 0"), 0.08, epsilon = 0.02);
        assert!(p("1000 - 0") < 0.001);
        assert_eq!(r.df, 54);
    }

    #[test]
    fn chol_sandwich_matches_published_values() {
        let ds = builtin_dataset("CHOL").unwrap();
        let r = dunnett_sandwich(&ds, 0.05, &QmcConfig::default()).unwrap();
        let p = |label: &str| {
            let j = r.labels.iter().position(|l| l == label).unwrap();
            r.adj_p[j]
        };
        assert_abs_diff_eq!(p("62.5 - 0"), 0.004, epsilon = 0.003);
        assert_abs_diff_eq!(p("500 - 0"), 0.0065, epsilon = 0.004);
    }

    #[test]
    fn chol_scale_shift_matches_published_value() {
        let ds = builtin_dataset("CHOL").unwrap();
        let r = dunnett_scale(&ds, 0.05, &QmcConfig::default(), DfMode::Asymptotic).unwrap();
        let j = r.labels.iter().position(|l| l == "62.5 - 0").unwrap();
        assert_abs_diff_eq!(r.adj_p[j], 0.10, epsilon = 0.03);
        assert_eq!(r.df, 0);
    }

    #[test]
    fn spread_comparisons_on_lab_data() {
        let ds = builtin_dataset("F4").unwrap();
        let r = dunnett_scale(&ds, 0.05, &QmcConfig::default(), DfMode::Asymptotic).unwrap();
        let p = |label: &str| {
            let j = r.labels.iter().position(|l| l == label).unwrap();
            r.adj_p[j]
        };
        assert!(p("f - wt") < 0.001, "f: {}", p("f - wt"));
        assert_abs_diff_eq!(p("d - wt"), 0.03, epsilon = 0.02);
    }

    #[test]
    fn degenerate_comparison_flagged_not_fatal() {
        // second coefficient has zero variance, so its contrast is degenerate
        let c = DMatrix::from_row_slice(2, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        let family = ContrastFamily::new(c, vec!["a - c".into(), "b - c".into()]);
        let mut vcov = DMatrix::zeros(3, 3);
        vcov[(0, 0)] = 1.0;
        vcov[(1, 1)] = 1.0;
        let r = maxt_test(
            &[0.0, 2.2, 1.0],
            &vcov,
            &family,
            0,
            0.05,
            &QmcConfig::default(),
        )
        .unwrap();
        assert!(!r.degenerate[0] && r.degenerate[1]);
        assert_eq!(r.adj_p[1], 1.0);
        assert_eq!(r.corr.dim(), 1);
        assert_abs_diff_eq!(r.adj_p[0], num::two_sided_p(2.2, 0), epsilon = 1e-3);
    }

    #[test]
    fn self_comparison_is_null() {
        // a treatment that is an exact copy of the control
        let values = [4.1, 5.3, 2.2, 6.0, 3.3];
        let groups: Vec<String> = std::iter::repeat_n("c".to_string(), 5)
            .chain(std::iter::repeat_n("t".to_string(), 5))
            .collect();
        let ds = Dataset::new(
            "copy",
            &groups,
            &values
                .iter()
                .chain(values.iter())
                .copied()
                .collect::<Vec<_>>(),
            "c",
        )
        .unwrap();
        let r = dunnett_classical(&ds, 0.05, &QmcConfig::default()).unwrap();
        assert!(r.adj_p[0] > 0.99);
    }

    #[test]
    fn interval_duality_holds_on_chol() {
        let ds = builtin_dataset("CHOL").unwrap();
        let r = dunnett_classical(&ds, 0.05, &QmcConfig::default()).unwrap();
        for j in 0..r.n_comparisons() {
            if (r.adj_p[j] - r.alpha).abs() < 0.005 {
                continue; // too close to the boundary for the tolerance
            }
            let excludes_zero = r.sci_lower[j] > 0.0 || r.sci_upper[j] < 0.0;
            assert_eq!(
                excludes_zero,
                r.adj_p[j] < r.alpha,
                "duality violated at {} (p = {}, interval = [{}, {}])",
                r.labels[j],
                r.adj_p[j],
                r.sci_lower[j],
                r.sci_upper[j]
            );
        }
    }

    #[test]
    fn interval_covers_estimate() {
        let ds = builtin_dataset("F4").unwrap();
        let r = dunnett_classical(&ds, 0.05, &QmcConfig::default()).unwrap();
        for j in 0..r.n_comparisons() {
            assert!(r.sci_lower[j] <= r.estimates[j] && r.estimates[j] <= r.sci_upper[j]);
        }
    }

    #[test]
    fn sandwich_close_to_classical_when_homoscedastic() {
        // balanced draws with a common spread: the two covariances estimate
        // the same matrix, so the adjusted p-values should nearly agree
        let mut rng = num::substream(24601, 0, 77);
        use rand::Rng;
        let mut groups = Vec::new();
        let mut values = Vec::new();
        for (gi, name) in ["c", "t1", "t2"].iter().enumerate() {
            for _ in 0..40 {
                groups.push(name.to_string());
                let u: f64 = rng.gen();
                let v: f64 = rng.gen();
                let z = (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos();
                values.push(0.3 * gi as f64 + z);
            }
        }
        let ds = Dataset::new("balanced", &groups, &values, "c").unwrap();
        let a = dunnett_classical(&ds, 0.05, &QmcConfig::default()).unwrap();
        let b = dunnett_sandwich(&ds, 0.05, &QmcConfig::default()).unwrap();
        for j in 0..a.n_comparisons() {
            assert_abs_diff_eq!(a.adj_p[j], b.adj_p[j], epsilon = 0.01);
        }
    }

    #[test]
    fn adjusted_at_least_unadjusted() {
        let ds = builtin_dataset("CHOL").unwrap();
        let r = dunnett_classical(&ds, 0.05, &QmcConfig::default()).unwrap();
        for j in 0..r.n_comparisons() {
            let unadj = num::two_sided_p(r.statistics[j], r.df);
            assert!(
                r.adj_p[j] >= unadj - 1e-3,
                "{}: adj {} < unadj {}",
                r.labels[j],
                r.adj_p[j],
                unadj
            );
        }
    }

    #[test]
    fn fast_decision_agrees_with_full_result() {
        let ds = builtin_dataset("CHOL").unwrap();
        let fit = fit_ols(&ds);
        let family = dunnett_contrasts(ds.treatments(), ds.control());
        let cfg = QmcConfig::default();
        let full = maxt_test(
            fit.coefficients().as_slice(),
            fit.vcov_classical(),
            &family,
            fit.df_resid(),
            0.05,
            &cfg,
        )
        .unwrap();
        let fast = maxt_any_rejection(
            fit.coefficients().as_slice(),
            fit.vcov_classical(),
            &family,
            fit.df_resid(),
            0.05,
            &cfg,
        )
        .unwrap();
        assert_eq!(full.any_rejection(), fast);
    }
}
