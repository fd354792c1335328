//! One-way-layout least squares: treatment-coded fits, classical and
//! heteroscedasticity-consistent covariance estimators, and the global
//! variance-homogeneity F-test.
//!
//! Note the two distinct centerings in this crate: the endpoint
//! transformation used by the scale *tests* is median-based
//! ([`crate::data::levene_transform`]), while [`levene_global_test`] below is
//! the classical mean-based one-way F-test on absolute deviations. Both are
//! intentional; they are different procedures.

use crate::data::Dataset;
use crate::error::{NumericError, Result};
use crate::num;
use nalgebra::{DMatrix, DVector};

/// Variants of the heteroscedasticity-consistent covariance estimator.
///
/// All share the form (XᵀX)⁻¹ Xᵀ diag(ω_i) X (XᵀX)⁻¹ and differ in the
/// residual weights ω_i (h_ii is the leverage):
/// HC0: r_i²; HC1: r_i²·N/(N−p); HC2: r_i²/(1−h_ii); HC3: r_i²/(1−h_ii)².
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcType {
    Hc0,
    Hc1,
    Hc2,
    Hc3,
}

/// A fitted one-way layout with treatment coding.
///
/// Coefficient 0 is the control mean; coefficient j ≥ 1 is the difference
/// mean(treatment j) − mean(control). The design matrix is the N×(k+1)
/// intercept-plus-indicators layout implied by that coding.
#[derive(Debug, Clone)]
pub struct FittedLinearModel {
    coefficients: DVector<f64>,
    residuals: DVector<f64>,
    design: DMatrix<f64>,
    xtx_inv: DMatrix<f64>,
    sigma2: f64,
    df_resid: usize,
    vcov_classical: DMatrix<f64>,
    group_sizes: Vec<usize>,
    group_idx: Vec<usize>,
}

impl FittedLinearModel {
    /// Coefficients (control mean, then treatment effects).
    pub fn coefficients(&self) -> &DVector<f64> {
        &self.coefficients
    }

    /// Residuals in observation order.
    pub fn residuals(&self) -> &DVector<f64> {
        &self.residuals
    }

    /// The N×(k+1) design matrix.
    pub fn design(&self) -> &DMatrix<f64> {
        &self.design
    }

    /// (XᵀX)⁻¹, the "bread" shared by all covariance estimators.
    pub fn xtx_inv(&self) -> &DMatrix<f64> {
        &self.xtx_inv
    }

    /// Pooled residual variance.
    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// Residual degrees of freedom: N minus the number of groups.
    pub fn df_resid(&self) -> usize {
        self.df_resid
    }

    /// Classical covariance sigma2 · (XᵀX)⁻¹.
    pub fn vcov_classical(&self) -> &DMatrix<f64> {
        &self.vcov_classical
    }

    /// Observation counts per level, control first.
    pub fn group_sizes(&self) -> &[usize] {
        &self.group_sizes
    }

    /// Per-observation level index (shared with the source dataset).
    pub fn group_indices(&self) -> &[usize] {
        &self.group_idx
    }

    /// Leverage h_ii = x_iᵀ(XᵀX)⁻¹x_i for every observation.
    pub fn leverages(&self) -> Vec<f64> {
        let n = self.design.nrows();
        (0..n)
            .map(|i| {
                let xi = self.design.row(i).transpose();
                (xi.transpose() * &self.xtx_inv * &xi)[(0, 0)]
            })
            .collect()
    }
}

/// Fits the one-way layout by least squares under treatment coding.
pub fn fit_ols(ds: &Dataset) -> FittedLinearModel {
    let n = ds.n();
    let p = ds.levels().len();
    let mut design = DMatrix::zeros(n, p);
    for (i, &g) in ds.group_indices().iter().enumerate() {
        design[(i, 0)] = 1.0;
        if g > 0 {
            design[(i, g)] = 1.0;
        }
    }
    let y = DVector::from_column_slice(ds.responses());
    let xtx = design.transpose() * &design;
    let xtx_inv = xtx
        .clone()
        .cholesky()
        .expect("one-way design with nonempty groups has full rank")
        .inverse();
    let coefficients = &xtx_inv * design.transpose() * &y;
    let residuals = &y - &design * &coefficients;
    let df_resid = n - p;
    let sigma2 = residuals.dot(&residuals) / df_resid as f64;
    let vcov_classical = &xtx_inv * sigma2;
    FittedLinearModel {
        coefficients,
        residuals,
        design,
        xtx_inv,
        sigma2,
        df_resid,
        vcov_classical,
        group_sizes: ds.group_sizes(),
        group_idx: ds.group_indices().to_vec(),
    }
}

/// Heteroscedasticity-consistent covariance of the coefficients, HC3 flavor
/// (the small-sample-leaning default of the common sandwich implementations).
pub fn vcov_sandwich(model: &FittedLinearModel) -> Result<DMatrix<f64>> {
    vcov_sandwich_hc(model, HcType::Hc3)
}

/// Sandwich covariance with an explicit HC variant.
pub fn vcov_sandwich_hc(model: &FittedLinearModel, hc: HcType) -> Result<DMatrix<f64>> {
    let x = &model.design;
    let n = x.nrows();
    let p = x.ncols();
    let leverages = model.leverages();
    let mut meat = DMatrix::zeros(p, p);
    for (i, r) in model.residuals.iter().enumerate() {
        let r2 = r * r;
        let omega = match hc {
            HcType::Hc0 => r2,
            HcType::Hc1 => r2 * n as f64 / (n - p) as f64,
            HcType::Hc2 | HcType::Hc3 => {
                let denom = 1.0 - leverages[i];
                if denom <= f64::EPSILON {
                    return Err(NumericError::UnitLeverage { index: i }.into());
                }
                match hc {
                    HcType::Hc2 => r2 / denom,
                    _ => r2 / (denom * denom),
                }
            }
        };
        let xi = x.row(i).transpose();
        meat += &xi * xi.transpose() * omega;
    }
    Ok(&model.xtx_inv * meat * &model.xtx_inv)
}

/// Result of the global variance-homogeneity test.
#[derive(Debug, Clone, Copy)]
pub struct LeveneTest {
    pub f_stat: f64,
    pub df: (usize, usize),
    pub p_value: f64,
}

/// One-way ANOVA F-test on |y_ij − mean(group i)| with (g−1, N−g) degrees of
/// freedom: the classical global check that group spreads are equal.
///
/// This is the mean-centered global test; it deliberately differs from the
/// median-centered endpoint transformation used by the scale tests.
pub fn levene_global_test(ds: &Dataset) -> LeveneTest {
    let g = ds.levels().len();
    let n = ds.n();
    // absolute deviations from group means
    let means: Vec<f64> = (0..g)
        .map(|i| {
            let v = ds.group_values(i);
            v.iter().sum::<f64>() / v.len() as f64
        })
        .collect();
    let z: Vec<f64> = ds
        .group_indices()
        .iter()
        .zip(ds.responses())
        .map(|(&gi, &y)| (y - means[gi]).abs())
        .collect();
    let grand = z.iter().sum::<f64>() / n as f64;
    let mut ss_between = 0.0;
    let mut ss_within = 0.0;
    for i in 0..g {
        let zi: Vec<f64> = ds
            .group_indices()
            .iter()
            .zip(&z)
            .filter(|(&gi, _)| gi == i)
            .map(|(_, &v)| v)
            .collect();
        let mi = zi.iter().sum::<f64>() / zi.len() as f64;
        ss_between += zi.len() as f64 * (mi - grand) * (mi - grand);
        ss_within += zi.iter().map(|&v| (v - mi) * (v - mi)).sum::<f64>();
    }
    let df = (g - 1, n - g);
    if ss_within <= f64::EPSILON * ss_between.max(1.0) {
        // all transformed values identical within groups
        let p = if ss_between <= f64::EPSILON { 1.0 } else { 0.0 };
        return LeveneTest {
            f_stat: if p == 1.0 { 0.0 } else { f64::INFINITY },
            df,
            p_value: p,
        };
    }
    let f_stat = (ss_between / df.0 as f64) / (ss_within / df.1 as f64);
    LeveneTest {
        f_stat,
        df,
        p_value: num::f_upper_p(f_stat, df.0, df.1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{builtin_dataset, Dataset};
    use approx::assert_abs_diff_eq;

    fn toy(groups: &[(&str, &[f64])], control: &str) -> Dataset {
        let mut g = Vec::new();
        let mut y = Vec::new();
        for (label, values) in groups {
            for &v in *values {
                g.push(label.to_string());
                y.push(v);
            }
        }
        Dataset::new("toy", &g, &y, control).unwrap()
    }

    #[test]
    fn fit_reproduces_group_means() {
        let ds = toy(&[("c", &[0.0, 0.0]), ("t", &[1.0, 1.0])], "c");
        let m = fit_ols(&ds);
        assert_abs_diff_eq!(m.coefficients()[0], 0.0);
        assert_abs_diff_eq!(m.coefficients()[1], 1.0);
        assert_abs_diff_eq!(m.sigma2(), 0.0);
    }

    #[test]
    fn chol_intercept_and_df() {
        let ds = builtin_dataset("CHOL").unwrap();
        let m = fit_ols(&ds);
        assert_abs_diff_eq!(m.coefficients()[0], 95.1, epsilon = 1e-9);
        assert_eq!(m.df_resid(), 54);
    }

    #[test]
    fn f4_acr_effect_is_negative() {
        let ds = builtin_dataset("F4").unwrap();
        let m = fit_ols(&ds);
        let acr = ds.treatments().iter().position(|l| l == "acr").unwrap() + 1;
        assert!(m.coefficients()[acr] < 0.0);
    }

    #[test]
    fn residuals_sum_to_zero_within_groups() {
        let ds = toy(
            &[
                ("c", &[1.0, 2.0, 6.0]),
                ("t", &[4.0, 5.0]),
                ("u", &[7.0, 9.0]),
            ],
            "c",
        );
        let m = fit_ols(&ds);
        for level in 0..3 {
            let s: f64 = ds
                .group_indices()
                .iter()
                .enumerate()
                .filter(|(_, &g)| g == level)
                .map(|(i, _)| m.residuals()[i])
                .sum();
            assert_abs_diff_eq!(s, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn hc3_matches_hand_computed_toy() {
        // two groups of two: c = (0, 2), t = (0, 4); all leverages are 1/2,
        // so HC3 weights are r²/(1-1/2)² = 4r². With residuals (−1,1,−2,2):
        // meat = Σ 4r²·x xᵀ; bread = (XᵀX)⁻¹.
        let ds = toy(&[("c", &[0.0, 2.0]), ("t", &[0.0, 4.0])], "c");
        let m = fit_ols(&ds);
        let hc3 = vcov_sandwich(&m).unwrap();
        // Hand evaluation: H = X(XᵀX)⁻¹Xᵀ block means; with residual r,
        // group-of-two leverages are 0.5 each, weights 4r²: control r²=1→4,
        // treatment r²=4→16.
        // meat = Σ ω_i x_i x_iᵀ with x = (1,0) for c and (1,1) for t:
        // meat = 8·[[1,0],[0,0]] + 32·[[1,1],[1,1]]
        // bread = [[1/2, -1/2], [-1/2, 1]]
        let bread = DMatrix::from_row_slice(2, 2, &[0.5, -0.5, -0.5, 1.0]);
        let meat = DMatrix::from_row_slice(2, 2, &[8.0, 0.0, 0.0, 0.0])
            + DMatrix::from_row_slice(2, 2, &[32.0, 32.0, 32.0, 32.0]);
        let expect = &bread * meat * &bread;
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(hc3[(i, j)], expect[(i, j)], epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn hc0_matches_direct_summation() {
        let ds = toy(
            &[
                ("c", &[1.0, 2.0, 4.0]),
                ("t", &[3.0, 5.0]),
                ("u", &[2.0, 2.5, 9.0]),
            ],
            "c",
        );
        let m = fit_ols(&ds);
        let hc0 = vcov_sandwich_hc(&m, HcType::Hc0).unwrap();
        // independent direct summation of (XᵀX)⁻¹ Σ r_i² x_i x_iᵀ (XᵀX)⁻¹
        let x = m.design();
        let p = x.ncols();
        let mut meat = DMatrix::zeros(p, p);
        for i in 0..x.nrows() {
            let xi = x.row(i).transpose();
            meat += &xi * xi.transpose() * m.residuals()[i] * m.residuals()[i];
        }
        let expect = m.xtx_inv() * meat * m.xtx_inv();
        for i in 0..p {
            for j in 0..p {
                assert_abs_diff_eq!(hc0[(i, j)], expect[(i, j)], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn sandwich_near_classical_when_homoscedastic() {
        // equal within-group residual magnitudes: sandwich differs from the
        // classical covariance only by finite-sample correction factors
        let ds = toy(
            &[("c", &[0.0, 2.0, 0.0, 2.0]), ("t", &[5.0, 7.0, 5.0, 7.0])],
            "c",
        );
        let m = fit_ols(&ds);
        let s = vcov_sandwich(&m).unwrap();
        let c = m.vcov_classical();
        for i in 0..2 {
            let ratio = s[(i, i)] / c[(i, i)];
            assert!(ratio > 0.5 && ratio < 3.0, "ratio {ratio}");
        }
    }

    #[test]
    fn chol_sandwich_dose1_variance_exceeds_classical() {
        let ds = builtin_dataset("CHOL").unwrap();
        let m = fit_ols(&ds);
        let s = vcov_sandwich(&m).unwrap();
        let idx = ds.treatments().iter().position(|l| l == "62.5").unwrap() + 1;
        assert!(s[(idx, idx)] > m.vcov_classical()[(idx, idx)]);
    }

    #[test]
    fn levene_global_chol() {
        let ds = builtin_dataset("CHOL").unwrap();
        let t = levene_global_test(&ds);
        assert_eq!(t.df, (5, 54));
        assert!((t.p_value - 0.07).abs() <= 0.01, "p = {}", t.p_value);
    }

    #[test]
    fn levene_global_mirror_spreads() {
        // mirror-image samples have identical spread; F collapses toward 0
        let ds = toy(
            &[
                ("c", &[-2.0, -1.0, 1.0, 2.0]),
                ("t", &[8.0, 9.0, 11.0, 12.0]),
            ],
            "c",
        );
        let t = levene_global_test(&ds);
        assert!(t.f_stat < 1e-20, "F = {}", t.f_stat);
        assert!(t.p_value > 0.99);
    }

    #[test]
    fn levene_global_hand_decomposition() {
        // 6 points, 2 groups; |dev from mean|: c: (1,1,2) means... computed by hand:
        // c = (1, 3, 8): mean 4, |z| = (3, 1, 4), mean 8/3
        // t = (0, 2, 10): mean 4, |z| = (4, 2, 6), mean 4
        // grand = 10/3; between = 3·(8/3−10/3)² + 3·(4−10/3)² = 3·4/9+3·4/9 = 8/3
        // within = (3−8/3)²+(1−8/3)²+(4−8/3)² + (4−4)²+(2−4)²+(6−4)²
        //        = (1/9 + 25/9 + 16/9) + 8 = 42/9 + 8 = 114/9
        // F = (8/3 / 1) / (114/9 / 4) = (8/3)·(36/114) = 96/114·... = 0.8421
        let ds = toy(&[("c", &[1.0, 3.0, 8.0]), ("t", &[0.0, 2.0, 10.0])], "c");
        let t = levene_global_test(&ds);
        assert_abs_diff_eq!(t.f_stat, (8.0 / 3.0) / (114.0 / 36.0), epsilon = 1e-12);
    }

    #[test]
    fn levene_invariance_shift_and_scale() {
        let ds = toy(
            &[("c", &[1.0, 5.0, 2.0, 7.0]), ("t", &[2.0, 4.0, 9.0, 3.0])],
            "c",
        );
        let base = levene_global_test(&ds);
        let shifted: Vec<f64> = ds.responses().iter().map(|&y| y + 100.0).collect();
        let scaled: Vec<f64> = ds.responses().iter().map(|&y| y * 7.5).collect();
        let groups: Vec<String> = ds
            .group_indices()
            .iter()
            .map(|&g| ds.levels()[g].clone())
            .collect();
        let ds_shift = Dataset::new("s", &groups, &shifted, "c").unwrap();
        let ds_scale = Dataset::new("m", &groups, &scaled, "c").unwrap();
        assert_abs_diff_eq!(
            levene_global_test(&ds_shift).p_value,
            base.p_value,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            levene_global_test(&ds_scale).p_value,
            base.p_value,
            epsilon = 1e-12
        );
    }
}
