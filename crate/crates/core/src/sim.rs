//! Monte Carlo harness for familywise error rate and any-pairs power.
//!
//! A scenario draws independent normal samples per group (control first),
//! runs a battery of many-to-one tests on every replicate, and reports the
//! fraction of replicates in which each test rejected at least one
//! comparison. Replicate `r` uses an RNG substream derived from
//! `(seed, r)`, so results are bit-identical regardless of how replicates
//! are distributed across worker threads.
//!
//! A 20-row scenario grid covering the homoscedastic null, pure scale
//! effects, pure location effects, combined effects, spread-adjusted
//! variants, and an unbalanced block ships with the crate
//! (`scenarios/table1.toml`) and is exposed through [`table1_rows`] and
//! [`table1_suite`].

use crate::contrasts::{dunnett_contrasts, ContrastFamily};
use crate::data::Dataset;
use crate::error::{DataError, NumericError, Result};
use crate::lepage::{lepage_any_rejection, Components};
use crate::linmod::{fit_ols, vcov_sandwich, FittedLinearModel};
use crate::maxt::maxt_any_rejection_among;
use crate::mlt;
use crate::mmm::{joint_family, stack_models};
use crate::mvdist::QmcConfig;
use crate::num;
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Replicate-stream salt, so simulation draws never collide with the
/// permutation or integration streams derived from the same user seed.
const SALT_SIM: u64 = 0x53_49_4d;

/// The test battery of the simulation study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TestId {
    /// Joint location-and-scale test from stacked marginal models.
    #[serde(rename = "MMM")]
    Mmm,
    /// Rejections among the location rows of the joint test only.
    #[serde(rename = "MMMl")]
    MmmLocation,
    /// Classical pooled-variance many-to-one comparisons.
    #[serde(rename = "DUN")]
    Dunnett,
    /// Many-to-one comparisons with a heteroscedasticity-consistent
    /// covariance.
    #[serde(rename = "sDUN")]
    SandwichDunnett,
    /// Spread comparisons on absolute deviations from group medians.
    #[serde(rename = "SCA")]
    Scale,
    /// Transformation-shift test.
    #[serde(rename = "MLT")]
    Mlt,
    /// Permutation max-test over combined rank and Ansari-Bradley scores.
    #[serde(rename = "LEPA")]
    Lepage,
    /// Location-component-only permutation max-test.
    #[serde(rename = "LEPAl")]
    LepageLocation,
}

/// Every test, in the column order of the simulation reports.
pub const ALL_TESTS: [TestId; 8] = [
    TestId::Mmm,
    TestId::MmmLocation,
    TestId::Dunnett,
    TestId::SandwichDunnett,
    TestId::Scale,
    TestId::Mlt,
    TestId::Lepage,
    TestId::LepageLocation,
];

impl TestId {
    /// Short column name used in reports and scenario files.
    pub fn name(self) -> &'static str {
        match self {
            TestId::Mmm => "MMM",
            TestId::MmmLocation => "MMMl",
            TestId::Dunnett => "DUN",
            TestId::SandwichDunnett => "sDUN",
            TestId::Scale => "SCA",
            TestId::Mlt => "MLT",
            TestId::Lepage => "LEPA",
            TestId::LepageLocation => "LEPAl",
        }
    }
}

impl fmt::Display for TestId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        ALL_TESTS
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| {
                let known: Vec<&str> = ALL_TESTS.iter().map(|t| t.name()).collect();
                format!("unknown test '{s}' (expected one of {})", known.join(", "))
            })
    }
}

fn default_alpha() -> f64 {
    0.05
}

fn default_nsim() -> usize {
    5000
}

fn default_seed() -> u64 {
    1
}

fn default_tests() -> Vec<TestId> {
    ALL_TESTS.to_vec()
}

fn default_lepage_nresample() -> usize {
    2000
}

/// One simulation configuration: group sizes, means, and standard
/// deviations (control first), plus the test battery and replication
/// controls. Deserializes from a scenario file; every field except `n`,
/// `mu`, and `sd` has a default.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationScenario {
    /// Group sizes, control first.
    pub n: Vec<usize>,
    /// Group means.
    pub mu: Vec<f64>,
    /// Group standard deviations.
    pub sd: Vec<f64>,
    /// Significance level (default 0.05).
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// Number of replicates (default 5000).
    #[serde(default = "default_nsim")]
    pub nsim: usize,
    /// Master seed; each replicate derives its own stream (default 1).
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Which tests to run (default: all eight).
    #[serde(default = "default_tests")]
    pub tests: Vec<TestId>,
    /// Resamples per replicate for the permutation tests (default 2000).
    #[serde(default = "default_lepage_nresample")]
    pub lepage_nresample: usize,
}

impl SimulationScenario {
    fn validate(&self) -> Result<()> {
        let g = self.n.len();
        if g < 2 {
            return Err(DataError::BadScenario(format!("need at least 2 groups, got {g}")).into());
        }
        if self.mu.len() != g || self.sd.len() != g {
            return Err(DataError::BadScenario(format!(
                "n, mu, sd lengths disagree: {g}, {}, {}",
                self.mu.len(),
                self.sd.len()
            ))
            .into());
        }
        if let Some(i) = self.n.iter().position(|&n| n < 3) {
            return Err(DataError::BadScenario(format!(
                "group {i} has size {}, need at least 3",
                self.n[i]
            ))
            .into());
        }
        if let Some(i) = self
            .sd
            .iter()
            .position(|s| s.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater))
        {
            return Err(DataError::BadScenario(format!(
                "sd for group {i} is {}, must be > 0",
                self.sd[i]
            ))
            .into());
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(
                DataError::BadScenario(format!("alpha {} outside (0, 1)", self.alpha)).into(),
            );
        }
        if self.nsim < 100 {
            return Err(DataError::BadScenario(format!(
                "nsim {} too small, need at least 100",
                self.nsim
            ))
            .into());
        }
        if self.tests.is_empty() {
            return Err(DataError::BadScenario("empty test battery".into()).into());
        }
        for (i, t) in self.tests.iter().enumerate() {
            if self.tests[..i].contains(t) {
                return Err(DataError::BadScenario(format!("duplicate test {t}")).into());
            }
        }
        let needs_lepage = self
            .tests
            .iter()
            .any(|t| matches!(t, TestId::Lepage | TestId::LepageLocation));
        if needs_lepage && self.lepage_nresample < 1000 {
            return Err(DataError::BadScenario(format!(
                "lepage_nresample must be at least 1000, got {}",
                self.lepage_nresample
            ))
            .into());
        }
        Ok(())
    }
}

/// Any-rejection rates for one scenario, with Monte Carlo standard errors
/// and per-test failure counts (failed replicates are excluded from that
/// test's denominator).
#[derive(Debug, Clone, Serialize)]
pub struct ScenarioResult {
    /// The scenario that produced these rates.
    pub scenario: SimulationScenario,
    /// Test battery, in scenario order.
    pub tests: Vec<TestId>,
    /// Fraction of (non-failed) replicates with at least one rejection.
    pub rates: Vec<f64>,
    /// √(p̂(1−p̂)/m) with m the per-test effective replicate count.
    pub mc_se: Vec<f64>,
    /// Replicates where the test could not be computed.
    pub failures: Vec<usize>,
}

impl ScenarioResult {
    /// Rate for one test, if it was part of the battery.
    pub fn rate(&self, test: TestId) -> Option<f64> {
        self.tests
            .iter()
            .position(|&t| t == test)
            .map(|i| self.rates[i])
    }

    /// Monte Carlo standard error for one test.
    pub fn mc_se(&self, test: TestId) -> Option<f64> {
        self.tests
            .iter()
            .position(|&t| t == test)
            .map(|i| self.mc_se[i])
    }
}

/// Runs all replicates of a scenario and aggregates any-rejection rates.
///
/// Replicates are distributed over the current rayon thread pool; each one
/// seeds its own RNG substream, so the result does not depend on the worker
/// count. A test failing on more than 1% of replicates aborts the scenario.
pub fn run_scenario(sc: &SimulationScenario) -> Result<ScenarioResult> {
    sc.validate()?;
    let tests = sc.tests.clone();
    let zero = || vec![(0u64, 0u64); tests.len()];
    let counts = (0..sc.nsim)
        .into_par_iter()
        .map(|r| replicate_counts(sc, &tests, r as u64))
        .reduce(zero, |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                x.0 += y.0;
                x.1 += y.1;
            }
            a
        });
    let mut rates = Vec::with_capacity(tests.len());
    let mut mc_se = Vec::with_capacity(tests.len());
    let mut failures = Vec::with_capacity(tests.len());
    for (&test, &(rejections, failed)) in tests.iter().zip(&counts) {
        if failed * 100 > sc.nsim as u64 {
            return Err(NumericError::TooManyFailures {
                test: test.name().to_string(),
                failed: failed as usize,
                total: sc.nsim,
            }
            .into());
        }
        let m = (sc.nsim as u64 - failed) as f64;
        let p = rejections as f64 / m;
        rates.push(p);
        mc_se.push((p * (1.0 - p) / m).sqrt());
        failures.push(failed as usize);
    }
    Ok(ScenarioResult {
        scenario: sc.clone(),
        tests,
        rates,
        mc_se,
        failures,
    })
}

/// Per-replicate (rejections, failures) contribution for each test.
fn replicate_counts(sc: &SimulationScenario, tests: &[TestId], r: u64) -> Vec<(u64, u64)> {
    let mut rng = num::substream(sc.seed, r, SALT_SIM);
    let total: usize = sc.n.iter().sum();
    let mut groups = Vec::with_capacity(total);
    let mut y = Vec::with_capacity(total);
    for (g, ((&n_g, &mu), &sd)) in sc.n.iter().zip(&sc.mu).zip(&sc.sd).enumerate() {
        let dist = Normal::new(mu, sd).expect("validated sd > 0");
        let label = g.to_string();
        for _ in 0..n_g {
            groups.push(label.clone());
            y.push(dist.sample(&mut rng));
        }
    }
    // independent downstream seeds, drawn after the data so each replicate's
    // integration and permutation streams are fixed by (seed, r) alone
    let qmc_seed: u64 = rng.gen();
    let lepage_seed: u64 = rng.gen();
    let lepage_loc_seed: u64 = rng.gen();
    let cfg = QmcConfig {
        n_points: 512,
        n_shifts: 8,
        seed: qmc_seed,
    };
    let ds = match Dataset::new("replicate", &groups, &y, "0") {
        Ok(ds) => ds,
        Err(_) => return vec![(0, 1); tests.len()],
    };
    let mut state = ReplicateState::new(&ds);
    tests
        .iter()
        .map(
            |&t| match evaluate_test(t, &ds, &mut state, sc, &cfg, lepage_seed, lepage_loc_seed) {
                Ok(true) => (1, 0),
                Ok(false) => (0, 0),
                Err(_) => (0, 1),
            },
        )
        .collect()
}

/// Coefficients, covariance, and contrasts of the stacked location-scale fit.
type JointPieces = (Vec<f64>, DMatrix<f64>, ContrastFamily);

/// Fits shared between tests within one replicate, computed on first use.
struct ReplicateState {
    raw: Option<FittedLinearModel>,
    scale: Option<FittedLinearModel>,
    dunnett: Option<ContrastFamily>,
    // None = not yet computed; Some(None) = stacking failed
    joint: Option<Option<JointPieces>>,
}

impl ReplicateState {
    fn new(_ds: &Dataset) -> Self {
        ReplicateState {
            raw: None,
            scale: None,
            dunnett: None,
            joint: None,
        }
    }

    fn raw_fit(&mut self, ds: &Dataset) -> &FittedLinearModel {
        self.raw.get_or_insert_with(|| fit_ols(ds))
    }

    fn scale_fit(&mut self, ds: &Dataset) -> &FittedLinearModel {
        self.scale
            .get_or_insert_with(|| fit_ols(&crate::data::levene_transform(ds)))
    }

    fn dunnett_family(&mut self, ds: &Dataset) -> &ContrastFamily {
        self.dunnett
            .get_or_insert_with(|| dunnett_contrasts(ds.treatments(), ds.control()))
    }

    fn joint_parts(&mut self, ds: &Dataset) -> Option<&(Vec<f64>, DMatrix<f64>, ContrastFamily)> {
        if self.joint.is_none() {
            let raw = self.raw_fit(ds).clone();
            let scale = self.scale_fit(ds).clone();
            let parts = stack_models(vec![raw, scale]).ok().map(|stacked| {
                (
                    stacked.joint_coef().to_vec(),
                    stacked.calibrated_joint_vcov(),
                    joint_family(ds),
                )
            });
            self.joint = Some(parts);
        }
        self.joint.as_ref().unwrap().as_ref()
    }
}

fn evaluate_test(
    test: TestId,
    ds: &Dataset,
    state: &mut ReplicateState,
    sc: &SimulationScenario,
    cfg: &QmcConfig,
    lepage_seed: u64,
    lepage_loc_seed: u64,
) -> Result<bool> {
    let k = ds.n_treatments();
    let all_rows: Vec<usize> = (0..k).collect();
    match test {
        TestId::Dunnett => {
            let fit = state.raw_fit(ds);
            let (coef, vcov, df) = (
                fit.coefficients().as_slice().to_vec(),
                fit.vcov_classical().clone(),
                fit.df_resid(),
            );
            let family = state.dunnett_family(ds);
            maxt_any_rejection_among(&coef, &vcov, family, df, sc.alpha, cfg, &all_rows)
        }
        TestId::SandwichDunnett => {
            let fit = state.raw_fit(ds);
            let vcov = vcov_sandwich(fit)?;
            let (coef, df) = (fit.coefficients().as_slice().to_vec(), fit.df_resid());
            let family = state.dunnett_family(ds);
            maxt_any_rejection_among(&coef, &vcov, family, df, sc.alpha, cfg, &all_rows)
        }
        TestId::Scale => {
            let fit = state.scale_fit(ds);
            let (coef, vcov) = (
                fit.coefficients().as_slice().to_vec(),
                fit.vcov_classical().clone(),
            );
            let family = state.dunnett_family(ds);
            maxt_any_rejection_among(&coef, &vcov, family, 0, sc.alpha, cfg, &all_rows)
        }
        TestId::Mmm | TestId::MmmLocation => {
            let alpha = sc.alpha;
            let Some((coef, vcov, family)) = state.joint_parts(ds) else {
                return Err(NumericError::Singular("stacking failed".into()).into());
            };
            let rows: Vec<usize> = match test {
                // the joint family lists the location block first
                TestId::MmmLocation => (0..k).collect(),
                _ => (0..2 * k).collect(),
            };
            maxt_any_rejection_among(coef, vcov, family, 0, alpha, cfg, &rows)
        }
        TestId::Mlt => {
            let model = mlt::fit_mlt(ds, mlt::DEFAULT_ORDER, mlt::DEFAULT_SUPPORT_PROBS)?;
            let family = crate::contrasts::mlt_selector(
                mlt::DEFAULT_ORDER + 1,
                ds.treatments(),
                ds.control(),
            );
            let mut params = model.theta().to_vec();
            params.extend_from_slice(model.beta());
            maxt_any_rejection_among(&params, model.vcov(), &family, 0, sc.alpha, cfg, &all_rows)
        }
        TestId::Lepage => lepage_any_rejection(
            ds,
            sc.lepage_nresample,
            lepage_seed,
            sc.alpha,
            Components::Both,
        ),
        TestId::LepageLocation => lepage_any_rejection(
            ds,
            sc.lepage_nresample,
            lepage_loc_seed,
            sc.alpha,
            Components::LocationOnly,
        ),
    }
}

/// One row of the built-in scenario grid.
#[derive(Debug, Clone, Deserialize)]
pub struct Table1Row {
    /// Row identifier, e.g. `H11d-2.4`.
    pub id: String,
    /// Human-readable description of the configuration.
    pub label: String,
    /// Group sizes, control first.
    pub n: Vec<usize>,
    /// Group means.
    pub mu: Vec<f64>,
    /// Group standard deviations.
    pub sd: Vec<f64>,
}

#[derive(Deserialize)]
struct Table1File {
    row: Vec<Table1Row>,
}

const TABLE1_TOML: &str = include_str!("../scenarios/table1.toml");

/// The built-in scenario grid, in report order.
pub fn table1_rows() -> Vec<Table1Row> {
    let file: Table1File =
        toml::from_str(TABLE1_TOML).expect("embedded scenario grid is well-formed");
    file.row
}

/// Builds the scenario for one grid row. The per-row seed is derived from
/// the master seed and the row id, so adding or reordering rows never
/// changes another row's stream.
pub fn table1_scenario(row: &Table1Row, nsim: usize, seed: u64) -> SimulationScenario {
    let row_seed = num::HashFold::new()
        .u64(seed)
        .bytes(row.id.as_bytes())
        .finish();
    SimulationScenario {
        n: row.n.clone(),
        mu: row.mu.clone(),
        sd: row.sd.clone(),
        alpha: default_alpha(),
        nsim,
        seed: row_seed,
        tests: default_tests(),
        lepage_nresample: default_lepage_nresample(),
    }
}

/// Runs a selection of grid rows (all of them when `rows` is empty).
pub fn table1_suite(nsim: usize, seed: u64, rows: &[String]) -> Result<Vec<ScenarioResult>> {
    let grid = table1_rows();
    let selected: Vec<&Table1Row> = if rows.is_empty() {
        grid.iter().collect()
    } else {
        let mut picked = Vec::with_capacity(rows.len());
        for id in rows {
            let row = grid.iter().find(|r| &r.id == id).ok_or_else(|| {
                let known: Vec<&str> = grid.iter().map(|r| r.id.as_str()).collect();
                DataError::BadScenario(format!(
                    "unknown scenario row '{id}' (available: {})",
                    known.join(", ")
                ))
            })?;
            picked.push(row);
        }
        picked
    };
    selected
        .into_iter()
        .map(|row| run_scenario(&table1_scenario(row, nsim, seed)))
        .collect()
}
