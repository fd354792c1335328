//! Many-to-one comparisons against a shared control that stay informative
//! when treatments change the spread of the response, not just its center.
//!
//! The classical Dunnett procedure compares each treatment mean with the
//! control mean under a common-variance model. This crate keeps that
//! procedure and adds several relatives that remain valid or gain power
//! under heteroscedasticity:
//!
//! * [`maxt::dunnett_classical`] — pooled-variance mean comparisons;
//! * [`maxt::dunnett_sandwich`] — the same comparisons with a
//!   heteroscedasticity-consistent covariance;
//! * [`maxt::dunnett_scale`] — comparisons of spread via absolute
//!   deviations from group medians;
//! * [`mmm::mmm_dunnett`] — location and scale families tested jointly
//!   through a stacked multiple-marginal-models covariance;
//! * [`mlt::mlt_dunnett`] — shifts of a monotone Bernstein transformation
//!   to a normal reference, sensitive to general distributional change;
//! * [`lepage::lepage_dunnett`] — a permutation max-test on combined
//!   rank and Ansari-Bradley scores.
//!
//! All parametric procedures report single-step max-T adjusted p-values and
//! simultaneous confidence intervals computed from multivariate normal or t
//! rectangle probabilities ([`mvdist::mv_rect_prob`]); the permutation test
//! standardizes group score sums by their exact conditional moments.
//!
//! The [`sim`] module drives Monte Carlo error-rate and power studies over
//! configurable location/scale scenarios, and [`report`] renders results as
//! aligned text or CSV.

mod datasets;
mod num;

pub mod contrasts;
pub mod data;
pub mod error;
pub mod lepage;
pub mod linmod;
pub mod maxt;
pub mod mlt;
pub mod mmm;
pub mod mvdist;
pub mod report;
pub mod sim;

pub use contrasts::{
    dunnett_contrasts, dunnett_contrasts_cell_means, mlt_selector, ContrastFamily,
};
pub use data::{builtin_dataset, builtin_names, levene_transform, load_csv, Dataset};
pub use error::{DataError, Error, NumericError, Result};
pub use lepage::{lepage_dunnett, lepage_scores, Components, PermutationResult, ScoreMatrix};
pub use linmod::{
    fit_ols, levene_global_test, vcov_sandwich, vcov_sandwich_hc, FittedLinearModel, HcType,
    LeveneTest,
};
pub use maxt::{dunnett_classical, dunnett_sandwich, dunnett_scale, maxt_test, DfMode, MaxTResult};
pub use mlt::{fit_mlt, mlt_dunnett, TransformationModel, DEFAULT_ORDER};
pub use mmm::{mmm_dunnett, stack_models, StackedFit};
pub use mvdist::{mv_rect_prob, CorrelationMatrix, QmcConfig};
pub use sim::{
    run_scenario, table1_rows, table1_scenario, table1_suite, ScenarioResult, SimulationScenario,
    TestId, ALL_TESTS,
};
