//! Rank-score permutation max-tests for many-to-one comparisons: a combined
//! location–scale family built from midranks and Ansari–Bradley scores, and
//! its location-only restriction.
//!
//! Linear statistics T_jc = Σ_i g_j(x_i)·h_c(y_i) are standardized by their
//! exact conditional (permutation) moments and referred to the resampled
//! distribution of the maximum, giving single-step adjusted p-values. Small
//! datasets (N ≤ 8) are handled by exhaustive enumeration of the distinct
//! group assignments, which makes the p-values exact.

use crate::data::Dataset;
use crate::error::{DataError, Result};
use crate::num;
use nalgebra::DMatrix;
use rand::Rng;

/// Salt for the per-resample RNG substreams.
const SALT_LEPAGE: u64 = 0x004c_4550;

/// Comparisons of |z| values against resampled maxima use this slack so that
/// mathematically tied statistics compare equal regardless of the float
/// summation order that produced them.
const TIE_TOL: f64 = 1e-8;

/// Exhaustive enumeration replaces resampling at or below this sample size.
const EXACT_LIMIT: usize = 8;

/// Midranks and Ansari–Bradley scores of one response vector, as columns
/// `"Location"` and `"Scale"`.
#[derive(Debug, Clone)]
pub struct ScoreMatrix {
    values: DMatrix<f64>,
}

impl ScoreMatrix {
    /// N×2 score matrix: column 0 midranks, column 1 Ansari–Bradley.
    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    /// Column labels, fixed.
    pub fn labels() -> [&'static str; 2] {
        ["Location", "Scale"]
    }
}

/// Midranks (average ranks for ties) and Ansari–Bradley scores
/// a_i = min(R_i, N+1−R_i) computed on the midranks.
pub fn lepage_scores(y: &[f64]) -> ScoreMatrix {
    let n = y.len();
    assert!(n >= 2, "scores need at least two observations");
    let ranks = num::midranks(y);
    let mut values = DMatrix::zeros(n, 2);
    for i in 0..n {
        values[(i, 0)] = ranks[i];
        values[(i, 1)] = ranks[i].min((n + 1) as f64 - ranks[i]);
    }
    ScoreMatrix { values }
}

/// Which score columns enter the family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Components {
    /// Midrank and Ansari–Bradley columns: 2k statistics.
    Both,
    /// Midrank column only: k statistics, a pure location test.
    LocationOnly,
}

/// Result of a permutation max-test over a family of standardized linear
/// statistics.
#[derive(Debug, Clone)]
pub struct PermutationResult {
    /// One label per statistic (`location:`/`scale:` prefixes).
    pub labels: Vec<String>,
    /// Standardized statistics z_j.
    pub statistics: Vec<f64>,
    /// Single-step adjusted p-values from the resampled (or enumerated)
    /// distribution of max|Z|.
    pub adj_p: Vec<f64>,
    /// Number of resamples, or the number of distinct assignments when
    /// `exact` is set.
    pub nresample: usize,
    /// Seed the resampling streams were derived from.
    pub seed: u64,
    /// True when the reference distribution was enumerated exhaustively.
    pub exact: bool,
    /// Statistics with zero conditional variance, reported with adj_p = 1.
    pub degenerate: Vec<bool>,
}

impl PermutationResult {
    /// True if any statistic rejects at level alpha.
    pub fn any_rejection(&self, alpha: f64) -> bool {
        self.adj_p.iter().any(|&p| p < alpha)
    }
}

/// The rank-score permutation max-test of all treatments against the
/// control. Statistics pair each Dunnett-type group contrast with the score
/// columns chosen by `components`; the reference distribution resamples the
/// group labels `nresample` times (exhaustive enumeration when N ≤ 8, where
/// `nresample` is ignored).
pub fn lepage_dunnett(
    ds: &Dataset,
    nresample: usize,
    seed: u64,
    components: Components,
) -> Result<PermutationResult> {
    if nresample < 1000 {
        return Err(DataError::BadScenario(format!(
            "nresample must be at least 1000, got {nresample}"
        ))
        .into());
    }
    let engine = Engine::new(ds, components);
    let observed = engine.observed_z();
    let n_stats = observed.len();

    let mut counts = vec![0usize; n_stats];
    let total;
    let exact = ds.n() <= EXACT_LIMIT;
    if exact {
        let assignments = distinct_assignments(&engine.group_sizes);
        total = assignments.len();
        for assign in &assignments {
            let m = engine.max_abs_z(assign);
            for j in 0..n_stats {
                if m >= observed[j].abs() - TIE_TOL {
                    counts[j] += 1;
                }
            }
        }
    } else {
        total = nresample;
        let mut assign = engine.assign.clone();
        for b in 0..nresample {
            let mut rng = num::substream(seed, b as u64, SALT_LEPAGE);
            shuffle(&mut assign, &mut rng);
            let m = engine.max_abs_z(&assign);
            for j in 0..n_stats {
                if m >= observed[j].abs() - TIE_TOL {
                    counts[j] += 1;
                }
            }
        }
    }

    let adj_p: Vec<f64> = (0..n_stats)
        .map(|j| {
            if engine.degenerate[j] {
                1.0
            } else if exact {
                counts[j] as f64 / total as f64
            } else {
                (1 + counts[j]) as f64 / (total + 1) as f64
            }
        })
        .collect();

    Ok(PermutationResult {
        labels: engine.labels.clone(),
        statistics: observed,
        adj_p,
        nresample: total,
        seed,
        exact,
        degenerate: engine.degenerate.clone(),
    })
}

/// Decides "any statistic rejects at level alpha" with the same convention
/// as [`lepage_dunnett`], terminating the resampling loop as soon as the
/// exceedance count makes acceptance certain. The decision is identical to
/// running the full resampling because the counts only grow.
pub fn lepage_any_rejection(
    ds: &Dataset,
    nresample: usize,
    seed: u64,
    alpha: f64,
    components: Components,
) -> Result<bool> {
    if nresample < 1000 {
        return Err(DataError::BadScenario(format!(
            "nresample must be at least 1000, got {nresample}"
        ))
        .into());
    }
    let engine = Engine::new(ds, components);
    let observed = engine.observed_z();
    let t_max = observed
        .iter()
        .zip(&engine.degenerate)
        .filter(|(_, &d)| !d)
        .map(|(z, _)| z.abs())
        .fold(0.0f64, f64::max);
    if t_max == 0.0 {
        return Ok(false);
    }
    if ds.n() <= EXACT_LIMIT {
        let assignments = distinct_assignments(&engine.group_sizes);
        let total = assignments.len();
        let count = assignments
            .iter()
            .filter(|a| engine.max_abs_z(a) >= t_max - TIE_TOL)
            .count();
        return Ok((count as f64 / total as f64) < alpha);
    }
    // acceptance is certain once (1 + count)/(B + 1) can no longer drop
    // below alpha
    let cutoff = (alpha * (nresample + 1) as f64 - 1.0).ceil() as usize;
    let mut count = 0usize;
    let mut assign = engine.assign.clone();
    for b in 0..nresample {
        let mut rng = num::substream(seed, b as u64, SALT_LEPAGE);
        shuffle(&mut assign, &mut rng);
        if engine.max_abs_z(&assign) >= t_max - TIE_TOL {
            count += 1;
            if count >= cutoff {
                return Ok(false);
            }
        }
    }
    Ok(((1 + count) as f64 / (nresample + 1) as f64) < alpha)
}

/// Precomputed scores, moments, and labels for one dataset and component
/// choice. Statistic index = score column × k + treatment.
struct Engine {
    assign: Vec<usize>,
    scores: DMatrix<f64>,
    k: usize,
    n_groups: usize,
    group_sizes: Vec<usize>,
    mu: Vec<f64>,
    sd: Vec<f64>,
    labels: Vec<String>,
    degenerate: Vec<bool>,
}

impl Engine {
    fn new(ds: &Dataset, components: Components) -> Engine {
        let n = ds.n();
        let full = lepage_scores(ds.responses());
        let n_cols = match components {
            Components::Both => 2,
            Components::LocationOnly => 1,
        };
        let scores = full.values.columns(0, n_cols).into_owned();
        let group_sizes = ds.group_sizes();
        let n_groups = group_sizes.len();
        let k = n_groups - 1;

        // exact conditional moments of T_jc = S_{j+1,c} − S_{0,c} under
        // uniformly permuted labels: with g the contrast column,
        // Σg = n_{j+1} − n_0 and Σg² = n_{j+1} + n_0
        let nn = n as f64;
        let mut mu = vec![0.0; n_cols * k];
        let mut sd = vec![0.0; n_cols * k];
        let mut degenerate = vec![false; n_cols * k];
        for c in 0..n_cols {
            let col = scores.column(c);
            let mean = col.sum() / nn;
            let var = col.iter().map(|h| (h - mean) * (h - mean)).sum::<f64>() / nn;
            for j in 0..k {
                let g_sum = group_sizes[j + 1] as f64 - group_sizes[0] as f64;
                let g_sq = (group_sizes[j + 1] + group_sizes[0]) as f64;
                let v = var * (nn * g_sq - g_sum * g_sum) / (nn - 1.0);
                let idx = c * k + j;
                mu[idx] = g_sum * mean;
                if v > 1e-12 {
                    sd[idx] = v.sqrt();
                } else {
                    degenerate[idx] = true;
                    sd[idx] = 1.0; // placeholder; statistic reported as 0
                }
            }
        }

        let prefixes = ["location", "scale"];
        let mut labels = Vec::with_capacity(n_cols * k);
        for prefix in prefixes.iter().take(n_cols) {
            for t in ds.treatments() {
                labels.push(format!("{prefix}: {t} - {}", ds.control()));
            }
        }

        Engine {
            assign: ds.group_indices().to_vec(),
            scores,
            k,
            n_groups,
            group_sizes,
            mu,
            sd,
            labels,
            degenerate,
        }
    }

    /// Standardized statistics of the observed assignment, signed.
    fn observed_z(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.mu.len()];
        self.z_into(&self.assign, &mut out);
        out
    }

    /// Standardized statistics of an assignment, written into `out`.
    fn z_into(&self, assign: &[usize], out: &mut [f64]) {
        let n_cols = self.scores.ncols();
        let mut sums = vec![0.0f64; self.n_groups * n_cols];
        for (i, &g) in assign.iter().enumerate() {
            for c in 0..n_cols {
                sums[g * n_cols + c] += self.scores[(i, c)];
            }
        }
        for c in 0..n_cols {
            for j in 0..self.k {
                let idx = c * self.k + j;
                if self.degenerate[idx] {
                    out[idx] = 0.0;
                } else {
                    let t = sums[(j + 1) * n_cols + c] - sums[c];
                    out[idx] = (t - self.mu[idx]) / self.sd[idx];
                }
            }
        }
    }

    /// max_j |z_j| of an assignment (degenerate statistics contribute 0).
    fn max_abs_z(&self, assign: &[usize]) -> f64 {
        let n_cols = self.scores.ncols();
        let mut sums = vec![0.0f64; self.n_groups * n_cols];
        for (i, &g) in assign.iter().enumerate() {
            for c in 0..n_cols {
                sums[g * n_cols + c] += self.scores[(i, c)];
            }
        }
        let mut m = 0.0f64;
        for c in 0..n_cols {
            for j in 0..self.k {
                let idx = c * self.k + j;
                if !self.degenerate[idx] {
                    let t = sums[(j + 1) * n_cols + c] - sums[c];
                    m = m.max(((t - self.mu[idx]) / self.sd[idx]).abs());
                }
            }
        }
        m
    }
}

/// Uniform in-place shuffle.
fn shuffle<T>(v: &mut [T], rng: &mut impl Rng) {
    for i in (1..v.len()).rev() {
        let j = rng.gen_range(0..=i);
        v.swap(i, j);
    }
}

/// All distinct assignments of the group-size multiset to positions, in
/// lexicographic order.
fn distinct_assignments(group_sizes: &[usize]) -> Vec<Vec<usize>> {
    let n: usize = group_sizes.iter().sum();
    let mut remaining = group_sizes.to_vec();
    let mut current = Vec::with_capacity(n);
    let mut out = Vec::new();
    fn recurse(
        remaining: &mut [usize],
        current: &mut Vec<usize>,
        n: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for g in 0..remaining.len() {
            if remaining[g] > 0 {
                remaining[g] -= 1;
                current.push(g);
                recurse(remaining, current, n, out);
                current.pop();
                remaining[g] += 1;
            }
        }
    }
    recurse(&mut remaining, &mut current, n, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn small_dataset() -> Dataset {
        let groups: Vec<String> = ["c", "c", "c", "t", "t", "t"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        Dataset::new("small", &groups, &[1.0, 3.0, 5.0, 2.0, 4.0, 6.0], "c").unwrap()
    }

    fn medium_dataset(shift: f64) -> Dataset {
        // two groups of 6 with a configurable shift
        let groups: Vec<String> = std::iter::repeat_n("c".to_string(), 6)
            .chain(std::iter::repeat_n("t".to_string(), 6))
            .collect();
        let base = [0.3, -1.2, 0.8, 1.9, -0.4, 0.1];
        let mut values: Vec<f64> = base.to_vec();
        values.extend(base.iter().map(|v| v * 1.1 + shift));
        Dataset::new("medium", &groups, &values, "c").unwrap()
    }

    #[test]
    fn scores_basic_example() {
        let s = lepage_scores(&[10.0, 20.0, 30.0]);
        let v = s.values();
        assert_eq!((v[(0, 0)], v[(1, 0)], v[(2, 0)]), (1.0, 2.0, 3.0));
        assert_eq!((v[(0, 1)], v[(1, 1)], v[(2, 1)]), (1.0, 2.0, 1.0));
    }

    #[test]
    fn scores_full_tie() {
        let s = lepage_scores(&[5.0, 5.0]);
        let v = s.values();
        assert_eq!((v[(0, 0)], v[(1, 0)]), (1.5, 1.5));
        assert_eq!((v[(0, 1)], v[(1, 1)]), (1.5, 1.5));
    }

    #[test]
    fn scores_length_four_pattern() {
        let s = lepage_scores(&[4.0, 1.0, 3.0, 2.0]);
        let v = s.values();
        // in rank order the Ansari scores read 1, 2, 2, 1
        let mut by_rank: Vec<(f64, f64)> = (0..4).map(|i| (v[(i, 0)], v[(i, 1)])).collect();
        by_rank.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let ansari: Vec<f64> = by_rank.iter().map(|p| p.1).collect();
        assert_eq!(ansari, vec![1.0, 2.0, 2.0, 1.0]);
    }

    #[test]
    fn rank_column_sums_to_triangular_number() {
        let y = [3.1, 1.0, 1.0, 7.2, 5.5, 5.5, 5.5];
        let s = lepage_scores(&y);
        let n = y.len() as f64;
        assert_abs_diff_eq!(
            s.values().column(0).sum(),
            n * (n + 1.0) / 2.0,
            epsilon = 1e-12
        );
        for i in 0..y.len() {
            let a = s.values()[(i, 1)];
            assert!(a >= 1.0 && a <= (y.len() as f64 + 1.0) / 2.0);
        }
    }

    #[test]
    fn small_sample_is_enumerated() {
        let ds = small_dataset();
        let r = lepage_dunnett(&ds, 10_000, 7, Components::Both).unwrap();
        assert!(r.exact);
        assert_eq!(r.nresample, 20); // 6 choose 3 distinct assignments
        for &p in &r.adj_p {
            let scaled = p * 20.0;
            assert_abs_diff_eq!(scaled, scaled.round(), epsilon = 1e-9);
            assert!((1.0 / 20.0..=1.0).contains(&p));
        }
    }

    #[test]
    fn exact_path_ignores_seed() {
        let ds = small_dataset();
        let a = lepage_dunnett(&ds, 10_000, 1, Components::Both).unwrap();
        let b = lepage_dunnett(&ds, 10_000, 999, Components::Both).unwrap();
        assert_eq!(a.adj_p, b.adj_p);
    }

    #[test]
    fn monotone_transform_leaves_everything_unchanged() {
        let ds = medium_dataset(1.0);
        let transformed: Vec<f64> = ds
            .responses()
            .iter()
            .map(|y| (y * 0.7).exp() + 3.0)
            .collect();
        let groups: Vec<String> = ds
            .group_indices()
            .iter()
            .map(|&g| ds.levels()[g].clone())
            .collect();
        let ds2 = Dataset::new("warped", &groups, &transformed, "c").unwrap();
        let a = lepage_dunnett(&ds, 2000, 42, Components::Both).unwrap();
        let b = lepage_dunnett(&ds2, 2000, 42, Components::Both).unwrap();
        for j in 0..a.statistics.len() {
            assert_eq!(a.statistics[j].to_bits(), b.statistics[j].to_bits());
            assert_eq!(a.adj_p[j].to_bits(), b.adj_p[j].to_bits());
        }
    }

    #[test]
    fn same_seed_reproduces_bitwise() {
        let ds = medium_dataset(0.5);
        let a = lepage_dunnett(&ds, 3000, 123, Components::Both).unwrap();
        let b = lepage_dunnett(&ds, 3000, 123, Components::Both).unwrap();
        for j in 0..a.adj_p.len() {
            assert_eq!(a.adj_p[j].to_bits(), b.adj_p[j].to_bits());
        }
        assert_eq!(a.seed, 123);
        assert!(!a.exact);
    }

    #[test]
    fn location_only_restricts_family() {
        let ds = medium_dataset(0.5);
        let both = lepage_dunnett(&ds, 2000, 5, Components::Both).unwrap();
        let loc = lepage_dunnett(&ds, 2000, 5, Components::LocationOnly).unwrap();
        assert_eq!(both.labels.len(), 2);
        assert_eq!(loc.labels.len(), 1);
        assert!(loc.labels[0].starts_with("location:"));
        // the location statistic itself is the same linear statistic
        assert_abs_diff_eq!(both.statistics[0], loc.statistics[0], epsilon = 1e-12);
    }

    #[test]
    fn constant_responses_are_degenerate_not_fatal() {
        let groups: Vec<String> = std::iter::repeat_n("c".to_string(), 5)
            .chain(std::iter::repeat_n("t".to_string(), 5))
            .collect();
        let ds = Dataset::new("flat", &groups, &[2.0; 10], "c").unwrap();
        let r = lepage_dunnett(&ds, 2000, 9, Components::Both).unwrap();
        assert!(r.degenerate.iter().all(|&d| d));
        assert!(r.adj_p.iter().all(|&p| p == 1.0));
    }

    #[test]
    fn resampled_statistics_have_unit_moments() {
        let ds = medium_dataset(0.0);
        let engine = Engine::new(&ds, Components::Both);
        let nresample = 4000;
        let mut assign = engine.assign.clone();
        let mut z = vec![0.0; engine.mu.len()];
        let mut sum = 0.0;
        let mut sum2 = 0.0;
        for b in 0..nresample {
            let mut rng = num::substream(31, b as u64, SALT_LEPAGE);
            shuffle(&mut assign, &mut rng);
            engine.z_into(&assign, &mut z);
            sum += z[0];
            sum2 += z[0] * z[0];
        }
        let mean = sum / nresample as f64;
        let var = sum2 / nresample as f64 - mean * mean;
        assert!(
            mean.abs() < 3.0 / (nresample as f64).sqrt(),
            "mean = {mean}"
        );
        assert!((0.8..=1.2).contains(&var), "var = {var}");
    }

    #[test]
    fn decision_matches_full_run() {
        for shift in [0.0, 1.5, 4.0] {
            let ds = medium_dataset(shift);
            let full = lepage_dunnett(&ds, 2000, 77, Components::Both).unwrap();
            let fast = lepage_any_rejection(&ds, 2000, 77, 0.05, Components::Both).unwrap();
            assert_eq!(full.any_rejection(0.05), fast, "shift {shift}");
        }
    }

    #[test]
    fn small_nresample_rejected() {
        let ds = medium_dataset(0.0);
        assert!(lepage_dunnett(&ds, 999, 1, Components::Both).is_err());
    }

    #[test]
    fn assignment_enumeration_counts() {
        assert_eq!(distinct_assignments(&[3, 3]).len(), 20);
        assert_eq!(distinct_assignments(&[2, 2, 2]).len(), 90);
        let all = distinct_assignments(&[2, 2]);
        assert_eq!(all.len(), 6);
        // each assignment uses each group exactly its size many times
        for a in &all {
            assert_eq!(a.iter().filter(|&&g| g == 0).count(), 2);
        }
    }
}
