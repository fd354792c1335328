//! Brute-force oracle implementations shared by the integration suites.
//!
//! Everything here is written against the mathematical definitions —
//! enumeration, quadrature, naive Monte Carlo, closed forms — deliberately
//! avoiding the crate's own algorithms so that agreement is evidence.

#![allow(dead_code)]

use locscale::{Components, Dataset};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use statrs::distribution::{ContinuousCDF, Normal};
use std::f64::consts::PI;

pub fn norm_cdf(x: f64) -> f64 {
    if x == f64::INFINITY {
        return 1.0;
    }
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    Normal::new(0.0, 1.0).unwrap().cdf(x)
}

fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Gauss–Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 1..=n.div_ceil(2) {
        let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        loop {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                let w = 2.0 / ((1.0 - x * x) * dp * dp);
                nodes[i - 1] = -x;
                nodes[n - i] = x;
                weights[i - 1] = w;
                weights[n - i] = w;
                break;
            }
        }
    }
    (nodes, weights)
}

/// P(a1 ≤ X1 ≤ b1, a2 ≤ X2 ≤ b2) for a standard bivariate normal with
/// correlation `rho`, by panelled Gauss–Legendre quadrature over
/// P(X2 ∈ ·| X1 = x) φ(x). Infinite bounds are truncated where the density
/// is below 1e-16.
pub fn bvn_rect(a1: f64, b1: f64, a2: f64, b2: f64, rho: f64) -> f64 {
    assert!(rho.abs() < 1.0, "correlation must be inside (-1, 1)");
    let s = (1.0 - rho * rho).sqrt();
    let lo = a1.max(-8.5);
    let hi = b1.min(8.5);
    if lo >= hi {
        return 0.0;
    }
    let (nodes, weights) = gauss_legendre(32);
    let panels = 10;
    let step = (hi - lo) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * step;
        let half = step / 2.0;
        for (t, w) in nodes.iter().zip(&weights) {
            let x = mid + half * t;
            let slab = norm_cdf((b2 - rho * x) / s) - norm_cdf((a2 - rho * x) / s);
            total += w * half * norm_pdf(x) * slab;
        }
    }
    total
}

/// Lexicographic successor of a multiset permutation; false once exhausted.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Exhaustive-permutation oracle for the rank-score max-test: walks every
/// distinct group assignment, standardizes each linear statistic by moments
/// taken empirically over that full enumeration, and counts exceedances of
/// the observed maxima. Returns (observed z, adjusted p).
pub fn lepage_oracle(ds: &Dataset, components: Components) -> (Vec<f64>, Vec<f64>) {
    const TIE_TOL: f64 = 1e-8;
    let y = ds.responses();
    let n = y.len();

    // midranks by pairwise counting
    let mut scores = vec![[0.0f64; 2]; n];
    for i in 0..n {
        let mut less = 0usize;
        let mut equal = 0usize;
        for j in 0..n {
            if y[j] < y[i] {
                less += 1;
            } else if j != i && y[j] == y[i] {
                equal += 1;
            }
        }
        let rank = 1.0 + less as f64 + 0.5 * equal as f64;
        scores[i] = [rank, rank.min((n + 1) as f64 - rank)];
    }
    let n_cols = match components {
        Components::Both => 2,
        Components::LocationOnly => 1,
    };

    let sizes = ds.group_sizes();
    let k = sizes.len() - 1;
    let n_stats = n_cols * k;
    let stat_of = |assign: &[usize]| -> Vec<f64> {
        let mut t = vec![0.0; n_stats];
        for (i, &g) in assign.iter().enumerate() {
            for c in 0..n_cols {
                if g == 0 {
                    for j in 0..k {
                        t[c * k + j] -= scores[i][c];
                    }
                } else {
                    t[c * k + (g - 1)] += scores[i][c];
                }
            }
        }
        t
    };

    // every distinct assignment, with empirical conditional moments
    let mut assign: Vec<usize> = (0..sizes.len())
        .flat_map(|g| std::iter::repeat_n(g, sizes[g]))
        .collect();
    let mut all = Vec::new();
    loop {
        all.push(stat_of(&assign));
        if !next_permutation(&mut assign) {
            break;
        }
    }
    let total = all.len() as f64;
    let mut mean = vec![0.0; n_stats];
    let mut var = vec![0.0; n_stats];
    for t in &all {
        for j in 0..n_stats {
            mean[j] += t[j];
            var[j] += t[j] * t[j];
        }
    }
    for j in 0..n_stats {
        mean[j] /= total;
        var[j] = var[j] / total - mean[j] * mean[j];
    }
    let degenerate: Vec<bool> = var.iter().map(|&v| v <= 1e-12).collect();

    let t_obs = stat_of(ds.group_indices());
    let z_obs: Vec<f64> = (0..n_stats)
        .map(|j| {
            if degenerate[j] {
                0.0
            } else {
                (t_obs[j] - mean[j]) / var[j].sqrt()
            }
        })
        .collect();

    let mut counts = vec![0usize; n_stats];
    for t in &all {
        let mut m = 0.0f64;
        for j in 0..n_stats {
            if !degenerate[j] {
                m = m.max(((t[j] - mean[j]) / var[j].sqrt()).abs());
            }
        }
        for j in 0..n_stats {
            if m >= z_obs[j].abs() - TIE_TOL {
                counts[j] += 1;
            }
        }
    }
    let adj_p: Vec<f64> = (0..n_stats)
        .map(|j| {
            if degenerate[j] {
                1.0
            } else {
                counts[j] as f64 / total
            }
        })
        .collect();
    (z_obs, adj_p)
}

/// HC0 covariance of the treatment-coded one-way fit, from the closed form:
/// the estimates are β̂_0 = ȳ_0 and β̂_g = ȳ_g − ȳ_0, so with
/// v_g = Σ_{i∈g} r_i² / n_g² the blocks are Var(β̂_0) = v_0,
/// Cov(β̂_0, β̂_g) = −v_0, Var(β̂_g) = v_0 + v_g, Cov(β̂_g, β̂_h) = v_0.
pub fn hc0_one_way(ds: &Dataset) -> DMatrix<f64> {
    let g = ds.levels().len();
    let mut count = vec![0usize; g];
    let mut sum = vec![0.0f64; g];
    for (i, &gi) in ds.group_indices().iter().enumerate() {
        count[gi] += 1;
        sum[gi] += ds.responses()[i];
    }
    let mean: Vec<f64> = (0..g).map(|j| sum[j] / count[j] as f64).collect();
    let mut v = vec![0.0f64; g];
    for (i, &gi) in ds.group_indices().iter().enumerate() {
        let r = ds.responses()[i] - mean[gi];
        v[gi] += r * r;
    }
    for j in 0..g {
        v[j] /= (count[j] * count[j]) as f64;
    }
    let mut out = DMatrix::zeros(g, g);
    out[(0, 0)] = v[0];
    for t in 1..g {
        out[(0, t)] = -v[0];
        out[(t, 0)] = -v[0];
        for u in 1..g {
            out[(t, u)] = v[0];
        }
        out[(t, t)] = v[0] + v[t];
    }
    out
}

/// Naive Monte Carlo estimate of the single-step adjusted p-values
/// p_j = P(max_i |Z_i| ≥ |t_j|) for Z ~ N(0, R), R the correlation of
/// `vcov`. Plain Cholesky sampling, `ndraws` independent draws.
pub fn mc_maxmod_p(stats: &[f64], vcov: &DMatrix<f64>, ndraws: usize, seed: u64) -> Vec<f64> {
    let q = stats.len();
    assert_eq!(q, 3, "oracle is written for trivariate families");
    let mut r = DMatrix::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            r[(i, j)] = vcov[(i, j)] / (vcov[(i, i)] * vcov[(j, j)]).sqrt();
        }
    }
    // explicit 3x3 Cholesky factor
    let l21 = r[(1, 0)];
    let l22 = (1.0 - l21 * l21).sqrt();
    let l31 = r[(2, 0)];
    let l32 = (r[(2, 1)] - l31 * l21) / l22;
    let l33 = (1.0 - l31 * l31 - l32 * l32).sqrt();
    assert!(l22.is_finite() && l33.is_finite() && l22 > 0.0 && l33 > 0.0);

    let thresholds: Vec<f64> = stats.iter().map(|t| t.abs()).collect();
    let mut counts = [0usize; 3];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ndraws {
        let e1: f64 = rng.sample(StandardNormal);
        let e2: f64 = rng.sample(StandardNormal);
        let e3: f64 = rng.sample(StandardNormal);
        let z1 = e1;
        let z2 = l21 * e1 + l22 * e2;
        let z3 = l31 * e1 + l32 * e2 + l33 * e3;
        let m = z1.abs().max(z2.abs()).max(z3.abs());
        for j in 0..3 {
            if m >= thresholds[j] {
                counts[j] += 1;
            }
        }
    }
    counts.iter().map(|&c| c as f64 / ndraws as f64).collect()
}
