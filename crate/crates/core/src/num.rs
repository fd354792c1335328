//! Small numerical utilities: univariate distribution functions, a cached
//! chi-square quantile table for the multivariate-t mixing variable, and
//! deterministic RNG substream derivation.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF, FisherSnedecor, Normal, StudentsT};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Standard normal CDF.
pub fn norm_cdf(x: f64) -> f64 {
    static N: OnceLock<Normal> = OnceLock::new();
    N.get_or_init(|| Normal::new(0.0, 1.0).unwrap()).cdf(x)
}

/// Standard normal quantile function.
pub fn norm_quantile(p: f64) -> f64 {
    static N: OnceLock<Normal> = OnceLock::new();
    N.get_or_init(|| Normal::new(0.0, 1.0).unwrap())
        .inverse_cdf(p)
}

/// Standard normal density.
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Two-sided tail probability of |T| > t under a Student t (df > 0) or
/// standard normal (df == 0) reference.
pub fn two_sided_p(t: f64, df: usize) -> f64 {
    let a = t.abs();
    if df == 0 {
        2.0 * norm_cdf(-a)
    } else {
        let d = StudentsT::new(0.0, 1.0, df as f64).unwrap();
        2.0 * d.cdf(-a)
    }
}

/// Upper-tail p-value of an F statistic with (df1, df2) degrees of freedom.
pub fn f_upper_p(f: f64, df1: usize, df2: usize) -> f64 {
    if f <= 0.0 {
        return 1.0;
    }
    let d = FisherSnedecor::new(df1 as f64, df2 as f64).unwrap();
    (1.0 - d.cdf(f)).clamp(0.0, 1.0)
}

/// Grid resolution of the cached chi-square quantile tables.
const CHI2_GRID: usize = 4096;

/// sqrt(chi2_quantile(u, df) / df): the scale-mixture factor that turns a
/// multivariate normal integrand into a multivariate t one.
///
/// Quantiles on a uniform grid are cached per df; interior queries use linear
/// interpolation (error well below the quasi-Monte Carlo error), while the
/// extreme bins fall back to exact inversion so the tails are not distorted.
pub fn t_mix_factor(u: f64, df: usize) -> f64 {
    debug_assert!(df > 0);
    static TABLES: OnceLock<Mutex<HashMap<usize, std::sync::Arc<Vec<f64>>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    let table = {
        let mut guard = tables.lock().unwrap();
        guard
            .entry(df)
            .or_insert_with(|| {
                let dist = ChiSquared::new(df as f64).unwrap();
                let nu = df as f64;
                let v: Vec<f64> = (0..=CHI2_GRID)
                    .map(|i| {
                        let p = i as f64 / CHI2_GRID as f64;
                        if i == 0 {
                            0.0
                        } else if i == CHI2_GRID {
                            f64::INFINITY
                        } else {
                            (dist.inverse_cdf(p) / nu).sqrt()
                        }
                    })
                    .collect();
                std::sync::Arc::new(v)
            })
            .clone()
    };
    let pos = u * CHI2_GRID as f64;
    let idx = pos.floor() as usize;
    if idx == 0 || idx + 1 >= CHI2_GRID {
        // Extreme bins: exact inversion (rare, keeps both tails honest).
        let dist = ChiSquared::new(df as f64).unwrap();
        return (dist.inverse_cdf(u.clamp(1e-16, 1.0 - 1e-16)) / df as f64).sqrt();
    }
    let w = pos - idx as f64;
    table[idx] * (1.0 - w) + table[idx + 1] * w
}

/// Deterministic, well-separated RNG substream for (seed, index, salt).
///
/// Used wherever work is split into independently seeded pieces (simulation
/// replicates, permutation draws, QMC shifts) so that results do not depend
/// on scheduling or worker count.
pub fn substream(seed: u64, index: u64, salt: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    let mut state = seed ^ 0x9e37_79b9_7f4a_7c15;
    for (i, chunk) in key.chunks_exact_mut(8).enumerate() {
        state = splitmix64(
            state
                .wrapping_add(index.wrapping_mul(0xbf58_476d_1ce4_e5b9))
                .wrapping_add(salt.wrapping_mul(0x94d0_49bb_1331_11eb))
                .wrapping_add(i as u64),
        );
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// SplitMix64 mixing step; a standard finalizer with good avalanche behavior.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Order-preserving 64-bit hash fold for deriving integration seeds from
/// call arguments (bit patterns of the inputs), FNV-1a style.
#[derive(Clone, Copy)]
pub struct HashFold(u64);

impl HashFold {
    pub fn new() -> Self {
        HashFold(0xcbf2_9ce4_8422_2325)
    }
    pub fn u64(mut self, v: u64) -> Self {
        for b in v.to_le_bytes() {
            self.0 = (self.0 ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3);
        }
        self
    }
    pub fn f64(self, v: f64) -> Self {
        self.u64(v.to_bits())
    }
    pub fn bytes(mut self, v: &[u8]) -> Self {
        for &b in v {
            self.0 = (self.0 ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3);
        }
        self
    }
    pub fn finish(self) -> u64 {
        self.0
    }
}

/// Average ranks (1-based), ties sharing the mean of their rank range.
pub(crate) fn midranks(y: &[f64]) -> Vec<f64> {
    let n = y.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| y[a].partial_cmp(&y[b]).expect("finite values"));
    let mut ranks = vec![0.0f64; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && y[order[j + 1]] == y[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

impl Default for HashFold {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand_chacha::rand_core::RngCore;

    #[test]
    fn normal_cdf_quantile_round_trip() {
        for &p in &[0.01, 0.2, 0.5, 0.8, 0.975] {
            assert_abs_diff_eq!(norm_cdf(norm_quantile(p)), p, epsilon = 1e-9);
        }
        assert_abs_diff_eq!(norm_cdf(1.959964), 0.975, epsilon = 1e-6);
    }

    #[test]
    fn two_sided_matches_known_values() {
        assert_abs_diff_eq!(two_sided_p(1.959964, 0), 0.05, epsilon = 1e-6);
        // t with 10 df at 2.228139 is the 0.975 quantile
        assert_abs_diff_eq!(two_sided_p(2.228139, 10), 0.05, epsilon = 1e-5);
    }

    #[test]
    fn t_mix_factor_median_is_near_one() {
        // The median of chi2(df)/df tends to 1 as df grows.
        let m = t_mix_factor(0.5, 200);
        assert!((m - 1.0).abs() < 0.01, "median factor {m}");
    }

    #[test]
    fn t_mix_factor_interpolation_matches_exact() {
        let dist = ChiSquared::new(7.0).unwrap();
        for &u in &[0.101, 0.37, 0.62, 0.883] {
            let exact = (dist.inverse_cdf(u) / 7.0).sqrt();
            assert_abs_diff_eq!(t_mix_factor(u, 7), exact, epsilon = 1e-5);
        }
    }

    #[test]
    fn substreams_are_reproducible_and_distinct() {
        let mut a = substream(42, 7, 1);
        let mut b = substream(42, 7, 1);
        let mut c = substream(42, 8, 1);
        let (x, y, z) = (a.next_u64(), b.next_u64(), c.next_u64());
        assert_eq!(x, y);
        assert_ne!(x, z);
    }
}
