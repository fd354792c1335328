//! Bernstein polynomial basis on a closed support interval, with linear
//! extrapolation beyond it.

/// Bernstein basis of a given order on the support `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernsteinBasis {
    order: usize,
    support: (f64, f64),
}

impl BernsteinBasis {
    /// Basis of `order` (M) on `[a, b]`; has M + 1 functions.
    pub fn new(order: usize, support: (f64, f64)) -> Self {
        assert!(order >= 1, "order must be at least 1");
        assert!(
            support.0 < support.1,
            "support must be a proper interval, got [{}, {}]",
            support.0,
            support.1
        );
        BernsteinBasis { order, support }
    }

    /// Polynomial order M.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Support interval `[a, b]`.
    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    /// Number of basis functions, M + 1.
    pub fn len(&self) -> usize {
        self.order + 1
    }

    /// Never empty (order ≥ 1 means at least two functions).
    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Evaluates all basis functions and their derivatives at `y`.
///
/// Inside the support, b_j(ỹ) = C(M,j)·ỹ^j·(1−ỹ)^{M−j} with
/// ỹ = (y−a)/(b−a); the derivative comes from the degree-reduction identity
/// b'_j = M·(b_{j−1,M−1} − b_{j,M−1})/(b−a). Outside the support the basis
/// is extended linearly, matching value and slope at the nearer boundary, so
/// a monotone coefficient vector keeps the combination monotone (and its
/// derivative positive) for tail observations beyond the support quantiles.
pub fn bernstein_eval(basis: &BernsteinBasis, y: f64) -> (Vec<f64>, Vec<f64>) {
    let (a, b) = basis.support;
    let clipped = y.clamp(a, b);
    let u = (clipped - a) / (b - a);
    let m = basis.order;

    let values_at = raw_values(m, u);
    // degree reduction: b'_j(u) = M·(b_{j-1,M-1}(u) − b_{j,M-1}(u)), then
    // the chain-rule factor for the affine map to [a, b]
    let lower = raw_values(m - 1, u);
    let scale = m as f64 / (b - a);
    let mut derivs = vec![0.0f64; m + 1];
    for j in 0..=m {
        let left = if j >= 1 { lower[j - 1] } else { 0.0 };
        let right = if j < m { lower[j] } else { 0.0 };
        derivs[j] = scale * (left - right);
    }

    if y == clipped {
        (values_at, derivs)
    } else {
        // linear continuation: value + (y − boundary)·slope, slope constant
        let mut values = values_at;
        for j in 0..=m {
            values[j] += (y - clipped) * derivs[j];
        }
        (values, derivs)
    }
}

/// Bernstein values of order `m` at `u` ∈ [0, 1], by the stable recurrence.
fn raw_values(m: usize, u: f64) -> Vec<f64> {
    let mut vals = vec![0.0f64; m + 1];
    vals[0] = 1.0;
    for degree in 1..=m {
        // in-place de Casteljau-style update, highest index first
        vals[degree] = vals[degree - 1] * u;
        for j in (1..degree).rev() {
            vals[j] = vals[j] * (1.0 - u) + vals[j - 1] * u;
        }
        vals[0] *= 1.0 - u;
    }
    vals
}
