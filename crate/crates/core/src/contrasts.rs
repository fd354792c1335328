//! Many-to-one (Dunnett-type) contrast families and the selector used to
//! read group-shift coefficients out of a transformation-model fit.

use nalgebra::DMatrix;

/// A family of linear contrasts on a coefficient vector, with one label per
/// comparison.
#[derive(Debug, Clone)]
pub struct ContrastFamily {
    matrix: DMatrix<f64>,
    labels: Vec<String>,
}

impl ContrastFamily {
    /// Builds a family from an explicit matrix and labels. Panics if the row
    /// count and label count disagree — callers construct these statically.
    pub fn new(matrix: DMatrix<f64>, labels: Vec<String>) -> Self {
        assert_eq!(matrix.nrows(), labels.len(), "one label per contrast row");
        assert!(
            (0..matrix.nrows()).all(|i| matrix.row(i).iter().any(|&v| v != 0.0)),
            "contrast rows must be nonzero"
        );
        ContrastFamily { matrix, labels }
    }

    /// The q×p contrast matrix.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Comparison labels, one per row.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Number of comparisons.
    pub fn n_comparisons(&self) -> usize {
        self.matrix.nrows()
    }

    /// Stacks two families block-diagonally, concatenating labels. Used to
    /// test several endpoints jointly.
    pub fn block_diag(&self, other: &ContrastFamily) -> ContrastFamily {
        let (q1, p1) = self.matrix.shape();
        let (q2, p2) = other.matrix.shape();
        let mut m = DMatrix::zeros(q1 + q2, p1 + p2);
        m.view_mut((0, 0), (q1, p1)).copy_from(&self.matrix);
        m.view_mut((q1, p1), (q2, p2)).copy_from(&other.matrix);
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        ContrastFamily { matrix: m, labels }
    }

    /// Returns a copy with every label passed through `f`.
    pub fn relabel(&self, f: impl Fn(&str) -> String) -> ContrastFamily {
        ContrastFamily {
            matrix: self.matrix.clone(),
            labels: self.labels.iter().map(|l| f(l)).collect(),
        }
    }
}

/// Formats the standard comparison label "treatment - control".
fn comparison_label(treatment: &str, control: &str) -> String {
    format!("{treatment} - {control}")
}

/// Dunnett contrasts for coefficients in treatment coding: the k×(k+1)
/// selector [0 | I], because coefficient j ≥ 1 already *is* the difference
/// treatment j minus control.
pub fn dunnett_contrasts(treatments: &[String], control: &str) -> ContrastFamily {
    let k = treatments.len();
    assert!(k >= 1, "need at least one treatment");
    let mut m = DMatrix::zeros(k, k + 1);
    for j in 0..k {
        m[(j, j + 1)] = 1.0;
    }
    let labels = treatments
        .iter()
        .map(|t| comparison_label(t, control))
        .collect();
    ContrastFamily::new(m, labels)
}

/// Dunnett contrasts on the cell-means parametrization (one coefficient per
/// group, control first): row j is −1 at the control and +1 at treatment j.
/// Encodes the same comparisons as [`dunnett_contrasts`], but acts on group
/// means / one-hot indicators instead of treatment-coded coefficients.
pub fn dunnett_contrasts_cell_means(treatments: &[String], control: &str) -> ContrastFamily {
    let k = treatments.len();
    assert!(k >= 1, "need at least one treatment");
    let mut m = DMatrix::zeros(k, k + 1);
    for j in 0..k {
        m[(j, 0)] = -1.0;
        m[(j, j + 1)] = 1.0;
    }
    let labels = treatments
        .iter()
        .map(|t| comparison_label(t, control))
        .collect();
    ContrastFamily::new(m, labels)
}

/// Selector for the group-shift coefficients of a transformation-model fit:
/// identity on the (n_basis + n_shift)-vector with the first n_basis rows
/// dropped, so row j picks shift coefficient j.
pub fn mlt_selector(n_basis: usize, shift_labels: &[String], control: &str) -> ContrastFamily {
    let n_shift = shift_labels.len();
    assert!(n_shift >= 1, "need at least one shift coefficient");
    let mut m = DMatrix::zeros(n_shift, n_basis + n_shift);
    for j in 0..n_shift {
        m[(j, n_basis + j)] = 1.0;
    }
    let labels = shift_labels
        .iter()
        .map(|t| comparison_label(t, control))
        .collect();
    ContrastFamily::new(m, labels)
}
