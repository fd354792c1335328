//! Grouped univariate data: the container shared by every test in the crate,
//! CSV ingestion, the two embedded example datasets, and the
//! absolute-deviation (Levene) endpoint transformation.

use crate::datasets;
use crate::error::{DataError, Result};
use std::path::Path;

/// Grouped responses with a designated control level.
///
/// Level 0 is always the control; the remaining levels keep the order of
/// first appearance in the input. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Dataset {
    name: String,
    levels: Vec<String>,
    group_idx: Vec<usize>,
    response: Vec<f64>,
}

impl Dataset {
    /// Builds a dataset from parallel group/response columns.
    ///
    /// `control` must occur among the groups; it becomes level 0. Requires at
    /// least two levels, at least two observations per level, and finite
    /// responses.
    pub fn new(
        name: impl Into<String>,
        groups: &[String],
        responses: &[f64],
        control: &str,
    ) -> Result<Self> {
        if groups.len() != responses.len() {
            return Err(DataError::LengthMismatch {
                groups: groups.len(),
                responses: responses.len(),
            }
            .into());
        }
        if !groups.iter().any(|g| g == control) {
            return Err(DataError::ControlAbsent(control.to_string()).into());
        }
        let mut levels: Vec<String> = vec![control.to_string()];
        for g in groups {
            if !levels.iter().any(|l| l == g) {
                levels.push(g.clone());
            }
        }
        if levels.len() < 2 {
            return Err(DataError::TooFewGroups(levels.len()).into());
        }
        let group_idx: Vec<usize> = groups
            .iter()
            .map(|g| levels.iter().position(|l| l == g).unwrap())
            .collect();
        for (row, &y) in responses.iter().enumerate() {
            if !y.is_finite() {
                return Err(DataError::NonFinite { row: row + 1 }.into());
            }
        }
        let ds = Dataset {
            name: name.into(),
            levels,
            group_idx,
            response: responses.to_vec(),
        };
        for (i, level) in ds.levels.iter().enumerate() {
            let n = ds.group_idx.iter().filter(|&&g| g == i).count();
            if n < 2 {
                return Err(DataError::GroupTooSmall {
                    level: level.clone(),
                    n,
                }
                .into());
            }
        }
        Ok(ds)
    }

    /// Dataset name (used in report headers).
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Group levels, control first.
    pub fn levels(&self) -> &[String] {
        &self.levels
    }

    /// Control level label.
    pub fn control(&self) -> &str {
        &self.levels[0]
    }

    /// Treatment level labels (everything but the control), in storage order.
    pub fn treatments(&self) -> &[String] {
        &self.levels[1..]
    }

    /// Per-observation level index.
    pub fn group_indices(&self) -> &[usize] {
        &self.group_idx
    }

    /// Responses in input order.
    pub fn responses(&self) -> &[f64] {
        &self.response
    }

    /// Total number of observations.
    pub fn n(&self) -> usize {
        self.response.len()
    }

    /// Number of treatment groups (levels minus the control).
    pub fn n_treatments(&self) -> usize {
        self.levels.len() - 1
    }

    /// Observation counts per level, control first.
    pub fn group_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.levels.len()];
        for &g in &self.group_idx {
            sizes[g] += 1;
        }
        sizes
    }

    /// Responses belonging to one level.
    pub fn group_values(&self, level_index: usize) -> Vec<f64> {
        self.group_idx
            .iter()
            .zip(&self.response)
            .filter(|(&g, _)| g == level_index)
            .map(|(_, &y)| y)
            .collect()
    }
}

/// Loads a dataset from a CSV file with a header row.
///
/// `group_col` and `response_col` name the columns to use; `control_level`
/// selects the reference group. Rows are reported 1-based in errors
/// (excluding the header).
pub fn load_csv(
    path: impl AsRef<Path>,
    group_col: &str,
    response_col: &str,
    control_level: &str,
) -> Result<Dataset> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path).map_err(|e| match e.kind() {
        csv::ErrorKind::Io(_) => {
            if let csv::ErrorKind::Io(io) = e.into_kind() {
                DataError::Io {
                    path: path.display().to_string(),
                    source: io,
                }
            } else {
                unreachable!()
            }
        }
        _ => DataError::Csv(e),
    })?;
    let headers = reader.headers().map_err(DataError::Csv)?.clone();
    let gi = headers
        .iter()
        .position(|h| h == group_col)
        .ok_or_else(|| DataError::MissingColumn(group_col.to_string()))?;
    let ri = headers
        .iter()
        .position(|h| h == response_col)
        .ok_or_else(|| DataError::MissingColumn(response_col.to_string()))?;
    let mut groups = Vec::new();
    let mut responses = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(DataError::Csv)?;
        let g = record.get(gi).unwrap_or("").to_string();
        let raw = record.get(ri).unwrap_or("").trim();
        let y: f64 = raw.parse().map_err(|_| DataError::BadNumber {
            row: row + 1,
            value: raw.to_string(),
        })?;
        groups.push(g);
        responses.push(y);
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".to_string());
    Dataset::new(name, &groups, &responses, control_level)
}

/// Returns one of the embedded example datasets by name.
///
/// `"F4"`: seed counts for 10 genotype groups plus wild-type control
/// (530 plants). `"CHOL"`: serum cholesterol for 5 dose groups plus vehicle
/// control (60 animals).
pub fn builtin_dataset(name: &str) -> Result<Dataset> {
    match name {
        "F4" => {
            let (groups, responses) = datasets::f4_rows();
            Dataset::new("F4", &groups, &responses, "wt")
        }
        "CHOL" => {
            let (groups, responses) = datasets::chol_rows();
            Dataset::new("CHOL", &groups, &responses, "0")
        }
        other => Err(DataError::UnknownDataset(other.to_string()).into()),
    }
}

/// Names of the embedded datasets, with (observations, levels) counts.
pub fn builtin_names() -> Vec<(&'static str, usize, usize)> {
    let mut out = Vec::new();
    for name in ["F4", "CHOL"] {
        let ds = builtin_dataset(name).expect("embedded dataset is valid");
        out.push((name, ds.n(), ds.levels().len()));
    }
    out
}

/// Replaces each response by its absolute deviation from the group median:
/// |y - median(group)|. Turns scale differences into location differences,
/// which is how every scale test in this crate sees the data.
///
/// Medians use the mid-value convention (mean of the two central order
/// statistics for even group sizes).
pub fn levene_transform(ds: &Dataset) -> Dataset {
    let medians: Vec<f64> = (0..ds.levels.len())
        .map(|g| median(&ds.group_values(g)))
        .collect();
    let response = ds
        .group_idx
        .iter()
        .zip(&ds.response)
        .map(|(&g, &y)| (y - medians[g]).abs())
        .collect();
    Dataset {
        name: ds.name.clone(),
        levels: ds.levels.clone(),
        group_idx: ds.group_idx.clone(),
        response,
    }
}

/// Sample median with the mid-value convention for even counts.
fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
