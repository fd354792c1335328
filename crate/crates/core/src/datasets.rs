//! Embedded example datasets, stored as (group label, response) rows in
//! their original row order.
//!
//! `F4`: seed counts per plant for a wild-type control and 10 genotype
//! groups (530 rows). `CHOL`: serum cholesterol (mg/dL) for a vehicle
//! control and 5 dose groups, 10 animals each (60 rows).

static F4: &[(&str, f64)] = &[
    ("wt", 57.0),
    ("wt", 53.0),
    ("wt", 52.0),
    ("wt", 55.0),
    ("wt", 57.0),
    ("wt", 52.0),
    ("wt", 60.0),
    ("wt", 54.0),
    ("wt", 60.0),
    ("wt", 56.0),
    ("wt", 55.0),
    ("wt", 55.0),
    ("wt", 53.0),
    ("wt", 51.0),
    ("wt", 52.0),
    ("wt", 51.0),
    ("wt", 55.0),
    ("wt", 51.0),
    ("wt", 54.0),
    ("wt", 54.0),
    ("wt", 49.0),
    ("wt", 53.0),
    ("wt", 50.0),
    ("wt", 51.0),
    ("wt", 50.0),
    ("wt", 50.0),
    ("wt", 51.0),
    ("wt", 50.0),
    ("wt", 50.0),
    ("wt", 58.0),
    ("acr", 30.0),
    ("acr", 22.0),
    ("acr", 25.0),
    ("acr", 28.0),
    ("acr", 26.0),
    ("acr", 25.0),
    ("acr", 22.0),
    ("acr", 29.0),
    ("acr", 30.0),
    ("acr", 26.0),
    ("acr", 27.0),
    ("acr", 29.0),
    ("acr", 26.0),
    ("acr", 32.0),
    ("acr", 31.0),
    ("acr", 27.0),
    ("acr", 28.0),
    ("acr", 28.0),
    ("acr", 23.0),
    ("acr", 33.0),
    ("acr", 30.0),
    ("acr", 33.0),
    ("acr", 30.0),
    ("acr", 27.0),
    ("acr", 31.0),
    ("acr", 22.0),
    ("acr", 38.0),
    ("acr", 28.0),
    ("acr", 31.0),
    ("acr", 22.0),
    ("com", 53.0),
    ("com", 55.0),
    ("com", 59.0),
    ("com", 56.0),
    ("com", 54.0),
    ("com", 55.0),
    ("com", 56.0),
    ("com", 52.0),
    ("com", 52.0),
    ("com", 54.0),
    ("com", 49.0),
    ("com", 52.0),
    ("com", 57.0),
    ("com", 51.0),
    ("com", 51.0),
    ("com", 51.0),
    ("com", 51.0),
    ("com", 49.0),
    ("com", 49.0),
    ("com", 54.0),
    ("com", 51.0),
    ("com", 53.0),
    ("com", 54.0),
    ("com", 56.0),
    ("com", 50.0),
    ("com", 52.0),
    ("com", 53.0),
    ("com", 59.0),
    ("com", 59.0),
    ("com", 55.0),
    ("com", 48.0),
    ("com", 51.0),
    ("com", 53.0),
    ("com", 50.0),
    ("com", 55.0),
    ("com", 55.0),
    ("com", 60.0),
    ("com", 59.0),
    ("com", 51.0),
    ("com", 48.0),
    ("com", 55.0),
    ("com", 52.0),
    ("com", 51.0),
    ("com", 54.0),
    ("com", 52.0),
    ("com", 55.0),
    ("com", 55.0),
    ("com", 56.0),
    ("com", 59.0),
    ("com", 54.0),
    ("com", 52.0),
    ("com", 51.0),
    ("com", 54.0),
    ("com", 51.0),
    ("com", 50.0),
    ("com", 55.0),
    ("com", 54.0),
    ("com", 55.0),
    ("com", 52.0),
    ("com", 48.0),
    ("a", 53.0),
    ("a", 56.0),
    ("a", 57.0),
    ("a", 50.0),
    ("a", 54.0),
    ("a", 54.0),
    ("a", 57.0),
    ("a", 55.0),
    ("a", 55.0),
    ("a", 51.0),
    ("a", 53.0),
    ("a", 48.0),
    ("a", 49.0),
    ("a", 52.0),
    ("a", 53.0),
    ("a", 51.0),
    ("a", 51.0),
    ("a", 51.0),
    ("a", 49.0),
    ("a", 49.0),
    ("a", 49.0),
    ("a", 50.0),
    ("a", 51.0),
    ("a", 53.0),
    ("a", 51.0),
    ("a", 54.0),
    ("a", 50.0),
    ("a", 48.0),
    ("a", 50.0),
    ("a", 48.0),
    ("a", 52.0),
    ("a", 55.0),
    ("a", 51.0),
    ("a", 53.0),
    ("a", 53.0),
    ("a", 53.0),
    ("a", 50.0),
    ("a", 52.0),
    ("a", 55.0),
    ("a", 50.0),
    ("b", 56.0),
    ("b", 49.0),
    ("b", 49.0),
    ("b", 55.0),
    ("b", 54.0),
    ("b", 52.0),
    ("b", 51.0),
    ("b", 52.0),
    ("b", 54.0),
    ("b", 51.0),
    ("b", 51.0),
    ("b", 50.0),
    ("b", 60.0),
    ("b", 52.0),
    ("b", 54.0),
    ("b", 54.0),
    ("b", 54.0),
    ("b", 56.0),
    ("b", 55.0),
    ("b", 59.0),
    ("b", 47.0),
    ("b", 43.0),
    ("b", 45.0),
    ("b", 50.0),
    ("b", 40.0),
    ("b", 48.0),
    ("b", 43.0),
    ("b", 47.0),
    ("b", 48.0),
    ("b", 59.0),
    ("b", 56.0),
    ("b", 50.0),
    ("b", 60.0),
    ("b", 52.0),
    ("b", 52.0),
    ("b", 53.0),
    ("b", 52.0),
    ("b", 49.0),
    ("b", 56.0),
    ("b", 52.0),
    ("c", 52.0),
    ("c", 55.0),
    ("c", 52.0),
    ("c", 50.0),
    ("c", 53.0),
    ("c", 48.0),
    ("c", 51.0),
    ("c", 49.0),
    ("c", 53.0),
    ("c", 53.0),
    ("c", 51.0),
    ("c", 53.0),
    ("c", 54.0),
    ("c", 45.0),
    ("c", 51.0),
    ("c", 52.0),
    ("c", 55.0),
    ("c", 51.0),
    ("c", 53.0),
    ("c", 58.0),
    ("c", 50.0),
    ("c", 52.0),
    ("c", 55.0),
    ("c", 52.0),
    ("c", 49.0),
    ("c", 49.0),
    ("c", 53.0),
    ("c", 51.0),
    ("c", 52.0),
    ("c", 53.0),
    ("c", 53.0),
    ("c", 57.0),
    ("c", 48.0),
    ("c", 58.0),
    ("c", 52.0),
    ("c", 44.0),
    ("c", 55.0),
    ("c", 58.0),
    ("c", 59.0),
    ("c", 54.0),
    ("c", 56.0),
    ("c", 56.0),
    ("c", 53.0),
    ("c", 48.0),
    ("c", 51.0),
    ("c", 60.0),
    ("c", 53.0),
    ("c", 56.0),
    ("c", 50.0),
    ("c", 49.0),
    ("c", 56.0),
    ("c", 57.0),
    ("c", 51.0),
    ("c", 54.0),
    ("c", 54.0),
    ("c", 54.0),
    ("c", 50.0),
    ("c", 54.0),
    ("c", 53.0),
    ("c", 59.0),
    ("d", 54.0),
    ("d", 54.0),
    ("d", 53.0),
    ("d", 53.0),
    ("d", 53.0),
    ("d", 51.0),
    ("d", 54.0),
    ("d", 52.0),
    ("d", 53.0),
    ("d", 53.0),
    ("d", 39.0),
    ("d", 36.0),
    ("d", 38.0),
    ("d", 48.0),
    ("d", 36.0),
    ("d", 36.0),
    ("d", 34.0),
    ("d", 41.0),
    ("d", 39.0),
    ("d", 40.0),
    ("d", 51.0),
    ("d", 51.0),
    ("d", 54.0),
    ("d", 51.0),
    ("d", 54.0),
    ("d", 52.0),
    ("d", 49.0),
    ("d", 54.0),
    ("d", 54.0),
    ("d", 53.0),
    ("d", 49.0),
    ("d", 48.0),
    ("d", 53.0),
    ("d", 51.0),
    ("d", 53.0),
    ("d", 54.0),
    ("d", 51.0),
    ("d", 48.0),
    ("d", 53.0),
    ("d", 54.0),
    ("e", 50.0),
    ("e", 50.0),
    ("e", 53.0),
    ("e", 57.0),
    ("e", 53.0),
    ("e", 56.0),
    ("e", 50.0),
    ("e", 50.0),
    ("e", 54.0),
    ("e", 53.0),
    ("e", 56.0),
    ("e", 53.0),
    ("e", 53.0),
    ("e", 54.0),
    ("e", 60.0),
    ("e", 57.0),
    ("e", 60.0),
    ("e", 51.0),
    ("e", 52.0),
    ("e", 58.0),
    ("e", 49.0),
    ("e", 50.0),
    ("e", 51.0),
    ("e", 50.0),
    ("e", 53.0),
    ("e", 58.0),
    ("e", 50.0),
    ("e", 53.0),
    ("e", 50.0),
    ("e", 54.0),
    ("e", 58.0),
    ("e", 59.0),
    ("e", 53.0),
    ("e", 58.0),
    ("e", 55.0),
    ("e", 54.0),
    ("e", 50.0),
    ("e", 49.0),
    ("e", 51.0),
    ("e", 56.0),
    ("e", 57.0),
    ("e", 50.0),
    ("e", 52.0),
    ("e", 50.0),
    ("e", 49.0),
    ("e", 47.0),
    ("e", 51.0),
    ("e", 52.0),
    ("e", 49.0),
    ("e", 50.0),
    ("f", 37.0),
    ("f", 34.0),
    ("f", 34.0),
    ("f", 39.0),
    ("f", 36.0),
    ("f", 39.0),
    ("f", 35.0),
    ("f", 40.0),
    ("f", 42.0),
    ("f", 37.0),
    ("f", 50.0),
    ("f", 48.0),
    ("f", 50.0),
    ("f", 59.0),
    ("f", 49.0),
    ("f", 51.0),
    ("f", 59.0),
    ("f", 52.0),
    ("f", 50.0),
    ("f", 53.0),
    ("f", 51.0),
    ("f", 47.0),
    ("f", 50.0),
    ("f", 51.0),
    ("f", 51.0),
    ("f", 48.0),
    ("f", 53.0),
    ("f", 56.0),
    ("f", 49.0),
    ("f", 55.0),
    ("f", 48.0),
    ("f", 49.0),
    ("f", 50.0),
    ("f", 50.0),
    ("f", 52.0),
    ("f", 57.0),
    ("f", 54.0),
    ("f", 53.0),
    ("f", 49.0),
    ("f", 53.0),
    ("f", 55.0),
    ("f", 53.0),
    ("f", 50.0),
    ("f", 51.0),
    ("f", 51.0),
    ("f", 52.0),
    ("f", 50.0),
    ("f", 50.0),
    ("f", 49.0),
    ("f", 50.0),
    ("f", 38.0),
    ("f", 41.0),
    ("f", 49.0),
    ("f", 44.0),
    ("f", 33.0),
    ("f", 42.0),
    ("f", 37.0),
    ("f", 38.0),
    ("f", 39.0),
    ("f", 33.0),
    ("g", 49.0),
    ("g", 53.0),
    ("g", 55.0),
    ("g", 50.0),
    ("g", 52.0),
    ("g", 48.0),
    ("g", 48.0),
    ("g", 53.0),
    ("g", 53.0),
    ("g", 56.0),
    ("g", 50.0),
    ("g", 50.0),
    ("g", 53.0),
    ("g", 48.0),
    ("g", 48.0),
    ("g", 46.0),
    ("g", 44.0),
    ("g", 51.0),
    ("g", 50.0),
    ("g", 47.0),
    ("g", 46.0),
    ("g", 42.0),
    ("g", 44.0),
    ("g", 42.0),
    ("g", 50.0),
    ("g", 51.0),
    ("g", 49.0),
    ("g", 46.0),
    ("g", 47.0),
    ("g", 46.0),
    ("g", 46.0),
    ("g", 50.0),
    ("g", 49.0),
    ("g", 44.0),
    ("g", 43.0),
    ("g", 44.0),
    ("g", 46.0),
    ("g", 45.0),
    ("g", 50.0),
    ("g", 40.0),
    ("g", 59.0),
    ("g", 55.0),
    ("g", 53.0),
    ("g", 52.0),
    ("g", 53.0),
    ("g", 53.0),
    ("g", 53.0),
    ("g", 56.0),
    ("g", 58.0),
    ("g", 55.0),
    ("g", 45.0),
    ("g", 51.0),
    ("g", 49.0),
    ("g", 46.0),
    ("g", 47.0),
    ("g", 47.0),
    ("g", 52.0),
    ("g", 52.0),
    ("g", 51.0),
    ("g", 49.0),
    ("h", 53.0),
    ("h", 54.0),
    ("h", 56.0),
    ("h", 60.0),
    ("h", 54.0),
    ("h", 57.0),
    ("h", 51.0),
    ("h", 49.0),
    ("h", 59.0),
    ("h", 60.0),
    ("h", 54.0),
    ("h", 51.0),
    ("h", 54.0),
    ("h", 49.0),
    ("h", 54.0),
    ("h", 52.0),
    ("h", 53.0),
    ("h", 52.0),
    ("h", 53.0),
    ("h", 59.0),
    ("h", 54.0),
    ("h", 53.0),
    ("h", 51.0),
    ("h", 50.0),
    ("h", 56.0),
    ("h", 56.0),
    ("h", 55.0),
    ("h", 60.0),
    ("h", 52.0),
    ("h", 54.0),
    ("h", 48.0),
    ("h", 51.0),
    ("h", 47.0),
    ("h", 48.0),
    ("h", 46.0),
    ("h", 49.0),
    ("h", 49.0),
    ("h", 49.0),
    ("h", 55.0),
    ("h", 51.0),
    ("h", 52.0),
    ("h", 56.0),
    ("h", 51.0),
    ("h", 50.0),
    ("h", 53.0),
    ("h", 52.0),
    ("h", 53.0),
    ("h", 59.0),
    ("h", 49.0),
    ("h", 51.0),
    ("h", 45.0),
    ("h", 49.0),
    ("h", 53.0),
    ("h", 47.0),
    ("h", 42.0),
    ("h", 46.0),
    ("h", 44.0),
    ("h", 50.0),
    ("h", 47.0),
    ("h", 49.0),
];

static CHOL: &[(&str, f64)] = &[
    ("0", 102.0),
    ("0", 100.0),
    ("0", 106.0),
    ("0", 95.0),
    ("0", 96.0),
    ("0", 80.0),
    ("0", 96.0),
    ("0", 88.0),
    ("0", 95.0),
    ("0", 93.0),
    ("62.5", 126.0),
    ("62.5", 127.0),
    ("62.5", 103.0),
    ("62.5", 112.0),
    ("62.5", 122.0),
    ("62.5", 107.0),
    ("62.5", 117.0),
    ("62.5", 102.0),
    ("62.5", 98.0),
    ("62.5", 97.0),
    ("125", 97.0),
    ("125", 101.0),
    ("125", 99.0),
    ("125", 83.0),
    ("125", 89.0),
    ("125", 97.0),
    ("125", 97.0),
    ("125", 96.0),
    ("125", 91.0),
    ("125", 90.0),
    ("250", 87.0),
    ("250", 93.0),
    ("250", 75.0),
    ("250", 84.0),
    ("250", 97.0),
    ("250", 83.0),
    ("250", 88.0),
    ("250", 79.0),
    ("250", 85.0),
    ("250", 95.0),
    ("500", 89.0),
    ("500", 93.0),
    ("500", 86.0),
    ("500", 83.0),
    ("500", 76.0),
    ("500", 79.0),
    ("500", 73.0),
    ("500", 91.0),
    ("500", 74.0),
    ("500", 90.0),
    ("1000", 83.0),
    ("1000", 86.0),
    ("1000", 84.0),
    ("1000", 84.0),
    ("1000", 81.0),
    ("1000", 64.0),
    ("1000", 75.0),
    ("1000", 70.0),
    ("1000", 75.0),
    ("1000", 86.0),
];

fn unzip(rows: &[(&str, f64)]) -> (Vec<String>, Vec<f64>) {
    rows.iter().map(|&(g, y)| (g.to_string(), y)).unzip()
}

/// Group labels and responses of the seed-count dataset.
pub(crate) fn f4_rows() -> (Vec<String>, Vec<f64>) {
    unzip(F4)
}

/// Group labels and responses of the cholesterol dataset.
pub(crate) fn chol_rows() -> (Vec<String>, Vec<f64>) {
    unzip(CHOL)
}
