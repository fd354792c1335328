//! Rendering of test results and simulation rates as aligned text tables or
//! CSV.
//!
//! Text output prints p-values to four decimals with a display floor of
//! `0.0001`; CSV output carries full `f64` precision (shortest
//! round-tripping decimal form), so parsing an emitted file reproduces the
//! in-memory values exactly.

use crate::lepage::PermutationResult;
use crate::maxt::MaxTResult;
use crate::sim::ScenarioResult;
use std::cmp::Ordering;
use std::fmt::Write as _;

/// P-value for display: four decimals, floored at `0.0001`.
pub fn format_p(p: f64) -> String {
    if p < 0.0001 {
        "0.0001".to_string()
    } else {
        format!("{p:.4}")
    }
}

/// Sorts labels numerically where both parse as numbers (dose levels like
/// `62.5`, `125`, `1000`) and lexicographically otherwise, matching the row
/// order of the published data tables.
pub fn numeric_aware_sort(labels: &mut [String]) {
    labels.sort_by(|a, b| match (a.parse::<f64>(), b.parse::<f64>()) {
        (Ok(x), Ok(y)) => x.partial_cmp(&y).unwrap_or(Ordering::Equal),
        _ => a.cmp(b),
    });
}

/// One procedure column of a combined analysis table: a name and one
/// optional p-value per row (absent where the procedure has no statistic
/// for that row).
#[derive(Debug, Clone)]
pub struct AnalysisColumn {
    pub name: String,
    pub cells: Vec<Option<f64>>,
}

fn pad_left(s: &str, width: usize) -> String {
    format!("{s:>width$}")
}

fn pad_right(s: &str, width: usize) -> String {
    format!("{s:<width$}")
}

/// Renders the combined comparisons-by-procedures grid as an aligned text
/// table, with `-` marking cells a procedure does not produce.
pub fn analysis_text(rows: &[String], columns: &[AnalysisColumn]) -> String {
    for c in columns {
        assert_eq!(
            c.cells.len(),
            rows.len(),
            "column {} length mismatch",
            c.name
        );
    }
    let label_width = rows
        .iter()
        .map(|r| r.len())
        .chain(["comparison".len()])
        .max()
        .unwrap_or(0);
    let col_widths: Vec<usize> = columns.iter().map(|c| c.name.len().max(6)).collect();
    let mut out = String::new();
    out.push_str(&pad_right("comparison", label_width));
    for (c, w) in columns.iter().zip(&col_widths) {
        let _ = write!(out, "  {}", pad_left(&c.name, *w));
    }
    out.push('\n');
    for (i, row) in rows.iter().enumerate() {
        out.push_str(&pad_right(row, label_width));
        for (c, w) in columns.iter().zip(&col_widths) {
            let cell = match c.cells[i] {
                Some(p) => format_p(p),
                None => "-".to_string(),
            };
            let _ = write!(out, "  {}", pad_left(&cell, *w));
        }
        out.push('\n');
    }
    out
}

/// CSV form of the combined grid: full-precision values, empty cells where
/// a procedure has no statistic.
pub fn analysis_csv(rows: &[String], columns: &[AnalysisColumn]) -> String {
    let mut out = String::from("comparison");
    for c in columns {
        let _ = write!(out, ",{}", c.name);
    }
    out.push('\n');
    for (i, row) in rows.iter().enumerate() {
        out.push_str(row);
        for c in columns {
            match c.cells[i] {
                Some(p) => {
                    let _ = write!(out, ",{p}");
                }
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

/// Aligned text table for a max-T result: estimates, standard errors,
/// statistics, adjusted p-values, and simultaneous confidence bounds, with
/// a reference-distribution footer.
pub fn maxt_text(r: &MaxTResult) -> String {
    let label_width = r
        .labels
        .iter()
        .map(|l| l.len())
        .chain(["comparison".len()])
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{}  {:>10}  {:>10}  {:>8}  {:>6}  {:>10}  {:>10}",
        pad_right("comparison", label_width),
        "estimate",
        "std.err",
        "t",
        "adj p",
        "lower",
        "upper"
    );
    for j in 0..r.labels.len() {
        let mark = if r.degenerate[j] { " *" } else { "" };
        let _ = writeln!(
            out,
            "{}  {:>10.4}  {:>10.4}  {:>8.3}  {:>6}  {:>10.4}  {:>10.4}{}",
            pad_right(&r.labels[j], label_width),
            r.estimates[j],
            r.std_errors[j],
            r.statistics[j],
            format_p(r.adj_p[j]),
            r.sci_lower[j],
            r.sci_upper[j],
            mark
        );
    }
    let reference = if r.df == 0 {
        "normal reference".to_string()
    } else {
        format!("t reference, {} df", r.df)
    };
    let _ = writeln!(
        out,
        "alpha {}, critical value {:.4}, {}",
        r.alpha, r.critical_value, reference
    );
    if r.degenerate.iter().any(|&d| d) {
        let _ = writeln!(out, "* degenerate comparison, excluded from the family");
    }
    out
}

/// CSV form of a max-T result, one row per comparison, full precision.
pub fn maxt_csv(r: &MaxTResult) -> String {
    let mut out = String::from(
        "comparison,estimate,std_error,statistic,adj_p,sci_lower,sci_upper,critical_value,df,alpha,degenerate\n",
    );
    for j in 0..r.labels.len() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.labels[j],
            r.estimates[j],
            r.std_errors[j],
            r.statistics[j],
            r.adj_p[j],
            r.sci_lower[j],
            r.sci_upper[j],
            r.critical_value,
            r.df,
            r.alpha,
            r.degenerate[j]
        );
    }
    out
}

/// Aligned text table for a permutation test result.
pub fn permutation_text(r: &PermutationResult) -> String {
    let label_width = r
        .labels
        .iter()
        .map(|l| l.len())
        .chain(["comparison".len()])
        .max()
        .unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{}  {:>8}  {:>6}",
        pad_right("comparison", label_width),
        "z",
        "adj p"
    );
    for j in 0..r.labels.len() {
        let mark = if r.degenerate[j] { " *" } else { "" };
        let _ = writeln!(
            out,
            "{}  {:>8.3}  {:>6}{}",
            pad_right(&r.labels[j], label_width),
            r.statistics[j],
            format_p(r.adj_p[j]),
            mark
        );
    }
    if r.exact {
        let _ = writeln!(out, "exact enumeration of {} assignments", r.nresample);
    } else {
        let _ = writeln!(out, "{} random permutations, seed {}", r.nresample, r.seed);
    }
    if r.degenerate.iter().any(|&d| d) {
        let _ = writeln!(out, "* degenerate statistic (zero conditional variance)");
    }
    out
}

/// CSV form of a permutation test result, full precision.
pub fn permutation_csv(r: &PermutationResult) -> String {
    let mut out = String::from("comparison,statistic,adj_p,nresample,exact,degenerate\n");
    for j in 0..r.labels.len() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.labels[j], r.statistics[j], r.adj_p[j], r.nresample, r.exact, r.degenerate[j]
        );
    }
    out
}

fn join_usize(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn join_f64(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{x}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// Text table of simulation rates: one line per scenario with
/// `rate (mc_se)` per test, plus failure footnotes where replicates were
/// excluded.
pub fn sim_text(ids: &[String], results: &[ScenarioResult]) -> String {
    assert_eq!(ids.len(), results.len());
    let id_width = ids
        .iter()
        .map(|s| s.len())
        .chain(["scenario".len()])
        .max()
        .unwrap_or(0);
    let tests: Vec<String> = results
        .first()
        .map(|r| r.tests.iter().map(|t| t.to_string()).collect())
        .unwrap_or_default();
    let cell_width = 14usize;
    let mut out = String::new();
    out.push_str(&pad_right("scenario", id_width));
    for t in &tests {
        let _ = write!(out, "  {}", pad_left(t, cell_width));
    }
    out.push('\n');
    let mut footnotes = Vec::new();
    for (id, res) in ids.iter().zip(results) {
        out.push_str(&pad_right(id, id_width));
        for ((rate, se), test) in res.rates.iter().zip(&res.mc_se).zip(&res.tests) {
            let cell = format!("{rate:.3} ({se:.4})");
            let _ = write!(out, "  {}", pad_left(&cell, cell_width));
            let _ = test;
        }
        out.push('\n');
        for (test, failed) in res.tests.iter().zip(&res.failures) {
            if *failed > 0 {
                footnotes.push(format!(
                    "{id}: {test} failed on {failed} of {} replicates (excluded)",
                    res.scenario.nsim
                ));
            }
        }
    }
    for f in footnotes {
        let _ = writeln!(out, "note: {f}");
    }
    out
}

/// Long-format CSV of simulation rates: one row per (scenario, test), full
/// precision, with the scenario parameters echoed.
pub fn sim_csv(ids: &[String], results: &[ScenarioResult]) -> String {
    assert_eq!(ids.len(), results.len());
    let mut out = String::from("scenario,test,rate,mc_se,failures,nsim,alpha,seed,n,mu,sd\n");
    for (id, res) in ids.iter().zip(results) {
        let sc = &res.scenario;
        for (((test, rate), se), failed) in res
            .tests
            .iter()
            .zip(&res.rates)
            .zip(&res.mc_se)
            .zip(&res.failures)
        {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},\"{}\",\"{}\",\"{}\"",
                id,
                test,
                rate,
                se,
                failed,
                sc.nsim,
                sc.alpha,
                sc.seed,
                join_usize(&sc.n),
                join_f64(&sc.mu),
                join_f64(&sc.sd)
            );
        }
    }
    out
}
