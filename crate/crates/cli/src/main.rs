//! `locscale`: many-to-one comparisons against a control that detect
//! location effects, scale effects, or both, plus a Monte Carlo harness for
//! error-rate and power studies.

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use locscale::maxt::DfMode;
use locscale::report::{self, AnalysisColumn};
use locscale::{Components, Dataset, QmcConfig, SimulationScenario, TestId};
use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "locscale",
    version,
    about = "Dunnett-type tests for location and scale effects, with simulation tools",
    propagate_version = true
)]
struct Cli {
    /// Worker threads for simulations (0 = one per CPU).
    #[arg(long, global = true, env = "LOCSCALE_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run test procedures on a dataset and print adjusted p-values.
    Analyze(AnalyzeArgs),
    /// Estimate rejection rates for simulated group configurations.
    Simulate(SimulateArgs),
    /// List the embedded example datasets.
    Datasets,
}

#[derive(Args)]
#[command(group = ArgGroup::new("input").required(true).args(["dataset", "csv"]))]
struct AnalyzeArgs {
    /// Embedded dataset name (see `locscale datasets`).
    #[arg(long)]
    dataset: Option<String>,

    /// CSV file with a header row (requires --control).
    #[arg(long)]
    csv: Option<PathBuf>,

    /// Column holding the group labels.
    #[arg(long, default_value = "group")]
    group_col: String,

    /// Column holding the numeric response.
    #[arg(long, default_value = "response")]
    response_col: String,

    /// Control group level (for --csv input).
    #[arg(long)]
    control: Option<String>,

    /// Comma-separated procedures: location, scale, mmm, mlt, sandwich,
    /// lepage, levene.
    #[arg(long, value_delimiter = ',', default_value = "location")]
    procedures: Vec<Procedure>,

    /// Significance level for the confidence intervals.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,

    /// Seed for integration shifts and permutations.
    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Reference distribution for the scale test.
    #[arg(long, value_enum, default_value_t = DfRef::Asymptotic)]
    df: DfRef,

    /// Permutations for the lepage procedure.
    #[arg(long, default_value_t = 10000)]
    nresample: usize,

    /// Also print each procedure's full table (estimates, intervals).
    #[arg(long)]
    detail: bool,

    #[arg(long, value_enum, default_value_t = Output::Text)]
    output: Output,
}

#[derive(Args)]
#[command(group = ArgGroup::new("source").required(true).args(["row", "all", "scenario"]))]
struct SimulateArgs {
    /// Built-in scenario row id (repeatable; see the scenario grid).
    #[arg(long)]
    row: Vec<String>,

    /// Run every row of the built-in scenario grid.
    #[arg(long)]
    all: bool,

    /// Scenario file (TOML: n, mu, sd, alpha, nsim, seed, tests,
    /// lepage_nresample).
    #[arg(long)]
    scenario: Option<PathBuf>,

    /// Replicates (overrides the scenario file's value).
    #[arg(long)]
    nsim: Option<usize>,

    /// Master seed (overrides the scenario file's value).
    #[arg(long)]
    seed: Option<u64>,

    /// Comma-separated test subset (e.g. MMM,DUN,sDUN); default: all eight.
    #[arg(long, value_delimiter = ',', value_parser = parse_test_id)]
    tests: Option<Vec<TestId>>,

    #[arg(long, value_enum, default_value_t = Output::Text)]
    output: Output,
}

fn parse_test_id(s: &str) -> Result<TestId, String> {
    s.parse()
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Csv,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum DfRef {
    /// Standard normal reference (df = 0).
    Asymptotic,
    /// Multivariate t with the residual degrees of freedom.
    Classical,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
enum Procedure {
    /// Classical pooled-variance comparisons of means.
    Location,
    /// Comparisons of spread (absolute deviations from group medians).
    Scale,
    /// Joint location-and-scale test from stacked marginal models.
    Mmm,
    /// Transformation-shift test.
    Mlt,
    /// Mean comparisons with a heteroscedasticity-consistent covariance.
    Sandwich,
    /// Permutation max-test on rank and Ansari-Bradley scores.
    Lepage,
    /// Global variance-homogeneity test (one line, no comparisons).
    Levene,
}

impl Procedure {
    fn name(self) -> &'static str {
        match self {
            Procedure::Location => "location",
            Procedure::Scale => "scale",
            Procedure::Mmm => "mmm",
            Procedure::Mlt => "mlt",
            Procedure::Sandwich => "sandwich",
            Procedure::Lepage => "lepage",
            Procedure::Levene => "levene",
        }
    }

    fn fills_location_rows(self) -> bool {
        matches!(
            self,
            Procedure::Location
                | Procedure::Sandwich
                | Procedure::Mmm
                | Procedure::Mlt
                | Procedure::Lepage
        )
    }

    fn fills_scale_rows(self) -> bool {
        matches!(self, Procedure::Scale | Procedure::Mmm | Procedure::Lepage)
    }
}

/// Failure classes mapped to exit codes: usage 1, data 2, numerical 3.
enum Failure {
    Usage(String),
    Data(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Numeric(m) => m,
        }
    }
}

impl From<locscale::Error> for Failure {
    fn from(e: locscale::Error) -> Self {
        match e {
            locscale::Error::Data(d) => Failure::Data(d.to_string()),
            locscale::Error::Numeric(n) => Failure::Numeric(n.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        if threads > 0 {
            if let Err(e) = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global()
            {
                eprintln!("error: cannot configure {threads} worker threads: {e}");
                return ExitCode::from(1);
            }
        }
    }
    let result = match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Datasets => cmd_datasets(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn load_dataset(args: &AnalyzeArgs) -> Result<Dataset, Failure> {
    if let Some(name) = &args.dataset {
        return Ok(locscale::builtin_dataset(name)?);
    }
    let path = args
        .csv
        .as_ref()
        .expect("input group guarantees one source");
    let control = args.control.as_ref().ok_or_else(|| {
        Failure::Usage("--csv requires --control to name the reference group".into())
    })?;
    Ok(locscale::load_csv(
        path,
        &args.group_col,
        &args.response_col,
        control,
    )?)
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), Failure> {
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        return Err(Failure::Usage(format!(
            "--alpha {} outside (0, 1)",
            args.alpha
        )));
    }
    for (i, p) in args.procedures.iter().enumerate() {
        if args.procedures[..i].contains(p) {
            return Err(Failure::Usage(format!(
                "procedure '{}' requested twice",
                p.name()
            )));
        }
    }
    let ds = load_dataset(&args)?;
    let cfg = QmcConfig::default().with_seed(args.seed);

    let mut treatments = ds.treatments().to_vec();
    report::numeric_aware_sort(&mut treatments);
    let location_rows: Vec<String> = treatments
        .iter()
        .map(|t| format!("location: {t} - {}", ds.control()))
        .collect();
    let scale_rows: Vec<String> = treatments
        .iter()
        .map(|t| format!("scale: {t} - {}", ds.control()))
        .collect();
    let with_location = args.procedures.iter().any(|p| p.fills_location_rows());
    let with_scale = args.procedures.iter().any(|p| p.fills_scale_rows());
    let mut rows = Vec::new();
    if with_location {
        rows.extend(location_rows.iter().cloned());
    }
    if with_scale {
        rows.extend(scale_rows.iter().cloned());
    }

    let mut columns = Vec::new();
    let mut details = Vec::new();
    let mut levene_line = None;
    for &proc in &args.procedures {
        // each procedure contributes p-values under the row labels it knows;
        // unprefixed families (plain mean or spread comparisons) are mapped
        // onto their block explicitly
        let mut cells: HashMap<String, f64> = HashMap::new();
        match proc {
            Procedure::Location => {
                let r = locscale::dunnett_classical(&ds, args.alpha, &cfg)?;
                for (l, &p) in r.labels.iter().zip(&r.adj_p) {
                    cells.insert(format!("location: {l}"), p);
                }
                details.push((proc.name(), report::maxt_text(&r)));
            }
            Procedure::Sandwich => {
                let r = locscale::dunnett_sandwich(&ds, args.alpha, &cfg)?;
                for (l, &p) in r.labels.iter().zip(&r.adj_p) {
                    cells.insert(format!("location: {l}"), p);
                }
                details.push((proc.name(), report::maxt_text(&r)));
            }
            Procedure::Scale => {
                let df_mode = match args.df {
                    DfRef::Asymptotic => DfMode::Asymptotic,
                    DfRef::Classical => DfMode::Classical,
                };
                let r = locscale::dunnett_scale(&ds, args.alpha, &cfg, df_mode)?;
                for (l, &p) in r.labels.iter().zip(&r.adj_p) {
                    cells.insert(format!("scale: {l}"), p);
                }
                details.push((proc.name(), report::maxt_text(&r)));
            }
            Procedure::Mmm => {
                let r = locscale::mmm_dunnett(&ds, args.alpha, &cfg)?;
                for (l, &p) in r.labels.iter().zip(&r.adj_p) {
                    cells.insert(l.clone(), p);
                }
                details.push((proc.name(), report::maxt_text(&r)));
            }
            Procedure::Mlt => {
                let r = locscale::mlt_dunnett(&ds, locscale::DEFAULT_ORDER, args.alpha, &cfg)?;
                for (l, &p) in r.labels.iter().zip(&r.adj_p) {
                    cells.insert(format!("location: {l}"), p);
                }
                details.push((proc.name(), report::maxt_text(&r)));
            }
            Procedure::Lepage => {
                let r = locscale::lepage_dunnett(&ds, args.nresample, args.seed, Components::Both)?;
                for (l, &p) in r.labels.iter().zip(&r.adj_p) {
                    cells.insert(l.clone(), p);
                }
                details.push((proc.name(), report::permutation_text(&r)));
            }
            Procedure::Levene => {
                let r = locscale::levene_global_test(&ds);
                levene_line = Some(format!(
                    "global Levene test: F({}, {}) = {:.3}, p = {}",
                    r.df.0,
                    r.df.1,
                    r.f_stat,
                    report::format_p(r.p_value)
                ));
                continue;
            }
        }
        columns.push(AnalysisColumn {
            name: proc.name().to_string(),
            cells: rows.iter().map(|row| cells.get(row).copied()).collect(),
        });
    }

    let metadata = format!(
        "dataset {}, alpha {}, seed {}, qmc {} points x {} shifts, locscale {}",
        ds.name(),
        args.alpha,
        args.seed,
        cfg.n_points,
        cfg.n_shifts,
        env!("CARGO_PKG_VERSION")
    );
    match args.output {
        Output::Text => {
            if !columns.is_empty() {
                print!("{}", report::analysis_text(&rows, &columns));
            }
            if let Some(line) = levene_line {
                println!("{line}");
            }
            if args.detail {
                for (name, table) in details {
                    println!("\n[{name}]");
                    print!("{table}");
                }
            }
            println!("{metadata}");
        }
        Output::Csv => {
            if !columns.is_empty() {
                print!("{}", report::analysis_csv(&rows, &columns));
            }
            if let Some(line) = levene_line {
                eprintln!("{line}");
            }
            eprintln!("{metadata}");
        }
    }
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), Failure> {
    let mut runs: Vec<(String, SimulationScenario)> = Vec::new();
    if let Some(path) = &args.scenario {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Data(format!("cannot read {}: {e}", path.display())))?;
        let sc: SimulationScenario =
            toml::from_str(&text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "scenario".into());
        runs.push((id, sc));
    } else {
        let grid = locscale::table1_rows();
        let selected: Vec<_> = if args.all {
            grid.iter().collect()
        } else {
            let mut picked = Vec::new();
            for id in &args.row {
                let row = grid.iter().find(|r| &r.id == id).ok_or_else(|| {
                    let known: Vec<&str> = grid.iter().map(|r| r.id.as_str()).collect();
                    Failure::Data(format!(
                        "unknown scenario row '{id}' (available: {})",
                        known.join(", ")
                    ))
                })?;
                picked.push(row);
            }
            picked
        };
        for row in selected {
            let sc =
                locscale::table1_scenario(row, args.nsim.unwrap_or(5000), args.seed.unwrap_or(1));
            runs.push((row.id.clone(), sc));
        }
    }

    let mut ids = Vec::with_capacity(runs.len());
    let mut results = Vec::with_capacity(runs.len());
    for (id, mut sc) in runs {
        if let Some(nsim) = args.nsim {
            sc.nsim = nsim;
        }
        if let Some(seed) = args.seed {
            if args.scenario.is_some() {
                sc.seed = seed;
            }
        }
        if let Some(tests) = &args.tests {
            sc.tests = tests.clone();
        }
        eprintln!("running {id} ({} replicates)...", sc.nsim);
        results.push(locscale::run_scenario(&sc)?);
        ids.push(id);
    }
    match args.output {
        Output::Text => print!("{}", report::sim_text(&ids, &results)),
        Output::Csv => print!("{}", report::sim_csv(&ids, &results)),
    }
    Ok(())
}

fn cmd_datasets() -> Result<(), Failure> {
    println!("{:<8}  {:>6}  {:>12}", "name", "groups", "observations");
    for (name, n, levels) in locscale::builtin_names() {
        println!("{name:<8}  {levels:>6}  {n:>12}");
    }
    Ok(())
}
