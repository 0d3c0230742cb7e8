//! Command-line front end: `run`, `nulls`, `tables`, `reproduce`.
//!
//! Option values resolve as flag > config file > built-in default. A config
//! file holds `key = value` lines whose keys are the long flag names without
//! dashes; `#` starts a comment. `--print-config` prints the resolved
//! options in that same format and exits.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime or I/O error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dynamics::{self, RuleVariant, DEFAULT_COLS, DEFAULT_ROWS, DEFAULT_STEPS};
use crate::error::Error;
use crate::experiments::{
    convergence_diagnostic, full_reproduction, null_seed, scenario_config, ProportionSet,
    ReproductionOptions, ScenarioOverrides, SeriesKey, Variation, DEFAULT_MASTER_SEED,
    DEFAULT_SNAPSHOTS,
};
use crate::io::{self, OutputFormat};
use crate::nullmodel::{
    null_median_series_with, NullModelSpec, DEFAULT_REALIZATIONS, PAPER_NULL_PS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

const BIN: &str = "empathy-ca";

#[derive(Debug, Parser)]
#[command(name = BIN, version, about = "Opinion cellular automaton with null-model validation")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Simulate one scenario and write its series and snapshots.
    Run(Flags),
    /// Compute null-model median series.
    Nulls(Flags),
    /// Compute both correlation tables.
    Tables(Flags),
    /// Run the full design and write every artifact.
    Reproduce(Flags),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Pgm,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProportionsArg {
    Fig6,
    Tuples,
}

#[derive(Debug, Clone, Default, Args)]
struct Flags {
    /// Read defaults from a `key = value` file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the resolved options and exit.
    #[arg(long)]
    print_config: bool,
    /// Scenario id, 1-4.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    scenario: Option<u8>,
    /// Initial-proportion variation: a, b or c.
    #[arg(long, value_parser = parse_variation)]
    variation: Option<Variation>,
    #[arg(long, value_parser = parse_side)]
    rows: Option<usize>,
    #[arg(long, value_parser = parse_side)]
    cols: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    /// Overrides the variation's initial SEN proportion.
    #[arg(long, value_parser = parse_unit)]
    proportion_sen: Option<f64>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=9))]
    sen_threshold: Option<u8>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=9))]
    nonsen_threshold: Option<u8>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Null-model SEN probabilities, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_unit)]
    null_p: Option<Vec<f64>>,
    #[arg(long, value_parser = parse_positive)]
    realizations: Option<usize>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Compare SEN neighbors in the nonSEN -> SEN clause.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    alt_rule: Option<bool>,
    #[arg(long, value_enum)]
    proportions: Option<ProportionsArg>,
    /// Snapshot time points, comma separated.
    #[arg(long, value_delimiter = ',')]
    snapshots: Option<Vec<usize>>,
    /// Disable multithreading.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    serial: Option<bool>,
}

fn parse_variation(s: &str) -> Result<Variation, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_side(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if v < 3 {
        return Err(format!("{v} is below the minimum of 3"));
    }
    Ok(v)
}

fn parse_unit(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !(0.0..=1.0).contains(&v) {
        return Err(format!("{v} is outside [0, 1]"));
    }
    Ok(v)
}

fn parse_positive(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if v == 0 {
        return Err("must be at least 1".into());
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Run,
    Nulls,
    Tables,
    Reproduce,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Run => "run",
            Command::Nulls => "nulls",
            Command::Tables => "tables",
            Command::Reproduce => "reproduce",
        }
    }
}

/// Fully resolved options. Threshold and proportion overrides stay `None`
/// when the catalog values apply.
#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub scenario: u8,
    pub variation: Variation,
    pub rows: usize,
    pub cols: usize,
    pub steps: usize,
    pub proportion_sen: Option<f64>,
    pub sen_threshold: Option<u8>,
    pub nonsen_threshold: Option<u8>,
    pub seed: u64,
    pub null_p: Vec<f64>,
    pub realizations: usize,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
    pub alt_rule: bool,
    pub proportions: ProportionSet,
    pub snapshots: Vec<usize>,
    pub serial: bool,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            scenario: 1,
            variation: Variation::B,
            rows: DEFAULT_ROWS,
            cols: DEFAULT_COLS,
            steps: DEFAULT_STEPS,
            proportion_sen: None,
            sen_threshold: None,
            nonsen_threshold: None,
            seed: DEFAULT_MASTER_SEED,
            null_p: PAPER_NULL_PS.to_vec(),
            realizations: DEFAULT_REALIZATIONS,
            out_dir: PathBuf::from("out"),
            format: OutputFormat::Both,
            alt_rule: false,
            proportions: ProportionSet::Fig6,
            snapshots: DEFAULT_SNAPSHOTS.to_vec(),
            serial: false,
        }
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

impl Options {
    /// The options as a config file; optional overrides that are unset are
    /// written as comments so the file resolves back to the same options.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: Option<String>| {
            let _ = match v {
                Some(v) => writeln!(s, "{k} = {v}"),
                None => writeln!(s, "# {k} = (catalog)"),
            };
        };
        line("scenario", Some(self.scenario.to_string()));
        line("variation", Some(self.variation.to_string()));
        line("rows", Some(self.rows.to_string()));
        line("cols", Some(self.cols.to_string()));
        line("steps", Some(self.steps.to_string()));
        line("proportion-sen", self.proportion_sen.map(|v| v.to_string()));
        line("sen-threshold", self.sen_threshold.map(|v| v.to_string()));
        line(
            "nonsen-threshold",
            self.nonsen_threshold.map(|v| v.to_string()),
        );
        line("seed", Some(self.seed.to_string()));
        line("null-p", Some(join(&self.null_p)));
        line("realizations", Some(self.realizations.to_string()));
        line("out-dir", Some(self.out_dir.display().to_string()));
        line("format", Some(self.format.as_str().to_string()));
        line("alt-rule", Some(self.alt_rule.to_string()));
        line("proportions", Some(self.proportions.as_str().to_string()));
        line("snapshots", Some(join(&self.snapshots)));
        line("serial", Some(self.serial.to_string()));
        s
    }

    pub fn rule(&self) -> RuleVariant {
        if self.alt_rule {
            RuleVariant::AltClause3
        } else {
            RuleVariant::Literal
        }
    }

    pub fn reproduction(&self) -> ReproductionOptions {
        ReproductionOptions {
            rows: self.rows,
            cols: self.cols,
            steps: self.steps,
            proportions: self.proportions,
            rule: self.rule(),
            null_ps: self.null_p.clone(),
            realizations: self.realizations,
            snapshot_times: self.snapshots.clone(),
            parallel: !self.serial,
        }
    }

    fn overrides(&self) -> ScenarioOverrides {
        ScenarioOverrides {
            rows: Some(self.rows),
            cols: Some(self.cols),
            steps: Some(self.steps),
            proportion_sen: self.proportion_sen,
            sen_threshold: self.sen_threshold,
            nonsen_threshold: self.nonsen_threshold,
            rule: Some(self.rule()),
            proportions: Some(self.proportions),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliInvocation {
    pub command: Command,
    pub options: Options,
    pub config_path: Option<PathBuf>,
    pub print_config: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// `--help` or `--version`; the text goes to stdout with exit 0.
    #[error("{0}")]
    Display(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Runtime(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Display(_) => EXIT_OK,
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

fn clap_parse<I, T>(argv: I) -> Result<(Command, Flags), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    use clap::error::ErrorKind;
    let cli = Cli::try_parse_from(argv).map_err(|e| match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliError::Display(e.to_string()),
        _ => CliError::Usage(e.to_string()),
    })?;
    Ok(match cli.command {
        Sub::Run(f) => (Command::Run, f),
        Sub::Nulls(f) => (Command::Nulls, f),
        Sub::Tables(f) => (Command::Tables, f),
        Sub::Reproduce(f) => (Command::Reproduce, f),
    })
}

/// Turns config-file lines into `--key value` arguments so they go through
/// the same validation as real flags.
fn config_args(text: &str, path: &Path) -> Result<Vec<String>, CliError> {
    let mut args = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "{}:{}: expected `key = value`",
                path.display(),
                n + 1
            ))
        })?;
        let (key, value) = (key.trim(), value.trim());
        if matches!(key, "config" | "print-config") || key.starts_with('-') || key.is_empty() {
            return Err(CliError::Usage(format!(
                "{}:{}: key `{key}` is not allowed in a config file",
                path.display(),
                n + 1
            )));
        }
        args.push(format!("--{key}"));
        args.push(value.to_string());
    }
    Ok(args)
}

pub fn parse_cli<I, T>(argv: I) -> Result<CliInvocation, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (command, cli) = clap_parse(argv)?;

    let file = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                CliError::Usage(format!("cannot read config {}: {e}", path.display()))
            })?;
            let mut argv = vec![BIN.to_string(), command.as_str().to_string()];
            argv.extend(config_args(&text, path)?);
            clap_parse(argv)
                .map_err(|e| CliError::Usage(format!("in config {}: {e}", path.display())))?
                .1
        }
        None => Flags::default(),
    };

    let d = Options::default();
    let options = Options {
        scenario: cli.scenario.or(file.scenario).unwrap_or(d.scenario),
        variation: cli.variation.or(file.variation).unwrap_or(d.variation),
        rows: cli.rows.or(file.rows).unwrap_or(d.rows),
        cols: cli.cols.or(file.cols).unwrap_or(d.cols),
        steps: cli.steps.or(file.steps).unwrap_or(d.steps),
        proportion_sen: cli.proportion_sen.or(file.proportion_sen),
        sen_threshold: cli.sen_threshold.or(file.sen_threshold),
        nonsen_threshold: cli.nonsen_threshold.or(file.nonsen_threshold),
        seed: cli.seed.or(file.seed).unwrap_or(d.seed),
        null_p: cli.null_p.or(file.null_p).unwrap_or(d.null_p),
        realizations: cli
            .realizations
            .or(file.realizations)
            .unwrap_or(d.realizations),
        out_dir: cli.out_dir.or(file.out_dir).unwrap_or(d.out_dir),
        format: match cli.format.or(file.format) {
            Some(FormatArg::Csv) => OutputFormat::Csv,
            Some(FormatArg::Pgm) => OutputFormat::Pgm,
            Some(FormatArg::Both) | None => d.format,
        },
        alt_rule: cli.alt_rule.or(file.alt_rule).unwrap_or(d.alt_rule),
        proportions: match cli.proportions.or(file.proportions) {
            Some(ProportionsArg::Tuples) => ProportionSet::Tuples,
            Some(ProportionsArg::Fig6) | None => d.proportions,
        },
        snapshots: cli.snapshots.or(file.snapshots).unwrap_or(d.snapshots),
        serial: cli.serial.or(file.serial).unwrap_or(d.serial),
    };

    if command != Command::Run && options.steps < 2 {
        return Err(CliError::Usage(format!(
            "{} needs --steps >= 2 (got {})",
            command.as_str(),
            options.steps
        )));
    }
    if options.null_p.is_empty() {
        return Err(CliError::Usage("--null-p needs at least one value".into()));
    }

    Ok(CliInvocation {
        command,
        options,
        config_path: cli.config,
        print_config: cli.print_config,
    })
}

/// Runs an invocation and returns a short human-readable report.
pub fn execute(inv: &CliInvocation) -> Result<String, Error> {
    let o = &inv.options;
    let mut report = String::new();
    match inv.command {
        Command::Run => {
            let config = scenario_config(o.scenario, o.variation, o.seed, &o.overrides())?;
            let traj = dynamics::run(&config)?;
            let key = SeriesKey {
                scenario: o.scenario,
                variation: o.variation,
            };
            if o.format.csv() {
                let path = o.out_dir.join(io::series_file_name(key));
                io::write_series_csv(&traj.nonsen_counts, config.rows * config.cols, &path)?;
                let _ = writeln!(report, "wrote {}", path.display());
            }
            if o.format.pgm() {
                for &t in &o.snapshots {
                    if let Some(g) = traj.grids.get(t) {
                        let path = o.out_dir.join(io::snapshot_file_name(key, t));
                        io::write_grid_pgm(g, &path)?;
                        let _ = writeln!(report, "wrote {}", path.display());
                    }
                }
            }
            let fr = traj.nonsen_fractions();
            let _ = writeln!(
                report,
                "scenario {}{} ({}, {}): nonSEN {:.2}% -> {:.2}%",
                o.scenario,
                o.variation,
                config.params.sen_threshold,
                config.params.nonsen_threshold,
                100.0 * fr[0],
                100.0 * fr[fr.len() - 1]
            );
            if let Ok(d) = convergence_diagnostic(&traj) {
                let _ = writeln!(
                    report,
                    "fixed point: {}, two-cycle: {:?}, last change: {:.4}",
                    d.fixed_point, d.two_cycle, d.last_delta
                );
            }
        }
        Command::Nulls => {
            let nulls = o
                .null_p
                .iter()
                .map(|&p| {
                    let spec = NullModelSpec {
                        p,
                        n_cells: o.rows * o.cols,
                        n_steps: o.steps + 1,
                        realizations: o.realizations,
                        seed: null_seed(o.seed, p),
                    };
                    null_median_series_with(&spec, !o.serial)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let path = o.out_dir.join("nulls.csv");
            io::write_nulls_csv(&nulls, &path)?;
            let _ = writeln!(report, "wrote {}", path.display());
        }
        Command::Tables => {
            let bundle = full_reproduction(o.seed, &o.reproduction())?;
            for (name, table) in [
                ("table1.csv", &bundle.table1),
                ("table2.csv", &bundle.table2),
            ] {
                let path = o.out_dir.join(name);
                io::write_correlation_table(table, &path)?;
                let _ = writeln!(report, "wrote {}", path.display());
            }
            let path = o.out_dir.join("nulls.csv");
            io::write_nulls_csv(&bundle.nulls, &path)?;
            let _ = writeln!(report, "wrote {}", path.display());
        }
        Command::Reproduce => {
            let bundle = full_reproduction(o.seed, &o.reproduction())?;
            let written = io::write_bundle(&bundle, &o.out_dir, o.format)?;
            let _ = writeln!(
                report,
                "wrote {} files under {}",
                written.len(),
                o.out_dir.display()
            );
        }
    }
    Ok(report)
}

/// Parses, runs, prints, and returns the process exit code.
pub fn main_from<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let inv = match parse_cli(argv) {
        Ok(inv) => inv,
        Err(CliError::Display(text)) => {
            print!("{text}");
            return EXIT_OK;
        }
        Err(e) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    if inv.print_config {
        print!("{}", inv.options.to_config_string());
        return EXIT_OK;
    }
    match execute(&inv) {
        Ok(report) => {
            print!("{report}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_RUNTIME
        }
    }
}
