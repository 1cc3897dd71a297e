//! The `cti` command-line front end.
//!
//! Every subcommand is a pure function of its arguments and input files.
//! Exit codes: 0 success, 1 domain or validation error, 2 usage error.
//! Without `--out`, results go to standard output; with it, files are
//! written atomically into that directory only.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::calibration::{self, CalibrationReport, ModelChoice};
use crate::data::{self, Cell, CountrySeries, RunConfig, ShareUnit, Table};
use crate::ema::{self, EmaConfig};
use crate::error::Error;
use crate::grid;
use crate::plot::{self, Plot, PlotSeries};
use crate::policy::{self, PolicyEvent, Scenario};
use crate::rate;
use crate::reference;
use crate::share::ShareCurveParams;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "cti",
    version,
    about = "Cashless Transaction Index: classify, calibrate, forecast and compare policies"
)]
struct Cli {
    /// Run configuration document (conductivities, z, T, default gamma, share unit).
    #[arg(long, global = true, env = "CTI_CONFIG", value_name = "PATH")]
    config: Option<PathBuf>,
    /// Directory receiving output files; standard output when absent.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Calibrate the share trial function for one country of an input table.
    Fit(FitArgs),
    /// CTI, effective conductivity and region of a cashless share.
    Classify(ClassifyArgs),
    /// Share and CTI trajectory of a parameter set.
    Project(TrajectoryArgs),
    /// CTI growth-rate profile of a parameter set.
    Rate(TrajectoryArgs),
    /// Compare policy scenarios against a baseline.
    Policy(PolicyArgs),
    /// Fit, project and rate every country of an input table.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// CSV with header `country,year,share`.
    #[arg(long, value_name = "CSV")]
    input: PathBuf,
    /// Unit of the share column; overrides the configuration.
    #[arg(long, value_enum)]
    unit: Option<ShareUnit>,
    /// Fitted regime; `auto` selects by R².
    #[arg(long, value_enum, default_value_t = ModelChoice::Auto)]
    model: ModelChoice,
    /// Trial-function gamma for linear-regime countries; defaults to the configuration.
    #[arg(long)]
    gamma: Option<f64>,
}

#[derive(Debug, Args)]
struct FitArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Country to fit; may be omitted when the input holds a single country.
    #[arg(long)]
    country: Option<String>,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    /// Cashless share as a fraction in [0,1].
    #[arg(long, allow_hyphen_values = true)]
    share: f64,
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false)]
struct ParamSource {
    /// Parameter or calibration report document.
    #[arg(long, value_name = "DOC", group = "source")]
    params: Option<PathBuf>,
    /// Use a built-in published parameter row, e.g. `Japan`.
    #[arg(long, value_name = "COUNTRY", group = "source")]
    reference: Option<String>,
}

#[derive(Debug, Args)]
struct GridArgs {
    /// First time point, in years since the start of cashless activity.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    from: f64,
    /// Last time point, in years.
    #[arg(long, default_value_t = 100.0, allow_hyphen_values = true)]
    to: f64,
    /// Grid step, in years.
    #[arg(long, default_value_t = 1.0)]
    step: f64,
}

#[derive(Debug, Args)]
struct TrajectoryArgs {
    #[command(flatten)]
    source: ParamSource,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Debug, Args)]
struct PolicyArgs {
    /// Baseline parameter or report document.
    #[arg(long, value_name = "DOC", conflicts_with = "reference")]
    params: Option<PathBuf>,
    /// Built-in published parameter row used as baseline.
    #[arg(long, value_name = "COUNTRY")]
    reference: Option<String>,
    /// Scenario document; repeatable. Supplies the baseline when no other is given.
    #[arg(long, value_name = "DOC")]
    scenario: Vec<PathBuf>,
    /// Policy impact on alpha per year; one per event.
    #[arg(long)]
    epsilon: Vec<f64>,
    /// Policy start time in years; one per event.
    #[arg(long, allow_hyphen_values = true)]
    ti: Vec<f64>,
    /// Policy ramp width in years; one per event.
    #[arg(long)]
    omega: Vec<f64>,
    /// Label of the scenario built from the event flags.
    #[arg(long, default_value = "policy")]
    label: String,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    grid: GridArgs,
}

enum Failure {
    Usage(String),
    Model(Error),
    File {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Model(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match dispatch(&cli, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(
                stderr,
                "error: {msg}\n\nFor more information, try '--help'."
            );
            EXIT_USAGE
        }
        Err(Failure::Model(Error::Rows(issues))) => {
            let _ = writeln!(stderr, "error: invalid input rows");
            for issue in issues {
                let _ = writeln!(stderr, "  {issue}");
            }
            EXIT_FAILURE
        }
        Err(Failure::Model(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_FAILURE
        }
        Err(Failure::File { path, source }) => {
            let _ = writeln!(stderr, "error: {}: {source}", path.display());
            EXIT_FAILURE
        }
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Outcome {
    let config = match &cli.config {
        Some(path) => RunConfig::from_toml(&read_text(path)?)?,
        None => RunConfig::default(),
    };
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Fit(args) => fit(args, &config, out, stdout, stderr),
        Command::Classify(args) => classify(args, &config, stdout),
        Command::Project(args) => project(args, &config, out, stdout),
        Command::Rate(args) => rate_cmd(args, &config, out, stdout),
        Command::Policy(args) => policy_cmd(args, &config, out, stdout),
        Command::Report(args) => report(args, &config, out, stdout, stderr),
    }
}

fn read_text(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|source| Failure::File {
        path: path.to_owned(),
        source,
    })
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> std::result::Result<PathBuf, Failure> {
    fs::create_dir_all(dir).map_err(|source| Failure::File {
        path: dir.to_owned(),
        source,
    })?;
    let path = dir.join(name);
    data::write_atomic(&path, bytes)?;
    Ok(path)
}

fn emit(stdout: &mut dyn Write, bytes: &[u8]) -> Outcome {
    stdout
        .write_all(bytes)
        .map_err(|e| Failure::Model(e.into()))
}

fn announce(stdout: &mut dyn Write, path: &Path) -> Outcome {
    emit(stdout, format!("wrote {}\n", path.display()).as_bytes())
}

/// File-name stem for a country: lowercase ASCII alphanumerics, `_` elsewhere.
pub fn slug(country: &str) -> String {
    country
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_lowercase()
            } else {
                '_'
            }
        })
        .collect()
}

fn load_input(
    args: &InputArgs,
    config: &RunConfig,
) -> std::result::Result<Vec<CountrySeries>, Failure> {
    let file = fs::File::open(&args.input).map_err(|source| Failure::File {
        path: args.input.clone(),
        source,
    })?;
    Ok(data::load_series(
        file,
        args.unit.unwrap_or(config.share_unit),
    )?)
}

fn fit(
    args: &FitArgs,
    config: &RunConfig,
    out: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Outcome {
    let all = load_input(&args.input, config)?;
    let series = match &args.country {
        Some(name) => all
            .iter()
            .find(|s| s.country().eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::Domain(format!("country `{name}` not found in input")))?,
        None if all.len() == 1 => &all[0],
        None => {
            let names: Vec<&str> = all.iter().map(CountrySeries::country).collect();
            return Err(Failure::Usage(format!(
                "input holds several countries ({}); pass --country",
                names.join(", ")
            )));
        }
    };
    let opts = config.calibration(args.input.model, args.input.gamma);
    let report = calibration::calibrate_country(series, &opts)?;
    for w in &report.warnings {
        let _ = writeln!(stderr, "warning: {}: {w}", report.country);
    }
    let doc = data::save_report(&report)?;
    match out {
        Some(dir) => {
            let path = write_file(
                dir,
                &format!("{}.report.toml", slug(&report.country)),
                doc.as_bytes(),
            )?;
            announce(stdout, &path)
        }
        None => emit(stdout, doc.as_bytes()),
    }
}

fn classify(args: &ClassifyArgs, config: &RunConfig, stdout: &mut dyn Write) -> Outcome {
    let p = args.share;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("share must be in [0,1], got {p}")).into());
    }
    let cfg = config.ema()?;
    let sigma = ema::solve_two_phase(p, &cfg)?;
    let cti = ema::cti_from_conductivity(sigma, &cfg);
    let region = ema::classify(cti)?;
    let text = format!("share {p:.4}\nsigma_e {sigma:.6}\nCTI {cti:.4}\nregion {region}\n");
    emit(stdout, text.as_bytes())
}

fn params_from(source: &ParamSource) -> std::result::Result<ShareCurveParams, Failure> {
    if let Some(name) = &source.reference {
        return reference::params(name)
            .ok_or_else(|| Error::Domain(format!("no built-in parameters for `{name}`")).into());
    }
    let path = source.params.as_ref().expect("clap enforces one source");
    params_from_document(path)
}

/// Accepts a bare parameter document or a calibration report.
fn params_from_document(path: &Path) -> std::result::Result<ShareCurveParams, Failure> {
    let text = read_text(path)?;
    match data::load_params(&text) {
        Ok(p) => Ok(p),
        Err(first) => match data::load_report(&text) {
            Ok(report) => {
                report.params.validate()?;
                Ok(report.params)
            }
            Err(_) => Err(first.into()),
        },
    }
}

fn projection_table(points: &[(String, policy::ProjectionPoint)], labelled: bool) -> Table {
    let mut cols = vec!["t_years", "alpha_per_year", "y", "share", "cti", "region"];
    if labelled {
        cols.insert(0, "scenario");
    }
    let mut t = Table::new(cols);
    for (label, p) in points {
        let mut row = vec![
            Cell::from(p.t_years),
            p.alpha.into(),
            p.y.into(),
            p.share.into(),
            p.cti.into(),
            p.region.name().into(),
        ];
        if labelled {
            row.insert(0, label.as_str().into());
        }
        t.push(row);
    }
    t
}

fn rate_table(samples: &[rate::RateSample]) -> Table {
    let mut t = Table::new(["t_years", "share", "sigma_e", "dsigma_dt", "dcti_dt"]);
    for s in samples {
        t.push(vec![
            s.t_years.into(),
            s.share.into(),
            s.sigma_e.into(),
            s.dsigma_dt.into(),
            s.dcti_dt.into(),
        ]);
    }
    t
}

fn time_grid(g: &GridArgs) -> std::result::Result<Vec<f64>, Failure> {
    Ok(grid::time_grid(g.from, g.to, g.step)?)
}

fn project(
    args: &TrajectoryArgs,
    config: &RunConfig,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Outcome {
    let params = params_from(&args.source)?;
    let cfg = config.ema()?;
    let points = policy::project_trajectory(&params, &cfg, &time_grid(&args.grid)?)?;
    let labelled: Vec<(String, policy::ProjectionPoint)> =
        points.iter().map(|p| (String::new(), *p)).collect();
    let table = projection_table(&labelled, false);
    match out {
        Some(dir) => {
            announce(stdout, &write_file(dir, "projection.csv", &table.to_csv())?)?;
            let chart = Plot::new("Cashless Transaction Index", "t (years)", "CTI").with_series(
                PlotSeries::new("CTI", points.iter().map(|p| (p.t_years, p.cti)).collect()),
            );
            let svg = dir.join("projection.svg");
            plot::emit_plot(&chart, &svg)?;
            announce(stdout, &svg)
        }
        None => emit(stdout, &table.to_csv()),
    }
}

fn rate_cmd(
    args: &TrajectoryArgs,
    config: &RunConfig,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Outcome {
    let params = params_from(&args.source)?;
    let cfg = config.ema()?;
    let samples = rate::rate_profile(&params, &cfg, &time_grid(&args.grid)?)?;
    let table = rate_table(&samples);
    match out {
        Some(dir) => {
            announce(stdout, &write_file(dir, "rate.csv", &table.to_csv())?)?;
            let chart = Plot::new("CTI growth rate", "t (years)", "dCTI/dt (1/year)").with_series(
                PlotSeries::new(
                    "dCTI/dt",
                    samples.iter().map(|s| (s.t_years, s.dcti_dt)).collect(),
                ),
            );
            let svg = dir.join("rate.svg");
            plot::emit_plot(&chart, &svg)?;
            announce(stdout, &svg)
        }
        None => emit(stdout, &table.to_csv()),
    }
}

fn policy_cmd(
    args: &PolicyArgs,
    config: &RunConfig,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Outcome {
    let n = args.epsilon.len();
    if args.ti.len() != n || args.omega.len() != n {
        return Err(Failure::Usage(format!(
            "--epsilon, --ti and --omega must be given the same number of times ({}, {}, {})",
            n,
            args.ti.len(),
            args.omega.len()
        )));
    }
    let mut documents = Vec::with_capacity(args.scenario.len());
    for path in &args.scenario {
        documents.push(data::load_scenario(&read_text(path)?)?);
    }
    let baseline = if let Some(name) = &args.reference {
        reference::params(name)
            .ok_or_else(|| Error::Domain(format!("no built-in parameters for `{name}`")))?
    } else if let Some(path) = &args.params {
        params_from_document(path)?
    } else if let Some(first) = documents.first() {
        first.baseline
    } else {
        return Err(Failure::Usage(
            "a baseline is required: pass --params, --reference or --scenario".into(),
        ));
    };
    let mut scenarios = vec![Scenario::new("baseline", baseline, Vec::new())?];
    if n > 0 {
        let events = (0..n)
            .map(|i| PolicyEvent::new(args.epsilon[i], args.ti[i], args.omega[i]))
            .collect::<crate::Result<Vec<_>>>()?;
        scenarios.push(Scenario::new(args.label.clone(), baseline, events)?);
    }
    scenarios.extend(documents);
    let cfg = config.ema()?;
    let rows = policy::compare_scenarios(&scenarios, &cfg, &time_grid(&args.grid)?)?;
    let labelled: Vec<(String, policy::ProjectionPoint)> =
        rows.iter().map(|r| (r.label.clone(), r.point)).collect();
    let table = projection_table(&labelled, true);
    match out {
        Some(dir) => {
            announce(stdout, &write_file(dir, "policy.csv", &table.to_csv())?)?;
            let mut chart = Plot::new("Policy scenarios", "t (years)", "CTI");
            for sc in &scenarios {
                let pts = rows
                    .iter()
                    .filter(|r| r.label == sc.label)
                    .map(|r| (r.point.t_years, r.point.cti))
                    .collect();
                chart = chart.with_series(PlotSeries::new(sc.label.clone(), pts));
            }
            let svg = dir.join("policy.svg");
            plot::emit_plot(&chart, &svg)?;
            announce(stdout, &svg)
        }
        None => emit(stdout, &table.to_csv()),
    }
}

struct CountryOutput {
    report: CalibrationReport,
    projection: Vec<policy::ProjectionPoint>,
    rates: Vec<rate::RateSample>,
}

fn process_country(
    series: &CountrySeries,
    opts: &calibration::CalibrationOptions,
    cfg: &EmaConfig,
    t_grid: &[f64],
) -> crate::Result<CountryOutput> {
    let report = calibration::calibrate_country(series, opts)?;
    report.params.validate()?;
    Ok(CountryOutput {
        projection: policy::project_trajectory(&report.params, cfg, t_grid)?,
        rates: rate::rate_profile(&report.params, cfg, t_grid)?,
        report,
    })
}

fn report(
    args: &ReportArgs,
    config: &RunConfig,
    out: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Outcome {
    let all = load_input(&args.input, config)?;
    let opts = config.calibration(args.input.model, args.input.gamma);
    let cfg = config.ema()?;
    let t_grid = time_grid(&args.grid)?;
    // Countries are independent; joining in input order keeps output deterministic.
    let results: Vec<crate::Result<CountryOutput>> = std::thread::scope(|s| {
        let handles: Vec<_> = all
            .iter()
            .map(|series| s.spawn(|| process_country(series, &opts, &cfg, &t_grid)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("country worker panicked"))
            .collect()
    });

    let mut summary = Table::new([
        "country",
        "model",
        "alpha_per_year",
        "beta",
        "gamma",
        "T_years",
        "delta_t0_years",
        "r_squared",
        "tau_years",
        "peak_t_years",
        "peak_dcti_dt",
    ]);
    let mut chart = Plot::new("Cashless Transaction Index", "t (years)", "CTI");
    let mut failed = Vec::new();
    for (series, result) in all.iter().zip(results) {
        let output = match result {
            Ok(o) => o,
            Err(e) => {
                let _ = writeln!(stderr, "error: {}: {e}", series.country());
                failed.push(series.country().to_owned());
                continue;
            }
        };
        let r = &output.report;
        for w in &r.warnings {
            let _ = writeln!(stderr, "warning: {}: {w}", r.country);
        }
        let peak = output
            .rates
            .iter()
            .max_by(|a, b| a.dcti_dt.total_cmp(&b.dcti_dt))
            .copied();
        summary.push(vec![
            r.country.as_str().into(),
            r.selected.name().into(),
            r.params.alpha.into(),
            r.params.beta.into(),
            r.params.gamma.into(),
            r.params.period.into(),
            r.params.delta_t0.into(),
            r.selected_fit().r_squared.into(),
            r.width.tau.into(),
            peak.map_or(f64::NAN, |p| p.t_years).into(),
            peak.map_or(f64::NAN, |p| p.dcti_dt).into(),
        ]);
        if let Some(dir) = out {
            let stem = slug(&r.country);
            write_file(
                dir,
                &format!("{stem}.report.toml"),
                data::save_report(r)?.as_bytes(),
            )?;
            let labelled: Vec<(String, policy::ProjectionPoint)> = output
                .projection
                .iter()
                .map(|p| (String::new(), *p))
                .collect();
            write_file(
                dir,
                &format!("{stem}.projection.csv"),
                &projection_table(&labelled, false).to_csv(),
            )?;
            write_file(
                dir,
                &format!("{stem}.rate.csv"),
                &rate_table(&output.rates).to_csv(),
            )?;
        }
        chart = chart.with_series(PlotSeries::new(
            r.country.clone(),
            output
                .projection
                .iter()
                .map(|p| (p.t_years, p.cti))
                .collect(),
        ));
    }
    match out {
        Some(dir) => {
            announce(stdout, &write_file(dir, "summary.csv", &summary.to_csv())?)?;
            if !chart.series.is_empty() {
                let svg = dir.join("cti.svg");
                plot::emit_plot(&chart, &svg)?;
                announce(stdout, &svg)?;
            }
        }
        None => emit(stdout, &summary.to_csv())?,
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::Domain(format!("calibration failed for {}", failed.join(", "))).into())
    }
}
