use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use reset_ness::error::Error;
use reset_ness::sweep::{self, Axis, Observable, ObservableRecord, OutputFormat, RecordWriter, SearchBox, SweepGrid};
use reset_ness::system::{load_density_matrix, load_hamiltonian, LoadError, MatrixFile};
use reset_ness::twospin::{concurrence_ness, entropy_ness, fidelity_ness, ness_density, TwoSpinParams};
use reset_ness::{observables, QuantumSystem, ResetSpec};

const THREADS_ENV: &str = "RESET_NESS_THREADS";

#[derive(Parser)]
#[command(name = "reset-ness", version, about = "Stationary states of quantum systems under stochastic resetting")]
struct Cli {
    /// Worker threads (default: RESET_NESS_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stationary state: observables of the two-spin model, or the full matrix
    /// for a Hamiltonian given with --hamiltonian/--rho0.
    Ness(NessArgs),
    /// Entropy and return fidelity of rho_r(t) over a time axis.
    Timeseries(TimeseriesArgs),
    /// Stationary observables over an (R, alpha) grid.
    Sweep(SweepArgs),
    /// R maximizing the stationary concurrence at fixed alpha.
    Optimize(OptimizeArgs),
    /// Spinodal point where the entropy's extrema in alpha merge.
    Critical(CriticalArgs),
    /// R maximizing the entropy at a fixed time.
    PeakR(PeakRArgs),
    /// Compare a trajectory estimate of rho_r(t) with the exact result.
    McValidate(McArgs),
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// Transverse field (physical units).
    #[arg(long, conflicts_with_all = ["big_r", "alpha"])]
    omega: Option<f64>,
    /// Coupling (physical units).
    #[arg(long, conflicts_with_all = ["big_r", "alpha"])]
    j: Option<f64>,
    /// Reset rate (physical units).
    #[arg(long, conflicts_with_all = ["big_r", "alpha"])]
    r: Option<f64>,
    /// Dimensionless reset rate r/Omega.
    #[arg(long = "R", id = "big_r")]
    big_r: Option<f64>,
    /// Dimensionless coupling J/Omega.
    #[arg(long)]
    alpha: Option<f64>,
}

impl ModelArgs {
    fn params(&self) -> Result<TwoSpinParams, Failure> {
        match (self.omega, self.j, self.r, self.big_r, self.alpha) {
            (Some(o), Some(j), Some(r), None, None) => Ok(TwoSpinParams::new(o, j, r)?),
            (None, None, None, Some(rr), Some(a)) => Ok(TwoSpinParams::dimensionless(rr, a)?),
            _ => Err(Failure::config("give either --omega --j --r or --R --alpha")),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Jsonl => OutputFormat::JsonLines,
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct NessArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Hamiltonian matrix file (JSON: {"dim": n, "matrix": [[re, im], ...]}).
    #[arg(long, requires_all = ["rho0", "r"], conflicts_with_all = ["omega", "j", "big_r", "alpha"])]
    hamiltonian: Option<PathBuf>,
    /// Initial density matrix file.
    #[arg(long, requires = "hamiltonian")]
    rho0: Option<PathBuf>,
    /// With --hamiltonian: output rho_r(t) at this time instead of the stationary state.
    #[arg(long, requires = "hamiltonian")]
    t: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct TimeseriesArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Times as lo:hi:n[:log], or a single value (in units of 1/Omega for physical input).
    #[arg(long)]
    t: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// R axis, lo:hi:n[:log].
    #[arg(long)]
    grid_r: String,
    /// alpha axis, lo:hi:n[:log].
    #[arg(long)]
    grid_alpha: String,
    /// Comma-separated subset of entropy,fidelity,purity,concurrence.
    #[arg(long, default_value = "entropy,fidelity,purity,concurrence")]
    observables: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OptimizeArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 1e-3)]
    r_min: f64,
    #[arg(long, default_value_t = 100.0)]
    r_max: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CriticalArgs {
    /// R search range, lo:hi.
    #[arg(long, default_value = "0.05:0.3")]
    box_r: String,
    /// alpha search range, lo:hi.
    #[arg(long, default_value = "0.8:2.0")]
    box_alpha: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PeakRArgs {
    /// Rescaled time Omega*t.
    #[arg(long)]
    t: f64,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1e-3)]
    r_min: f64,
    #[arg(long, default_value_t = 100.0)]
    r_max: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct McArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Final time (in units of 1/Omega for physical input).
    #[arg(long)]
    t: f64,
    #[arg(long, default_value_t = 100_000)]
    ntraj: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Judge the estimate against the stationary state instead of rho_r(t).
    #[arg(long)]
    against_ness: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(msg: impl Into<String>) -> Self {
        Self { code: 4, message: msg.into() }
    }
    fn validation(msg: impl Into<String>) -> Self {
        Self { code: 2, message: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::OutOfBounds(_) => 2,
            Error::NoConvergence { .. } | Error::NoRoot(_) => 3,
            _ => 4,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::config(format!("I/O error: {e}"))
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        Self::config(e.to_string())
    }
}

impl From<sweep::SweepError> for Failure {
    fn from(e: sweep::SweepError) -> Self {
        match e {
            sweep::SweepError::Compute(e) => e.into(),
            sweep::SweepError::Io(e) => e.into(),
        }
    }
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::config(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json(path: &Option<PathBuf>, value: serde_json::Value) -> Result<(), Failure> {
    let mut out = open_output(path)?;
    writeln!(out, "{value}")?;
    out.flush()?;
    Ok(())
}

fn write_records(output: &OutputArgs, records: &[ObservableRecord]) -> Result<(), Failure> {
    let mut w = RecordWriter::new(open_output(&output.out)?, output.format.into());
    for rec in records {
        w.write(rec)?;
    }
    w.into_inner().flush()?;
    Ok(())
}

fn parse_range(s: &str) -> Result<(f64, f64), Failure> {
    let bad = || Failure::config(format!("range must look like lo:hi, got '{s}'"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
}

fn parse_times(s: &str) -> Result<Vec<f64>, Failure> {
    if s.contains(':') {
        Ok(Axis::parse(s)?.values())
    } else {
        Ok(vec![s.trim().parse().map_err(|_| Failure::config(format!("bad time '{s}'")))?])
    }
}

fn run_ness(args: &NessArgs) -> Result<(), Failure> {
    if let Some(h_path) = &args.hamiltonian {
        let rho0_path = args.rho0.as_ref().expect("required by clap");
        let h = load_hamiltonian(h_path)?;
        let rho0 = load_density_matrix(rho0_path)?;
        let sys = QuantumSystem::new(h, rho0)?;
        let reset = ResetSpec::new(args.model.r.expect("required by clap"))?;
        let rho = match args.t {
            Some(t) if t.is_finite() && t >= 0.0 => sys.reset_density(reset, t),
            Some(t) => return Err(Failure::config(format!("t must be finite and >= 0, got {t}"))),
            None => sys.ness_density(reset)?,
        };
        let mut out = open_output(&args.output.out)?;
        writeln!(out, "{}", MatrixFile::from_matrix(&rho).to_json())?;
        out.flush()?;
        return Ok(());
    }
    let p = args.model.params()?;
    let rho = ness_density(&p)?;
    let rec = ObservableRecord {
        r: p.big_r(),
        alpha: p.alpha(),
        t: None,
        entropy: Some(entropy_ness(&p)?),
        fidelity: Some(fidelity_ness(&p)),
        purity: Some(observables::purity(&rho)?),
        concurrence: Some(concurrence_ness(&p)?),
    };
    rec.check_bounds()?;
    write_records(&args.output, &[rec])
}

fn run_timeseries(args: &TimeseriesArgs) -> Result<(), Failure> {
    let p = args.model.params()?;
    let times = parse_times(&args.t)?;
    let rescaled: Vec<f64> = times.iter().map(|t| t * p.omega()).collect();
    let records = sweep::timeseries(&p, &rescaled)?;
    write_records(&args.output, &records)
}

fn run_sweep(args: &SweepArgs) -> Result<(), Failure> {
    let observables = args.observables.split(',').map(Observable::parse).collect::<Result<Vec<_>, _>>()?;
    let grid =
        SweepGrid::new(Axis::parse(&args.grid_r)?.values(), Axis::parse(&args.grid_alpha)?.values(), observables)?;
    let mut w = RecordWriter::new(open_output(&args.output.out)?, args.output.format.into());
    sweep::run_sweep(&grid, &mut w)?;
    w.into_inner().flush()?;
    Ok(())
}

fn run_optimize(args: &OptimizeArgs) -> Result<(), Failure> {
    let m = sweep::optimize_concurrence(args.alpha, (args.r_min, args.r_max))?;
    write_json(
        &args.out,
        json!({
            "alpha": args.alpha,
            "r_star": m.x,
            "c_star": m.value,
            "on_boundary": m.on_boundary,
            "degenerate": m.degenerate,
        }),
    )
}

fn run_critical(args: &CriticalArgs) -> Result<(), Failure> {
    let search = SearchBox { r: parse_range(&args.box_r)?, alpha: parse_range(&args.box_alpha)? };
    let cp = sweep::find_inflection(search)?;
    write_json(
        &args.out,
        json!({
            "r_c": cp.r_c,
            "alpha_c": cp.alpha_c,
            "residual_first": cp.residuals.0,
            "residual_second": cp.residuals.1,
        }),
    )
}

fn run_peak_r(args: &PeakRArgs) -> Result<(), Failure> {
    let m = sweep::find_entropy_peak_r(args.t, args.alpha, (args.r_min, args.r_max))?;
    write_json(
        &args.out,
        json!({
            "t": args.t,
            "alpha": args.alpha,
            "r_star": m.x,
            "s_star": m.value,
            "on_boundary": m.on_boundary,
        }),
    )?;
    if m.on_boundary {
        return Err(Failure { code: 3, message: "entropy maximum lies on the search boundary".into() });
    }
    Ok(())
}

fn run_mc(args: &McArgs) -> Result<(), Failure> {
    let p = args.model.params()?;
    let report = sweep::mc_validate(&p, args.t * p.omega(), args.ntraj, args.seed, args.against_ness)?;
    write_json(
        &args.out,
        json!({
            "n_traj": report.n_traj,
            "seed": args.seed,
            "max_z": report.max_z,
            "max_z_ness": report.max_z_ness,
            "pass": report.pass,
        }),
    )?;
    if !report.pass {
        return Err(Failure::validation("trajectory estimate deviates by more than 5 standard errors"));
    }
    Ok(())
}

fn configure_threads(flag: Option<usize>) -> Result<(), Failure> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => {
                Some(v.trim().parse().map_err(|_| Failure::config(format!("{THREADS_ENV}='{v}' is not a count")))?)
            }
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        if n == 0 {
            return Err(Failure::config("thread count must be >= 1"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::config(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads(cli.threads)?;
    match &cli.command {
        Command::Ness(a) => run_ness(a),
        Command::Timeseries(a) => run_timeseries(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Optimize(a) => run_optimize(a),
        Command::Critical(a) => run_critical(a),
        Command::PeakR(a) => run_peak_r(a),
        Command::McValidate(a) => run_mc(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
