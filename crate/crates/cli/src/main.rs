//! Command-line front end: single protocol runs with branch tables,
//! parameter sweeps to CSV, seeded Monte Carlo estimates, and the named
//! verification battery.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 I/O error.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qteleport::analysis::{
    mc_p0_dense, mc_p0_pure, mc_p1_ghz, mc_p1_w, n_sweep, noise_sweep, nu_sweep, oracle,
    p0_average, p1_ghz_average, p1_w_average, theta_sweep, FidelityReport, McEstimate,
    ResourceKind, SphereQuadrature,
};
use qteleport::protocols::{
    run_p0, run_p1_ghz_with_table, run_p1_w_with_table, CorrectionTable, OutcomeRecord,
    MAX_W_PARTIES,
};
use qteleport::states::noisy_state;
use qteleport::verify::{run_battery, VerifyOptions};
use qteleport::{BlochAngles, Error, MeasurementAngle, Visibility};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "qteleport",
    version,
    about = "Teleportation simulator over three-particle entangled resources"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one protocol instance and print its branch table and average.
    Run(RunArgs),
    /// Sweep a parameter and emit `param,simulated,oracle,deviation` CSV.
    Sweep(SweepArgs),
    /// Run the named verification battery; exit 0 only if every check passes.
    Verify(VerifyArgs),
    /// Seeded Monte Carlo estimates of the sphere-averaged fidelity.
    Mc(McArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Resource {
    Ghz,
    W,
}

impl Resource {
    fn kind(self) -> ResourceKind {
        match self {
            Resource::Ghz => ResourceKind::Ghz,
            Resource::W => ResourceKind::W,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Protocol {
    /// Measured accomplice: Bell measurement plus a tunable single-qubit
    /// measurement.
    P0,
    /// Co-receiver: Bell measurement only, remaining parties split the
    /// state.
    P1,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SweepParam {
    Nu,
    W,
    N,
    Theta,
}

#[derive(Copy, Clone)]
struct QuadSize {
    n_theta: usize,
    n_phi: usize,
}

fn parse_quad(s: &str) -> Result<QuadSize, String> {
    let (a, b) = s
        .split_once('x')
        .ok_or_else(|| format!("expected <n_theta>x<n_phi>, got `{s}`"))?;
    let n_theta: usize = a.parse().map_err(|_| format!("bad node count `{a}`"))?;
    let n_phi: usize = b.parse().map_err(|_| format!("bad node count `{b}`"))?;
    if n_theta < 2 || n_phi < 2 {
        return Err("quadrature needs at least 2x2 nodes".into());
    }
    Ok(QuadSize { n_theta, n_phi })
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    resource: Resource,
    #[arg(long, value_enum)]
    protocol: Protocol,
    /// Input polar angle (radians unless --deg). Default pi/3.
    #[arg(long)]
    theta: Option<f64>,
    /// Input azimuth (radians unless --deg). Default pi/4.
    #[arg(long)]
    phi: Option<f64>,
    /// Accomplice measurement angle; required for p0, forbidden for p1.
    #[arg(long)]
    nu: Option<f64>,
    /// Resource visibility against white noise; p0 only.
    #[arg(long)]
    w: Option<f64>,
    /// Party count for the w resource with p1. Default 3.
    #[arg(long)]
    n: Option<usize>,
    /// Receiving party label for p1. Default 3.
    #[arg(long)]
    receiver: Option<u32>,
    /// Interpret all angle flags as degrees.
    #[arg(long)]
    deg: bool,
    #[arg(long, value_parser = parse_quad, default_value = "32x32")]
    quad: QuadSize,
    /// Correction table file (`j k pauli` lines) replacing the shipped one.
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    param: SweepParam,
    #[arg(long, value_enum)]
    resource: Resource,
    #[arg(long, value_enum)]
    protocol: Protocol,
    /// Measurement angle held fixed during w and theta sweeps. Default pi/4.
    #[arg(long)]
    nu: Option<f64>,
    /// Sweep start (defaults to the parameter's domain start).
    #[arg(long)]
    from: Option<f64>,
    /// Sweep end (defaults to the parameter's domain end).
    #[arg(long)]
    to: Option<f64>,
    /// Number of grid points, endpoints included. Ignored for n sweeps,
    /// which step through the integer range.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    deg: bool,
    #[arg(long, value_parser = parse_quad, default_value = "32x32")]
    quad: QuadSize,
    #[arg(long)]
    table: Option<PathBuf>,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_quad)]
    quad: Option<QuadSize>,
    /// Points per axis in branch-level comparison grids.
    #[arg(long)]
    grid: Option<usize>,
    /// Monte Carlo seed; repeat the flag for several consistency checks.
    #[arg(long = "seed")]
    seeds: Vec<u64>,
    #[arg(long)]
    shots: Option<u64>,
    /// Correction table file replacing one shipped table; needs --resource
    /// and --protocol to pick which.
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long, value_enum)]
    resource: Option<Resource>,
    #[arg(long, value_enum)]
    protocol: Option<Protocol>,
}

#[derive(Args)]
struct McArgs {
    #[arg(long, value_enum)]
    resource: Resource,
    #[arg(long, value_enum)]
    protocol: Protocol,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    w: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    receiver: Option<u32>,
    #[arg(long, default_value_t = 20_000)]
    shots: u64,
    /// RNG seed; repeat the flag for several independent estimates.
    #[arg(long = "seed")]
    seeds: Vec<u64>,
    #[arg(long)]
    deg: bool,
    #[arg(long)]
    table: Option<PathBuf>,
    /// CSV destination (`param` column holds the seed); stdout lines when
    /// omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

enum CliError {
    Core(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Io(m) => m.clone(),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(_) => EXIT_CONFIG,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

fn config(msg: impl Into<String>) -> CliError {
    CliError::Core(Error::Config(msg.into()))
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Mc(a) => cmd_mc(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn radians(value: f64, deg: bool) -> f64 {
    if deg {
        value.to_radians()
    } else {
        value
    }
}

fn quadrature(size: QuadSize) -> Result<SphereQuadrature, CliError> {
    Ok(SphereQuadrature::new(size.n_theta, size.n_phi)?)
}

fn load_table(path: &Path) -> Result<CorrectionTable, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    Ok(CorrectionTable::parse(&text)?)
}

fn write_output(path: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, content).map_err(|e| io_error(p, e)),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn branch_table(records: &[OutcomeRecord]) -> String {
    let mut out = String::from(" j  k  probability     fidelity\n");
    for r in records {
        let k = r.k.map_or("-".to_string(), |k| k.to_string());
        let fid = r
            .fidelity
            .map_or("degenerate".to_string(), |f| format!("{f:.12}"));
        let _ = writeln!(out, " {}  {}  {:.12}  {}", r.j, k, r.branch_probability, fid);
    }
    out
}

fn cmd_run(a: RunArgs) -> Result<ExitCode, CliError> {
    let theta = a.theta.map(|v| radians(v, a.deg)).unwrap_or(PI / 3.0);
    let phi = a.phi.map(|v| radians(v, a.deg)).unwrap_or(FRAC_PI_4);
    let angles = BlochAngles::new(theta, phi)?;
    let quad = quadrature(a.quad)?;
    let kind = a.resource.kind();

    match a.protocol {
        Protocol::P0 => {
            if a.n.is_some() || a.receiver.is_some() {
                return Err(config("--n and --receiver apply to protocol p1 only"));
            }
            let nu_val = a
                .nu
                .map(|v| radians(v, a.deg))
                .ok_or_else(|| config("--nu is required for protocol p0"))?;
            let nu = MeasurementAngle::new(nu_val)?;
            let table = match &a.table {
                Some(p) => load_table(p)?,
                None => kind.p0_table(),
            };
            let pure = kind.pure_state();
            let (state, oracle_value) = match a.w {
                Some(w) => {
                    let noisy = noisy_state(&pure, Visibility::new(w)?)?;
                    let o = match kind {
                        ResourceKind::Ghz => oracle::ghz_noisy_average(nu.value(), w)?,
                        ResourceKind::W => oracle::w_noisy_average(w)?,
                    };
                    (noisy, o)
                }
                None => {
                    let o = match kind {
                        ResourceKind::Ghz => oracle::ghz_average(nu.value())?,
                        ResourceKind::W => oracle::w_average(),
                    };
                    (pure, o)
                }
            };
            let records = run_p0(&state, angles, nu, &table)?;
            println!(
                "protocol {}-p0  nu {:.6}  theta {:.6}  phi {:.6}",
                kind.id(),
                nu.value(),
                theta,
                phi
            );
            print!("{}", branch_table(&records));
            let avg = p0_average(&state, nu, &table, &quad)?;
            println!(
                "sphere average {avg:.12}  oracle {oracle_value:.12}  deviation {:.3e}",
                (avg - oracle_value).abs()
            );
        }
        Protocol::P1 => {
            if a.nu.is_some() {
                return Err(config("protocol p1 has no accomplice measurement angle"));
            }
            if a.w.is_some() {
                return Err(config("visibility sweeps cover protocol p0 only"));
            }
            let receiver = a.receiver.unwrap_or(3);
            let (records, avg, oracle_value, label) = match kind {
                ResourceKind::W => {
                    let n = a.n.unwrap_or(3);
                    let table = match &a.table {
                        Some(p) => load_table(p)?,
                        None => CorrectionTable::w_p1(),
                    };
                    let records = run_p1_w_with_table(n, angles, receiver, &table)?;
                    let avg = p1_w_average(n, receiver, &table, &quad)?;
                    let o = oracle::party_split_average(n)?;
                    (records, avg, o, format!("w-p1 ({n} parties)"))
                }
                ResourceKind::Ghz => {
                    if a.n.is_some_and(|n| n != 3) {
                        return Err(config("the ghz resource always has 3 parties"));
                    }
                    let table = match &a.table {
                        Some(p) => load_table(p)?,
                        None => CorrectionTable::ghz_p1(),
                    };
                    let records = run_p1_ghz_with_table(angles, receiver, &table)?;
                    let avg = p1_ghz_average(receiver, &table, &quad)?;
                    (records, avg, oracle::ghz_split_average(), "ghz-p1".to_string())
                }
            };
            println!(
                "protocol {label}  receiver {receiver}  theta {theta:.6}  phi {phi:.6}"
            );
            print!("{}", branch_table(&records));
            println!(
                "sphere average {avg:.12}  oracle {oracle_value:.12}  deviation {:.3e}",
                (avg - oracle_value).abs()
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn linspace(from: f64, to: f64, steps: usize) -> Vec<f64> {
    if steps <= 1 {
        return vec![from];
    }
    (0..steps)
        .map(|i| from + (to - from) * i as f64 / (steps - 1) as f64)
        .collect()
}

fn reports_to_csv(reports: &[FidelityReport]) -> String {
    let mut csv = String::from("param,simulated,oracle,deviation\n");
    for r in reports {
        let oracle_value = r.oracle.unwrap_or(f64::NAN);
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            format_g(r.param_value),
            format_g(r.simulated),
            format_g(oracle_value),
            format_g(r.deviation().unwrap_or(f64::NAN))
        );
    }
    csv
}

fn cmd_sweep(a: SweepArgs) -> Result<ExitCode, CliError> {
    let quad = quadrature(a.quad)?;
    let kind = a.resource.kind();
    let p0_table = || -> Result<CorrectionTable, CliError> {
        match &a.table {
            Some(p) => load_table(p),
            None => Ok(kind.p0_table()),
        }
    };
    let fixed_nu = || -> Result<MeasurementAngle, CliError> {
        let v = a.nu.map(|v| radians(v, a.deg)).unwrap_or(FRAC_PI_4);
        Ok(MeasurementAngle::new(v)?)
    };

    let reports = match a.param {
        SweepParam::Nu => {
            if a.protocol != Protocol::P0 {
                return Err(config("nu sweeps cover protocol p0 only"));
            }
            let from = a.from.map(|v| radians(v, a.deg)).unwrap_or(0.0);
            let to = a.to.map(|v| radians(v, a.deg)).unwrap_or(FRAC_PI_2);
            let values = linspace(from, to, a.steps.unwrap_or(9));
            nu_sweep(kind, &values, &p0_table()?, &quad)?
        }
        SweepParam::W => {
            if a.protocol != Protocol::P0 {
                return Err(config("visibility sweeps cover protocol p0 only"));
            }
            let values = linspace(a.from.unwrap_or(0.0), a.to.unwrap_or(1.0), a.steps.unwrap_or(5));
            noise_sweep(kind, fixed_nu()?, &values, &p0_table()?, &quad)?
        }
        SweepParam::N => {
            if a.protocol != Protocol::P1 || a.resource != Resource::W {
                return Err(config(
                    "party-count sweeps cover the w resource with protocol p1",
                ));
            }
            let lo = a.from.unwrap_or(3.0);
            let hi = a.to.unwrap_or(10.0);
            if lo.fract() != 0.0 || hi.fract() != 0.0 {
                return Err(config("party counts must be integers"));
            }
            let (lo, hi) = (lo as usize, hi as usize);
            if lo < 3 || hi > MAX_W_PARTIES || lo > hi {
                return Err(config(format!(
                    "party range must sit inside 3..={MAX_W_PARTIES}"
                )));
            }
            let table = match &a.table {
                Some(p) => load_table(p)?,
                None => CorrectionTable::w_p1(),
            };
            let ns: Vec<usize> = (lo..=hi).collect();
            n_sweep(&ns, &table, &quad)?
        }
        SweepParam::Theta => {
            if a.protocol != Protocol::P0 {
                return Err(config("theta sweeps cover protocol p0 only"));
            }
            let from = a.from.map(|v| radians(v, a.deg)).unwrap_or(0.0);
            let to = a.to.map(|v| radians(v, a.deg)).unwrap_or(PI);
            let values = linspace(from, to, a.steps.unwrap_or(9));
            theta_sweep(kind, fixed_nu()?, &values, &p0_table()?)?
        }
    };
    write_output(a.output.as_ref(), &reports_to_csv(&reports))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: VerifyArgs) -> Result<ExitCode, CliError> {
    let mut opts = VerifyOptions::default();
    if let Some(q) = a.quad {
        opts.quad = quadrature(q)?;
    }
    if let Some(g) = a.grid {
        if g == 0 {
            return Err(config("--grid needs at least one point per axis"));
        }
        opts.grid = g;
    }
    if !a.seeds.is_empty() {
        opts.mc_seeds = a.seeds.clone();
    }
    if let Some(s) = a.shots {
        if s == 0 {
            return Err(config("--shots must be positive"));
        }
        opts.mc_shots = s;
    }
    if let Some(path) = &a.table {
        let table = load_table(path)?;
        match (a.resource, a.protocol) {
            (Some(Resource::Ghz), Some(Protocol::P0)) => opts.tables.ghz_p0 = table,
            (Some(Resource::W), Some(Protocol::P0)) => opts.tables.w_p0 = table,
            (Some(Resource::W), Some(Protocol::P1)) => opts.tables.w_p1 = table,
            (Some(Resource::Ghz), Some(Protocol::P1)) => opts.tables.ghz_p1 = table,
            _ => {
                return Err(config(
                    "--table needs --resource and --protocol to pick the slot it replaces",
                ))
            }
        }
    }
    let results = run_battery(&opts);
    let mut failed = 0usize;
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("{status} {}  {}", r.name, r.detail);
        if !r.passed {
            failed += 1;
        }
    }
    println!("{}/{} checks passed", results.len() - failed, results.len());
    if failed == 0 {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(EXIT_VERIFY_FAILED))
    }
}

fn cmd_mc(a: McArgs) -> Result<ExitCode, CliError> {
    if a.shots == 0 {
        return Err(config("--shots must be positive"));
    }
    let kind = a.resource.kind();
    let seeds = if a.seeds.is_empty() { vec![1] } else { a.seeds.clone() };

    enum Setup {
        P0Pure(MeasurementAngle, CorrectionTable, f64),
        P0Dense(qteleport::DensityOperator, MeasurementAngle, CorrectionTable, f64),
        P1W(usize, u32, CorrectionTable, f64),
        P1Ghz(u32, CorrectionTable, f64),
    }

    let setup = match a.protocol {
        Protocol::P0 => {
            if a.n.is_some() || a.receiver.is_some() {
                return Err(config("--n and --receiver apply to protocol p1 only"));
            }
            let nu_val = a
                .nu
                .map(|v| radians(v, a.deg))
                .ok_or_else(|| config("--nu is required for protocol p0"))?;
            let nu = MeasurementAngle::new(nu_val)?;
            let table = match &a.table {
                Some(p) => load_table(p)?,
                None => kind.p0_table(),
            };
            match a.w {
                Some(w) => {
                    let state = noisy_state(&kind.pure_state(), Visibility::new(w)?)?;
                    let o = match kind {
                        ResourceKind::Ghz => oracle::ghz_noisy_average(nu.value(), w)?,
                        ResourceKind::W => oracle::w_noisy_average(w)?,
                    };
                    Setup::P0Dense(state, nu, table, o)
                }
                None => {
                    let o = match kind {
                        ResourceKind::Ghz => oracle::ghz_average(nu.value())?,
                        ResourceKind::W => oracle::w_average(),
                    };
                    Setup::P0Pure(nu, table, o)
                }
            }
        }
        Protocol::P1 => {
            if a.nu.is_some() || a.w.is_some() {
                return Err(config("--nu and --w apply to protocol p0 only"));
            }
            let receiver = a.receiver.unwrap_or(3);
            match kind {
                ResourceKind::W => {
                    let n = a.n.unwrap_or(3);
                    let table = match &a.table {
                        Some(p) => load_table(p)?,
                        None => CorrectionTable::w_p1(),
                    };
                    Setup::P1W(n, receiver, table, oracle::party_split_average(n)?)
                }
                ResourceKind::Ghz => {
                    let table = match &a.table {
                        Some(p) => load_table(p)?,
                        None => CorrectionTable::ghz_p1(),
                    };
                    Setup::P1Ghz(receiver, table, oracle::ghz_split_average())
                }
            }
        }
    };

    let mut csv = String::from("param,simulated,oracle,deviation\n");
    let mut lines = String::new();
    for &seed in &seeds {
        let (est, oracle_value): (McEstimate, f64) = match &setup {
            Setup::P0Pure(nu, table, o) => (mc_p0_pure(kind, *nu, table, a.shots, seed)?, *o),
            Setup::P0Dense(state, nu, table, o) => {
                (mc_p0_dense(state, *nu, table, a.shots, seed)?, *o)
            }
            Setup::P1W(n, receiver, table, o) => {
                (mc_p1_w(*n, *receiver, table, a.shots, seed)?, *o)
            }
            Setup::P1Ghz(receiver, table, o) => {
                (mc_p1_ghz(*receiver, table, a.shots, seed)?, *o)
            }
        };
        let dev = (est.mean - oracle_value).abs();
        let _ = writeln!(
            lines,
            "seed {seed}: mean {:.12}  std error {:.3e}  oracle {oracle_value:.12}  deviation {dev:.3e}",
            est.mean, est.std_error
        );
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            seed,
            format_g(est.mean),
            format_g(oracle_value),
            format_g(dev)
        );
    }
    match &a.output {
        Some(path) => fs::write(path, csv).map_err(|e| io_error(path, e))?,
        None => print!("{lines}"),
    }
    Ok(ExitCode::SUCCESS)
}

/// Formats with 12 significant digits, trimming trailing zeros; scientific
/// notation outside `[1e-4, 1e12)`, mirroring printf's `%.12g`.
fn format_g(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("{:e} always carries an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        if fixed.contains('.') {
            fixed.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            fixed
        }
    } else {
        let trimmed = mantissa.trim_end_matches('0').trim_end_matches('.');
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{trimmed}e{sign}{:02}", exp.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_g_matches_printf_style() {
        assert_eq!(format_g(0.0), "0");
        assert_eq!(format_g(1.0), "1");
        assert_eq!(format_g(0.5), "0.5");
        assert_eq!(format_g(2.0 / 3.0), "0.666666666667");
        assert_eq!(format_g(7.0 / 9.0), "0.777777777778");
        assert_eq!(format_g(1e-4), "0.0001");
        assert_eq!(format_g(1e-5), "1e-05");
        assert_eq!(format_g(-1.5e-13), "-1.5e-13");
        assert_eq!(format_g(123456789012.0), "123456789012");
        assert_eq!(format_g(120000000000.0), "120000000000");
        assert_eq!(format_g(1e12), "1e+12");
        assert_eq!(format_g(std::f64::consts::PI), "3.14159265359");
        assert_eq!(format_g(-2.5), "-2.5");
        assert_eq!(format_g(9.999999999999e-1), "1");
    }

    #[test]
    fn quad_size_parsing() {
        assert!(parse_quad("8x8").is_ok());
        assert!(parse_quad("8").is_err());
        assert!(parse_quad("1x8").is_err());
        assert!(parse_quad("axb").is_err());
    }

    #[test]
    fn linspace_hits_endpoints() {
        let v = linspace(0.0, 1.0, 5);
        assert_eq!(v, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(linspace(2.0, 3.0, 1), vec![2.0]);
    }
}
