//! `grover-control`: command-line tools around the time-optimal control
//! library for the two-level reduction of quantum search.
//!
//! Exit codes: 0 success, 1 necessary-condition verification failed,
//! 2 usage or domain error, 3 I/O error.

use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use grover_control::{
    csv, evolve, gradient_descent, initial_state, optimal_times, project_trajectory,
    singular_arc_theta, sweep_times, t2_of_t1, verify, Overlap, PmpConfig, Protocol, Segment,
};

#[derive(Parser)]
#[command(
    name = "grover-control",
    version,
    about = "Time-optimal control of the two-level reduction of quantum search",
    long_about = "Computes closed-form optimal switching times, evolves piecewise-constant \
                  control protocols exactly, verifies Pontryagin necessary conditions, sweeps \
                  qubit counts, and runs adjoint-gradient control optimization. Time-valued \
                  options accept a `pi` suffix (e.g. --tf 1.3pi)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the closed-form optimal switching times (t1*, t2*, tf*)
    OptimalTimes {
        #[command(flatten)]
        overlap: OverlapArgs,
        /// Output rendering: pi-units text, csv row, or json
        #[arg(long, value_enum, default_value_t = TimesFormat::Text)]
        format: TimesFormat,
        /// Write to a file instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evolve a protocol and write trajectory CSV (plus a Bloch-projected
    /// CSV when writing to files)
    Evolve {
        #[command(flatten)]
        overlap: OverlapArgs,
        #[command(flatten)]
        protocol: ProtocolArgs,
        /// Samples per protocol segment (at least 2)
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Trajectory CSV path (default: stdout)
        #[arg(long)]
        output: Option<PathBuf>,
        /// Bloch-projection CSV path (default: derived from --output)
        #[arg(long)]
        bloch_output: Option<PathBuf>,
        /// Also write singular-arc samples (phi,theta CSV)
        #[arg(long)]
        with_arc: bool,
        /// Singular-arc CSV path (default: derived from --output)
        #[arg(long)]
        arc_output: Option<PathBuf>,
    },
    /// Check the Pontryagin necessary conditions along a protocol; exits 1
    /// if any condition fails
    Verify {
        #[command(flatten)]
        overlap: OverlapArgs,
        #[command(flatten)]
        protocol: ProtocolArgs,
        /// Uniform samples over [0, tf]
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        /// |phi| above this counts as a definite sign. The default is loose
        /// enough for protocol parameters quoted to 4 decimals; tighten it
        /// when verifying full-precision optima
        #[arg(long, default_value_t = 1e-4)]
        tol_phi: f64,
        /// Allowed c-Hamiltonian deviation from constancy
        #[arg(long, default_value_t = 1e-4)]
        tol_hc: f64,
        /// Report JSON path (default: stdout)
        #[arg(long)]
        output: Option<PathBuf>,
        /// Sampled t,u,phi,hc CSV path (default: derived from --output)
        #[arg(long)]
        records_output: Option<PathBuf>,
    },
    /// Tabulate optimal / singular / search-iteration total times over a
    /// range of qubit counts
    Sweep {
        /// Smallest qubit count
        #[arg(long, default_value_t = 1)]
        n_min: u32,
        /// Largest qubit count
        #[arg(long, default_value_t = 40)]
        n_max: u32,
        /// Emit time columns in units of pi
        #[arg(long)]
        pi_units: bool,
        /// csv table or json rows
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        /// Write to a file instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Projected gradient ascent on a gridded control; prints the result
    /// as JSON
    GradOpt {
        #[command(flatten)]
        overlap: OverlapArgs,
        /// Total time (pi suffix allowed)
        #[arg(long, value_parser = parse_time)]
        tf: f64,
        /// Number of control cells (at least 10)
        #[arg(long, default_value_t = 100)]
        cells: usize,
        /// Maximum accepted gradient steps
        #[arg(long, default_value_t = 200)]
        max_iter: usize,
        /// Write to a file instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sample the singular arc theta(phi) as CSV
    BlochArc {
        #[command(flatten)]
        overlap: OverlapArgs,
        /// Number of arc samples
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// Smallest phi (pi suffix allowed)
        #[arg(long, value_parser = parse_time, default_value = "0")]
        phi_min: f64,
        /// Largest phi (pi suffix allowed)
        #[arg(long, value_parser = parse_time, default_value = "1pi")]
        phi_max: f64,
        /// Write to a file instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct OverlapArgs {
    /// Overlap x in (0, 1)
    #[arg(long, conflicts_with = "n", required_unless_present = "n")]
    x: Option<f64>,
    /// Qubit count n (sets x = 2^(-n/2))
    #[arg(long)]
    n: Option<u32>,
}

impl OverlapArgs {
    fn overlap(&self) -> Result<Overlap, CliError> {
        match (self.x, self.n) {
            (Some(v), None) => Ok(Overlap::new(v)?),
            (None, Some(n)) => Ok(Overlap::from_qubits(n)?),
            _ => unreachable!("clap enforces exactly one of --x/--n"),
        }
    }
}

#[derive(Args)]
struct ProtocolArgs {
    /// Protocol family
    #[arg(long, value_enum)]
    protocol: ProtocolKind,
    /// Total time (pi suffix allowed). singular: drift duration; bsb:
    /// fixes t2 = tf - 2 t1; multibang: required
    #[arg(long, value_parser = parse_time)]
    tf: Option<f64>,
    /// Opening/closing bang duration for bsb and multibang (pi suffix
    /// allowed). Defaults to the closed-form t1* for bsb
    #[arg(long, value_parser = parse_time)]
    t1: Option<f64>,
    /// Search-iteration cycle count for grover (default round(pi/(4x)))
    #[arg(long)]
    cycles: Option<usize>,
    /// Inner bang-pair count for multibang
    #[arg(long, default_value_t = 2)]
    n_bangs: usize,
    /// Protocol JSON file for --protocol custom
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProtocolKind {
    Singular,
    Grover,
    Bsb,
    Multibang,
    Custom,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TimesFormat {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

impl ProtocolArgs {
    fn build(&self, x: Overlap) -> Result<Protocol, CliError> {
        match self.protocol {
            ProtocolKind::Singular => Ok(match self.tf {
                None => Protocol::singular(x),
                Some(tf) => Protocol::new(
                    "singular",
                    vec![Segment {
                        duration: tf,
                        u: 0.0,
                    }],
                )?,
            }),
            ProtocolKind::Grover => {
                let cycles = match self.cycles {
                    Some(0) => {
                        return Err(CliError::Domain(
                            "--cycles must be at least 1".into(),
                        ))
                    }
                    Some(c) => c,
                    None => (PI / (4.0 * x.value())).round().max(1.0) as usize,
                };
                Ok(Protocol::grover_cycles(x, cycles))
            }
            ProtocolKind::Bsb => {
                let closed = optimal_times(x)?;
                let t1 = self.t1.unwrap_or(closed.t1);
                let t2 = match self.tf {
                    Some(tf) => tf - 2.0 * t1,
                    // With an explicit t1 but no tf, take the singular-leg
                    // duration that still reaches the target exactly.
                    None if self.t1.is_some() => t2_of_t1(t1, x)?,
                    None => closed.t2,
                };
                Ok(Protocol::bang_singular_bang(t1, t2)?)
            }
            ProtocolKind::Multibang => {
                let (t1, tf) = match (self.t1, self.tf) {
                    (Some(t1), Some(tf)) => (t1, tf),
                    _ => {
                        return Err(CliError::Domain(
                            "--protocol multibang requires --t1 and --tf".into(),
                        ))
                    }
                };
                Ok(Protocol::multiple_bang(t1, self.n_bangs, tf)?)
            }
            ProtocolKind::Custom => {
                let path = self.file.as_ref().ok_or_else(|| {
                    CliError::Domain("--protocol custom requires --file".into())
                })?;
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::Domain(format!("invalid protocol file: {e}")))
            }
        }
    }
}

enum CliError {
    Domain(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Domain(m) | CliError::Io(m) => m,
        }
    }
}

impl From<grover_control::Error> for CliError {
    fn from(e: grover_control::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

/// Parse a time value with an optional `pi` suffix: "1.3pi" -> 1.3 * pi.
fn parse_time(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let (digits, scale) = match t.strip_suffix("pi") {
        Some(head) => (head.trim_end(), PI),
        None => (t, 1.0),
    };
    let v: f64 = digits
        .parse()
        .map_err(|_| format!("expected a number with optional `pi` suffix, got '{s}'"))?;
    Ok(v * scale)
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes)
            .map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

/// Sibling path with an extra extension step: traj.csv -> traj.<tag>.csv.
fn derived_path(base: &Path, tag: &str) -> PathBuf {
    base.with_extension(format!("{tag}.csv"))
}

fn to_pretty_json<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("plain data serializes");
    bytes.push(b'\n');
    bytes
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::OptimalTimes {
            overlap,
            format,
            output,
        } => {
            let t = optimal_times(overlap.overlap()?)?;
            let bytes = match format {
                TimesFormat::Text => format!(
                    "t1 = {:.6} pi\nt2 = {:.6} pi\ntf = {:.6} pi\n",
                    t.t1 / PI,
                    t.t2 / PI,
                    t.tf / PI
                )
                .into_bytes(),
                TimesFormat::Csv => format!(
                    "t1,t2,tf\n{:.16e},{:.16e},{:.16e}\n",
                    t.t1, t.t2, t.tf
                )
                .into_bytes(),
                TimesFormat::Json => to_pretty_json(&t),
            };
            write_output(output.as_deref(), &bytes)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Evolve {
            overlap,
            protocol,
            samples,
            output,
            bloch_output,
            with_arc,
            arc_output,
        } => {
            if samples < 2 {
                return Err(CliError::Domain(format!(
                    "--samples must be at least 2, got {samples}"
                )));
            }
            let x = overlap.overlap()?;
            let p = protocol.build(x)?;
            let traj = evolve(x, &initial_state(x), &p, samples)?;

            let mut buf = Vec::new();
            csv::write_trajectory(&mut buf, &traj).expect("in-memory write");
            write_output(output.as_deref(), &buf)?;

            let bloch_path = bloch_output
                .or_else(|| output.as_deref().map(|o| derived_path(o, "bloch")));
            if let Some(path) = bloch_path {
                let mut buf = Vec::new();
                csv::write_bloch(&mut buf, &project_trajectory(&traj)).expect("in-memory write");
                write_output(Some(&path), &buf)?;
            }

            if with_arc || arc_output.is_some() {
                let path = arc_output
                    .or_else(|| output.as_deref().map(|o| derived_path(o, "arc")))
                    .ok_or_else(|| {
                        CliError::Domain("--with-arc needs --output or --arc-output".into())
                    })?;
                let points: Vec<(f64, f64)> = (0..200)
                    .map(|i| {
                        let phi = PI * i as f64 / 199.0;
                        (phi, singular_arc_theta(x, phi))
                    })
                    .collect();
                let mut buf = Vec::new();
                csv::write_arc(&mut buf, &points).expect("in-memory write");
                write_output(Some(&path), &buf)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            overlap,
            protocol,
            samples,
            tol_phi,
            tol_hc,
            output,
            records_output,
        } => {
            let x = overlap.overlap()?;
            let p = protocol.build(x)?;
            let config = PmpConfig {
                tol_phi,
                tol_hc,
                samples,
                ..PmpConfig::default()
            };
            let report = verify(x, &p, &config)?;
            write_output(output.as_deref(), &to_pretty_json(&report))?;

            let records_path = records_output
                .or_else(|| output.as_deref().map(|o| derived_path(o, "records")));
            if let Some(path) = records_path {
                let mut buf = Vec::new();
                csv::write_records(&mut buf, &report.records).expect("in-memory write");
                write_output(Some(&path), &buf)?;
            }
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Sweep {
            n_min,
            n_max,
            pi_units,
            format,
            output,
        } => {
            let rows = sweep_times(n_min, n_max)?;
            let bytes = match format {
                TableFormat::Csv => {
                    let mut buf = Vec::new();
                    csv::write_sweep(&mut buf, &rows, pi_units).expect("in-memory write");
                    buf
                }
                TableFormat::Json => to_pretty_json(&rows),
            };
            write_output(output.as_deref(), &bytes)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::GradOpt {
            overlap,
            tf,
            cells,
            max_iter,
            output,
        } => {
            let result = gradient_descent(overlap.overlap()?, tf, cells, max_iter)?;
            write_output(output.as_deref(), &to_pretty_json(&result))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::BlochArc {
            overlap,
            points,
            phi_min,
            phi_max,
            output,
        } => {
            if points < 2 {
                return Err(CliError::Domain(format!(
                    "--points must be at least 2, got {points}"
                )));
            }
            if !(phi_min.is_finite() && phi_max.is_finite()) || phi_min >= phi_max {
                return Err(CliError::Domain(format!(
                    "need --phi-min < --phi-max, got {phi_min} and {phi_max}"
                )));
            }
            let x = overlap.overlap()?;
            let arc: Vec<(f64, f64)> = (0..points)
                .map(|i| {
                    let phi = phi_min + (phi_max - phi_min) * i as f64 / (points - 1) as f64;
                    (phi, singular_arc_theta(x, phi))
                })
                .collect();
            let mut buf = Vec::new();
            csv::write_arc(&mut buf, &arc).expect("in-memory write");
            write_output(output.as_deref(), &buf)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
