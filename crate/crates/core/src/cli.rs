//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification found a nonzero gap, 2 unreadable
//! or invalid input, 3 solver invariant violation, 4 pivot budget exceeded.
//! Errors are printed to stderr as one JSON object.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::homotopy::SolverOptions;
use crate::instances::{nested_braess, paper_example};
use crate::io::{check_continuity, parse_series, plot_csv, read_instance, read_json, sample_csv, to_json, CurveFile, InstanceFile};
use crate::number::{format_rational, parse_rational, to_f64, ExtendedRational, Rational};
use crate::oracle::{equilibrium_at, verify_equilibrium, OracleOptions};

#[derive(Parser, Debug)]
#[command(name = "pwl-wardrop", version, about = "Exact parametric Wardrop equilibria for piecewise-linear costs")]
pub struct Cli {
    /// Print solver statistics to stderr.
    #[arg(long, global = true, env = "PWLW_VERBOSE")]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the equilibrium curve of an instance.
    Solve {
        instance: PathBuf,
        /// Stop the curve at this demand.
        #[arg(long)]
        lambda_max: Option<String>,
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Pivot budget.
        #[arg(long, env = "PWLW_MAX_PIVOTS", default_value_t = 100_000)]
        max_pivots: usize,
    },
    /// Evaluate a curve at given demands.
    Sample {
        curve: PathBuf,
        /// Comma-separated demands, e.g. `0,7/2,5`.
        #[arg(long, short, value_delimiter = ',', required = true)]
        lambda: Vec<String>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Check a curve against its instance at sampled demands.
    Verify {
        instance: PathBuf,
        curve: PathBuf,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        /// Also compare against the path-swap oracle in floats.
        #[arg(long)]
        oracle: bool,
        #[arg(long, env = "PWLW_ORACLE_TOL", default_value_t = 1e-8)]
        tolerance: f64,
    },
    /// Write a generated instance.
    Generate {
        #[command(subcommand)]
        family: Family,
    },
    /// Breakpoint pairs `(λ, value)` of selected series as CSV.
    Plotdata {
        curve: PathBuf,
        /// Comma-separated edge or vertex labels, `x:<edge>` or `pi:<vertex>`.
        #[arg(long, short, value_delimiter = ',')]
        series: Vec<String>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum Family {
    /// The j-th nested Braess network.
    Braess {
        #[arg(long)]
        j: usize,
        /// Slope replacing the constant costs; omit for constant costs.
        #[arg(long)]
        eps: Option<String>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// A worked example by name.
    Example {
        name: String,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Invariant(_) | Error::Singular | Error::ZeroPivot | Error::Convergence(_) => 3,
        Error::Budget(_) => 4,
        _ => 2,
    }
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::Parse(_) => "parse",
        Error::Network(_) => "network",
        Error::Cost { .. } => "cost",
        Error::Dimension { .. } => "dimension",
        Error::Singular => "singular",
        Error::ZeroPivot => "zero_pivot",
        Error::Invariant(_) => "invariant",
        Error::Budget(_) => "budget",
        Error::OutOfRange(_) => "out_of_range",
        Error::Convergence(_) => "convergence",
        Error::Unknown(_) => "unknown",
        Error::Io(_) => "io",
    }
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn parse_lambdas(items: &[String]) -> Result<Vec<Rational>> {
    items.iter().map(|s| parse_rational(s)).collect()
}

/// Runs a parsed command; the returned code is the process exit status.
pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match dispatch(cli, stdout, stderr) {
        Ok(code) => code,
        Err(err) => {
            let report = serde_json::json!({ "error": error_kind(&err), "message": err.to_string() });
            let _ = writeln!(stderr, "{report}");
            exit_code(&err)
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli, stdout, stderr),
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            }
        }
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Solve { instance, lambda_max, out, format, max_pivots } => {
            let bundle = read_instance(instance)?;
            let lambda_max = lambda_max.as_deref().map(parse_rational).transpose()?;
            let opts = SolverOptions { lambda_max, max_pivots: *max_pivots, ..bundle.options() };
            let (net, costs, curve) = bundle.solve(&opts)?;
            if cli.verbose {
                let st = &curve.stats;
                let _ = writeln!(
                    stderr,
                    "segments {} pivots {} degenerate {} jumps {} max_bits {} reinversions {}",
                    curve.regular_segments().count(),
                    st.pivots,
                    st.degenerate_points,
                    st.jumps,
                    st.max_coeff_bits,
                    st.reinversions
                );
            }
            let text = match format {
                Format::Json => to_json(&CurveFile::from_curve(&net, &curve, Some(&bundle))),
                Format::Csv => {
                    sample_csv(&curve, net.edge_labels(), net.vertex_labels(), Some(&costs), &curve.breakpoints())?
                }
            };
            emit(out.as_deref(), &text, stdout)?;
            Ok(0)
        }
        Command::Sample { curve, lambda, out } => {
            let file: CurveFile = read_json(curve)?;
            let parsed = file.to_curve()?;
            check_continuity(&parsed)?;
            let costs = match &file.instance {
                Some(inst) => Some(inst.to_bundle()?.build()?.1),
                None => None,
            };
            let lambdas = parse_lambdas(lambda)?;
            let text = sample_csv(&parsed, &file.edges, &file.vertices, costs.as_deref(), &lambdas)?;
            emit(out.as_deref(), &text, stdout)?;
            Ok(0)
        }
        Command::Verify { instance, curve, samples, oracle, tolerance } => {
            let bundle = read_instance(instance)?;
            let file: CurveFile = read_json(curve)?;
            if let Some(embedded) = &file.instance {
                if embedded.to_bundle()?.edges != bundle.edges {
                    return Err(Error::Parse("curve was computed for a different instance".into()));
                }
            }
            let (net, costs) = bundle.build()?;
            if file.edges != net.edge_labels() || file.vertices != net.vertex_labels() {
                return Err(Error::Parse("curve labels do not match the instance".into()));
            }
            let parsed = file.to_curve()?;
            let opts = OracleOptions { tolerance: *tolerance, ..OracleOptions::default() };
            let mut max_gap = Rational::zero();
            let mut max_dev = 0.0f64;
            let mut checked = 0;
            let mut not_flows = 0;
            for seg in parsed.regular_segments() {
                let width = match &seg.lambda_hi {
                    ExtendedRational::Finite(hi) => hi - &seg.lambda_lo,
                    _ => Rational::from_integer(1.into()),
                };
                for k in 0..*samples {
                    let frac = Rational::new((2 * k + 1).into(), (2 * samples).into());
                    let lam = &seg.lambda_lo + &width * frac;
                    let x = seg.flow_at(&lam);
                    checked += 1;
                    let cert = match verify_equilibrium(&net, &costs, &x) {
                        Ok(cert) => cert,
                        Err(Error::Invariant(msg)) => {
                            let _ = writeln!(stdout, "lambda {}: {msg}", format_rational(&lam));
                            not_flows += 1;
                            continue;
                        }
                        Err(e) => return Err(e),
                    };
                    if cert.gap > max_gap {
                        max_gap = cert.gap.clone();
                    }
                    if *oracle {
                        let sol = equilibrium_at(&net, &costs, &lam, &opts)?;
                        let pi = seg.potential_at(&lam);
                        let cost = to_f64(&(&pi[net.sink()] - &pi[net.source()]));
                        max_dev = max_dev.max((sol.path_cost - cost).abs());
                    }
                }
            }
            let continuous = match check_continuity(&parsed) {
                Ok(()) => true,
                Err(e) => {
                    let _ = writeln!(stdout, "{e}");
                    false
                }
            };
            let mut report = format!("checked {checked} samples, max gap {}", format_rational(&max_gap));
            if not_flows > 0 {
                report += &format!(", {not_flows} samples are not s-t flows");
            }
            if *oracle {
                report += &format!(", max oracle deviation {max_dev:e}");
            }
            let _ = writeln!(stdout, "{report}");
            let ok = max_gap.is_zero() && not_flows == 0 && continuous && (!*oracle || max_dev <= 1e-6);
            Ok(if ok { 0 } else { 1 })
        }
        Command::Generate { family } => {
            let (bundle, out) = match family {
                Family::Braess { j, eps, out } => {
                    let eps = eps.as_deref().map(parse_rational).transpose()?;
                    if eps.as_ref().is_some_and(|e| !e.is_positive()) {
                        return Err(Error::Parse("eps must be positive".into()));
                    }
                    (nested_braess(*j, eps)?, out)
                }
                Family::Example { name, out } => (paper_example(name)?, out),
            };
            emit(out.as_deref(), &to_json(&InstanceFile::from_bundle(&bundle)), stdout)?;
            Ok(0)
        }
        Command::Plotdata { curve, series, out } => {
            let file: CurveFile = read_json(curve)?;
            let parsed = file.to_curve()?;
            check_continuity(&parsed)?;
            let chosen = series
                .iter()
                .map(|s| Ok((s.clone(), parse_series(s, &file.edges, &file.vertices)?)))
                .collect::<Result<Vec<_>>>()?;
            emit(out.as_deref(), &plot_csv(&parsed, &chosen)?, stdout)?;
            Ok(0)
        }
    }
}
