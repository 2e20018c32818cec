//! `gpancake`: build pancake graphs, print spectra, run the checks.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or argument error,
//! 3 a size cap was exceeded, 4 any other failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gpancake::fmt::round12;
use gpancake::verify::{
    write_checks_csv, write_checks_text, write_conjecture_csv, write_trend_csv, CheckRow,
};
use gpancake::{
    block_circulant_spectrum, build_graph_with_cap, build_partition, conjecture2_scan,
    full_spectrum, gap_trend, gsw_spectrum, quotient_empirical, quotient_formula,
    symmetric_spectrum, verify_gap, verify_multiplicity, verify_quotient_containment,
    verify_quotient_formula, Caps, Checks, Error, GroupParams, RealSpectrum, Tolerances,
    VerifyConfig,
};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "gpancake",
    version,
    about = "Generalised pancake graphs and their spectra"
)]
struct Cli {
    #[command(flatten)]
    limits: Limits,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Limits {
    /// Largest graph that may be built.
    #[arg(long, global = true, env = "GPANCAKE_VERTEX_CAP", default_value_t = gpancake::graph::DEFAULT_VERTEX_CAP)]
    vertex_cap: usize,
    /// Largest graph whose adjacency matrix may be solved densely.
    #[arg(long, global = true, env = "GPANCAKE_DENSE_CAP", default_value_t = gpancake::verify::DEFAULT_DENSE_CAP)]
    dense_cap: usize,
    /// Largest graph for exact integer elimination.
    #[arg(long, global = true, env = "GPANCAKE_EXACT_CAP", default_value_t = gpancake::verify::DEFAULT_EXACT_CAP)]
    exact_cap: usize,
    /// Tolerance for matching quotient eigenvalues to graph eigenvalues.
    #[arg(long, global = true, value_parser = tolerance, default_value_t = 1e-7)]
    containment_tol: f64,
    /// Eigenvalues closer than this are clustered when counting multiplicity.
    #[arg(long, global = true, value_parser = tolerance, default_value_t = 1e-6)]
    cluster_tol: f64,
    /// Required margin below the gap bound; also the scans' equality threshold.
    #[arg(long, global = true, value_parser = tolerance, default_value_t = 1e-6)]
    margin_tol: f64,
}

fn tolerance(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x > 0.0 && x < 1e-2 {
        Ok(x)
    } else {
        Err(format!("tolerance must lie in (0, 1e-2), got {s}"))
    }
}

#[derive(Args, Debug, Clone, Copy)]
struct Size {
    /// Number of colours.
    #[arg(long)]
    m: usize,
    /// Number of letters.
    #[arg(long)]
    n: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the edge list of P_m(n).
    Build {
        #[command(flatten)]
        size: Size,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a spectrum as CSV or JSON.
    Spectrum {
        /// Number of colours (not accepted with `--source gsw`).
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Source::Graph)]
        source: Source,
        #[arg(long, value_enum, default_value_t = SpectrumFormat::Csv)]
        format: SpectrumFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the quotient matrix as CSV.
    Quotient {
        #[command(flatten)]
        size: Size,
        /// Count neighbours in the built graph instead of using the formula.
        #[arg(long)]
        empirical: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a check; exits 1 if it fails.
    Verify {
        #[arg(value_enum)]
        check: Check,
        #[command(flatten)]
        size: Size,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate an exploratory scan as CSV. Never fails on the data.
    Scan {
        #[arg(value_enum)]
        scan: Scan,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Source {
    /// Dense solve of the adjacency matrix.
    Graph,
    /// Dense solve of the quotient matrix.
    Quotient,
    /// Union of the circulant block spectra.
    Decomposed,
    /// Closed form for 2D + 2E.
    Gsw,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum SpectrumFormat {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ReportFormat {
    Text,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Check {
    /// Spectral gap below its bound.
    Gap,
    /// Quotient spectrum inside the graph spectrum.
    Containment,
    /// Multiplicity of the even eigenvalues (m divisible by 4).
    Multiplicity,
    /// Counted quotient equals the block-circulant formula.
    LemmaCirc,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Scan {
    /// Graph gap against quotient gap.
    Conjecture2,
    /// Quotient gap as n grows.
    GapTrend,
}

enum Failure {
    Usage(String),
    Lib(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

#[derive(Serialize)]
struct JsonEigenvalue {
    index: usize,
    eigenvalue: f64,
    source: String,
}

fn open_out(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn config(limits: &Limits) -> VerifyConfig {
    VerifyConfig {
        caps: Caps {
            vertex: limits.vertex_cap,
            dense: limits.dense_cap,
            exact: limits.exact_cap,
        },
        tol: Tolerances {
            containment: limits.containment_tol,
            cluster: limits.cluster_tol,
            margin: limits.margin_tol,
        },
        ..VerifyConfig::default()
    }
}

fn spectrum(
    cfg: &VerifyConfig,
    m: Option<usize>,
    n: usize,
    source: Source,
) -> Result<RealSpectrum, Failure> {
    let params = || -> Result<GroupParams, Failure> {
        let m = m.ok_or_else(|| Failure::Usage("--m is required for this source".into()))?;
        Ok(GroupParams::new(m, n)?)
    };
    Ok(match source {
        Source::Gsw => {
            if m.is_some() {
                return Err(Failure::Usage("--source gsw takes only --n".into()));
            }
            gsw_spectrum(n)?
        }
        Source::Graph => {
            let g = build_graph_with_cap(params()?, cfg.caps.vertex)?;
            full_spectrum(&g, cfg.caps.dense)?
        }
        Source::Quotient => {
            let q = quotient_formula(params()?)?;
            symmetric_spectrum(&q.matrix().map(|x| x as f64))?
        }
        Source::Decomposed => block_circulant_spectrum(params()?)?,
    })
}

fn write_spectrum(s: &RealSpectrum, format: SpectrumFormat, w: &mut dyn Write) -> io::Result<()> {
    match format {
        SpectrumFormat::Csv => s.write_csv(&mut &mut *w),
        SpectrumFormat::Json => {
            let rows: Vec<JsonEigenvalue> = s
                .values()
                .iter()
                .enumerate()
                .map(|(i, &x)| JsonEigenvalue {
                    index: i + 1,
                    eigenvalue: round12(x),
                    source: s.source().to_string(),
                })
                .collect();
            serde_json::to_writer_pretty(&mut *w, &rows).map_err(io::Error::other)?;
            writeln!(w)
        }
    }
}

/// Returns whether every check passed.
fn run(cli: Cli) -> Result<bool, Failure> {
    let cfg = config(&cli.limits);
    match cli.command {
        Command::Build { size, out } => {
            let g = build_graph_with_cap(GroupParams::new(size.m, size.n)?, cfg.caps.vertex)?;
            let mut w = open_out(&out)?;
            g.write_edge_list(&mut w)?;
            w.flush()?;
        }
        Command::Spectrum {
            m,
            n,
            source,
            format,
            out,
        } => {
            let s = spectrum(&cfg, m, n, source)?;
            let mut w = open_out(&out)?;
            write_spectrum(&s, format, &mut w)?;
            w.flush()?;
        }
        Command::Quotient {
            size,
            empirical,
            out,
        } => {
            let p = GroupParams::new(size.m, size.n)?;
            let q = if empirical {
                let g = build_graph_with_cap(p, cfg.caps.vertex)?;
                quotient_empirical(&g, &build_partition(&g)?)?
            } else {
                quotient_formula(p)?
            };
            let mut w = open_out(&out)?;
            q.write_csv(&mut w)?;
            w.flush()?;
        }
        Command::Verify {
            check,
            size,
            format,
            out,
        } => {
            let p = GroupParams::new(size.m, size.n)?;
            let (rows, passed): (Vec<CheckRow>, bool) = match check {
                Check::Gap => {
                    let r = verify_gap(p, &cfg)?;
                    (r.rows(), r.all_passed())
                }
                Check::Containment => {
                    let r = verify_quotient_containment(p, &cfg)?;
                    (r.rows(), r.all_passed())
                }
                Check::Multiplicity => {
                    let r = verify_multiplicity(p, &cfg)?;
                    (r.rows(), r.all_passed())
                }
                Check::LemmaCirc => {
                    let r = verify_quotient_formula(p, &cfg)?;
                    (r.rows(), r.all_passed())
                }
            };
            let mut w = open_out(&out)?;
            match format {
                ReportFormat::Text => {
                    write_checks_text(&rows, &mut w)?;
                    writeln!(w, "{}", if passed { "PASS" } else { "FAIL" })?;
                }
                ReportFormat::Csv => write_checks_csv(&rows, &mut w)?,
            }
            w.flush()?;
            return Ok(passed);
        }
        Command::Scan {
            scan,
            m,
            n_max,
            out,
        } => {
            let mut w = open_out(&out)?;
            match scan {
                Scan::Conjecture2 => {
                    write_conjecture_csv(&conjecture2_scan(m, n_max, &cfg)?, &mut w)?
                }
                Scan::GapTrend => write_trend_csv(&gap_trend(m, n_max)?, &mut w)?,
            }
            w.flush()?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Argument(_) | Error::Unsupported(_) => 2,
                e if e.is_capacity() => 3,
                _ => 4,
            })
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(4)
        }
    }
}
