use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ncho::commands::{self, Input};
use ncho::error::{CliError, CliResult};
use ncho::formats::{write_grid_csv, write_grid_json, write_sector_csv, write_surface_csv};
use ncho::input::{parse_axis, parse_coeffs_file, parse_list, parse_pair_file, parse_tetrad};
use ncho::scan::{par_scan_grid, par_surface_panel, pool, threads_from_env};
use ncho_core::closed_form::DEFAULT_MEMBERSHIP_TOL;
use ncho_core::operator::assemble_sector;
use ncho_core::region::{Manifold, VISUAL_TOL};
use ncho_core::spectrum::default_alpha;
use ncho_core::{BetaSign, Parity};
use serde::Serialize;

/// Spectra and closed-form eigenfunctions of B(-d²/dx²) + Ax² for 2×2
/// positive definite A, B.
#[derive(Parser)]
#[command(name = "ncho", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lowest eigenvalues of the truncated operator, both parities merged.
    Spectrum {
        #[command(flatten)]
        input: InputArgs,
        /// Number of eigenvalues.
        #[arg(short, default_value_t = 10)]
        k: usize,
        /// Truncation: 2×2 blocks per parity sector.
        #[arg(short = 'N', long = "blocks")]
        n_blocks: Option<usize>,
        /// Hermite basis scale (default: the smaller β root).
        #[arg(long)]
        alpha: Option<f64>,
        /// Double the truncation until the eigenvalues settle to 1e-9.
        #[arg(long)]
        adaptive: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Four-term eigenfunction for one β root and parity.
    ClosedForm {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum)]
        sign: SignArg,
        #[arg(long, value_enum)]
        parity: ParityArg,
        /// Relative membership tolerance.
        #[arg(long, default_value_t = DEFAULT_MEMBERSHIP_TOL)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Residual ‖Hφ − λφ‖/‖φ‖ of a finite Hermite expansion.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        lambda: f64,
        /// JSON file {"parity", "alpha", "blocks"} in the input frame.
        #[arg(long)]
        coeffs: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Classify a (b, a, c) grid at fixed |ξ|, or sample the zero-set surfaces.
    RegionScan {
        #[arg(long, default_value = "1.1:20:64")]
        b_range: String,
        #[arg(long, default_value = "0.05:10:64")]
        a_range: String,
        #[arg(long, default_value = "0.05:10:64")]
        c_range: String,
        #[arg(long, default_value_t = 1.0)]
        xi: f64,
        /// Relative residual band for the flags.
        #[arg(long, default_value_t = VISUAL_TOL)]
        tol: f64,
        /// Emit every root a on the rays c = ρa over the (b, log10 ρ) grid
        /// instead of the dense grid.
        #[arg(long)]
        surfaces: bool,
        #[arg(long, default_value = "-2:2:128")]
        log_rho_range: String,
        /// Search interval for a along each ray (surfaces only).
        #[arg(long, default_value = "0.01:30")]
        a_bracket: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Eigenvalue estimates of one sector for a list of truncations.
    Convergence {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum)]
        parity: ParityArg,
        /// Comma-separated truncations.
        #[arg(long, default_value = "25,50,100,200")]
        ns: String,
        #[arg(short, default_value_t = 6)]
        k: usize,
        #[arg(long)]
        alpha: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Dense sector matrix as CSV (complex entries written re+imj).
    DumpSector {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum)]
        parity: ParityArg,
        #[arg(short = 'N', long = "blocks", default_value_t = 8)]
        n_blocks: usize,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// JSON file {"A": [[..],[..]], "B": [[..],[..]]}; entries number or [re, im].
    #[arg(long)]
    pair: Option<PathBuf>,
    /// Canonical coordinates b,a,c,|ξ|.
    #[arg(long, allow_hyphen_values = true)]
    tetrad: Option<String>,
}

impl InputArgs {
    fn load(&self) -> CliResult<Input> {
        match (&self.pair, &self.tetrad) {
            (Some(p), _) => Ok(Input::Pair(parse_pair_file(p)?)),
            (_, Some(t)) => Ok(Input::Tetrad(parse_tetrad(t)?)),
            _ => unreachable!("clap enforces exactly one input"),
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

impl From<SignArg> for BetaSign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Plus => BetaSign::Plus,
            SignArg::Minus => BetaSign::Minus,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }
    }
}

fn sink(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| CliError::Io { path: p.to_owned(), source })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn io_err(path: Option<&Path>) -> impl Fn(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.map_or_else(|| "<stdout>".into(), Path::to_owned), source }
}

fn emit_json<T: Serialize>(value: &T, out: &OutputArgs) -> CliResult<()> {
    if out.format == Some(Format::Csv) {
        return Err(CliError::argument("format", "csv", "this subcommand only writes JSON"));
    }
    let path = out.out.as_deref();
    let mut w = sink(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| io_err(path)(e.into()))?;
    writeln!(w).and_then(|_| w.flush()).map_err(io_err(path))
}

fn emit_csv(rows: Vec<Vec<String>>, out: &OutputArgs) -> CliResult<()> {
    let path = out.out.as_deref();
    let mut w = csv::Writer::from_writer(sink(path)?);
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush().map_err(io_err(path))
}

fn positive(what: &'static str, x: f64) -> CliResult<f64> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(CliError::argument(what, &x.to_string(), "must be a positive finite number"))
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Spectrum { input, k, n_blocks, alpha, adaptive, out } => {
            let alpha = alpha.map(|a| positive("alpha", a)).transpose()?;
            let r = commands::spectrum(&input.load()?, n_blocks, k, alpha, adaptive)?;
            if out.format == Some(Format::Csv) {
                let mut rows = vec![vec!["index".into(), "eigenvalue".into(), "parity".into(), "convergence".into()]];
                for i in 0..r.eigenvalues.len() {
                    rows.push(vec![
                        i.to_string(),
                        r.eigenvalues[i].to_string(),
                        r.parities[i].to_owned(),
                        r.convergence[i].to_string(),
                    ]);
                }
                emit_csv(rows, &out)
            } else {
                emit_json(&r, &out)
            }
        }
        Command::ClosedForm { input, sign, parity, tol, out } => {
            let r = commands::closed_form(&input.load()?, sign.into(), parity.into(), positive("tol", tol)?)?;
            emit_json(&r, &out)
        }
        Command::Verify { input, lambda, coeffs, out } => {
            let input = input.load()?;
            let coeffs = parse_coeffs_file(&coeffs)?;
            positive("alpha", coeffs.alpha)?;
            emit_json(&commands::verify(&input, lambda, &coeffs)?, &out)
        }
        Command::Convergence { input, parity, ns, k, alpha, out } => {
            let alpha = alpha.map(|a| positive("alpha", a)).transpose()?;
            let r = commands::convergence(&input.load()?, parity.into(), alpha, &parse_list(&ns)?, k)?;
            if out.format == Some(Format::Csv) {
                let width = r.rows.iter().map(|r| r.eigenvalues.len()).max().unwrap_or(0);
                let mut rows = vec![std::iter::once("n_blocks".to_owned()).chain((0..width).map(|i| format!("lambda_{i}"))).collect()];
                for row in &r.rows {
                    rows.push(std::iter::once(row.n_blocks.to_string()).chain(row.eigenvalues.iter().map(f64::to_string)).collect());
                }
                emit_csv(rows, &out)
            } else {
                emit_json(&r, &out)
            }
        }
        Command::RegionScan { b_range, a_range, c_range, xi, tol, surfaces, log_rho_range, a_bracket, out } => {
            let threads = pool(threads_from_env()?)?;
            let b = parse_axis(&b_range)?;
            let path = out.out.as_deref();
            if surfaces {
                let r = parse_axis(&log_rho_range)?;
                let br: Vec<&str> = a_bracket.split(':').collect();
                let parse = |s: &str| s.parse::<f64>().ok().filter(|x| x.is_finite() && *x > 0.0);
                let bracket = match br.as_slice() {
                    [lo, hi] => match (parse(lo), parse(hi)) {
                        (Some(lo), Some(hi)) if lo < hi => (lo, hi),
                        _ => return Err(CliError::argument("a-bracket", &a_bracket, "expected 0 < lo < hi")),
                    },
                    _ => return Err(CliError::argument("a-bracket", &a_bracket, "expected lo:hi")),
                };
                if out.format == Some(Format::Json) {
                    return Err(CliError::argument("format", "json", "surfaces are written as CSV"));
                }
                let panels = threads.install(|| {
                    Manifold::ALL.iter().map(|&m| par_surface_panel(m, b, r, xi, bracket)).collect::<CliResult<Vec<_>>>()
                })?;
                write_surface_csv(&panels, sink(path)?)
            } else {
                let (a, c) = (parse_axis(&a_range)?, parse_axis(&c_range)?);
                let grid = threads.install(|| par_scan_grid(b, a, c, xi, tol))?;
                match out.format.unwrap_or(Format::Csv) {
                    Format::Csv => write_grid_csv(&grid.samples, sink(path)?),
                    Format::Json => {
                        let mut w = sink(path)?;
                        write_grid_json(&grid, &mut w)?;
                        writeln!(w).and_then(|_| w.flush()).map_err(io_err(path))
                    }
                }
            }
        }
        Command::DumpSector { input, parity, n_blocks, alpha, out } => {
            let p = input.load()?.params()?;
            let alpha = match alpha {
                Some(a) => positive("alpha", a)?,
                None => default_alpha(&p),
            };
            let op = assemble_sector(&p, alpha, parity.into(), n_blocks)?;
            write_sector_csv(&op, sink(out.as_deref())?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ncho: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
