//! `pncount` command-line front end.
//!
//! [`run`] does all the work and returns the exit code together with the text
//! destined for stdout and stderr, so it can be driven in-process.

use std::path::PathBuf;

use clap::{error::ErrorKind, Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use pncount::asymptotics::{FormulaRegistry, LogEstimate, Query};
use pncount::cache::CountCache;
use pncount::contour::cauchy_count;
use pncount::exact::{count_part_bounded, count_unrestricted, BigCount, PartitionBounds};
use pncount::saddle::{solve_c, Regime, Scale};
use pncount::{asymptotics, Error};

pub mod output;
pub mod table;
pub mod verify;

use output::Record;

#[derive(Debug, Parser)]
#[command(name = "pncount", version, about = "Restricted partition counts p_n(N, M)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Evaluate formulas only where their hypotheses hold (default).
    #[arg(long, global = true, conflicts_with = "permissive")]
    pub strict: bool,

    /// Evaluate formulas outside their proven regime, tagging the result.
    #[arg(long, global = true)]
    pub permissive: bool,

    /// Read exact counts from, and write them back to, this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact count as a decimal integer.
    Exact(Instance),
    /// Asymptotic estimate in log space.
    Asym {
        #[command(flatten)]
        instance: Instance,
        /// theorem1, szekeres, hardy_ramanujan, takacs or auto.
        #[arg(long, default_value = "auto")]
        formula: String,
    },
    /// Saddle point at shape (alpha, beta).
    Solve {
        #[arg(long)]
        alpha: Scale,
        #[arg(long, default_value = "inf")]
        beta: Scale,
    },
    /// Count by numerical contour integration.
    Contour {
        #[arg(long)]
        n: u64,
        #[arg(long = "N")]
        max_part: u64,
        #[arg(long = "M")]
        max_len: u64,
        /// Starting node count (at least 64); doubled until stable.
        #[arg(long)]
        nodes: Option<usize>,
        /// Also evaluate the closed-form approximation of log f at z.
        #[arg(long, value_name = "RE,IM", value_parser = parse_complex)]
        z: Option<Complex64>,
    },
    /// Exact vs asymptotic comparison along a fixed shape.
    Table {
        #[arg(long)]
        alpha: Scale,
        #[arg(long, default_value = "inf")]
        beta: Scale,
        /// Comma-separated list of n.
        #[arg(long = "n-list", value_delimiter = ',', num_args = 0..)]
        n_list: Vec<u64>,
        #[arg(long, default_value = "theorem1")]
        formula: String,
    },
    /// Run the built-in consistency checks.
    Verify,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Instance {
    #[arg(long)]
    pub n: u64,
    /// Largest part; `inf` for no bound.
    #[arg(long = "N", value_parser = parse_bound)]
    pub max_part: Bound,
    /// Most parts; `inf` for no bound.
    #[arg(long = "M", value_parser = parse_bound, default_value = "inf")]
    pub max_len: Bound,
}

/// A side of the box; `None` is unbounded.
pub type Bound = Option<u64>;

fn parse_bound(s: &str) -> std::result::Result<Bound, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "unbounded" => Ok(None),
        t => t
            .parse::<u64>()
            .map(Some)
            .map_err(|_| format!("expected a natural number or `inf`, got {s:?}")),
    }
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected RE,IM, got {s:?}"))?;
    let part = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("bad number {t:?}"));
    Ok(Complex64::new(part(re)?, part(im)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }
}

/// Failure of a command: a core error or a failed self-check.
#[derive(Debug)]
pub enum Failure {
    Core(Error),
    /// Number of failed checks and the rendered check report.
    Verify(usize, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn hint(kind: &str) -> &'static str {
    match kind {
        "domain" => "check argument ranges: asymptotic formulas need n >= 1 and positive scales",
        "hypothesis" => "pass --permissive to evaluate outside the proven regime, or choose another --formula",
        "resource_limit" => "reduce n, N or M",
        "no_convergence" => "try a different --nodes start or a smaller instance",
        "degenerate" => "the count is 0 or 1; use the exact command",
        "cache" => "repair or delete the cache file",
        "io" => "check that the path is readable and writable",
        _ => "see the check lines on stdout",
    }
}

fn error_object(kind: &str, message: &str) -> String {
    output::json_object(
        &Record::new()
            .push("error_kind", kind)
            .push("message", message)
            .push("hint", hint(kind)),
    ) + "\n"
}

/// Parse `argv` (including the program name) and execute.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome::ok(rendered),
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: rendered,
                },
            };
        }
    };
    match execute(&cli) {
        Ok(stdout) => Outcome::ok(stdout),
        Err(Failure::Core(e)) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: error_object(e.kind(), &e.to_string()),
        },
        Err(Failure::Verify(failed, report)) => Outcome {
            code: 1,
            stdout: report,
            stderr: error_object("verification_failed", &format!("{failed} check(s) failed")),
        },
    }
}

fn regime(cli: &Cli) -> Regime {
    if cli.permissive {
        Regime::Permissive
    } else {
        Regime::Strict
    }
}

fn load_cache(cli: &Cli) -> pncount::Result<CountCache> {
    match &cli.cache {
        Some(path) => CountCache::load(path),
        None => Ok(CountCache::new()),
    }
}

fn store_cache(cli: &Cli, cache: &CountCache) -> pncount::Result<()> {
    match &cli.cache {
        Some(path) => cache.save(path),
        None => Ok(()),
    }
}

/// Exact count with either side possibly unbounded.
pub fn exact_count(cache: &CountCache, n: u64, max_part: Bound, max_len: Bound) -> pncount::Result<BigCount> {
    match (max_part, max_len) {
        (Some(a), Some(b)) => cache.count_exact(PartitionBounds::new(n, a, b)),
        (Some(side), None) | (None, Some(side)) => {
            let b = PartitionBounds::new(n, side.min(n), n);
            if let Some(hit) = cache.get(&b) {
                return Ok(hit);
            }
            let value = count_part_bounded(n, side)?;
            cache.insert(&b, &value);
            Ok(value)
        }
        (None, None) => count_unrestricted(n),
    }
}

fn render_one(format: Format, r: &Record) -> String {
    match format {
        Format::Text => output::text(r),
        Format::Json => output::json_object(r) + "\n",
        Format::Csv => output::csv(&output::columns(r), std::slice::from_ref(r)),
    }
}

pub fn estimate_record(n: u64, max_part: Bound, max_len: Bound, e: &LogEstimate) -> Record {
    Record::new()
        .push("n", n)
        .push("N", max_part)
        .push("M", max_len)
        .push("log_value", e.log_value)
        .push("exponent_part", e.exponent_part)
        .push("log_prefactor", e.log_prefactor)
        .push("formula", e.formula.name())
        .push("regime_note", e.regime_note.clone())
        .push("log10_value", e.log_value / std::f64::consts::LN_10)
        .push("scientific", e.to_scientific(6))
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    let regime = regime(cli);
    match &cli.command {
        Command::Exact(inst) => {
            let cache = load_cache(cli)?;
            let count = exact_count(&cache, inst.n, inst.max_part, inst.max_len)?;
            store_cache(cli, &cache)?;
            Ok(match cli.format {
                Format::Text => format!("{count}\n"),
                _ => render_one(
                    cli.format,
                    &Record::new()
                        .push("n", inst.n)
                        .push("N", inst.max_part)
                        .push("M", inst.max_len)
                        .push("count", count.to_string())
                        .push("digits", count.to_string().len() as u64)
                        .push("log_value", if count.is_zero() { f64::NEG_INFINITY } else { count.ln() }),
                ),
            })
        }
        Command::Asym { instance, formula } => {
            let registry = FormulaRegistry::default();
            let q = Query::new(instance.n, instance.max_part, instance.max_len);
            let e = registry.estimate(formula, &q, regime)?;
            Ok(render_one(
                cli.format,
                &estimate_record(instance.n, instance.max_part, instance.max_len, &e),
            ))
        }
        Command::Solve { alpha, beta } => {
            let s = solve_c(*alpha, *beta, regime)?;
            let r = Record::new()
                .push("alpha", alpha.as_f64())
                .push("beta", beta.as_f64())
                .push("c1", s.c1)
                .push("c2", s.c2)
                .push("A", s.a)
                .push("K", asymptotics::k_of(&s))
                .push("L", asymptotics::l_of(&s))
                .push("residual", s.residual)
                .push("proven", s.proven);
            Ok(render_one(cli.format, &r))
        }
        Command::Contour {
            n,
            max_part,
            max_len,
            nodes,
            z,
        } => {
            let mut r = Record::new().push("n", *n).push("N", *max_part).push("M", *max_len);
            let q = cauchy_count(*n, *max_part, *max_len, *nodes)?;
            r = r
                .push("log_value", q.log_value)
                .push("imag_residual", q.imag_residual)
                .push("node_count", q.node_count as u64)
                .push("est_error", q.est_error)
                .push("v", q.v);
            if let Some(z) = z {
                let exact = pncount::contour::log_f(*z, *max_part, *max_len)?;
                let approx = pncount::contour::log_f_closed_form(*z, *max_part, *max_len)?;
                r = r
                    .push("log_f_re", exact.re)
                    .push("log_f_im", exact.im)
                    .push("approx_re", approx.re)
                    .push("approx_im", approx.im)
                    .push("approx_residual", (exact - approx).norm());
            }
            Ok(render_one(cli.format, &r))
        }
        Command::Table {
            alpha,
            beta,
            n_list,
            formula,
        } => {
            let cache = load_cache(cli)?;
            let rows = table::convergence_table(*alpha, *beta, n_list, formula, regime, &cache)?;
            store_cache(cli, &cache)?;
            Ok(match cli.format {
                Format::Json => output::json_array(&rows) + "\n",
                Format::Csv | Format::Text => output::csv(table::COLUMNS, &rows),
            })
        }
        Command::Verify => {
            let checks = verify::run_checks();
            let failed = checks.iter().filter(|c| !c.passed).count();
            let out = match cli.format {
                Format::Text => checks.iter().map(|c| c.line() + "\n").collect(),
                Format::Json => {
                    output::json_array(&checks.iter().map(|c| c.record()).collect::<Vec<_>>()) + "\n"
                }
                Format::Csv => output::csv(
                    &["check", "passed", "detail"],
                    &checks.iter().map(|c| c.record()).collect::<Vec<_>>(),
                ),
            };
            if failed > 0 {
                return Err(Failure::Verify(failed, out));
            }
            Ok(out)
        }
    }
}
