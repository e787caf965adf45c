//! `irkit`: graph expressions, invariants, and certified information-ratio
//! bounds from the command line.

mod invariant;
mod report;
mod tables;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use irkit::cache::Cache;
use irkit::code::{ratio_frontier_limited, CellStatus};
use irkit::config::Config;
use irkit::criticality::{criticality_check, Criticality};
use irkit::expr::Expr;
use irkit::hom;
use irkit::ratio::{Engine, Flag};
use irkit::relations::{self, REFERENCE_CORES};
use irkit::Error;
use report::Out;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "irkit", version, about = "Certified bounds on the information ratio between graphs")]
struct Cli {
    /// ϑ tolerance, in (0, 1e-3].
    #[arg(long, global = true, env = "IRKIT_TOL", default_value_t = 1e-6)]
    tol: f64,
    /// Node budget for each backtracking search.
    #[arg(long, global = true, env = "IRKIT_BUDGET_NODES", default_value_t = 5_000_000)]
    budget_nodes: u64,
    /// Wall-clock budget in seconds; optional stages stop when it runs out.
    #[arg(long, global = true, env = "IRKIT_BUDGET_SECS")]
    budget_secs: Option<f64>,
    /// Largest power j used for α(G^j).
    #[arg(long, global = true, env = "IRKIT_MAX_POWER", default_value_t = 2)]
    max_power: usize,
    /// Directory for cached invariants.
    #[arg(long, global = true, env = "IRKIT_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, env = "IRKIT_FORMAT", value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Concatenation pivots, comma separated.
    #[arg(long, global = true, env = "IRKIT_PIVOTS", value_delimiter = ',')]
    pivots: Option<Vec<String>>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Invariants of one graph: alpha omega chi cover chif chibarf theta
    /// capacity minrank graph6, or `all` (default: alpha omega chibarf
    /// theta graph6).
    Invariant { expr: String, names: Vec<String> },
    /// Bounds on Ir(channel/source).
    Bounds {
        #[arg(long)]
        source: String,
        #[arg(long)]
        channel: String,
    },
    /// Recomputes the worked examples and compares with the expected values.
    PaperTables,
    /// (k, n) code frontier between two graphs.
    CodeSearch {
        #[arg(long)]
        source: String,
        #[arg(long)]
        channel: String,
        #[arg(long, default_value_t = 2)]
        kmax: usize,
        #[arg(long, default_value_t = 2)]
        nmax: usize,
        /// Also write the frontier as CSV to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Core of a graph and of its complement.
    Core { expr: String },
    /// Information equivalence, weak equivalence, order and distances.
    Equiv { a: String, b: String },
    /// Information-criticality certificate.
    Critical { expr: String },
    /// Source and channel spectra over the reference cores.
    Spectra { expr: String },
}

/// Exit codes.
const EXIT_PARSE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;
const EXIT_LIMIT: u8 = 4;
const EXIT_IO: u8 = 5;
const EXIT_OTHER: u8 = 1;

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Parse { .. } | Error::UnknownGenerator(_) | Error::Graph6(_)) => EXIT_PARSE,
        Some(Error::BudgetExhausted(_) | Error::NonConvergence(_)) => EXIT_INCONCLUSIVE,
        Some(Error::SizeLimit { .. } | Error::InvalidParameter(_)) => EXIT_LIMIT,
        Some(Error::Io(_) | Error::Json(_)) => EXIT_IO,
        None => EXIT_OTHER,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_INCONCLUSIVE),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn config(cli: &Cli) -> Result<Config> {
    let mut cfg = Config::default();
    cfg.tol = cli.tol;
    cfg.budget_nodes = cli.budget_nodes;
    cfg.budget_secs = cli.budget_secs;
    cfg.max_power = cli.max_power;
    if let Some(p) = &cli.pivots {
        cfg.pivots = p.iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
    }
    cfg.validate()?;
    cfg.start_clock();
    Ok(cfg)
}

fn graph(text: &str, cfg: &Config) -> Result<irkit::Graph> {
    let e = Expr::parse(text).with_context(|| format!("parsing `{text}`"))?;
    Ok(e.eval_limited(cfg.operand_max_vertices)?)
}

/// Runs the command; `Ok(false)` means something stopped on a budget.
fn run(cli: &Cli) -> Result<bool> {
    let cfg = config(cli)?;
    let out = Out::new(cli.format == Format::Json);
    let cache = cli.cache_dir.as_ref().map(Cache::new);
    match &cli.cmd {
        Cmd::Invariant { expr, names } => invariant::run(&out, &cfg, cache.as_ref(), expr, names),
        Cmd::Bounds { source, channel } => {
            let mut e = Engine::new(cfg);
            let g = e.operand(source).with_context(|| format!("parsing `{source}`"))?;
            let h = e.operand(channel).with_context(|| format!("parsing `{channel}`"))?;
            let b = e.ir_bounds(&g, &h)?;
            if !b.verify() {
                bail!("internal error: emitted certificate failed verification");
            }
            out.bounds(&b);
            Ok(!b.has(Flag::TimeBudget))
        }
        Cmd::PaperTables => {
            let rows = tables::run(&cfg)?;
            out.table(&rows);
            let failed = rows.iter().filter(|r| !r.pass).count();
            if failed > 0 {
                bail!("{failed} table row(s) did not match");
            }
            Ok(true)
        }
        Cmd::CodeSearch {
            source,
            channel,
            kmax,
            nmax,
            csv,
        } => {
            if *kmax == 0 || *nmax == 0 {
                return Err(Error::InvalidParameter("kmax and nmax must be positive".into()).into());
            }
            let g = graph(source, &cfg)?;
            let h = graph(channel, &cfg)?;
            let f = ratio_frontier_limited(&g, &h, *kmax, *nmax, cfg.budget_nodes, irkit::code::DEFAULT_CODE_MAX_VERTICES);
            if let Some(path) = csv {
                let mut s = String::from("k,n,status\n");
                for c in &f.cells {
                    s.push_str(&format!("{},{},{}\n", c.k, c.n, report::status_name(c.status)));
                }
                std::fs::write(path, s).map_err(Error::from)?;
            }
            out.frontier(source, channel, &f);
            Ok(!f.cells.iter().any(|c| matches!(c.status, CellStatus::Inconclusive)))
        }
        Cmd::Core { expr } => {
            let g = graph(expr, &cfg)?;
            let own = hom::core_of(&g, cfg.budget_nodes);
            let comp = hom::core_of(&g.complement(), cfg.budget_nodes);
            out.core(expr, &g, own.as_ref(), comp.as_ref());
            Ok(own.is_some() && comp.is_some())
        }
        Cmd::Equiv { a, b } => {
            let mut e = Engine::new(cfg);
            let x = e.operand(a).with_context(|| format!("parsing `{a}`"))?;
            let y = e.operand(b).with_context(|| format!("parsing `{b}`"))?;
            let r = relations::equivalence_check(&mut e, &x, &y)?;
            let m = relations::metric_from(&r);
            out.relation(&r, &m);
            Ok(!r.forward.has(Flag::TimeBudget) && !r.backward.has(Flag::TimeBudget))
        }
        Cmd::Critical { expr } => {
            let g = graph(expr, &cfg)?;
            let c = criticality_check(&g, &cfg)?;
            if !c.verify(&g) {
                bail!("internal error: criticality certificate failed verification");
            }
            out.critical(expr, &c);
            Ok(!matches!(c, Criticality::Unknown { budget_exhausted: true, .. }))
        }
        Cmd::Spectra { expr } => {
            let mut e = Engine::new(cfg);
            let g = e.operand(expr).with_context(|| format!("parsing `{expr}`"))?;
            let s = relations::spectra(&mut e, &g, &REFERENCE_CORES)?;
            out.spectra(expr, &s);
            let spent = s.source.iter().chain(&s.channel).any(|b| b.has(Flag::TimeBudget));
            Ok(!spent)
        }
    }
}
