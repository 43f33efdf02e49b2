//! The `bwr` command line: solve, oracle, gen and bench.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::decomposition::{bwr_solve, SolveResult};
use crate::error::Error;
use crate::format::{read_game, write_game, FormatError};
use crate::game::{Game, Situation};
use crate::instances::GenSpec;
use crate::mdp::verify_saddle_point;
use crate::oracle::{brute_force_solve, OracleBudget, OracleSolution};
use crate::pump::{solve_ergodic, Ctx, PumpConfig, PumpStats};
use crate::rational::{fmt_rational, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;
pub const EXIT_BUDGET: i32 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> CliError {
        CliError { code, message: message.into() }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        let code = match e {
            FormatError::Parse(_) => EXIT_PARSE,
            FormatError::Validation(_) => EXIT_VALIDATION,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Game(_) => EXIT_VALIDATION,
            Error::BudgetExceeded(_) => EXIT_BUDGET,
            _ => EXIT_INVARIANT,
        };
        CliError::new(code, e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "bwr", version, about = "Exact solver for stochastic mean-payoff games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve a game file and print exact values and optimal strategies.
    Solve(SolveArgs),
    /// Solve a small game file by enumerating all situations.
    Oracle(OracleArgs),
    /// Write a generated instance as a game file.
    Gen(GenArgs),
    /// Run a parameter sweep and write one CSV row per instance.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    pub path: PathBuf,
    /// Re-check the returned situation with two best-response solves.
    #[arg(long)]
    pub verify: bool,
    #[arg(long)]
    pub json: bool,
    /// Write the pumping trace (one line per iteration) to this file.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    pub path: PathBuf,
    /// Maximum number of situations to enumerate.
    #[arg(long, default_value_t = OracleBudget::default().max_situations)]
    pub budget: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Figure1,
    Figure2,
    Random,
    Tripartite,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    pub family: Family,
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long)]
    pub d: Option<u64>,
    #[arg(long)]
    pub r: Option<i64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub max_out: usize,
    /// Part sizes of the tripartite family, e.g. `2,2,1`.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output path; standard output when omitted.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    pub family: Family,
    #[arg(long, value_delimiter = ',')]
    pub l: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub d: Vec<u64>,
    #[arg(long, value_delimiter = ',')]
    pub r: Vec<i64>,
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    pub max_out: usize,
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    /// Number of seeds per parameter combination (seeded families only).
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    /// First seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Skip the bound assertions.
    #[arg(long)]
    pub no_checks: bool,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Solve(a) => cmd_solve(&a, stdout),
        Command::Oracle(a) => cmd_oracle(&a, stdout),
        Command::Gen(a) => cmd_gen(&a, stdout),
        Command::Bench(a) => cmd_bench(&a, stdout),
    }
}

fn load(path: &Path) -> Result<Game, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::new(EXIT_IO, format!("{}: {e}", path.display())))?;
    Ok(read_game(&text)?)
}

fn io(e: std::io::Error) -> CliError {
    CliError::new(EXIT_IO, e.to_string())
}

fn choice_json(game: &Game, s: &Situation, v: usize) -> serde_json::Value {
    match s.arc(v) {
        Some(a) => json!({ "arc": a, "to": game.name(game.arc(a).to) }),
        None => serde_json::Value::Null,
    }
}

fn choice_text(game: &Game, s: &Situation, v: usize) -> String {
    match s.arc(v) {
        Some(a) => format!("-> {} (arc {a})", game.name(game.arc(a).to)),
        None => "-".to_string(),
    }
}

fn positions_json(game: &Game, values: &[Rational], s: &Situation) -> serde_json::Value {
    (0..game.n())
        .map(|v| {
            json!({
                "id": game.name(v),
                "owner": game.owner(v).letter(),
                "value": fmt_rational(&values[v]),
                "choice": choice_json(game, s, v),
            })
        })
        .collect()
}

fn write_table(out: &mut dyn Write, game: &Game, values: &[Rational], s: &Situation) -> std::io::Result<()> {
    for v in 0..game.n() {
        writeln!(out, "{}\t{}\t{}\t{}", game.name(v), game.owner(v).letter(), fmt_rational(&values[v]), choice_text(game, s, v))?;
    }
    Ok(())
}

fn stats_json(stats: &PumpStats, guesses: u64) -> serde_json::Value {
    json!({
        "pump_runs": stats.runs,
        "iterations": stats.iterations,
        "phases": stats.phases,
        "partitions": stats.partitions,
        "guesses": guesses,
        "violations": stats.violations,
    })
}

pub fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let game = load(&args.path)?;
    let mut ctx = Ctx::new(PumpConfig { trace: args.trace.is_some(), ..PumpConfig::default() });
    let result = bwr_solve(&game, &mut ctx);
    if let Some(path) = &args.trace {
        let mut text = ctx.stats.trace.join("\n");
        if !text.is_empty() {
            text.push('\n');
        }
        fs::write(path, text).map_err(io)?;
    }
    let sol: SolveResult = result?;
    let verified = if args.verify {
        let check = verify_saddle_point(&game, &sol.situation)?;
        Some(check.ok && check.values == sol.values && sol.certified() && ctx.stats.violations.is_empty())
    } else {
        None
    };
    let classes: Vec<serde_json::Value> = sol
        .certificates
        .iter()
        .map(|c| {
            json!({
                "value": fmt_rational(&c.theta),
                "positions": c.positions.iter().map(|&v| game.name(v)).collect::<Vec<_>>(),
                "certificate": c.ok(),
            })
        })
        .collect();
    if args.json {
        let doc = json!({
            "positions": positions_json(&game, &sol.values, &sol.situation),
            "classes": classes,
            "certified": sol.certified(),
            "verified": verified,
            "stats": stats_json(&ctx.stats, sol.guesses),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json")).map_err(io)?;
    } else {
        write_table(out, &game, &sol.values, &sol.situation).map_err(io)?;
        let good = sol.certificates.iter().filter(|c| c.ok()).count();
        writeln!(
            out,
            "certificate: saddle point verified, {} value classes, decomposition {}, {good}/{} class potentials in canonical form",
            sol.certificates.len(),
            if sol.decomposition_report.ok { "ok" } else { "FAILED" },
            sol.certificates.len(),
        )
        .map_err(io)?;
        for v in &sol.decomposition_report.violations {
            writeln!(out, "  {v}").map_err(io)?;
        }
        writeln!(
            out,
            "stats: {} pump runs, {} iterations, {} phases, {} rank guesses, {} bound violations",
            ctx.stats.runs,
            ctx.stats.iterations,
            ctx.stats.phases,
            sol.guesses,
            ctx.stats.violations.len()
        )
        .map_err(io)?;
        if let Some(ok) = verified {
            writeln!(out, "verify: {}", if ok { "passed" } else { "FAILED" }).map_err(io)?;
        }
    }
    match verified {
        Some(false) => Err(CliError::new(EXIT_INVARIANT, "verification failed")),
        _ => Ok(()),
    }
}

pub fn cmd_oracle(args: &OracleArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let game = load(&args.path)?;
    let sol: OracleSolution = brute_force_solve(&game, OracleBudget { max_situations: args.budget })?;
    if args.json {
        let doc = json!({
            "positions": positions_json(&game, &sol.values, &sol.situation),
            "situations": sol.situations,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json")).map_err(io)?;
    } else {
        write_table(out, &game, &sol.values, &sol.situation).map_err(io)?;
        writeln!(out, "situations enumerated: {}", sol.situations).map_err(io)?;
    }
    Ok(())
}

fn need<T: Copy>(v: Option<T>, name: &str, family: Family) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::new(EXIT_VALIDATION, format!("{family:?} needs --{name}").to_lowercase()))
}

fn sizes3(sizes: &[usize]) -> Result<[usize; 3], CliError> {
    sizes.try_into().map_err(|_| CliError::new(EXIT_VALIDATION, "--sizes needs exactly three part sizes"))
}

pub fn gen_spec(a: &GenArgs) -> Result<GenSpec, CliError> {
    let f = a.family;
    Ok(match f {
        Family::Figure1 => GenSpec::Figure1 { l: need(a.l, "l", f)?, d: need(a.d, "d", f)? },
        Family::Figure2 => {
            let r = need(a.r, "r", f)?;
            GenSpec::Figure2 { r: u64::try_from(r).map_err(|_| CliError::new(EXIT_VALIDATION, "--r must be positive"))? }
        }
        Family::Random => GenSpec::Random {
            n: need(a.n, "n", f)?,
            k: need(a.k, "k", f)?,
            d: need(a.d, "d", f)?,
            r: need(a.r, "r", f)?,
            max_out: a.max_out,
            seed: a.seed,
        },
        Family::Tripartite => {
            GenSpec::Tripartite { sizes: sizes3(&a.sizes)?, d: need(a.d, "d", f)?, r: need(a.r, "r", f)?, seed: a.seed }
        }
    })
}

pub fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let game = gen_spec(args)?.generate().map_err(|e| CliError::new(EXIT_VALIDATION, e.to_string()))?;
    let text = write_game(&game);
    match &args.out {
        Some(path) => fs::write(path, text).map_err(io),
        None => out.write_all(text.as_bytes()).map_err(io),
    }
}

/// One CSV row of `bwr bench`. Parameters that do not apply to the family are left empty.
#[derive(Clone, Debug, Default, Serialize)]
pub struct BenchRow {
    pub family: String,
    pub l: Option<usize>,
    pub d: Option<u64>,
    pub r: Option<i64>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    pub positions: usize,
    pub iterations: u64,
    pub phases: u64,
    pub pump_runs: u64,
    pub partitions: u64,
    pub violations: usize,
    pub wall_ms: u128,
    /// `ok`, or the error that stopped the solve.
    pub status: String,
}

fn list<T: Clone>(v: &[T], name: &str, family: Family) -> Result<Vec<T>, CliError> {
    if v.is_empty() {
        Err(CliError::new(EXIT_VALIDATION, format!("{family:?} sweep needs --{name}").to_lowercase()))
    } else {
        Ok(v.to_vec())
    }
}

/// The instances of a sweep in row order, each with the row prefilled with its parameters.
pub fn bench_cases(a: &BenchArgs) -> Result<Vec<(GenSpec, BenchRow)>, CliError> {
    let f = a.family;
    let name = format!("{f:?}").to_lowercase();
    let row = |l, d, r, n, k, seed| BenchRow { family: name.clone(), l, d, r, n, k, seed, ..BenchRow::default() };
    let seeds = a.seed..a.seed + a.seeds;
    let mut cases = Vec::new();
    match f {
        Family::Figure1 => {
            for &l in &list(&a.l, "l", f)? {
                for &d in &list(&a.d, "d", f)? {
                    cases.push((GenSpec::Figure1 { l, d }, row(Some(l), Some(d), None, None, None, None)));
                }
            }
        }
        Family::Figure2 => {
            for &r in &list(&a.r, "r", f)? {
                let ru = u64::try_from(r).map_err(|_| CliError::new(EXIT_VALIDATION, "--r must be positive"))?;
                cases.push((GenSpec::Figure2 { r: ru }, row(None, None, Some(r), None, None, None)));
            }
        }
        Family::Random => {
            for &n in &list(&a.n, "n", f)? {
                for &k in &list(&a.k, "k", f)? {
                    for &d in &list(&a.d, "d", f)? {
                        for &r in &list(&a.r, "r", f)? {
                            for seed in seeds.clone() {
                                let spec = GenSpec::Random { n, k, d, r, max_out: a.max_out, seed };
                                cases.push((spec, row(None, Some(d), Some(r), Some(n), Some(k), Some(seed))));
                            }
                        }
                    }
                }
            }
        }
        Family::Tripartite => {
            let sizes = sizes3(&a.sizes)?;
            for &d in &list(&a.d, "d", f)? {
                for &r in &list(&a.r, "r", f)? {
                    for seed in seeds.clone() {
                        let spec = GenSpec::Tripartite { sizes, d, r, seed };
                        let n = sizes.iter().sum();
                        cases.push((spec, row(None, Some(d), Some(r), Some(n), Some(sizes[2]), Some(seed))));
                    }
                }
            }
        }
    }
    Ok(cases)
}

/// Runs one instance. The lower-bound and tripartite families are ergodic, so they are measured
/// with a single pump run; random games go through the full solver.
pub fn bench_one(spec: &GenSpec, mut row: BenchRow, check_bounds: bool) -> Result<BenchRow, CliError> {
    let game = spec.generate().map_err(|e| CliError::new(EXIT_VALIDATION, e.to_string()))?;
    let mut ctx = Ctx::new(PumpConfig { check_bounds, ..PumpConfig::default() });
    let start = Instant::now();
    let status = match spec {
        GenSpec::Random { .. } => bwr_solve(&game, &mut ctx).map(|_| ()),
        _ => solve_ergodic(&game, &mut ctx).map(|_| ()),
    };
    row.wall_ms = start.elapsed().as_millis();
    row.positions = game.n();
    row.iterations = ctx.stats.iterations;
    row.phases = ctx.stats.phases;
    row.pump_runs = ctx.stats.runs;
    row.partitions = ctx.stats.partitions;
    row.violations = ctx.stats.violations.len();
    row.status = match status {
        Ok(()) => "ok".to_string(),
        Err(Error::NotErgodic(_)) => "not ergodic".to_string(),
        Err(e) => e.to_string(),
    };
    Ok(row)
}

/// Runs every case on `jobs` threads; rows come back in case order.
pub fn run_bench(cases: Vec<(GenSpec, BenchRow)>, jobs: usize, check_bounds: bool) -> Result<Vec<BenchRow>, CliError> {
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<BenchRow, CliError>>>> = Mutex::new((0..cases.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs.max(1) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some((spec, row)) = cases.get(i) else { break };
                let r = bench_one(spec, row.clone(), check_bounds);
                results.lock().expect("bench worker panicked")[i] = Some(r);
            });
        }
    });
    results.into_inner().expect("bench worker panicked").into_iter().map(|r| r.expect("every case ran")).collect()
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let rows = run_bench(bench_cases(args)?, args.jobs, !args.no_checks)?;
    let sink: Box<dyn Write + '_> = match &args.out {
        Some(path) => Box::new(fs::File::create(path).map_err(io)?),
        None => Box::new(out),
    };
    let mut w = csv::Writer::from_writer(sink);
    for row in &rows {
        w.serialize(row).map_err(|e| CliError::new(EXIT_IO, e.to_string()))?;
    }
    w.flush().map_err(io)
}

#[cfg(test)]
mod test {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("bwr").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn gen_needs_family_parameters() {
        let Command::Gen(a) = parse(&["gen", "figure1", "--l", "2"]).command else { panic!() };
        assert_eq!(gen_spec(&a).unwrap_err().code, EXIT_VALIDATION);
        let Command::Gen(a) = parse(&["gen", "tripartite", "--sizes", "1,2", "--d", "2", "--r", "1"]).command else {
            panic!()
        };
        assert_eq!(gen_spec(&a).unwrap_err().code, EXIT_VALIDATION);
    }

    #[test]
    fn sweep_order() {
        let Command::Bench(a) = parse(&["bench", "figure1", "--l", "1,2", "--d", "2,3"]).command else { panic!() };
        let cases = bench_cases(&a).unwrap();
        let params: Vec<_> = cases.iter().map(|(_, r)| (r.l.unwrap(), r.d.unwrap())).collect();
        assert_eq!(params, vec![(1, 2), (1, 3), (2, 2), (2, 3)]);
    }
}
