mod render;

use std::fs;
use std::io::{self, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use polyext::exactalg::write_triples;
use polyext::extengine::{ext1_with, generator_system, ExtConfig, ExtError, ExtProblem, ExtResult, DEFAULT_MAX_MAZES};
use polyext::labyrinth::{enumerate_pure_mazes, maze_action, PureMaze};
use polyext::powerfunctors::{Family, FunctorSpec, MonomialVector};
use polyext::registry;
use polyext::selftest::{self, Level};

/// Degrees above this need `--allow-large`.
const LARGE_DEGREE: usize = 6;

#[derive(Parser)]
#[command(name = "polyext", version, about = "Ext^1 between symmetric, exterior and divided powers over Z")]
struct Cli {
    /// Write the evaluation matrix and D of each computed group to this directory.
    #[arg(long, global = true, value_name = "DIR")]
    dump_matrices: Option<PathBuf>,
    /// Permit functor degrees above 6.
    #[arg(long, global = true)]
    allow_large: bool,
    /// Ceiling on the number of candidate mazes per problem.
    #[arg(long, global = true, value_name = "N", default_value_t = DEFAULT_MAX_MAZES)]
    max_mazes: usize,
    /// Worker threads for table cells and kernel blocks (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute Ext^1(FROM, TO).
    Ext {
        /// Source functor, e.g. gamma:3.
        #[arg(long)]
        from: FunctorSpec,
        /// Target functor, e.g. s:3.
        #[arg(long)]
        to: FunctorSpec,
        #[arg(long)]
        json: bool,
        /// Report measured wall time in the JSON diagnostics instead of null.
        #[arg(long)]
        timings: bool,
    },
    /// Grid of Ext^1 for every family pair and degrees up to MAX_DEGREE.
    Table {
        #[arg(long)]
        max_degree: usize,
        /// Only blocks with equal source and target degree.
        #[arg(long)]
        diagonal: bool,
        /// Families to include (default: s lambda gamma).
        families: Vec<Family>,
    },
    /// Apply a pure maze to a vector of a functor's cross-effect.
    Action { functor: FunctorSpec, maze: PureMaze, monomial: String },
    /// List covering pure mazes [DOM] -> [COD] of cardinality at most MAX_CARD.
    Mazes { dom: usize, cod: usize, max_card: usize },
    /// Recompute published values and golden tables.
    Selftest {
        #[arg(value_enum)]
        level: SelftestLevel,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SelftestLevel {
    Quick,
    Full,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Resource(String),
    Selftest(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Resource(_) => 2,
            Failure::Selftest(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Resource(m) | Failure::Selftest(m) => m,
        }
    }
}

struct Context {
    dump_dir: Option<PathBuf>,
    allow_large: bool,
    max_mazes: usize,
    color: bool,
}

impl Context {
    fn config(&self) -> ExtConfig {
        ExtConfig { max_mazes: self.max_mazes, keep_matrices: self.dump_dir.is_some(), ..ExtConfig::default() }
    }

    fn check_degree(&self, degree: usize) -> Result<(), Failure> {
        if degree > LARGE_DEGREE && !self.allow_large {
            return Err(Failure::Resource(format!(
                "degree {degree} exceeds {LARGE_DEGREE}; pass --allow-large to compute it anyway"
            )));
        }
        Ok(())
    }

    fn paint(&self, text: &str, code: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(1);
        }
    }
    let ctx = Context {
        dump_dir: cli.dump_matrices,
        allow_large: cli.allow_large,
        max_mazes: cli.max_mazes,
        color: std::env::var_os("NO_COLOR").is_none() && io::stdout().is_terminal(),
    };
    let mut out = io::stdout().lock();
    let result = match cli.command {
        Command::Ext { from, to, json, timings } => cmd_ext(&ctx, &mut out, ExtProblem::new(from, to), json, timings),
        Command::Table { max_degree, diagonal, families } => cmd_table(&ctx, &mut out, max_degree, diagonal, families),
        Command::Action { functor, maze, monomial } => cmd_action(&ctx, &mut out, functor, &maze, &monomial),
        Command::Mazes { dom, cod, max_card } => cmd_mazes(&mut out, dom, cod, max_card),
        Command::Selftest { level } => cmd_selftest(&ctx, &mut out, level),
    };
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn io_failure(e: io::Error) -> Failure {
    Failure::Usage(format!("write failed: {e}"))
}

fn sizing_report(problem: &ExtProblem, e: &ExtError) -> String {
    let generators = generator_system(problem.source).len();
    let mut report = format!("resource ceiling reached for {problem}\n  {e}\n  generators: {generators}\n");
    report.push_str(&format!("  maze cardinality bound: {}\n", problem.max_card()));
    report.push_str("  raise the ceiling with --max-mazes N");
    report
}

fn compute(ctx: &Context, problem: &ExtProblem) -> Result<ExtResult, Failure> {
    ctx.check_degree(problem.source.degree.max(problem.target.degree))?;
    match ext1_with(problem, &ctx.config()) {
        Ok(r) => Ok(r),
        Err(e @ (ExtError::TooManyMazes { .. } | ExtError::TooWide { .. })) => {
            Err(Failure::Resource(sizing_report(problem, &e)))
        }
        Err(e) => Err(Failure::Usage(e.to_string())),
    }
}

fn dump(dir: &Path, result: &ExtResult) -> Result<(), Failure> {
    let stem = format!("{}_{}", result.problem.source.token(), result.problem.target.token()).replace(':', "");
    let write = |name: String, text: String| {
        fs::write(dir.join(&name), text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", dir.join(&name).display())))
    };
    fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("cannot create {}: {e}", dir.display())))?;
    if let Some(eval) = &result.evaluation {
        write(format!("{stem}_evaluation.txt"), write_triples(eval))?;
    }
    if let Some(d) = &result.presentation {
        write(format!("{stem}_D.txt"), write_triples(&d.matrix))?;
    }
    Ok(())
}

fn cmd_ext(ctx: &Context, out: &mut impl Write, problem: ExtProblem, json: bool, timings: bool) -> Result<(), Failure> {
    let result = compute(ctx, &problem)?;
    if let Some(dir) = &ctx.dump_dir {
        dump(dir, &result)?;
    }
    let status = registry::status(&problem);
    if json {
        let record = render::OutputRecord::new(&result, status, timings);
        let text = serde_json::to_string_pretty(&record).map_err(|e| Failure::Usage(e.to_string()))?;
        writeln!(out, "{text}").map_err(io_failure)?;
    } else {
        writeln!(out, "{}", result.group).map_err(io_failure)?;
        if status == registry::Status::Frontier {
            eprintln!("note: {problem} has no published value (frontier)");
        }
    }
    Ok(())
}

fn cmd_table(
    ctx: &Context,
    out: &mut impl Write,
    max_degree: usize,
    diagonal: bool,
    families: Vec<Family>,
) -> Result<(), Failure> {
    if max_degree == 0 {
        return Err(Failure::Usage("--max-degree must be at least 1".into()));
    }
    ctx.check_degree(max_degree)?;
    let families = if families.is_empty() { Family::ALL.to_vec() } else { families };
    let blocks: Vec<(usize, usize)> = (1..=max_degree)
        .flat_map(|m| (1..=max_degree).map(move |n| (m, n)))
        .filter(|&(m, n)| !diagonal || m == n)
        .collect();
    let problems: Vec<ExtProblem> = blocks
        .iter()
        .flat_map(|&(m, n)| {
            let families = &families;
            families.iter().flat_map(move |&f| {
                families
                    .iter()
                    .map(move |&g| ExtProblem::new(FunctorSpec::new(f, m).unwrap(), FunctorSpec::new(g, n).unwrap()))
            })
        })
        .collect();
    let cells: Vec<render::Cell> = problems
        .par_iter()
        .map(|p| match compute(ctx, p) {
            Ok(r) => {
                if let Some(dir) = &ctx.dump_dir {
                    dump(dir, &r)?;
                }
                Ok(render::Cell::Value { group: r.group.to_string(), status: registry::status(p) })
            }
            Err(Failure::Resource(_)) => Ok(render::Cell::Abort),
            Err(f) => Err(f),
        })
        .collect::<Result<_, Failure>>()?;
    let per_block = families.len() * families.len();
    let mut any_frontier = false;
    for (b, &(m, n)) in blocks.iter().enumerate() {
        let block = &cells[b * per_block..(b + 1) * per_block];
        any_frontier |= block.iter().any(render::Cell::is_frontier);
        let text = render::grid(&families, m, n, block, |s| ctx.paint(s, "33"));
        if b > 0 {
            writeln!(out).map_err(io_failure)?;
        }
        write!(out, "{text}").map_err(io_failure)?;
    }
    if any_frontier {
        writeln!(out, "\n* frontier: no published value covers this cell").map_err(io_failure)?;
    }
    Ok(())
}

fn cmd_action(
    ctx: &Context,
    out: &mut impl Write,
    spec: FunctorSpec,
    maze: &PureMaze,
    text: &str,
) -> Result<(), Failure> {
    ctx.check_degree(spec.degree)?;
    let k = maze.domain_size();
    let input = MonomialVector::parse(spec, text, k).map_err(|e| Failure::Usage(e.to_string()))?;
    if let Some(m) = input.terms().keys().find(|m| m.support().len() != k || !m.has_support_range(k)) {
        return Err(Failure::Usage(format!(
            "monomial {} has support {:?}, but the maze {maze} has domain {{1..{k}}}; every input monomial must use each domain element",
            MonomialVector::monomial(spec, m.clone()).map(|v| v.to_string()).unwrap_or_default(),
            m.support()
        )));
    }
    let image = maze_action(spec, maze, &input).map_err(|e| Failure::Usage(e.to_string()))?;
    writeln!(out, "{image}").map_err(io_failure)
}

fn cmd_mazes(out: &mut impl Write, dom: usize, cod: usize, max_card: usize) -> Result<(), Failure> {
    let mazes = enumerate_pure_mazes(dom, cod, max_card);
    for m in &mazes {
        writeln!(out, "{m}").map_err(io_failure)?;
    }
    let noun = if mazes.len() == 1 { "maze" } else { "mazes" };
    writeln!(out, "{} {noun}", mazes.len()).map_err(io_failure)
}

fn cmd_selftest(ctx: &Context, out: &mut impl Write, level: SelftestLevel) -> Result<(), Failure> {
    let level = match level {
        SelftestLevel::Quick => Level::Quick,
        SelftestLevel::Full => Level::Full,
    };
    report_checks(ctx, out, &selftest::run(level))
}

fn report_checks(ctx: &Context, out: &mut impl Write, checks: &[selftest::Check]) -> Result<(), Failure> {
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed()).collect();
    match failed.first() {
        None => {
            let line = format!("{} checks passed", checks.len());
            writeln!(out, "{}", ctx.paint(&line, "32")).map_err(io_failure)
        }
        Some(first) => {
            let line = format!("{} of {} checks failed", failed.len(), checks.len());
            writeln!(out, "{}", ctx.paint(&line, "31")).map_err(io_failure)?;
            Err(Failure::Selftest(format!(
                "first failure: {}: expected {}, got {}",
                first.name, first.expected, first.got
            )))
        }
    }
}
