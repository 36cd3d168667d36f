use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use smc_cli::{compare_instance, exit_code, mean_ratios, solve, write_probe_csv, write_ratio_csv, Algo, RatioRow, Tie};
use smc_core::cover::validate_solution;
use smc_core::format::{parse_instance, write_cover, write_instance};
use smc_core::generate::{generate_instance, generate_random, GeneratorKind};
use smc_core::oracle::{brute_force_smc, matching_vs_opt_probe, OracleBudget};
use smc_core::Error;

#[derive(Parser)]
#[command(name = "smc", version, about = "Steiner multicycle approximations and exact oracles")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Euclidean,
    Onetwo,
    Asymmetric,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a random instance.
    Gen {
        kind: Kind,
        #[arg(long)]
        n: usize,
        /// Comma-separated group sizes summing to n; random parts of size >= 2 if omitted.
        #[arg(long)]
        groups: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one algorithm and write the solution.
    Solve {
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Tie::Lex)]
        tie_break: Tie,
        /// Directory for intermediate stages.
        #[arg(long)]
        dump_stages: Option<PathBuf>,
    },
    /// Exact optimum by enumeration.
    Oracle {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Largest n any oracle accepts.
        #[arg(long)]
        budget_n: Option<usize>,
    },
    /// Run algorithms over instance files and write a ratio table.
    Compare {
        /// Comma-separated algorithms.
        #[arg(long, value_enum, value_delimiter = ',', required = true)]
        algo: Vec<Algo>,
        /// Glob pattern of instance files.
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Tie::Lex)]
        tie_break: Tie,
        #[arg(long)]
        budget_n: Option<usize>,
    },
    /// Search for a matching on forest odd vertices that costs more than the optimum.
    Probe {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        budget_n: Option<usize>,
    },
}

/// Failure carrying its exit status.
struct Fail(u8, anyhow::Error);

impl From<anyhow::Error> for Fail {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(core) => Fail(exit_code(core), e),
            None => Fail(2, e),
        }
    }
}

fn budget(n: Option<usize>) -> OracleBudget {
    n.map_or_else(OracleBudget::default, OracleBudget::with_max_n)
}

fn read_instance(path: &Path) -> anyhow::Result<smc_core::Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: Cli) -> Result<(), Fail> {
    match cli.cmd {
        Cmd::Gen { kind, n, groups, seed, out } => {
            let kind = match kind {
                Kind::Euclidean => GeneratorKind::Euclidean,
                Kind::Onetwo => GeneratorKind::OneTwo,
                Kind::Asymmetric => GeneratorKind::Asymmetric,
            };
            let inst = match groups {
                Some(g) => {
                    let sizes = g
                        .split(',')
                        .map(|s| s.trim().parse::<usize>())
                        .collect::<Result<Vec<_>, _>>()
                        .context("group sizes must be integers")?;
                    generate_instance(kind, n, &sizes, seed).map_err(anyhow::Error::from)?
                }
                None => generate_random(kind, n, 2, seed).map_err(anyhow::Error::from)?,
            };
            write(&out, &write_instance(&inst))?;
        }
        Cmd::Solve { algo, input, out, tie_break, dump_stages } => {
            let inst = read_instance(&input)?;
            let s = solve(&inst, algo, tie_break).map_err(anyhow::Error::from)?;
            let report = validate_solution(&s.instance, &s.cover);
            if let Some(dir) = dump_stages {
                fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                for (name, text) in &s.stages {
                    write(&dir.join(name), text)?;
                }
            }
            println!(
                "algo={} n={} cost={} feasible={}{}{}",
                algo.name(),
                inst.n(),
                s.cost,
                report.feasible(),
                s.iterations.map(|i| format!(" iterations={i}")).unwrap_or_default(),
                if s.stats.is_empty() { String::new() } else { format!(" {}", s.stats) }
            );
            if !report.feasible() {
                return Err(Fail(1, anyhow::anyhow!("infeasible output: {:?}", report.violations)));
            }
            if let Some(out) = out {
                write(&out, &write_cover(&s.cover))?;
            }
        }
        Cmd::Oracle { input, out, budget_n } => {
            let inst = read_instance(&input)?;
            let (cost, cover) = brute_force_smc(&inst, &budget(budget_n)).map_err(anyhow::Error::from)?;
            println!("opt={cost}");
            if let Some(out) = out {
                write(&out, &write_cover(&cover))?;
            }
        }
        Cmd::Compare { algo, input, oracle, out, tie_break, budget_n } => {
            let mut paths: Vec<PathBuf> = glob::glob(&input)
                .context("bad glob pattern")?
                .collect::<Result<_, _>>()
                .context("reading glob matches")?;
            paths.sort();
            let b = budget(budget_n);
            let per: Vec<anyhow::Result<Vec<RatioRow>>> = paths
                .par_iter()
                .map(|p| {
                    let inst = read_instance(p)?;
                    Ok(compare_instance(&p.display().to_string(), &inst, &algo, tie_break, oracle.then_some(&b))?)
                })
                .collect();
            let mut rows = Vec::new();
            for r in per {
                rows.extend(r?);
            }
            let file = fs::File::create(&out).with_context(|| format!("creating {}", out.display()))?;
            write_ratio_csv(file, &rows).context("writing CSV")?;
            for (a, mean) in mean_ratios(&rows, &algo) {
                if let Some(m) = mean {
                    println!("{} mean ratio {m:.4}", a.name());
                }
            }
            let bad = rows.iter().filter(|r| !r.ok()).count();
            let skipped = rows.iter().filter(|r| r.skipped).count();
            println!("{} rows, {bad} failing, {skipped} skipped", rows.len());
            if bad > 0 {
                return Err(Fail(1, anyhow::anyhow!("{bad} rows infeasible, errored or above bound")));
            }
        }
        Cmd::Probe { seed, trials, out, budget_n } => {
            let report = matching_vs_opt_probe(seed, trials, &budget(budget_n)).map_err(anyhow::Error::from)?;
            let file = fs::File::create(&out).with_context(|| format!("creating {}", out.display()))?;
            write_probe_csv(file, &report).context("writing CSV")?;
            let bad = report.counterexamples();
            match report.max_ratio_m2() {
                Some(m) => println!("{trials} trials, {} counterexamples, max w(M'')/opt {m}", bad.len()),
                None => println!("0 trials"),
            }
            if let Some(first) = bad.first() {
                return Err(Fail(1, anyhow::anyhow!("matching above optimum at seed {}", first.seed)));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
