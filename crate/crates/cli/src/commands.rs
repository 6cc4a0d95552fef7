use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qgcl_core::cdcl::{check_model, Solver};
use qgcl_core::dimacs::{parse_dimacs, write_dimacs, Cnf};
use qgcl_core::extract::{ExtractionConfig, Strategy};
use qgcl_core::grover::GroverConfig;
use qgcl_core::hybrid::{solve_hybrid, CallRecord, HybridConfig};
use qgcl_core::scagen::{generate_instance, parse_word, LeakageRelation, ScaConfig};
use qgcl_core::{SolveResult, SolveStatus, SolverConfig};

use crate::report::{self, CallRow, Mode, RunRow};
use crate::sweep::{gnuplot_block, summary_csv, SummaryRow};

#[derive(Debug, Parser)]
#[command(name = "qgcl", version, about = "CDCL with simulated Grover subformula guidance")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a side-channel proxy instance.
    Gen(GenArgs),
    /// Solve a DIMACS file.
    Solve(SolveArgs),
    /// Repeat runs over a parameter grid and summarize.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Relation {
    Eq,
    Neq,
}

#[derive(Debug, Clone, Args)]
pub struct InstanceFlags {
    /// Key and state width in bits.
    #[arg(long, default_value_t = 8)]
    pub width: usize,
    /// Leakage relation at the check cycle.
    #[arg(long, value_enum, default_value_t = Relation::Neq)]
    pub relation: Relation,
    /// Cycle whose leakage is compared; defaults to the last one.
    #[arg(long)]
    pub check_cycle: Option<usize>,
    /// Enable the nonlinear substitution layer.
    #[arg(long)]
    pub subst: bool,
    /// Plaintext, most significant bit first (default: all ones).
    #[arg(long)]
    pub plaintext: Option<String>,
    /// Known key bits as `bit=value` pairs, e.g. `0=1,5=0`.
    #[arg(long)]
    pub fixed_key_bits: Option<String>,
}

impl InstanceFlags {
    pub fn config(&self, cycles: usize) -> Result<ScaConfig> {
        let mut c = ScaConfig::new(self.width, cycles);
        c.relation = match self.relation {
            Relation::Eq => LeakageRelation::Equal,
            Relation::Neq => LeakageRelation::NotEqual,
        };
        c.check_cycle = self.check_cycle.unwrap_or(cycles);
        c.substitution = self.subst;
        if let Some(p) = &self.plaintext {
            c.plaintext = parse_word(p).with_context(|| format!("plaintext {p:?} is not a bit string"))?;
        }
        if let Some(list) = &self.fixed_key_bits {
            c.fixed_key_bits = parse_fixed_bits(list)?;
        }
        c.validate()?;
        Ok(c)
    }
}

fn parse_fixed_bits(list: &str) -> Result<Vec<(usize, bool)>> {
    list.split(',')
        .filter(|s| !s.is_empty())
        .map(|item| {
            let (bit, value) = item
                .split_once('=')
                .with_context(|| format!("fixed key bit {item:?} is not bit=value"))?;
            let value = match value.trim() {
                "0" => false,
                "1" => true,
                other => bail!("fixed key bit value {other:?} is not 0 or 1"),
            };
            Ok((bit.trim().parse()?, value))
        })
        .collect()
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub instance: InstanceFlags,
    /// Number of update cycles.
    #[arg(long)]
    pub cycles: usize,
    /// DIMACS output (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON sidecar with the configuration and variable ranges.
    #[arg(long)]
    pub meta: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SolverFlags {
    /// Cap on subformula variables plus clauses.
    #[arg(long, default_value_t = 20)]
    pub budget: usize,
    #[arg(long, default_value_t = 15)]
    pub max_calls: u32,
    /// Conflicts between Grover call points.
    #[arg(long, default_value_t = 250)]
    pub interval: u64,
    /// Extraction strategy: abfs, ag, rand or vf.
    #[arg(long, default_value = "abfs")]
    pub strategy: String,
    #[arg(long, default_value_t = 2000)]
    pub shots: u32,
    /// Weight of the uniform component in the sampled distribution.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Candidates checked classically per attempt.
    #[arg(long, default_value_t = 5)]
    pub top_k: usize,
    #[arg(long, default_value_t = 12)]
    pub max_attempts: u32,
    /// Stop with UNKNOWN after this many conflicts.
    #[arg(long)]
    pub conflict_budget: Option<u64>,
}

impl SolverFlags {
    pub fn hybrid_config(&self) -> Result<HybridConfig> {
        let strategy: Strategy = self.strategy.parse()?;
        let config = HybridConfig {
            grover_interval: self.interval,
            max_grover_calls: self.max_calls,
            extraction: ExtractionConfig {
                budget: self.budget,
                strategy,
                ..Default::default()
            },
            grover: GroverConfig {
                shots: self.shots,
                noise_epsilon: self.noise,
                top_k: self.top_k,
                max_attempts: self.max_attempts,
                ..Default::default()
            },
            ..Default::default()
        };
        config.validate()?;
        Ok(config)
    }

    pub fn solver_config(&self, seed: u64) -> SolverConfig {
        SolverConfig {
            random_seed: seed,
            conflict_budget: self.conflict_budget,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    /// DIMACS input.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Qgcl)]
    pub mode: Mode,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub solver: SolverFlags,
    /// Append the run row to this CSV.
    #[arg(long)]
    pub stats_out: Option<PathBuf>,
    /// Write one row per Grover call to this CSV.
    #[arg(long)]
    pub calls_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    Budget,
    MaxCalls,
    Strategy,
    Cycles,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Budget => "budget",
            SweepParam::MaxCalls => "max-calls",
            SweepParam::Strategy => "strategy",
            SweepParam::Cycles => "cycles",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// DIMACS input; required unless sweeping cycles.
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub param: SweepParam,
    /// Comma-separated values.
    #[arg(long, value_delimiter = ',', required = true)]
    pub values: Vec<String>,
    /// Runs per setting, with seeds 1..=runs.
    #[arg(long, default_value_t = 10)]
    pub runs: u64,
    /// Directory for raw runs, the summary and generated instances.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Also write `summary.dat` for gnuplot.
    #[arg(long)]
    pub gnuplot: bool,
    #[command(flatten)]
    pub solver: SolverFlags,
    #[command(flatten)]
    pub instance: InstanceFlags,
}

/// What a solve produced, before any output is written.
#[derive(Debug, Clone)]
pub struct Run {
    pub row: RunRow,
    pub result: SolveResult,
    pub calls: Vec<CallRecord>,
}

/// Solves `cnf` once, timing only the search, and checks any model.
pub fn run_once(cnf: &Cnf, instance: &str, mode: Mode, seed: u64, flags: &SolverFlags) -> Result<Run> {
    let solver_config = flags.solver_config(seed);
    let config = flags.hybrid_config()?;
    let (mut result, calls) = match mode {
        Mode::Cdcl => {
            let start = Instant::now();
            let mut r = Solver::new(cnf, solver_config).solve();
            r.stats.wall_time = start.elapsed().as_secs_f64();
            (r, Vec::new())
        }
        Mode::Qgcl => {
            let start = Instant::now();
            let h = solve_hybrid(cnf, &config, &solver_config);
            let elapsed = start.elapsed().as_secs_f64();
            let mut r = h.result;
            r.stats.wall_time = elapsed;
            (r, h.calls)
        }
    };
    if result.status == SolveStatus::Sat {
        let model = result.model.as_deref().context("SAT result without a model")?;
        ensure!(check_model(cnf, model)?, "model fails the input formula");
    }
    result.stats.grover_calls = calls.len() as u64;
    let iters = calls.iter().map(|c| c.iterations).sum();
    let row = RunRow::new(instance, mode, seed, cnf.num_vars(), cnf.num_clauses(), &result, iters);
    Ok(Run { row, result, calls })
}

pub fn read_cnf(path: &Path) -> Result<Cnf> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_dimacs(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn cmd_gen(args: &GenArgs) -> Result<()> {
    let config = args.instance.config(args.cycles)?;
    let (cnf, meta) = generate_instance(&config)?;
    let text = write_dimacs(&cnf);
    match &args.out {
        Some(p) => {
            std::fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?;
            println!("n={} m={}", cnf.num_vars(), cnf.num_clauses());
        }
        None => {
            print!("{text}");
            eprintln!("n={} m={}", cnf.num_vars(), cnf.num_clauses());
        }
    }
    if let Some(p) = &args.meta {
        let json = serde_json::to_string_pretty(&meta)?;
        std::fs::write(p, json + "\n").with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

/// Returns the process exit code.
pub fn cmd_solve(args: &SolveArgs) -> Result<i32> {
    let cnf = read_cnf(&args.input)?;
    let name = args.input.display().to_string();
    let run = run_once(&cnf, &name, args.mode, args.seed, &args.solver)?;
    match run.result.status {
        SolveStatus::Sat => {
            println!("s SATISFIABLE");
            let model = run.result.model.as_ref().expect("checked above");
            let lits: Vec<String> = model
                .iter()
                .enumerate()
                .map(|(i, &b)| if b { (i + 1).to_string() } else { format!("-{}", i + 1) })
                .collect();
            println!("v {} 0", lits.join(" "));
        }
        SolveStatus::Unsat => println!("s UNSATISFIABLE"),
        SolveStatus::Unknown => println!("s UNKNOWN"),
    }
    for line in report::to_csv(std::slice::from_ref(&run.row))?.lines() {
        println!("c {line}");
    }
    if let Some(p) = &args.stats_out {
        report::append_runs(p, std::slice::from_ref(&run.row))?;
    }
    if let Some(p) = &args.calls_out {
        let rows: Vec<CallRow> = run
            .calls
            .iter()
            .enumerate()
            .map(|(i, c)| CallRow::from_record(i, c))
            .collect();
        report::write_calls(p, &rows)?;
    }
    Ok(match run.result.status {
        SolveStatus::Sat => 10,
        SolveStatus::Unsat => 20,
        SolveStatus::Unknown => 0,
    })
}

/// File name for the raw runs of one setting.
pub fn raw_file_name(param: SweepParam, value: Option<&str>, mode: Mode) -> String {
    match value {
        Some(v) => format!("runs_{}_{}_{}.csv", mode.as_str(), param.name(), v),
        None => format!("runs_{}.csv", mode.as_str()),
    }
}

/// Runs the sweep and returns the summary rows. Raw rows go to one CSV per
/// (mode, setting) in `out_dir`; the summary to `summary.csv`.
pub fn cmd_sweep(args: &SweepArgs) -> Result<Vec<SummaryRow>> {
    ensure!(!args.values.is_empty(), "empty --values list");
    ensure!(args.runs >= 1, "--runs must be at least 1");
    std::fs::create_dir_all(&args.out_dir)?;
    let param = args.param;
    let seeds = 1..=args.runs;
    let mut summary = Vec::new();

    let run_all = |cnf: &Cnf, name: &str, mode: Mode, flags: &SolverFlags| -> Result<Vec<RunRow>> {
        seeds
            .clone()
            .map(|s| run_once(cnf, name, mode, s, flags).map(|r| r.row))
            .collect()
    };

    let fixed = if param == SweepParam::Cycles {
        None
    } else {
        let path = args
            .input
            .as_ref()
            .context("an input instance is required unless sweeping cycles")?;
        let cnf = read_cnf(path)?;
        let name = path.display().to_string();
        let rows = run_all(&cnf, &name, Mode::Cdcl, &args.solver)?;
        report::write_runs(&args.out_dir.join(raw_file_name(param, None, Mode::Cdcl)), &rows)?;
        summary.push(SummaryRow::from_rows(param.name(), "", Mode::Cdcl, &rows));
        Some((cnf, name))
    };

    for value in &args.values {
        let mut flags = args.solver.clone();
        let generated;
        let (cnf, name) = match param {
            SweepParam::Budget => {
                flags.budget = value.parse().with_context(|| format!("budget {value:?}"))?;
                let (c, n) = fixed.as_ref().expect("input read");
                (c, n.as_str())
            }
            SweepParam::MaxCalls => {
                flags.max_calls = value.parse().with_context(|| format!("max-calls {value:?}"))?;
                let (c, n) = fixed.as_ref().expect("input read");
                (c, n.as_str())
            }
            SweepParam::Strategy => {
                flags.strategy = value.clone();
                let (c, n) = fixed.as_ref().expect("input read");
                (c, n.as_str())
            }
            SweepParam::Cycles => {
                let cycles: usize = value.parse().with_context(|| format!("cycles {value:?}"))?;
                let mut inst = args.instance.clone();
                inst.check_cycle = None;
                let config = inst.config(cycles)?;
                let (cnf, _) = generate_instance(&config)?;
                let path = args.out_dir.join(format!("sca_w{}_t{}.cnf", config.width, cycles));
                std::fs::write(&path, write_dimacs(&cnf))?;
                generated = (cnf, path.display().to_string());
                let rows = run_all(&generated.0, &generated.1, Mode::Cdcl, &flags)?;
                report::write_runs(&args.out_dir.join(raw_file_name(param, Some(value), Mode::Cdcl)), &rows)?;
                summary.push(SummaryRow::from_rows(param.name(), value, Mode::Cdcl, &rows));
                (&generated.0, generated.1.as_str())
            }
        };
        let rows = run_all(cnf, name, Mode::Qgcl, &flags)?;
        report::write_runs(&args.out_dir.join(raw_file_name(param, Some(value), Mode::Qgcl)), &rows)?;
        summary.push(SummaryRow::from_rows(param.name(), value, Mode::Qgcl, &rows));
    }

    let csv = summary_csv(&summary)?;
    std::fs::write(args.out_dir.join("summary.csv"), &csv)?;
    if args.gnuplot {
        std::fs::write(args.out_dir.join("summary.dat"), gnuplot_block(&summary))?;
    }
    print!("{csv}");
    Ok(summary)
}
