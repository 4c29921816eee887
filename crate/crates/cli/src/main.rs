use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ksmk_core::experiment::{emit_outputs, load_instances, run_experiment, solve, ExperimentConfig};
use ksmk_core::io::{gen_random_instance, read_instance, write_instance, FamilyParams, InstanceBundle};
use ksmk_core::verify::{check_ksubmodularity_with, CheckMode, CheckOptions};
use ksmk_core::{Algorithm, Error, Result};

#[derive(Parser)]
#[command(name = "ksmk", version, about = "k-submodular maximization under a knapsack constraint")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a budget sweep and write results.csv, plot data and a summary.
    Run(Opts),
    /// Certify k-submodularity of an instance's objective.
    Check(Opts),
    /// Solve one instance with one algorithm.
    Solve(Opts),
    /// Write a random coverage-bonus instance with N elements.
    Gen {
        /// Number of elements.
        n: usize,
        #[command(flatten)]
        opts: Opts,
    },
    /// Exact optimum by exhaustive enumeration.
    Opt(Opts),
}

#[derive(Args)]
struct Opts {
    /// Instance file; without it the instance comes from --config.
    instance: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// laa, rla, greedy or brute; repeatable for `run`.
    #[arg(long)]
    algo: Vec<Algorithm>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Repeatable.
    #[arg(long)]
    budget: Vec<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long = "mc-samples")]
    mc_samples: Option<usize>,
    #[arg(long = "shuffle-seed")]
    shuffle_seed: Option<u64>,
    #[arg(long = "max-enum")]
    max_enum: Option<u64>,
}

impl Opts {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_text(&fs::read_to_string(path)?)?,
            None => ExperimentConfig::default(),
        };
        if !self.algo.is_empty() {
            cfg.algorithms = self.algo.clone();
        }
        if !self.budget.is_empty() {
            cfg.budgets = self.budget.clone();
        }
        cfg.epsilon = self.epsilon.unwrap_or(cfg.epsilon);
        cfg.k = self.k.unwrap_or(cfg.k);
        cfg.seed = self.seed.unwrap_or(cfg.seed);
        cfg.reps = self.reps.unwrap_or(cfg.reps);
        cfg.mc_samples = self.mc_samples.unwrap_or(cfg.mc_samples);
        cfg.max_enum = self.max_enum.unwrap_or(cfg.max_enum);
        if let Some(out) = &self.out {
            cfg.out = out.clone();
        }
        if self.shuffle_seed.is_some() {
            cfg.shuffle_seed = self.shuffle_seed;
        }
        Ok(cfg)
    }

    /// The single instance used by `check`, `solve` and `opt`.
    fn bundle(&self, cfg: &ExperimentConfig) -> Result<InstanceBundle> {
        let mut bundle = match &self.instance {
            Some(path) => read_instance(fs::File::open(path)?)?,
            None => {
                let mut cfg = cfg.clone();
                cfg.reps = 1;
                if cfg.budgets.is_empty() {
                    return Err(Error::Config("no budget given".into()));
                }
                load_instances(&cfg)?.remove(0)
            }
        };
        if let Some(&b) = self.budget.first() {
            bundle.instance = bundle.instance.with_budget(b)?;
        }
        Ok(bundle)
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(opts) => {
            let cfg = opts.config()?;
            let table = run_experiment(&cfg)?;
            let files = emit_outputs(&table, &cfg.out)?;
            print!("{}", fs::read_to_string(files.last().expect("summary written"))?);
            for f in &table.failures {
                eprintln!("warning: {f}");
            }
        }
        Command::Check(opts) => {
            let cfg = opts.config()?;
            let bundle = opts.bundle(&cfg)?;
            let f = bundle.build_objective()?;
            let mode = match opts.seed {
                Some(seed) => CheckMode::Sampled { seed, trials: 10_000 },
                None => CheckMode::Exhaustive,
            };
            let check = CheckOptions {
                max_states: cfg.max_enum,
                ..CheckOptions::default()
            };
            let report = check_ksubmodularity_with(f.as_ref(), &bundle.instance, mode, check)?;
            print!("{}", report.to_summary());
            if !report.is_k_submodular() {
                return Err(Error::Config("objective is not k-submodular".into()));
            }
        }
        Command::Solve(opts) => {
            let cfg = opts.config()?;
            let algo = match opts.algo.as_slice() {
                [] => Algorithm::Rla,
                [a] => *a,
                _ => return Err(Error::Config("solve takes a single --algo".into())),
            };
            report_solution(&opts, &cfg, algo)?;
        }
        Command::Opt(opts) => {
            let cfg = opts.config()?;
            report_solution(&opts, &cfg, Algorithm::Brute)?;
        }
        Command::Gen { n, opts } => {
            let cfg = opts.config()?;
            let mut bundle = gen_random_instance(n, cfg.k, cfg.seed, &FamilyParams::default())?;
            if let Some(&b) = opts.budget.first() {
                bundle.instance = bundle.instance.with_budget(b)?;
            }
            let text = write_instance(&bundle)?;
            match &opts.out {
                Some(path) => fs::write(path, text)?,
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}

fn report_solution(opts: &Opts, cfg: &ExperimentConfig, algo: Algorithm) -> Result<()> {
    if algo == Algorithm::Rla && !(cfg.epsilon > 0.0 && cfg.epsilon < 0.2) {
        return Err(Error::EpsilonOutOfRange(cfg.epsilon));
    }
    let bundle = opts.bundle(cfg)?;
    let f = bundle.build_objective()?;
    let r = solve(algo, &bundle.instance, f.as_ref(), cfg.epsilon, cfg.tie_break, cfg.max_enum)?;
    println!("algorithm={}", r.algorithm);
    println!("B={}", bundle.instance.budget());
    println!("solution={}", r.solution);
    println!("value={}", r.value);
    println!("cost={}", r.cost);
    println!("queries={}", r.queries);
    println!("millis={:.3}", r.wall_time.as_secs_f64() * 1e3);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
