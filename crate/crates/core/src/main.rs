//! Command-line harness: instance generation, sampling, solving, running
//! the sample-based algorithms, batch experiments, and distribution checks.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use opss::adversarial::{
    gen_assumption2_family, gen_assumption3_instance, gen_half_hardness, gen_infeasible_family,
    Family, HardnessInstance, Hidden,
};
use opss::dist::{
    check_conditional_lemma, check_negative_correlation, check_negative_correlation_exact,
    CorrelationReport, DistributionSpec,
};
use opss::error::{Error, Result};
use opss::graph::BipartiteGraph;
use opss::harness::{run_experiment, ExperimentConfig};
use opss::opss::{algorithm_general, algorithm_large_sample, algorithm_uniform_k, Branch};
use opss::sample::SampleLog;
use opss::solver::{MaxCoverSolver, SolverKind};

#[derive(Parser)]
#[command(
    name = "opss",
    version,
    about = "Maximum coverage from structured samples: generators, solvers, and experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a hardness-family graph plus a sidecar metadata line
    Gen {
        /// half-hardness | infeasible | assumption2 | assumption3
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Private/shared block size (half-hardness, infeasible, assumption3)
        #[arg(long)]
        r: Option<usize>,
        /// Number of left blocks (infeasible)
        #[arg(long)]
        p: Option<usize>,
        /// Right-set size (assumption2; optional override for infeasible)
        #[arg(long)]
        m: Option<usize>,
        /// Hidden index; drawn from the seed when omitted
        #[arg(long)]
        hidden: Option<usize>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw structured samples from a distribution against a graph
    Sample {
        #[arg(long)]
        graph: PathBuf,
        /// Distribution spec, e.g. "uniform-exact-k n=20 k=5"
        #[arg(long)]
        dist: String,
        #[arg(short = 't', long = "t")]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Constraint recorded in the log header; defaults to the
        /// distribution's maximum sample size
        #[arg(long)]
        k: Option<usize>,
    },
    /// Solve maximum coverage on a graph file
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        /// greedy | lazy | exact
        #[arg(long)]
        algo: SolverKind,
    },
    /// Run a sample-based algorithm on a sample log
    Run {
        #[arg(long)]
        samples: PathBuf,
        /// general | uniform-k | large-sample
        #[arg(long)]
        algo: String,
        #[arg(long)]
        eps: Option<f64>,
        /// greedy | lazy | exact
        #[arg(long)]
        solver: SolverKind,
        #[arg(long)]
        seed: u64,
    },
    /// Run a batch Monte Carlo experiment from a key=value config file
    Experiment {
        #[arg(long)]
        config: PathBuf,
    },
    /// Exhaustively check negative correlation of a distribution
    CheckNc {
        #[arg(long)]
        dist: String,
        /// Also verify the conditional-probability consequence
        #[arg(long)]
        conditional: bool,
        /// Use exact rational arithmetic instead of f64
        #[arg(long)]
        exact: bool,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Gen {
            family,
            n,
            k,
            r,
            p,
            m,
            hidden,
            seed,
            out,
        } => cmd_gen(family, n, k, r, p, m, hidden, seed, out),
        Command::Sample {
            graph,
            dist,
            count,
            seed,
            out,
            k,
        } => cmd_sample(graph, &dist, count, seed, out, k),
        Command::Solve { graph, k, algo } => cmd_solve(graph, k, algo),
        Command::Run {
            samples,
            algo,
            eps,
            solver,
            seed,
        } => cmd_run(samples, &algo, eps, solver, seed),
        Command::Experiment { config } => cmd_experiment(config),
        Command::CheckNc {
            dist,
            conditional,
            exact,
        } => cmd_check_nc(&dist, conditional, exact),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    family: Family,
    n: usize,
    k: usize,
    r: Option<usize>,
    p: Option<usize>,
    m: Option<usize>,
    hidden: Option<usize>,
    seed: u64,
    out: PathBuf,
) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    use rand::RngExt;
    let need_r = || r.ok_or_else(|| Error::Validation("this family requires --r".into()));
    let inst: HardnessInstance = match family {
        Family::HalfHardness => {
            if k < 2 {
                return Err(Error::Validation("half-hardness requires k >= 2".into()));
            }
            let h = hidden.unwrap_or_else(|| rng.random_range(0..k - 1));
            gen_half_hardness(n, k, need_r()?, h)?
        }
        Family::Infeasible => {
            let p = p.ok_or_else(|| Error::Validation("infeasible requires --p".into()))?;
            let good = hidden.unwrap_or_else(|| rng.random_range(0..p));
            gen_infeasible_family(n, k, need_r()?, p, good, m)?
        }
        Family::Assumption2 => {
            let m = m.ok_or_else(|| Error::Validation("assumption2 requires --m".into()))?;
            let h = hidden.unwrap_or_else(|| rng.random_range(0..n / 2));
            gen_assumption2_family(n, m, k, h)?
        }
        Family::Assumption3 => gen_assumption3_instance(n, k, need_r()?, &mut rng)?,
    };
    inst.graph.write_file(&out)?;
    let hidden_str = match &inst.hidden {
        Hidden::Index(i) => i.to_string(),
        Hidden::PerBlock(v) => v
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(","),
    };
    let meta = format!(
        "family={} hidden={} opt_value={} dist={}\n",
        inst.family, hidden_str, inst.opt_value, inst.dist
    );
    let meta_path = out.with_extension(format!(
        "{}meta",
        out.extension()
            .map(|e| format!("{}.", e.to_string_lossy()))
            .unwrap_or_default()
    ));
    std::fs::write(&meta_path, &meta)?;
    println!(
        "wrote {} ({} x {}) and {}",
        out.display(),
        inst.graph.n_left(),
        inst.graph.n_right(),
        meta_path.display()
    );
    print!("{}", meta);
    if inst.family == Family::Infeasible {
        let regime = k as f64 * (n as f64).ln().powi(2);
        println!(
            "note: the separation regime wants r far above k*ln^2(n) = {:.1}; this instance uses r={}",
            regime,
            inst.dist.feasible_bound()
        );
    }
    Ok(())
}

fn cmd_sample(
    graph: PathBuf,
    dist: &str,
    count: usize,
    seed: u64,
    out: PathBuf,
    k: Option<usize>,
) -> Result<()> {
    let g = BipartiteGraph::read_file(graph)?;
    let spec: DistributionSpec = dist.parse()?;
    let k = k.unwrap_or_else(|| spec.feasible_bound());
    let log = SampleLog::generate(&g, &spec, k, count, seed)?;
    log.write_file(&out)?;
    println!("wrote {} samples to {}", log.len(), out.display());
    Ok(())
}

fn cmd_solve(graph: PathBuf, k: usize, algo: SolverKind) -> Result<()> {
    let g = BipartiteGraph::read_file(graph)?;
    let result = algo.solve(&g, k)?;
    let indices: Vec<String> = result.chosen.iter().map(|u| u.to_string()).collect();
    println!("chosen: {}", indices.join(" "));
    println!("value: {}", result.value);
    println!("evaluations: {}", result.evaluations);
    Ok(())
}

fn cmd_run(samples: PathBuf, algo: &str, eps: Option<f64>, solver: SolverKind, seed: u64) -> Result<()> {
    let log = SampleLog::read_file(samples)?;
    let k = log.k;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outcome = match algo.to_ascii_lowercase().as_str() {
        "general" => algorithm_general(&log, k, &solver, &mut rng)?,
        "uniform-k" => {
            let eps = eps.ok_or_else(|| Error::Validation("uniform-k requires --eps".into()))?;
            if let Ok(bound) =
                opss::harness::required_samples_uniform_k(log.n_left, log.n_right, k, eps, 0.1)
            {
                log::warn!(
                    "the guarantee wants t >= {} samples (delta=0.1); this log has t={}, so \
                     desk-scale runs rely on the property suite rather than the theorem constant",
                    bound,
                    log.len()
                );
            }
            algorithm_uniform_k(&log, k, eps, &solver, &mut rng)?
        }
        "large-sample" => algorithm_large_sample(&log, k, &solver, &mut rng)?,
        other => return Err(Error::Format(format!("unknown algorithm '{}'", other))),
    };
    let show = |s: &opss::graph::NodeSet| {
        s.iter()
            .map(|u| u.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    println!("t1: {}", show(&outcome.t1));
    println!("t2: {}", show(&outcome.t2));
    println!("surrogate_value_t2: {}", outcome.surrogate_value_of_t2);
    match outcome.coin {
        Some(Branch::T1) => println!("coin: t1"),
        Some(Branch::T2) => println!("coin: t2"),
        None => println!("coin: none"),
    }
    println!("returned: {}", show(&outcome.returned));
    println!("returned_size: {}", outcome.returned.len());
    Ok(())
}

fn cmd_experiment(config: PathBuf) -> Result<()> {
    let cfg = ExperimentConfig::parse_file(config)?;
    let result = run_experiment(&cfg)?;
    println!("trials: {}", result.records.len());
    println!("samples_per_trial: {}", result.samples_per_trial);
    println!("opt_source: {}", result.opt_source);
    println!("mean_ratio: {:.6}", result.mean_ratio);
    println!(
        "hoeffding_halfwidth: {:.6} (beta {})",
        result.halfwidth, result.beta
    );
    println!("containment_fraction: {:.4}", result.containment_fraction);
    if let (Some(thr), Some(se), Some(sr)) = (
        result.threshold,
        result.success_fraction_expected,
        result.success_fraction_realized,
    ) {
        println!("threshold: {}", thr);
        println!("success_fraction_expected: {:.4}", se);
        println!("success_fraction_realized: {:.4}", sr);
    }
    if let Some(path) = &cfg.csv_path {
        println!("csv: {}", path.display());
    }
    if let Some(path) = &cfg.json_path {
        println!("json: {}", path.display());
    }
    Ok(())
}

fn cmd_check_nc(dist: &str, conditional: bool, exact: bool) -> Result<()> {
    let spec: DistributionSpec = dist.parse()?;
    let report = if exact {
        check_negative_correlation_exact(&spec)?
    } else {
        check_negative_correlation(&spec)?
    };
    print_report("negative-correlation", &report);
    if conditional {
        let lemma = check_conditional_lemma(&spec)?;
        print_report("conditional-probability", &lemma);
    }
    Ok(())
}

fn print_report(name: &str, report: &CorrelationReport) {
    println!(
        "{}: holds_everywhere={} worst_violation={} pairs_tested={}",
        name, report.holds_everywhere, report.worst_violation, report.pairs_tested
    );
    if let Some((i, j)) = &report.witness {
        println!("witness: I={:?} J={:?}", i, j);
    }
}
