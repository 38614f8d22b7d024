use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Deserialize;

use setconv::convergence::{diagnose, DiagnosticsConfig, Limit, SetSequence};
use setconv::convexification::{oracle_csv, repeated_average, shapley_folkman_gap};
use setconv::geometry::{convex_hull, directed_excess, dist_point_set, excess_body_to_cloud, PointCloud, PruneBudget};
use setconv::scenarios;
use setconv::slln::{self, ExperimentConfig, Mode};

#[derive(Parser)]
#[command(name = "setconv", version, about = "Minkowski averages, set convergence and random-set strong laws")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a strong-law experiment from a JSON config.
    Slln {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config seed (and is the first seed of a sweep).
        #[arg(long)]
        seed: Option<u64>,
        /// Sweep this many consecutive seeds.
        #[arg(long)]
        seeds: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also draw a log-log chart.
        #[arg(long)]
        svg: bool,
    },
    /// Convergence diagnostics for a serialized sequence and candidate limit.
    Converge {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Built-in scenarios.
    Demo {
        #[arg(value_enum)]
        scenario: Scenario,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: bool,
    },
    /// Shapley-Folkman checks on random small instances.
    Oracle {
        #[arg(long, default_value_t = 1000)]
        instances: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Scenario {
    /// D[n] for D = {0, 1} against the hull [0, 1].
    Averaging,
    /// Spike sequences in R^3 that stay a fixed distance outside the ball.
    Spikes,
    /// Coin-flip strong law for ({0}, 1/2), ({1}, 1/2).
    CoinFlip,
}

/// Input of `converge`.
#[derive(Deserialize)]
struct ConvergeInput {
    sequence: SetSequence,
    limit: Limit,
    #[serde(default, flatten)]
    diagnostics: DiagnosticsConfig,
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

fn run_slln(config: &Path, seed: Option<u64>, seeds: Option<u64>, out: Option<&Path>, svg: bool) -> Result<bool> {
    let mut cfg = ExperimentConfig::load(config).with_context(|| format!("loading {}", config.display()))?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    match seeds {
        Some(k) => {
            let list: Vec<u64> = (cfg.seed..cfg.seed + k).collect();
            let report = slln::sweep(&cfg, &list)?;
            for run in &report.runs {
                print_run(run);
            }
            println!(
                "sweep: {}/{} seeds passed (required fraction {}), almost-sure verdict {}",
                report.passed,
                report.runs.len(),
                report.required_fraction,
                if report.almost_sure { "consistent" } else { "inconsistent" }
            );
            if let Some(dir) = out {
                slln::emit_sweep(&report, dir, svg)?;
            }
            Ok(report.invariants_hold)
        }
        None => {
            let report = slln::run_experiment(&cfg)?;
            print_run(&report);
            if let Some(dir) = out {
                slln::emit(&report, dir, svg)?;
            }
            Ok(report.invariants_hold())
        }
    }
}

fn print_run(report: &slln::RunReport) {
    let last = report.rows.last().expect("at least one checkpoint");
    let opt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.6}"));
    println!(
        "seed {}: n = {}, h_convex = {:.6}, h_raw = {}, fisher deficit = {}, prune bound = {:.3e}, passed = {}, invariants = {}",
        report.seed,
        last.n,
        last.h_convex,
        opt(last.h_raw),
        opt(last.fisher_probe_deficit),
        last.prune_error_bound,
        report.passed(),
        if report.invariants_hold() { "ok" } else { "VIOLATED" }
    );
    for c in report.failed_invariants() {
        println!("  violated {} at n = {:?}: {} > {}", c.name, c.n, c.lhs, c.rhs);
    }
    if let Some(g) = &report.gamma {
        println!(
            "  quantization eps = {}: h(E, Gamma) = {:.6}, h(avg, Gamma) = {:.6}, fractions = {:?}",
            g.epsilon, g.h_expectation_gamma, g.h_average_gamma, g.fractions
        );
    }
}

fn run_converge(config: &Path, out: Option<&Path>) -> Result<bool> {
    let text = fs::read_to_string(config).with_context(|| format!("reading {}", config.display()))?;
    let input: ConvergeInput = serde_json::from_str(&text).with_context(|| format!("parsing {}", config.display()))?;
    let report = diagnose(&input.sequence, &input.limit, &input.diagnostics)?;
    let v = &report.verdicts;
    for (name, m) in [("hausdorff", v.hausdorff), ("fisher", v.fisher), ("wijsman", v.wijsman)] {
        println!(
            "{name:>9}: {} (worst {:.6} over the last {} terms, tolerance {})",
            if m.consistent { "consistent" } else { "inconsistent" },
            m.worst,
            m.window,
            m.tolerance
        );
    }
    if let Some(dir) = out {
        report.write_to(dir)?;
    }
    Ok(true)
}

fn demo_averaging(out: Option<&Path>) -> Result<bool> {
    let d = PointCloud::new(1, vec![vec![0.0], vec![1.0]])?;
    let hull = convex_hull(&d);
    let mut ok = true;
    let mut csv = String::from("n,hausdorff,expected\n");
    for n in 1..=64 {
        let avg = repeated_average(&d, n, &mut PruneBudget::exact())?;
        let h = excess_body_to_cloud(&hull, &avg)?.upper.max(hull.excess_of_cloud(&avg)?);
        let expected = 0.5 / n as f64;
        ok &= (h - expected).abs() <= 1e-12;
        csv.push_str(&format!("{n},{h},{expected}\n"));
    }
    println!("D[n] for D = {{0, 1}}: h(D[n], [0, 1]) = 1/(2n) for n = 1..64: {}", if ok { "yes" } else { "NO" });
    if let Some(dir) = out {
        write_file(dir, "averaging.csv", &csv)?;
    }
    Ok(ok)
}

fn demo_spikes(out: Option<&Path>) -> Result<bool> {
    let mut ok = true;
    let mut csv = String::from("lambda,n,excess,probe_error_at_n\n");
    for lambda in [1.05, 1.1, 1.15] {
        let s = scenarios::spikes(lambda, 400)?;
        let probes = s.far_probes();
        for (k, x) in s.sequence.terms().iter().enumerate() {
            let excess = directed_excess(x, &s.ball)?;
            let here = (dist_point_set(&probes[k], x)? - dist_point_set(&probes[k], &s.ball)?).abs();
            let elsewhere = s
                .sequence
                .terms()
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .map(|(_, y)| Ok((dist_point_set(&probes[k], y)? - dist_point_set(&probes[k], &s.ball)?).abs()))
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            ok &= (excess - (lambda - 1.0)).abs() < 1e-9 && (here - (lambda - 1.0)).abs() < 1e-9 && elsewhere < 1e-9;
            csv.push_str(&format!("{lambda},{},{excess},{here}\n", k + 1));
        }
        println!(
            "lambda = {lambda}: e(X_n, B) = {:.3} for every n (Fisher fails); each probe 2e_k is off only at n = k",
            lambda - 1.0
        );
    }
    if let Some(dir) = out {
        write_file(dir, "spikes.csv", &csv)?;
    }
    Ok(ok)
}

fn demo_coin_flip(seed: u64, out: Option<&Path>, svg: bool) -> Result<bool> {
    let mut cfg = ExperimentConfig::new(scenarios::coin_flip(), 10_000);
    cfg.seed = seed;
    cfg.mode = Mode::Convex;
    let report = slln::run_convex_slln(&cfg)?;
    let draws = cfg.random_set.sample_indices(cfg.n_max, seed);
    let mut ok = report.invariants_hold();
    for row in &report.rows {
        let heads = draws[..row.n].iter().filter(|&&i| i == 1).count();
        ok &= row.h_convex == (heads as f64 / row.n as f64 - 0.5).abs();
    }
    print_run(&report);
    println!("h_convex equals |S_n/n - 1/2| at every checkpoint: {}", if ok { "yes" } else { "NO" });
    if let Some(dir) = out {
        slln::emit(&report, dir, svg)?;
    }
    Ok(ok)
}

fn run_oracle(instances: u64, seed: u64, out: Option<&Path>) -> Result<bool> {
    let rows = (0..instances)
        .into_par_iter()
        .map(|i| shapley_folkman_gap(&scenarios::random_terms(seed.wrapping_add(i)), &mut PruneBudget::exact()))
        .collect::<setconv::Result<Vec<_>>>()?;
    let held = rows.iter().filter(|r| r.holds).count();
    let worst = rows.iter().map(|r| r.raw_gap - r.bound).fold(f64::NEG_INFINITY, f64::max);
    println!("Shapley-Folkman bound held on {held}/{instances} instances (largest gap - bound: {worst:.3e})");
    if let Some(dir) = out {
        write_file(dir, "oracle.csv", &oracle_csv(&rows))?;
    }
    Ok(held as u64 == instances)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Slln {
            config,
            seed,
            seeds,
            out,
            svg,
        } => run_slln(&config, seed, seeds, out.as_deref(), svg),
        Command::Converge { config, out } => run_converge(&config, out.as_deref()),
        Command::Demo {
            scenario,
            seed,
            out,
            svg,
        } => match scenario {
            Scenario::Averaging => demo_averaging(out.as_deref()),
            Scenario::Spikes => demo_spikes(out.as_deref()),
            Scenario::CoinFlip => demo_coin_flip(seed, out.as_deref(), svg),
        },
        Command::Oracle { instances, seed, out } => run_oracle(instances, seed, out.as_deref()),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
