//! Command-line front end: sweeps, single-scenario runs, closest-scenario
//! matching and exact replay of a stored (setting, run) tuple.

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use electsim_core::{
    find_closest_scenario, load_config, output, run_sweep, ObservedResult, RunConfig, RunRecord,
    Scenario,
};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "electsim", version, about = "District election simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Configuration file (JSON).
    config: PathBuf,
    /// Override the configured master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the configured worker count (0 = all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Override the configured output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full configured sweep and write runs.csv, summary.json and
    /// manifest.json.
    Sweep(CommonOpts),
    /// Run a single (setting, run) cell with per-district dumps.
    Scenario {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, default_value_t = 0)]
        setting: usize,
        #[arg(long, default_value_t = 0)]
        run: usize,
    },
    /// Find the simulated scenario closest to an observed result.
    Match {
        #[command(flatten)]
        common: CommonOpts,
        /// Observed result file (JSON with vote_shares, seat_counts,
        /// total_seats).
        #[arg(long)]
        observed: PathBuf,
        /// Override the configured pool size.
        #[arg(long)]
        pool_size: Option<usize>,
    },
    /// Reproduce one run of a sweep bit-exactly.
    Replay {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        setting: usize,
        #[arg(long)]
        run: usize,
    },
}

fn resolve_config(common: &CommonOpts) -> anyhow::Result<RunConfig> {
    let mut config = load_config(&common.config)
        .with_context(|| format!("loading {}", common.config.display()))?;
    if let Some(seed) = common.seed {
        config.master_seed = seed;
    }
    if let Some(workers) = common.workers {
        config.workers = workers;
    }
    if let Some(out) = &common.out {
        config.out_dir = out.clone();
    }
    Ok(config)
}

fn thread_pool(config: &RunConfig) -> anyhow::Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .context("building worker pool")
}

fn cmd_sweep(common: CommonOpts) -> anyhow::Result<()> {
    let config = resolve_config(&common)?;
    let pool = thread_pool(&config)?;
    let output = pool.install(|| run_sweep(&config))?;
    let paths = output::write_outputs(&output.records, &output.summary, &config, &config.out_dir)?;
    for path in paths {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn records_for_cell(config: &RunConfig, setting: usize, run: usize) -> anyhow::Result<Vec<RunRecord>> {
    let (_, evaluations) = electsim_core::run_setting(config, setting, run)?;
    let key = electsim_core::rng::run_key(config.master_seed, setting as u64, run as u64);
    Ok(evaluations
        .into_iter()
        .map(|(policy, _, report)| RunRecord {
            setting,
            run,
            policy,
            run_key: key,
            report,
        })
        .collect())
}

fn cmd_scenario(common: CommonOpts, setting: usize, run: usize) -> anyhow::Result<()> {
    let config = resolve_config(&common)?;
    let pool = thread_pool(&config)?;
    pool.install(|| -> anyhow::Result<()> {
        let scenario = Scenario::generate(&config, setting, run)?;
        let rules = Scenario::ballot_rules(&config);
        let depths = config.depths();
        let dir = &config.out_dir;
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;

        output::write_json(dir.join("scenario_manifest.json"), &scenario.params())?;
        if config.dump_electorate {
            let mut buf = Vec::new();
            scenario.electorate.write_csv(&mut buf)?;
            fs::write(dir.join("electorate.csv"), buf)?;
        }
        if config.dump_valuations {
            let mut buf = Vec::new();
            scenario.values.write_csv(&mut buf)?;
            fs::write(dir.join("valuations.csv"), buf)?;
        }

        let mut records = Vec::new();
        let key = electsim_core::rng::run_key(config.master_seed, setting as u64, run as u64);
        for &policy in &config.policies {
            let ((outcome, report), tallies) =
                scenario.evaluate_policy_with_tallies(policy, &rules, &depths)?;
            println!(
                "{policy}: seats {:?}, NR {:.2}%, ND({}) {:.2}%, NBC {:.3}",
                outcome.seats(),
                report.nr_pct(),
                config.dissatisfaction_depth,
                report.nd_pct(config.dissatisfaction_depth),
                report.nbc_mean
            );
            output::write_json(dir.join(format!("outcome_{policy}.json")), &outcome)?;
            if config.dump_district_scores {
                fs::write(
                    dir.join(format!("district_scores_{policy}.csv")),
                    output::district_scores_csv_bytes(&tallies)?,
                )?;
            }
            if config.dump_ballots {
                let ballot_dir = dir.join(format!("ballots_{policy}"));
                fs::create_dir_all(&ballot_dir)?;
                for district in 0..scenario.electorate.n_districts() {
                    fs::write(
                        ballot_dir.join(format!("district_{district}.csv")),
                        output::ballots_csv_bytes(&scenario, policy, &rules, district)?,
                    )?;
                }
            }
            records.push(RunRecord {
                setting,
                run,
                policy,
                run_key: key,
                report,
            });
        }
        fs::write(
            dir.join("scenario_runs.csv"),
            output::runs_csv_bytes(&records, config.dissatisfaction_depth, config.n_parties)?,
        )?;
        println!("wrote {}", dir.display());
        Ok(())
    })
}

fn cmd_match(common: CommonOpts, observed: PathBuf, pool_size: Option<usize>) -> anyhow::Result<()> {
    let mut config = resolve_config(&common)?;
    if let Some(pool_size) = pool_size {
        config.pool_size = pool_size;
    }
    let text = fs::read_to_string(&observed)
        .with_context(|| format!("reading {}", observed.display()))?;
    let observed: ObservedResult = serde_json::from_str(&text)
        .with_context(|| "parsing observed result (expected vote_shares, seat_counts, total_seats)")?;

    let pool = thread_pool(&config)?;
    let result = pool.install(|| find_closest_scenario(&observed, &config, config.pool_size))?;
    fs::create_dir_all(&config.out_dir)?;
    let path = config.out_dir.join("match.json");
    output::write_json(&path, &result)?;
    println!(
        "closest pool member {} at distance {:.6} (shares {:?}, seats {:?})",
        result.pool_index, result.distance, result.vote_shares, result.seat_counts
    );
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_replay(common: CommonOpts, setting: usize, run: usize) -> anyhow::Result<()> {
    let config = resolve_config(&common)?;
    let pool = thread_pool(&config)?;
    let records = pool.install(|| records_for_cell(&config, setting, run))?;
    let bytes = output::runs_csv_bytes(&records, config.dissatisfaction_depth, config.n_parties)?;
    fs::create_dir_all(&config.out_dir)?;
    let path = config.out_dir.join(format!("replay_s{setting}_r{run}.csv"));
    fs::write(&path, &bytes)?;
    print!("{}", String::from_utf8_lossy(&bytes));
    println!("wrote {}", path.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(common) => cmd_sweep(common),
        Command::Scenario { common, setting, run } => cmd_scenario(common, setting, run),
        Command::Match {
            common,
            observed,
            pool_size,
        } => cmd_match(common, observed, pool_size),
        Command::Replay { common, setting, run } => cmd_replay(common, setting, run),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
