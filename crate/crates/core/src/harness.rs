//! Monte Carlo sweeps over randomized settings, summary statistics,
//! best-policy counts and closest-scenario matching.

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::fairness::FairnessReport;
use crate::rng::run_key;
use crate::scenario::{Scenario, ScenarioParams};
use crate::tally::{ElectionOutcome, Policy};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// One (scenario, policy) result row.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub setting: usize,
    pub run: usize,
    pub policy: Policy,
    /// Display key derived from (master_seed, setting, run).
    pub run_key: u64,
    pub report: FairnessReport,
}

impl RunRecord {
    pub fn scenario_id(&self) -> String {
        format!("s{}_r{}", self.setting, self.run)
    }
}

/// The comparison metrics summarized over a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    NrPct,
    NdPct,
    NbcMean,
    Prp,
    Pbs,
    Pirp,
}

/// Whether smaller or larger metric values are better.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Min,
    Max,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::NrPct,
        Metric::NdPct,
        Metric::NbcMean,
        Metric::Prp,
        Metric::Pbs,
        Metric::Pirp,
    ];

    /// Column/key name; `depth` names the dissatisfaction column.
    pub fn name(self, depth: usize) -> String {
        match self {
            Metric::NrPct => "NR_pct".into(),
            Metric::NdPct => format!("ND{depth}_pct"),
            Metric::NbcMean => "NBC_mean".into(),
            Metric::Prp => "PRP".into(),
            Metric::Pbs => "PBS".into(),
            Metric::Pirp => "PIRP".into(),
        }
    }

    pub fn polarity(self) -> Polarity {
        match self {
            Metric::NrPct | Metric::NbcMean => Polarity::Max,
            Metric::NdPct | Metric::Prp | Metric::Pbs | Metric::Pirp => Polarity::Min,
        }
    }

    pub fn extract(self, report: &FairnessReport, depth: usize) -> f64 {
        match self {
            Metric::NrPct => report.nr_pct(),
            Metric::NdPct => report.nd_pct(depth),
            Metric::NbcMean => report.nbc_mean,
            Metric::Prp => report.prp,
            Metric::Pbs => report.pbs,
            Metric::Pirp => report.pirp,
        }
    }
}

/// Five-number summary plus mean, deviation and best-run count for one
/// (metric, policy) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    /// Runs in which the policy was strictly best on this metric.
    pub best_count: usize,
}

/// Summary of a full sweep: per metric, per policy statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub total_runs: usize,
    pub depth: usize,
    /// metric name -> policy name -> summary.
    pub metrics: BTreeMap<String, BTreeMap<String, MetricSummary>>,
}

/// Everything a sweep produces.
#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub records: Vec<RunRecord>,
    pub summary: SweepSummary,
}

/// Generates the scenario for one `(setting, run)` cell and evaluates every
/// configured policy on it.
pub fn run_setting(
    config: &RunConfig,
    setting: usize,
    run: usize,
) -> Result<(ScenarioParams, Vec<(Policy, ElectionOutcome, FairnessReport)>)> {
    let scenario = Scenario::generate(config, setting, run)?;
    let rules = Scenario::ballot_rules(config);
    let depths = config.depths();
    let mut evaluations = Vec::with_capacity(config.policies.len());
    for &policy in &config.policies {
        let (outcome, report) = scenario.evaluate_policy(policy, &rules, &depths)?;
        evaluations.push((policy, outcome, report));
    }
    Ok((scenario.params(), evaluations))
}

/// Executes `n_settings x runs_per_setting` runs and summarizes them.
/// Cells run in parallel; records come back in deterministic
/// (setting, run, policy) order regardless of worker count.
pub fn run_sweep(config: &RunConfig) -> Result<SweepOutput> {
    config.validate()?;
    let cells: Vec<(usize, usize)> = (0..config.n_settings)
        .flat_map(|s| (0..config.runs_per_setting).map(move |r| (s, r)))
        .collect();
    let per_cell: Vec<Vec<RunRecord>> = cells
        .par_iter()
        .map(|&(setting, run)| {
            let (_, evaluations) = run_setting(config, setting, run).map_err(|e| {
                Error::Internal(format!("run (setting {setting}, run {run}) failed: {e}"))
            })?;
            let key = run_key(config.master_seed, setting as u64, run as u64);
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
        })
        .collect::<Result<_>>()?;
    let records: Vec<RunRecord> = per_cell.into_iter().flatten().collect();
    let summary = summarize(&records, &config.policies, config.dissatisfaction_depth)?;
    Ok(SweepOutput { records, summary })
}

/// Linear-interpolation quantile of an ascending-sorted slice.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    if sorted.len() == 1 {
        return sorted[0];
    }
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn summarize(records: &[RunRecord], policies: &[Policy], depth: usize) -> Result<SweepSummary> {
    let runs: usize = {
        let mut ids: Vec<(usize, usize)> = records.iter().map(|r| (r.setting, r.run)).collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    };
    let mut metrics = BTreeMap::new();
    for metric in Metric::ALL {
        let best = best_policy_counts(records, metric, metric.polarity(), depth)?;
        let mut per_policy = BTreeMap::new();
        for &policy in policies {
            let mut values: Vec<f64> = records
                .iter()
                .filter(|r| r.policy == policy)
                .map(|r| metric.extract(&r.report, depth))
                .collect();
            values.sort_by(f64::total_cmp);
            let n = values.len() as f64;
            let mean = values.iter().sum::<f64>() / n;
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            per_policy.insert(
                policy.name().to_string(),
                MetricSummary {
                    mean,
                    std: var.sqrt(),
                    min: values[0],
                    q1: quantile(&values, 0.25),
                    median: quantile(&values, 0.5),
                    q3: quantile(&values, 0.75),
                    max: *values.last().expect("non-empty values"),
                    best_count: best.get(&policy).copied().unwrap_or(0),
                },
            );
        }
        metrics.insert(metric.name(depth), per_policy);
    }
    Ok(SweepSummary {
        total_runs: runs,
        depth,
        metrics,
    })
}

/// Per policy, the number of runs where it was strictly best under the
/// metric's polarity. Exact ties award nobody.
pub fn best_policy_counts(
    records: &[RunRecord],
    metric: Metric,
    polarity: Polarity,
    depth: usize,
) -> Result<BTreeMap<Policy, usize>> {
    let mut by_cell: BTreeMap<(usize, usize), Vec<(Policy, f64)>> = BTreeMap::new();
    for record in records {
        by_cell
            .entry((record.setting, record.run))
            .or_default()
            .push((record.policy, metric.extract(&record.report, depth)));
    }
    let mut counts: BTreeMap<Policy, usize> = BTreeMap::new();
    let expected: usize = by_cell.values().next().map_or(0, Vec::len);
    for ((setting, run), mut rows) in by_cell {
        if rows.len() != expected {
            return Err(Error::MalformedRecords(format!(
                "run (setting {setting}, run {run}) covers {} policies, expected {expected}",
                rows.len()
            )));
        }
        rows.sort_by(|a, b| match polarity {
            Polarity::Min => a.1.total_cmp(&b.1),
            Polarity::Max => b.1.total_cmp(&a.1),
        });
        if rows.len() == 1 || rows[0].1 != rows[1].1 {
            *counts.entry(rows[0].0).or_default() += 1;
        }
    }
    Ok(counts)
}

/// An observed election result to match against simulated scenarios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservedResult {
    /// Popular vote shares of the reported parties, descending.
    pub vote_shares: Vec<f64>,
    /// Seats won by those parties.
    pub seat_counts: Vec<usize>,
    pub total_seats: usize,
}

impl ObservedResult {
    pub fn validate(&self, n_parties: usize) -> Result<()> {
        if self.vote_shares.len() != n_parties || self.seat_counts.len() != n_parties {
            return Err(Error::Config(format!(
                "observed result must list exactly {n_parties} parties"
            )));
        }
        if self
            .vote_shares
            .iter()
            .any(|&v| !(0.0..=1.0).contains(&v))
        {
            return Err(Error::Config(
                "vote_shares entries must lie in [0, 1]".into(),
            ));
        }
        if self.vote_shares.iter().sum::<f64>() > 1.0 + 1e-9 {
            return Err(Error::Config("vote_shares must sum to at most 1".into()));
        }
        if self.total_seats == 0 {
            return Err(Error::Config("total_seats must be at least 1".into()));
        }
        if self.seat_counts.iter().any(|&s| s > self.total_seats) {
            return Err(Error::Config(
                "seat_counts entries cannot exceed total_seats".into(),
            ));
        }
        Ok(())
    }
}

/// The winning pool member of a closest-scenario search.
#[derive(Debug, Clone, Serialize)]
pub struct MatchResult {
    /// Index of the best pool member; replayable as (setting, run 0).
    pub pool_index: usize,
    pub run_key: u64,
    pub params: ScenarioParams,
    /// Simulated popular-vote shares, descending.
    pub vote_shares: Vec<f64>,
    /// Simulated seats, ordered to match `vote_shares`.
    pub seat_counts: Vec<usize>,
    pub distance: f64,
}

/// Vote shares and seats of one scenario under 1-approval, sorted by vote
/// share descending so party labels (arbitrary in simulation) line up with
/// observed results reported by placement.
fn placement_sorted(scenario: &Scenario, config: &RunConfig) -> Result<(Vec<f64>, Vec<usize>)> {
    let rules = Scenario::ballot_rules(config);
    let (outcome, _) = scenario.evaluate_policy(Policy::OneApproval, &rules, &[1])?;
    let shares = scenario.vote_shares();
    let mut order: Vec<usize> = (0..shares.len()).collect();
    order.sort_unstable_by(|&a, &b| shares[b].total_cmp(&shares[a]).then_with(|| a.cmp(&b)));
    let sorted_shares: Vec<f64> = order.iter().map(|&k| shares[k]).collect();
    let sorted_seats: Vec<usize> = order.iter().map(|&k| outcome.seats()[k]).collect();
    Ok((sorted_shares, sorted_seats))
}

fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Simulates `pool_size` scenarios under 1-approval and returns the member
/// with the smallest blend of vote-share and seat-share L1 distances to the
/// observed result (weights from `match_vote_weight`).
pub fn find_closest_scenario(
    observed: &ObservedResult,
    config: &RunConfig,
    pool_size: usize,
) -> Result<MatchResult> {
    config.validate()?;
    if pool_size == 0 {
        return Err(Error::InvalidParameter("pool_size must be at least 1".into()));
    }
    observed.validate(config.n_parties)?;

    let observed_seat_shares: Vec<f64> = observed
        .seat_counts
        .iter()
        .map(|&s| s as f64 / observed.total_seats as f64)
        .collect();
    let w = config.match_vote_weight;

    let candidates: Vec<(usize, f64, Vec<f64>, Vec<usize>)> = (0..pool_size)
        .into_par_iter()
        .map(|index| {
            let scenario = Scenario::generate(config, index, 0)?;
            let (shares, seats) = placement_sorted(&scenario, config)?;
            let seat_shares: Vec<f64> = seats
                .iter()
                .map(|&v| v as f64 / config.n_districts as f64)
                .collect();
            let distance =
                w * l1(&shares, &observed.vote_shares) + (1.0 - w) * l1(&seat_shares, &observed_seat_shares);
            Ok((index, distance, shares, seats))
        })
        .collect::<Result<_>>()?;

    let (pool_index, distance, vote_shares, seat_counts) = candidates
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)))
        .expect("pool is non-empty");

    let best = Scenario::generate(config, pool_index, 0)?;
    Ok(MatchResult {
        pool_index,
        run_key: run_key(config.master_seed, pool_index as u64, 0),
        params: best.params(),
        vote_shares,
        seat_counts,
        distance,
    })
}
