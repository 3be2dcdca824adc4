//! Deterministic, seedable simulation of district-based multi-party
//! elections.
//!
//! The pipeline generates a community-structured synthetic electorate,
//! samples elector-party valuations, casts ballots under several voting
//! rules, tallies district winners, and scores every outcome with
//! elector-satisfaction measures. A sweep harness runs large paired Monte
//! Carlo comparisons across policies and can retrieve the simulated
//! scenario closest to an observed election result.

pub mod balloting;
pub mod config;
pub mod error;
pub mod fairness;
pub mod harness;
pub mod output;
pub mod population;
pub mod preference;
pub mod rng;
pub mod scenario;
pub mod tally;

pub use config::{load_config, InfluenceMode, RunConfig};
pub use error::{Error, Result};
pub use fairness::FairnessReport;
pub use harness::{
    best_policy_counts, find_closest_scenario, run_setting, run_sweep, Metric, ObservedResult,
    Polarity, RunRecord, SweepOutput, SweepSummary,
};
pub use population::{CommunityShares, Electorate};
pub use preference::{AffinityMatrix, PartyVariances, PreferenceRanking, ValuationMatrix};
pub use scenario::Scenario;
pub use tally::{BallotRules, ElectionOutcome, Policy, SelectionPolicy};
