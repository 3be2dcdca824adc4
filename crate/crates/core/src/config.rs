//! Run configuration: JSON schema, defaults, and validation. Unknown keys
//! are hard errors so a typo in a hyperparameter name cannot silently
//! invalidate an experiment.

use crate::error::{Error, Result};
use crate::tally::Policy;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};

/// Whether electors vote on their own valuations or on district-mixed ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfluenceMode {
    Individual,
    Local,
}

fn default_schema() -> u32 {
    1
}
fn default_n_settings() -> usize {
    1
}
fn default_runs_per_setting() -> usize {
    1
}
fn default_policies() -> Vec<Policy> {
    Policy::ALL.to_vec()
}
fn default_influence() -> InfluenceMode {
    InfluenceMode::Individual
}
fn default_depth() -> usize {
    2
}
fn default_clustering() -> f64 {
    0.9
}
fn default_sbp_concentration() -> f64 {
    5.0
}
fn default_gamma_shape() -> f64 {
    2.0
}
fn default_gamma_scale() -> f64 {
    1.0
}
fn default_beta_a() -> f64 {
    2.0
}
fn default_beta_b() -> f64 {
    2.0
}
fn default_weighted_weights() -> Vec<f64> {
    vec![1.0, 0.5]
}
fn default_pool_size() -> usize {
    1000
}
fn default_match_vote_weight() -> f64 {
    0.5
}
fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Complete resolved configuration for one invocation. Serialized verbatim
/// into the output manifest, so every applied default is recorded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_schema")]
    pub schema: u32,

    pub n_electors: usize,
    pub n_districts: usize,
    pub n_communities: usize,
    pub n_parties: usize,
    pub master_seed: u64,

    #[serde(default = "default_n_settings")]
    pub n_settings: usize,
    #[serde(default = "default_runs_per_setting")]
    pub runs_per_setting: usize,
    #[serde(default = "default_policies")]
    pub policies: Vec<Policy>,
    #[serde(default = "default_influence")]
    pub influence: InfluenceMode,
    #[serde(default = "default_depth")]
    pub dissatisfaction_depth: usize,

    /// CRP attraction strength in [0, 1].
    #[serde(default = "default_clustering")]
    pub clustering: f64,
    /// Stick-breaking concentration for community shares.
    #[serde(default = "default_sbp_concentration")]
    pub sbp_concentration: f64,
    #[serde(default = "default_gamma_shape")]
    pub gamma_shape: f64,
    #[serde(default = "default_gamma_scale")]
    pub gamma_scale: f64,
    /// Beta parameters for the local-influence mixing coefficient.
    #[serde(default = "default_beta_a")]
    pub beta_a: f64,
    #[serde(default = "default_beta_b")]
    pub beta_b: f64,
    #[serde(default)]
    pub approval_cutoff: f64,
    /// When true, an elector whose approval ballot would be empty approves
    /// their top choice instead of abstaining.
    #[serde(default)]
    pub approval_fallback_top_one: bool,
    /// When true, kappa is drawn independently per elector instead of once
    /// per scenario.
    #[serde(default)]
    pub kappa_per_elector: bool,
    #[serde(default = "default_weighted_weights")]
    pub weighted_approval_weights: Vec<f64>,

    /// Fixed-value overrides; each bypasses its sampling step entirely.
    #[serde(default)]
    pub fixed_shares: Option<Vec<f64>>,
    #[serde(default)]
    pub fixed_affinity: Option<Vec<Vec<i8>>>,
    #[serde(default)]
    pub fixed_sigma: Option<Vec<f64>>,
    #[serde(default)]
    pub fixed_kappa: Option<f64>,

    /// Pool size for closest-scenario matching.
    #[serde(default = "default_pool_size")]
    pub pool_size: usize,
    /// Weight of the vote-share distance in the matching metric; the seat
    /// distance gets the complement.
    #[serde(default = "default_match_vote_weight")]
    pub match_vote_weight: f64,

    /// Worker threads; 0 means all available cores.
    #[serde(default)]
    pub workers: usize,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,

    #[serde(default)]
    pub dump_electorate: bool,
    #[serde(default)]
    pub dump_valuations: bool,
    #[serde(default)]
    pub dump_district_scores: bool,
    #[serde(default)]
    pub dump_ballots: bool,
}

impl RunConfig {
    /// Validation shared by every entry point; each failure names the
    /// offending key.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.schema != 1 {
            return fail(format!("schema: unsupported version {} (expected 1)", self.schema));
        }
        if self.n_electors == 0 {
            return fail("n_electors must be at least 1".into());
        }
        if self.n_districts == 0 {
            return fail("n_districts must be at least 1".into());
        }
        if self.n_communities == 0 {
            return fail("n_communities must be at least 1".into());
        }
        if self.n_parties == 0 {
            return fail("n_parties must be at least 1".into());
        }
        if self.n_electors % self.n_districts != 0 {
            return fail("n_districts must divide n_electors".into());
        }
        if self.n_settings == 0 {
            return fail("n_settings must be at least 1".into());
        }
        if self.runs_per_setting == 0 {
            return fail("runs_per_setting must be at least 1".into());
        }
        if self.policies.is_empty() {
            return fail("policies must be non-empty".into());
        }
        for &policy in &self.policies {
            if self.n_parties < policy.min_parties() {
                return fail(format!(
                    "policies: {policy} requires n_parties >= {}",
                    policy.min_parties()
                ));
            }
        }
        if self.dissatisfaction_depth == 0 {
            return fail("dissatisfaction_depth must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.clustering) {
            return fail("clustering must lie in [0, 1]".into());
        }
        for (key, value) in [
            ("sbp_concentration", self.sbp_concentration),
            ("gamma_shape", self.gamma_shape),
            ("gamma_scale", self.gamma_scale),
            ("beta_a", self.beta_a),
            ("beta_b", self.beta_b),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return fail(format!("{key} must be positive"));
            }
        }
        if !self.approval_cutoff.is_finite() {
            return fail("approval_cutoff must be finite".into());
        }
        if self.weighted_approval_weights.is_empty() {
            return fail("weighted_approval_weights must be non-empty".into());
        }
        if self.weighted_approval_weights.len() > self.n_parties {
            return fail("weighted_approval_weights length must not exceed n_parties".into());
        }
        if self.weighted_approval_weights.iter().any(|w| !w.is_finite()) {
            return fail("weighted_approval_weights entries must be finite".into());
        }
        if let Some(shares) = &self.fixed_shares {
            if shares.len() != self.n_communities {
                return fail("fixed_shares length must equal n_communities".into());
            }
            if shares.iter().any(|&s| !(s >= 0.0) || !s.is_finite()) {
                return fail("fixed_shares entries must be non-negative".into());
            }
            let total: f64 = shares.iter().sum();
            if (total - 1.0).abs() > 1e-9 {
                return fail(format!("fixed_shares must sum to 1 (got {total})"));
            }
        }
        if let Some(affinity) = &self.fixed_affinity {
            if affinity.len() != self.n_communities
                || affinity.iter().any(|row| row.len() != self.n_parties)
            {
                return fail(
                    "fixed_affinity must be an n_communities x n_parties matrix".into(),
                );
            }
            if affinity.iter().flatten().any(|v| !(-1..=1).contains(v)) {
                return fail("fixed_affinity entries must be -1, 0 or +1".into());
            }
        }
        if let Some(sigma) = &self.fixed_sigma {
            if sigma.len() != self.n_parties {
                return fail("fixed_sigma length must equal n_parties".into());
            }
            if sigma.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
                return fail("fixed_sigma entries must be positive".into());
            }
        }
        if let Some(kappa) = self.fixed_kappa {
            if !(0.0..=1.0).contains(&kappa) {
                return fail("fixed_kappa must lie in [0, 1]".into());
            }
        }
        if self.pool_size == 0 {
            return fail("pool_size must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.match_vote_weight) {
            return fail("match_vote_weight must lie in [0, 1]".into());
        }
        Ok(())
    }

    /// Dissatisfaction depths evaluated for reports.
    pub fn depths(&self) -> Vec<usize> {
        vec![self.dissatisfaction_depth]
    }
}

/// Loads, parses and validates a configuration file.
pub fn load_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let config: RunConfig = serde_json::from_str(&text).map_err(|e| Error::Json {
        path: path.display().to_string(),
        source: e,
    })?;
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_json() -> serde_json::Value {
        serde_json::json!({
            "n_electors": 1000,
            "n_districts": 10,
            "n_communities": 3,
            "n_parties": 3,
            "master_seed": 1
        })
    }

    fn write_and_load(value: &serde_json::Value) -> Result<RunConfig> {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.json");
        fs::write(&path, serde_json::to_vec_pretty(value).unwrap()).unwrap();
        load_config(&path)
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let config = write_and_load(&minimal_json()).unwrap();
        assert_eq!(config.policies, Policy::ALL.to_vec());
        assert_eq!(config.dissatisfaction_depth, 2);
        assert_eq!(config.clustering, 0.9);
        assert_eq!(config.influence, InfluenceMode::Individual);
        assert_eq!(config.n_settings, 1);
        assert_eq!(config.weighted_approval_weights, vec![1.0, 0.5]);
    }

    #[test]
    fn indivisible_districts_named_in_error() {
        let mut v = minimal_json();
        v["n_districts"] = serde_json::json!(7);
        let err = write_and_load(&v).unwrap_err();
        assert!(err
            .to_string()
            .contains("n_districts must divide n_electors"));
    }

    #[test]
    fn unknown_key_is_rejected() {
        let mut v = minimal_json();
        v["n_elector"] = serde_json::json!(5);
        let err = write_and_load(&v).unwrap_err();
        assert!(err.to_string().contains("n_elector"), "{err}");
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_config("/nonexistent/config.json").unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }

    #[test]
    fn fixed_overrides_roundtrip_through_json() {
        let mut v = minimal_json();
        v["fixed_shares"] = serde_json::json!([0.5, 0.3, 0.2]);
        v["fixed_affinity"] = serde_json::json!([[1, 0, -1], [0, 0, 0], [-1, 0, 1]]);
        v["fixed_sigma"] = serde_json::json!([2.0, 1.0, 2.0]);
        let config = write_and_load(&v).unwrap();
        let serialized = serde_json::to_string_pretty(&config).unwrap();
        let reparsed: RunConfig = serde_json::from_str(&serialized).unwrap();
        assert_eq!(config, reparsed);
        assert_eq!(reparsed.fixed_shares.unwrap(), vec![0.5, 0.3, 0.2]);
        assert_eq!(
            reparsed.fixed_affinity.unwrap(),
            vec![vec![1, 0, -1], vec![0, 0, 0], vec![-1, 0, 1]]
        );
        assert_eq!(reparsed.fixed_sigma.unwrap(), vec![2.0, 1.0, 2.0]);
    }

    #[test]
    fn policy_needs_enough_parties() {
        let mut v = minimal_json();
        v["n_parties"] = serde_json::json!(1);
        v["n_communities"] = serde_json::json!(1);
        let err = write_and_load(&v).unwrap_err();
        assert!(err.to_string().contains("requires n_parties"), "{err}");
    }

    #[test]
    fn weights_cannot_exceed_party_count() {
        let mut v = minimal_json();
        v["weighted_approval_weights"] = serde_json::json!([1.0, 0.5, 0.25, 0.1]);
        let err = write_and_load(&v).unwrap_err();
        assert!(
            err.to_string()
                .contains("weighted_approval_weights length"),
            "{err}"
        );
    }

    #[test]
    fn bad_fixed_shares_rejected() {
        let mut v = minimal_json();
        v["fixed_shares"] = serde_json::json!([0.5, 0.5]);
        let err = write_and_load(&v).unwrap_err();
        assert!(err.to_string().contains("fixed_shares length"), "{err}");

        let mut v = minimal_json();
        v["fixed_shares"] = serde_json::json!([0.5, 0.4, 0.2]);
        let err = write_and_load(&v).unwrap_err();
        assert!(err.to_string().contains("fixed_shares must sum"), "{err}");
    }

    #[test]
    fn policy_strings_parse() {
        let mut v = minimal_json();
        v["policies"] = serde_json::json!(["1-approval", "transferable-vote"]);
        let config = write_and_load(&v).unwrap();
        assert_eq!(
            config.policies,
            vec![Policy::OneApproval, Policy::TransferableVote]
        );
    }
}
