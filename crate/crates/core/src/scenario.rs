//! One fully generated election scenario: latent community parameters,
//! electorate, valuations and rankings, plus per-policy evaluation.

use crate::config::{InfluenceMode, RunConfig};
use crate::error::Result;
use crate::fairness::{fairness_report, FairnessReport};
use crate::population::{
    assign_communities, assign_districts, sample_community_shares, CommunityShares, Electorate,
};
use crate::preference::{
    apply_local_influence, apply_local_influence_per_elector, rank_from_valuations,
    sample_affinity_matrix, sample_kappa, sample_party_variances, sample_valuations,
    AffinityMatrix, PartyVariances, PreferenceRanking, ValuationMatrix,
};
use crate::rng::{scoped_rng, Stream};
use crate::tally::{
    run_district_election_with_tallies, BallotRules, DistrictTally, ElectionOutcome,
    SelectionPolicy,
};
use serde::Serialize;

/// Latent parameters of one scenario, echoed into manifests.
#[derive(Debug, Clone, Serialize)]
pub struct ScenarioParams {
    pub setting: usize,
    pub run: usize,
    pub shares: Vec<f64>,
    pub affinity: Vec<Vec<i8>>,
    pub sigma: Vec<f64>,
    /// Mixing coefficient; `None` in individual mode. Per-elector draws are
    /// summarized by their mean.
    pub kappa: Option<f64>,
}

/// A generated electorate with its (possibly influence-mixed) valuations
/// and derived rankings. Immutable once built; policies are evaluated
/// against it read-only so comparisons stay paired.
pub struct Scenario {
    pub electorate: Electorate,
    pub shares: CommunityShares,
    pub affinity: AffinityMatrix,
    pub sigma: PartyVariances,
    pub kappa: Option<f64>,
    /// Valuations ballots are cast on (raw, or mixed under local influence).
    pub values: ValuationMatrix,
    pub rankings: PreferenceRanking,
    pub setting: usize,
    pub run: usize,
}

impl Scenario {
    /// Draws one scenario. Community shares and affinity are keyed by the
    /// setting index only, so every run of a setting shares them; variances,
    /// the electorate, valuations and kappa are keyed by the run as well.
    pub fn generate(config: &RunConfig, setting: usize, run: usize) -> Result<Scenario> {
        config.validate()?;
        let (s, r) = (setting as u64, run as u64);
        let master = config.master_seed;

        let shares = match &config.fixed_shares {
            Some(values) => CommunityShares::new(values.clone())?,
            None => sample_community_shares(
                config.n_communities,
                config.sbp_concentration,
                &mut scoped_rng(master, s, 0, Stream::Shares),
            )?,
        };
        let affinity = match &config.fixed_affinity {
            Some(rows) => AffinityMatrix::from_rows(rows.clone())?,
            None => sample_affinity_matrix(
                config.n_communities,
                config.n_parties,
                &shares,
                &mut scoped_rng(master, s, 0, Stream::Affinity),
            )?,
        };
        let sigma = match &config.fixed_sigma {
            Some(values) => PartyVariances::new(values.clone())?,
            None => sample_party_variances(
                config.n_parties,
                config.gamma_shape,
                config.gamma_scale,
                &mut scoped_rng(master, s, r, Stream::Sigma),
            )?,
        };

        let communities = assign_communities(
            &shares,
            config.n_electors,
            &mut scoped_rng(master, s, r, Stream::Communities),
        )?;
        let districts = assign_districts(
            &communities,
            config.n_districts,
            config.clustering,
            &mut scoped_rng(master, s, r, Stream::Districts),
        )?;
        let electorate = Electorate::new(communities, districts, config.n_districts)?;

        let raw = sample_valuations(
            &electorate,
            &affinity,
            &sigma,
            &mut scoped_rng(master, s, r, Stream::Valuations),
        )?;

        let (values, kappa) = match config.influence {
            InfluenceMode::Individual => (raw, None),
            InfluenceMode::Local => {
                let mut kappa_rng = scoped_rng(master, s, r, Stream::Kappa);
                if config.kappa_per_elector {
                    let kappas: Vec<f64> = match config.fixed_kappa {
                        Some(k) => vec![k; electorate.n_electors()],
                        None => (0..electorate.n_electors())
                            .map(|_| sample_kappa(config.beta_a, config.beta_b, &mut kappa_rng))
                            .collect::<Result<_>>()?,
                    };
                    let mixed = apply_local_influence_per_elector(&raw, &electorate, &kappas)?;
                    let mean = kappas.iter().sum::<f64>() / kappas.len() as f64;
                    (mixed, Some(mean))
                } else {
                    let kappa = match config.fixed_kappa {
                        Some(k) => k,
                        None => sample_kappa(config.beta_a, config.beta_b, &mut kappa_rng)?,
                    };
                    (apply_local_influence(&raw, &electorate, kappa)?, Some(kappa))
                }
            }
        };

        let rankings = rank_from_valuations(&values);
        Ok(Scenario {
            electorate,
            shares,
            affinity,
            sigma,
            kappa,
            values,
            rankings,
            setting,
            run,
        })
    }

    pub fn params(&self) -> ScenarioParams {
        ScenarioParams {
            setting: self.setting,
            run: self.run,
            shares: self.shares.as_slice().to_vec(),
            affinity: self.affinity.rows(),
            sigma: self.sigma.as_slice().to_vec(),
            kappa: self.kappa,
        }
    }

    /// Ballot knobs taken from the configuration.
    pub fn ballot_rules(config: &RunConfig) -> BallotRules {
        BallotRules {
            approval_cutoff: config.approval_cutoff,
            approval_fallback_top_one: config.approval_fallback_top_one,
            weighted_approval_weights: config.weighted_approval_weights.clone(),
        }
    }

    /// Runs one policy over the scenario and scores the outcome.
    pub fn evaluate_policy(
        &self,
        policy: crate::tally::Policy,
        rules: &BallotRules,
        depths: &[usize],
    ) -> Result<(ElectionOutcome, FairnessReport)> {
        let (outcome, _) = self.evaluate_policy_with_tallies(policy, rules, depths)?;
        Ok(outcome)
    }

    /// As [`Self::evaluate_policy`], also returning per-district tallies.
    pub fn evaluate_policy_with_tallies(
        &self,
        policy: crate::tally::Policy,
        rules: &BallotRules,
        depths: &[usize],
    ) -> Result<((ElectionOutcome, FairnessReport), Vec<DistrictTally>)> {
        let (outcome, tallies) = run_district_election_with_tallies(
            &self.electorate,
            &self.values,
            &self.rankings,
            policy,
            rules,
            SelectionPolicy::TopOne,
        )?;
        let report = fairness_report(&outcome, &self.rankings, &self.electorate, depths)?;
        Ok(((outcome, report), tallies))
    }

    /// Share of first-choice votes per party; the popular-vote vector used
    /// for closest-scenario matching.
    pub fn vote_shares(&self) -> Vec<f64> {
        let k = self.rankings.n_parties();
        let mut counts = vec![0usize; k];
        for i in 0..self.rankings.n_electors() {
            counts[self.rankings.row(i)[0]] += 1;
        }
        let n = self.rankings.n_electors() as f64;
        counts.into_iter().map(|c| c as f64 / n).collect()
    }

    /// Order-independent digest of the electorate and valuations; used to
    /// verify policies see identical inputs.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut mix = |x: u64| {
            h ^= x;
            h = h.wrapping_mul(0x1000_0000_01b3);
        };
        for i in 0..self.electorate.n_electors() {
            mix(self.electorate.community_of(i) as u64);
            mix(self.electorate.district_of(i) as u64);
        }
        for i in 0..self.values.n_electors() {
            for &v in self.values.row(i) {
                mix(v.to_bits());
            }
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tally::Policy;

    fn small_config() -> RunConfig {
        serde_json::from_value(serde_json::json!({
            "n_electors": 600,
            "n_districts": 6,
            "n_communities": 3,
            "n_parties": 3,
            "master_seed": 77
        }))
        .unwrap()
    }

    #[test]
    fn generation_is_deterministic() {
        let config = small_config();
        let a = Scenario::generate(&config, 2, 1).unwrap();
        let b = Scenario::generate(&config, 2, 1).unwrap();
        assert_eq!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.shares, b.shares);
        assert_eq!(a.sigma, b.sigma);
    }

    #[test]
    fn settings_share_latents_across_runs() {
        let config = small_config();
        let a = Scenario::generate(&config, 3, 0).unwrap();
        let b = Scenario::generate(&config, 3, 1).unwrap();
        assert_eq!(a.shares, b.shares);
        assert_eq!(a.affinity, b.affinity);
        // Run-level quantities differ.
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert_ne!(a.sigma, b.sigma);
    }

    #[test]
    fn different_settings_differ() {
        let config = small_config();
        let a = Scenario::generate(&config, 0, 0).unwrap();
        let b = Scenario::generate(&config, 1, 0).unwrap();
        assert_ne!(a.shares, b.shares);
    }

    #[test]
    fn evaluation_does_not_mutate_scenario() {
        let config = small_config();
        let scenario = Scenario::generate(&config, 0, 0).unwrap();
        let rules = Scenario::ballot_rules(&config);
        let before = scenario.fingerprint();
        for policy in Policy::ALL {
            scenario.evaluate_policy(policy, &rules, &[2]).unwrap();
            assert_eq!(scenario.fingerprint(), before);
        }
    }

    #[test]
    fn vote_shares_sum_to_one() {
        let config = small_config();
        let scenario = Scenario::generate(&config, 0, 0).unwrap();
        let total: f64 = scenario.vote_shares().iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn local_influence_sets_kappa() {
        let mut config = small_config();
        config.influence = InfluenceMode::Local;
        let scenario = Scenario::generate(&config, 0, 0).unwrap();
        let kappa = scenario.kappa.unwrap();
        assert!((0.0..=1.0).contains(&kappa));

        config.fixed_kappa = Some(0.25);
        let fixed = Scenario::generate(&config, 0, 0).unwrap();
        assert_eq!(fixed.kappa, Some(0.25));
    }
}
