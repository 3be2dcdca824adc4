//! District-level ballot aggregation under the four scoring rules, and full
//! multi-district elections under the six electoral policies.

use crate::balloting::{self, Ballot};
use crate::error::{Error, Result};
use crate::population::Electorate;
use crate::preference::{PreferenceRanking, ValuationMatrix};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;

/// How winners are picked from a district's score table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionPolicy {
    /// The single highest-scoring candidate.
    TopOne,
    /// The `m` highest-scoring candidates.
    TopM(usize),
    /// Every candidate reaching the vote threshold; may elect nobody.
    MinVotes(usize),
}

impl SelectionPolicy {
    fn validate(self, n_parties: usize) -> Result<()> {
        match self {
            SelectionPolicy::TopOne => Ok(()),
            SelectionPolicy::TopM(m) if m >= 1 && m <= n_parties => Ok(()),
            SelectionPolicy::TopM(m) => Err(Error::InvalidParameter(format!(
                "top-m selection requires 1 <= m <= {n_parties} (got {m})"
            ))),
            SelectionPolicy::MinVotes(_) => Ok(()),
        }
    }
}

/// Scores and elected candidates for one district.
#[derive(Debug, Clone, PartialEq)]
pub struct DistrictTally {
    /// Per-party score under the district's scoring rule.
    pub scores: Vec<f64>,
    /// Elected parties, strongest first.
    pub elected: Vec<usize>,
}

/// Per-district winners `w(s)` and per-party seat counts `V(k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElectionOutcome {
    winners: Vec<Vec<usize>>,
    seats: Vec<usize>,
}

impl ElectionOutcome {
    pub fn from_winners(winners: Vec<Vec<usize>>, n_parties: usize) -> Self {
        let mut seats = vec![0usize; n_parties];
        for district in &winners {
            for &w in district {
                seats[w] += 1;
            }
        }
        ElectionOutcome { winners, seats }
    }

    pub fn n_districts(&self) -> usize {
        self.winners.len()
    }

    pub fn n_parties(&self) -> usize {
        self.seats.len()
    }

    /// Elected parties of one district.
    pub fn winners(&self, district: usize) -> &[usize] {
        &self.winners[district]
    }

    /// Seats won per party.
    pub fn seats(&self) -> &[usize] {
        &self.seats
    }

    /// `elected[k]` is true when party `k` won at least one district.
    pub fn elected_anywhere(&self) -> Vec<bool> {
        self.seats.iter().map(|&v| v > 0).collect()
    }
}

/// Party order by score descending, index ascending on exact ties.
fn ranked_by_score(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_unstable_by(|&a, &b| scores[b].total_cmp(&scores[a]).then_with(|| a.cmp(&b)));
    order
}

fn select(scores: &[f64], policy: SelectionPolicy) -> Result<Vec<usize>> {
    policy.validate(scores.len())?;
    let order = ranked_by_score(scores);
    Ok(match policy {
        SelectionPolicy::TopOne => vec![order[0]],
        SelectionPolicy::TopM(m) => order[..m].to_vec(),
        SelectionPolicy::MinVotes(threshold) => order
            .into_iter()
            .filter(|&k| scores[k] >= threshold as f64)
            .collect(),
    })
}

fn ensure_non_empty(ballots: &[Ballot]) -> Result<()> {
    if ballots.is_empty() {
        Err(Error::EmptyDistrict)
    } else {
        Ok(())
    }
}

/// Counts one vote per approved party. Accepts k-approval and approval
/// ballots.
pub fn plurality(
    ballots: &[Ballot],
    n_parties: usize,
    policy: SelectionPolicy,
) -> Result<DistrictTally> {
    ensure_non_empty(ballots)?;
    let mut scores = vec![0.0; n_parties];
    for ballot in ballots {
        match ballot {
            Ballot::KApproval(set) | Ballot::Approval(set) => {
                for &k in set {
                    scores[k] += 1.0;
                }
            }
            _ => {
                return Err(Error::InvalidParameter(
                    "plurality requires k-approval or approval ballots".into(),
                ))
            }
        }
    }
    let elected = select(&scores, policy)?;
    Ok(DistrictTally { scores, elected })
}

/// Sums the weight attached to each choice of a weighted k-approval ballot.
pub fn weighted_plurality(
    ballots: &[Ballot],
    n_parties: usize,
    policy: SelectionPolicy,
) -> Result<DistrictTally> {
    ensure_non_empty(ballots)?;
    let mut scores = vec![0.0; n_parties];
    for ballot in ballots {
        match ballot {
            Ballot::WeightedKApproval(pairs) => {
                for &(k, w) in pairs {
                    scores[k] += w;
                }
            }
            _ => {
                return Err(Error::InvalidParameter(
                    "weighted plurality requires weighted k-approval ballots".into(),
                ))
            }
        }
    }
    let elected = select(&scores, policy)?;
    Ok(DistrictTally { scores, elected })
}

/// +1 per positive vote or approval, -1 per negative vote.
pub fn net_plurality(
    ballots: &[Ballot],
    n_parties: usize,
    policy: SelectionPolicy,
) -> Result<DistrictTally> {
    ensure_non_empty(ballots)?;
    let mut scores = vec![0.0; n_parties];
    for ballot in ballots {
        match ballot {
            Ballot::NegativeVote { positive, negative } => {
                scores[*positive] += 1.0;
                scores[*negative] -= 1.0;
            }
            Ballot::Approval(set) => {
                for &k in set {
                    scores[k] += 1.0;
                }
            }
            _ => {
                return Err(Error::InvalidParameter(
                    "net plurality requires negative-vote or approval ballots".into(),
                ))
            }
        }
    }
    let elected = select(&scores, policy)?;
    Ok(DistrictTally { scores, elected })
}

/// Iterative lowest-candidate elimination with transfer to the marked
/// second choice.
///
/// A ballot counts for its first choice while that party stands, then for
/// its second choice, then exhausts. Under `TopOne` the count stops once a
/// standing candidate holds a strict majority of live ballots (or one
/// candidate remains); under `TopM(m)` once `m` candidates stand; under
/// `MinVotes` once every standing candidate meets the threshold or one
/// remains. Elimination ties remove the highest party index first.
///
/// Reported scores are each party's live count in its final round (the
/// round it was eliminated, or the last round for standing parties).
pub fn plurality_with_transfer(
    ballots: &[Ballot],
    n_parties: usize,
    policy: SelectionPolicy,
) -> Result<DistrictTally> {
    ensure_non_empty(ballots)?;
    policy.validate(n_parties)?;
    let mut choices = Vec::with_capacity(ballots.len());
    for ballot in ballots {
        match ballot {
            Ballot::TransferableVote { first, second } => choices.push((*first, *second)),
            _ => {
                return Err(Error::InvalidParameter(
                    "plurality with transfer requires transferable-vote ballots".into(),
                ))
            }
        }
    }

    let mut standing = vec![true; n_parties];
    let mut n_standing = n_parties;
    let mut scores = vec![0.0; n_parties];
    loop {
        let mut counts = vec![0usize; n_parties];
        let mut live = 0usize;
        for &(first, second) in &choices {
            let target = if standing[first] {
                Some(first)
            } else if standing[second] {
                Some(second)
            } else {
                None
            };
            if let Some(k) = target {
                counts[k] += 1;
                live += 1;
            }
        }
        for k in 0..n_parties {
            if standing[k] {
                scores[k] = counts[k] as f64;
            }
        }

        let done = match policy {
            SelectionPolicy::TopOne => {
                let leader = (0..n_parties)
                    .filter(|&k| standing[k])
                    .max_by(|&a, &b| counts[a].cmp(&counts[b]).then_with(|| b.cmp(&a)))
                    .expect("at least one standing candidate");
                n_standing == 1 || counts[leader] * 2 > live
            }
            SelectionPolicy::TopM(m) => n_standing <= m,
            SelectionPolicy::MinVotes(threshold) => {
                n_standing == 1
                    || (0..n_parties)
                        .filter(|&k| standing[k])
                        .all(|k| counts[k] >= threshold)
            }
        };
        if done {
            let standing_scores: Vec<f64> = scores
                .iter()
                .enumerate()
                .map(|(k, &s)| if standing[k] { s } else { f64::NEG_INFINITY })
                .collect();
            let elected = match policy {
                SelectionPolicy::TopOne => vec![ranked_by_score(&standing_scores)[0]],
                SelectionPolicy::TopM(m) => ranked_by_score(&standing_scores)
                    .into_iter()
                    .filter(|&k| standing[k])
                    .take(m)
                    .collect(),
                SelectionPolicy::MinVotes(threshold) => ranked_by_score(&standing_scores)
                    .into_iter()
                    .filter(|&k| standing[k] && scores[k] >= threshold as f64)
                    .collect(),
            };
            return Ok(DistrictTally { scores, elected });
        }

        // Eliminate the lowest count; ties remove the highest index.
        let loser = (0..n_parties)
            .filter(|&k| standing[k])
            .min_by(|&a, &b| counts[a].cmp(&counts[b]).then_with(|| b.cmp(&a)))
            .expect("at least one standing candidate");
        standing[loser] = false;
        n_standing -= 1;
    }
}

/// A paired (voting rule, scoring rule) combination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Policy {
    #[serde(rename = "1-approval")]
    OneApproval,
    #[serde(rename = "2-approval")]
    TwoApproval,
    #[serde(rename = "weighted-2-approval")]
    WeightedTwoApproval,
    #[serde(rename = "approval")]
    Approval,
    #[serde(rename = "negative-vote")]
    NegativeVote,
    #[serde(rename = "transferable-vote")]
    TransferableVote,
}

impl Policy {
    pub const ALL: [Policy; 6] = [
        Policy::OneApproval,
        Policy::TwoApproval,
        Policy::WeightedTwoApproval,
        Policy::Approval,
        Policy::NegativeVote,
        Policy::TransferableVote,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Policy::OneApproval => "1-approval",
            Policy::TwoApproval => "2-approval",
            Policy::WeightedTwoApproval => "weighted-2-approval",
            Policy::Approval => "approval",
            Policy::NegativeVote => "negative-vote",
            Policy::TransferableVote => "transferable-vote",
        }
    }

    /// Smallest party count the policy's ballot needs.
    pub fn min_parties(self) -> usize {
        match self {
            Policy::OneApproval | Policy::Approval => 1,
            Policy::TwoApproval
            | Policy::WeightedTwoApproval
            | Policy::NegativeVote
            | Policy::TransferableVote => 2,
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Knobs that shape individual ballots under the policies.
#[derive(Debug, Clone, PartialEq)]
pub struct BallotRules {
    /// Approval threshold on valuations.
    pub approval_cutoff: f64,
    /// When set, an elector whose approval ballot would be empty approves
    /// their top-ranked party instead of abstaining.
    pub approval_fallback_top_one: bool,
    /// Position weights for the weighted 2-approval policy.
    pub weighted_approval_weights: Vec<f64>,
}

impl Default for BallotRules {
    fn default() -> Self {
        BallotRules {
            approval_cutoff: 0.0,
            approval_fallback_top_one: false,
            weighted_approval_weights: vec![1.0, 0.5],
        }
    }
}

fn district_ballots(
    members: &[usize],
    values: &ValuationMatrix,
    rankings: &PreferenceRanking,
    policy: Policy,
    rules: &BallotRules,
) -> Result<Vec<Ballot>> {
    let mut ballots = Vec::with_capacity(members.len());
    for &i in members {
        let row = rankings.row(i);
        let ballot = match policy {
            Policy::OneApproval => balloting::cast_k_approval(row, 1)?,
            Policy::TwoApproval => balloting::cast_k_approval(row, 2)?,
            Policy::WeightedTwoApproval => {
                balloting::cast_weighted_k_approval(row, &rules.weighted_approval_weights)?
            }
            Policy::Approval => {
                let ballot = balloting::cast_approval(values.row(i), rules.approval_cutoff);
                match &ballot {
                    Ballot::Approval(set) if set.is_empty() && rules.approval_fallback_top_one => {
                        Ballot::Approval(vec![row[0]])
                    }
                    _ => ballot,
                }
            }
            Policy::NegativeVote => balloting::cast_negative_vote(row)?,
            Policy::TransferableVote => balloting::cast_transferable_vote(row)?,
        };
        ballots.push(ballot);
    }
    Ok(ballots)
}

fn tally_district(ballots: &[Ballot], n_parties: usize, policy: Policy, selection: SelectionPolicy) -> Result<DistrictTally> {
    match policy {
        Policy::OneApproval | Policy::TwoApproval => plurality(ballots, n_parties, selection),
        Policy::WeightedTwoApproval => weighted_plurality(ballots, n_parties, selection),
        Policy::Approval => plurality(ballots, n_parties, selection),
        Policy::NegativeVote => net_plurality(ballots, n_parties, selection),
        Policy::TransferableVote => plurality_with_transfer(ballots, n_parties, selection),
    }
}

/// Runs one policy over every district and returns the outcome together
/// with the per-district score tables.
pub fn run_district_election_with_tallies(
    electorate: &Electorate,
    values: &ValuationMatrix,
    rankings: &PreferenceRanking,
    policy: Policy,
    rules: &BallotRules,
    selection: SelectionPolicy,
) -> Result<(ElectionOutcome, Vec<DistrictTally>)> {
    let n_parties = values.n_parties();
    if values.n_electors() != electorate.n_electors()
        || rankings.n_electors() != electorate.n_electors()
        || rankings.n_parties() != n_parties
    {
        return Err(Error::InvalidParameter(
            "electorate, valuations and rankings must agree in shape".into(),
        ));
    }
    if n_parties < policy.min_parties() {
        return Err(Error::InvalidParameter(format!(
            "policy {policy} requires at least {} parties",
            policy.min_parties()
        )));
    }
    let tallies = (0..electorate.n_districts())
        .into_par_iter()
        .map(|s| {
            let ballots =
                district_ballots(electorate.district_members(s), values, rankings, policy, rules)?;
            tally_district(&ballots, n_parties, policy, selection)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut empty_districts = 0usize;
    let winners: Vec<Vec<usize>> = tallies
        .iter()
        .map(|t| {
            if t.elected.is_empty() {
                empty_districts += 1;
            }
            t.elected.clone()
        })
        .collect();
    if empty_districts > 0 {
        log::warn!(
            "{empty_districts} district(s) elected no candidate under {policy}; \
             they are excluded from seat totals"
        );
    }
    Ok((ElectionOutcome::from_winners(winners, n_parties), tallies))
}

/// Runs one policy over every district of the electorate.
pub fn run_district_election(
    electorate: &Electorate,
    values: &ValuationMatrix,
    rankings: &PreferenceRanking,
    policy: Policy,
    rules: &BallotRules,
    selection: SelectionPolicy,
) -> Result<ElectionOutcome> {
    run_district_election_with_tallies(electorate, values, rankings, policy, rules, selection)
        .map(|(outcome, _)| outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn approvals(sets: &[&[usize]]) -> Vec<Ballot> {
        sets.iter().map(|s| Ballot::KApproval(s.to_vec())).collect()
    }

    #[test]
    fn plurality_first_table_district() {
        // Three ballots for party 0, two for party 1.
        let ballots = approvals(&[&[0], &[0], &[0], &[1], &[1]]);
        let tally = plurality(&ballots, 2, SelectionPolicy::TopOne).unwrap();
        assert_eq!(tally.scores, vec![3.0, 2.0]);
        assert_eq!(tally.elected, vec![0]);
    }

    #[test]
    fn plurality_second_table_first_choices() {
        // First choices A x3, B x2, C x1.
        let ballots = approvals(&[&[0], &[0], &[0], &[1], &[1], &[2]]);
        let tally = plurality(&ballots, 3, SelectionPolicy::TopOne).unwrap();
        assert_eq!(tally.elected, vec![0]);
    }

    #[test]
    fn plurality_tie_breaks_by_index() {
        let ballots = approvals(&[&[0], &[0], &[1], &[1], &[2]]);
        let tally = plurality(&ballots, 3, SelectionPolicy::TopOne).unwrap();
        assert_eq!(tally.scores, vec![2.0, 2.0, 1.0]);
        assert_eq!(tally.elected, vec![0]);
    }

    #[test]
    fn plurality_rejects_empty_district() {
        assert!(matches!(
            plurality(&[], 2, SelectionPolicy::TopOne),
            Err(Error::EmptyDistrict)
        ));
    }

    #[test]
    fn weighted_plurality_hand_arithmetic() {
        let ballots = vec![
            Ballot::WeightedKApproval(vec![(0, 1.0), (1, 0.5)]),
            Ballot::WeightedKApproval(vec![(0, 1.0), (1, 0.5)]),
            Ballot::WeightedKApproval(vec![(1, 1.0), (0, 0.5)]),
        ];
        let tally = weighted_plurality(&ballots, 2, SelectionPolicy::TopOne).unwrap();
        assert_eq!(tally.scores, vec![2.5, 2.0]);
        assert_eq!(tally.elected, vec![0]);
    }

    #[test]
    fn weighted_plurality_unit_weights_match_plurality() {
        let weighted = vec![
            Ballot::WeightedKApproval(vec![(1, 1.0), (2, 1.0)]),
            Ballot::WeightedKApproval(vec![(0, 1.0), (1, 1.0)]),
            Ballot::WeightedKApproval(vec![(1, 1.0), (0, 1.0)]),
        ];
        let plain = approvals(&[&[1, 2], &[0, 1], &[1, 0]]);
        let a = weighted_plurality(&weighted, 3, SelectionPolicy::TopOne).unwrap();
        let b = plurality(&plain, 3, SelectionPolicy::TopOne).unwrap();
        assert_eq!(a.scores, b.scores);
        assert_eq!(a.elected, b.elected);
    }

    #[test]
    fn weighted_plurality_single_ballot() {
        let ballots = vec![Ballot::WeightedKApproval(vec![(2, 1.0)])];
        let tally = weighted_plurality(&ballots, 3, SelectionPolicy::TopOne).unwrap();
        assert_eq!(tally.elected, vec![2]);
    }

    #[test]
    fn net_plurality_hand_arithmetic() {
        let mut ballots = vec![
            Ballot::NegativeVote {
                positive: 0,
                negative: 2
            };
            3
        ];
        ballots.extend(vec![
            Ballot::NegativeVote {
                positive: 1,
                negative: 0
            };
            2
        ]);
        let tally = net_plurality(&ballots, 3, SelectionPolicy::TopOne).unwrap();
        assert_eq!(tally.scores, vec![1.0, 2.0, -3.0]);
        assert_eq!(tally.elected, vec![1]);
    }

    #[test]
    fn net_plurality_single_ballot() {
        let ballots = vec![Ballot::NegativeVote {
            positive: 0,
            negative: 1,
        }];
        let tally = net_plurality(&ballots, 2, SelectionPolicy::TopOne).unwrap();
        assert_eq!(tally.scores, vec![1.0, -1.0]);
        assert_eq!(tally.elected, vec![0]);
    }

    #[test]
    fn net_plurality_symmetric_tie() {
        let ballots = vec![
            Ballot::NegativeVote {
                positive: 0,
                negative: 1,
            },
            Ballot::NegativeVote {
                positive: 1,
                negative: 0,
            },
        ];
        let tally = net_plurality(&ballots, 2, SelectionPolicy::TopOne).unwrap();
        assert_eq!(tally.scores, vec![0.0, 0.0]);
        assert_eq!(tally.elected, vec![0]);
    }

    fn transferable(first: usize, second: usize, n: usize) -> Vec<Ballot> {
        vec![Ballot::TransferableVote { first, second }; n]
    }

    #[test]
    fn transfer_elimination_run() {
        // A x4 (-> B), B x3 (-> C), C x2 (-> B): C eliminated, B reaches 5.
        let mut ballots = transferable(0, 1, 4);
        ballots.extend(transferable(1, 2, 3));
        ballots.extend(transferable(2, 1, 2));
        let tally = plurality_with_transfer(&ballots, 3, SelectionPolicy::TopOne).unwrap();
        assert_eq!(tally.elected, vec![1]);
        assert_eq!(tally.scores[1], 5.0);
        assert_eq!(tally.scores[0], 4.0);
        // C's score is its count in the elimination round.
        assert_eq!(tally.scores[2], 2.0);
    }

    #[test]
    fn transfer_immediate_majority() {
        let ballots = transferable(0, 1, 5);
        let tally = plurality_with_transfer(&ballots, 2, SelectionPolicy::TopOne).unwrap();
        assert_eq!(tally.elected, vec![0]);
        assert_eq!(tally.scores, vec![5.0, 0.0]);
    }

    #[test]
    fn transfer_second_choice_still_standing() {
        // A x2 (-> C), B x2 (-> C), C x1 (-> A): C eliminated, A reaches 3.
        let mut ballots = transferable(0, 2, 2);
        ballots.extend(transferable(1, 2, 2));
        ballots.extend(transferable(2, 0, 1));
        let tally = plurality_with_transfer(&ballots, 3, SelectionPolicy::TopOne).unwrap();
        assert_eq!(tally.elected, vec![0]);
        assert_eq!(tally.scores[0], 3.0);
        assert_eq!(tally.scores[1], 2.0);
    }

    #[test]
    fn transfer_majority_short_circuits() {
        // > 50% of first choices wins with zero eliminations.
        let mut ballots = transferable(2, 0, 6);
        ballots.extend(transferable(0, 1, 3));
        ballots.extend(transferable(1, 0, 2));
        let tally = plurality_with_transfer(&ballots, 3, SelectionPolicy::TopOne).unwrap();
        assert_eq!(tally.elected, vec![2]);
        assert_eq!(tally.scores, vec![3.0, 2.0, 6.0]);
    }

    #[test]
    fn transfer_exhausted_ballots_drop_out() {
        // Both preferences of the C ballots get eliminated.
        let mut ballots = transferable(0, 1, 3);
        ballots.extend(transferable(1, 0, 3));
        ballots.extend(transferable(2, 3, 1));
        ballots.extend(transferable(3, 2, 1));
        let tally = plurality_with_transfer(&ballots, 4, SelectionPolicy::TopOne).unwrap();
        // 3 and 2 eliminated (lowest, highest index first), their ballots
        // exhaust; 0 vs 1 tie on 3 live ballots each -> eliminate 1.
        assert_eq!(tally.elected, vec![0]);
    }

    #[test]
    fn selection_policies() {
        let scores = vec![5.0, 5.0, 2.0, 7.0];
        assert_eq!(select(&scores, SelectionPolicy::TopOne).unwrap(), vec![3]);
        assert_eq!(
            select(&scores, SelectionPolicy::TopM(3)).unwrap(),
            vec![3, 0, 1]
        );
        assert_eq!(
            select(&scores, SelectionPolicy::MinVotes(5)).unwrap(),
            vec![3, 0, 1]
        );
        assert_eq!(
            select(&scores, SelectionPolicy::MinVotes(8)).unwrap(),
            Vec::<usize>::new()
        );
        assert!(select(&scores, SelectionPolicy::TopM(0)).is_err());
    }

    #[test]
    fn outcome_counts_seats() {
        let outcome = ElectionOutcome::from_winners(vec![vec![0], vec![1], vec![0]], 3);
        assert_eq!(outcome.seats(), &[2, 1, 0]);
        assert_eq!(outcome.elected_anywhere(), vec![true, true, false]);
    }

    proptest! {
        // Permuting a ballot collection never changes the tally.
        #[test]
        fn tallies_are_anonymous(seed in 0u64..500) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n_parties = 4usize;
            let mut ballots: Vec<Ballot> = (0..40)
                .map(|i| Ballot::NegativeVote {
                    positive: i % n_parties,
                    negative: (i + 1 + i % 3) % n_parties,
                })
                .filter(|b| match b {
                    Ballot::NegativeVote { positive, negative } => positive != negative,
                    _ => true,
                })
                .collect();
            let before = net_plurality(&ballots, n_parties, SelectionPolicy::TopOne).unwrap();
            ballots.shuffle(&mut rng);
            let after = net_plurality(&ballots, n_parties, SelectionPolicy::TopOne).unwrap();
            prop_assert_eq!(before, after);
        }
    }
}
