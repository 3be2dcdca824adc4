//! Elector classification and the seven satisfaction measures computed
//! over an election outcome.

use crate::error::{Error, Result};
use crate::population::Electorate;
use crate::preference::PreferenceRanking;
use crate::tally::ElectionOutcome;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Whether an elector's top-choice party won their district, some other
/// district, or nowhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatusKind {
    Represented,
    IndirectlyRepresented,
    Unrepresented,
}

/// Classification of one elector, with the dissatisfaction flag at the
/// requested depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElectorStatus {
    pub kind: StatusKind,
    /// No winner of the elector's own district sits within their top-`d`
    /// preferences. For any depth >= 1 this implies the elector is not
    /// represented in their district.
    pub dissatisfied: bool,
}

/// Per-elector Borda satisfaction with the district's elected candidates.
#[derive(Debug, Clone, PartialEq)]
pub struct BordaScores {
    /// Score per elector; electors in districts with no winner carry 0 and
    /// are excluded from the mean.
    pub per_elector: Vec<f64>,
    pub total: f64,
    pub mean: f64,
    /// Electors excluded because their district elected no candidate.
    pub excluded: usize,
}

/// All seven measures plus per-party breakdowns for one election outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FairnessReport {
    pub n_electors: usize,
    pub n_parties: usize,
    /// Net represented electors.
    pub nr: usize,
    /// Net unrepresented electors.
    pub nur: usize,
    pub indirect: usize,
    /// Net d-dissatisfied electors per configured depth: electors whose
    /// district winners all sit outside their top-d preferences.
    pub nd: BTreeMap<usize, usize>,
    pub nbc_total: f64,
    pub nbc_mean: f64,
    /// Represented supporters per party (supporter = top choice).
    pub r_by_party: Vec<usize>,
    /// Indirectly represented supporters per party.
    pub ir_by_party: Vec<usize>,
    /// Mean Borda score of each party's supporters (0 when none).
    pub bc_by_party: Vec<f64>,
    /// Variance of indirect representation, in percent of the electorate.
    pub pirp: f64,
    /// Variance of representation, in percent of the electorate.
    pub prp: f64,
    /// Variance of the per-party mean Borda scores.
    pub pbs: f64,
    /// Seats per party, copied from the outcome.
    pub seats: Vec<usize>,
}

impl FairnessReport {
    pub fn nr_pct(&self) -> f64 {
        100.0 * self.nr as f64 / self.n_electors as f64
    }

    pub fn nur_pct(&self) -> f64 {
        100.0 * self.nur as f64 / self.n_electors as f64
    }

    pub fn nd_pct(&self, depth: usize) -> f64 {
        100.0 * self.nd[&depth] as f64 / self.n_electors as f64
    }
}

fn check_shapes(
    outcome: &ElectionOutcome,
    rankings: &PreferenceRanking,
    electorate: &Electorate,
) -> Result<()> {
    if outcome.n_districts() != electorate.n_districts()
        || rankings.n_electors() != electorate.n_electors()
        || outcome.n_parties() != rankings.n_parties()
    {
        return Err(Error::InvalidParameter(
            "outcome, rankings and electorate must agree in shape".into(),
        ));
    }
    Ok(())
}

/// Classifies every elector and flags dissatisfaction at `depth`.
pub fn classify_electors(
    outcome: &ElectionOutcome,
    rankings: &PreferenceRanking,
    electorate: &Electorate,
    depth: usize,
) -> Result<Vec<ElectorStatus>> {
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be at least 1".into()));
    }
    check_shapes(outcome, rankings, electorate)?;
    let elected_anywhere = outcome.elected_anywhere();
    let statuses = (0..electorate.n_electors())
        .map(|i| {
            let district = electorate.district_of(i);
            let winners = outcome.winners(district);
            let top = rankings.row(i)[0];
            let kind = if winners.contains(&top) {
                StatusKind::Represented
            } else if elected_anywhere[top] {
                StatusKind::IndirectlyRepresented
            } else {
                StatusKind::Unrepresented
            };
            let dissatisfied = !winners
                .iter()
                .any(|&w| rankings.rank_of(i, w) < depth);
            ElectorStatus { kind, dissatisfied }
        })
        .collect();
    Ok(statuses)
}

/// Per-elector Borda score for the winners of their own district: the
/// number of parties ranked below the winner, averaged over the district's
/// winners when there are several.
pub fn borda_scores(
    rankings: &PreferenceRanking,
    outcome: &ElectionOutcome,
    electorate: &Electorate,
) -> Result<BordaScores> {
    check_shapes(outcome, rankings, electorate)?;
    let k = rankings.n_parties();
    let n = electorate.n_electors();
    let mut per_elector = vec![0.0; n];
    let mut total = 0.0;
    let mut excluded = 0usize;
    let mut warned = false;
    for i in 0..n {
        let winners = outcome.winners(electorate.district_of(i));
        if winners.is_empty() {
            excluded += 1;
            if !warned {
                log::warn!("district without winners: electors excluded from Borda mean");
                warned = true;
            }
            continue;
        }
        let score: f64 = winners
            .iter()
            .map(|&w| (k - 1 - rankings.rank_of(i, w)) as f64)
            .sum::<f64>()
            / winners.len() as f64;
        per_elector[i] = score;
        total += score;
    }
    let included = n - excluded;
    let mean = if included > 0 {
        total / included as f64
    } else {
        0.0
    };
    Ok(BordaScores {
        per_elector,
        total,
        mean,
        excluded,
    })
}

/// Population variance (divide by the length) of the inputs.
pub fn partywise_parity(per_party_values: &[f64]) -> f64 {
    if per_party_values.is_empty() {
        return 0.0;
    }
    let k = per_party_values.len() as f64;
    let mean = per_party_values.iter().sum::<f64>() / k;
    per_party_values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / k
}

/// Assembles every measure for one `(scenario, policy)` outcome.
///
/// Party groupings key each elector by their top-ranked party. Before the
/// parity variances, representation counts are expressed as percentages of
/// the whole electorate and Borda totals as the mean score of the party's
/// supporters, which keeps the variances comparable across electorate
/// sizes.
pub fn fairness_report(
    outcome: &ElectionOutcome,
    rankings: &PreferenceRanking,
    electorate: &Electorate,
    depths: &[usize],
) -> Result<FairnessReport> {
    if depths.is_empty() {
        return Err(Error::InvalidParameter(
            "at least one dissatisfaction depth is required".into(),
        ));
    }
    check_shapes(outcome, rankings, electorate)?;
    let n = electorate.n_electors();
    let k = rankings.n_parties();
    let max_depth = *depths.iter().max().expect("non-empty depths");
    let statuses = classify_electors(outcome, rankings, electorate, max_depth)?;
    let borda = borda_scores(rankings, outcome, electorate)?;

    let mut nr = 0usize;
    let mut nur = 0usize;
    let mut indirect = 0usize;
    let mut r_by_party = vec![0usize; k];
    let mut ir_by_party = vec![0usize; k];
    let mut bc_sum_by_party = vec![0.0; k];
    let mut supporters = vec![0usize; k];
    let mut nd: BTreeMap<usize, usize> = depths.iter().map(|&d| (d, 0)).collect();

    for i in 0..n {
        let top = rankings.row(i)[0];
        supporters[top] += 1;
        bc_sum_by_party[top] += borda.per_elector[i];
        match statuses[i].kind {
            StatusKind::Represented => {
                nr += 1;
                r_by_party[top] += 1;
            }
            StatusKind::IndirectlyRepresented => {
                indirect += 1;
                ir_by_party[top] += 1;
            }
            StatusKind::Unrepresented => {
                nur += 1;
            }
        }
        let winners = outcome.winners(electorate.district_of(i));
        let best_rank = winners
            .iter()
            .map(|&w| rankings.rank_of(i, w))
            .min()
            .unwrap_or(usize::MAX);
        for (&d, count) in nd.iter_mut() {
            if best_rank >= d {
                *count += 1;
            }
        }
    }

    let pct = |count: usize| 100.0 * count as f64 / n as f64;
    let r_pct: Vec<f64> = r_by_party.iter().map(|&c| pct(c)).collect();
    let ir_pct: Vec<f64> = ir_by_party.iter().map(|&c| pct(c)).collect();
    let bc_by_party: Vec<f64> = (0..k)
        .map(|p| {
            if supporters[p] > 0 {
                bc_sum_by_party[p] / supporters[p] as f64
            } else {
                0.0
            }
        })
        .collect();

    Ok(FairnessReport {
        n_electors: n,
        n_parties: k,
        nr,
        nur,
        indirect,
        nd,
        nbc_total: borda.total,
        nbc_mean: borda.mean,
        prp: partywise_parity(&r_pct),
        pirp: partywise_parity(&ir_pct),
        pbs: partywise_parity(&bc_by_party),
        r_by_party,
        ir_by_party,
        bc_by_party,
        seats: outcome.seats().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preference::{rank_from_valuations, ValuationKind, ValuationMatrix};
    use proptest::prelude::*;

    /// Five districts of five electors; `votes[d] = (a_voters, b_voters)`.
    fn two_party_profile(votes: [(usize, usize); 5]) -> (Electorate, PreferenceRanking) {
        let mut communities = Vec::new();
        let mut districts = Vec::new();
        let mut values = Vec::new();
        for (d, &(a, b)) in votes.iter().enumerate() {
            assert_eq!(a + b, 5);
            for _ in 0..a {
                districts.push(d);
                communities.push(0);
                values.extend_from_slice(&[1.0, 0.0]);
            }
            for _ in 0..b {
                districts.push(d);
                communities.push(0);
                values.extend_from_slice(&[0.0, 1.0]);
            }
        }
        let electorate = Electorate::new(communities, districts, 5).unwrap();
        let matrix = ValuationMatrix::new(25, 2, values, ValuationKind::Raw).unwrap();
        let rankings = rank_from_valuations(&matrix);
        (electorate, rankings)
    }

    fn outcome_of(winners: &[usize]) -> ElectionOutcome {
        ElectionOutcome::from_winners(winners.iter().map(|&w| vec![w]).collect(), 2)
    }

    #[test]
    fn uniform_districts_classify() {
        let (electorate, rankings) = two_party_profile([(3, 2); 5]);
        let outcome = outcome_of(&[0, 0, 0, 0, 0]);
        let statuses = classify_electors(&outcome, &rankings, &electorate, 2).unwrap();
        let rep = statuses.iter().filter(|s| s.kind == StatusKind::Represented).count();
        let unrep = statuses.iter().filter(|s| s.kind == StatusKind::Unrepresented).count();
        let indirect = statuses
            .iter()
            .filter(|s| s.kind == StatusKind::IndirectlyRepresented)
            .count();
        assert_eq!((rep, indirect, unrep), (15, 0, 10));
    }

    #[test]
    fn split_districts_classify() {
        let (electorate, rankings) =
            two_party_profile([(5, 0), (4, 1), (3, 2), (2, 3), (1, 4)]);
        let outcome = outcome_of(&[0, 0, 0, 1, 1]);
        let statuses = classify_electors(&outcome, &rankings, &electorate, 2).unwrap();
        let rep = statuses.iter().filter(|s| s.kind == StatusKind::Represented).count();
        let unrep = statuses.iter().filter(|s| s.kind == StatusKind::Unrepresented).count();
        let indirect = statuses
            .iter()
            .filter(|s| s.kind == StatusKind::IndirectlyRepresented)
            .count();
        assert_eq!((rep, indirect, unrep), (19, 6, 0));

        let report = fairness_report(&outcome, &rankings, &electorate, &[2]).unwrap();
        assert_eq!(report.ir_by_party, vec![3, 3]);
        assert_eq!(report.pirp, 0.0);
    }

    #[test]
    fn lopsided_districts_classify() {
        let (electorate, rankings) =
            two_party_profile([(5, 0), (5, 0), (2, 3), (2, 3), (1, 4)]);
        let outcome = outcome_of(&[0, 0, 1, 1, 1]);
        let statuses = classify_electors(&outcome, &rankings, &electorate, 2).unwrap();
        let rep = statuses.iter().filter(|s| s.kind == StatusKind::Represented).count();
        let unrep = statuses.iter().filter(|s| s.kind == StatusKind::Unrepresented).count();
        let indirect = statuses
            .iter()
            .filter(|s| s.kind == StatusKind::IndirectlyRepresented)
            .count();
        assert_eq!((rep, indirect, unrep), (20, 5, 0));

        let report = fairness_report(&outcome, &rankings, &electorate, &[2]).unwrap();
        assert_eq!(report.ir_by_party, vec![5, 0]);
    }

    /// Six electors, one district, three parties; the ranked-list example.
    fn ranked_list_profile() -> (Electorate, PreferenceRanking) {
        let electorate = Electorate::new(vec![0; 6], vec![0; 6], 1).unwrap();
        let rows = [
            [3.0, 2.0, 1.0], // A > B > C
            [3.0, 2.0, 1.0],
            [3.0, 1.0, 2.0], // A > C > B
            [1.0, 3.0, 2.0], // B > C > A
            [1.0, 3.0, 2.0],
            [1.0, 2.0, 3.0], // C > B > A
        ];
        let matrix = ValuationMatrix::new(
            6,
            3,
            rows.iter().flatten().copied().collect(),
            ValuationKind::Raw,
        )
        .unwrap();
        (electorate, rank_from_valuations(&matrix))
    }

    #[test]
    fn borda_totals_for_each_winner() {
        let (electorate, rankings) = ranked_list_profile();
        for (winner, expected_total) in [(0usize, 6.0), (1, 7.0), (2, 5.0)] {
            let outcome = ElectionOutcome::from_winners(vec![vec![winner]], 3);
            let borda = borda_scores(&rankings, &outcome, &electorate).unwrap();
            assert_eq!(borda.total, expected_total, "winner {winner}");
        }
        let outcome = ElectionOutcome::from_winners(vec![vec![1]], 3);
        let borda = borda_scores(&rankings, &outcome, &electorate).unwrap();
        assert_eq!(borda.per_elector, vec![1.0, 1.0, 0.0, 2.0, 2.0, 1.0]);
    }

    #[test]
    fn divisive_winner_dissatisfies_three() {
        let (electorate, rankings) = ranked_list_profile();
        let outcome = ElectionOutcome::from_winners(vec![vec![0]], 3);
        // A outside the top-2 of V4, V5, V6.
        for i in 3..6 {
            assert!(rankings.rank_of(i, 0) >= 2);
        }
        let _ = outcome;
    }

    #[test]
    fn unanimous_winner_maximizes_borda() {
        let electorate = Electorate::new(vec![0; 4], vec![0, 0, 1, 1], 2).unwrap();
        let matrix = ValuationMatrix::new(
            4,
            3,
            vec![
                3.0, 2.0, 1.0, //
                3.0, 1.0, 2.0, //
                3.0, 2.0, 1.0, //
                3.0, 1.0, 2.0,
            ],
            ValuationKind::Raw,
        )
        .unwrap();
        let rankings = rank_from_valuations(&matrix);
        let outcome = ElectionOutcome::from_winners(vec![vec![0], vec![0]], 3);
        let borda = borda_scores(&rankings, &outcome, &electorate).unwrap();
        assert_eq!(borda.mean, 2.0);

        let report = fairness_report(&outcome, &rankings, &electorate, &[2]).unwrap();
        assert_eq!(report.nr, 4);
        assert_eq!(report.nur, 0);
        assert_eq!(report.nd[&2], 0);
    }

    #[test]
    fn parity_examples() {
        assert_eq!(partywise_parity(&[3.0, 3.0]), 0.0);
        assert_eq!(partywise_parity(&[5.0, 0.0]), 6.25);
        assert_eq!(partywise_parity(&[7.5, 7.5, 7.5]), 0.0);
    }

    #[test]
    fn empty_winner_district_excluded() {
        let electorate = Electorate::new(vec![0; 4], vec![0, 0, 1, 1], 2).unwrap();
        let matrix = ValuationMatrix::new(
            4,
            2,
            vec![1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0],
            ValuationKind::Raw,
        )
        .unwrap();
        let rankings = rank_from_valuations(&matrix);
        let outcome = ElectionOutcome::from_winners(vec![vec![0], vec![]], 2);
        let borda = borda_scores(&rankings, &outcome, &electorate).unwrap();
        assert_eq!(borda.excluded, 2);
        assert_eq!(borda.total, 2.0);
        assert_eq!(borda.mean, 1.0);
    }

    proptest! {
        // Status partition, ND monotonicity and Borda bounds on random
        // small instances.
        #[test]
        fn partition_and_monotonicity(seed in 0u64..300) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let s = rng.random_range(1..=5usize);
            let per = rng.random_range(1..=8usize);
            let n = s * per;
            let k = rng.random_range(2..=4usize);
            let electorate = Electorate::new(
                vec![0; n],
                (0..n).map(|i| i % s).collect(),
                s,
            ).unwrap();
            let matrix = ValuationMatrix::new(
                n,
                k,
                (0..n * k).map(|_| rng.random::<f64>()).collect(),
                ValuationKind::Raw,
            ).unwrap();
            let rankings = rank_from_valuations(&matrix);
            let winners: Vec<Vec<usize>> = (0..s).map(|_| vec![rng.random_range(0..k)]).collect();
            let outcome = ElectionOutcome::from_winners(winners, k);
            let depths: Vec<usize> = (1..=k).collect();
            let report = fairness_report(&outcome, &rankings, &electorate, &depths).unwrap();

            prop_assert_eq!(report.nr + report.nur + report.indirect, n);
            for d in 1..k {
                prop_assert!(report.nd[&(d + 1)] <= report.nd[&d]);
            }
            // Single-winner districts: depth-1 dissatisfaction is exactly
            // "winner is not my top choice".
            prop_assert_eq!(report.nd[&1], n - report.nr);
            prop_assert_eq!(report.nd[&k], 0);
            let borda = borda_scores(&rankings, &outcome, &electorate).unwrap();
            prop_assert!(borda.per_elector.iter().all(|&b| (0.0..=(k - 1) as f64).contains(&b)));
            let sum: f64 = borda.per_elector.iter().sum();
            prop_assert!((sum - borda.total).abs() < 1e-9);
        }

        // Variance is zero exactly when all entries agree.
        #[test]
        fn parity_zero_iff_equal(values in prop::collection::vec(0.0f64..100.0, 1..6)) {
            let v = partywise_parity(&values);
            prop_assert!(v >= 0.0);
            let all_equal = values.windows(2).all(|w| w[0] == w[1]);
            if all_equal {
                prop_assert_eq!(v, 0.0);
            } else {
                prop_assert!(v > 0.0);
            }
        }
    }
}
