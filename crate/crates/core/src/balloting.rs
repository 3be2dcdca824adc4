//! Conversion of a single elector's ranking or valuations into a ballot
//! under each supported voting rule.

use crate::error::{Error, Result};

/// One elector's expression under a voting rule.
#[derive(Debug, Clone, PartialEq)]
pub enum Ballot {
    /// The elector's top `k` parties.
    KApproval(Vec<usize>),
    /// Ranked choices with per-position weights.
    WeightedKApproval(Vec<(usize, f64)>),
    /// Every party above the cutoff; may be empty (abstention).
    Approval(Vec<usize>),
    /// A +1 vote and a -1 vote against distinct parties.
    NegativeVote { positive: usize, negative: usize },
    /// First choice plus the party the vote transfers to on elimination.
    TransferableVote { first: usize, second: usize },
}

impl Ballot {
    /// Distinct party indices referenced by the ballot.
    pub fn parties(&self) -> Vec<usize> {
        match self {
            Ballot::KApproval(set) | Ballot::Approval(set) => set.clone(),
            Ballot::WeightedKApproval(pairs) => pairs.iter().map(|&(p, _)| p).collect(),
            Ballot::NegativeVote { positive, negative } => vec![*positive, *negative],
            Ballot::TransferableVote { first, second } => vec![*first, *second],
        }
    }
}

/// Top `k` parties of the ranking, `1 <= k <= K`.
pub fn cast_k_approval(ranking_row: &[usize], k: usize) -> Result<Ballot> {
    if k == 0 || k > ranking_row.len() {
        return Err(Error::InvalidParameter(format!(
            "k-approval requires 1 <= k <= {} (got {k})",
            ranking_row.len()
        )));
    }
    Ok(Ballot::KApproval(ranking_row[..k].to_vec()))
}

/// Pairs the `j`-th ranked party with weight `weights[j]`.
pub fn cast_weighted_k_approval(ranking_row: &[usize], weights: &[f64]) -> Result<Ballot> {
    if weights.is_empty() || weights.len() > ranking_row.len() {
        return Err(Error::InvalidParameter(format!(
            "weighted approval requires 1 <= weights <= {} entries (got {})",
            ranking_row.len(),
            weights.len()
        )));
    }
    Ok(Ballot::WeightedKApproval(
        ranking_row
            .iter()
            .zip(weights)
            .map(|(&p, &w)| (p, w))
            .collect(),
    ))
}

/// Approves every party whose valuation strictly exceeds the cutoff.
/// An elector with no such party abstains with an empty ballot.
pub fn cast_approval(valuation_row: &[f64], cutoff: f64) -> Ballot {
    Ballot::Approval(
        valuation_row
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v > cutoff)
            .map(|(k, _)| k)
            .collect(),
    )
}

/// +1 for the top-ranked party, -1 against the bottom-ranked party.
pub fn cast_negative_vote(ranking_row: &[usize]) -> Result<Ballot> {
    if ranking_row.len() < 2 {
        return Err(Error::InvalidParameter(
            "negative vote requires at least 2 parties".into(),
        ));
    }
    Ok(Ballot::NegativeVote {
        positive: ranking_row[0],
        negative: *ranking_row.last().expect("non-empty ranking"),
    })
}

/// First and second choice are the top two of the ranking.
pub fn cast_transferable_vote(ranking_row: &[usize]) -> Result<Ballot> {
    if ranking_row.len() < 2 {
        return Err(Error::InvalidParameter(
            "transferable vote requires at least 2 parties".into(),
        ));
    }
    Ok(Ballot::TransferableVote {
        first: ranking_row[0],
        second: ranking_row[1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn k_approval_prefixes() {
        assert_eq!(
            cast_k_approval(&[1, 0, 2], 1).unwrap(),
            Ballot::KApproval(vec![1])
        );
        assert_eq!(
            cast_k_approval(&[1, 0, 2], 2).unwrap(),
            Ballot::KApproval(vec![1, 0])
        );
        assert_eq!(
            cast_k_approval(&[2, 1, 0], 3).unwrap(),
            Ballot::KApproval(vec![2, 1, 0])
        );
        assert!(cast_k_approval(&[1, 0, 2], 4).is_err());
        assert!(cast_k_approval(&[1, 0, 2], 0).is_err());
    }

    #[test]
    fn weighted_approval_pairs() {
        assert_eq!(
            cast_weighted_k_approval(&[1, 0, 2], &[1.0, 0.5]).unwrap(),
            Ballot::WeightedKApproval(vec![(1, 1.0), (0, 0.5)])
        );
        assert_eq!(
            cast_weighted_k_approval(&[1, 0, 2], &[1.0, 1.0]).unwrap(),
            Ballot::WeightedKApproval(vec![(1, 1.0), (0, 1.0)])
        );
        assert_eq!(
            cast_weighted_k_approval(&[0, 1], &[1.0]).unwrap(),
            Ballot::WeightedKApproval(vec![(0, 1.0)])
        );
        assert!(cast_weighted_k_approval(&[0, 1], &[1.0, 0.5, 0.2]).is_err());
        assert!(cast_weighted_k_approval(&[0, 1], &[]).is_err());
    }

    #[test]
    fn approval_thresholds() {
        assert_eq!(
            cast_approval(&[0.4, -0.2, 1.1], 0.0),
            Ballot::Approval(vec![0, 2])
        );
        assert_eq!(cast_approval(&[-1.0, -2.0], 0.0), Ballot::Approval(vec![]));
        assert_eq!(
            cast_approval(&[0.4, -0.2, 1.1], 0.5),
            Ballot::Approval(vec![2])
        );
    }

    #[test]
    fn negative_vote_extremes() {
        assert_eq!(
            cast_negative_vote(&[1, 0, 2]).unwrap(),
            Ballot::NegativeVote {
                positive: 1,
                negative: 2
            }
        );
        assert_eq!(
            cast_negative_vote(&[0, 1]).unwrap(),
            Ballot::NegativeVote {
                positive: 0,
                negative: 1
            }
        );
        assert!(cast_negative_vote(&[0]).is_err());
    }

    #[test]
    fn transferable_top_two() {
        assert_eq!(
            cast_transferable_vote(&[1, 0, 2]).unwrap(),
            Ballot::TransferableVote { first: 1, second: 0 }
        );
        assert_eq!(
            cast_transferable_vote(&[2, 0, 1]).unwrap(),
            Ballot::TransferableVote { first: 2, second: 0 }
        );
        assert!(cast_transferable_vote(&[0]).is_err());
    }

    fn ranking_strategy(k: usize) -> impl Strategy<Value = Vec<usize>> {
        Just((0..k).collect::<Vec<_>>()).prop_shuffle()
    }

    proptest! {
        // Every rule emits distinct in-range parties; the vote rules keep
        // their two slots distinct.
        #[test]
        fn ballots_are_duplicate_free(order in (2usize..8).prop_flat_map(ranking_strategy), k in 1usize..8) {
            let n_parties = order.len();
            let k = k.min(n_parties);
            for ballot in [
                cast_k_approval(&order, k).unwrap(),
                cast_weighted_k_approval(&order, &vec![1.0; k]).unwrap(),
                cast_negative_vote(&order).unwrap(),
                cast_transferable_vote(&order).unwrap(),
            ] {
                let parties = ballot.parties();
                let mut dedup = parties.clone();
                dedup.sort_unstable();
                dedup.dedup();
                prop_assert_eq!(dedup.len(), parties.len());
                prop_assert!(parties.iter().all(|&p| p < n_parties));
            }
            if let Ballot::NegativeVote { positive, negative } = cast_negative_vote(&order).unwrap() {
                prop_assert_ne!(positive, negative);
            }
            if let Ballot::TransferableVote { first, second } = cast_transferable_vote(&order).unwrap() {
                prop_assert_ne!(first, second);
            }
        }
    }
}
