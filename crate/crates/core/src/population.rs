//! Synthetic electorate generation: community shares from a truncated
//! stick-breaking construction, categorical community labels, and an
//! equal-capacity Chinese Restaurant Process over districts.

use crate::error::{Error, Result};
use rand::Rng;
use rand_distr::{Beta, Distribution};
use std::io::Write;

/// Fractions of the electorate belonging to each community.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunityShares {
    shares: Vec<f64>,
}

impl CommunityShares {
    /// Validates length, non-negativity and normalization (1e-9 tolerance).
    pub fn new(shares: Vec<f64>) -> Result<Self> {
        if shares.is_empty() {
            return Err(Error::InvalidParameter(
                "community shares must have at least one entry".into(),
            ));
        }
        if shares.iter().any(|&s| !(s >= 0.0) || !s.is_finite()) {
            return Err(Error::InvalidParameter(
                "community shares must be non-negative and finite".into(),
            ));
        }
        let total: f64 = shares.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!(
                "community shares must sum to 1 (got {total})"
            )));
        }
        Ok(Self { shares })
    }

    pub fn len(&self) -> usize {
        self.shares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shares.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.shares
    }
}

/// Electors with their community labels and equal-capacity district labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Electorate {
    n_districts: usize,
    community_of: Vec<usize>,
    district_of: Vec<usize>,
    district_members: Vec<Vec<usize>>,
}

impl Electorate {
    /// Builds the electorate and its per-district member index. Fails if the
    /// district count does not divide the elector count or any district does
    /// not hold exactly `N / S` electors.
    pub fn new(community_of: Vec<usize>, district_of: Vec<usize>, n_districts: usize) -> Result<Self> {
        let n = community_of.len();
        if n == 0 {
            return Err(Error::InvalidParameter("electorate must be non-empty".into()));
        }
        if community_of.len() != district_of.len() {
            return Err(Error::InvalidParameter(
                "community and district label vectors must have equal length".into(),
            ));
        }
        if n_districts == 0 || n % n_districts != 0 {
            return Err(Error::InvalidParameter(
                "n_districts must divide n_electors".into(),
            ));
        }
        let capacity = n / n_districts;
        let mut district_members = vec![Vec::with_capacity(capacity); n_districts];
        for (i, &s) in district_of.iter().enumerate() {
            if s >= n_districts {
                return Err(Error::InvalidParameter(format!(
                    "district label {s} out of range for {n_districts} districts"
                )));
            }
            district_members[s].push(i);
        }
        if district_members.iter().any(|m| m.len() != capacity) {
            return Err(Error::InvalidParameter(
                "every district must hold exactly n_electors / n_districts electors".into(),
            ));
        }
        Ok(Self {
            n_districts,
            community_of,
            district_of,
            district_members,
        })
    }

    pub fn n_electors(&self) -> usize {
        self.community_of.len()
    }

    pub fn n_districts(&self) -> usize {
        self.n_districts
    }

    pub fn district_capacity(&self) -> usize {
        self.n_electors() / self.n_districts
    }

    pub fn community_of(&self, elector: usize) -> usize {
        self.community_of[elector]
    }

    pub fn district_of(&self, elector: usize) -> usize {
        self.district_of[elector]
    }

    pub fn communities(&self) -> &[usize] {
        &self.community_of
    }

    pub fn districts(&self) -> &[usize] {
        &self.district_of
    }

    pub fn district_members(&self, district: usize) -> &[usize] {
        &self.district_members[district]
    }

    /// Columnar dump: `elector_id,community,district`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let path = "<electorate csv>";
        writeln!(w, "elector_id,community,district").map_err(|e| Error::io(path, e))?;
        for i in 0..self.n_electors() {
            writeln!(w, "{i},{},{}", self.community_of[i], self.district_of[i])
                .map_err(|e| Error::io(path, e))?;
        }
        Ok(())
    }
}

/// Truncated stick-breaking draw: `C - 1` Beta(1, concentration) sticks,
/// the last share takes the residual mass.
pub fn sample_community_shares<R: Rng>(
    n_communities: usize,
    concentration: f64,
    rng: &mut R,
) -> Result<CommunityShares> {
    if n_communities == 0 {
        return Err(Error::InvalidParameter(
            "n_communities must be at least 1".into(),
        ));
    }
    if !(concentration > 0.0) || !concentration.is_finite() {
        return Err(Error::InvalidParameter(
            "sbp_concentration must be positive and finite".into(),
        ));
    }
    let mut shares = Vec::with_capacity(n_communities);
    let mut remaining = 1.0;
    if n_communities > 1 {
        let beta = Beta::new(1.0, concentration)
            .map_err(|e| Error::InvalidParameter(format!("stick-breaking beta: {e}")))?;
        for _ in 0..n_communities - 1 {
            let v = beta.sample(rng);
            shares.push(v * remaining);
            remaining *= 1.0 - v;
        }
    }
    shares.push(remaining);
    CommunityShares::new(shares)
}

/// Independent categorical draws over the community shares.
pub fn assign_communities<R: Rng>(
    shares: &CommunityShares,
    n_electors: usize,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if n_electors == 0 {
        return Err(Error::InvalidParameter("n_electors must be at least 1".into()));
    }
    // Cumulative inverse transform; one uniform per elector.
    let mut cumulative = Vec::with_capacity(shares.len());
    let mut acc = 0.0;
    for &s in shares.as_slice() {
        acc += s;
        cumulative.push(acc);
    }
    let last = shares.len() - 1;
    let labels = (0..n_electors)
        .map(|_| {
            let u: f64 = rng.random();
            cumulative.partition_point(|&c| c <= u).min(last)
        })
        .collect();
    Ok(labels)
}

/// Sequential equal-capacity district assignment.
///
/// Elector `i` joins open district `s` with probability proportional to
/// `clustering * n_s(community(i)) + (1 - clustering) / |open|`, where
/// `n_s` counts same-community electors already placed in `s`. Districts at
/// capacity `N / S` leave the candidate set; if every attraction weight is
/// zero (e.g. `clustering = 1` and no same-community elector placed yet) the
/// draw falls back to a uniform open district.
pub fn assign_districts<R: Rng>(
    community_of: &[usize],
    n_districts: usize,
    clustering: f64,
    rng: &mut R,
) -> Result<Vec<usize>> {
    let n = community_of.len();
    if n == 0 {
        return Err(Error::InvalidParameter("electorate must be non-empty".into()));
    }
    if n_districts == 0 || n % n_districts != 0 {
        return Err(Error::InvalidParameter(
            "n_districts must divide n_electors".into(),
        ));
    }
    if !(0.0..=1.0).contains(&clustering) {
        return Err(Error::InvalidParameter(
            "clustering must lie in [0, 1]".into(),
        ));
    }
    let capacity = n / n_districts;
    let n_communities = community_of.iter().copied().max().unwrap_or(0) + 1;

    // counts[s * n_communities + c]: same-community occupancy per district.
    let mut counts = vec![0usize; n_districts * n_communities];
    let mut fill = vec![0usize; n_districts];
    let mut open: Vec<usize> = (0..n_districts).collect();
    let mut weights: Vec<f64> = Vec::with_capacity(n_districts);
    let mut district_of = vec![0usize; n];

    for (i, &c) in community_of.iter().enumerate() {
        let uniform_part = (1.0 - clustering) / open.len() as f64;
        weights.clear();
        let mut total = 0.0;
        for &s in &open {
            let w = clustering * counts[s * n_communities + c] as f64 + uniform_part;
            weights.push(w);
            total += w;
        }
        let slot = if total > 0.0 {
            let mut u: f64 = rng.random::<f64>() * total;
            let mut chosen = open.len() - 1;
            for (idx, &w) in weights.iter().enumerate() {
                u -= w;
                if u < 0.0 {
                    chosen = idx;
                    break;
                }
            }
            chosen
        } else {
            rng.random_range(0..open.len())
        };
        let s = open[slot];
        district_of[i] = s;
        counts[s * n_communities + c] += 1;
        fill[s] += 1;
        if fill[s] == capacity {
            open.swap_remove(slot);
        }
    }
    debug_assert!(open.is_empty());
    Ok(district_of)
}
