//! Community-party affinities, party variances, per-elector valuations,
//! local-influence mixing and strict preference rankings.

use crate::error::{Error, Result};
use crate::population::{CommunityShares, Electorate};
use rand::Rng;
use rand_distr::{Beta, Distribution, Gamma, Normal};
use std::io::Write;

/// Bound on per-column rejection rounds when sampling the affinity matrix.
/// The all-zero column always satisfies the mass constraint, so running out
/// of attempts indicates a bug rather than an unsatisfiable input.
const MAX_AFFINITY_REJECTIONS: usize = 10_000;

/// Community-by-party relation matrix with entries in `{-1, 0, +1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffinityMatrix {
    n_communities: usize,
    n_parties: usize,
    phi: Vec<i8>,
}

impl AffinityMatrix {
    /// Builds from row-per-community data; entries restricted to −1/0/+1.
    pub fn from_rows(rows: Vec<Vec<i8>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidParameter(
                "affinity matrix must be non-empty".into(),
            ));
        }
        let n_parties = rows[0].len();
        if rows.iter().any(|r| r.len() != n_parties) {
            return Err(Error::InvalidParameter(
                "affinity matrix rows must have equal length".into(),
            ));
        }
        let phi: Vec<i8> = rows.into_iter().flatten().collect();
        if phi.iter().any(|v| !(-1..=1).contains(v)) {
            return Err(Error::InvalidParameter(
                "affinity entries must be -1, 0 or +1".into(),
            ));
        }
        Ok(Self {
            n_communities: phi.len() / n_parties,
            n_parties,
            phi,
        })
    }

    pub fn n_communities(&self) -> usize {
        self.n_communities
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn get(&self, community: usize, party: usize) -> i8 {
        self.phi[community * self.n_parties + party]
    }

    pub fn rows(&self) -> Vec<Vec<i8>> {
        self.phi
            .chunks(self.n_parties)
            .map(|r| r.to_vec())
            .collect()
    }

    /// Share of the electorate whose community has a good relation with
    /// `party`.
    pub fn good_mass(&self, shares: &CommunityShares, party: usize) -> f64 {
        (0..self.n_communities)
            .filter(|&c| self.get(c, party) == 1)
            .map(|c| shares.as_slice()[c])
            .sum()
    }

    /// True when no party has good relations with more than half of the
    /// electorate.
    pub fn satisfies_mass_constraint(&self, shares: &CommunityShares) -> bool {
        (0..self.n_parties).all(|k| self.good_mass(shares, k) <= 0.5)
    }
}

/// Per-party spread of valuations; treated as standard deviations.
#[derive(Debug, Clone, PartialEq)]
pub struct PartyVariances {
    sigma: Vec<f64>,
}

impl PartyVariances {
    pub fn new(sigma: Vec<f64>) -> Result<Self> {
        if sigma.is_empty() {
            return Err(Error::InvalidParameter(
                "party variances must be non-empty".into(),
            ));
        }
        if sigma.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
            return Err(Error::InvalidParameter(
                "party variances must be positive and finite".into(),
            ));
        }
        Ok(Self { sigma })
    }

    pub fn n_parties(&self) -> usize {
        self.sigma.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.sigma
    }
}

/// Whether a valuation matrix is raw or has been mixed with district means.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValuationKind {
    Raw,
    Influenced,
}

/// Elector-by-party valuation matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ValuationMatrix {
    n_electors: usize,
    n_parties: usize,
    kind: ValuationKind,
    values: Vec<f64>,
}

impl ValuationMatrix {
    pub fn new(n_electors: usize, n_parties: usize, values: Vec<f64>, kind: ValuationKind) -> Result<Self> {
        if values.len() != n_electors * n_parties {
            return Err(Error::InvalidParameter(
                "valuation matrix shape mismatch".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "valuations must be finite".into(),
            ));
        }
        Ok(Self {
            n_electors,
            n_parties,
            kind,
            values,
        })
    }

    pub fn n_electors(&self) -> usize {
        self.n_electors
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn kind(&self) -> ValuationKind {
        self.kind
    }

    pub fn row(&self, elector: usize) -> &[f64] {
        &self.values[elector * self.n_parties..(elector + 1) * self.n_parties]
    }

    pub fn get(&self, elector: usize, party: usize) -> f64 {
        self.values[elector * self.n_parties + party]
    }

    /// Debug dump: `elector_id,party_0,...,party_{K-1}`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let path = "<valuations csv>";
        let header: Vec<String> = (0..self.n_parties).map(|k| format!("party_{k}")).collect();
        writeln!(w, "elector_id,{}", header.join(",")).map_err(|e| Error::io(path, e))?;
        for i in 0..self.n_electors {
            let cells: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(w, "{i},{}", cells.join(",")).map_err(|e| Error::io(path, e))?;
        }
        Ok(())
    }
}

/// Per-elector strict total order over parties, most-preferred first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceRanking {
    n_electors: usize,
    n_parties: usize,
    order: Vec<usize>,
}

impl PreferenceRanking {
    pub fn n_electors(&self) -> usize {
        self.n_electors
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    /// Party indices for one elector, best first.
    pub fn row(&self, elector: usize) -> &[usize] {
        &self.order[elector * self.n_parties..(elector + 1) * self.n_parties]
    }

    /// Zero-based position of `party` in the elector's ranking.
    pub fn rank_of(&self, elector: usize, party: usize) -> usize {
        self.row(elector)
            .iter()
            .position(|&p| p == party)
            .expect("party index within range")
    }
}

/// Samples the affinity matrix column by column, rejecting any party column
/// whose good-relation communities cover more than half the electorate.
pub fn sample_affinity_matrix<R: Rng>(
    n_communities: usize,
    n_parties: usize,
    shares: &CommunityShares,
    rng: &mut R,
) -> Result<AffinityMatrix> {
    if n_communities == 0 || n_parties == 0 {
        return Err(Error::InvalidParameter(
            "n_communities and n_parties must be at least 1".into(),
        ));
    }
    if shares.len() != n_communities {
        return Err(Error::InvalidParameter(
            "community shares length must equal n_communities".into(),
        ));
    }
    let mut phi = vec![0i8; n_communities * n_parties];
    let mut column = vec![0i8; n_communities];
    for k in 0..n_parties {
        let mut accepted = false;
        for _ in 0..MAX_AFFINITY_REJECTIONS {
            let mut good_mass = 0.0;
            for (c, slot) in column.iter_mut().enumerate() {
                *slot = rng.random_range(-1..=1) as i8;
                if *slot == 1 {
                    good_mass += shares.as_slice()[c];
                }
            }
            if good_mass <= 0.5 {
                accepted = true;
                break;
            }
        }
        if !accepted {
            return Err(Error::Internal(format!(
                "affinity column {k} rejected {MAX_AFFINITY_REJECTIONS} times"
            )));
        }
        for c in 0..n_communities {
            phi[c * n_parties + k] = column[c];
        }
    }
    Ok(AffinityMatrix {
        n_communities,
        n_parties,
        phi,
    })
}

/// Independent Gamma(shape, scale) draws, one per party.
pub fn sample_party_variances<R: Rng>(
    n_parties: usize,
    shape: f64,
    scale: f64,
    rng: &mut R,
) -> Result<PartyVariances> {
    if !(shape > 0.0) || !(scale > 0.0) || !shape.is_finite() || !scale.is_finite() {
        return Err(Error::InvalidParameter(
            "gamma shape and scale must be positive and finite".into(),
        ));
    }
    let gamma = Gamma::new(shape, scale)
        .map_err(|e| Error::InvalidParameter(format!("gamma parameters: {e}")))?;
    PartyVariances::new((0..n_parties).map(|_| gamma.sample(rng)).collect())
}

/// Gaussian valuations: elector `i` values party `k` as a draw from
/// `Normal(phi[community(i)][k], sigma[k])`.
pub fn sample_valuations<R: Rng>(
    electorate: &Electorate,
    phi: &AffinityMatrix,
    sigma: &PartyVariances,
    rng: &mut R,
) -> Result<ValuationMatrix> {
    let n_parties = phi.n_parties();
    if sigma.n_parties() != n_parties {
        return Err(Error::InvalidParameter(
            "party variances length must equal n_parties".into(),
        ));
    }
    let max_community = electorate.communities().iter().copied().max().unwrap_or(0);
    if max_community >= phi.n_communities() {
        return Err(Error::InvalidParameter(
            "electorate references a community outside the affinity matrix".into(),
        ));
    }
    // One distribution per (community, party) cell, reused across electors.
    let mut cells = Vec::with_capacity(phi.n_communities() * n_parties);
    for c in 0..phi.n_communities() {
        for k in 0..n_parties {
            let normal = Normal::new(phi.get(c, k) as f64, sigma.as_slice()[k])
                .map_err(|e| Error::InvalidParameter(format!("normal parameters: {e}")))?;
            cells.push(normal);
        }
    }
    let n = electorate.n_electors();
    let mut values = Vec::with_capacity(n * n_parties);
    for i in 0..n {
        let c = electorate.community_of(i);
        for k in 0..n_parties {
            values.push(cells[c * n_parties + k].sample(rng));
        }
    }
    ValuationMatrix::new(n, n_parties, values, ValuationKind::Raw)
}

/// One Beta(a, b) draw in `[0, 1]`.
pub fn sample_kappa<R: Rng>(a: f64, b: f64, rng: &mut R) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParameter(
            "beta parameters must be positive and finite".into(),
        ));
    }
    let beta =
        Beta::new(a, b).map_err(|e| Error::InvalidParameter(format!("beta parameters: {e}")))?;
    Ok(beta.sample(rng))
}

fn district_means(values: &ValuationMatrix, electorate: &Electorate) -> Vec<f64> {
    let k = values.n_parties();
    let mut means = vec![0.0; electorate.n_districts() * k];
    for s in 0..electorate.n_districts() {
        let members = electorate.district_members(s);
        let scale = 1.0 / members.len() as f64;
        for &i in members {
            let row = values.row(i);
            for (kk, &v) in row.iter().enumerate() {
                means[s * k + kk] += v;
            }
        }
        for kk in 0..k {
            means[s * k + kk] *= scale;
        }
    }
    means
}

fn mix_with_district_means(
    values: &ValuationMatrix,
    electorate: &Electorate,
    kappa_of: impl Fn(usize) -> f64,
) -> Result<ValuationMatrix> {
    if values.n_electors() != electorate.n_electors() {
        return Err(Error::InvalidParameter(
            "valuation matrix shape must match the electorate".into(),
        ));
    }
    let k = values.n_parties();
    let means = district_means(values, electorate);
    let n = values.n_electors();
    let mut mixed = Vec::with_capacity(n * k);
    for i in 0..n {
        let kappa = kappa_of(i);
        let s = electorate.district_of(i);
        let row = values.row(i);
        for (kk, &v) in row.iter().enumerate() {
            mixed.push(kappa * v + (1.0 - kappa) * means[s * k + kk]);
        }
    }
    ValuationMatrix::new(n, k, mixed, ValuationKind::Influenced)
}

/// Mixes every valuation with its district mean (self included):
/// `kappa * value + (1 - kappa) * district_mean`.
pub fn apply_local_influence(
    values: &ValuationMatrix,
    electorate: &Electorate,
    kappa: f64,
) -> Result<ValuationMatrix> {
    if !(0.0..=1.0).contains(&kappa) {
        return Err(Error::InvalidParameter("kappa must lie in [0, 1]".into()));
    }
    mix_with_district_means(values, electorate, |_| kappa)
}

/// Per-elector variant of [`apply_local_influence`]; `kappas[i]` applies to
/// elector `i`.
pub fn apply_local_influence_per_elector(
    values: &ValuationMatrix,
    electorate: &Electorate,
    kappas: &[f64],
) -> Result<ValuationMatrix> {
    if kappas.len() != values.n_electors() {
        return Err(Error::InvalidParameter(
            "kappa vector length must equal n_electors".into(),
        ));
    }
    if kappas.iter().any(|k| !(0.0..=1.0).contains(k)) {
        return Err(Error::InvalidParameter("kappa must lie in [0, 1]".into()));
    }
    mix_with_district_means(values, electorate, |i| kappas[i])
}

/// Sorts each elector's parties by valuation, descending; exact ties break
/// toward the lower party index.
pub fn rank_from_valuations(values: &ValuationMatrix) -> PreferenceRanking {
    let k = values.n_parties();
    let n = values.n_electors();
    let mut order = Vec::with_capacity(n * k);
    let mut scratch: Vec<usize> = (0..k).collect();
    for i in 0..n {
        let row = values.row(i);
        scratch.iter_mut().enumerate().for_each(|(j, s)| *s = j);
        scratch.sort_unstable_by(|&a, &b| row[b].total_cmp(&row[a]).then_with(|| a.cmp(&b)));
        order.extend_from_slice(&scratch);
    }
    PreferenceRanking {
        n_electors: n,
        n_parties: k,
        order,
    }
}
