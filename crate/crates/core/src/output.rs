//! Output files: per-run CSV rows, sweep summary and manifest JSON, plus
//! the optional scenario debug dumps. All files are written atomically
//! (temp file in the target directory, then rename).

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::harness::{RunRecord, SweepSummary};
use crate::scenario::Scenario;
use crate::tally::{DistrictTally, Policy};
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};

/// Library version recorded into manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    version: &'a str,
    config: &'a RunConfig,
}

fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let display = path.display().to_string();
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let write = fs::write(&tmp, bytes).and_then(|()| fs::rename(&tmp, path));
    if let Err(e) = write {
        let _ = fs::remove_file(&tmp);
        return Err(Error::io(display, e));
    }
    Ok(())
}

/// CSV header for run records at the given depth and party count.
pub fn runs_csv_header(depth: usize, n_parties: usize) -> Vec<String> {
    let mut header = vec![
        "scenario_id".to_string(),
        "policy".to_string(),
        "seed".to_string(),
        "NR_pct".to_string(),
        "NUR_pct".to_string(),
        format!("ND{depth}_pct"),
        "NBC_mean".to_string(),
        "PIRP".to_string(),
        "PRP".to_string(),
        "PBS".to_string(),
    ];
    header.extend((0..n_parties).map(|k| format!("seats_{k}")));
    header
}

/// Serializes run records into CSV bytes with the stable column order.
pub fn runs_csv_bytes(records: &[RunRecord], depth: usize, n_parties: usize) -> Result<Vec<u8>> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(runs_csv_header(depth, n_parties))?;
    for record in records {
        let report = &record.report;
        let mut row = vec![
            record.scenario_id(),
            record.policy.name().to_string(),
            record.run_key.to_string(),
            report.nr_pct().to_string(),
            report.nur_pct().to_string(),
            report.nd_pct(depth).to_string(),
            report.nbc_mean.to_string(),
            report.pirp.to_string(),
            report.prp.to_string(),
            report.pbs.to_string(),
        ];
        row.extend(report.seats.iter().map(usize::to_string));
        writer.write_record(&row)?;
    }
    writer
        .into_inner()
        .map_err(|e| Error::Internal(format!("csv buffer: {e}")))
}

/// A runs.csv row read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRow {
    pub scenario_id: String,
    pub policy: String,
    pub seed: u64,
    /// NR_pct, NUR_pct, ND_pct, NBC_mean, PIRP, PRP, PBS in column order.
    pub values: Vec<f64>,
    pub seats: Vec<usize>,
}

/// Parses a runs.csv produced by [`runs_csv_bytes`].
pub fn parse_runs_csv(path: impl AsRef<Path>) -> Result<Vec<RunRow>> {
    let mut reader = csv::Reader::from_path(path.as_ref())?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let parse_f64 = |i: usize| -> Result<f64> {
            record[i]
                .parse()
                .map_err(|e| Error::MalformedRecords(format!("column {i}: {e}")))
        };
        let values = (3..10).map(parse_f64).collect::<Result<Vec<f64>>>()?;
        let seats = (10..record.len())
            .map(|i| {
                record[i]
                    .parse()
                    .map_err(|e| Error::MalformedRecords(format!("column {i}: {e}")))
            })
            .collect::<Result<Vec<usize>>>()?;
        rows.push(RunRow {
            scenario_id: record[0].to_string(),
            policy: record[1].to_string(),
            seed: record[2]
                .parse()
                .map_err(|e| Error::MalformedRecords(format!("seed column: {e}")))?,
            values,
            seats,
        });
    }
    Ok(rows)
}

/// Writes `runs.csv`, `summary.json` and `manifest.json` into `dir`.
/// Returns the written paths.
pub fn write_outputs(
    records: &[RunRecord],
    summary: &SweepSummary,
    config: &RunConfig,
    dir: impl AsRef<Path>,
) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;

    let runs_path = dir.join("runs.csv");
    atomic_write(
        &runs_path,
        &runs_csv_bytes(records, summary.depth, config.n_parties)?,
    )?;

    let summary_path = dir.join("summary.json");
    atomic_write(&summary_path, &to_json_bytes(summary)?)?;

    let manifest_path = dir.join("manifest.json");
    let manifest = Manifest {
        version: VERSION,
        config,
    };
    atomic_write(&manifest_path, &to_json_bytes(&manifest)?)?;

    Ok(vec![runs_path, summary_path, manifest_path])
}

fn to_json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| Error::Json {
        path: "<in-memory>".into(),
        source: e,
    })?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes a JSON value atomically; used for manifests and match results.
pub fn write_json(path: impl AsRef<Path>, value: &impl Serialize) -> Result<()> {
    atomic_write(path.as_ref(), &to_json_bytes(value)?)
}

/// Per-district score table: `district,party,score,elected`.
pub fn district_scores_csv_bytes(tallies: &[DistrictTally]) -> Result<Vec<u8>> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["district", "party", "score", "elected"])?;
    for (district, tally) in tallies.iter().enumerate() {
        for (party, &score) in tally.scores.iter().enumerate() {
            writer.write_record(&[
                district.to_string(),
                party.to_string(),
                score.to_string(),
                tally.elected.contains(&party).to_string(),
            ])?;
        }
    }
    writer
        .into_inner()
        .map_err(|e| Error::Internal(format!("csv buffer: {e}")))
}

/// Debug dump of one district's ballots: `elector_id,rule,choices`, with
/// choices joined by `;`.
pub fn ballots_csv_bytes(
    scenario: &Scenario,
    policy: Policy,
    rules: &crate::tally::BallotRules,
    district: usize,
) -> Result<Vec<u8>> {
    use crate::balloting::{self, Ballot};
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["elector_id", "rule", "choices"])?;
    for &i in scenario.electorate.district_members(district) {
        let row = scenario.rankings.row(i);
        let ballot = match policy {
            Policy::OneApproval => balloting::cast_k_approval(row, 1)?,
            Policy::TwoApproval => balloting::cast_k_approval(row, 2)?,
            Policy::WeightedTwoApproval => {
                balloting::cast_weighted_k_approval(row, &rules.weighted_approval_weights)?
            }
            Policy::Approval => {
                balloting::cast_approval(scenario.values.row(i), rules.approval_cutoff)
            }
            Policy::NegativeVote => balloting::cast_negative_vote(row)?,
            Policy::TransferableVote => balloting::cast_transferable_vote(row)?,
        };
        let choices = match &ballot {
            Ballot::WeightedKApproval(pairs) => pairs
                .iter()
                .map(|(p, w)| format!("{p}:{w}"))
                .collect::<Vec<_>>()
                .join(";"),
            Ballot::NegativeVote { positive, negative } => format!("+{positive};-{negative}"),
            _ => ballot
                .parties()
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(";"),
        };
        writer.write_record(&[i.to_string(), policy.name().to_string(), choices])?;
    }
    writer
        .into_inner()
        .map_err(|e| Error::Internal(format!("csv buffer: {e}")))
}
