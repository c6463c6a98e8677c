//! JSON-lines catalog of measured codes, keyed by `(q, m, delta, h)`.

use std::fs;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bch::BchCode;
use crate::distance::{
    classify_singleton, min_distance, sphere_packing_check, Distance, DistanceReport, Method,
    SearchConfig, SingletonClass,
};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("corrupt record on line {line}: {reason}")]
    CorruptRecord { line: usize, reason: String },
    #[error("record for {key:?} claims d = {new}, stored d = {old} is at least as exact")]
    NotMoreExact { key: (u64, u32, u64, u64), old: Distance, new: Distance },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub q: u64,
    pub m: u32,
    pub delta: u64,
    pub h: u64,
    pub n: u64,
    pub k: u64,
    pub d: Distance,
    pub method: Method,
    /// Certified distance-optimal by the sphere-packing bound.
    pub optimality_flag: bool,
    pub singleton_class: Option<SingletonClass>,
    /// Seconds since the Unix epoch; 0 in deterministic runs.
    pub timestamp: u64,
}

impl CatalogRecord {
    pub fn key(&self) -> (u64, u32, u64, u64) {
        (self.q, self.m, self.delta, self.h)
    }

    pub fn from_report(report: &DistanceReport, timestamp: u64) -> Self {
        let (optimality_flag, singleton_class) = match report.d {
            Distance::Exact(d) if report.k > 0 => (
                sphere_packing_check(report.n, report.k, d, report.q)
                    .map(|v| v.distance_optimal)
                    .unwrap_or(false),
                Some(classify_singleton(report.n, report.k, d)),
            ),
            _ => (false, None),
        };
        CatalogRecord {
            q: report.q,
            m: report.m,
            delta: report.delta,
            h: report.h,
            n: report.n,
            k: report.k,
            d: report.d,
            method: report.method,
            optimality_flag,
            singleton_class,
            timestamp,
        }
    }
}

/// Interval of distances a claim allows; `None` for the zero code.
fn interval(d: Distance) -> Option<(u64, Option<u64>)> {
    match d {
        Distance::Exact(x) => Some((x, Some(x))),
        Distance::Above(w) => Some((w + 1, None)),
        Distance::NoNonzeroCodewords => None,
    }
}

/// `new` is the same claim as `old` or a strictly narrower one.
fn refines(old: Distance, new: Distance) -> bool {
    match (interval(old), interval(new)) {
        (None, None) => true,
        (Some((a, ah)), Some((b, bh))) => {
            b >= a
                && match (ah, bh) {
                    (None, _) => true,
                    (Some(x), Some(y)) => y <= x,
                    (Some(_), None) => false,
                }
        }
        _ => false,
    }
}

pub fn read(path: &Path) -> Result<Vec<CatalogRecord>, CatalogError> {
    let file = match fs::File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line)
            .map_err(|e| CatalogError::CorruptRecord { line: idx + 1, reason: e.to_string() })?;
        out.push(rec);
    }
    Ok(out)
}

/// Writes the whole catalog, sorted by key.
pub fn write(path: &Path, records: &[CatalogRecord]) -> Result<(), CatalogError> {
    let mut sorted = records.to_vec();
    sorted.sort_by_key(|r| r.key());
    let mut buf = Vec::new();
    for r in &sorted {
        serde_json::to_writer(&mut buf, r).map_err(io::Error::from)?;
        buf.push(b'\n');
    }
    let tmp = path.with_extension("jsonl.tmp");
    fs::File::create(&tmp)?.write_all(&buf)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MergeOutcome {
    Inserted,
    Replaced,
    Unchanged,
}

/// Adds `rec`, replacing an existing record only with a strictly narrower
/// distance claim.
pub fn merge(records: &mut Vec<CatalogRecord>, rec: CatalogRecord) -> Result<MergeOutcome, CatalogError> {
    match records.iter_mut().find(|r| r.key() == rec.key()) {
        None => {
            records.push(rec);
            Ok(MergeOutcome::Inserted)
        }
        Some(old) if old.d == rec.d => Ok(MergeOutcome::Unchanged),
        Some(old) if refines(old.d, rec.d) => {
            *old = rec;
            Ok(MergeOutcome::Replaced)
        }
        Some(old) => Err(CatalogError::NotMoreExact { key: rec.key(), old: old.d, new: rec.d }),
    }
}

/// Adds one record to the file at `path`.
pub fn add(path: &Path, rec: CatalogRecord) -> Result<MergeOutcome, CatalogError> {
    let mut records = read(path)?;
    let outcome = merge(&mut records, rec)?;
    if outcome != MergeOutcome::Unchanged {
        write(path, &records)?;
    }
    Ok(outcome)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckStatus {
    Ok,
    /// Dimension confirmed; distance not re-measured.
    DimensionOnly,
    Failed(String),
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub key: (u64, u32, u64, u64),
    pub status: CheckStatus,
}

/// Rebuilds every record's code and checks `n`, `k`, and the derived flags.
/// With `remeasure`, distances are searched again until `time_budget` runs out.
pub fn check(
    records: &[CatalogRecord],
    remeasure: bool,
    time_budget: Duration,
    config: &SearchConfig,
) -> Vec<CheckResult> {
    let start = Instant::now();
    records
        .iter()
        .map(|r| CheckResult { key: r.key(), status: check_one(r, remeasure && start.elapsed() < time_budget, config) })
        .collect()
}

fn check_one(r: &CatalogRecord, remeasure: bool, config: &SearchConfig) -> CheckStatus {
    let code = match BchCode::build(r.q, r.m, r.delta, r.h) {
        Ok(c) => c,
        Err(e) => return CheckStatus::Failed(e.to_string()),
    };
    if code.n() != r.n || code.dimension() as u64 != r.k {
        return CheckStatus::Failed(format!(
            "stored [n={}, k={}], rebuilt [n={}, k={}]",
            r.n,
            r.k,
            code.n(),
            code.dimension()
        ));
    }
    let derived = CatalogRecord::from_report(
        &DistanceReport {
            q: r.q,
            m: r.m,
            delta: r.delta,
            h: r.h,
            n: r.n,
            k: r.k,
            method: r.method,
            w_explored: 0,
            d: r.d,
            witness: None,
            elapsed: Duration::ZERO,
        },
        r.timestamp,
    );
    if derived.optimality_flag != r.optimality_flag || derived.singleton_class != r.singleton_class {
        return CheckStatus::Failed("optimality or Singleton class does not follow from [n, k, d]".into());
    }
    if !remeasure {
        return CheckStatus::DimensionOnly;
    }
    let w_max = match r.d {
        Distance::Exact(d) => d,
        Distance::Above(w) => w,
        Distance::NoNonzeroCodewords => code.n(),
    };
    let method = if r.delta == 3 { Method::MitmSyndrome } else { Method::MessageEnum };
    match min_distance(&code, w_max.max(r.delta - 1), method, config) {
        Ok(rep) if rep.d == r.d => CheckStatus::Ok,
        Ok(rep) => CheckStatus::Failed(format!("stored d = {}, measured {}", r.d, rep.d)),
        Err(e) => CheckStatus::Failed(e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(h: u64, d: Distance) -> CatalogRecord {
        CatalogRecord {
            q: 2,
            m: 5,
            delta: 3,
            h,
            n: 33,
            k: 13,
            d,
            method: Method::MitmSyndrome,
            optimality_flag: false,
            singleton_class: d.exact().map(|d| classify_singleton(33, 13, d)),
            timestamp: 0,
        }
    }

    #[test]
    fn refinement_rule() {
        assert!(refines(Distance::Above(5), Distance::Exact(10)));
        assert!(refines(Distance::Above(5), Distance::Above(7)));
        assert!(!refines(Distance::Exact(10), Distance::Exact(9)));
        assert!(!refines(Distance::Exact(10), Distance::Above(5)));
        assert!(!refines(Distance::Above(5), Distance::Exact(4)));
    }

    #[test]
    fn merge_is_monotone() {
        let mut recs = Vec::new();
        assert_eq!(merge(&mut recs, record(15, Distance::Above(5))).unwrap(), MergeOutcome::Inserted);
        assert_eq!(merge(&mut recs, record(15, Distance::Exact(10))).unwrap(), MergeOutcome::Replaced);
        assert_eq!(merge(&mut recs, record(15, Distance::Exact(10))).unwrap(), MergeOutcome::Unchanged);
        assert!(matches!(
            merge(&mut recs, record(15, Distance::Exact(9))),
            Err(CatalogError::NotMoreExact { .. })
        ));
        assert_eq!(recs.len(), 1);
    }

    #[test]
    fn file_round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cat.jsonl");
        assert!(read(&path).unwrap().is_empty());
        add(&path, record(15, Distance::Exact(10))).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 1);
        add(&path, record(3, Distance::Above(4))).unwrap();
        let back = read(&path).unwrap();
        assert_eq!(back, vec![record(3, Distance::Above(4)), record(15, Distance::Exact(10))]);
        fs::write(&path, format!("{}\nnot json\n", serde_json::to_string(&back[0]).unwrap())).unwrap();
        assert!(matches!(read(&path), Err(CatalogError::CorruptRecord { line: 2, .. })));
    }

    #[test]
    fn check_catches_wrong_dimension() {
        let good = record(15, Distance::Exact(10));
        let mut bad = good.clone();
        bad.k = 14;
        bad.h = 14;
        let res = check(&[good, bad], true, Duration::from_secs(60), &SearchConfig::default());
        assert_eq!(res[0].status, CheckStatus::Ok);
        assert!(matches!(res[1].status, CheckStatus::Failed(_)));
    }
}
