//! Append-only results database: one self-contained JSON record per line.
//!
//! Every load re-verifies the stored certificates, so exactness claims stay
//! auditable no matter where the file has been.

use std::io::Write;
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use schur_core::solver::{SchurNumberResult, SchurStatus, SolverStats};
use schur_core::witness::is_valid_coloring;
use schur_core::Coloring;

use crate::files::{EnumerationField, FileError};

#[derive(Debug, thiserror::Error)]
pub enum DbError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed record: {source}")]
    Malformed {
        path: String,
        line: usize,
        source: serde_json::Error,
    },
    #[error("{path}:{line}: integrity: {reason}")]
    Integrity {
        path: String,
        line: usize,
        reason: String,
    },
    #[error(transparent)]
    File(#[from] FileError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordStatus {
    Exact,
    LowerBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Engine {
    #[serde(rename = "native")]
    Native,
    #[serde(rename = "cnf-external")]
    CnfExternal,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordStats {
    pub nodes: u64,
    pub backtracks: u64,
    pub wall_millis: u64,
    pub workers: u32,
}

impl From<&SolverStats> for RecordStats {
    fn from(s: &SolverStats) -> Self {
        RecordStats {
            nodes: s.nodes,
            backtracks: s.backtracks,
            wall_millis: s.wall.as_millis() as u64,
            workers: s.workers,
        }
    }
}

/// One certified computation result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub r: u32,
    pub k: usize,
    pub enumeration: EnumerationField,
    pub status: RecordStatus,
    pub value: usize,
    pub certificate: Option<Vec<u32>>,
    pub engine: Engine,
    pub stats: RecordStats,
    pub timestamp: DateTime<Utc>,
}

impl ResultRecord {
    /// Builds a record from a finished computation; `Vacuous` results have
    /// no certified value and yield `None`.
    pub fn from_result(
        result: &SchurNumberResult,
        enumeration: EnumerationField,
        engine: Engine,
    ) -> Option<ResultRecord> {
        let (status, value) = match result.status {
            SchurStatus::Exact(v) => (RecordStatus::Exact, v),
            SchurStatus::LowerBound(v) => (RecordStatus::LowerBound, v),
            SchurStatus::Vacuous => return None,
        };
        Some(ResultRecord {
            r: result.r,
            k: result.k,
            enumeration,
            status,
            value,
            certificate: result.certificate.as_ref().map(|c| c.colors().to_vec()),
            engine,
            stats: RecordStats::from(&result.stats),
            timestamp: Utc::now(),
        })
    }

    /// Length the certificate must have: `value - 1` for exact records,
    /// `value` for lower bounds.
    pub fn certificate_length(&self) -> usize {
        match self.status {
            RecordStatus::Exact => self.value - 1,
            RecordStatus::LowerBound => self.value,
        }
    }

    /// Re-verifies the stored certificate against the record's enumeration.
    pub fn verify_certificate(&self) -> Result<(), String> {
        let colors = self
            .certificate
            .as_ref()
            .ok_or("record carries no certificate")?;
        if colors.len() != self.certificate_length() {
            return Err(format!(
                "certificate has length {} but must have length {}",
                colors.len(),
                self.certificate_length()
            ));
        }
        let enumeration = self
            .enumeration
            .to_enumeration()
            .map_err(|e| e.to_string())?;
        let prefix = enumeration
            .prefix(colors.len())
            .map_err(|e| e.to_string())?;
        let coloring = Coloring::new(self.r, colors.clone()).map_err(|e| e.to_string())?;
        match is_valid_coloring(&prefix, &coloring, self.k) {
            Ok(true) => Ok(()),
            Ok(false) => Err("certificate admits a witness".into()),
            Err(e) => Err(e.to_string()),
        }
    }
}

/// Appends one record as a single line; the write is a single `write_all`
/// on a file opened in append mode.
pub fn append_db(path: &Path, record: &ResultRecord) -> Result<(), DbError> {
    let mut line = serde_json::to_string(record).expect("serializable");
    line.push('\n');
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|source| DbError::Io {
            path: path.display().to_string(),
            source,
        })?;
    file.write_all(line.as_bytes()).map_err(|source| DbError::Io {
        path: path.display().to_string(),
        source,
    })?;
    file.flush().map_err(|source| DbError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Loads all records, re-verifying every certificate.
pub fn load_db(path: &Path) -> Result<Vec<ResultRecord>, DbError> {
    let text = std::fs::read_to_string(path).map_err(|source| DbError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut records = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let record: ResultRecord =
            serde_json::from_str(line).map_err(|source| DbError::Malformed {
                path: path.display().to_string(),
                line: line_no,
                source,
            })?;
        record
            .verify_certificate()
            .map_err(|reason| DbError::Integrity {
                path: path.display().to_string(),
                line: line_no,
                reason,
            })?;
        records.push(record);
    }
    Ok(records)
}

/// Cross-record consistency: a lower bound at or above an exact value for
/// the same key contradicts it (`LowerBound(v)` certifies `S > v`).
pub fn check_consistency(records: &[ResultRecord]) -> Vec<String> {
    let mut issues = Vec::new();
    for exact in records.iter().filter(|r| r.status == RecordStatus::Exact) {
        for lb in records.iter().filter(|r| {
            r.status == RecordStatus::LowerBound
                && r.r == exact.r
                && r.k == exact.k
                && r.enumeration == exact.enumeration
        }) {
            if lb.value >= exact.value {
                issues.push(format!(
                    "S({},{}) has exact value {} but a lower-bound record claims > {}",
                    exact.r, exact.k, exact.value, lb.value
                ));
            }
        }
    }
    issues
}

#[cfg(test)]
mod tests {
    use super::*;
    use schur_core::solver::compute_schur_number;
    use schur_core::Enumeration;

    fn record_for(r: u32, k: usize) -> ResultRecord {
        let result = compute_schur_number(r, k, 16, &Enumeration::natural()).unwrap();
        ResultRecord::from_result(&result, EnumerationField::natural(), Engine::Native).unwrap()
    }

    #[test]
    fn append_then_load_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.jsonl");
        let a = record_for(1, 1);
        let b = record_for(2, 1);
        append_db(&path, &a).unwrap();
        append_db(&path, &b).unwrap();
        let loaded = load_db(&path).unwrap();
        assert_eq!(loaded, vec![a, b]);
    }

    #[test]
    fn corrupted_certificate_is_integrity_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.jsonl");
        let mut record = record_for(2, 1);
        // certificate of S(2,1)=5 has length 4; corrupt it into a witness
        record.certificate = Some(vec![1, 1, 2, 2]);
        append_db(&path, &record).unwrap();
        match load_db(&path) {
            Err(DbError::Integrity { line: 1, .. }) => {}
            other => panic!("expected integrity error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.jsonl");
        append_db(&path, &record_for(1, 1)).unwrap();
        let mut text = std::fs::read_to_string(&path).unwrap();
        text.push_str("{not json\n");
        std::fs::write(&path, text).unwrap();
        match load_db(&path) {
            Err(DbError::Malformed { line: 2, .. }) => {}
            other => panic!("expected malformed error, got {other:?}"),
        }
    }

    #[test]
    fn stale_lower_bound_is_consistent() {
        let exact = record_for(2, 1);
        // a lower bound of 4 (S > 4) agrees with the exact value 5
        let result = compute_schur_number(2, 1, 4, &Enumeration::natural()).unwrap();
        let lb =
            ResultRecord::from_result(&result, EnumerationField::natural(), Engine::Native)
                .unwrap();
        assert_eq!(lb.status, RecordStatus::LowerBound);
        assert_eq!(lb.value, 4);
        assert!(check_consistency(&[exact.clone(), lb]).is_empty());
        // a lower bound equal to the exact value contradicts it
        let mut bad = record_for(2, 1);
        bad.status = RecordStatus::LowerBound;
        bad.value = 5;
        bad.certificate = None;
        let issues = check_consistency(&[exact, bad]);
        assert_eq!(issues.len(), 1);
    }
}
