//! Append-only JSON-lines store of relation verdicts.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::relation::{RelationEngine, Verdict};
use super::symbols::MotivicCombination;
use crate::error::Result;

/// Format version written into every record.
pub const DB_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationRecord {
    /// Canonical (linearized) text form of the combination.
    pub combination: String,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub precision: u32,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub version: u32,
}

/// Single writer, any number of readers; records are only ever appended.
#[derive(Clone, Debug)]
pub struct RelationDb {
    path: PathBuf,
}

impl RelationDb {
    pub fn open(path: impl Into<PathBuf>) -> Self {
        Self { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn records(&self) -> Result<Vec<RelationRecord>> {
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e.into()),
        };
        let mut out = Vec::new();
        for line in BufReader::new(file).lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            out.push(serde_json::from_str(&line)?);
        }
        Ok(out)
    }

    /// Latest decided record for the combination at precision at least `precision`.
    pub fn lookup(&self, combination: &MotivicCombination, precision: u32) -> Result<Option<RelationRecord>> {
        let key = canonical_key(combination);
        Ok(self
            .records()?
            .into_iter()
            .rev()
            .find(|r| r.combination == key && r.precision >= precision && !matches!(r.verdict, Verdict::Undecided { .. })))
    }

    pub fn append(&self, record: &RelationRecord) -> Result<()> {
        if let Some(dir) = self.path.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        writeln!(f, "{}", serde_json::to_string(record)?)?;
        Ok(())
    }

    /// Runs the checker unless a usable verdict is stored; new verdicts are appended.
    pub fn check(&self, engine: &RelationEngine, xi: &MotivicCombination) -> Result<(Verdict, bool)> {
        if let Some(r) = self.lookup(xi, engine.digits())? {
            return Ok((r.verdict, true));
        }
        let verdict = engine.relation_check(xi)?;
        self.append(&RelationRecord {
            combination: canonical_key(xi),
            verdict: verdict.clone(),
            precision: engine.digits(),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            version: DB_VERSION,
        })?;
        Ok((verdict, false))
    }
}

pub fn canonical_key(xi: &MotivicCombination) -> String {
    xi.linearize().to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn roundtrip_and_memo() {
        let dir = std::env::temp_dir().join(format!("mzv-db-{}", std::process::id()));
        let db = RelationDb::open(dir.join("relations.jsonl"));
        let engine = RelationEngine::new(30);
        let xi = MotivicCombination::parse("z(2)^2").unwrap();
        let (v, cached) = db.check(&engine, &xi).unwrap();
        assert_eq!(v, Verdict::Holds { c: rat(5, 2) });
        assert!(!cached);
        let (v2, cached) = db.check(&engine, &xi).unwrap();
        assert_eq!(v2, v);
        assert!(cached);
        assert_eq!(db.records().unwrap().len(), 1);
        std::fs::remove_dir_all(dir).unwrap();
    }
}
