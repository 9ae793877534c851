//! Append-only dataset store: `root/datasets/<id>/rev-<n>.json`.
//!
//! The id is a prefix of the SHA-256 of the canonical content of the first
//! revision, so ingesting the same file twice yields the same dataset.
//! Revisions are written with `create_new` and never rewritten.

use std::collections::{BTreeMap, HashMap};
use std::fs::{self, OpenOptions};
use std::io::{ErrorKind as IoKind, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::data::{Alternative, AlternativeSet, Label, LabeledSet, ParsedCsv};
use crate::error::{Error, Result};
use crate::geometry::Vector;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoredAlternative {
    pub id: String,
    /// Exact coordinates, `"p/q"` or integers.
    pub coords: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub id: String,
    pub revision: u64,
    pub created_at: String,
    pub criteria: Vec<String>,
    pub alternatives: Vec<StoredAlternative>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<String, Label>>,
}

impl DatasetRecord {
    pub fn alternative_set(&self) -> Result<AlternativeSet> {
        AlternativeSet::new(
            self.alternatives
                .iter()
                .map(|a| Ok(Alternative { id: a.id.clone(), value: Vector::parse(&a.coords)? }))
                .collect::<Result<_>>()?,
        )
    }

    pub fn labeled_set(&self) -> Result<LabeledSet> {
        LabeledSet::new(self.alternative_set()?, self.labels.clone().unwrap_or_default())
    }

    fn content_hash(&self) -> String {
        #[derive(Serialize)]
        struct Canonical<'a> {
            criteria: &'a [String],
            alternatives: &'a [StoredAlternative],
            labels: &'a Option<BTreeMap<String, Label>>,
        }
        let bytes = serde_json::to_vec(&Canonical {
            criteria: &self.criteria,
            alternatives: &self.alternatives,
            labels: &self.labels,
        })
        .expect("plain data serializes");
        let digest = Sha256::digest(&bytes);
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

pub fn stored_alternatives(x: &AlternativeSet) -> Vec<StoredAlternative> {
    x.iter().map(|a| StoredAlternative { id: a.id.clone(), coords: a.value.to_exact_strings() }).collect()
}

fn now_rfc3339() -> String {
    time::OffsetDateTime::now_utc()
        .format(&time::format_description::well_known::Rfc3339)
        .unwrap_or_else(|_| "1970-01-01T00:00:00Z".into())
}

pub struct Store {
    root: PathBuf,
    locks: Mutex<HashMap<String, Arc<Mutex<()>>>>,
}

impl Store {
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(root.join("datasets"))?;
        Ok(Self { root, locks: Mutex::new(HashMap::new()) })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn dir(&self, id: &str) -> Result<PathBuf> {
        // Ids are hex digests; anything else cannot name a stored dataset.
        if id.is_empty() || !id.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(Error::UnknownDataset(id.to_string()));
        }
        Ok(self.root.join("datasets").join(id))
    }

    fn lock_for(&self, id: &str) -> Arc<Mutex<()>> {
        let mut locks = self.locks.lock().unwrap_or_else(|p| p.into_inner());
        locks.entry(id.to_string()).or_default().clone()
    }

    /// Stores a parsed CSV as revision 1. Returns the record and whether it
    /// was newly created; an identical earlier ingest is returned unchanged.
    pub fn ingest(&self, parsed: &ParsedCsv) -> Result<(DatasetRecord, bool)> {
        let mut record = DatasetRecord {
            id: String::new(),
            revision: 1,
            created_at: String::new(),
            criteria: parsed.criteria.clone(),
            alternatives: stored_alternatives(&parsed.alternatives),
            labels: parsed.labels.clone(),
        };
        record.id = record.content_hash();
        let lock = self.lock_for(&record.id);
        let _guard = lock.lock().unwrap_or_else(|p| p.into_inner());
        fs::create_dir_all(self.dir(&record.id)?)?;
        record.created_at = now_rfc3339();
        match self.write_new(&record) {
            Ok(()) => Ok((record, true)),
            Err(Error::RevisionConflict { .. }) => Ok((self.get(&record.id, Some(1))?, false)),
            Err(e) => Err(e),
        }
    }

    fn write_new(&self, record: &DatasetRecord) -> Result<()> {
        let path = self.dir(&record.id)?.join(format!("rev-{}.json", record.revision));
        let mut f = match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == IoKind::AlreadyExists => {
                let current = self.latest_revision(&record.id)?;
                return Err(Error::RevisionConflict { requested: record.revision, current });
            }
            Err(e) => return Err(e.into()),
        };
        let mut text = serde_json::to_string_pretty(record)?;
        text.push('\n');
        f.write_all(text.as_bytes())?;
        f.sync_all()?;
        Ok(())
    }

    pub fn latest_revision(&self, id: &str) -> Result<u64> {
        let dir = self.dir(id)?;
        let entries = match fs::read_dir(&dir) {
            Ok(e) => e,
            Err(e) if e.kind() == IoKind::NotFound => return Err(Error::UnknownDataset(id.to_string())),
            Err(e) => return Err(e.into()),
        };
        let mut latest = 0;
        for entry in entries {
            let name = entry?.file_name();
            let name = name.to_string_lossy();
            if let Some(n) = name.strip_prefix("rev-").and_then(|s| s.strip_suffix(".json")) {
                if let Ok(n) = n.parse::<u64>() {
                    latest = latest.max(n);
                }
            }
        }
        if latest == 0 {
            return Err(Error::UnknownDataset(id.to_string()));
        }
        Ok(latest)
    }

    /// A revision of a dataset; the latest when `revision` is `None`.
    pub fn get(&self, id: &str, revision: Option<u64>) -> Result<DatasetRecord> {
        let latest = self.latest_revision(id)?;
        let rev = revision.unwrap_or(latest);
        if rev == 0 || rev > latest {
            return Err(Error::RevisionConflict { requested: rev, current: latest });
        }
        let text = fs::read_to_string(self.dir(id)?.join(format!("rev-{rev}.json")))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// The latest revision, rejecting any explicitly requested revision that
    /// is not the latest.
    pub fn current(&self, id: &str, revision: Option<u64>) -> Result<DatasetRecord> {
        let latest = self.latest_revision(id)?;
        if let Some(r) = revision {
            if r != latest {
                return Err(Error::RevisionConflict { requested: r, current: latest });
            }
        }
        self.get(id, Some(latest))
    }

    /// Appends a revision with new alternatives. `expected` is the revision
    /// the change was computed against; a newer revision on disk is a conflict.
    pub fn commit(&self, id: &str, expected: u64, x: &AlternativeSet) -> Result<DatasetRecord> {
        let lock = self.lock_for(id);
        let _guard = lock.lock().unwrap_or_else(|p| p.into_inner());
        let prev = self.get(id, Some(expected))?;
        let latest = self.latest_revision(id)?;
        if latest != expected {
            return Err(Error::RevisionConflict { requested: expected, current: latest });
        }
        let labels = prev.labels.as_ref().map(|l| {
            x.ids().map(|i| (i.to_string(), l.get(i).copied().unwrap_or(Label::Unlabeled))).collect()
        });
        let record = DatasetRecord {
            id: id.to_string(),
            revision: expected + 1,
            created_at: now_rfc3339(),
            criteria: prev.criteria,
            alternatives: stored_alternatives(x),
            labels,
        };
        self.write_new(&record)?;
        Ok(record)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::read_csv;

    #[test]
    fn roundtrip_is_exact_and_idempotent() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path()).unwrap();
        let parsed = read_csv("id,a,b\nx,0.1,1/3\ny,2,-1.5e-2\n".as_bytes()).unwrap();
        let (rec, created) = store.ingest(&parsed).unwrap();
        assert!(created);
        assert_eq!(rec.alternative_set().unwrap(), parsed.alternatives);
        let (again, created) = store.ingest(&parsed).unwrap();
        assert!(!created);
        assert_eq!(again, rec);
        assert_eq!(store.get(&rec.id, None).unwrap(), rec);
    }

    #[test]
    fn revisions_conflict() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path()).unwrap();
        let parsed = read_csv("id,a,b\nx,1,2\ny,2,1\n".as_bytes()).unwrap();
        let (rec, _) = store.ingest(&parsed).unwrap();
        let x = rec.alternative_set().unwrap().without(&[]).unwrap();
        assert_eq!(store.commit(&rec.id, 1, &x).unwrap().revision, 2);
        assert!(matches!(store.commit(&rec.id, 1, &x), Err(Error::RevisionConflict { .. })));
        assert!(matches!(store.current(&rec.id, Some(1)), Err(Error::RevisionConflict { .. })));
        assert!(matches!(store.get("abc123", None), Err(Error::UnknownDataset(_))));
        assert!(matches!(store.get("../etc", None), Err(Error::UnknownDataset(_))));
    }
}
