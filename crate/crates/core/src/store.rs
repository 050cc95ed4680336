//! Content-addressed on-disk cache of expensive results.
//!
//! Layout under the root directory:
//! `objects/<sha256>.json` holds an envelope `{kind, params, version, payload}`,
//! `manifest.json` lists every entry, `quarantine/` receives entries that
//! failed validation on load. The hash covers kind, parameters and
//! [`MODULE_VERSION`], so a convention change orphans old entries.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::lfun::LPolynomial;
use crate::ortho::OrthoCensus;
use crate::scan::FamilyStats;

/// Bumped whenever a stored convention changes (trace signs, JSON layout).
pub const MODULE_VERSION: &str = concat!("twistlab-", env!("CARGO_PKG_VERSION"), "+conv1");

pub const STORE_ENV: &str = "TWISTLAB_STORE";

/// Values that can check their own invariants after loading.
pub trait Validate {
    fn validate_stored(&self) -> Result<()>;
}

impl Validate for LPolynomial {
    fn validate_stored(&self) -> Result<()> {
        self.validate()
    }
}

impl Validate for FamilyStats {
    fn validate_stored(&self) -> Result<()> {
        self.check()?;
        for r in &self.records {
            r.l.validate()?;
            if r.rank != r.l.analytic_rank() || r.eps != r.l.eps() {
                return Err(Error::Validation(format!("record {} disagrees with its L", r.alpha)));
            }
        }
        Ok(())
    }
}

impl Validate for OrthoCensus {
    fn validate_stored(&self) -> Result<()> {
        let total: u64 = self.classes.iter().map(|c| c.count).sum();
        if total != self.order || 2 * self.so_order != self.order || crate::ortho::ev_density(self) != self.density {
            return Err(Error::Validation("census counts are inconsistent".into()));
        }
        Ok(())
    }
}

impl Validate for Value {
    fn validate_stored(&self) -> Result<()> {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StoreKey {
    pub kind: String,
    /// Sorted parameter map, part of the hash.
    pub params: BTreeMap<String, Value>,
}

impl StoreKey {
    pub fn new(kind: &str) -> StoreKey {
        StoreKey {
            kind: kind.to_string(),
            params: BTreeMap::new(),
        }
    }

    pub fn param(mut self, name: &str, v: impl Serialize) -> StoreKey {
        self.params
            .insert(name.to_string(), serde_json::to_value(v).expect("serializable parameter"));
        self
    }

    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.kind.as_bytes());
        h.update([0]);
        h.update(serde_json::to_vec(&self.params).unwrap());
        h.update([0]);
        h.update(MODULE_VERSION.as_bytes());
        hex::encode(h.finalize())
    }
}

#[derive(Serialize, Deserialize)]
struct Envelope {
    kind: String,
    params: BTreeMap<String, Value>,
    version: String,
    payload: Value,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub kind: String,
    pub params: BTreeMap<String, Value>,
    pub version: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub entries: BTreeMap<String, ManifestEntry>,
}

/// Result of a lookup.
#[derive(Debug, PartialEq)]
pub enum Lookup<T> {
    Hit(T),
    Absent,
}

impl<T> Lookup<T> {
    pub fn into_option(self) -> Option<T> {
        match self {
            Lookup::Hit(v) => Some(v),
            Lookup::Absent => None,
        }
    }
}

pub struct Store {
    root: PathBuf,
}

impl Store {
    pub fn open(root: impl Into<PathBuf>) -> Result<Store> {
        let root = root.into();
        for d in [root.join("objects"), root.join("quarantine")] {
            fs::create_dir_all(&d).map_err(|e| Error::io(&d, e))?;
        }
        Ok(Store { root })
    }

    /// Opens the store named by `TWISTLAB_STORE`, if set.
    pub fn from_env() -> Result<Option<Store>> {
        match std::env::var_os(STORE_ENV) {
            Some(p) if !p.is_empty() => Store::open(PathBuf::from(p)).map(Some),
            _ => Ok(None),
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn object_path(&self, hash: &str) -> PathBuf {
        self.root.join("objects").join(format!("{hash}.json"))
    }

    fn store_err(key: &StoreKey, e: std::io::Error) -> Error {
        Error::Store { key: format!("{}:{}", key.kind, key.hash()), source: e }
    }

    fn lock(&self) -> Result<File> {
        let path = self.root.join("manifest.lock");
        let f = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&path)
            .map_err(|e| Error::io(&path, e))?;
        f.lock().map_err(|e| Error::io(&path, e))?;
        Ok(f)
    }

    pub fn manifest(&self) -> Result<Manifest> {
        let path = self.root.join("manifest.json");
        match fs::read(&path) {
            Ok(bytes) => Ok(serde_json::from_slice(&bytes)?),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Manifest::default()),
            Err(e) => Err(Error::io(&path, e)),
        }
    }

    fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
        let tmp = path.with_extension("json.tmp");
        {
            let mut f = File::create(&tmp)?;
            f.write_all(bytes)?;
            f.sync_all()?;
        }
        fs::rename(tmp, path)
    }

    /// Idempotent insert.
    pub fn put<T: Serialize>(&self, key: &StoreKey, value: &T) -> Result<()> {
        let hash = key.hash();
        let env = Envelope {
            kind: key.kind.clone(),
            params: key.params.clone(),
            version: MODULE_VERSION.to_string(),
            payload: serde_json::to_value(value)?,
        };
        let bytes = serde_json::to_vec_pretty(&env)?;
        let _guard = self.lock()?;
        let path = self.object_path(&hash);
        if fs::read(&path).ok().as_deref() != Some(&bytes[..]) {
            Self::write_atomic(&path, &bytes).map_err(|e| Self::store_err(key, e))?;
        }
        let mut manifest = self.manifest()?;
        manifest.entries.insert(
            hash,
            ManifestEntry {
                kind: key.kind.clone(),
                params: key.params.clone(),
                version: MODULE_VERSION.to_string(),
            },
        );
        let mpath = self.root.join("manifest.json");
        Self::write_atomic(&mpath, &serde_json::to_vec_pretty(&manifest)?).map_err(|e| Error::io(&mpath, e))?;
        Ok(())
    }

    /// Validated lookup. Entries that fail to parse or validate are moved to
    /// `quarantine/` and reported as an error.
    pub fn get<T: DeserializeOwned + Validate>(&self, key: &StoreKey) -> Result<Lookup<T>> {
        let hash = key.hash();
        let path = self.object_path(&hash);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Lookup::Absent),
            Err(e) => return Err(Self::store_err(key, e)),
        };
        let checked = (|| -> Result<T> {
            let env: Envelope = serde_json::from_slice(&bytes)?;
            if env.version != MODULE_VERSION || env.kind != key.kind || env.params != key.params {
                return Err(Error::Validation("envelope does not match its key".into()));
            }
            let v: T = serde_json::from_value(env.payload)?;
            v.validate_stored()?;
            Ok(v)
        })();
        match checked {
            Ok(v) => Ok(Lookup::Hit(v)),
            Err(err) => {
                self.quarantine(&hash)?;
                Err(Error::Validation(format!("store entry {}:{hash} quarantined ({err})", key.kind)))
            }
        }
    }

    fn quarantine(&self, hash: &str) -> Result<()> {
        let _guard = self.lock()?;
        let from = self.object_path(hash);
        let to = self.root.join("quarantine").join(format!("{hash}.json"));
        fs::rename(&from, &to).map_err(|e| Error::io(&from, e))?;
        let mut manifest = self.manifest()?;
        if manifest.entries.remove(hash).is_some() {
            let mpath = self.root.join("manifest.json");
            Self::write_atomic(&mpath, &serde_json::to_vec_pretty(&manifest)?)
                .map_err(|e| Error::io(&mpath, e))?;
        }
        Ok(())
    }

    /// Returns the stored value or computes, stores and returns it.
    pub fn get_or_compute<T, F>(&self, key: &StoreKey, compute: F) -> Result<T>
    where
        T: Serialize + DeserializeOwned + Validate,
        F: FnOnce() -> Result<T>,
    {
        if let Lookup::Hit(v) = self.get(key)? {
            return Ok(v);
        }
        let v = compute()?;
        self.put(key, &v)?;
        Ok(v)
    }

    pub fn quarantined(&self) -> Result<Vec<String>> {
        let dir = self.root.join("quarantine");
        let mut out: Vec<String> = fs::read_dir(&dir)
            .map_err(|e| Error::io(&dir, e))?
            .filter_map(|e| e.ok())
            .map(|e| e.file_name().to_string_lossy().into_owned())
            .collect();
        out.sort();
        Ok(out)
    }
}

/// Uses the store when present, otherwise computes directly.
pub fn cached<T, F>(store: Option<&Store>, key: &StoreKey, compute: F) -> Result<T>
where
    T: Serialize + DeserializeOwned + Validate,
    F: FnOnce() -> Result<T>,
{
    match store {
        Some(s) => s.get_or_compute(key, compute),
        None => compute(),
    }
}
