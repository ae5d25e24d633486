//! On-disk cache of reduction tables.
//!
//! A cache file is three header lines followed by the JSON payload:
//!
//! ```text
//! m0n-cache 1
//! key n=6 d=2 conv=asc relations=<hex>
//! sha256 <hex of payload>
//! {...}
//! ```

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use m0n_core::reduction::TableData;
use m0n_core::{generate_relations, OrderConvention, ReductionTable};
use sha2::{Digest, Sha256};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "m0n-cache";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheKey {
    pub n: usize,
    pub d: usize,
    pub conv: OrderConvention,
    pub relations: String,
}

impl CacheKey {
    pub fn line(&self) -> String {
        format!("key n={} d={} conv={} relations={}", self.n, self.d, self.conv.as_str(), self.relations)
    }

    fn file_name(&self) -> String {
        format!("table-n{}-d{}-{}-{}.m0n", self.n, self.d, self.conv.as_str(), &self.relations[..16])
    }
}

/// Content hash of the relation set used to build tables for `n`.
pub fn relation_hash(n: usize) -> anyhow::Result<String> {
    let rels = generate_relations(n, n.saturating_sub(3))?;
    let mut h = Sha256::new();
    for r in &rels.relations {
        h.update(r.family.as_str());
        h.update(b" ");
        h.update(r.poly.render());
        h.update(b"\n");
    }
    Ok(hex::encode(h.finalize()))
}

#[derive(Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit(TableData),
    Miss,
    /// The file exists but is stale or damaged.
    Invalid(String),
}

#[derive(Clone, Debug)]
pub struct TableCache {
    dir: Option<PathBuf>,
}

fn warn(msg: &str) {
    eprintln!("warning: {msg}");
}

impl TableCache {
    pub fn disabled() -> Self {
        TableCache { dir: None }
    }

    /// Opens (creating if needed) a cache directory. An unusable directory
    /// disables caching with a warning.
    pub fn open(dir: &Path) -> Self {
        if let Err(e) = fs::create_dir_all(dir) {
            warn(&format!("cache disabled, cannot create {}: {e}", dir.display()));
            return Self::disabled();
        }
        let probe = dir.join(format!(".probe-{}", std::process::id()));
        match fs::write(&probe, b"") {
            Ok(()) => {
                let _ = fs::remove_file(&probe);
                TableCache { dir: Some(dir.to_path_buf()) }
            }
            Err(e) => {
                warn(&format!("cache disabled, {} is not writable: {e}", dir.display()));
                Self::disabled()
            }
        }
    }

    pub fn is_enabled(&self) -> bool {
        self.dir.is_some()
    }

    pub fn path(&self, key: &CacheKey) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(key.file_name()))
    }

    pub fn lookup(&self, key: &CacheKey) -> Lookup {
        let Some(path) = self.path(key) else { return Lookup::Miss };
        let Ok(bytes) = fs::read(&path) else { return Lookup::Miss };
        match decode(&bytes, key) {
            Ok(data) => Lookup::Hit(data),
            Err(why) => Lookup::Invalid(why),
        }
    }

    /// Returns a cached table, or `None` when it must be recomputed.
    pub fn load(&self, key: &CacheKey) -> Option<ReductionTable> {
        match self.lookup(key) {
            Lookup::Hit(data) => match ReductionTable::from_data(data) {
                Ok(t) => Some(t),
                Err(e) => {
                    warn(&format!("ignoring cached table: {e}"));
                    None
                }
            },
            Lookup::Miss => None,
            Lookup::Invalid(why) => {
                warn(&format!("ignoring cached table: {why}"));
                None
            }
        }
    }

    pub fn store(&self, key: &CacheKey, table: &ReductionTable) {
        let Some(path) = self.path(key) else { return };
        if let Err(e) = write_atomic(&path, &encode(key, &table.to_data())) {
            warn(&format!("could not write {}: {e}", path.display()));
        }
    }
}

pub fn encode(key: &CacheKey, data: &TableData) -> Vec<u8> {
    let payload = serde_json::to_vec(data).expect("table data serializes");
    let mut out = format!(
        "{MAGIC} {FORMAT_VERSION}\n{}\nsha256 {}\n",
        key.line(),
        hex::encode(Sha256::digest(&payload))
    )
    .into_bytes();
    out.extend_from_slice(&payload);
    out
}

pub fn decode(bytes: &[u8], key: &CacheKey) -> Result<TableData, String> {
    let mut rest = bytes;
    let mut header = Vec::new();
    for _ in 0..3 {
        let end = rest.iter().position(|&b| b == b'\n').ok_or("truncated header")?;
        header.push(std::str::from_utf8(&rest[..end]).map_err(|_| "header is not UTF-8")?);
        rest = &rest[end + 1..];
    }
    if header[0] != format!("{MAGIC} {FORMAT_VERSION}") {
        return Err(format!("format version mismatch: {}", header[0]));
    }
    if header[1] != key.line() {
        return Err("key mismatch".into());
    }
    let sum = header[2].strip_prefix("sha256 ").ok_or("missing checksum")?;
    if sum != hex::encode(Sha256::digest(rest)) {
        return Err("checksum mismatch".into());
    }
    serde_json::from_slice(rest).map_err(|e| format!("bad payload: {e}"))
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let tmp = dir.join(format!(
        ".{}.{}.tmp",
        path.file_name().and_then(|s| s.to_str()).unwrap_or("entry"),
        std::process::id()
    ));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use m0n_core::{parse_polynomial, Budget};

    fn key(conv: OrderConvention) -> CacheKey {
        CacheKey { n: 6, d: 2, conv, relations: relation_hash(6).unwrap() }
    }

    #[test]
    fn roundtrip_preserves_normal_forms() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::open(dir.path());
        let k = key(OrderConvention::Asc);
        let table = ReductionTable::build(6, 2, OrderConvention::Asc, &Budget::unlimited()).unwrap();
        cache.store(&k, &table);
        let back = cache.load(&k).unwrap();
        for text in ["D{1,2,3,4}^2", "(D{1,2,3,4} + D{2,3,4})^2", "a1*D{1,2,3} - a3*D{1,2,3}"] {
            let p = parse_polynomial(text, 6).unwrap();
            assert_eq!(table.normal_form(&p).unwrap(), back.normal_form(&p).unwrap());
        }
    }

    #[test]
    fn convention_is_part_of_the_key() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::open(dir.path());
        let table = ReductionTable::build(6, 2, OrderConvention::Asc, &Budget::unlimited()).unwrap();
        cache.store(&key(OrderConvention::Asc), &table);
        assert_eq!(cache.lookup(&key(OrderConvention::Desc)), Lookup::Miss);
    }

    #[test]
    fn damaged_files_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::open(dir.path());
        let k = key(OrderConvention::Asc);
        let table = ReductionTable::build(6, 2, OrderConvention::Asc, &Budget::unlimited()).unwrap();
        cache.store(&k, &table);
        let path = cache.path(&k).unwrap();
        let bytes = fs::read(&path).unwrap();
        fs::write(&path, &bytes[..bytes.len() - 10]).unwrap();
        assert_eq!(cache.lookup(&k), Lookup::Invalid("checksum mismatch".into()));
        assert!(cache.load(&k).is_none());

        let other = String::from_utf8(bytes).unwrap().replacen("m0n-cache 1", "m0n-cache 0", 1);
        fs::write(&path, other).unwrap();
        assert!(matches!(cache.lookup(&k), Lookup::Invalid(_)));
    }

    #[test]
    fn unwritable_directory_disables_cache() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("plain-file");
        fs::write(&file, b"x").unwrap();
        let cache = TableCache::open(&file.join("sub"));
        assert!(!cache.is_enabled());
        assert!(cache.load(&key(OrderConvention::Asc)).is_none());
    }
}
