//! Append-only JSONL cache of generalized Bernoulli numbers.
//!
//! Each line holds one `B_{j,χ}` keyed by the character `(p, m, exponents)`
//! and the Bernoulli index `j`. A later line with the same key replaces an
//! earlier one. Only the thread that owns the sweep writes to the file.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::bernoulli::BernoulliCache;
use crate::characters::{CharacterKey, DirichletCharacter};
use crate::cyclotomic::CyclotomicElement;

/// Environment variable naming the directory of the default cache file.
pub const CACHE_DIR_ENV: &str = "LCONG_CACHE_DIR";
pub const CACHE_FILE: &str = "generalized-bernoulli.jsonl";

/// The cache path used when none is configured: `$LCONG_CACHE_DIR/…` if the
/// variable is set, otherwise `.lcong-cache/…` under the working directory.
pub fn default_cache_path() -> PathBuf {
    std::env::var_os(CACHE_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(".lcong-cache"))
        .join(CACHE_FILE)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CacheRecord {
    pub p: u64,
    pub m: u32,
    pub exponents: Vec<u64>,
    pub bernoulli_index: u64,
    pub value: CyclotomicElement,
}

impl CacheRecord {
    pub fn key(&self) -> (CharacterKey, u64) {
        (
            CharacterKey { p: self.p, m: self.m, exponents: self.exponents.clone() },
            self.bernoulli_index,
        )
    }
}

/// Contents of a cache file after last-entry-wins merging.
#[derive(Debug, Default)]
pub struct CacheContents {
    pub entries: BTreeMap<(CharacterKey, u64), CyclotomicElement>,
    pub lines: usize,
    /// `(line number, description)` for lines that do not parse.
    pub corrupt: Vec<(usize, String)>,
}

#[derive(Clone, Debug)]
pub struct FileCache {
    path: PathBuf,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyOutcome {
    pub entries: usize,
    pub checked: usize,
    /// Keys whose stored value differs from the recomputation.
    pub mismatches: Vec<String>,
    pub corrupt: Vec<String>,
}

impl FileCache {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Self { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn io(&self) -> impl Fn(std::io::Error) -> CliError + '_ {
        move |e| CliError::Cache(format!("{}: {e}", self.path.display()))
    }

    /// Reads the file; a missing file is an empty cache.
    pub fn read(&self) -> Result<CacheContents, CliError> {
        let mut out = CacheContents::default();
        let file = match std::fs::File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
            Err(e) => return Err(self.io()(e)),
        };
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(self.io())?;
            if line.trim().is_empty() {
                continue;
            }
            out.lines += 1;
            match serde_json::from_str::<CacheRecord>(&line) {
                Ok(rec) => {
                    let (key, j) = rec.key();
                    out.entries.insert((key, j), rec.value);
                }
                Err(e) => {
                    // name the key if the line is valid JSON with the key fields
                    let key = serde_json::from_str::<serde_json::Value>(&line)
                        .ok().map(|v| format!("{}^{}:{} j={}", v["p"], v["m"], v["exponents"], v["bernoulli_index"]))
                        .unwrap_or_else(|| "?".into());
                    out.corrupt.push((i + 1, format!("{key}: {e}")));
                }
            }
        }
        Ok(out)
    }

    /// Reads the file and seeds `cache`. Any corrupt line is an error.
    pub fn load_into(&self, cache: &BernoulliCache) -> Result<CacheContents, CliError> {
        let contents = self.read()?;
        if let Some((line, what)) = contents.corrupt.first() {
            return Err(CliError::Cache(format!("{} line {line}: {what}", self.path.display())));
        }
        for ((key, j), value) in &contents.entries {
            cache.insert_generalized(key.clone(), *j, value.clone());
        }
        Ok(contents)
    }

    pub fn append(&self, records: &[CacheRecord]) -> Result<(), CliError> {
        if records.is_empty() {
            return Ok(());
        }
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(self.io())?;
        }
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path).map_err(self.io())?;
        let mut buf = String::new();
        for r in records {
            buf += &serde_json::to_string(r).map_err(|e| CliError::Internal(e.to_string()))?;
            buf.push('\n');
        }
        f.write_all(buf.as_bytes()).map_err(self.io())
    }

    /// Appends every entry of `cache` that the file does not already hold with the same value.
    pub fn append_new(&self, cache: &BernoulliCache, known: &CacheContents) -> Result<usize, CliError> {
        let fresh: Vec<CacheRecord> = cache
            .generalized_entries()
            .into_iter()
            .filter(|(key, j, v)| known.entries.get(&(key.clone(), *j)) != Some(v))
            .map(|(key, j, value)| CacheRecord { p: key.p, m: key.m, exponents: key.exponents, bernoulli_index: j, value })
            .collect();
        self.append(&fresh)?;
        Ok(fresh.len())
    }

    pub fn clear(&self) -> Result<(), CliError> {
        match std::fs::remove_file(&self.path) {
            Err(e) if e.kind() != std::io::ErrorKind::NotFound => Err(self.io()(e)),
            _ => Ok(()),
        }
    }

    /// Recomputes up to `sample` entries, evenly spaced in key order, with a fresh table.
    pub fn verify(&self, sample: usize) -> Result<VerifyOutcome, CliError> {
        let contents = self.read()?;
        let mut out = VerifyOutcome {
            entries: contents.entries.len(),
            corrupt: contents.corrupt.iter().map(|(l, w)| format!("line {l}: {w}")).collect(),
            ..VerifyOutcome::default()
        };
        let n = contents.entries.len();
        let take = sample.min(n);
        let fresh = BernoulliCache::new();
        for (i, ((key, j), stored)) in contents.entries.iter().enumerate() {
            if take == 0 || i * take / n == (i + 1) * take / n {
                continue;
            }
            out.checked += 1;
            let label = format!("{key} j={j}");
            match DirichletCharacter::from_key(key) {
                Ok(chi) => {
                    if &fresh.generalized(*j, &chi) != stored {
                        out.mismatches.push(label);
                    }
                }
                Err(e) => out.corrupt.push(format!("{label}: {e}")),
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{build_unit_group, make_character};

    #[test]
    fn round_trip_last_entry_wins_and_verify() {
        let dir = tempfile::tempdir().unwrap();
        let fc = FileCache::new(dir.path().join("sub/c.jsonl"));
        assert_eq!(fc.read().unwrap().entries.len(), 0);
        let chi8 = make_character(&build_unit_group(2, 3).unwrap(), &[0, 1]).unwrap();
        let cache = BernoulliCache::new();
        for j in 0..6 {
            cache.generalized(j, &chi8);
        }
        assert_eq!(fc.append_new(&cache, &CacheContents::default()).unwrap(), 6);
        let contents = fc.read().unwrap();
        assert_eq!(contents.entries.len(), 6);
        assert_eq!(fc.append_new(&cache, &contents).unwrap(), 0);
        let v = fc.verify(100).unwrap();
        assert_eq!((v.entries, v.checked, v.mismatches.len()), (6, 6, 0));

        // a wrong value appended later wins, and verify catches it
        let bad = CacheRecord { p: 2, m: 3, exponents: vec![0, 1], bernoulli_index: 2, value: 3.into() };
        fc.append(&[bad]).unwrap();
        assert_eq!(fc.read().unwrap().lines, 7);
        let v = fc.verify(100).unwrap();
        assert_eq!(v.mismatches, vec!["2^3:0,1 j=2".to_string()]);
        assert_eq!(fc.verify(2).unwrap().checked, 2);

        std::fs::OpenOptions::new().append(true).open(fc.path()).unwrap().write_all(b"{\"p\":2}\n").unwrap();
        assert_eq!(fc.read().unwrap().corrupt.len(), 1);
        assert!(matches!(fc.load_into(&BernoulliCache::new()), Err(CliError::Cache(_))));

        fc.clear().unwrap();
        assert_eq!(fc.read().unwrap().lines, 0);
        fc.clear().unwrap();
    }
}
