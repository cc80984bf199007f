//! On-disk memo of exact counts.
//!
//! Format: a header line `pncache v1`, then one `n N M count` line per entry
//! with the count in base 10. Entries are written sorted so that saving the
//! same cache twice produces identical bytes.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Mutex;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::exact::{count_exact, BigCount, PartitionBounds};

pub const CACHE_HEADER: &str = "pncache v1";

/// Thread-safe map from `(n, N, M)` to `p_n(N, M)`.
///
/// Keys are stored with `N <= M`; the count is symmetric in the two bounds.
#[derive(Debug, Default)]
pub struct CountCache {
    entries: Mutex<BTreeMap<(u64, u64, u64), BigUint>>,
}

fn key(b: &PartitionBounds) -> (u64, u64, u64) {
    (b.n, b.max_part.min(b.max_len), b.max_part.max(b.max_len))
}

impl CountCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.lock().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, BTreeMap<(u64, u64, u64), BigUint>> {
        self.entries.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
    }

    pub fn get(&self, b: &PartitionBounds) -> Option<BigCount> {
        self.lock().get(&key(b)).cloned().map(BigCount)
    }

    pub fn insert(&self, b: &PartitionBounds, count: &BigCount) {
        self.lock().insert(key(b), count.0.clone());
    }

    /// Exact count, served from the cache when present.
    pub fn count_exact(&self, b: PartitionBounds) -> Result<BigCount> {
        if let Some(hit) = self.get(&b) {
            return Ok(hit);
        }
        let value = count_exact(b)?;
        self.insert(&b, &value);
        Ok(value)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim_end() == CACHE_HEADER => {}
            Some(h) => return Err(Error::Cache(format!("bad header {h:?}, expected {CACHE_HEADER:?}"))),
            None => return Err(Error::Cache("empty cache file".into())),
        }
        let mut entries = BTreeMap::new();
        for (idx, line) in lines.enumerate() {
            let lineno = idx + 2;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(Error::Cache(format!(
                    "line {lineno}: expected `n N M count`, got {line:?}"
                )));
            }
            let int = |s: &str| -> Result<u64> {
                if !s.bytes().all(|c| c.is_ascii_digit()) {
                    return Err(Error::Cache(format!("line {lineno}: {s:?} is not a natural number")));
                }
                s.parse()
                    .map_err(|_| Error::Cache(format!("line {lineno}: {s:?} is not a natural number")))
            };
            let b = PartitionBounds::new(int(fields[0])?, int(fields[1])?, int(fields[2])?);
            if !fields[3].bytes().all(|c| c.is_ascii_digit()) {
                return Err(Error::Cache(format!("line {lineno}: count {:?} is not decimal", fields[3])));
            }
            let count = BigUint::parse_bytes(fields[3].as_bytes(), 10)
                .ok_or_else(|| Error::Cache(format!("line {lineno}: count {:?} is not decimal", fields[3])))?;
            if let Some(previous) = entries.insert(key(&b), count.clone()) {
                if previous != count {
                    return Err(Error::Cache(format!("line {lineno}: conflicting entry for {b}")));
                }
            }
        }
        Ok(Self {
            entries: Mutex::new(entries),
        })
    }

    pub fn render(&self) -> String {
        let mut out = String::from(CACHE_HEADER);
        out.push('\n');
        for ((n, small, large), count) in self.lock().iter() {
            out.push_str(&format!("{n} {small} {large} {count}\n"));
        }
        out
    }

    /// Load `path`; a missing file yields an empty cache.
    pub fn load(path: &Path) -> Result<Self> {
        match fs::read_to_string(path) {
            Ok(text) => Self::parse(&text),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Self::new()),
            Err(e) => Err(e.into()),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.render())?;
        Ok(())
    }
}
