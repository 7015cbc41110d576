//! Append-only store of basis products, one JSON record per line after a
//! header line carrying the format version.

use std::collections::{BTreeMap, HashMap};
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use affine_schur::schur::{basis_product, BasisIndex, Product};
use serde::{Deserialize, Serialize};

pub const FORMAT: &str = "affine-schur-products";
pub const VERSION: u32 = 1;
pub const PATH_VAR: &str = "AFFINE_SCHUR_CACHE";

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
struct Header {
    format: String,
    version: u32,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct CacheRecord {
    pub n: i64,
    pub r: usize,
    pub left: Vec<(i64, i64)>,
    pub right: Vec<(i64, i64)>,
    pub value: Vec<(Vec<(i64, i64)>, u64)>,
}

type Key = (BasisIndex, BasisIndex);

pub struct ProductCache {
    path: PathBuf,
    entries: HashMap<Key, Product>,
    pending: Vec<CacheRecord>,
    /// The file is missing, unreadable or of another version.
    rewrite: bool,
    skipped: usize,
    pub hits: usize,
    pub misses: usize,
    used: Vec<Key>,
}

#[derive(Serialize, Debug)]
pub struct CacheStats {
    pub path: String,
    pub version: u32,
    pub records: usize,
    pub skipped_lines: usize,
    pub by_context: BTreeMap<String, usize>,
    pub bytes: u64,
}

pub fn default_path() -> PathBuf {
    match std::env::var_os(PATH_VAR) {
        Some(p) if !p.is_empty() => PathBuf::from(p),
        _ => std::env::temp_dir().join("affine-schur-products.ndjson"),
    }
}

fn to_index(n: i64, pairs: &[(i64, i64)]) -> BasisIndex {
    BasisIndex::from_pairs(n, pairs)
}

impl ProductCache {
    pub fn open(path: &Path) -> std::io::Result<Self> {
        let mut cache = ProductCache {
            path: path.to_path_buf(),
            entries: HashMap::new(),
            pending: Vec::new(),
            rewrite: true,
            skipped: 0,
            hits: 0,
            misses: 0,
            used: Vec::new(),
        };
        let file = match File::open(path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(e),
        };
        let mut lines = BufReader::new(file).lines();
        let header: Option<Header> = match lines.next() {
            Some(line) => serde_json::from_str(&line?).ok(),
            None => None,
        };
        let expected = Header {
            format: FORMAT.into(),
            version: VERSION,
        };
        if header.as_ref() != Some(&expected) {
            return Ok(cache);
        }
        cache.rewrite = false;
        for line in lines {
            let line = line?;
            // a torn final line from an interrupted write is dropped
            match serde_json::from_str::<CacheRecord>(&line) {
                Ok(rec) if rec.left.len() == rec.r && rec.right.len() == rec.r && rec.n >= 1 => {
                    let key = (to_index(rec.n, &rec.left), to_index(rec.n, &rec.right));
                    let value = rec.value.iter().map(|(p, k)| (to_index(rec.n, p), *k)).collect();
                    cache.entries.insert(key, value);
                }
                _ => cache.skipped += 1,
            }
        }
        Ok(cache)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn product(&mut self, x: &BasisIndex, y: &BasisIndex) -> Product {
        let key = (x.clone(), y.clone());
        if let Some(p) = self.entries.get(&key) {
            self.hits += 1;
            self.used.push(key);
            return p.clone();
        }
        self.misses += 1;
        let p = basis_product(x, y);
        self.pending.push(CacheRecord {
            n: x.n(),
            r: x.r(),
            left: x.pairs().to_vec(),
            right: y.pairs().to_vec(),
            value: p.iter().map(|(z, k)| (z.pairs().to_vec(), *k)).collect(),
        });
        self.entries.insert(key, p.clone());
        p
    }

    /// Re-derives one of the cached products used in this run (the
    /// `seed`-th, cyclically). Returns the offending key on a mismatch.
    pub fn spot_check(&self, seed: usize) -> Result<usize, (BasisIndex, BasisIndex)> {
        if self.used.is_empty() {
            return Ok(0);
        }
        let (x, y) = &self.used[seed % self.used.len()];
        let mut want = basis_product(x, y);
        let mut got = self.entries[&(x.clone(), y.clone())].clone();
        want.sort();
        got.sort();
        if want == got {
            Ok(1)
        } else {
            Err((x.clone(), y.clone()))
        }
    }

    pub fn flush(&mut self) -> std::io::Result<()> {
        if self.pending.is_empty() && !self.rewrite {
            return Ok(());
        }
        if let Some(dir) = self.path.parent() {
            if !dir.as_os_str().is_empty() {
                fs::create_dir_all(dir)?;
            }
        }
        let mut file = if self.rewrite {
            let mut f = File::create(&self.path)?;
            let header = Header {
                format: FORMAT.into(),
                version: VERSION,
            };
            writeln!(f, "{}", serde_json::to_string(&header).expect("header serializes"))?;
            self.rewrite = false;
            f
        } else {
            OpenOptions::new().append(true).open(&self.path)?
        };
        let mut buf = String::new();
        for rec in self.pending.drain(..) {
            buf.push_str(&serde_json::to_string(&rec).expect("record serializes"));
            buf.push('\n');
        }
        file.write_all(buf.as_bytes())?;
        file.sync_data()
    }

    pub fn stats(&self) -> CacheStats {
        let mut by_context = BTreeMap::new();
        for (x, _) in self.entries.keys() {
            *by_context.entry(format!("n={},r={}", x.n(), x.r())).or_insert(0) += 1;
        }
        CacheStats {
            path: self.path.display().to_string(),
            version: VERSION,
            records: self.entries.len(),
            skipped_lines: self.skipped,
            by_context,
            bytes: fs::metadata(&self.path).map(|m| m.len()).unwrap_or(0),
        }
    }

    /// Drops every record, or only those of one `(n, r)`.
    pub fn clear(&mut self, context: Option<(i64, usize)>) -> std::io::Result<usize> {
        let before = self.entries.len();
        match context {
            None => self.entries.clear(),
            Some((n, r)) => self.entries.retain(|(x, _), _| !(x.n() == n && x.r() == r)),
        }
        self.pending = self
            .entries
            .iter()
            .map(|((x, y), p)| CacheRecord {
                n: x.n(),
                r: x.r(),
                left: x.pairs().to_vec(),
                right: y.pairs().to_vec(),
                value: p.iter().map(|(z, k)| (z.pairs().to_vec(), *k)).collect(),
            })
            .collect();
        self.rewrite = true;
        self.flush()?;
        Ok(before - self.entries.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(s: &str, n: i64) -> BasisIndex {
        BasisIndex::parse_text(s, n).unwrap()
    }

    #[test]
    fn records_survive_a_reopen() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.ndjson");
        let x = idx("xi[(1,1)|(1,2)]", 1);
        let mut c = ProductCache::open(&path).unwrap();
        let p = c.product(&x, &x);
        assert_eq!((c.hits, c.misses), (0, 1));
        c.flush().unwrap();
        let mut c = ProductCache::open(&path).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.product(&x, &x), p);
        assert_eq!(c.hits, 1);
        assert_eq!(c.spot_check(0), Ok(1));
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with(r#"{"format":"affine-schur-products","version":1}"#));
        assert_eq!(text.lines().count(), 2);
    }

    #[test]
    fn other_versions_and_torn_lines_are_dropped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.ndjson");
        fs::write(&path, "{\"format\":\"affine-schur-products\",\"version\":0}\n{}\n").unwrap();
        let mut c = ProductCache::open(&path).unwrap();
        assert!(c.is_empty());
        let x = idx("xi[(1)|(2)]", 2);
        c.product(&x, &x);
        c.flush().unwrap();
        let mut text = fs::read_to_string(&path).unwrap();
        assert!(text.contains("\"version\":1"));
        text.push_str("{\"n\":2,\"r\":1,\"left\":[[1,");
        fs::write(&path, text).unwrap();
        let c = ProductCache::open(&path).unwrap();
        assert_eq!((c.len(), c.stats().skipped_lines), (1, 1));
    }

    #[test]
    fn tampered_records_fail_the_spot_check() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.ndjson");
        let x = idx("xi[(1,1)|(1,2)]", 1);
        let mut c = ProductCache::open(&path).unwrap();
        c.product(&x, &x);
        c.flush().unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let (head, line) = text.trim_end().split_once('\n').unwrap();
        let mut rec: serde_json::Value = serde_json::from_str(line).unwrap();
        let k = rec["value"][0][1].as_u64().unwrap();
        rec["value"][0][1] = (k + 1).into();
        fs::write(&path, format!("{head}\n{rec}\n")).unwrap();
        let mut c = ProductCache::open(&path).unwrap();
        c.product(&x, &x);
        assert!(c.spot_check(0).is_err());
    }

    #[test]
    fn clearing_one_context() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.ndjson");
        let mut c = ProductCache::open(&path).unwrap();
        let x = idx("xi[(1)|(2)]", 2);
        let y = idx("xi[(1,1)|(1,2)]", 1);
        c.product(&x, &x);
        c.product(&y, &y);
        c.flush().unwrap();
        assert_eq!(c.clear(Some((2, 1))).unwrap(), 1);
        let c = ProductCache::open(&path).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.stats().by_context.keys().collect::<Vec<_>>(), vec!["n=1,r=2"]);
    }
}
