//! Binary gene-table files and the on-disk cache.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! "HGEN"  version:u8  n:u16  { exchange[w]  reverse[w] } × 2^n
//! ```
//!
//! with `w = ⌈n/8⌉` bytes per vector, bit 0 of the first byte holding the
//! entry for `x_1`, and unused high bits zero.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::gene::{validate_gene_table, GeneEntry, GeneTable, DEFAULT_MAX_TABLE_DIMENSION};

pub const MAGIC: &[u8; 4] = b"HGEN";
pub const FORMAT_VERSION: u8 = 1;

fn vector_width(n: u32) -> usize {
    n.div_ceil(8) as usize
}

fn put_vector(out: &mut Vec<u8>, v: BitVec) {
    let bytes = v.mask().to_le_bytes();
    out.extend_from_slice(&bytes[..vector_width(v.len())]);
}

fn take_vector(bytes: &[u8], n: u32) -> Result<BitVec> {
    let mut word = [0u8; 4];
    word[..bytes.len()].copy_from_slice(bytes);
    let mask = u32::from_le_bytes(word);
    if u64::from(mask) >> n != 0 {
        return Err(Error::Malformed(format!("padding bits set in {bytes:02x?}")));
    }
    Ok(BitVec::from_mask(mask, n))
}

/// Serializes `t` in the binary layout.
pub fn to_bytes(t: &GeneTable) -> Vec<u8> {
    let n = t.dim();
    let mut out = Vec::with_capacity(7 + t.entries().len() * 2 * vector_width(n));
    out.extend_from_slice(MAGIC);
    out.push(FORMAT_VERSION);
    out.extend_from_slice(&(n as u16).to_le_bytes());
    for e in t.entries() {
        put_vector(&mut out, e.exchange);
        put_vector(&mut out, e.reverse);
    }
    out
}

/// Parses and validates a table, refusing dimensions above `cap`.
pub fn from_bytes(bytes: &[u8], cap: u32) -> Result<GeneTable> {
    if bytes.len() < 7 {
        return Err(Error::Malformed(format!("{} byte header", bytes.len())));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::Malformed(format!("bad magic {:02x?}", &bytes[..4])));
    }
    if bytes[4] != FORMAT_VERSION {
        return Err(Error::VersionMismatch {
            found: bytes[4],
            expected: FORMAT_VERSION,
        });
    }
    let n = u32::from(u16::from_le_bytes([bytes[5], bytes[6]]));
    if n > cap {
        return Err(Error::TableTooLarge { n, cap });
    }
    crate::bits::check_dimension(n)?;
    let w = vector_width(n);
    let body = &bytes[7..];
    let expected = (1usize << n) * 2 * w;
    if body.len() != expected {
        return Err(Error::Malformed(format!(
            "expected {expected} payload bytes for n = {n}, found {}",
            body.len()
        )));
    }
    let entries = body
        .chunks_exact(2 * w)
        .map(|rec| {
            Ok(GeneEntry {
                exchange: take_vector(&rec[..w], n)?,
                reverse: take_vector(&rec[w..], n)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let table = GeneTable::from_entries(n, entries)?;
    let report = validate_gene_table(&table);
    if !report.passed() {
        let why: Vec<String> = report
            .failures()
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect();
        return Err(Error::Invalid(why.join("; ")));
    }
    Ok(table)
}

pub fn save_table(t: &GeneTable, mut sink: impl Write) -> Result<()> {
    sink.write_all(&to_bytes(t))?;
    sink.flush()?;
    Ok(())
}

pub fn load_table(mut source: impl Read) -> Result<GeneTable> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    from_bytes(&bytes, DEFAULT_MAX_TABLE_DIMENSION)
}

/// How [`GeneCache::load_or_build`] obtained its table.
#[derive(Debug)]
pub enum CacheOutcome {
    Hit,
    Built,
    /// The cached file was unreadable or invalid and has been replaced.
    Rebuilt(Error),
}

/// Directory of gene tables keyed by format version and dimension.
#[derive(Clone, Debug)]
pub struct GeneCache {
    dir: PathBuf,
    cap: u32,
}

impl GeneCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        GeneCache {
            dir: dir.into(),
            cap: DEFAULT_MAX_TABLE_DIMENSION,
        }
    }

    pub fn with_cap(mut self, cap: u32) -> Self {
        self.cap = cap;
        self
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, n: u32) -> PathBuf {
        self.dir.join(format!("hgen-v{FORMAT_VERSION}-n{n}.bin"))
    }

    /// Reads the cached table for `n`, building and storing it when absent
    /// or corrupt.
    pub fn load_or_build(&self, n: u32) -> Result<(GeneTable, CacheOutcome)> {
        let path = self.path_for(n);
        let failure = match fs::read(&path) {
            Ok(bytes) => match from_bytes(&bytes, self.cap) {
                Ok(t) if t.dim() == n => return Ok((t, CacheOutcome::Hit)),
                Ok(t) => Some(Error::TableMismatch {
                    table: t.dim(),
                    curve: n,
                }),
                Err(e) => Some(e),
            },
            Err(e) if e.kind() == io::ErrorKind::NotFound => None,
            Err(e) => Some(e.into()),
        };
        let table = GeneTable::with_cap(n, self.cap)?;
        self.store(&table)?;
        let outcome = match failure {
            Some(e) => CacheOutcome::Rebuilt(e),
            None => CacheOutcome::Built,
        };
        Ok((table, outcome))
    }

    pub fn store(&self, t: &GeneTable) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(t.dim());
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, to_bytes(t))?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }
}
