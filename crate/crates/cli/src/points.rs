//! Point files.
//!
//! Text: one point per line, components separated by whitespace or commas,
//! highest component (`x_n`) first; blank lines and lines starting with `#`
//! are skipped.
//!
//! Binary, little-endian:
//!
//! ```text
//! "HPTS"  version:u8  n:u16  count:u64  { component:u64 × n } × count
//! ```
//!
//! with components in the same `x_n`-first order as the text form.

use std::fmt;
use std::io::{self, BufRead, Read, Write};

use thiserror::Error;

pub const MAGIC: &[u8; 4] = b"HPTS";
pub const VERSION: u8 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Binary,
}

/// Where a record came from, for error messages.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Line(usize),
    Record(usize),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Line(l) => write!(f, "line {l}"),
            Location::Record(r) => write!(f, "record {r}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum PointError {
    #[error("{at}: expected {expected} components, found {found}")]
    Ragged {
        at: Location,
        expected: usize,
        found: usize,
    },
    #[error("{at}: cannot parse {token:?} as an unsigned integer")]
    Parse { at: Location, token: String },
    #[error("{at}: component {value} does not fit in {level} bits")]
    OutOfRange { at: Location, value: u64, level: u32 },
    #[error("binary point file: {0}")]
    Binary(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub at: Location,
    /// Components in tuple order, `x_n` first.
    pub tuple: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointFile {
    pub dim: usize,
    pub format: Format,
    pub records: Vec<Record>,
}

impl PointFile {
    pub fn new(dim: usize, format: Format, tuples: impl IntoIterator<Item = Vec<u64>>) -> Self {
        let records = tuples
            .into_iter()
            .enumerate()
            .map(|(i, tuple)| Record {
                at: match format {
                    Format::Text => Location::Line(i + 1),
                    Format::Binary => Location::Record(i),
                },
                tuple,
            })
            .collect();
        PointFile {
            dim,
            format,
            records,
        }
    }

    /// Reads either format, choosing by the leading magic bytes.
    pub fn read(mut source: impl Read, dim: Option<usize>) -> Result<Self, PointError> {
        let mut bytes = Vec::new();
        source.read_to_end(&mut bytes)?;
        if bytes.starts_with(MAGIC) {
            Self::parse_binary(&bytes, dim)
        } else {
            Self::parse_text(&bytes[..], dim)
        }
    }

    pub fn parse_text(source: impl BufRead, dim: Option<usize>) -> Result<Self, PointError> {
        let mut expected = dim;
        let mut records = Vec::new();
        for (i, line) in source.lines().enumerate() {
            let line = line?;
            let at = Location::Line(i + 1);
            let body = line.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let tuple = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<u64>().map_err(|_| PointError::Parse {
                        at,
                        token: t.to_string(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let want = *expected.get_or_insert(tuple.len());
            if tuple.len() != want {
                return Err(PointError::Ragged {
                    at,
                    expected: want,
                    found: tuple.len(),
                });
            }
            records.push(Record { at, tuple });
        }
        Ok(PointFile {
            dim: expected.unwrap_or(0),
            format: Format::Text,
            records,
        })
    }

    pub fn parse_binary(bytes: &[u8], dim: Option<usize>) -> Result<Self, PointError> {
        let bad = |msg: String| PointError::Binary(msg);
        if bytes.len() < 15 || &bytes[..4] != MAGIC {
            return Err(bad(format!("header too short or bad magic ({} bytes)", bytes.len())));
        }
        if bytes[4] != VERSION {
            return Err(bad(format!("unsupported version {}", bytes[4])));
        }
        let n = usize::from(u16::from_le_bytes([bytes[5], bytes[6]]));
        let count = u64::from_le_bytes(bytes[7..15].try_into().expect("8 bytes"));
        if let Some(d) = dim {
            if d != n {
                return Err(PointError::Ragged {
                    at: Location::Record(0),
                    expected: d,
                    found: n,
                });
            }
        }
        let body = &bytes[15..];
        let want = count
            .checked_mul(n as u64)
            .and_then(|c| c.checked_mul(8))
            .filter(|&len| len == body.len() as u64)
            .ok_or_else(|| {
                bad(format!(
                    "{count} records of {n} components need {} bytes, found {}",
                    count as u128 * n as u128 * 8,
                    body.len()
                ))
            })?;
        debug_assert_eq!(want as usize, body.len());
        let records = if n == 0 {
            Vec::new()
        } else {
            body.chunks_exact(8 * n)
                .enumerate()
                .map(|(i, rec)| Record {
                    at: Location::Record(i),
                    tuple: rec
                        .chunks_exact(8)
                        .map(|c| u64::from_le_bytes(c.try_into().expect("8 bytes")))
                        .collect(),
                })
                .collect()
        };
        Ok(PointFile {
            dim: n,
            format: Format::Binary,
            records,
        })
    }

    pub fn write(&self, mut sink: impl Write, format: Format) -> io::Result<()> {
        match format {
            Format::Text => {
                for r in &self.records {
                    let line: Vec<String> = r.tuple.iter().map(u64::to_string).collect();
                    writeln!(sink, "{}", line.join(" "))?;
                }
            }
            Format::Binary => {
                sink.write_all(MAGIC)?;
                sink.write_all(&[VERSION])?;
                sink.write_all(&(self.dim as u16).to_le_bytes())?;
                sink.write_all(&(self.records.len() as u64).to_le_bytes())?;
                for r in &self.records {
                    for c in &r.tuple {
                        sink.write_all(&c.to_le_bytes())?;
                    }
                }
            }
        }
        sink.flush()
    }

    /// Rejects the first component that needs more than `level` bits.
    pub fn check_level(&self, level: u32) -> Result<(), PointError> {
        for r in &self.records {
            if let Some(&value) = r.tuple.iter().find(|&&c| level < 64 && c >> level != 0) {
                return Err(PointError::OutOfRange {
                    at: r.at,
                    value,
                    level,
                });
            }
        }
        Ok(())
    }
}
