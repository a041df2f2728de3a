//! Evolutive rules: per-quadrant entry/exit corners and the exchange and
//! reverse commands derived from them.
//!
//! The commands for quadrant `i` are
//!
//! ```text
//! exchange = (b_n(0) ^ b_n(2^n − 1)) ^ (entry_i ^ exit_i)
//! reverse  =  b_n(0) ^ entry_i
//! ```
//!
//! An exchange with two set entries swaps those two components; a set
//! reverse entry reflects that component inside the current subcube.

use std::fmt;

use crate::bits::{check_dimension, gray, BitVec, CurveParams, GrayMap};
use crate::decode;
use crate::error::{Error, Result};
use crate::index::HilbertIndex;
use crate::oracle;

/// Default cap on the dimension of a materialized gene table.
pub const DEFAULT_MAX_TABLE_DIMENSION: u32 = 20;

/// Enumerated curve checks only run while `n·level` stays within this.
pub const CURVE_CHECK_BITS: u64 = 24;

/// Entry and exit corners of one quadrant's sub-curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EntryExit {
    pub entry: BitVec,
    pub exit: BitVec,
}

/// Exchange and reverse commands of one quadrant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneEntry {
    pub exchange: BitVec,
    pub reverse: BitVec,
}

impl GeneEntry {
    /// Slots swapped by the exchange command, if it names exactly two.
    pub fn swap_pair(&self) -> Option<(usize, usize)> {
        let mask = self.exchange.mask();
        if mask.count_ones() != 2 {
            return None;
        }
        let lo = mask.trailing_zeros();
        let hi = 31 - mask.leading_zeros();
        Some((lo as usize, hi as usize))
    }
}

impl From<EntryExit> for GeneEntry {
    fn from(corners: EntryExit) -> Self {
        let n = corners.entry.len();
        let far = gray(0) ^ gray(high_bit(n) | (high_bit(n) - 1));
        GeneEntry {
            exchange: BitVec::from_mask(far ^ corners.entry.mask() ^ corners.exit.mask(), n),
            reverse: BitVec::from_mask(gray(0) ^ corners.entry.mask(), n),
        }
    }
}

fn high_bit(n: u32) -> u32 {
    1 << (n - 1)
}

fn entry_mask(i: u32) -> u32 {
    if i == 0 {
        0
    } else {
        gray((i - 1) & !1)
    }
}

/// Entry/exit corners of quadrant `i` in dimension `n`.
///
/// `entry(0)` is the origin, `entry(i) = b_n(2⌊(i−1)/2⌋)` otherwise, and
/// `exit(i) = entry(2^n − 1 − i) ^ (1, 0, …, 0)`.
pub fn entry_exit(n: u32, i: u64) -> Result<EntryExit> {
    check_dimension(n)?;
    if i >> n != 0 {
        return Err(Error::QuadrantOutOfRange { quadrant: i, n });
    }
    let i = i as u32;
    let last = high_bit(n) | (high_bit(n) - 1);
    Ok(EntryExit {
        entry: BitVec::from_mask(entry_mask(i), n),
        exit: BitVec::from_mask(entry_mask(last - i) ^ high_bit(n), n),
    })
}

/// Gene list for one dimension. Immutable once built.
#[derive(Clone, Debug)]
pub struct GeneTable {
    dim: u32,
    entries: Vec<GeneEntry>,
    swaps: Vec<Option<(usize, usize)>>,
    gray: GrayMap,
}

impl PartialEq for GeneTable {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.entries == other.entries
    }
}

impl Eq for GeneTable {}

impl GeneTable {
    /// Builds the table for dimension `n` under the default size cap.
    pub fn new(n: u32) -> Result<Self> {
        GeneTable::with_cap(n, DEFAULT_MAX_TABLE_DIMENSION)
    }

    pub fn with_cap(n: u32, cap: u32) -> Result<Self> {
        check_dimension(n)?;
        if n > cap {
            return Err(Error::TableTooLarge { n, cap });
        }
        let entries = (0..1u64 << n)
            .map(|i| entry_exit(n, i).map(GeneEntry::from))
            .collect::<Result<Vec<_>>>()?;
        GeneTable::from_entries(n, entries)
    }

    /// Wraps an explicit gene list. Only the shape is checked here; use
    /// [`validate_gene_table`] for the curve properties.
    pub fn from_entries(n: u32, entries: Vec<GeneEntry>) -> Result<Self> {
        check_dimension(n)?;
        if n > u64::BITS - 1 || entries.len() as u64 != 1u64 << n {
            return Err(Error::Malformed(format!(
                "{} gene entries for dimension {n}",
                entries.len()
            )));
        }
        for e in &entries {
            for v in [e.exchange, e.reverse] {
                if v.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n as usize,
                        found: v.len() as usize,
                    });
                }
            }
        }
        let swaps = entries.iter().map(GeneEntry::swap_pair).collect();
        Ok(GeneTable {
            dim: n,
            entries,
            swaps,
            gray: GrayMap::new(n),
        })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn entries(&self) -> &[GeneEntry] {
        &self.entries
    }

    pub fn entry(&self, quadrant: u32) -> &GeneEntry {
        &self.entries[quadrant as usize]
    }

    /// Entry/exit corners recovered from the stored commands.
    pub fn corners(&self, quadrant: u32) -> EntryExit {
        let e = self.entry(quadrant);
        let n = self.dim;
        let far = gray(0) ^ gray(high_bit(n) | (high_bit(n) - 1));
        let entry = e.reverse.mask() ^ gray(0);
        EntryExit {
            entry: BitVec::from_mask(entry, n),
            exit: BitVec::from_mask(e.exchange.mask() ^ far ^ entry, n),
        }
    }

    pub fn gray(&self) -> &GrayMap {
        &self.gray
    }

    #[inline]
    pub(crate) fn swap(&self, quadrant: u32) -> Option<(usize, usize)> {
        self.swaps[quadrant as usize]
    }

    #[inline]
    pub(crate) fn reverse_mask(&self, quadrant: u32) -> u32 {
        self.entries[quadrant as usize].reverse.mask()
    }

    pub(crate) fn check_params(&self, params: CurveParams) -> Result<()> {
        if params.dim() != self.dim {
            return Err(Error::TableMismatch {
                table: self.dim,
                curve: params.dim(),
            });
        }
        Ok(())
    }

    /// Text layout with one row per quadrant, exchange then reverse.
    pub fn to_text(&self) -> String {
        let n = self.dim;
        let mut out = String::new();
        for (i, e) in self.entries.iter().enumerate() {
            out.push_str(&format!(
                "G_{n}^{{{i},0}}  {}  G_{n}^{{{i},1}}  {}\n",
                e.exchange, e.reverse
            ));
        }
        out
    }
}

/// One named property check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of [`validate_gene_table`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub dim: u32,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &'static str, failure: Option<String>) {
        let (passed, detail) = match failure {
            Some(detail) => (false, detail),
            None => (true, String::from("ok")),
        };
        self.checks.push(Check {
            name,
            passed,
            detail,
        });
    }

    fn skip(&mut self, name: &'static str, why: String) {
        self.checks.push(Check {
            name,
            passed: true,
            detail: format!("skipped: {why}"),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "{tag} n={} {}: {}", self.dim, c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Checks the structural properties of a gene list and the curves it
/// induces at levels 1 and 2.
pub fn validate_gene_table(t: &GeneTable) -> ValidationReport {
    let n = t.dim();
    let size = 1u32 << n;
    let mut report = ValidationReport {
        dim: n,
        checks: Vec::new(),
    };

    let bad_exchange = (0..size).find(|&q| !matches!(t.entry(q).exchange.count_ones(), 0 | 2));
    report.push(
        "exchange-popcount",
        bad_exchange.map(|q| {
            format!(
                "quadrant {q} exchange {} has {} ones",
                t.entry(q).exchange,
                t.entry(q).exchange.count_ones()
            )
        }),
    );

    let first = t.entry(0);
    let want = high_bit(n) | 1;
    report.push(
        "quadrant-zero",
        (first.exchange.mask() != want || first.reverse.mask() != 0).then(|| {
            format!(
                "quadrant 0 has exchange {} reverse {}",
                first.exchange, first.reverse
            )
        }),
    );

    // Sub-curves must chain: exit of quadrant i touches entry of i+1, and
    // the whole curve starts at the origin and leaves along x_n.
    let mut join = None;
    for q in 0..size - 1 {
        let a = t.corners(q).exit.mask() ^ gray(q);
        let b = t.corners(q + 1).entry.mask() ^ gray(q + 1);
        if a != b {
            join = Some(format!("exit of quadrant {q} does not meet entry of {}", q + 1));
            break;
        }
    }
    if join.is_none() && t.corners(size - 1).exit.mask() != high_bit(n) {
        join = Some(String::from("last quadrant does not exit along x_n"));
    }
    report.push("corner-joins", join);

    for level in 1..=2u32 {
        let name = if level == 1 { "curve-level-1" } else { "curve-level-2" };
        let bits = u64::from(n) * u64::from(level);
        if bits > CURVE_CHECK_BITS {
            report.skip(name, format!("2^{bits} points"));
            continue;
        }
        report.push(name, check_decoded_curve(t, level).err());
    }
    report
}

fn check_decoded_curve(t: &GeneTable, level: u32) -> Result<(), String> {
    let params = CurveParams::new(t.dim(), level).map_err(|e| e.to_string())?;
    let count = 1u64 << params.index_bits();
    let points = (0..count).map(|z| {
        let idx = HilbertIndex::from_u64(z, params).expect("z < 2^{nm}");
        decode::decode_bits(&idx, params, t)
            .map(|(p, _)| p)
            .map_err(|e| e.to_string())
    });
    oracle::check_walk(params, points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(v: &BitVec) -> Vec<u8> {
        v.to_tuple()
    }

    #[test]
    fn dim2_rows_reproduced() {
        let t = GeneTable::new(2).unwrap();
        let expected = [
            ([1, 1], [0, 0]),
            ([0, 0], [0, 0]),
            ([0, 0], [0, 0]),
            ([1, 1], [1, 1]),
        ];
        for (q, (ex, rev)) in expected.iter().enumerate() {
            let e = t.entry(q as u32);
            assert_eq!(tuple(&e.exchange), ex, "G^{{{q},0}}");
            assert_eq!(tuple(&e.reverse), rev, "G^{{{q},1}}");
        }
    }

    #[test]
    fn quadrant_zero_corners() {
        for n in 2..=10 {
            let c = entry_exit(n, 0).unwrap();
            assert_eq!(c.entry.mask(), 0);
            assert_eq!(c.exit.mask(), 1, "exit of quadrant 0 is (0, …, 0, 1)");
        }
        let c = entry_exit(2, 3).unwrap();
        let g = GeneEntry::from(c);
        assert_eq!(tuple(&g.exchange), [1, 1]);
        assert_eq!(tuple(&g.reverse), [1, 1]);
        assert!(matches!(
            entry_exit(2, 4),
            Err(Error::QuadrantOutOfRange { quadrant: 4, n: 2 })
        ));
    }

    #[test]
    fn structural_properties() {
        for n in 2..=8 {
            let t = GeneTable::new(n).unwrap();
            assert_eq!(t.entry(0).exchange.mask(), high_bit(n) | 1);
            assert_eq!(t.entry(0).reverse.mask(), 0);
            for q in 0..1u32 << n {
                assert!(matches!(t.entry(q).exchange.count_ones(), 0 | 2));
                let c = entry_exit(n, u64::from(q)).unwrap();
                assert_eq!((c.entry.mask() ^ c.exit.mask()).count_ones(), 1);
                assert_eq!(t.corners(q), c);
                assert_eq!(GeneEntry::from(t.corners(q)), *t.entry(q));
            }
        }
    }

    #[test]
    fn validation_passes() {
        for n in 2..=6 {
            let report = validate_gene_table(&GeneTable::new(n).unwrap());
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn validation_flags_quadrant_zero_reverse() {
        let t = GeneTable::new(3).unwrap();
        let mut entries = t.entries().to_vec();
        entries[0].reverse = BitVec::from_mask(0b111, 3);
        let bad = GeneTable::from_entries(3, entries).unwrap();
        let report = validate_gene_table(&bad);
        assert!(!report.passed());
        assert!(!report.check("quadrant-zero").unwrap().passed);
    }

    #[test]
    fn validation_flags_odd_exchange() {
        let t = GeneTable::new(3).unwrap();
        let mut entries = t.entries().to_vec();
        entries[5].exchange = BitVec::from_mask(entries[5].exchange.mask() ^ 1, 3);
        let report = validate_gene_table(&GeneTable::from_entries(3, entries).unwrap());
        assert!(!report.check("exchange-popcount").unwrap().passed);
    }

    #[test]
    fn large_dimension_skips_enumeration() {
        let report = validate_gene_table(&GeneTable::new(13).unwrap());
        assert!(report.passed(), "{report}");
        assert!(report.check("curve-level-2").unwrap().detail.starts_with("skipped"));
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(
            GeneTable::new(21),
            Err(Error::TableTooLarge { n: 21, cap: 20 })
        ));
        assert!(GeneTable::with_cap(4, 3).is_err());
        assert!(GeneTable::new(1).is_err());
    }

    #[test]
    fn text_dump() {
        let text = GeneTable::new(2).unwrap().to_text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines,
            [
                "G_2^{0,0}  (1, 1)  G_2^{0,1}  (0, 0)",
                "G_2^{1,0}  (0, 0)  G_2^{1,1}  (0, 0)",
                "G_2^{2,0}  (0, 0)  G_2^{2,1}  (0, 0)",
                "G_2^{3,0}  (1, 1)  G_2^{3,1}  (1, 1)",
            ]
        );
    }
}
