//! Number-system primitives: the coordinate domain `D_m`, n-bit corner
//! vectors, k-bit reflection, prefix parity and the two Gray-code maps
//! between corner vectors and quadrant numbers.
//!
//! Storage convention: slot `i` (0-based) of a [`Coordinate`] or [`BitVec`]
//! holds the component `x_{i+1}`. Tuples are written highest component
//! first, `(x_n, …, x_1)`, so rendering reverses the storage order. Under
//! this convention the corner vector of quadrant `j` is the integer mask
//! `j ^ (j >> 1)` with bit `i` belonging to `x_{i+1}`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported dimension. Quadrant numbers and corner masks are `u32`.
pub const MAX_DIMENSION: u32 = 32;

/// Dimensions below this use precomputed lookup tables for the Gray maps.
pub const DEFAULT_TABLE_THRESHOLD: u32 = 16;

/// Dimension `n` and level `m` of a Hilbert curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CurveParams {
    dim: u32,
    level: u32,
}

impl CurveParams {
    pub fn new(dim: u32, level: u32) -> Result<Self> {
        check_dimension(dim)?;
        Ok(CurveParams { dim, level })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Number of bits in a full index, `n·m`.
    pub fn index_bits(&self) -> u64 {
        u64::from(self.dim) * u64::from(self.level)
    }

    /// Checks that `p` is an element of `D_m`.
    pub fn check(&self, p: &Coordinate) -> Result<()> {
        if p.dim() != self.dim as usize {
            return Err(Error::DimensionMismatch {
                expected: self.dim as usize,
                found: p.dim(),
            });
        }
        for (slot, &value) in p.slots().iter().enumerate() {
            if self.level < 64 && value >> self.level != 0 {
                return Err(Error::ComponentOutOfRange {
                    position: slot + 1,
                    value,
                    level: self.level,
                });
            }
        }
        Ok(())
    }
}

pub(crate) fn check_dimension(dim: u32) -> Result<()> {
    if !(2..=MAX_DIMENSION).contains(&dim) {
        return Err(Error::InvalidDimension {
            n: dim,
            max: MAX_DIMENSION,
        });
    }
    Ok(())
}

/// A point `(x_n, …, x_1)` of the discrete grid.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coordinate(Vec<u64>);

impl Coordinate {
    /// Builds a coordinate from storage slots, `slots[i] = x_{i+1}`.
    pub fn from_slots(slots: Vec<u64>) -> Self {
        Coordinate(slots)
    }

    /// Builds a coordinate from a tuple written `(x_n, …, x_1)`.
    pub fn from_tuple(tuple: &[u64]) -> Self {
        Coordinate(tuple.iter().rev().copied().collect())
    }

    pub fn origin(dim: u32) -> Self {
        Coordinate(vec![0; dim as usize])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn slots(&self) -> &[u64] {
        &self.0
    }

    pub fn slots_mut(&mut self) -> &mut [u64] {
        &mut self.0
    }

    pub fn into_slots(self) -> Vec<u64> {
        self.0
    }

    /// Component `x_position`, 1-based.
    pub fn component(&self, position: usize) -> Option<u64> {
        position.checked_sub(1).and_then(|i| self.0.get(i)).copied()
    }

    /// Components in tuple order, `x_n` first.
    pub fn to_tuple(&self) -> Vec<u64> {
        self.0.iter().rev().copied().collect()
    }

    /// Componentwise exclusive or.
    pub fn xor(&self, other: &Coordinate) -> Result<Coordinate> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Coordinate(
            self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect(),
        ))
    }

    /// Sum of absolute componentwise differences.
    pub fn manhattan(&self, other: &Coordinate) -> Option<u64> {
        if self.dim() != other.dim() {
            return None;
        }
        Some(self.0.iter().zip(&other.0).map(|(a, b)| a.abs_diff(*b)).sum())
    }

    /// Bit-length of the largest component, or 1 if every component is 0.
    pub fn effective_level(&self) -> u32 {
        let max = self.0.iter().copied().max().unwrap_or(0);
        (u64::BITS - max.leading_zeros()).max(1)
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, self.0.iter().rev())
    }
}

fn write_tuple<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    items: impl Iterator<Item = T>,
) -> fmt::Result {
    f.write_str("(")?;
    for (i, item) in items.enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{item}")?;
    }
    f.write_str(")")
}

/// An n-entry vector over {0, 1}: corner points, entry/exit points and gene
/// commands. Slot layout matches [`Coordinate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: u32,
    mask: u32,
}

impl BitVec {
    /// Wraps a mask whose bit `i` is the entry for `x_{i+1}`.
    ///
    /// Panics if `len` exceeds [`MAX_DIMENSION`] or `mask` has bits at or
    /// above `len`.
    pub fn from_mask(mask: u32, len: u32) -> Self {
        assert!(len <= MAX_DIMENSION, "bit vector too long: {len}");
        assert!(
            u64::from(mask) >> len == 0,
            "mask {mask:#b} wider than {len} bits"
        );
        BitVec { len, mask }
    }

    pub fn zero(len: u32) -> Self {
        BitVec::from_mask(0, len)
    }

    /// Builds a vector from entries in tuple order, `(a_1, …, a_n)` where
    /// `a_1` belongs to `x_n`.
    pub fn from_tuple(entries: &[u64]) -> Result<Self> {
        let len = check_len(entries.len())?;
        let mut mask = 0;
        for (t, &value) in entries.iter().enumerate() {
            match value {
                0 => {}
                1 => mask |= 1 << (entries.len() - 1 - t),
                _ => return Err(Error::NotABit { position: t + 1, value }),
            }
        }
        Ok(BitVec { len, mask })
    }

    /// Builds a vector from entries in slot order.
    pub fn from_slots(entries: &[u64]) -> Result<Self> {
        let len = check_len(entries.len())?;
        let mut mask = 0;
        for (i, &value) in entries.iter().enumerate() {
            match value {
                0 => {}
                1 => mask |= 1 << i,
                _ => return Err(Error::NotABit { position: i + 1, value }),
            }
        }
        Ok(BitVec { len, mask })
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    /// Entry at slot `i` (the entry for `x_{i+1}`).
    pub fn slot(&self, i: u32) -> u8 {
        ((self.mask >> i) & 1) as u8
    }

    /// Entries in tuple order.
    pub fn to_tuple(&self) -> Vec<u8> {
        (0..self.len).rev().map(|i| self.slot(i)).collect()
    }

    pub fn count_ones(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn xor(&self, other: &BitVec) -> Result<BitVec> {
        if self.len != other.len {
            return Err(Error::DimensionMismatch {
                expected: self.len as usize,
                found: other.len as usize,
            });
        }
        Ok(BitVec {
            len: self.len,
            mask: self.mask ^ other.mask,
        })
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, self.to_tuple().into_iter())
    }
}

fn check_len(len: usize) -> Result<u32> {
    if len > MAX_DIMENSION as usize {
        return Err(Error::InvalidDimension {
            n: len as u32,
            max: MAX_DIMENSION,
        });
    }
    Ok(len as u32)
}

/// `2^width − 1` without overflowing at `width = 64`.
#[inline]
pub(crate) fn low_mask(width: u32) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// k-bit reflection `Re_k(j) = 2^k − 1 − j`.
pub fn reflect(j: u64, k: u32) -> Result<u64> {
    if k < 64 && j >> k != 0 {
        return Err(Error::ReflectDomain { value: j, width: k });
    }
    Ok(low_mask(k) ^ j)
}

/// `(a_1 + … + a_i) mod 2`, with `a` in tuple order.
pub fn parity_prefix(a: &BitVec, i: usize) -> Result<u8> {
    let n = a.len() as usize;
    if i == 0 || i > n {
        return Err(Error::PositionOutOfRange { position: i, n });
    }
    // tuple positions 1..=i are the top i slots
    let top = a.mask() >> (n - i);
    Ok((top.count_ones() & 1) as u8)
}

/// Corner vector to quadrant number.
///
/// Reads `a` in tuple order and flips every entry whose prefix parity is
/// odd; the result is assembled with `a_1` as the most significant bit.
/// This is the inverse of the binary-reflected Gray code.
pub fn vec_to_scalar(a: &BitVec) -> u32 {
    let tuple = a.to_tuple();
    let mut j = 0u32;
    let mut parity = 0u8;
    for &entry in &tuple {
        j = (j << 1) | u32::from(entry ^ parity);
        parity ^= entry;
    }
    j
}

/// Quadrant number to corner vector.
///
/// `j = (a_1 ⋯ a_n)_2` with `a_1` most significant; entry `i` is `a_i`
/// flipped when `a_{i−1}` is 1.
pub fn vec_of_scalar(j: u64, n: u32) -> Result<BitVec> {
    check_len(n as usize)?;
    if n < 64 && j >> n != 0 {
        return Err(Error::ScalarOutOfRange { value: j, n });
    }
    let mut tuple = Vec::with_capacity(n as usize);
    let mut previous = 0;
    for t in (0..n).rev() {
        let a = (j >> t) & 1;
        tuple.push(a ^ previous);
        previous = a;
    }
    BitVec::from_tuple(&tuple)
}

/// Binary-reflected Gray code, the xor-shift form of [`vec_of_scalar`].
#[inline]
pub fn gray(j: u32) -> u32 {
    j ^ (j >> 1)
}

/// Inverse of [`gray`], the prefix-xor form of [`vec_to_scalar`].
#[inline]
pub fn gray_inverse(mut g: u32) -> u32 {
    g ^= g >> 1;
    g ^= g >> 2;
    g ^= g >> 4;
    g ^= g >> 8;
    g ^= g >> 16;
    g
}

/// Corner/quadrant conversions for one dimension, tabulated when `2^n` is
/// small enough and computed with xor shifts otherwise.
#[derive(Clone, Debug)]
pub struct GrayMap {
    dim: u32,
    tables: Option<GrayTables>,
}

#[derive(Clone, Debug)]
struct GrayTables {
    quadrant_of: Vec<u32>,
    corner_of: Vec<u32>,
}

impl GrayMap {
    pub fn new(dim: u32) -> Self {
        GrayMap::with_threshold(dim, DEFAULT_TABLE_THRESHOLD)
    }

    pub fn with_threshold(dim: u32, threshold: u32) -> Self {
        let tables = (dim < threshold).then(|| {
            let size = 1u32 << dim;
            let corner_of: Vec<u32> = (0..size).map(gray).collect();
            let mut quadrant_of = vec![0; size as usize];
            for (q, &c) in corner_of.iter().enumerate() {
                quadrant_of[c as usize] = q as u32;
            }
            GrayTables {
                quadrant_of,
                corner_of,
            }
        });
        GrayMap { dim, tables }
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn is_tabulated(&self) -> bool {
        self.tables.is_some()
    }

    /// `f_n` on a corner mask.
    #[inline]
    pub fn quadrant(&self, corner: u32) -> u32 {
        match &self.tables {
            Some(t) => t.quadrant_of[corner as usize],
            None => gray_inverse(corner),
        }
    }

    /// `b_n` as a corner mask.
    #[inline]
    pub fn corner(&self, quadrant: u32) -> u32 {
        match &self.tables {
            Some(t) => t.corner_of[quadrant as usize],
            None => gray(quadrant),
        }
    }
}
