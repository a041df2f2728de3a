//! Positions along the curve as radix-`2^n` digit strings.

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::bits::{check_dimension, CurveParams};
use crate::error::{Error, Result};

/// Prefix that marks the digit-string rendering of an index.
pub const DIGIT_MARKER: char = 'h';

/// `(r_m r_{m−1} ⋯ r_1)` in radix `2^n`, stored most significant first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HilbertIndex {
    dim: u32,
    digits: Vec<u32>,
}

impl HilbertIndex {
    /// Builds an index from digits, most significant first.
    pub fn new(dim: u32, digits: Vec<u32>) -> Result<Self> {
        check_dimension(dim)?;
        let m = digits.len();
        for (i, &digit) in digits.iter().enumerate() {
            if u64::from(digit) >> dim != 0 {
                return Err(Error::DigitOutOfRange {
                    position: m - i,
                    digit,
                    n: dim,
                });
            }
        }
        Ok(HilbertIndex { dim, digits })
    }

    pub(crate) fn from_digits_unchecked(dim: u32, digits: Vec<u32>) -> Self {
        HilbertIndex { dim, digits }
    }

    pub fn zero(params: CurveParams) -> Self {
        HilbertIndex {
            dim: params.dim(),
            digits: vec![0; params.level() as usize],
        }
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Number of digits, i.e. the level `m`.
    pub fn level(&self) -> usize {
        self.digits.len()
    }

    /// Digits, most significant (`r_m`) first.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// `r_v`, 1-based from the least significant end.
    pub fn digit(&self, v: usize) -> Option<u32> {
        let m = self.digits.len();
        if v == 0 || v > m {
            None
        } else {
            Some(self.digits[m - v])
        }
    }

    /// Largest `v` with `r_v > 0`, or 1 when every digit is zero.
    pub fn effective_level(&self) -> usize {
        self.digits
            .iter()
            .position(|&d| d != 0)
            .map_or(1, |i| self.digits.len() - i)
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    /// Index as an integer `Σ r_v·(2^n)^(v−1)`.
    pub fn to_biguint(&self) -> BigUint {
        let n = self.dim as u64;
        let total = n * self.digits.len() as u64;
        let mut words = vec![0u32; total.div_ceil(32) as usize];
        for (k, &digit) in self.digits.iter().rev().enumerate() {
            let offset = k as u64 * n;
            let word = (offset / 32) as usize;
            let shift = offset % 32;
            let wide = u64::from(digit) << shift;
            words[word] |= wide as u32;
            if shift + n > 32 {
                words[word + 1] |= (wide >> 32) as u32;
            }
        }
        BigUint::from_slice(&words)
    }

    /// Converts `z ∈ [0, 2^{nm})` to digit form.
    pub fn from_biguint(z: &BigUint, params: CurveParams) -> Result<Self> {
        let bits = params.index_bits();
        if z.bits() > bits {
            return Err(Error::IndexOutOfRange {
                value: z.to_string(),
                bits,
            });
        }
        let n = u64::from(params.dim());
        let words = z.to_u32_digits();
        let word_at = |i: usize| words.get(i).copied().unwrap_or(0);
        let digit_mask = ((1u64 << n) - 1) as u32;
        let m = params.level() as usize;
        let mut digits = vec![0u32; m];
        for k in 0..m {
            let offset = k as u64 * n;
            let word = (offset / 32) as usize;
            let shift = offset % 32;
            let wide = u64::from(word_at(word)) | (u64::from(word_at(word + 1)) << 32);
            digits[m - 1 - k] = (wide >> shift) as u32 & digit_mask;
        }
        Ok(HilbertIndex {
            dim: params.dim(),
            digits,
        })
    }

    /// Machine-word view, available when `n·m ≤ 64`.
    pub fn to_u64(&self) -> Option<u64> {
        let n = self.dim;
        if u64::from(n) * self.digits.len() as u64 > 64 {
            return None;
        }
        Some(
            self.digits
                .iter()
                .fold(0u64, |acc, &d| acc.checked_shl(n).unwrap_or(0) | u64::from(d)),
        )
    }

    /// Word-sized counterpart of [`HilbertIndex::from_biguint`].
    pub fn from_u64(z: u64, params: CurveParams) -> Result<Self> {
        let bits = params.index_bits();
        if bits < 64 && z >> bits != 0 {
            return Err(Error::IndexOutOfRange {
                value: z.to_string(),
                bits,
            });
        }
        let n = params.dim();
        let mask = low_digit_mask(n);
        let m = params.level() as usize;
        let mut digits = vec![0u32; m];
        let mut rest = z;
        for slot in digits.iter_mut().rev() {
            *slot = (rest & mask) as u32;
            rest = rest.checked_shr(n).unwrap_or(0);
        }
        Ok(HilbertIndex {
            dim: n,
            digits,
        })
    }

    /// Renders as `h<n>:<r_m>.<r_{m-1}>. … .<r_1>`.
    pub fn to_digit_string(&self) -> String {
        let mut s = format!("{DIGIT_MARKER}{}:", self.dim);
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                s.push('.');
            }
            s.push_str(&d.to_string());
        }
        s
    }

    /// Parses either a decimal integer or the digit-string form.
    pub fn parse(text: &str, params: CurveParams) -> Result<Self> {
        let text = text.trim();
        let bad = || Error::Malformed(format!("cannot parse index {text:?}"));
        if let Some(rest) = text.strip_prefix(DIGIT_MARKER) {
            let (dim, body) = rest.split_once(':').ok_or_else(bad)?;
            let dim: u32 = dim.parse().map_err(|_| bad())?;
            if dim != params.dim() {
                return Err(Error::TableMismatch {
                    table: dim,
                    curve: params.dim(),
                });
            }
            let digits = if body.is_empty() {
                Vec::new()
            } else {
                body.split('.')
                    .map(|d| d.parse::<u32>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?
            };
            if digits.len() != params.level() as usize {
                return Err(Error::DigitCountMismatch {
                    expected: params.level() as usize,
                    found: digits.len(),
                });
            }
            return HilbertIndex::new(dim, digits);
        }
        let z = BigUint::parse_bytes(text.as_bytes(), 10).ok_or_else(bad)?;
        match z.to_u64() {
            Some(z) => HilbertIndex::from_u64(z, params),
            None => HilbertIndex::from_biguint(&z, params),
        }
    }
}

fn low_digit_mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1 << n) - 1
    }
}

/// Decimal when the index fits a machine word, digit form otherwise.
impl fmt::Display for HilbertIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_u64() {
            Some(z) => write!(f, "{z}"),
            None => f.write_str(&self.to_digit_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(n: u32, m: u32) -> CurveParams {
        CurveParams::new(n, m).unwrap()
    }

    #[test]
    fn integer_examples() {
        let a = HilbertIndex::new(2, vec![0, 2]).unwrap();
        assert_eq!(a.to_u64(), Some(2));
        assert_eq!(a.to_biguint(), BigUint::from(2u32));
        let b = HilbertIndex::new(2, vec![3, 3]).unwrap();
        assert_eq!(b.to_u64(), Some(15));
        assert_eq!(b.digit(1), Some(3));
        assert_eq!(b.digit(3), None);
        assert_eq!(HilbertIndex::from_u64(13, params(2, 2)).unwrap().digits(), &[3, 1]);
    }

    #[test]
    fn range_errors() {
        assert!(matches!(
            HilbertIndex::from_u64(16, params(2, 2)),
            Err(Error::IndexOutOfRange { .. })
        ));
        let big = BigUint::from(1u32) << 192u32;
        assert!(HilbertIndex::from_biguint(&big, params(3, 64)).is_err());
        assert!(HilbertIndex::from_biguint(&(big - 1u32), params(3, 64)).is_ok());
        assert!(matches!(
            HilbertIndex::new(2, vec![4, 0]),
            Err(Error::DigitOutOfRange { position: 2, digit: 4, n: 2 })
        ));
    }

    #[test]
    fn effective_level() {
        assert_eq!(HilbertIndex::zero(params(3, 5)).effective_level(), 1);
        assert_eq!(HilbertIndex::new(2, vec![0, 3]).unwrap().effective_level(), 1);
        assert_eq!(HilbertIndex::new(2, vec![2, 0, 1]).unwrap().effective_level(), 3);
    }

    #[test]
    fn rendering() {
        let small = HilbertIndex::new(2, vec![3, 1]).unwrap();
        assert_eq!(small.to_string(), "13");
        assert_eq!(small.to_digit_string(), "h2:3.1");
        let p = params(3, 30);
        let large = HilbertIndex::from_biguint(&(BigUint::from(1u32) << 80u32), p).unwrap();
        assert!(large.to_string().starts_with("h3:"));
        assert_eq!(HilbertIndex::parse(&large.to_string(), p).unwrap(), large);
        assert_eq!(
            HilbertIndex::parse("1208925819614629174706176", p).unwrap(),
            large
        );
        assert!(HilbertIndex::parse("h3:1.2", p).is_err());
        assert!(HilbertIndex::parse("x", p).is_err());
        assert_eq!(HilbertIndex::zero(params(2, 0)).to_string(), "0");
    }

    proptest! {
        #[test]
        fn integer_round_trip(n in 2u32..=12, digits in proptest::collection::vec(any::<u32>(), 0..40)) {
            let digits: Vec<u32> = digits.into_iter().map(|d| d & ((1 << n) - 1)).collect();
            let p = params(n, digits.len() as u32);
            let idx = HilbertIndex::new(n, digits).unwrap();
            let z = idx.to_biguint();
            prop_assert_eq!(&HilbertIndex::from_biguint(&z, p).unwrap(), &idx);
            if let Some(w) = idx.to_u64() {
                prop_assert_eq!(Some(w), z.to_u64());
                prop_assert_eq!(HilbertIndex::from_u64(w, p).unwrap(), idx);
            }
        }
    }
}
