//! Index to coordinate, the encoders run backwards: start from the corner
//! named by `r_1`, then for each higher digit apply the quadrant's exchange,
//! then its reverse, then lift the point into the quadrant's subcube.

use std::fmt;
use std::str::FromStr;

use crate::bits::{low_mask, Coordinate, CurveParams};
use crate::encode::{reverse_slots, StepCounter};
use crate::error::{Error, Result};
use crate::gene::GeneTable;
use crate::index::HilbertIndex;

/// The four decoders, numbered 5 to 8.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decoder {
    Arith,
    Bits,
    ArithFast,
    BitsFast,
}

impl Decoder {
    pub const ALL: [Decoder; 4] = [
        Decoder::Arith,
        Decoder::Bits,
        Decoder::ArithFast,
        Decoder::BitsFast,
    ];

    pub fn number(self) -> u8 {
        match self {
            Decoder::Arith => 5,
            Decoder::Bits => 6,
            Decoder::ArithFast => 7,
            Decoder::BitsFast => 8,
        }
    }

    pub fn from_number(number: u8) -> Option<Self> {
        Decoder::ALL.into_iter().find(|d| d.number() == number)
    }

    pub fn is_fast(self) -> bool {
        matches!(self, Decoder::ArithFast | Decoder::BitsFast)
    }

    pub fn decode(
        self,
        idx: &HilbertIndex,
        params: CurveParams,
        g: &GeneTable,
    ) -> Result<(Coordinate, StepCounter)> {
        match self {
            Decoder::Arith => decode_arith(idx, params, g),
            Decoder::Bits => decode_bits(idx, params, g),
            Decoder::ArithFast => decode_arith_fast(idx, params, g),
            Decoder::BitsFast => decode_bits_fast(idx, params, g),
        }
    }
}

impl fmt::Display for Decoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cost = if self.is_fast() { "O(k)" } else { "O(m)" };
        let ops = match self {
            Decoder::Arith | Decoder::ArithFast => "arith",
            Decoder::Bits | Decoder::BitsFast => "bits",
        };
        write!(f, "decode-{} {cost} {ops}", self.number())
    }
}

/// Accepts 5-8, and 1-4 as the decoder paired with that encoder.
impl FromStr for Decoder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse::<u8>()
            .ok()
            .and_then(|n| match n {
                1..=4 => Decoder::from_number(n + 4),
                _ => Decoder::from_number(n),
            })
            .ok_or_else(|| Error::Malformed(format!("unknown decoder {s:?}, expected 1-8")))
    }
}

/// Position of the highest nonzero digit, 1 for the zero index.
pub fn index_effective_level(idx: &HilbertIndex) -> usize {
    idx.effective_level()
}

/// Levels 2 and up of the arithmetic decoder.
pub fn decode_step_arith(x: &mut [u64], v: u32, r: u32, g: &GeneTable) {
    if let Some((a, b)) = g.swap(r) {
        x.swap(a, b);
    }
    reverse_slots(x, g.reverse_mask(r), |xi| low_mask(v - 1) - xi);
    let s = g.gray().corner(r);
    if s != 0 {
        let half = 1u64 << (v - 1);
        for (i, xi) in x.iter_mut().enumerate() {
            if (s >> i) & 1 == 1 {
                *xi += half;
            }
        }
    }
}

/// Levels 2 and up of the bit-operation decoder.
pub fn decode_step_bits(x: &mut [u64], v: u32, r: u32, g: &GeneTable) {
    if let Some((a, b)) = g.swap(r) {
        x.swap(a, b);
    }
    let keep = low_mask(v - 1);
    reverse_slots(x, g.reverse_mask(r), |xi| xi ^ keep);
    let mut s = g.gray().corner(r);
    while s != 0 {
        let i = s.trailing_zeros() as usize;
        x[i] ^= 1 << (v - 1);
        s &= s - 1;
    }
}

type Step = fn(&mut [u64], u32, u32, &GeneTable);

fn run(
    idx: &HilbertIndex,
    params: CurveParams,
    g: &GeneTable,
    step: Step,
    fast: bool,
) -> Result<(Coordinate, StepCounter)> {
    let n = params.dim();
    if idx.dim() != n {
        return Err(Error::TableMismatch {
            table: idx.dim(),
            curve: n,
        });
    }
    let m = params.level();
    if idx.level() != m as usize {
        return Err(Error::DigitCountMismatch {
            expected: m as usize,
            found: idx.level(),
        });
    }
    if m == 0 {
        return Ok((Coordinate::origin(n), StepCounter::default()));
    }
    g.check_params(params)?;
    let k = idx.effective_level();
    if !idx.is_zero() && k > 64 {
        return Err(Error::Unrepresentable { level: k });
    }
    let top = if fast { k as u32 } else { m };

    let first = g.gray().corner(idx.digit(1).expect("m >= 1"));
    let mut x: Vec<u64> = (0..n).map(|i| u64::from((first >> i) & 1)).collect();
    let mut counter = StepCounter { iterations: 1 };
    for v in 2..=top {
        let r = idx.digit(v as usize).expect("v <= m");
        step(&mut x, v, r, g);
        counter.iterations += 1;
    }
    if fast && (m - top) % 2 == 1 {
        let last = x.len() - 1;
        x.swap(0, last);
    }
    Ok((Coordinate::from_slots(x), counter))
}

pub fn decode_arith(
    idx: &HilbertIndex,
    params: CurveParams,
    g: &GeneTable,
) -> Result<(Coordinate, StepCounter)> {
    run(idx, params, g, decode_step_arith, false)
}

pub fn decode_bits(
    idx: &HilbertIndex,
    params: CurveParams,
    g: &GeneTable,
) -> Result<(Coordinate, StepCounter)> {
    run(idx, params, g, decode_step_bits, false)
}

pub fn decode_arith_fast(
    idx: &HilbertIndex,
    params: CurveParams,
    g: &GeneTable,
) -> Result<(Coordinate, StepCounter)> {
    run(idx, params, g, decode_step_arith, true)
}

pub fn decode_bits_fast(
    idx: &HilbertIndex,
    params: CurveParams,
    g: &GeneTable,
) -> Result<(Coordinate, StepCounter)> {
    run(idx, params, g, decode_step_bits, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(dec: Decoder, z: u64, params: CurveParams, g: &GeneTable) -> Vec<u64> {
        let idx = HilbertIndex::from_u64(z, params).unwrap();
        dec.decode(&idx, params, g).unwrap().0.to_tuple()
    }

    #[test]
    fn level_one_is_the_cell_order() {
        let params = CurveParams::new(2, 1).unwrap();
        let g = GeneTable::new(2).unwrap();
        for dec in Decoder::ALL {
            assert_eq!(point(dec, 0, params, &g), [0, 0]);
            assert_eq!(point(dec, 1, params, &g), [0, 1]);
            assert_eq!(point(dec, 2, params, &g), [1, 1]);
            assert_eq!(point(dec, 3, params, &g), [1, 0]);
        }
    }

    #[test]
    fn level_two_hand_executions() {
        let params = CurveParams::new(2, 2).unwrap();
        let g = GeneTable::new(2).unwrap();
        for dec in Decoder::ALL {
            assert_eq!(point(dec, 2, params, &g), [1, 1], "{dec}");
            assert_eq!(point(dec, 15, params, &g), [3, 0], "{dec}");
            assert_eq!(point(dec, 13, params, &g), [2, 1], "{dec}");
            assert_eq!(point(dec, 3, params, &g), [0, 1], "{dec}");
            assert_eq!(point(dec, 0, params, &g), [0, 0], "{dec}");
        }
    }

    #[test]
    fn counters() {
        let g = GeneTable::new(3).unwrap();
        let params = CurveParams::new(3, 256).unwrap();
        let zero = HilbertIndex::zero(params);
        let (p, c) = decode_bits_fast(&zero, params, &g).unwrap();
        assert_eq!(p, Coordinate::origin(3));
        assert_eq!(c.iterations, 1);
        assert_eq!(decode_arith(&zero, params, &g).unwrap().1.iterations, 256);

        let mut digits = vec![0; 256];
        digits[253] = 1;
        let idx = HilbertIndex::new(3, digits).unwrap();
        assert_eq!(index_effective_level(&idx), 3);
        assert_eq!(decode_arith_fast(&idx, params, &g).unwrap().1.iterations, 3);
    }

    #[test]
    fn errors() {
        let params = CurveParams::new(2, 2).unwrap();
        let g = GeneTable::new(2).unwrap();
        let short = HilbertIndex::new(2, vec![1]).unwrap();
        assert!(matches!(
            decode_bits(&short, params, &g),
            Err(Error::DigitCountMismatch { expected: 2, found: 1 })
        ));
        let deep = CurveParams::new(2, 70).unwrap();
        let mut digits = vec![0; 70];
        digits[0] = 1;
        let idx = HilbertIndex::new(2, digits).unwrap();
        assert!(matches!(
            decode_bits(&idx, deep, &g),
            Err(Error::Unrepresentable { level: 70 })
        ));
    }

    #[test]
    fn level_zero_is_origin() {
        let params = CurveParams::new(4, 0).unwrap();
        let g = GeneTable::new(4).unwrap();
        for dec in Decoder::ALL {
            let (p, c) = dec.decode(&HilbertIndex::zero(params), params, &g).unwrap();
            assert_eq!(p, Coordinate::origin(4));
            assert_eq!(c.iterations, 0);
        }
    }

    #[test]
    fn decoder_names() {
        assert_eq!("2".parse::<Decoder>().unwrap(), Decoder::Bits);
        assert_eq!("8".parse::<Decoder>().unwrap(), Decoder::BitsFast);
        assert!("9".parse::<Decoder>().is_err());
    }
}
