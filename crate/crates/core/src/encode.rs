//! Coordinate to index.
//!
//! All four encoders walk the levels from the top down. At level `v` the
//! top bits of the components pick the quadrant `r_v`; the point is then
//! moved into that quadrant's local frame by stripping the top bit,
//! applying the quadrant's reverse command and then its exchange command.
//!
//! The `_fast` variants start at the effective level `k` of the point.
//! Every level above `k` lies in quadrant 0, whose only command swaps `x_1`
//! and `x_n`, so the skipped levels collapse to one swap when `m − k` is odd.

use std::fmt;
use std::str::FromStr;

use crate::bits::{low_mask, Coordinate, CurveParams};
use crate::error::{Error, Result};
use crate::gene::GeneTable;
use crate::index::HilbertIndex;

/// Number of main-loop passes made by one encode or decode call.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StepCounter {
    pub iterations: u64,
}

/// The four encoders, numbered 1 to 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Encoder {
    /// Arithmetic updates, `m` passes.
    Arith,
    /// Mask and reflection updates, `m` passes.
    Bits,
    /// Arithmetic updates, `k` passes.
    ArithFast,
    /// Mask and reflection updates, `k` passes.
    BitsFast,
}

impl Encoder {
    pub const ALL: [Encoder; 4] = [
        Encoder::Arith,
        Encoder::Bits,
        Encoder::ArithFast,
        Encoder::BitsFast,
    ];

    pub fn number(self) -> u8 {
        match self {
            Encoder::Arith => 1,
            Encoder::Bits => 2,
            Encoder::ArithFast => 3,
            Encoder::BitsFast => 4,
        }
    }

    pub fn from_number(number: u8) -> Option<Self> {
        Encoder::ALL.into_iter().find(|e| e.number() == number)
    }

    pub fn is_fast(self) -> bool {
        matches!(self, Encoder::ArithFast | Encoder::BitsFast)
    }

    pub fn encode(
        self,
        p: &Coordinate,
        params: CurveParams,
        g: &GeneTable,
    ) -> Result<(HilbertIndex, StepCounter)> {
        match self {
            Encoder::Arith => encode_arith(p, params, g),
            Encoder::Bits => encode_bits(p, params, g),
            Encoder::ArithFast => encode_arith_fast(p, params, g),
            Encoder::BitsFast => encode_bits_fast(p, params, g),
        }
    }
}

impl fmt::Display for Encoder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cost = if self.is_fast() { "O(k)" } else { "O(m)" };
        let ops = match self {
            Encoder::Arith | Encoder::ArithFast => "arith",
            Encoder::Bits | Encoder::BitsFast => "bits",
        };
        write!(f, "encode-{} {cost} {ops}", self.number())
    }
}

impl FromStr for Encoder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse::<u8>()
            .ok()
            .and_then(Encoder::from_number)
            .ok_or_else(|| Error::Malformed(format!("unknown encoder {s:?}, expected 1-4")))
    }
}

/// Bit-length of the largest component, 1 for the origin.
pub fn effective_level(p: &Coordinate) -> u32 {
    p.effective_level()
}

/// One level of the arithmetic encoder. Expects every component below
/// `2^v`; returns `r_v` and leaves the point in the quadrant's frame.
pub fn encode_step_arith(x: &mut [u64], v: u32, g: &GeneTable) -> u32 {
    let half = 1u64.checked_shl(v - 1);
    let mut corner = 0u32;
    if let Some(half) = half {
        for (i, xi) in x.iter_mut().enumerate() {
            if *xi >= half {
                corner |= 1 << i;
                *xi -= half;
            }
        }
    }
    let r = g.gray().quadrant(corner);
    reverse_slots(x, g.reverse_mask(r), |xi| low_mask(v - 1) - xi);
    if let Some((a, b)) = g.swap(r) {
        x.swap(a, b);
    }
    r
}

/// One level of the bit-operation encoder; same contract as
/// [`encode_step_arith`].
pub fn encode_step_bits(x: &mut [u64], v: u32, g: &GeneTable) -> u32 {
    let keep = low_mask(v - 1);
    let mut corner = 0u32;
    if v <= 64 {
        for (i, xi) in x.iter_mut().enumerate() {
            corner |= (((*xi >> (v - 1)) & 1) as u32) << i;
            *xi &= keep;
        }
    }
    let r = g.gray().quadrant(corner);
    reverse_slots(x, g.reverse_mask(r), |xi| xi ^ keep);
    if let Some((a, b)) = g.swap(r) {
        x.swap(a, b);
    }
    r
}

#[inline]
pub(crate) fn reverse_slots(x: &mut [u64], mut mask: u32, reflect: impl Fn(u64) -> u64) {
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        x[i] = reflect(x[i]);
        mask &= mask - 1;
    }
}

type Step = fn(&mut [u64], u32, &GeneTable) -> u32;

fn run(
    p: &Coordinate,
    params: CurveParams,
    g: &GeneTable,
    step: Step,
    fast: bool,
) -> Result<(HilbertIndex, StepCounter)> {
    params.check(p)?;
    let m = params.level();
    if m == 0 {
        return Ok((HilbertIndex::zero(params), StepCounter::default()));
    }
    g.check_params(params)?;
    let mut x = p.slots().to_vec();
    let start = if fast {
        let k = effective_level(p);
        if (m - k) % 2 == 1 {
            let last = x.len() - 1;
            x.swap(0, last);
        }
        k
    } else {
        m
    };
    let mut digits = vec![0u32; m as usize];
    let mut counter = StepCounter::default();
    for v in (1..=start).rev() {
        digits[(m - v) as usize] = step(&mut x, v, g);
        counter.iterations += 1;
    }
    Ok((
        HilbertIndex::from_digits_unchecked(params.dim(), digits),
        counter,
    ))
}

pub fn encode_arith(
    p: &Coordinate,
    params: CurveParams,
    g: &GeneTable,
) -> Result<(HilbertIndex, StepCounter)> {
    run(p, params, g, encode_step_arith, false)
}

pub fn encode_bits(
    p: &Coordinate,
    params: CurveParams,
    g: &GeneTable,
) -> Result<(HilbertIndex, StepCounter)> {
    run(p, params, g, encode_step_bits, false)
}

pub fn encode_arith_fast(
    p: &Coordinate,
    params: CurveParams,
    g: &GeneTable,
) -> Result<(HilbertIndex, StepCounter)> {
    run(p, params, g, encode_step_arith, true)
}

pub fn encode_bits_fast(
    p: &Coordinate,
    params: CurveParams,
    g: &GeneTable,
) -> Result<(HilbertIndex, StepCounter)> {
    run(p, params, g, encode_step_bits, true)
}
