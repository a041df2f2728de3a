//! Reference machinery that does not go through the per-point loops:
//! whole-curve construction by recursive expansion, the closed-form 2-D
//! update rules, walk checks, and the iteration-count benchmark.

use std::fmt;
use std::hint::black_box;
use std::time::Instant;

use crate::bits::{Coordinate, CurveParams};
use crate::decode::Decoder;
use crate::encode::Encoder;
use crate::error::{Error, Result};
use crate::gene::GeneTable;

/// Largest `n·m` that [`enumerate_recursive`] will expand.
pub const ENUMERATION_LIMIT_BITS: u64 = 24;

/// Every point of `D_m` in curve order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveEnumeration {
    pub params: CurveParams,
    pub points: Vec<Coordinate>,
}

/// Builds the level-`m` curve from the level-`(m−1)` curve: one transformed
/// copy per quadrant, in cell order, each reflected across the exchange
/// hyperplane `x_i = x_j` and then the reverse hyperplanes
/// `x_i = (2^{m−1} − 1)/2`, and translated into its subcube.
pub fn enumerate_recursive(params: CurveParams, g: &GeneTable) -> Result<CurveEnumeration> {
    let bits = params.index_bits();
    if bits > ENUMERATION_LIMIT_BITS {
        return Err(Error::EnumerationTooLarge {
            bits,
            limit: ENUMERATION_LIMIT_BITS,
        });
    }
    g.check_params(params)?;
    let points = expand(params.dim() as usize, params.level(), g)
        .into_iter()
        .map(Coordinate::from_slots)
        .collect();
    Ok(CurveEnumeration { params, points })
}

fn expand(n: usize, level: u32, g: &GeneTable) -> Vec<Vec<u64>> {
    if level == 0 {
        return vec![vec![0; n]];
    }
    let inner = expand(n, level - 1, g);
    let side = 1u64 << (level - 1);
    let mut out = Vec::with_capacity(inner.len() << n);
    for q in 0..1u32 << n {
        let corner = cell_corner(q, n);
        let gene = g.entry(q);
        let flagged = |v: &crate::bits::BitVec| -> Vec<usize> {
            (0..n).filter(|&i| v.slot(i as u32) == 1).collect()
        };
        let exchange = flagged(&gene.exchange);
        let reverse = flagged(&gene.reverse);
        for p in &inner {
            let mut p = p.clone();
            if let [i, j] = exchange[..] {
                p.swap(i, j);
            }
            for &i in &reverse {
                p[i] = side - 1 - p[i];
            }
            for (i, c) in corner.iter().enumerate() {
                p[i] += c * side;
            }
            out.push(p);
        }
    }
    out
}

/// Corner of quadrant `q` in slot order, from the digit-by-digit rule:
/// the tuple entry at position `t` is `a_t`, flipped when `a_{t−1}` is 1.
fn cell_corner(q: u32, n: usize) -> Vec<u64> {
    let mut tuple = Vec::with_capacity(n);
    let mut previous = 0;
    for t in (0..n).rev() {
        let a = u64::from((q >> t) & 1);
        tuple.push(if previous == 1 { 1 - a } else { a });
        previous = a;
    }
    tuple.reverse();
    tuple
}

/// Checks that `points` visits every point of `D_m` exactly once with unit
/// Manhattan steps.
pub fn check_walk<I>(params: CurveParams, points: I) -> Result<(), String>
where
    I: IntoIterator<Item = Result<Coordinate, String>>,
{
    let n = params.dim() as usize;
    let m = params.level();
    let bits = params.index_bits();
    if bits > 40 {
        return Err(format!("refusing to walk 2^{bits} points"));
    }
    let count = 1usize << bits;
    let mut seen = vec![false; count];
    let mut previous: Option<Coordinate> = None;
    let mut visited = 0usize;
    for (z, p) in points.into_iter().enumerate() {
        let p = p?;
        if p.dim() != n {
            return Err(format!("point {z} has {} components", p.dim()));
        }
        let mut cell = 0usize;
        for &c in p.slots().iter().rev() {
            if c >> m != 0 {
                return Err(format!("point {z} = {p} leaves D_{m}"));
            }
            cell = (cell << m) | c as usize;
        }
        if std::mem::replace(&mut seen[cell], true) {
            return Err(format!("point {p} visited twice (again at {z})"));
        }
        if let Some(prev) = &previous {
            let d = prev.manhattan(&p).expect("same dimension");
            if d != 1 {
                return Err(format!("step {}→{z} from {prev} to {p} has length {d}", z - 1));
            }
        }
        previous = Some(p);
        visited += 1;
    }
    if visited != count {
        return Err(format!("visited {visited} of {count} points"));
    }
    Ok(())
}

/// Combined strip/reverse/exchange update for `n = 2` in quadrant `q` at
/// level `m`, with `x = x_2` and `y = x_1`.
pub fn fused2d_update(q: u32, x: u64, y: u64, m: u32) -> Result<(u64, u64)> {
    if q > 3 {
        return Err(Error::QuadrantOutOfRange {
            quadrant: u64::from(q),
            n: 2,
        });
    }
    if m == 0 || m > 64 {
        return Err(Error::Malformed(format!("level {m} outside 1..=64")));
    }
    let half = 1u64 << (m - 1);
    let full = crate::bits::low_mask(m);
    let out_of_range = |position: usize, value: u64| Error::ComponentOutOfRange {
        position,
        value,
        level: m,
    };
    let sub = |v: u64, position: usize| v.checked_sub(half).ok_or_else(|| out_of_range(position, v));
    let under = |v: u64, position: usize| {
        (half - 1)
            .checked_sub(v)
            .ok_or_else(|| out_of_range(position, v))
    };
    match q {
        0 => Ok((y, x)),
        1 => Ok((x, sub(y, 1)?)),
        2 => Ok((sub(x, 2)?, sub(y, 1)?)),
        _ => Ok((under(y, 1)?, full.checked_sub(x).ok_or_else(|| out_of_range(2, x))?)),
    }
}

/// `f_2` written out as a table: `(x_2 bit, x_1 bit) → quadrant`.
const F2: [[u32; 2]; 2] = [[0, 1], [3, 2]];

/// Encodes a 2-D point by applying [`fused2d_update`] at each level.
pub fn fused2d_encode(x: u64, y: u64, m: u32) -> Result<u64> {
    if m > 32 {
        return Err(Error::Malformed(format!("level {m} too deep for a u64 index")));
    }
    let (mut x, mut y) = (x, y);
    let mut z = 0u64;
    for v in (1..=m).rev() {
        let q = F2[((x >> (v - 1)) & 1) as usize][((y >> (v - 1)) & 1) as usize];
        z = (z << 2) | u64::from(q);
        (x, y) = fused2d_update(q, x, y, v)?;
    }
    Ok(z)
}

/// Which routine a benchmark row measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Routine {
    Encode(Encoder),
    Decode(Decoder),
}

impl Routine {
    pub fn number(self) -> u8 {
        match self {
            Routine::Encode(e) => e.number(),
            Routine::Decode(d) => d.number(),
        }
    }

    pub fn is_fast(self) -> bool {
        match self {
            Routine::Encode(e) => e.is_fast(),
            Routine::Decode(d) => d.is_fast(),
        }
    }
}

impl fmt::Display for Routine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Routine::Encode(e) => e.fmt(f),
            Routine::Decode(d) => d.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub routine: Routine,
    pub level: u32,
    pub iterations: u64,
    pub expected: u64,
    pub median_ns: f64,
}

impl BenchRow {
    pub fn counter_ok(&self) -> bool {
        self.iterations == self.expected
    }
}

/// Per-routine, per-level iteration counts and timing medians.
#[derive(Clone, Debug, PartialEq)]
pub struct CounterReport {
    pub point: Coordinate,
    pub rows: Vec<BenchRow>,
}

impl CounterReport {
    pub fn counters_ok(&self) -> bool {
        self.rows.iter().all(BenchRow::counter_ok)
    }

    pub fn row(&self, routine: Routine, level: u32) -> Option<&BenchRow> {
        self.rows
            .iter()
            .find(|r| r.routine == routine && r.level == level)
    }

    /// Iteration counts of `routine` in level order.
    pub fn iterations(&self, routine: Routine) -> Vec<u64> {
        self.rows
            .iter()
            .filter(|r| r.routine == routine)
            .map(|r| r.iterations)
            .collect()
    }

    /// One `key=value` record per row.
    pub fn to_records(&self) -> String {
        let point = self
            .point
            .to_tuple()
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",");
        let mut out = String::new();
        for r in &self.rows {
            out.push_str(&format!(
                "algo={} kind={} complexity={} point={point} level={} iterations={} expected={} median_ns={:.2} counter_ok={}\n",
                r.routine.number(),
                if matches!(r.routine, Routine::Encode(_)) { "encode" } else { "decode" },
                if r.routine.is_fast() { "O(k)" } else { "O(m)" },
                r.level,
                r.iterations,
                r.expected,
                r.median_ns,
                r.counter_ok(),
            ));
        }
        out
    }
}

impl fmt::Display for CounterReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "point {}", self.point)?;
        writeln!(
            f,
            "{:<22} {:>7} {:>11} {:>9} {:>12}",
            "routine", "level", "iterations", "expected", "median (ns)"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<22} {:>7} {:>11} {:>9} {:>12.1}{}",
                r.routine.to_string(),
                r.level,
                r.iterations,
                r.expected,
                r.median_ns,
                if r.counter_ok() { "" } else { "  MISMATCH" }
            )?;
        }
        Ok(())
    }
}

/// Runs all eight routines on `point` at each level, recording loop counts
/// and the median time per call over `samples` timed batches.
pub fn run_counter_benchmark(
    point: &Coordinate,
    levels: &[u32],
    g: &GeneTable,
    samples: usize,
) -> Result<CounterReport> {
    let n = g.dim();
    let mut rows = Vec::new();
    for &level in levels {
        let params = CurveParams::new(n, level)?;
        params.check(point)?;
        let (idx, _) = Encoder::Bits.encode(point, params, g)?;
        let point_k = u64::from(point.effective_level().min(level));
        let index_k = (idx.effective_level() as u64).min(u64::from(level));
        for enc in Encoder::ALL {
            let (_, counter) = enc.encode(point, params, g)?;
            let median_ns = time_per_call(samples, || {
                black_box(enc.encode(black_box(point), params, g).is_ok());
            });
            rows.push(BenchRow {
                routine: Routine::Encode(enc),
                level,
                iterations: counter.iterations,
                expected: if enc.is_fast() { point_k } else { u64::from(level) },
                median_ns,
            });
        }
        for dec in Decoder::ALL {
            let (_, counter) = dec.decode(&idx, params, g)?;
            let median_ns = time_per_call(samples, || {
                black_box(dec.decode(black_box(&idx), params, g).is_ok());
            });
            rows.push(BenchRow {
                routine: Routine::Decode(dec),
                level,
                iterations: counter.iterations,
                expected: if dec.is_fast() { index_k } else { u64::from(level) },
                median_ns,
            });
        }
    }
    Ok(CounterReport {
        point: point.clone(),
        rows,
    })
}

fn time_per_call(samples: usize, mut f: impl FnMut()) -> f64 {
    if samples == 0 {
        return f64::NAN;
    }
    // size batches to roughly 50µs each
    let probe = Instant::now();
    f();
    let once = probe.elapsed().as_nanos().max(1);
    let batch = (50_000 / once).clamp(1, 10_000) as usize;
    let mut times: Vec<f64> = (0..samples)
        .map(|_| {
            let start = Instant::now();
            for _ in 0..batch {
                f();
            }
            start.elapsed().as_nanos() as f64 / batch as f64
        })
        .collect();
    times.sort_by(f64::total_cmp);
    times[times.len() / 2]
}
