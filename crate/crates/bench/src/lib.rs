//! Fixtures shared by the criterion benches.

use hilbert_order::{Coordinate, CurveParams, Encoder, GeneTable, HilbertIndex};

/// Levels swept by the O(m) vs O(k) comparison.
pub const LEVELS: [u32; 4] = [8, 32, 128, 256];

/// A point with a small effective level, encoded once per curve level.
pub struct Fixture {
    pub params: CurveParams,
    pub point: Coordinate,
    pub index: HilbertIndex,
}

pub fn fixtures(tuple: &[u64], g: &GeneTable) -> Vec<Fixture> {
    LEVELS
        .iter()
        .map(|&m| {
            let params = CurveParams::new(tuple.len() as u32, m).expect("params");
            let point = Coordinate::from_tuple(tuple);
            let (index, _) = Encoder::Arith.encode(&point, params, g).expect("encode");
            Fixture { params, point, index }
        })
        .collect()
}
