//! Encoding and decoding of Hilbert order in any dimension `n ≥ 2`.
//!
//! A point of the grid `D_m = [0, 2^m)^n` maps to a position along the
//! level-`m` Hilbert curve, written as `m` digits in radix `2^n`. Four
//! encoders and four decoders are provided: arithmetic and bit-operation
//! forms, each in a variant that loops over all `m` levels and one that
//! starts at the effective level `k` of its input.
//!
//! ```
//! use hilbert_order::{Coordinate, CurveParams, Encoder, Decoder, GeneTable};
//!
//! let params = CurveParams::new(2, 2)?;
//! let genes = GeneTable::new(2)?;
//! let (idx, _) = Encoder::BitsFast.encode(&Coordinate::from_tuple(&[3, 0]), params, &genes)?;
//! assert_eq!(idx.to_u64(), Some(15));
//! let (p, _) = Decoder::Arith.decode(&idx, params, &genes)?;
//! assert_eq!(p.to_tuple(), [3, 0]);
//! # Ok::<(), hilbert_order::Error>(())
//! ```

pub mod bits;
pub mod decode;
pub mod encode;
pub mod error;
pub mod gene;
pub mod index;
pub mod oracle;
pub mod store;

pub use bits::{
    gray, gray_inverse, parity_prefix, reflect, vec_of_scalar, vec_to_scalar, BitVec,
    Coordinate, CurveParams, GrayMap, MAX_DIMENSION,
};
pub use decode::{
    decode_arith, decode_arith_fast, decode_bits, decode_bits_fast, index_effective_level,
    Decoder,
};
pub use encode::{
    effective_level, encode_arith, encode_arith_fast, encode_bits, encode_bits_fast, Encoder,
    StepCounter,
};
pub use error::{Error, Result};
pub use gene::{entry_exit, validate_gene_table, EntryExit, GeneEntry, GeneTable, ValidationReport};
pub use index::HilbertIndex;
pub use oracle::{enumerate_recursive, run_counter_benchmark, fused2d_update, CurveEnumeration};
pub use store::{load_table, save_table, GeneCache};
