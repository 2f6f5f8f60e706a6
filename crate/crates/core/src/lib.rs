//! Universal maximum-likelihood decoding of block codes.
//!
//! Decoding a received word `y` against a codebook `{c_1, .., c_S}` reduces to
//! one product `V(y) · M`: `V(y)` stacks the per-position log-likelihoods of
//! every input symbol, and column `j` of the binary matrix `M` is the one-hot
//! encoding of `c_j`. The product is computed with `O(nq S / log S)` additions
//! by the [`mailman`] kernel, then a linear scan picks the winner.
//!
//! ```
//! use mldec::channels::DiscreteChannel;
//! use mldec::codes::{build_codebook_matrix, Code, Limits};
//! use mldec::decoder::{ml_decode, TieTolerance};
//!
//! let code = Code::binary(&["001", "010", "100", "111"]).unwrap();
//! let m = build_codebook_matrix(&code, &Limits::default()).unwrap();
//! let bsc = DiscreteChannel::bsc(0.1).unwrap();
//! let r = ml_decode(&m, &code, &bsc, &[0, 0, 0], TieTolerance::default()).unwrap();
//! assert_eq!(r.ties, vec![0, 1, 2]);
//! ```

pub mod channels;
pub mod codes;
pub mod decoder;
pub mod error;
pub mod io;
pub mod mailman;
pub mod oracle;
pub mod simulate;

mod par;

pub use error::{Error, Result};
