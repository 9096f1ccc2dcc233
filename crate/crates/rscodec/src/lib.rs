//! Reed-Solomon erasure coding over GF(2^8) in two realizations.
//!
//! The matrix side builds systematic generator matrices (Vandermonde-based,
//! Cauchy, and a searched low-XOR Cauchy variant with its bit projection);
//! the polynomial side encodes by reduction modulo a generator polynomial
//! and decodes by evaluating the surviving codeword at the generator's
//! roots. Five ready-made codecs expose the same encode/decode surface:
//!
//! * `orig-crs` — Cauchy generator, bit-matrix XOR coding
//! * `good-crs` — searched Cauchy generator, bit-matrix XOR coding
//! * `vander-rs` — systematic Vandermonde generator, byte regions
//! * `poly-rs` — generator polynomial, baseline per-offset algorithm
//! * `opt-poly-rs` — generator polynomial with precomputed plans and
//!   region kernels
//!
//! ```
//! use rscodec::{Codec, CodecId, CodingParams, ErasurePattern, Stripe};
//!
//! let params = CodingParams::new(4, 3)?;
//! let codec = Codec::new(CodecId::OptPolyRs, params)?;
//! let data: Vec<Vec<u8>> = vec![vec![48], vec![6], vec![112], vec![70]];
//! let parity = codec.encode(&data)?;
//! assert_eq!(parity, vec![vec![243], vec![125], vec![142]]);
//!
//! let mut stripe = Stripe::new(data, parity)?;
//! stripe.data[0].fill(0);
//! stripe.data[1].fill(0);
//! let lost = ErasurePattern::new(vec![0, 1])?;
//! let recovered = codec.decode(&stripe, &lost)?;
//! assert_eq!(recovered, vec![vec![48], vec![6]]);
//! # Ok::<(), rscodec::Error>(())
//! ```

pub mod bench;
pub mod codec;
mod error;
pub mod gf256;
pub mod matrix;
pub mod oracle;
pub mod poly;
pub mod region;

pub use codec::{decode, encode, Codec, CodecId, CodingParams, DecodeContext, ErasurePattern, Stripe};
pub use error::{Error, Result};
