//! Bulk byte-region kernels: multiply a region by a field constant
//! (optionally accumulating) and XOR one region into another. Every codec
//! funnels its block-sized work through these two loops.

use crate::gf256;
use crate::{Error, Result};

/// dst[i] = src[i] * c, or dst[i] ^= src[i] * c when accumulating.
///
/// One 256-byte product-table row is fetched per call, not per byte; the
/// accumulate path XORs a machine word at a time with a scalar tail.
pub fn mul_const(src: &[u8], c: u8, dst: &mut [u8], accumulate: bool) -> Result<()> {
    if src.len() != dst.len() {
        return Err(Error::LengthMismatch {
            src: src.len(),
            dst: dst.len(),
        });
    }
    let row = gf256::mul_row(c);
    if !accumulate {
        for (d, &s) in dst.iter_mut().zip(src) {
            *d = row[s as usize];
        }
        return Ok(());
    }
    let mut d_words = dst.chunks_exact_mut(8);
    let mut s_words = src.chunks_exact(8);
    for (d, s) in (&mut d_words).zip(&mut s_words) {
        let looked = u64::from_le_bytes([
            row[s[0] as usize],
            row[s[1] as usize],
            row[s[2] as usize],
            row[s[3] as usize],
            row[s[4] as usize],
            row[s[5] as usize],
            row[s[6] as usize],
            row[s[7] as usize],
        ]);
        let cur = u64::from_le_bytes(d.try_into().unwrap());
        d.copy_from_slice(&(cur ^ looked).to_le_bytes());
    }
    for (d, &s) in d_words.into_remainder().iter_mut().zip(s_words.remainder()) {
        *d ^= row[s as usize];
    }
    Ok(())
}

/// Bytes of every block processed per pass before moving on, so that the
/// accumulators and table rows stay cache-resident across passes.
pub(crate) const CHUNK: usize = 16 * 1024;

/// out[r] = sum_c rows[r][c] * srcs[c], chunk-wise: each CHUNK-sized slice
/// of every source is consumed against all output rows while it is hot.
pub(crate) fn apply_matrix(rows: &[Vec<u8>], srcs: &[&[u8]], len: usize) -> Result<Vec<Vec<u8>>> {
    for src in srcs {
        if src.len() != len {
            return Err(Error::LengthMismatch {
                src: src.len(),
                dst: len,
            });
        }
    }
    let mut out = vec![vec![0u8; len]; rows.len()];
    let mut start = 0;
    while start < len {
        let end = (start + CHUNK).min(len);
        for (row, acc) in rows.iter().zip(&mut out) {
            debug_assert_eq!(row.len(), srcs.len());
            let dst = &mut acc[start..end];
            for (src, &c) in srcs.iter().zip(row) {
                mul_const(&src[start..end], c, dst, true)?;
            }
        }
        start = end;
    }
    Ok(out)
}

/// dst[i] ^= src[i], a machine word at a time with a scalar tail.
pub fn xor(src: &[u8], dst: &mut [u8]) -> Result<()> {
    if src.len() != dst.len() {
        return Err(Error::LengthMismatch {
            src: src.len(),
            dst: dst.len(),
        });
    }
    let mut d_words = dst.chunks_exact_mut(8);
    let mut s_words = src.chunks_exact(8);
    for (d, s) in (&mut d_words).zip(&mut s_words) {
        let x = u64::from_le_bytes(d.try_into().unwrap()) ^ u64::from_le_bytes(s.try_into().unwrap());
        d.copy_from_slice(&x.to_le_bytes());
    }
    for (d, &s) in d_words.into_remainder().iter_mut().zip(s_words.remainder()) {
        *d ^= s;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf256;
    use rand::{Rng, RngCore, SeedableRng};

    fn rng() -> rand_chacha::ChaCha12Rng {
        rand_chacha::ChaCha12Rng::seed_from_u64(0xDECAF)
    }

    #[test]
    fn mul_const_matches_scalar_loop() {
        let mut rng = rng();
        for len in [1usize, 2, 7, 8, 9, 63, 64, 65, 1000, 4096, 8192] {
            let mut src = vec![0u8; len];
            rng.fill_bytes(&mut src);
            let c: u8 = rng.random();
            let mut dst = vec![0u8; len];
            rng.fill_bytes(&mut dst);
            let mut expect_acc = dst.clone();
            for (e, &s) in expect_acc.iter_mut().zip(&src) {
                *e ^= gf256::mul(s, c);
            }
            mul_const(&src, c, &mut dst, true).unwrap();
            assert_eq!(dst, expect_acc, "accumulate len={len} c={c}");

            let mut dst2 = vec![0u8; len];
            mul_const(&src, c, &mut dst2, false).unwrap();
            let expect: Vec<u8> = src.iter().map(|&s| gf256::mul(s, c)).collect();
            assert_eq!(dst2, expect, "overwrite len={len} c={c}");
        }
    }

    #[test]
    fn mul_const_trivial_constants() {
        let src = [48u8, 0, 255, 17];
        let mut dst = [9u8; 4];
        mul_const(&src, 0, &mut dst, false).unwrap();
        assert_eq!(dst, [0; 4]);
        mul_const(&src, 1, &mut dst, false).unwrap();
        assert_eq!(dst, src);
        let mut acc = [0u8; 1];
        mul_const(&[48], 8, &mut acc, true).unwrap();
        assert_eq!(acc[0], gf256::mul(48, 8));
    }

    #[test]
    fn mul_const_round_trips_through_inverse() {
        let mut rng = rng();
        let mut src = vec![0u8; 777];
        rng.fill_bytes(&mut src);
        for c in [1u8, 2, 29, 142, 255] {
            let mut tmp = vec![0u8; src.len()];
            mul_const(&src, c, &mut tmp, false).unwrap();
            let mut back = vec![0u8; src.len()];
            mul_const(&tmp, gf256::inv(c).unwrap(), &mut back, false).unwrap();
            assert_eq!(back, src);
        }
    }

    #[test]
    fn xor_matches_scalar_loop() {
        let mut rng = rng();
        for len in [1usize, 8, 13, 4096] {
            let mut src = vec![0u8; len];
            let mut dst = vec![0u8; len];
            rng.fill_bytes(&mut src);
            rng.fill_bytes(&mut dst);
            let expect: Vec<u8> = src.iter().zip(&dst).map(|(a, b)| a ^ b).collect();
            xor(&src, &mut dst).unwrap();
            assert_eq!(dst, expect);
        }
        // dst ^ dst = 0, src of zeros leaves dst unchanged
        let mut dst = vec![5u8; 32];
        let copy = dst.clone();
        xor(&copy, &mut dst).unwrap();
        assert_eq!(dst, vec![0u8; 32]);
        let mut dst = vec![7u8; 32];
        xor(&vec![0u8; 32], &mut dst).unwrap();
        assert_eq!(dst, vec![7u8; 32]);
    }

    #[test]
    fn length_mismatch_rejected() {
        let src = [0u8; 4];
        let mut dst = [0u8; 5];
        assert!(mul_const(&src, 3, &mut dst, false).is_err());
        assert!(xor(&src, &mut dst).is_err());
    }

    #[test]
    fn apply_matrix_matches_per_byte_sums() {
        let mut rng = rng();
        for len in [1usize, 9, CHUNK - 1, CHUNK, CHUNK + 17] {
            let blocks: Vec<Vec<u8>> = (0..3)
                .map(|_| {
                    let mut b = vec![0u8; len];
                    rng.fill_bytes(&mut b);
                    b
                })
                .collect();
            let srcs: Vec<&[u8]> = blocks.iter().map(Vec::as_slice).collect();
            let rows = vec![vec![2u8, 0, 7], vec![1, 1, 1]];
            let out = apply_matrix(&rows, &srcs, len).unwrap();
            for (row, got) in rows.iter().zip(&out) {
                for i in 0..len {
                    let expect = row
                        .iter()
                        .zip(&blocks)
                        .fold(0u8, |acc, (&c, b)| acc ^ gf256::mul(c, b[i]));
                    assert_eq!(got[i], expect, "len={len} byte {i}");
                }
            }
        }
    }
}
