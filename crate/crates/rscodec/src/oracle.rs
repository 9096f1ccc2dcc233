//! Brute-force oracles and exhaustive property drivers.
//!
//! Everything here is deliberately slow and simple: bit-by-bit field
//! arithmetic with no tables, and pattern enumeration that tries every
//! erasure combination. These functions anchor the correctness of the fast
//! paths and must not share code with them.

use itertools::Itertools;

use crate::codec::{Codec, ErasurePattern, Stripe};
use crate::gf256::REDUCTION_POLY;

/// Carry-less multiply over GF(2) followed by bitwise reduction mod 0x11D.
/// No tables involved.
pub fn naive_mul(a: u8, b: u8) -> u8 {
    let mut prod: u32 = 0;
    for i in 0..8 {
        if b & (1 << i) != 0 {
            prod ^= (a as u32) << i;
        }
    }
    for bit in (8..16).rev() {
        if prod & (1 << bit) != 0 {
            prod ^= (REDUCTION_POLY as u32) << (bit - 8);
        }
    }
    prod as u8
}

/// a^e by repeated naive multiplication. Nonzero elements have order
/// dividing 255, so the exponent reduces mod 255.
pub fn naive_pow(a: u8, e: u64) -> u8 {
    if e == 0 {
        return 1;
    }
    if a == 0 {
        return 0;
    }
    let mut acc = 1u8;
    for _ in 0..e % 255 {
        acc = naive_mul(acc, a);
    }
    acc
}

/// Multiplicative inverse found by exhaustive search with `naive_mul`.
/// Returns `None` for zero.
pub fn naive_inv(a: u8) -> Option<u8> {
    if a == 0 {
        return None;
    }
    (1..=255u8).find(|&b| naive_mul(a, b) == 1)
}

/// True iff the stripe is a valid codeword of the generator-polynomial
/// realization: c(alpha^i) = 0 for i = 0..m-1 at every byte offset, where
/// c(x) has the m parity bytes as its low coefficients and the k data bytes
/// above them. Evaluation is Horner's rule over `naive_mul`.
pub fn naive_codeword_check(stripe: &Stripe, k: usize, m: usize) -> bool {
    assert_eq!(stripe.data.len(), k);
    assert_eq!(stripe.parity.len(), m);
    let len = stripe.block_len();
    let n = k + m;
    for i in 0..m as u64 {
        let x = naive_pow(2, i);
        for off in 0..len {
            let mut acc = 0u8;
            for pos in (0..n).rev() {
                let c = if pos < m {
                    stripe.parity[pos][off]
                } else {
                    stripe.data[pos - m][off]
                };
                acc = naive_mul(acc, x) ^ c;
            }
            if acc != 0 {
                return false;
            }
        }
    }
    true
}

/// Outcome of an exhaustive erasure-pattern sweep.
#[derive(Debug, Clone)]
pub struct SweepReport {
    pub patterns_tested: usize,
    pub failures: Vec<Vec<usize>>,
}

impl SweepReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Encode a random stripe and replay every erasure pattern of size 1..=m
/// against it, asserting bytewise recovery of the erased blocks. Erased
/// blocks are clobbered before decoding so accidental reads surface.
pub fn exhaustive_mds_sweep(codec: &Codec, block_len: usize, seed: u64) -> SweepReport {
    use rand::{RngCore, SeedableRng};
    let params = codec.params();
    let (k, m) = (params.k, params.m);
    let n = k + m;

    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let mut data = vec![vec![0u8; block_len]; k];
    for block in &mut data {
        rng.fill_bytes(block);
    }
    let parity = codec.encode(&data).expect("sweep encode");
    let original = Stripe::new(data, parity).expect("sweep stripe");

    let mut patterns_tested = 0;
    let mut failures = Vec::new();
    for t in 1..=m {
        for pattern in (0..n).combinations(t) {
            patterns_tested += 1;
            let mut stripe = original.clone();
            for &b in &pattern {
                stripe.block_mut(b).fill(0xAA);
            }
            let erasures = ErasurePattern::new(pattern.clone()).unwrap();
            let recovered = match codec.decode(&stripe, &erasures) {
                Ok(r) => r,
                Err(_) => {
                    failures.push(pattern);
                    continue;
                }
            };
            let good = recovered.len() == pattern.len()
                && pattern
                    .iter()
                    .zip(&recovered)
                    .all(|(&b, rec)| rec.as_slice() == original.block(b));
            if !good {
                failures.push(pattern);
            }
        }
    }
    SweepReport {
        patterns_tested,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn naive_mul_spot_checks() {
        for b in 0..=255u8 {
            assert_eq!(naive_mul(0, b), 0);
            assert_eq!(naive_mul(1, b), b);
        }
        assert_eq!(naive_mul(2, 128), 29);
    }

    #[test]
    fn naive_inv_round_trips() {
        assert_eq!(naive_inv(0), None);
        for a in 1..=255u8 {
            let b = naive_inv(a).unwrap();
            assert_eq!(naive_mul(a, b), 1);
        }
    }

    #[test]
    fn naive_pow_basics() {
        assert_eq!(naive_pow(2, 0), 1);
        assert_eq!(naive_pow(2, 8), 29);
        assert_eq!(naive_pow(2, 255), 1);
        assert_eq!(naive_pow(0, 4), 0);
    }
}
