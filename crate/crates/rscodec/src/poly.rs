//! Generator-polynomial realization of Reed-Solomon.
//!
//! Encoding reduces d(x) * x^m modulo the generator polynomial g(x) whose
//! roots are alpha^0..alpha^(m-1); the m remainder coefficients are the
//! parity bytes. Decoding evaluates the surviving codeword at the first
//! root powers (one value per unknown) and solves the resulting
//! Vandermonde-type system.
//!
//! Two variants are kept side by side. The baseline mirrors the ported
//! reference algorithm: evaluation coefficients recomputed per byte offset
//! and Gaussian elimination run per byte offset, on byte arrays. The
//! optimized variant precomputes the coefficient powers once per erasure
//! pattern, skips erased positions, inverts the solve matrix once, and does
//! all bulk work with region kernels.

use crate::codec::{CodingParams, ErasurePattern, Stripe};
use crate::gf256::{self, Poly, ALPHA};
use crate::matrix::GfMatrix;
use crate::region;
use crate::{Error, Result};

/// Monic generator polynomial of degree m with roots alpha^0..alpha^(m-1).
#[derive(Debug, Clone)]
pub struct GeneratorPolynomial {
    poly: Poly,
}

impl GeneratorPolynomial {
    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap()
    }

    /// Coefficients low-order first; the last one is 1.
    pub fn coeffs(&self) -> &[u8] {
        self.poly.coeffs()
    }
}

/// g(x) = (x + alpha^0)(x + alpha^1) ... (x + alpha^(m-1)).
pub fn build_generator_poly(params: &CodingParams) -> GeneratorPolynomial {
    let mut g = Poly::one();
    for i in 0..params.m {
        g = g.mul(&Poly::new(vec![gf256::pow(ALPHA, i as u64), 1]));
    }
    GeneratorPolynomial { poly: g }
}

/// Coefficient position of a block: data block j carries the coefficient of
/// x^(m+j), parity block j the coefficient of x^j.
#[inline]
fn coeff_pos(block: usize, k: usize, m: usize) -> usize {
    if block < k {
        m + block
    } else {
        block - k
    }
}

fn check_data(data: &[Vec<u8>], k: usize) -> Result<usize> {
    if data.len() != k {
        return Err(Error::BadStripeGeometry(format!(
            "expected {k} data blocks, got {}",
            data.len()
        )));
    }
    let len = data[0].len();
    if len == 0 || data.iter().any(|b| b.len() != len) {
        return Err(Error::BadStripeGeometry(
            "blocks must be nonempty and equal length".into(),
        ));
    }
    Ok(len)
}

/// Systematic encode by synthetic division: stream the data coefficients
/// high to low through an LFSR whose taps are the generator coefficients,
/// with the register holding whole byte regions.
pub fn poly_encode(gp: &GeneratorPolynomial, data: &[Vec<u8>]) -> Result<Vec<Vec<u8>>> {
    let m = gp.degree();
    if data.is_empty() {
        return Err(Error::BadStripeGeometry("no data blocks".into()));
    }
    let len = check_data(data, data.len())?;
    let g = gp.coeffs();
    let mut regs: Vec<Vec<u8>> = vec![vec![0u8; len]; m];
    let mut feedback = vec![0u8; len];
    for block in data.iter().rev() {
        feedback.copy_from_slice(&regs[m - 1]);
        region::xor(block, &mut feedback)?;
        // Shift up: new r[i] = old r[i-1] + f*g[i], new r[0] = f*g[0].
        regs.rotate_right(1);
        region::mul_const(&feedback, g[0], &mut regs[0], false)?;
        for i in 1..m {
            region::mul_const(&feedback, g[i], &mut regs[i], true)?;
        }
    }
    Ok(regs)
}

/// Multiplication counts observed while running step 1, used to verify that
/// the optimized path skips erased positions.
#[derive(Debug, Default, Clone, Copy)]
pub struct Step1Stats {
    /// gf multiplications applied to data coefficient slots, in byte units.
    pub data_mults: u64,
    pub equations: u64,
    pub offsets: u64,
}

impl Step1Stats {
    /// Data-slot multiplications per equation per byte offset.
    pub fn data_mults_per_eq_per_offset(&self) -> f64 {
        self.data_mults as f64 / (self.equations as f64 * self.offsets as f64)
    }
}

/// Everything decode needs that depends only on (params, erasure pattern):
/// which coefficients are unknown, the precomputed evaluation coefficients
/// for every surviving block, and the inverted solve matrix. A plan is
/// reusable across every byte offset and across stripes.
#[derive(Debug, Clone)]
pub struct DecodePlan {
    k: usize,
    m: usize,
    erased_blocks: Vec<usize>,
    erased_data: Vec<usize>,
    erased_parity: Vec<usize>,
    /// Coefficient positions of the unknowns, ascending.
    unknown_pos: Vec<usize>,
    /// Survivor blocks contributing to the equations, ascending.
    survivors: Vec<usize>,
    /// Per equation j: (survivor block, alpha^(j * position)) pairs.
    eq_terms: Vec<Vec<(usize, u8)>>,
    /// Inverse of V[j][c] = alpha^(j * unknown_pos[c]).
    inv: GfMatrix,
    /// The inverse folded through the evaluation coefficients: row c,
    /// column s holds sum_j inv[c][j] * coef(j, s), so each unknown is one
    /// accumulated pass over the survivors. Exact field algebra; output is
    /// byte-identical to evaluating then solving.
    recovery_rows: Vec<Vec<u8>>,
}

impl DecodePlan {
    /// Plan using every surviving block. The unknowns are exactly the
    /// erased coefficients, so |erasures| equations suffice; with the
    /// consecutive powers alpha^0..alpha^(u-1) the solve matrix is a
    /// transposed Vandermonde on distinct nonzero nodes, hence invertible.
    pub fn new(params: &CodingParams, erasures: &ErasurePattern) -> Result<Self> {
        let survivors: Vec<usize> = (0..params.n()).filter(|&b| !erasures.contains(b)).collect();
        Self::build(params, erasures, &survivors)
    }

    /// Plan restricted to the k smallest-index survivors, mirroring the
    /// matrix realization's exactly-k semantics: the unselected survivors
    /// are treated as unknowns too, growing the system to m equations.
    /// Off by default; produces byte-identical recoveries.
    pub fn new_exact_k(params: &CodingParams, erasures: &ErasurePattern) -> Result<Self> {
        let survivors: Vec<usize> = (0..params.n())
            .filter(|&b| !erasures.contains(b))
            .take(params.k)
            .collect();
        Self::build(params, erasures, &survivors)
    }

    fn build(
        params: &CodingParams,
        erasures: &ErasurePattern,
        survivors: &[usize],
    ) -> Result<Self> {
        let (k, m, n) = (params.k, params.m, params.n());
        if n > 255 {
            return Err(Error::InvalidParams { k, m, max: 255 });
        }
        erasures.check(n, m)?;
        let erased_blocks = erasures.indices().to_vec();
        let erased_data: Vec<usize> = erased_blocks.iter().copied().filter(|&b| b < k).collect();
        let erased_parity: Vec<usize> = erased_blocks.iter().copied().filter(|&b| b >= k).collect();

        let is_survivor = {
            let mut v = vec![false; n];
            for &s in survivors {
                v[s] = true;
            }
            v
        };
        let mut unknown_pos: Vec<usize> = (0..n)
            .filter(|&b| !is_survivor[b])
            .map(|b| coeff_pos(b, k, m))
            .collect();
        unknown_pos.sort_unstable();
        let u = unknown_pos.len();

        let mut eq_terms: Vec<Vec<(usize, u8)>> = Vec::with_capacity(u);
        for j in 0..u as u64 {
            eq_terms.push(
                survivors
                    .iter()
                    .map(|&b| (b, gf256::pow(ALPHA, j * coeff_pos(b, k, m) as u64)))
                    .collect(),
            );
        }

        let inv = if u > 0 {
            let mut v = GfMatrix::zero(u, u);
            for j in 0..u {
                for c in 0..u {
                    v.set(j, c, gf256::pow(ALPHA, (j * unknown_pos[c]) as u64));
                }
            }
            v.inverted()?
        } else {
            GfMatrix::zero(0, 0)
        };

        let recovery_rows = (0..u)
            .map(|c| {
                (0..survivors.len())
                    .map(|s| {
                        (0..u).fold(0u8, |acc, j| {
                            acc ^ gf256::mul(inv.get(c, j), eq_terms[j][s].1)
                        })
                    })
                    .collect()
            })
            .collect();

        Ok(DecodePlan {
            k,
            m,
            erased_blocks,
            erased_data,
            erased_parity,
            unknown_pos,
            survivors: survivors.to_vec(),
            eq_terms,
            inv,
            recovery_rows,
        })
    }

    pub fn equations(&self) -> usize {
        self.unknown_pos.len()
    }

    /// Precomputed evaluation coefficients for equation j, one per
    /// surviving block (Opt1; erased positions are absent per Opt2).
    pub fn equation_coefficients(&self, j: usize) -> &[(usize, u8)] {
        &self.eq_terms[j]
    }

    /// The once-inverted solve matrix (Opt3).
    pub fn solve_inverse(&self) -> &GfMatrix {
        &self.inv
    }

    pub fn has_data_erasures(&self) -> bool {
        !self.erased_data.is_empty()
    }

    pub fn erased_blocks(&self) -> &[usize] {
        &self.erased_blocks
    }

    pub fn erased_parity(&self) -> &[usize] {
        &self.erased_parity
    }

    fn block_of_unknown(&self, c: usize) -> usize {
        let pos = self.unknown_pos[c];
        if pos < self.m {
            self.k + pos
        } else {
            pos - self.m
        }
    }
}

/// Optimized decode (region kernels throughout, chunked). Requires at
/// least one erased data block; parity-only patterns are regenerated by
/// re-encoding. Returns the solved unknowns paired with their block
/// indices, ascending.
pub(crate) fn decode_with_plan_stats(
    plan: &DecodePlan,
    stripe: &Stripe,
) -> Result<(Vec<(usize, Vec<u8>)>, Step1Stats)> {
    stripe.check(plan.k, plan.m, 1)?;
    let len = stripe.block_len();
    let u = plan.equations();
    debug_assert!(u > 0);

    let mut stats = Step1Stats {
        data_mults: 0,
        equations: u as u64,
        offsets: len as u64,
    };

    // Each unknown is one accumulated pass over the survivors, with the
    // solve inverse already folded into the coefficients; chunked so the
    // accumulators stay cache-resident.
    let srcs: Vec<&[u8]> = plan.survivors.iter().map(|&b| stripe.block(b)).collect();
    let mut unknowns = vec![vec![0u8; len]; u];
    let mut start = 0;
    while start < len {
        let end = (start + region::CHUNK).min(len);
        for (row, acc) in plan.recovery_rows.iter().zip(&mut unknowns) {
            let dst = &mut acc[start..end];
            for ((src, &coef), &b) in srcs.iter().zip(row).zip(&plan.survivors) {
                region::mul_const(&src[start..end], coef, dst, true)?;
                if b < plan.k {
                    stats.data_mults += (end - start) as u64;
                }
            }
        }
        start = end;
    }

    let mut paired: Vec<(usize, Vec<u8>)> = unknowns
        .into_iter()
        .enumerate()
        .map(|(c, block)| (plan.block_of_unknown(c), block))
        .collect();
    paired.sort_by_key(|&(b, _)| b);
    Ok((paired, stats))
}

/// Baseline decode mirroring the ported reference algorithm: per byte
/// offset, every coefficient power is recomputed iteratively over all k+m
/// positions (erased slots contribute zero-result multiplications) and the
/// system is solved by Gaussian elimination, again per offset.
pub(crate) fn decode_baseline_stats(
    params: &CodingParams,
    erasures: &ErasurePattern,
    stripe: &Stripe,
) -> Result<(Vec<(usize, Vec<u8>)>, Step1Stats)> {
    let (k, m, n) = (params.k, params.m, params.n());
    erasures.check(n, m)?;
    stripe.check(k, m, 1)?;
    let len = stripe.block_len();

    let mut unknown_pos: Vec<usize> = erasures
        .indices()
        .iter()
        .map(|&b| coeff_pos(b, k, m))
        .collect();
    unknown_pos.sort_unstable();
    let u = unknown_pos.len();
    debug_assert!(u > 0);

    // Survivor bytes by coefficient position; erased positions read as zero.
    let src_by_pos: Vec<Option<&[u8]>> = {
        let mut v: Vec<Option<&[u8]>> = vec![None; n];
        for b in 0..n {
            if !erasures.contains(b) {
                v[coeff_pos(b, k, m)] = Some(stripe.block(b));
            }
        }
        v
    };

    let mut stats = Step1Stats {
        data_mults: 0,
        equations: u as u64,
        offsets: len as u64,
    };
    let mut out: Vec<(usize, Vec<u8>)> = unknown_pos
        .iter()
        .map(|&pos| {
            let b = if pos < m { k + pos } else { pos - m };
            (b, vec![0u8; len])
        })
        .collect();

    let mut cvec = vec![0u8; n];
    let mut dvals = vec![0u8; u];
    let w = u + 1;
    let mut aug = vec![0u8; u * w];
    let mut solution = vec![0u8; u];

    for off in 0..len {
        for (pos, src) in src_by_pos.iter().enumerate() {
            cvec[pos] = src.map_or(0, |s| s[off]);
        }
        // Step 1, recomputed from scratch for this offset.
        for (j, dval) in dvals.iter_mut().enumerate() {
            let x = gf256::pow(ALPHA, j as u64);
            let mut xp = 1u8;
            let mut acc = 0u8;
            for (pos, &c) in cvec.iter().enumerate() {
                acc ^= gf256::mul(c, xp);
                if pos >= m {
                    stats.data_mults += 1;
                }
                xp = gf256::mul(xp, x);
            }
            *dval = acc;
        }
        // Step 2: rebuild the system and eliminate, per offset.
        for j in 0..u {
            for (c, &pos) in unknown_pos.iter().enumerate() {
                aug[j * w + c] = gf256::pow(ALPHA, (j * pos) as u64);
            }
            aug[j * w + u] = dvals[j];
        }
        gauss_jordan_solve(&mut aug, u, &mut solution)?;
        for (c, &s) in solution.iter().enumerate() {
            out[c].1[off] = s;
        }
    }
    // unknown_pos ascending puts parity coefficients first; reorder by block.
    out.sort_by_key(|&(b, _)| b);
    Ok((out, stats))
}

fn gauss_jordan_solve(aug: &mut [u8], u: usize, out: &mut [u8]) -> Result<()> {
    let w = u + 1;
    for col in 0..u {
        let pivot = (col..u)
            .find(|&r| aug[r * w + col] != 0)
            .ok_or(Error::SingularMatrix)?;
        if pivot != col {
            for c in 0..w {
                aug.swap(col * w + c, pivot * w + c);
            }
        }
        let pi = gf256::inv(aug[col * w + col])?;
        for c in col..w {
            aug[col * w + c] = gf256::mul(aug[col * w + c], pi);
        }
        for r in 0..u {
            if r == col {
                continue;
            }
            let f = aug[r * w + col];
            if f == 0 {
                continue;
            }
            for c in col..w {
                aug[r * w + c] ^= gf256::mul(f, aug[col * w + c]);
            }
        }
    }
    for c in 0..u {
        out[c] = aug[c * w + u];
    }
    Ok(())
}

/// The error-evaluator values: for each byte offset, the survivor-side sums
/// D(alpha^j) for j = 0..(number of erased blocks). Definitional scalar
/// path, shared by tests and diagnostics.
pub fn eval_error_evaluators(
    stripe: &Stripe,
    erasures: &ErasurePattern,
    params: &CodingParams,
) -> Result<Vec<Vec<u8>>> {
    let (k, m, n) = (params.k, params.m, params.n());
    erasures.check(n, m)?;
    stripe.check(k, m, 1)?;
    let u = erasures.len();
    let len = stripe.block_len();
    let survivors: Vec<(usize, usize)> = (0..n)
        .filter(|&b| !erasures.contains(b))
        .map(|b| (b, coeff_pos(b, k, m)))
        .collect();
    let mut all = Vec::with_capacity(len);
    for off in 0..len {
        let mut vals = Vec::with_capacity(u);
        for j in 0..u as u64 {
            let mut acc = 0u8;
            for &(b, pos) in &survivors {
                acc ^= gf256::mul(stripe.block(b)[off], gf256::pow(ALPHA, j * pos as u64));
            }
            vals.push(acc);
        }
        all.push(vals);
    }
    Ok(all)
}

/// The step-2 solve matrix for a pattern: row j, column c holds
/// alpha^(j * position) over the erased coefficient positions, ascending.
pub fn solve_matrix(erasures: &ErasurePattern, params: &CodingParams) -> Vec<Vec<u8>> {
    let mut unknown_pos: Vec<usize> = erasures
        .indices()
        .iter()
        .map(|&b| coeff_pos(b, params.k, params.m))
        .collect();
    unknown_pos.sort_unstable();
    (0..unknown_pos.len())
        .map(|j| {
            unknown_pos
                .iter()
                .map(|&pos| gf256::pow(ALPHA, (j * pos) as u64))
                .collect()
        })
        .collect()
}

/// Solve V * unknowns = values for one offset, where V[j][c] is
/// alpha^(j * position) over the erased coefficient positions. Returns the
/// unknowns in ascending block order.
pub fn solve_erased(
    values: &[u8],
    erasures: &ErasurePattern,
    params: &CodingParams,
) -> Result<Vec<u8>> {
    let (k, m) = (params.k, params.m);
    let mut unknown_pos: Vec<usize> = erasures
        .indices()
        .iter()
        .map(|&b| coeff_pos(b, k, m))
        .collect();
    unknown_pos.sort_unstable();
    let u = unknown_pos.len();
    if values.len() != u {
        return Err(Error::BadStripeGeometry(format!(
            "expected {u} evaluator values, got {}",
            values.len()
        )));
    }
    let w = u + 1;
    let mut aug = vec![0u8; u * w];
    for j in 0..u {
        for (c, &pos) in unknown_pos.iter().enumerate() {
            aug[j * w + c] = gf256::pow(ALPHA, (j * pos) as u64);
        }
        aug[j * w + u] = values[j];
    }
    let mut solution = vec![0u8; u];
    gauss_jordan_solve(&mut aug, u, &mut solution)?;
    // Ascending coefficient position -> ascending block needs parity (low
    // positions) moved behind data.
    let mut paired: Vec<(usize, u8)> = unknown_pos
        .iter()
        .zip(&solution)
        .map(|(&pos, &s)| {
            let b = if pos < m { k + pos } else { pos - m };
            (b, s)
        })
        .collect();
    paired.sort_by_key(|&(b, _)| b);
    Ok(paired.into_iter().map(|(_, s)| s).collect())
}

/// Precomputed coefficients for encoding through the decode machinery:
/// all m parity coefficients are treated as the unknowns.
#[derive(Debug, Clone)]
pub struct EncodePlan {
    plan: DecodePlan,
}

pub fn build_encode_plan(params: &CodingParams) -> Result<EncodePlan> {
    let all_parity = ErasurePattern::new((params.k..params.n()).collect())?;
    let survivors: Vec<usize> = (0..params.k).collect();
    Ok(EncodePlan {
        plan: DecodePlan::build(params, &all_parity, &survivors)?,
    })
}

/// Encode by decoding: solve for the m parity coefficients from the data,
/// using the same folded recovery rows as the optimized decode.
/// Byte-identical to `poly_encode`.
pub fn encode_via_decode(ep: &EncodePlan, data: &[Vec<u8>]) -> Result<Vec<Vec<u8>>> {
    let plan = &ep.plan;
    let len = check_data(data, plan.k)?;
    let srcs: Vec<&[u8]> = data.iter().map(Vec::as_slice).collect();
    region::apply_matrix(&plan.recovery_rows, &srcs, len)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Baseline,
    Optimized,
}

/// Two-step decode at every byte offset. Recovers the erased blocks in
/// ascending index order; when only parity is erased, no step-1/step-2 work
/// runs and the parity is re-encoded from the intact data.
pub fn poly_decode(
    variant: Variant,
    stripe: &Stripe,
    erasures: &ErasurePattern,
    params: &CodingParams,
) -> Result<Vec<Vec<u8>>> {
    let gp = build_generator_poly(params);
    let has_data = erasures.indices().iter().any(|&b| b < params.k);
    if erasures.is_empty() {
        erasures.check(params.n(), params.m)?;
        return Ok(Vec::new());
    }
    if !has_data {
        erasures.check(params.n(), params.m)?;
        stripe.check(params.k, params.m, 1)?;
        let parity = match variant {
            Variant::Baseline => poly_encode(&gp, &stripe.data)?,
            Variant::Optimized => encode_via_decode(&build_encode_plan(params)?, &stripe.data)?,
        };
        return Ok(erasures
            .indices()
            .iter()
            .map(|&b| parity[b - params.k].clone())
            .collect());
    }
    let recovered = match variant {
        Variant::Baseline => decode_baseline_stats(params, erasures, stripe)?.0,
        Variant::Optimized => {
            let plan = DecodePlan::new(params, erasures)?;
            decode_with_plan_stats(&plan, stripe)?.0
        }
    };
    Ok(recovered.into_iter().map(|(_, block)| block).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use rand::{Rng, RngCore, SeedableRng};

    fn params(k: usize, m: usize) -> CodingParams {
        CodingParams::new(k, m).unwrap()
    }

    fn single_byte_blocks(bytes: &[u8]) -> Vec<Vec<u8>> {
        bytes.iter().map(|&b| vec![b]).collect()
    }

    fn random_stripe(
        rng: &mut impl RngCore,
        p: &CodingParams,
        len: usize,
        encode: impl Fn(&[Vec<u8>]) -> Vec<Vec<u8>>,
    ) -> Stripe {
        let data: Vec<Vec<u8>> = (0..p.k)
            .map(|_| {
                let mut b = vec![0u8; len];
                rng.fill_bytes(&mut b);
                b
            })
            .collect();
        let parity = encode(&data);
        Stripe::new(data, parity).unwrap()
    }

    #[test]
    fn generator_poly_golden() {
        assert_eq!(build_generator_poly(&params(4, 1)).coeffs(), &[1, 1]);
        assert_eq!(build_generator_poly(&params(4, 3)).coeffs(), &[8, 14, 7, 1]);
    }

    #[test]
    fn generator_poly_roots() {
        for m in 1..=8usize {
            let gp = build_generator_poly(&params(4, m));
            assert_eq!(gp.degree(), m);
            assert_eq!(*gp.coeffs().last().unwrap(), 1);
            for i in 0..m as u64 {
                assert_eq!(gp.poly().eval(gf256::pow(ALPHA, i)), 0, "m={m} root {i}");
            }
            assert_ne!(gp.poly().eval(gf256::pow(ALPHA, m as u64)), 0, "m={m}");
        }
    }

    #[test]
    fn encode_golden_worked_example() {
        let p = params(4, 3);
        let gp = build_generator_poly(&p);
        let data = single_byte_blocks(&[48, 6, 112, 70]);
        let parity = poly_encode(&gp, &data).unwrap();
        assert_eq!(parity, single_byte_blocks(&[243, 125, 142]));

        let ep = build_encode_plan(&p).unwrap();
        assert_eq!(encode_via_decode(&ep, &data).unwrap(), parity);

        let zero = vec![vec![0u8; 4]; 4];
        assert!(poly_encode(&gp, &zero).unwrap().iter().all(|b| b == &[0; 4]));
        assert!(encode_via_decode(&ep, &zero).unwrap().iter().all(|b| b == &[0; 4]));
    }

    #[test]
    fn encode_matches_polynomial_remainder_and_oracle() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(21);
        let p = params(10, 4);
        let gp = build_generator_poly(&p);
        for _ in 0..50 {
            let data: Vec<u8> = (0..10).map(|_| rng.random()).collect();
            let blocks = single_byte_blocks(&data);
            let parity = poly_encode(&gp, &blocks).unwrap();
            // Direct reduction of d(x) * x^m.
            let mut coeffs = vec![0u8; 4];
            coeffs.extend_from_slice(&data);
            let rem = Poly::new(coeffs).rem(gp.poly()).unwrap();
            for i in 0..4 {
                assert_eq!(parity[i][0], rem.coeff(i));
            }
            let stripe = Stripe::new(blocks, parity).unwrap();
            assert!(oracle::naive_codeword_check(&stripe, 10, 4));
        }
    }

    #[test]
    fn encode_via_decode_equals_lfsr_on_random_stripes() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(22);
        let p = params(10, 4);
        let gp = build_generator_poly(&p);
        let ep = build_encode_plan(&p).unwrap();
        for len in [1usize, 7, 64, 1000] {
            let data: Vec<Vec<u8>> = (0..10)
                .map(|_| {
                    let mut b = vec![0u8; len];
                    rng.fill_bytes(&mut b);
                    b
                })
                .collect();
            assert_eq!(
                encode_via_decode(&ep, &data).unwrap(),
                poly_encode(&gp, &data).unwrap(),
                "len={len}"
            );
        }
    }

    #[test]
    fn error_evaluators_golden() {
        let p = params(4, 3);
        let stripe = Stripe::new(
            single_byte_blocks(&[0, 0, 0, 70]),
            single_byte_blocks(&[243, 125, 142]),
        )
        .unwrap();
        let erasures = ErasurePattern::new(vec![0, 1, 2]).unwrap();
        let evals = eval_error_evaluators(&stripe, &erasures, &p).unwrap();
        assert_eq!(evals, vec![vec![70, 91, 171]]);

        let none = ErasurePattern::new(vec![]).unwrap();
        let full = Stripe::new(
            single_byte_blocks(&[48, 6, 112, 70]),
            single_byte_blocks(&[243, 125, 142]),
        )
        .unwrap();
        assert_eq!(eval_error_evaluators(&full, &none, &p).unwrap(), vec![Vec::<u8>::new()]);
    }

    #[test]
    fn error_evaluators_match_polynomial_evaluation_oracle() {
        // D(alpha^j) equals evaluating the codeword polynomial with erased
        // coefficients zeroed, computed here with the naive field ops.
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(23);
        let p = params(10, 4);
        let gp = build_generator_poly(&p);
        let stripe = random_stripe(&mut rng, &p, 3, |d| poly_encode(&gp, d).unwrap());
        let erasures = ErasurePattern::new(vec![1, 4, 12]).unwrap();
        let evals = eval_error_evaluators(&stripe, &erasures, &p).unwrap();
        for off in 0..3 {
            for (j, &got) in evals[off].iter().enumerate() {
                let x = oracle::naive_pow(ALPHA, j as u64);
                let mut acc = 0u8;
                for pos in (0..14).rev() {
                    let b = if pos < 4 { 10 + pos } else { pos - 4 };
                    let c = if erasures.contains(b) {
                        0
                    } else {
                        stripe.block(b)[off]
                    };
                    acc = oracle::naive_mul(acc, x) ^ c;
                }
                assert_eq!(got, acc, "off={off} j={j}");
            }
        }
    }

    #[test]
    fn solve_erased_golden() {
        let p = params(4, 3);
        let erasures = ErasurePattern::new(vec![0, 1, 2]).unwrap();
        let solved = solve_erased(&[70, 91, 171], &erasures, &p).unwrap();
        assert_eq!(solved, vec![48, 6, 112]);

        // Single erasure: first equation divides by alpha^0 = 1.
        let one = ErasurePattern::new(vec![2]).unwrap();
        assert_eq!(solve_erased(&[77], &one, &p).unwrap(), vec![77]);
    }

    #[test]
    fn decode_golden_worked_example() {
        let p = params(4, 3);
        let mut stripe = Stripe::new(
            single_byte_blocks(&[48, 6, 112, 70]),
            single_byte_blocks(&[243, 125, 142]),
        )
        .unwrap();
        // Lose the first three data blocks.
        for b in 0..3 {
            stripe.block_mut(b).fill(0);
        }
        let erasures = ErasurePattern::new(vec![0, 1, 2]).unwrap();
        for variant in [Variant::Baseline, Variant::Optimized] {
            let rec = poly_decode(variant, &stripe, &erasures, &p).unwrap();
            assert_eq!(rec, single_byte_blocks(&[48, 6, 112]), "{variant:?}");
        }
    }

    #[test]
    fn parity_only_erasures_skip_steps() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(24);
        let p = params(10, 4);
        let gp = build_generator_poly(&p);
        let stripe = random_stripe(&mut rng, &p, 32, |d| poly_encode(&gp, d).unwrap());
        let erasures = ErasurePattern::new(vec![10, 12]).unwrap();
        for variant in [Variant::Baseline, Variant::Optimized] {
            let rec = poly_decode(variant, &stripe, &erasures, &p).unwrap();
            assert_eq!(rec[0], stripe.parity[0], "{variant:?}");
            assert_eq!(rec[1], stripe.parity[2], "{variant:?}");
        }
        let empty = ErasurePattern::new(vec![]).unwrap();
        assert!(poly_decode(Variant::Optimized, &stripe, &empty, &p)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn baseline_and_optimized_decode_identically() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(25);
        let p = params(10, 4);
        let gp = build_generator_poly(&p);
        for case in 0..200 {
            let len = [1usize, 3, 8, 17][case % 4];
            let original = random_stripe(&mut rng, &p, len, |d| poly_encode(&gp, d).unwrap());
            let t = rng.random_range(1..=4usize);
            let mut idx: Vec<usize> = (0..14).collect();
            for i in 0..t {
                let j = rng.random_range(i..14);
                idx.swap(i, j);
            }
            let mut pattern = idx[..t].to_vec();
            pattern.sort_unstable();
            let erasures = ErasurePattern::new(pattern.clone()).unwrap();
            let mut stripe = original.clone();
            for &b in &pattern {
                stripe.block_mut(b).fill(0xEE);
            }
            let base = poly_decode(Variant::Baseline, &stripe, &erasures, &p).unwrap();
            let opt = poly_decode(Variant::Optimized, &stripe, &erasures, &p).unwrap();
            assert_eq!(base, opt, "case {case} pattern {pattern:?}");
            for (&b, block) in pattern.iter().zip(&base) {
                assert_eq!(block.as_slice(), original.block(b), "case {case} block {b}");
            }
        }
    }

    #[test]
    fn reencoding_recovered_data_reproduces_parity() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(26);
        let p = params(10, 4);
        let gp = build_generator_poly(&p);
        let original = random_stripe(&mut rng, &p, 16, |d| poly_encode(&gp, d).unwrap());
        let erasures = ErasurePattern::new(vec![0, 3, 7]).unwrap();
        let mut stripe = original.clone();
        for &b in [0usize, 3, 7].iter() {
            stripe.block_mut(b).fill(0);
        }
        let rec = poly_decode(Variant::Optimized, &stripe, &erasures, &p).unwrap();
        let mut data = original.data.clone();
        data[0] = rec[0].clone();
        data[3] = rec[1].clone();
        data[7] = rec[2].clone();
        assert_eq!(poly_encode(&gp, &data).unwrap(), original.parity);
    }

    #[test]
    fn step1_multiplication_counts() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(27);
        let p = params(10, 4);
        let gp = build_generator_poly(&p);
        let original = random_stripe(&mut rng, &p, 64, |d| poly_encode(&gp, d).unwrap());
        for t in 1..=4usize {
            let pattern: Vec<usize> = (0..t).collect();
            let erasures = ErasurePattern::new(pattern).unwrap();
            let mut stripe = original.clone();
            for b in 0..t {
                stripe.block_mut(b).fill(0);
            }
            let (_, base) = decode_baseline_stats(&p, &erasures, &stripe).unwrap();
            assert_eq!(base.data_mults_per_eq_per_offset(), 10.0, "baseline t={t}");
            let plan = DecodePlan::new(&p, &erasures).unwrap();
            let (_, opt) = decode_with_plan_stats(&plan, &stripe).unwrap();
            assert_eq!(
                opt.data_mults_per_eq_per_offset(),
                (10 - t) as f64,
                "optimized t={t}"
            );
        }
    }

    #[test]
    fn plan_reuse_across_stripe_halves() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(28);
        let p = params(10, 4);
        let gp = build_generator_poly(&p);
        let original = random_stripe(&mut rng, &p, 64, |d| poly_encode(&gp, d).unwrap());
        let erasures = ErasurePattern::new(vec![2, 5, 11]).unwrap();
        let plan = DecodePlan::new(&p, &erasures).unwrap();

        let (whole, _) = decode_with_plan_stats(&plan, &original).unwrap();
        let halves: Vec<Stripe> = [0usize, 32]
            .iter()
            .map(|&start| {
                Stripe::new(
                    original.data.iter().map(|b| b[start..start + 32].to_vec()).collect(),
                    original.parity.iter().map(|b| b[start..start + 32].to_vec()).collect(),
                )
                .unwrap()
            })
            .collect();
        let (lo, _) = decode_with_plan_stats(&plan, &halves[0]).unwrap();
        let (hi, _) = decode_with_plan_stats(&plan, &halves[1]).unwrap();
        for i in 0..whole.len() {
            let mut joined = lo[i].1.clone();
            joined.extend_from_slice(&hi[i].1);
            assert_eq!(whole[i].1, joined);
            assert_eq!(whole[i].0, lo[i].0);
        }
    }

    #[test]
    fn exact_k_plan_matches_default() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(29);
        let p = params(10, 4);
        let gp = build_generator_poly(&p);
        for _ in 0..40 {
            let original = random_stripe(&mut rng, &p, 9, |d| poly_encode(&gp, d).unwrap());
            let t = rng.random_range(1..=3usize);
            let mut pattern = Vec::new();
            while pattern.len() < t {
                let b = rng.random_range(0..10usize);
                if !pattern.contains(&b) {
                    pattern.push(b);
                }
            }
            pattern.sort_unstable();
            let erasures = ErasurePattern::new(pattern.clone()).unwrap();
            let default = DecodePlan::new(&p, &erasures).unwrap();
            let exact = DecodePlan::new_exact_k(&p, &erasures).unwrap();
            assert_eq!(exact.equations(), 4);
            let (d, _) = decode_with_plan_stats(&default, &original).unwrap();
            let (e, _) = decode_with_plan_stats(&exact, &original).unwrap();
            let d: Vec<_> = d.into_iter().filter(|(b, _)| pattern.contains(b)).collect();
            let e: Vec<_> = e.into_iter().filter(|(b, _)| pattern.contains(b)).collect();
            assert_eq!(d, e, "pattern {pattern:?}");
        }
    }
}
