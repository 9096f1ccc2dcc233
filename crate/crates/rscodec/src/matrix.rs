//! Matrix realization of Reed-Solomon: systematic Vandermonde-based
//! generators, Cauchy and searched "good" Cauchy generators, the bit-matrix
//! projection that turns coding into pure XOR, and the four-step decode
//! (drop erased rows, pick k survivors, invert, multiply).

use itertools::Itertools;

use crate::codec::{CodingParams, ErasurePattern, Stripe};
use crate::gf256::{self, ALPHA};
use crate::region;
use crate::{Error, Result};

/// Dense matrix over GF(2^8), row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GfMatrix {
    rows: usize,
    cols: usize,
    a: Vec<u8>,
}

impl GfMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        GfMatrix {
            rows,
            cols,
            a: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = GfMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c));
        GfMatrix {
            rows: r,
            cols: c,
            a: rows.concat(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.a[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.a[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.a[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0u8, |acc, (&a, &x)| acc ^ gf256::mul(a, x))
            })
            .collect()
    }

    pub fn mul_mat(&self, rhs: &GfMatrix) -> GfMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = GfMatrix::zero(self.rows, rhs.cols);
        for r in 0..self.rows {
            for i in 0..self.cols {
                let a = self.get(r, i);
                if a == 0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    let v = out.get(r, c) ^ gf256::mul(a, rhs.get(i, c));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    /// Gauss-Jordan inverse. Pivoting picks any nonzero pivot; field
    /// arithmetic is exact so there is no magnitude concern.
    pub fn inverted(&self) -> Result<GfMatrix> {
        if self.rows != self.cols {
            return Err(Error::SingularMatrix);
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = GfMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| a.get(r, col) != 0)
                .ok_or(Error::SingularMatrix)?;
            if pivot != col {
                for c in 0..n {
                    let (x, y) = (a.get(col, c), a.get(pivot, c));
                    a.set(col, c, y);
                    a.set(pivot, c, x);
                    let (x, y) = (inv.get(col, c), inv.get(pivot, c));
                    inv.set(col, c, y);
                    inv.set(pivot, c, x);
                }
            }
            let p = a.get(col, col);
            if p != 1 {
                let pi = gf256::inv(p)?;
                for c in 0..n {
                    a.set(col, c, gf256::mul(a.get(col, c), pi));
                    inv.set(col, c, gf256::mul(inv.get(col, c), pi));
                }
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col);
                if f == 0 {
                    continue;
                }
                for c in 0..n {
                    let v = a.get(r, c) ^ gf256::mul(f, a.get(col, c));
                    a.set(r, c, v);
                    let v = inv.get(r, c) ^ gf256::mul(f, inv.get(col, c));
                    inv.set(r, c, v);
                }
            }
        }
        Ok(inv)
    }

    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..self.rows).find(|&r| a.get(r, col) != 0) else {
                continue;
            };
            if pivot != rank {
                for c in 0..self.cols {
                    let (x, y) = (a.get(rank, c), a.get(pivot, c));
                    a.set(rank, c, y);
                    a.set(pivot, c, x);
                }
            }
            let pi = gf256::inv(a.get(rank, col)).unwrap();
            for r in rank + 1..self.rows {
                let f = gf256::mul(a.get(r, col), pi);
                if f == 0 {
                    continue;
                }
                for c in col..self.cols {
                    let v = a.get(r, c) ^ gf256::mul(f, a.get(rank, c));
                    a.set(r, c, v);
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }
}

/// n x k systematic generator: identity on the top k rows, m coding rows
/// below. Every k-row subset is invertible for the constructions here.
#[derive(Debug, Clone)]
pub struct GeneratorMatrix {
    k: usize,
    m: usize,
    mat: GfMatrix,
}

impl GeneratorMatrix {
    fn new(k: usize, m: usize, mat: GfMatrix) -> Self {
        debug_assert_eq!(mat.rows(), k + m);
        debug_assert_eq!(mat.cols(), k);
        GeneratorMatrix { k, m, mat }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.k + self.m
    }

    pub fn row(&self, i: usize) -> &[u8] {
        self.mat.row(i)
    }

    /// Coding row i (0-based among the m parity rows).
    pub fn parity_row(&self, i: usize) -> &[u8] {
        self.mat.row(self.k + i)
    }

    pub fn matrix(&self) -> &GfMatrix {
        &self.mat
    }

    /// Submatrix made of the given rows.
    pub fn select_rows(&self, rows: &[usize]) -> GfMatrix {
        let mut out = GfMatrix::zero(rows.len(), self.k);
        for (r, &src) in rows.iter().enumerate() {
            for c in 0..self.k {
                out.set(r, c, self.mat.get(src, c));
            }
        }
        out
    }
}

/// Distinct, disjoint element sets defining a Cauchy matrix: coding row i,
/// column j holds 1 / (x_i + y_j).
#[derive(Debug, Clone)]
pub struct CauchySets {
    pub x: Vec<u8>,
    pub y: Vec<u8>,
}

impl CauchySets {
    pub fn new(x: Vec<u8>, y: Vec<u8>) -> Result<Self> {
        let mut seen = [false; 256];
        for &e in x.iter().chain(&y) {
            if seen[e as usize] {
                return Err(Error::InvalidCauchySets(format!(
                    "element {e} repeats across X and Y"
                )));
            }
            seen[e as usize] = true;
        }
        Ok(CauchySets { x, y })
    }

    /// X = {0..m-1}, Y = {m..m+k-1}; valid whenever k + m <= 256.
    pub fn default_for(params: &CodingParams) -> Self {
        CauchySets {
            x: (0..params.m as u16).map(|e| e as u8).collect(),
            y: (params.m as u16..(params.m + params.k) as u16)
                .map(|e| e as u8)
                .collect(),
        }
    }
}

/// Systematic generator derived from the Vandermonde system P(alpha^i).
///
/// Row i of the base matrix evaluates the monomials at alpha^i; elementary
/// column operations (pivot normalize, then clear the pivot row) reduce the
/// top k x k block to the identity. Column operations multiply every k-row
/// subdeterminant by the same nonzero factor, so invertibility of all row
/// subsets is preserved.
pub fn vandermonde_generator(params: &CodingParams) -> Result<GeneratorMatrix> {
    let (k, m, n) = (params.k, params.m, params.n());
    if n > 255 {
        // alpha^i repeats after 255 steps; 256 distinct evaluation points
        // do not exist for this construction.
        return Err(Error::InvalidParams { k, m, max: 255 });
    }
    let mut v = GfMatrix::zero(n, k);
    for i in 0..n {
        for j in 0..k {
            v.set(i, j, gf256::pow(ALPHA, (i * j) as u64));
        }
    }
    for i in 0..k {
        if v.get(i, i) == 0 {
            // Top block stays nonsingular under column ops, so a nonzero
            // entry exists to the right.
            let j = (i + 1..k)
                .find(|&j| v.get(i, j) != 0)
                .expect("vandermonde top block is nonsingular");
            for r in 0..n {
                let (a, b) = (v.get(r, i), v.get(r, j));
                v.set(r, i, b);
                v.set(r, j, a);
            }
        }
        let p = v.get(i, i);
        if p != 1 {
            let pi = gf256::inv(p)?;
            for r in 0..n {
                v.set(r, i, gf256::mul(v.get(r, i), pi));
            }
        }
        for j in 0..k {
            if j == i {
                continue;
            }
            let f = v.get(i, j);
            if f == 0 {
                continue;
            }
            for r in 0..n {
                let val = v.get(r, j) ^ gf256::mul(f, v.get(r, i));
                v.set(r, j, val);
            }
        }
    }
    Ok(GeneratorMatrix::new(k, m, v))
}

/// Identity on top, Cauchy rows below: row i, column j = 1 / (x_i + y_j).
pub fn cauchy_generator(params: &CodingParams, sets: &CauchySets) -> Result<GeneratorMatrix> {
    let (k, m) = (params.k, params.m);
    if sets.x.len() != m || sets.y.len() != k {
        return Err(Error::InvalidCauchySets(format!(
            "need |X| = {m} and |Y| = {k}, got {} and {}",
            sets.x.len(),
            sets.y.len()
        )));
    }
    let mut mat = GfMatrix::zero(k + m, k);
    for i in 0..k {
        mat.set(i, i, 1);
    }
    for i in 0..m {
        for j in 0..k {
            mat.set(k + i, j, gf256::inv(sets.x[i] ^ sets.y[j])?);
        }
    }
    Ok(GeneratorMatrix::new(k, m, mat))
}

/// Count of ones in the 8x8 bit projection of a single element.
fn element_ones(e: u8) -> u32 {
    (0..8u32).map(|c| gf256::mul(e, 1 << c).count_ones()).sum()
}

/// Cauchy generator tuned for XOR cost: searches candidate X/Y sets and
/// per-coding-row scalings for the matrix whose bit projection has the
/// fewest ones. The default sets are always among the candidates, so the
/// result is never worse than `cauchy_generator` with defaults.
pub fn good_cauchy_generator(params: &CodingParams) -> Result<GeneratorMatrix> {
    let (k, m) = (params.k, params.m);

    // Cost an (x, y) pair contributes through its difference e = x ^ y.
    let mut diff_cost = [0u32; 256];
    for e in 1..=255u8 {
        diff_cost[e as usize] = element_ones(gf256::inv(e)?);
    }

    let candidate_x_sets = candidate_x_sets(k, m);
    let mut best: Option<(u64, Vec<u8>, Vec<u8>)> = None;
    for xs in candidate_x_sets {
        let mut in_x = [false; 256];
        for &x in &xs {
            in_x[x as usize] = true;
        }
        // Column costs are independent once X is fixed: greedily take the
        // k cheapest y candidates.
        let mut col_costs: Vec<(u64, u8)> = (0..=255u8)
            .filter(|&y| !in_x[y as usize])
            .map(|y| {
                let cost: u64 = xs.iter().map(|&x| diff_cost[(x ^ y) as usize] as u64).sum();
                (cost, y)
            })
            .collect();
        if col_costs.len() < k {
            continue;
        }
        col_costs.sort_unstable();
        let total: u64 = col_costs[..k].iter().map(|&(c, _)| c).sum();
        if best.as_ref().is_none_or(|(b, _, _)| total < *b) {
            let mut ys: Vec<u8> = col_costs[..k].iter().map(|&(_, y)| y).collect();
            ys.sort_unstable();
            best = Some((total, xs, ys));
        }
    }
    let (_, xs, ys) = best.expect("default Cauchy sets always fit");
    let sets = CauchySets::new(xs, ys)?;
    let mut gen = cauchy_generator(params, &sets)?;

    // Per-row scaling: multiplying a coding row by a nonzero constant keeps
    // every k-row subset invertible and can shrink the bit projection.
    for i in 0..m {
        let row: Vec<u8> = gen.parity_row(i).to_vec();
        let mut best_f = 1u8;
        let mut best_cost: u64 = row.iter().map(|&e| element_ones(e) as u64).sum();
        for f in 2..=255u8 {
            let cost: u64 = row
                .iter()
                .map(|&e| element_ones(gf256::mul(f, e)) as u64)
                .sum();
            if cost < best_cost {
                best_cost = cost;
                best_f = f;
            }
        }
        if best_f != 1 {
            for j in 0..k {
                let v = gf256::mul(best_f, row[j]);
                gen.mat.set(k + i, j, v);
            }
        }
    }
    Ok(gen)
}

fn candidate_x_sets(k: usize, m: usize) -> Vec<Vec<u8>> {
    let default: Vec<u8> = (0..m as u16).map(|e| e as u8).collect();
    let pool = (m + k + 6).min(256);
    // Keep the search bounded: full m-subset enumeration only while small.
    let mut count: u64 = 1;
    for i in 0..m as u64 {
        count = count.saturating_mul(pool as u64 - i) / (i + 1);
        if count > 3000 {
            break;
        }
    }
    if count <= 3000 {
        (0..pool as u16)
            .map(|e| e as u8)
            .combinations(m)
            .collect()
    } else {
        let mut sets = vec![default];
        for b in 1..(256 - m).min(64) {
            sets.push((b as u16..(b + m) as u16).map(|e| e as u8).collect());
        }
        sets
    }
}

/// Bit projection of the coding rows: an (8m) x (8k) binary matrix. The
/// 8x8 block for element e has, as column c, the bit pattern of e * 2^c,
/// so multiplying the data bits by the block equals the field product.
#[derive(Debug, Clone)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn zero(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            bits: vec![0; rows * words_per_row],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.words_per_row + c / 64] >> (c % 64) & 1 == 1
    }

    fn set(&mut self, r: usize, c: usize) {
        self.bits[r * self.words_per_row + c / 64] |= 1 << (c % 64);
    }

    pub fn ones(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }
}

/// Expand the coding rows of a generator into their bit projection.
pub fn to_bitmatrix(g: &GeneratorMatrix) -> BitMatrix {
    let (k, m) = (g.k(), g.m());
    let mut bm = BitMatrix::zero(8 * m, 8 * k);
    for i in 0..m {
        for j in 0..k {
            let e = g.parity_row(i)[j];
            for c in 0..8 {
                let col_bits = gf256::mul(e, 1 << c);
                for r in 0..8 {
                    if col_bits >> r & 1 == 1 {
                        bm.set(i * 8 + r, j * 8 + c);
                    }
                }
            }
        }
    }
    bm
}

/// 8x8 bit-matrix image of one element, row r as a bitmask over columns.
pub fn element_bits(e: u8) -> [u8; 8] {
    let mut rows = [0u8; 8];
    for c in 0..8 {
        let col = gf256::mul(e, 1 << c);
        for (r, row) in rows.iter_mut().enumerate() {
            *row |= (col >> r & 1) << c;
        }
    }
    rows
}

/// 8x8 bit transpose of a u64 viewed as eight little-endian byte rows.
#[inline]
fn transpose8(mut x: u64) -> u64 {
    let t = (x ^ (x >> 7)) & 0x00AA_00AA_00AA_00AA;
    x ^= t ^ (t << 7);
    let t = (x ^ (x >> 14)) & 0x0000_CCCC_0000_CCCC;
    x ^= t ^ (t << 14);
    let t = (x ^ (x >> 28)) & 0x0000_0000_F0F0_F0F0;
    x ^= t ^ (t << 28);
    x
}

/// Rewrite a block into its eight bit planes: plane r (the r-th eighth of
/// `out`) collects bit r of every byte. Requires len % 8 == 0.
pub(crate) fn to_planes(block: &[u8], out: &mut [u8]) {
    debug_assert_eq!(block.len(), out.len());
    debug_assert_eq!(block.len() % 8, 0);
    let pl = block.len() / 8;
    for (q, word) in block.chunks_exact(8).enumerate() {
        let t = transpose8(u64::from_le_bytes(word.try_into().unwrap())).to_le_bytes();
        for r in 0..8 {
            out[r * pl + q] = t[r];
        }
    }
}

/// Inverse of `to_planes`.
pub(crate) fn from_planes(planes: &[u8], out: &mut [u8]) {
    debug_assert_eq!(planes.len(), out.len());
    debug_assert_eq!(planes.len() % 8, 0);
    let pl = planes.len() / 8;
    for (q, word) in out.chunks_exact_mut(8).enumerate() {
        let gathered = u64::from_le_bytes([
            planes[q],
            planes[pl + q],
            planes[2 * pl + q],
            planes[3 * pl + q],
            planes[4 * pl + q],
            planes[5 * pl + q],
            planes[6 * pl + q],
            planes[7 * pl + q],
        ]);
        word.copy_from_slice(&transpose8(gathered).to_le_bytes());
    }
}

fn check_blocks(blocks: &[Vec<u8>], expected: usize, align: usize) -> Result<usize> {
    if blocks.len() != expected {
        return Err(Error::BadStripeGeometry(format!(
            "expected {expected} blocks, got {}",
            blocks.len()
        )));
    }
    let len = blocks[0].len();
    if len == 0 || blocks.iter().any(|b| b.len() != len) {
        return Err(Error::BadStripeGeometry(
            "blocks must be nonempty and equal length".into(),
        ));
    }
    if len % align != 0 {
        return Err(Error::NotPacketAligned { len, align });
    }
    Ok(len)
}

/// Parity row i = sum_j data_j * g[k+i][j], applied per byte offset via the
/// chunked region kernels.
pub fn matrix_encode(g: &GeneratorMatrix, data: &[Vec<u8>]) -> Result<Vec<Vec<u8>>> {
    let len = check_blocks(data, g.k(), 1)?;
    let rows: Vec<Vec<u8>> = (0..g.m()).map(|i| g.parity_row(i).to_vec()).collect();
    let srcs: Vec<&[u8]> = data.iter().map(Vec::as_slice).collect();
    region::apply_matrix(&rows, &srcs, len)
}

/// XOR schedule: for each output bit-plane row, which (source slot, plane)
/// pairs get XORed in. Derived once; replayed chunk by chunk.
struct XorSchedule {
    rows: Vec<Vec<(usize, usize)>>,
}

impl XorSchedule {
    /// Schedule for the m parity blocks of a bit matrix; source slots are
    /// the k data blocks.
    fn from_bitmatrix(bm: &BitMatrix) -> Self {
        let k = bm.cols() / 8;
        let rows = (0..bm.rows())
            .map(|r| {
                (0..k * 8)
                    .filter(|&jc| bm.get(r, jc))
                    .map(|jc| (jc / 8, jc % 8))
                    .collect()
            })
            .collect();
        XorSchedule { rows }
    }

    /// Schedule for one element row applied to its source slots.
    fn from_element_row(row: &[u8]) -> Self {
        let mut rows = vec![Vec::new(); 8];
        for (slot, &e) in row.iter().enumerate() {
            let bits = element_bits(e);
            for (r, &mask) in bits.iter().enumerate() {
                for c in 0..8 {
                    if mask >> c & 1 == 1 {
                        rows[r].push((slot, c));
                    }
                }
            }
        }
        XorSchedule { rows }
    }

    /// XOR the scheduled planes of `srcs` into `acc` (len = chunk bytes,
    /// eight planes of pl bytes). `base` selects the schedule row group:
    /// output block index * 8.
    fn accumulate(&self, base: usize, srcs: &PlaneBuf, acc: &mut [u8]) -> Result<()> {
        let pl = acc.len() / 8;
        for (r, chunk) in acc.chunks_exact_mut(pl).enumerate() {
            for &(slot, c) in &self.rows[base + r] {
                region::xor(srcs.plane(slot, c, pl), chunk)?;
            }
        }
        Ok(())
    }
}

/// Bit planes for a set of source blocks over one chunk: slot-major, then
/// plane-major, pl bytes each.
struct PlaneBuf {
    buf: Vec<u8>,
    chunk: usize,
}

impl PlaneBuf {
    fn new(slots: usize, chunk: usize) -> Self {
        PlaneBuf {
            buf: vec![0u8; slots * chunk],
            chunk,
        }
    }

    fn fill_slot(&mut self, slot: usize, bytes: &[u8]) {
        let cl = bytes.len();
        to_planes(bytes, &mut self.buf[slot * self.chunk..][..cl]);
    }

    fn slot(&self, slot: usize, cl: usize) -> &[u8] {
        &self.buf[slot * self.chunk..][..cl]
    }

    fn slot_mut(&mut self, slot: usize, cl: usize) -> &mut [u8] {
        &mut self.buf[slot * self.chunk..][..cl]
    }

    fn plane(&self, slot: usize, c: usize, pl: usize) -> &[u8] {
        &self.buf[slot * self.chunk + c * pl..][..pl]
    }
}

/// XOR-only encode through the bit projection: every parity bit plane is
/// the XOR of the data bit planes whose bit-matrix entry is set, processed
/// chunk-wise so the planes stay cache-resident. Output is byte-identical
/// to `matrix_encode` with the same generator.
pub fn bitmatrix_encode(bm: &BitMatrix, data: &[Vec<u8>]) -> Result<Vec<Vec<u8>>> {
    let k = bm.cols() / 8;
    let m = bm.rows() / 8;
    let len = check_blocks(data, k, 8)?;
    let schedule = XorSchedule::from_bitmatrix(bm);

    let mut parity = vec![vec![0u8; len]; m];
    let mut dplanes = PlaneBuf::new(k, region::CHUNK);
    let mut acc = vec![0u8; region::CHUNK];
    let mut start = 0;
    while start < len {
        let end = (start + region::CHUNK).min(len);
        let cl = end - start;
        for (j, block) in data.iter().enumerate() {
            dplanes.fill_slot(j, &block[start..end]);
        }
        for (i, block) in parity.iter_mut().enumerate() {
            let acc = &mut acc[..cl];
            acc.fill(0);
            schedule.accumulate(i * 8, &dplanes, acc)?;
            from_planes(acc, &mut block[start..end]);
        }
        start = end;
    }
    Ok(parity)
}

/// Context shared by both decode paths: which blocks are gone, which k
/// survivors were selected, and the inverse rows that rebuild erased data.
pub(crate) struct MatrixDecodeCtx {
    pub erased_data: Vec<usize>,
    pub erased_parity: Vec<usize>,
    /// k selected survivor block indices, ascending (data rows first by
    /// construction since data indices precede parity indices).
    pub selected: Vec<usize>,
    /// One row per erased data block: coefficients applied to the selected
    /// survivor blocks.
    pub data_rows: Vec<Vec<u8>>,
}

pub(crate) fn prepare_matrix_decode(
    g: &GeneratorMatrix,
    erasures: &ErasurePattern,
) -> Result<MatrixDecodeCtx> {
    let (k, m, n) = (g.k(), g.m(), g.n());
    erasures.check(n, m)?;
    let erased_data: Vec<usize> = erasures.indices().iter().copied().filter(|&b| b < k).collect();
    let erased_parity: Vec<usize> = erasures.indices().iter().copied().filter(|&b| b >= k).collect();
    let selected: Vec<usize> = (0..n)
        .filter(|&b| !erasures.contains(b))
        .take(k)
        .collect();
    let mut data_rows = Vec::with_capacity(erased_data.len());
    if !erased_data.is_empty() {
        let sub = g.select_rows(&selected);
        let inv = sub.inverted()?;
        for &e in &erased_data {
            data_rows.push(inv.row(e).to_vec());
        }
    }
    Ok(MatrixDecodeCtx {
        erased_data,
        erased_parity,
        selected,
        data_rows,
    })
}

/// Four-step matrix decode over byte regions. Returns the erased blocks in
/// ascending index order; erased parity is re-encoded from the (recovered)
/// data rows.
pub fn matrix_decode(
    g: &GeneratorMatrix,
    stripe: &Stripe,
    erasures: &ErasurePattern,
) -> Result<Vec<Vec<u8>>> {
    let ctx = prepare_matrix_decode(g, erasures)?;
    matrix_decode_prepared(g, &ctx, stripe)
}

pub(crate) fn matrix_decode_prepared(
    g: &GeneratorMatrix,
    ctx: &MatrixDecodeCtx,
    stripe: &Stripe,
) -> Result<Vec<Vec<u8>>> {
    let k = g.k();
    stripe.check(k, g.m(), 1)?;
    let len = stripe.block_len();

    let survivors: Vec<&[u8]> = ctx.selected.iter().map(|&s| stripe.block(s)).collect();
    let recovered_data = region::apply_matrix(&ctx.data_rows, &survivors, len)?;

    let mut out = recovered_data.clone();
    if !ctx.erased_parity.is_empty() {
        // Assemble the full data view: survivors from the stripe, the rest
        // from what we just recovered.
        let data_view: Vec<&[u8]> = (0..k)
            .map(|j| match ctx.erased_data.iter().position(|&e| e == j) {
                Some(i) => recovered_data[i].as_slice(),
                None => stripe.block(j),
            })
            .collect();
        let rows: Vec<Vec<u8>> = ctx
            .erased_parity
            .iter()
            .map(|&p| g.parity_row(p - k).to_vec())
            .collect();
        out.extend(region::apply_matrix(&rows, &data_view, len)?);
    }
    Ok(out)
}

/// Matrix decode carried out in the bit-plane domain: the element-level
/// k x k submatrix is inverted first (64x cheaper than inverting bits) and
/// only the needed rows are expanded to XOR schedules. All plane work runs
/// chunk-wise, like the encode.
pub(crate) fn bitmatrix_decode_prepared(
    g: &GeneratorMatrix,
    bm: &BitMatrix,
    ctx: &MatrixDecodeCtx,
    stripe: &Stripe,
) -> Result<Vec<Vec<u8>>> {
    let k = g.k();
    stripe.check(k, g.m(), 8)?;
    let len = stripe.block_len();
    let t = ctx.erased_data.len();

    // One schedule per recovered data block (its inverse row, expanded to
    // bits over the selected survivors) plus the parity schedule.
    let rec_schedules: Vec<XorSchedule> = ctx
        .data_rows
        .iter()
        .map(|row| XorSchedule::from_element_row(row))
        .collect();
    let parity_schedule = if ctx.erased_parity.is_empty() {
        None
    } else {
        Some(XorSchedule::from_bitmatrix(bm))
    };

    // Surviving data blocks occupy the leading selected slots; map each
    // data index to where its planes will live during parity re-encode.
    let mut out: Vec<Vec<u8>> =
        vec![vec![0u8; len]; ctx.erased_data.len() + ctx.erased_parity.len()];
    let mut sel_planes = PlaneBuf::new(ctx.selected.len().max(1), region::CHUNK);
    let mut dplanes = PlaneBuf::new(if parity_schedule.is_some() { k } else { 1 }, region::CHUNK);
    let mut acc = vec![0u8; region::CHUNK];

    let mut start = 0;
    while start < len {
        let end = (start + region::CHUNK).min(len);
        let cl = end - start;
        if t > 0 {
            for (pos, &b) in ctx.selected.iter().enumerate() {
                sel_planes.fill_slot(pos, &stripe.block(b)[start..end]);
            }
        }
        for (i, schedule) in rec_schedules.iter().enumerate() {
            let acc = &mut acc[..cl];
            acc.fill(0);
            schedule.accumulate(0, &sel_planes, acc)?;
            if parity_schedule.is_some() {
                dplanes.slot_mut(ctx.erased_data[i], cl).copy_from_slice(acc);
            }
            from_planes(acc, &mut out[i][start..end]);
        }
        if let Some(schedule) = &parity_schedule {
            for j in 0..k {
                if ctx.erased_data.contains(&j) {
                    continue; // already in place from the recovery above
                }
                match ctx.selected.iter().position(|&s| s == j) {
                    Some(pos) if t > 0 => dplanes
                        .slot_mut(j, cl)
                        .copy_from_slice(sel_planes.slot(pos, cl)),
                    _ => dplanes.fill_slot(j, &stripe.block(j)[start..end]),
                }
            }
            for (i, &p) in ctx.erased_parity.iter().enumerate() {
                let acc = &mut acc[..cl];
                acc.fill(0);
                schedule.accumulate((p - k) * 8, &dplanes, acc)?;
                from_planes(acc, &mut out[t + i][start..end]);
            }
        }
        start = end;
    }
    Ok(out)
}
