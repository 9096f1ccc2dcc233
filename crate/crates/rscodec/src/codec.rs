//! Shared data model (parameters, stripes, erasure patterns) and the
//! uniform codec surface over the five realizations.

use std::fmt;
use std::str::FromStr;

use crate::matrix::{
    self, BitMatrix, CauchySets, GeneratorMatrix, MatrixDecodeCtx,
};
use crate::poly::{self, DecodePlan, EncodePlan, GeneratorPolynomial};
use crate::{Error, Result};

/// RS(k, m) over GF(2^8): k data blocks, m parity blocks, n = k + m <= 256.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodingParams {
    pub k: usize,
    pub m: usize,
    /// Word size in bits; fixed to 8.
    pub w: u32,
}

impl CodingParams {
    pub fn new(k: usize, m: usize) -> Result<Self> {
        if k < 1 || m < 1 || k + m > 256 {
            return Err(Error::InvalidParams { k, m, max: 256 });
        }
        Ok(CodingParams { k, m, w: 8 })
    }

    pub fn n(&self) -> usize {
        self.k + self.m
    }
}

/// One coding unit: k data blocks plus m parity blocks of equal length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stripe {
    pub data: Vec<Vec<u8>>,
    pub parity: Vec<Vec<u8>>,
}

impl Stripe {
    pub fn new(data: Vec<Vec<u8>>, parity: Vec<Vec<u8>>) -> Result<Self> {
        if data.is_empty() || parity.is_empty() {
            return Err(Error::BadStripeGeometry(
                "stripe needs data and parity blocks".into(),
            ));
        }
        let len = data[0].len();
        if len == 0 || data.iter().chain(&parity).any(|b| b.len() != len) {
            return Err(Error::BadStripeGeometry(
                "blocks must be nonempty and equal length".into(),
            ));
        }
        Ok(Stripe { data, parity })
    }

    pub fn k(&self) -> usize {
        self.data.len()
    }

    pub fn m(&self) -> usize {
        self.parity.len()
    }

    pub fn n(&self) -> usize {
        self.data.len() + self.parity.len()
    }

    pub fn block_len(&self) -> usize {
        self.data[0].len()
    }

    /// Block by stripe index: 0..k are data, k..k+m parity.
    pub fn block(&self, i: usize) -> &[u8] {
        if i < self.data.len() {
            &self.data[i]
        } else {
            &self.parity[i - self.data.len()]
        }
    }

    pub fn block_mut(&mut self, i: usize) -> &mut [u8] {
        if i < self.data.len() {
            &mut self.data[i]
        } else {
            let k = self.data.len();
            &mut self.parity[i - k]
        }
    }

    pub(crate) fn check(&self, k: usize, m: usize, align: usize) -> Result<()> {
        if self.k() != k || self.m() != m {
            return Err(Error::BadStripeGeometry(format!(
                "stripe is {}+{} blocks, codec wants {k}+{m}",
                self.k(),
                self.m()
            )));
        }
        let len = self.block_len();
        if len % align != 0 {
            return Err(Error::NotPacketAligned { len, align });
        }
        Ok(())
    }
}

/// Set of erased block indices; positions are known, contents are lost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErasurePattern {
    indices: Vec<usize>,
}

impl ErasurePattern {
    pub fn new(mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidErasures("duplicate indices".into()));
        }
        Ok(ErasurePattern { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, block: usize) -> bool {
        self.indices.binary_search(&block).is_ok()
    }

    pub(crate) fn check(&self, n: usize, m: usize) -> Result<()> {
        if let Some(&max) = self.indices.last() {
            if max >= n {
                return Err(Error::InvalidErasures(format!(
                    "index {max} out of range for n={n}"
                )));
            }
        }
        if self.len() > m {
            return Err(Error::TooManyErasures {
                got: self.len(),
                max: m,
            });
        }
        Ok(())
    }
}

/// The five codec realizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodecId {
    /// Cauchy generator with default sets, bit-matrix XOR coding.
    OrigCrs,
    /// Searched low-ones Cauchy generator, bit-matrix XOR coding.
    GoodCrs,
    /// Systematic Vandermonde-based generator, byte-region coding.
    VanderRs,
    /// Generator-polynomial codec, baseline per-offset algorithm.
    PolyRs,
    /// Generator-polynomial codec with precomputed plans and region kernels.
    OptPolyRs,
}

impl CodecId {
    pub const ALL: [CodecId; 5] = [
        CodecId::OrigCrs,
        CodecId::GoodCrs,
        CodecId::VanderRs,
        CodecId::PolyRs,
        CodecId::OptPolyRs,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CodecId::OrigCrs => "orig-crs",
            CodecId::GoodCrs => "good-crs",
            CodecId::VanderRs => "vander-rs",
            CodecId::PolyRs => "poly-rs",
            CodecId::OptPolyRs => "opt-poly-rs",
        }
    }
}

impl fmt::Display for CodecId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CodecId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "orig-crs" => Ok(CodecId::OrigCrs),
            "good-crs" => Ok(CodecId::GoodCrs),
            "vander-rs" => Ok(CodecId::VanderRs),
            "poly-rs" => Ok(CodecId::PolyRs),
            "opt-poly-rs" => Ok(CodecId::OptPolyRs),
            other => Err(Error::InvalidErasures(format!("unknown codec '{other}'"))),
        }
    }
}

enum Kind {
    Bit {
        gen: GeneratorMatrix,
        bits: BitMatrix,
    },
    Elem {
        gen: GeneratorMatrix,
    },
    PolyBaseline {
        gen: GeneratorPolynomial,
    },
    PolyOpt {
        encode_plan: EncodePlan,
    },
}

/// A constructed codec: immutable after `new`, safe to share across
/// threads; encode/decode never mutate it.
pub struct Codec {
    id: CodecId,
    params: CodingParams,
    kind: Kind,
}

/// Per-erasure-pattern decoding state, reusable across stripes of any
/// length: inverted matrices for the matrix path, the coefficient plan for
/// the optimized polynomial path.
pub struct DecodeContext(Ctx);

enum Ctx {
    Matrix(MatrixDecodeCtx),
    PolyPlan(DecodePlan),
    /// The baseline recomputes everything per offset by design; only the
    /// pattern is carried.
    PolyBaseline(ErasurePattern),
    /// Parity-only patterns re-encode instead of solving.
    ParityOnly(Vec<usize>),
}

impl Codec {
    pub fn new(id: CodecId, params: CodingParams) -> Result<Self> {
        CodingParams::new(params.k, params.m)?;
        let kind = match id {
            CodecId::OrigCrs => {
                let gen = matrix::cauchy_generator(&params, &CauchySets::default_for(&params))?;
                let bits = matrix::to_bitmatrix(&gen);
                Kind::Bit { gen, bits }
            }
            CodecId::GoodCrs => {
                let gen = matrix::good_cauchy_generator(&params)?;
                let bits = matrix::to_bitmatrix(&gen);
                Kind::Bit { gen, bits }
            }
            CodecId::VanderRs => Kind::Elem {
                gen: matrix::vandermonde_generator(&params)?,
            },
            CodecId::PolyRs => {
                if params.n() > 255 {
                    return Err(Error::InvalidParams {
                        k: params.k,
                        m: params.m,
                        max: 255,
                    });
                }
                Kind::PolyBaseline {
                    gen: poly::build_generator_poly(&params),
                }
            }
            CodecId::OptPolyRs => Kind::PolyOpt {
                encode_plan: poly::build_encode_plan(&params)?,
            },
        };
        Ok(Codec { id, params, kind })
    }

    pub fn id(&self) -> CodecId {
        self.id
    }

    pub fn params(&self) -> CodingParams {
        self.params
    }

    /// Block lengths must be a multiple of this. Bit-matrix codecs work on
    /// eight bit planes per block; the others are byte oriented.
    pub fn alignment(&self) -> usize {
        match self.kind {
            Kind::Bit { .. } => 8,
            _ => 1,
        }
    }

    /// Generator matrix of the matrix realizations, if this codec has one.
    pub fn generator(&self) -> Option<&GeneratorMatrix> {
        match &self.kind {
            Kind::Bit { gen, .. } | Kind::Elem { gen } => Some(gen),
            _ => None,
        }
    }

    pub fn encode(&self, data: &[Vec<u8>]) -> Result<Vec<Vec<u8>>> {
        match &self.kind {
            Kind::Bit { bits, .. } => matrix::bitmatrix_encode(bits, data),
            Kind::Elem { gen } => matrix::matrix_encode(gen, data),
            Kind::PolyBaseline { gen } => poly::poly_encode(gen, data),
            Kind::PolyOpt { encode_plan, .. } => poly::encode_via_decode(encode_plan, data),
        }
    }

    pub fn prepare_decode(&self, erasures: &ErasurePattern) -> Result<DecodeContext> {
        erasures.check(self.params.n(), self.params.m)?;
        let parity_only = erasures.indices().iter().all(|&b| b >= self.params.k);
        let ctx = match &self.kind {
            Kind::Bit { gen, .. } | Kind::Elem { gen } => {
                Ctx::Matrix(matrix::prepare_matrix_decode(gen, erasures)?)
            }
            Kind::PolyBaseline { .. } => {
                if parity_only {
                    Ctx::ParityOnly(erasures.indices().to_vec())
                } else {
                    Ctx::PolyBaseline(erasures.clone())
                }
            }
            Kind::PolyOpt { .. } => {
                if parity_only {
                    Ctx::ParityOnly(erasures.indices().to_vec())
                } else {
                    Ctx::PolyPlan(DecodePlan::new(&self.params, erasures)?)
                }
            }
        };
        Ok(DecodeContext(ctx))
    }

    pub fn decode_prepared(&self, ctx: &DecodeContext, stripe: &Stripe) -> Result<Vec<Vec<u8>>> {
        stripe.check(self.params.k, self.params.m, self.alignment())?;
        match (&self.kind, &ctx.0) {
            (Kind::Bit { gen, bits }, Ctx::Matrix(mctx)) => {
                matrix::bitmatrix_decode_prepared(gen, bits, mctx, stripe)
            }
            (Kind::Elem { gen }, Ctx::Matrix(mctx)) => {
                matrix::matrix_decode_prepared(gen, mctx, stripe)
            }
            (_, Ctx::ParityOnly(erased)) => {
                let parity = self.encode(&stripe.data)?;
                Ok(erased
                    .iter()
                    .map(|&b| parity[b - self.params.k].clone())
                    .collect())
            }
            (Kind::PolyBaseline { .. }, Ctx::PolyBaseline(erasures)) => {
                let (rec, _) = poly::decode_baseline_stats(&self.params, erasures, stripe)?;
                Ok(rec.into_iter().map(|(_, b)| b).collect())
            }
            (Kind::PolyOpt { .. }, Ctx::PolyPlan(plan)) => {
                let (rec, _) = poly::decode_with_plan_stats(plan, stripe)?;
                Ok(rec.into_iter().map(|(_, b)| b).collect())
            }
            _ => Err(Error::BadStripeGeometry(
                "decode context does not match codec".into(),
            )),
        }
    }

    /// Recover the erased blocks (ascending index order). Erased block
    /// contents in the stripe are never read.
    pub fn decode(&self, stripe: &Stripe, erasures: &ErasurePattern) -> Result<Vec<Vec<u8>>> {
        if erasures.is_empty() {
            erasures.check(self.params.n(), self.params.m)?;
            return Ok(Vec::new());
        }
        let ctx = self.prepare_decode(erasures)?;
        self.decode_prepared(&ctx, stripe)
    }
}

/// One-shot encode through a freshly constructed codec.
pub fn encode(id: CodecId, params: CodingParams, data: &[Vec<u8>]) -> Result<Vec<Vec<u8>>> {
    Codec::new(id, params)?.encode(data)
}

/// One-shot decode through a freshly constructed codec.
pub fn decode(
    id: CodecId,
    params: CodingParams,
    stripe: &Stripe,
    erasures: &ErasurePattern,
) -> Result<Vec<Vec<u8>>> {
    Codec::new(id, params)?.decode(stripe, erasures)
}
