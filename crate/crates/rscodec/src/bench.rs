//! Benchmark harness and self-test battery.
//!
//! The harness stages seeded random stripes in memory, times the coding
//! kernels (codec construction and per-pattern planning happen outside the
//! timed sections and are reported as separate `setup` records), verifies
//! every decode bytewise before recording it, and emits one CSV row per
//! timed operation.

use std::fmt;
use std::path::Path;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::codec::{Codec, CodecId, CodingParams, ErasurePattern, Stripe};
use crate::{gf256, oracle, poly, Error, Result};

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub codecs: Vec<CodecId>,
    pub k: usize,
    pub m: usize,
    pub block_bytes: Vec<usize>,
    pub erasure_counts: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
}

impl BenchConfig {
    /// The default grid: RS(10,4), 1/2/4 MiB blocks, every erasure count,
    /// all five codecs, three trials.
    pub fn default_grid(seed: u64) -> Self {
        BenchConfig {
            codecs: CodecId::ALL.to_vec(),
            k: 10,
            m: 4,
            block_bytes: vec![1 << 20, 2 << 20, 4 << 20],
            erasure_counts: vec![1, 2, 3, 4],
            trials: 3,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        CodingParams::new(self.k, self.m)?;
        if self.codecs.is_empty() {
            return Err(Error::InvalidErasures("no codecs selected".into()));
        }
        if self.trials < 1 {
            return Err(Error::InvalidErasures("trials must be >= 1".into()));
        }
        for &bs in &self.block_bytes {
            if bs == 0 || bs % 8 != 0 {
                return Err(Error::NotPacketAligned { len: bs, align: 8 });
            }
        }
        if self.erasure_counts.iter().any(|&e| e == 0 || e > self.m) {
            return Err(Error::InvalidErasures(format!(
                "erasure counts must lie in 1..={}",
                self.m
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Setup,
    Encode,
    Decode,
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Op::Setup => "setup",
            Op::Encode => "encode",
            Op::Decode => "decode",
        })
    }
}

/// One timed trial. Throughput is (k * block_bytes) / elapsed in MB/s.
#[derive(Debug, Clone)]
pub struct BenchRecord {
    pub codec: CodecId,
    pub k: usize,
    pub m: usize,
    pub block_bytes: usize,
    pub erasures: usize,
    pub trial: usize,
    pub op: Op,
    pub elapsed_ns: u128,
    pub throughput_mbps: f64,
    pub erased: Vec<usize>,
    pub seed: u64,
}

fn throughput_mbps(k: usize, block_bytes: usize, elapsed_ns: u128) -> f64 {
    (k * block_bytes) as f64 / elapsed_ns.max(1) as f64 * 1000.0
}

fn mix(seed: u64, salt: &[u64]) -> u64 {
    // splitmix64 over the seed and salts; keeps data and patterns
    // reproducible and independent of codec iteration order.
    let mut z = seed;
    for &s in salt {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_add(s);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
    }
    z
}

fn gen_data(seed: u64, block_bytes: usize, trial: usize, k: usize) -> Vec<Vec<u8>> {
    let mut rng = ChaCha12Rng::seed_from_u64(mix(seed, &[1, block_bytes as u64, trial as u64]));
    (0..k)
        .map(|_| {
            let mut b = vec![0u8; block_bytes];
            rng.fill_bytes(&mut b);
            b
        })
        .collect()
}

/// Erasure pattern for one decode point. Single erasures cycle through all
/// n blocks across trials; larger counts use the all-data prefix on the
/// first trial and seeded random patterns afterwards.
fn draw_pattern(
    seed: u64,
    block_bytes: usize,
    erasures: usize,
    trial: usize,
    n: usize,
) -> Vec<usize> {
    if erasures == 1 {
        return vec![trial % n];
    }
    if trial == 0 {
        return (0..erasures).collect();
    }
    let mut rng = ChaCha12Rng::seed_from_u64(mix(
        seed,
        &[2, block_bytes as u64, erasures as u64, trial as u64],
    ));
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(&mut rng);
    let mut pattern = all[..erasures].to_vec();
    pattern.sort_unstable();
    pattern
}

/// Run the configured grid. Every decode is verified bytewise against the
/// original blocks before its record is kept; a mismatch aborts with the
/// codec, pattern and seed.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRecord>> {
    config.validate()?;
    let params = CodingParams::new(config.k, config.m)?;
    let n = params.n();
    let mut records = Vec::new();

    for &id in &config.codecs {
        for &block_bytes in &config.block_bytes {
            let t0 = Instant::now();
            let codec = Codec::new(id, params)?;
            let setup_ns = t0.elapsed().as_nanos();
            records.push(BenchRecord {
                codec: id,
                k: config.k,
                m: config.m,
                block_bytes,
                erasures: 0,
                trial: 0,
                op: Op::Setup,
                elapsed_ns: setup_ns,
                throughput_mbps: throughput_mbps(config.k, block_bytes, setup_ns),
                erased: Vec::new(),
                seed: config.seed,
            });

            for trial in 0..config.trials {
                let data = gen_data(config.seed, block_bytes, trial, config.k);
                if trial == 0 {
                    let _ = codec.encode(&data)?; // warm-up, untimed
                }
                let t = Instant::now();
                let parity = codec.encode(&data)?;
                let encode_ns = t.elapsed().as_nanos();
                records.push(BenchRecord {
                    codec: id,
                    k: config.k,
                    m: config.m,
                    block_bytes,
                    erasures: 0,
                    trial,
                    op: Op::Encode,
                    elapsed_ns: encode_ns,
                    throughput_mbps: throughput_mbps(config.k, block_bytes, encode_ns),
                    erased: Vec::new(),
                    seed: config.seed,
                });

                let mut stripe = Stripe::new(data, parity)?;
                for &e in &config.erasure_counts {
                    let pattern = draw_pattern(config.seed, block_bytes, e, trial, n);
                    let erasures = ErasurePattern::new(pattern.clone())?;
                    let saved: Vec<Vec<u8>> =
                        pattern.iter().map(|&b| stripe.block(b).to_vec()).collect();
                    for &b in &pattern {
                        stripe.block_mut(b).fill(0xAA);
                    }
                    let ctx = codec.prepare_decode(&erasures)?;
                    if trial == 0 {
                        let _ = codec.decode_prepared(&ctx, &stripe)?; // warm-up
                    }
                    let t = Instant::now();
                    let recovered = codec.decode_prepared(&ctx, &stripe)?;
                    let decode_ns = t.elapsed().as_nanos();

                    let ok = recovered.len() == saved.len()
                        && recovered.iter().zip(&saved).all(|(a, b)| a == b);
                    if !ok {
                        return Err(Error::VerifyFailed(format!(
                            "codec {id}, pattern {pattern:?}, seed {}",
                            config.seed
                        )));
                    }
                    // Put the blocks back for the next erasure count.
                    for (&b, block) in pattern.iter().zip(saved) {
                        stripe.block_mut(b).copy_from_slice(&block);
                    }
                    records.push(BenchRecord {
                        codec: id,
                        k: config.k,
                        m: config.m,
                        block_bytes,
                        erasures: e,
                        trial,
                        op: Op::Decode,
                        elapsed_ns: decode_ns,
                        throughput_mbps: throughput_mbps(config.k, block_bytes, decode_ns),
                        erased: pattern,
                        seed: config.seed,
                    });
                }
            }
        }
    }
    Ok(records)
}

pub const CSV_HEADER: &str =
    "codec,k,m,block_bytes,erasures,trial,op,elapsed_ns,throughput_mbps,erased,seed";

/// Render records as CSV, header first, in record order.
pub fn csv_string(records: &[BenchRecord]) -> Result<String> {
    if records.is_empty() {
        return Err(Error::NoRecords);
    }
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let erased = r
            .erased
            .iter()
            .map(|b| b.to_string())
            .collect::<Vec<_>>()
            .join(";");
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{:.3},{},{}\n",
            r.codec,
            r.k,
            r.m,
            r.block_bytes,
            r.erasures,
            r.trial,
            r.op,
            r.elapsed_ns,
            r.throughput_mbps,
            erased,
            r.seed
        ));
    }
    Ok(out)
}

/// Write the CSV to a file; refuses an empty record list without creating
/// the file.
pub fn emit_csv(records: &[BenchRecord], path: &Path) -> Result<()> {
    let body = csv_string(records)?;
    std::fs::write(path, body)?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct SelfTestReport {
    pub checks: Vec<CheckResult>,
}

impl SelfTestReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &'static str, passed: bool, detail: String) {
        self.checks.push(CheckResult {
            name,
            passed,
            detail,
        });
    }
}

/// The correctness battery behind `rscodec selftest`: golden worked
/// examples, the field-table cross-check, and a reduced erasure sweep.
pub fn selftest() -> SelfTestReport {
    selftest_with_mul(gf256::mul)
}

/// Same battery with an injectable multiply, so a corrupted table is
/// detectable by tests.
pub(crate) fn selftest_with_mul(mul: impl Fn(u8, u8) -> u8) -> SelfTestReport {
    let mut report = SelfTestReport::default();

    // Field tables against the bitwise oracle, full 256x256.
    let mut bad_pairs = 0u32;
    for a in 0..=255u8 {
        for b in 0..=255u8 {
            if mul(a, b) != oracle::naive_mul(a, b) {
                bad_pairs += 1;
            }
        }
    }
    let mut period_ok = gf256::pow(2, 255) == 1;
    for i in 1..255 {
        period_ok &= gf256::pow(2, i) != 1;
    }
    report.push(
        "gf-tables",
        bad_pairs == 0 && period_ok,
        format!("{bad_pairs} mismatching pairs of 65536; exp period 255: {period_ok}"),
    );

    let params = CodingParams::new(4, 3).unwrap();
    let gp = poly::build_generator_poly(&params);
    let gen_ok = gp.coeffs() == [8, 14, 7, 1];
    report.push(
        "generator-poly",
        gen_ok,
        format!("m=3 coefficients (low first): {:?}", gp.coeffs()),
    );

    let data: Vec<Vec<u8>> = [48u8, 6, 112, 70].iter().map(|&b| vec![b]).collect();
    let expect = vec![vec![243u8], vec![125], vec![142]];
    let enc_ok = poly::poly_encode(&gp, &data).is_ok_and(|p| p == expect)
        && poly::build_encode_plan(&params)
            .and_then(|ep| poly::encode_via_decode(&ep, &data))
            .is_ok_and(|p| p == expect);
    report.push(
        "encode",
        enc_ok,
        "data 48,6,112,70 -> parity 243,125,142 (direct and via decode)".to_string(),
    );

    let stripe = Stripe::new(vec![vec![0], vec![0], vec![0], vec![70]], expect.clone()).unwrap();
    let erasures = ErasurePattern::new(vec![0, 1, 2]).unwrap();
    let evals = poly::eval_error_evaluators(&stripe, &erasures, &params);
    let evals_ok = evals
        .as_ref()
        .is_ok_and(|e| e.as_slice() == [vec![70u8, 91, 171]]);
    let solved = poly::solve_erased(&[70, 91, 171], &erasures, &params);
    let solved_ok = solved.as_ref().is_ok_and(|s| s == &[48, 6, 112]);
    let both = [poly::Variant::Baseline, poly::Variant::Optimized]
        .into_iter()
        .all(|v| {
            poly::poly_decode(v, &stripe, &erasures, &params)
                .is_ok_and(|r| r == [vec![48u8], vec![6], vec![112]])
        });
    report.push(
        "decode",
        evals_ok && solved_ok && both,
        format!(
            "evaluators {:?}, solved {:?}, both variants recover 48,6,112",
            evals.map(|e| e.first().cloned()),
            solved
        ),
    );

    // Reduced sweep: every pattern at (4,3), all five codecs, 8-byte blocks.
    let mut sweep_ok = true;
    let mut details = Vec::new();
    for id in CodecId::ALL {
        let codec = Codec::new(id, CodingParams::new(4, 3).unwrap()).unwrap();
        let rep = oracle::exhaustive_mds_sweep(&codec, 8, 0x5E1F);
        sweep_ok &= rep.ok() && rep.patterns_tested == 63;
        details.push(format!("{id}: {}/63", rep.patterns_tested - rep.failures.len()));
    }
    report.push("mds-sweep", sweep_ok, details.join(", "));

    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_counts_for_one_point() {
        let config = BenchConfig {
            codecs: vec![CodecId::VanderRs],
            k: 4,
            m: 2,
            block_bytes: vec![4096],
            erasure_counts: vec![2],
            trials: 3,
            seed: 99,
        };
        let records = run_bench(&config).unwrap();
        let setups = records.iter().filter(|r| r.op == Op::Setup).count();
        let encodes = records.iter().filter(|r| r.op == Op::Encode).count();
        let decodes = records.iter().filter(|r| r.op == Op::Decode).count();
        assert_eq!((setups, encodes, decodes), (1, 3, 3));
    }

    #[test]
    fn records_reproducible_in_content_under_fixed_seed() {
        let config = BenchConfig {
            codecs: vec![CodecId::OptPolyRs],
            k: 6,
            m: 3,
            block_bytes: vec![1024],
            erasure_counts: vec![1, 3],
            trials: 3,
            seed: 7,
        };
        let a = run_bench(&config).unwrap();
        let b = run_bench(&config).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.erased, y.erased);
            assert_eq!(x.op, y.op);
            assert_eq!((x.trial, x.erasures, x.block_bytes), (y.trial, y.erasures, y.block_bytes));
        }
        // Single-erasure patterns cycle across trials.
        let singles: Vec<_> = a
            .iter()
            .filter(|r| r.op == Op::Decode && r.erasures == 1)
            .map(|r| r.erased.clone())
            .collect();
        assert_eq!(singles, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn csv_shape_and_errors() {
        assert!(matches!(csv_string(&[]), Err(Error::NoRecords)));
        let rec = BenchRecord {
            codec: CodecId::PolyRs,
            k: 10,
            m: 4,
            block_bytes: 4096,
            erasures: 2,
            trial: 1,
            op: Op::Decode,
            elapsed_ns: 12345,
            throughput_mbps: 3318.75,
            erased: vec![3, 11],
            seed: 42,
        };
        let s = csv_string(&[rec]).unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(
            lines.next(),
            Some("poly-rs,10,4,4096,2,1,decode,12345,3318.750,3;11,42")
        );
        assert_eq!(lines.next(), None);
    }

    #[test]
    fn emit_csv_refuses_empty_without_creating_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        assert!(emit_csv(&[], &path).is_err());
        assert!(!path.exists());
    }

    #[test]
    fn config_validation() {
        let mut c = BenchConfig::default_grid(1);
        assert!(c.validate().is_ok());
        c.erasure_counts = vec![5];
        assert!(c.validate().is_err());
        let mut c = BenchConfig::default_grid(1);
        c.block_bytes = vec![12];
        assert!(c.validate().is_err());
        let mut c = BenchConfig::default_grid(1);
        c.trials = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn selftest_passes_and_catches_corruption() {
        let report = selftest();
        assert!(report.ok(), "{:?}", report.checks);
        assert!(report
            .checks
            .iter()
            .any(|c| c.detail.contains("243,125,142")));

        // Fault injection: one wrong product makes the table check fail.
        let corrupted = |a: u8, b: u8| {
            if (a, b) == (7, 7) {
                0x5A
            } else {
                gf256::mul(a, b)
            }
        };
        let report = selftest_with_mul(corrupted);
        assert!(!report.ok());
        let table_check = report.checks.iter().find(|c| c.name == "gf-tables").unwrap();
        assert!(!table_check.passed);
    }
}
