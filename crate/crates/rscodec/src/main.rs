use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rscodec::bench::{self, BenchConfig};
use rscodec::{Codec, CodecId, CodingParams, ErasurePattern, Stripe};

#[derive(Parser)]
#[command(
    name = "rscodec",
    version,
    about = "Reed-Solomon erasure coding benchmarks and block-file tools"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Time encode/decode across codecs, block sizes and erasure counts,
    /// verifying every decode, and write per-trial records as CSV.
    Bench {
        /// Codecs to run (comma separated).
        #[arg(long, value_delimiter = ',', default_values_t = CodecId::ALL)]
        codecs: Vec<CodecId>,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, default_value_t = 4)]
        m: usize,
        /// Block sizes in bytes (comma separated).
        #[arg(long, value_delimiter = ',', default_values_t = [1048576, 2097152, 4194304])]
        block_bytes: Vec<usize>,
        /// Erasure counts to decode (comma separated).
        #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 3, 4])]
        erasures: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the built-in correctness battery and report pass/fail per check.
    Selftest,
    /// Encode k equal-sized data block files; writes parity_<i>.bin files.
    Encode {
        #[arg(long)]
        codec: CodecId,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        /// Directory for the parity block files.
        #[arg(long)]
        out_dir: PathBuf,
        /// The k data block files, in index order.
        data_files: Vec<PathBuf>,
    },
    /// Recover erased blocks from survivor block files; writes
    /// block_<i>.bin for each erased index.
    Decode {
        #[arg(long)]
        codec: CodecId,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        /// Erased block indices (comma separated). Files at those
        /// positions are ignored and may be missing.
        #[arg(long, value_delimiter = ',')]
        erased: Vec<usize>,
        #[arg(long)]
        out_dir: PathBuf,
        /// All k+m block files in index order (data then parity).
        block_files: Vec<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Cmd) -> rscodec::Result<ExitCode> {
    match cmd {
        Cmd::Bench {
            codecs,
            k,
            m,
            block_bytes,
            erasures,
            trials,
            seed,
            out,
        } => {
            let config = BenchConfig {
                codecs,
                k,
                m,
                block_bytes,
                erasure_counts: erasures,
                trials,
                seed,
            };
            if let Err(e) = config.validate() {
                eprintln!("error: {e}");
                return Ok(ExitCode::from(2));
            }
            let records = bench::run_bench(&config)?;
            bench::emit_csv(&records, &out)?;
            println!(
                "wrote {} records to {} (all decodes verified)",
                records.len(),
                out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Selftest => {
            let report = bench::selftest();
            for check in &report.checks {
                let status = if check.passed { "PASS" } else { "FAIL" };
                println!("{status} {:<16} {}", check.name, check.detail);
            }
            Ok(if report.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Encode {
            codec,
            k,
            m,
            out_dir,
            data_files,
        } => {
            if data_files.len() != k {
                eprintln!("error: expected {k} data files, got {}", data_files.len());
                return Ok(ExitCode::from(2));
            }
            let params = CodingParams::new(k, m)?;
            let codec = Codec::new(codec, params)?;
            let data: Vec<Vec<u8>> = data_files
                .iter()
                .map(fs::read)
                .collect::<std::io::Result<_>>()?;
            let parity = codec.encode(&data)?;
            fs::create_dir_all(&out_dir)?;
            for (i, block) in parity.iter().enumerate() {
                let path = out_dir.join(format!("parity_{i}.bin"));
                fs::write(&path, block)?;
                println!("{}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Decode {
            codec,
            k,
            m,
            erased,
            out_dir,
            block_files,
        } => {
            let n = k + m;
            if block_files.len() != n {
                eprintln!("error: expected {n} block files, got {}", block_files.len());
                return Ok(ExitCode::from(2));
            }
            let params = CodingParams::new(k, m)?;
            let codec = Codec::new(codec, params)?;
            let erasures = ErasurePattern::new(erased)?;

            let mut blocks: Vec<Option<Vec<u8>>> = Vec::with_capacity(n);
            for (i, path) in block_files.iter().enumerate() {
                if erasures.contains(i) {
                    blocks.push(None);
                } else {
                    blocks.push(Some(fs::read(path)?));
                }
            }
            let len = blocks
                .iter()
                .flatten()
                .map(Vec::len)
                .next()
                .unwrap_or(0);
            let filled: Vec<Vec<u8>> = blocks
                .into_iter()
                .map(|b| b.unwrap_or_else(|| vec![0u8; len]))
                .collect();
            let mut it = filled.into_iter();
            let data: Vec<Vec<u8>> = it.by_ref().take(k).collect();
            let parity: Vec<Vec<u8>> = it.collect();
            let stripe = Stripe::new(data, parity)?;

            let recovered = codec.decode(&stripe, &erasures)?;
            fs::create_dir_all(&out_dir)?;
            for (&idx, block) in erasures.indices().iter().zip(&recovered) {
                let path = out_dir.join(format!("block_{idx}.bin"));
                fs::write(&path, block)?;
                println!("{}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
