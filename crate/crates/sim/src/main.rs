//! Command-line front end: BLER/complexity sweeps, structure censuses,
//! orthogonality-defect studies, ranking tables, and constellation dumps.
//! All randomness is seed-derived; `--threads` changes speed, never results.

use clap::{Parser, Subcommand};
use grandmimo_sim::config::{DecoderKind, SimConfig};
use grandmimo_sim::{
    build_tables, dump_constellation, run_campaign, run_od_study, run_structure_census,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "grandmimo-sim",
    version,
    about = "Coded massive-MIMO link simulator with noise-guessing decoders"
)]
struct Cli {
    /// Worker threads for Monte Carlo batches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// BLER and decoding-complexity sweep over the configured Eb/N0 grid.
    Simulate {
        /// Key-value config file.
        #[arg(long)]
        config: PathBuf,
        /// Override the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated decoder subset (bit, bit-sorted, symbol,
        /// symbol-sorted, uncoded); overrides the config.
        #[arg(long)]
        decoders: Option<String>,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measured vs predicted error-structure frequencies over the hardened
    /// channel.
    Census {
        #[arg(long)]
        config: PathBuf,
        /// Blocks per grid point.
        #[arg(long, default_value_t = 100_000)]
        blocks: u64,
        /// Predicted candidates to keep per point.
        #[arg(long, default_value_t = 12)]
        top: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mean orthogonality defect over an antenna grid.
    OdStudy {
        /// Transmit antenna counts, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        n_t: Vec<usize>,
        /// Receive antenna counts, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        n_r: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-SNR structure rankings and their memory footprint.
    Tables {
        /// Strings per block (transmit antennas).
        #[arg(long)]
        l: u32,
        /// Constellation size.
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 4)]
        w_th: u32,
        #[arg(long, default_value_t = 9.0)]
        snr_db_min: f64,
        #[arg(long, default_value_t = 27.0)]
        snr_db_max: f64,
        #[arg(long, default_value_t = 1.0)]
        snr_db_step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the Gray-labeled constellation grid, top row first.
    DumpConstellation {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<&Path>, content: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn load_config(path: &Path) -> Result<SimConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    SimConfig::from_str_config(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_decoder_list(list: &str) -> Result<Vec<DecoderKind>, String> {
    list.split(',')
        .map(|s| s.parse::<DecoderKind>().map_err(|e| e.to_string()))
        .collect()
}

fn run() -> Result<(), String> {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| format!("thread pool: {e}"))?;
    }

    match cli.command {
        Command::Simulate {
            config,
            seed,
            decoders,
            out,
        } => {
            let mut cfg = load_config(&config)?;
            if let Some(seed) = seed {
                cfg.master_seed = seed;
            }
            if let Some(list) = decoders {
                cfg.decoders = parse_decoder_list(&list)?;
            }
            cfg.validate().map_err(|e| e.to_string())?;
            let result = run_campaign(&cfg);
            for point in &result.points {
                eprintln!(
                    "eb_n0 = {} dB: {} trials, {} channel resamples",
                    point.eb_n0_db, point.trials, point.resampled_channels
                );
            }
            emit(out.as_deref(), &result.to_csv()).map_err(|e| e.to_string())
        }
        Command::Census {
            config,
            blocks,
            top,
            seed,
            out,
        } => {
            let mut cfg = load_config(&config)?;
            if let Some(seed) = seed {
                cfg.master_seed = seed;
            }
            let result = run_structure_census(&cfg, blocks, top);
            for point in &result.points {
                eprintln!(
                    "eb_n0 = {} dB: {} blocks, other-class rate {:.3e}",
                    point.eb_n0_db,
                    point.blocks,
                    point.other_rate()
                );
            }
            emit(out.as_deref(), &result.to_csv()).map_err(|e| e.to_string())
        }
        Command::OdStudy {
            n_t,
            n_r,
            samples,
            seed,
            out,
        } => {
            let max_n_t = n_t.iter().copied().max().ok_or("empty N_T list")?;
            if n_r.iter().any(|&r| r < max_n_t) {
                return Err("every N_R must be at least max(N_T)".into());
            }
            let result = run_od_study(&n_t, &n_r, samples, seed);
            emit(out.as_deref(), &result.to_csv()).map_err(|e| e.to_string())
        }
        Command::Tables {
            l,
            m,
            w_th,
            snr_db_min,
            snr_db_max,
            snr_db_step,
            out,
        } => {
            if m < 4 || !m.is_power_of_two() || m.trailing_zeros() % 2 != 0 {
                return Err(format!("modulation {m} is not a square power of two"));
            }
            let tables = build_tables(l, m, w_th, snr_db_min, snr_db_max, snr_db_step);
            eprintln!("{}", tables.summary());
            emit(out.as_deref(), &tables.to_csv()).map_err(|e| e.to_string())
        }
        Command::DumpConstellation { m, out } => {
            let grid = dump_constellation(m).map_err(|e| e.to_string())?;
            emit(out.as_deref(), &grid).map_err(|e| e.to_string())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}
