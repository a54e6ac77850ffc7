//! Monte Carlo campaign driver: paired end-to-end trials (encode, map,
//! channel, detect, quantize, demap, decode) over an Eb/N0 grid, with
//! deterministic batched scheduling and order-independent aggregation so a
//! campaign's CSV is byte-identical for any worker count.

use crate::config::{DecoderKind, PchMode, SimConfig};
use crate::rng::unit_rng;
use grandmimo::bits::BitWord;
use grandmimo::channel::{pch_scale, pch_transmit, ChannelError, ChannelRealization, ZfDetector};
use grandmimo::code::SystematicCode;
use grandmimo::error_model::{rank_structures, StructureRanking};
use grandmimo::grand::{
    bit_level_grand, sorted_bit_level_grand, sorted_symbol_level_grand, symbol_level_grand,
};
use grandmimo::modulation::Constellation;
use grandmimo::{Cplx, Real};
use rand::Rng;
use rayon::prelude::*;

/// Trials dispatched between stop-condition checks. Fixed: it is part of the
/// deterministic schedule, not a tuning knob.
const BATCH: u64 = 512;

/// 95% Wilson score interval for a binomial proportion.
pub fn wilson95(errors: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959963984540054_f64;
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let spread = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    (
        ((center - spread) / denom).max(0.0),
        ((center + spread) / denom).min(1.0),
    )
}

/// Per-decoder tallies at one grid point.
#[derive(Debug, Clone)]
pub struct DecoderPointStats {
    pub decoder: DecoderKind,
    pub block_errors: u64,
    pub abandons: u64,
    pub query_sum: u128,
    pub query_sq_sum: u128,
}

impl DecoderPointStats {
    fn new(decoder: DecoderKind) -> Self {
        DecoderPointStats {
            decoder,
            block_errors: 0,
            abandons: 0,
            query_sum: 0,
            query_sq_sum: 0,
        }
    }

    pub fn bler(&self, trials: u64) -> f64 {
        self.block_errors as f64 / trials as f64
    }

    pub fn avg_queries(&self, trials: u64) -> f64 {
        self.query_sum as f64 / trials as f64
    }

    /// Population standard deviation of the per-trial query count.
    pub fn query_std(&self, trials: u64) -> f64 {
        let n = trials as f64;
        let mean = self.query_sum as f64 / n;
        let var = self.query_sq_sum as f64 / n - mean * mean;
        var.max(0.0).sqrt()
    }

    pub fn abandon_rate(&self, trials: u64) -> f64 {
        self.abandons as f64 / trials as f64
    }
}

/// Paired per-trial agreement between the two bit-level search orders.
#[derive(Debug, Clone, Default)]
pub struct BitPairStats {
    /// Trials where one order decoded and the other abandoned. The two
    /// orders test the same pattern set, so this stays zero.
    pub success_mismatches: u64,
    /// Trials where the block-error indicators differed (possible when
    /// several minimal-weight explanations exist and the orders pick
    /// different codewords).
    pub block_error_mismatches: u64,
}

#[derive(Debug, Clone)]
pub struct PointResult {
    pub eb_n0_db: f64,
    pub snr_linear: f64,
    pub trials: u64,
    /// Channel redraws forced by a numerically singular Gram matrix.
    pub resampled_channels: u64,
    pub decoders: Vec<DecoderPointStats>,
    pub bit_pair: Option<BitPairStats>,
}

impl PointResult {
    pub fn stats(&self, decoder: DecoderKind) -> Option<&DecoderPointStats> {
        self.decoders.iter().find(|s| s.decoder == decoder)
    }
}

#[derive(Debug, Clone)]
pub struct CampaignResult {
    pub points: Vec<PointResult>,
}

impl CampaignResult {
    /// CSV with one row per (decoder, grid point).
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "decoder,eb_n0_db,trials,block_errors,bler,bler_ci_lo,bler_ci_hi,avg_queries,query_std,abandon_rate\n",
        );
        for point in &self.points {
            for stats in &point.decoders {
                let (lo, hi) = wilson95(stats.block_errors, point.trials);
                out.push_str(&format!(
                    "{},{},{},{},{:.6e},{:.6e},{:.6e},{:.6},{:.6},{:.6e}\n",
                    stats.decoder,
                    point.eb_n0_db,
                    point.trials,
                    stats.block_errors,
                    stats.bler(point.trials),
                    lo,
                    hi,
                    stats.avg_queries(point.trials),
                    stats.query_std(point.trials),
                    stats.abandon_rate(point.trials),
                ));
            }
        }
        out
    }
}

struct TrialOutcome {
    per_decoder: Vec<DecoderTrial>,
    resamples: u64,
}

#[derive(Clone, Copy)]
struct DecoderTrial {
    block_error: bool,
    abandoned: bool,
    decoded: bool,
    queries: u64,
}

/// Immutable per-campaign state shared by all workers.
struct CampaignEnv {
    cfg: SimConfig,
    code: SystematicCode,
    constellation: Constellation<Real>,
}

struct PointEnv<'a> {
    env: &'a CampaignEnv,
    point_index: usize,
    snr: f64,
    ranking: StructureRanking<Real>,
}

/// One full pipeline execution. All enabled decoders see the same
/// realization and noise; the trial stream is `(master_seed, point, trial)`.
fn run_trial(pt: &PointEnv<'_>, trial: u64) -> TrialOutcome {
    let env = pt.env;
    let cfg = &env.cfg;
    let (k, n_t, n_r) = (cfg.k, cfg.n_t(), cfg.n_r);
    let mut rng = unit_rng(cfg.master_seed, pt.point_index, trial);

    let message = BitWord::from_fn(k, |_| rng.random::<bool>());
    let codeword = env.code.encode(&message).expect("config-validated length");
    let tx_labels = env
        .constellation
        .labels_from_bits(&codeword)
        .expect("config-validated length");
    let x: Vec<Cplx> = tx_labels
        .iter()
        .map(|&l| env.constellation.point(l))
        .collect();

    let mut resamples = 0u64;
    let (z, scale, gains): (Vec<Cplx>, f64, Vec<f64>) = match cfg.pch {
        PchMode::Off => {
            // Redraw on a numerically singular Gram; the event is counted
            // and the trial stream simply continues.
            let (ch, det) = loop {
                let ch = ChannelRealization::<Real>::sample(n_t, n_r, &mut rng)
                    .expect("config-validated dimensions");
                match ZfDetector::from_channel(&ch) {
                    Ok(det) => break (ch, det),
                    Err(ChannelError::SingularGram) => resamples += 1,
                    Err(e) => unreachable!("detector build: {e}"),
                }
            };
            let y = if cfg.noise {
                ch.transmit(&x, pt.snr, &mut rng).expect("length checked")
            } else {
                ch.transmit_noiseless(&x, pt.snr).expect("length checked")
            };
            let z = det.detect(&y).expect("length checked");
            let gains = det.gains().to_vec();
            (z, (pt.snr / n_t as f64).sqrt(), gains)
        }
        PchMode::On { array_gain } => {
            let scale = pch_scale(n_t, pt.snr, array_gain);
            let z = if cfg.noise {
                pch_transmit(n_t, n_r, &x, pt.snr, array_gain, &mut rng)
                    .expect("config-validated dimensions")
            } else {
                x.iter().map(|&s| s * scale).collect()
            };
            // Hardened streams share one reliability; sorting degenerates to
            // the identity.
            (z, scale, vec![1.0; n_t])
        }
    };

    let rx_labels: Vec<u16> = z
        .iter()
        .map(|&zi| env.constellation.quantize(zi, scale))
        .collect();
    let y_b = env.constellation.bits_from_labels(&rx_labels);

    let per_decoder = cfg
        .decoders
        .iter()
        .map(|&decoder| {
            let outcome = match decoder {
                DecoderKind::Uncoded => {
                    return DecoderTrial {
                        block_error: y_b.prefix(k) != message,
                        abandoned: false,
                        decoded: false,
                        queries: 0,
                    }
                }
                DecoderKind::Bit => bit_level_grand(&y_b, &env.code, cfg.w_th, None),
                DecoderKind::BitSorted => {
                    sorted_bit_level_grand(&y_b, &env.code, cfg.w_th, &gains, &env.constellation)
                }
                DecoderKind::Symbol => {
                    symbol_level_grand(&rx_labels, &env.code, &env.constellation, &pt.ranking, None)
                }
                DecoderKind::SymbolSorted => sorted_symbol_level_grand(
                    &rx_labels,
                    &env.code,
                    &env.constellation,
                    &pt.ranking,
                    &gains,
                ),
            }
            .expect("inputs validated");
            let decoded = outcome.is_decoded();
            // Abandonment counts as a block error.
            let block_error = match outcome.info_bits(k) {
                Some(info) => info != message,
                None => true,
            };
            DecoderTrial {
                block_error,
                abandoned: !decoded,
                decoded,
                queries: outcome.queries,
            }
        })
        .collect();

    TrialOutcome {
        per_decoder,
        resamples,
    }
}

/// Runs the whole grid. Each point stops once every enabled decoder has
/// reached `target_block_errors`, or at `max_trials`.
pub fn run_campaign(cfg: &SimConfig) -> CampaignResult {
    cfg.validate().expect("invalid campaign config");
    let code = SystematicCode::generate(cfg.k, cfg.n, cfg.effective_code_seed())
        .expect("config-validated dimensions");
    let constellation =
        Constellation::<Real>::gray_qam(cfg.modulation).expect("config-validated size");
    let env = CampaignEnv {
        cfg: cfg.clone(),
        code,
        constellation,
    };

    let bit_idx = cfg.decoders.iter().position(|&d| d == DecoderKind::Bit);
    let bit_sorted_idx = cfg
        .decoders
        .iter()
        .position(|&d| d == DecoderKind::BitSorted);
    let track_pair = bit_idx.is_some() && bit_sorted_idx.is_some();

    let l = cfg.n_t() as u32;
    let points = cfg
        .eb_n0_db
        .iter()
        .enumerate()
        .map(|(point_index, &eb_n0_db)| {
            let snr = cfg.snr_linear(eb_n0_db);
            let ranking = rank_structures::<Real>(l, cfg.modulation, snr, cfg.w_th);
            let pt = PointEnv {
                env: &env,
                point_index,
                snr,
                ranking,
            };

            let mut decoders: Vec<DecoderPointStats> = cfg
                .decoders
                .iter()
                .map(|&d| DecoderPointStats::new(d))
                .collect();
            let mut bit_pair = track_pair.then(BitPairStats::default);
            let mut trials = 0u64;
            let mut resampled_channels = 0u64;

            while trials < cfg.max_trials {
                let all_saturated = decoders
                    .iter()
                    .all(|s| s.block_errors >= cfg.target_block_errors);
                if trials > 0 && all_saturated {
                    break;
                }
                let batch = BATCH.min(cfg.max_trials - trials);
                let outcomes: Vec<TrialOutcome> = (trials..trials + batch)
                    .into_par_iter()
                    .map(|t| run_trial(&pt, t))
                    .collect();
                for outcome in &outcomes {
                    resampled_channels += outcome.resamples;
                    for (stats, trial) in decoders.iter_mut().zip(&outcome.per_decoder) {
                        stats.block_errors += trial.block_error as u64;
                        stats.abandons += trial.abandoned as u64;
                        stats.query_sum += trial.queries as u128;
                        stats.query_sq_sum += (trial.queries as u128) * (trial.queries as u128);
                    }
                    if let Some(pair) = bit_pair.as_mut() {
                        let a = &outcome.per_decoder[bit_idx.unwrap()];
                        let b = &outcome.per_decoder[bit_sorted_idx.unwrap()];
                        pair.success_mismatches += (a.decoded != b.decoded) as u64;
                        pair.block_error_mismatches += (a.block_error != b.block_error) as u64;
                    }
                }
                trials += batch;
            }

            PointResult {
                eb_n0_db,
                snr_linear: snr,
                trials,
                resampled_channels,
                decoders,
                bit_pair,
            }
        })
        .collect();

    CampaignResult { points }
}
