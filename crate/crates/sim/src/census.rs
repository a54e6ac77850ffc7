//! Structure census: transmits uniform random blocks over the hardened
//! channel (plain-SNR convention), classifies each detected symbol's error
//! string as zero / weight-1 / weight-2 / other, tallies the observed
//! `[L1 L2]` structures, and compares their frequencies with the analytical
//! structure probabilities.

use crate::config::SimConfig;
use crate::rng::unit_rng;
use grandmimo::bits::BitWord;
use grandmimo::channel::{pch_scale, pch_transmit};
use grandmimo::error_model::{structure_probability, symbol_error_probs, ErrorStructure};
use grandmimo::modulation::Constellation;
use grandmimo::{Cplx, Real};
use rand::Rng;
use rayon::prelude::*;
use std::collections::HashMap;

const BATCH: u64 = 1024;

/// Predicted probabilities are enumerated for structures with up to this
/// many erroneous strings; beyond it the analytical mass at the tested
/// operating points is orders of magnitude below the top candidates.
/// Observed structures outside the cap still get their prediction computed
/// individually.
const PREDICTION_ERROR_CAP: u32 = 20;

#[derive(Debug, Clone)]
pub struct CensusRow {
    pub structure: ErrorStructure,
    pub predicted: f64,
    pub count: u64,
    pub measured: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone)]
pub struct CensusPoint {
    pub eb_n0_db: f64,
    pub snr_linear: f64,
    pub blocks: u64,
    /// Blocks containing at least one error string outside the detected
    /// label's two neighborhoods; they belong to no `[L1 L2]` structure.
    pub other_blocks: u64,
    /// Rows sorted by descending predicted probability.
    pub rows: Vec<CensusRow>,
}

impl CensusPoint {
    pub fn other_rate(&self) -> f64 {
        self.other_blocks as f64 / self.blocks as f64
    }

    /// Rows by descending measured frequency.
    pub fn measured_order(&self) -> Vec<&CensusRow> {
        let mut rows: Vec<&CensusRow> = self.rows.iter().collect();
        rows.sort_by(|a, b| {
            b.count
                .cmp(&a.count)
                .then(a.structure.weight().cmp(&b.structure.weight()))
                .then(a.structure.cmp(&b.structure))
        });
        rows
    }
}

#[derive(Debug, Clone)]
pub struct CensusResult {
    pub points: Vec<CensusPoint>,
}

impl CensusResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eb_n0_db,l1,l2,predicted_p,measured_p,stderr\n");
        for point in &self.points {
            for row in &point.rows {
                out.push_str(&format!(
                    "{},{},{},{:.6e},{:.6e},{:.6e}\n",
                    point.eb_n0_db,
                    row.structure.l1,
                    row.structure.l2,
                    row.predicted,
                    row.measured,
                    row.stderr,
                ));
            }
        }
        out
    }
}

/// Per-block classification: structure counts, or `None` when some symbol's
/// error string lies outside both neighborhoods.
fn classify_block(
    constellation: &Constellation<Real>,
    tx: &[u16],
    rx: &[u16],
) -> Option<ErrorStructure> {
    let mut l1 = 0u32;
    let mut l2 = 0u32;
    for (&t, &r) in tx.iter().zip(rx) {
        let e = t ^ r;
        if e == 0 {
            continue;
        }
        let nb = constellation
            .error_strings(r)
            .expect("quantizer emits valid labels");
        if nb.e1.binary_search(&e).is_ok() {
            l1 += 1;
        } else if nb.e2.binary_search(&e).is_ok() {
            l2 += 1;
        } else {
            return None;
        }
    }
    Some(ErrorStructure::new(l1, l2))
}

/// Runs `blocks` uniform-input transmissions per grid point and compares
/// observed structure frequencies with the analytical prediction. `top`
/// bounds the number of predicted candidates carried into the report.
pub fn run_structure_census(cfg: &SimConfig, blocks: u64, top: usize) -> CensusResult {
    cfg.validate().expect("invalid census config");
    let constellation =
        Constellation::<Real>::gray_qam(cfg.modulation).expect("config-validated size");
    let l = cfg.n_t();
    let (n_t, n_r) = (l, cfg.n_r.max(l));

    let points = cfg
        .eb_n0_db
        .iter()
        .enumerate()
        .map(|(point_index, &eb_n0_db)| {
            let snr = cfg.snr_linear(eb_n0_db);
            let scale = pch_scale(n_t, snr, false);

            let mut tallies: HashMap<ErrorStructure, u64> = HashMap::new();
            let mut other_blocks = 0u64;
            let mut done = 0u64;
            while done < blocks {
                let batch = BATCH.min(blocks - done);
                let outcomes: Vec<Option<ErrorStructure>> = (done..done + batch)
                    .into_par_iter()
                    .map(|block| {
                        let mut rng = unit_rng(cfg.master_seed, point_index, block);
                        let bits = BitWord::from_fn(cfg.n, |_| rng.random::<bool>());
                        let tx = constellation
                            .labels_from_bits(&bits)
                            .expect("config-validated length");
                        let x: Vec<Cplx> = tx.iter().map(|&lbl| constellation.point(lbl)).collect();
                        let y = if cfg.noise {
                            pch_transmit(n_t, n_r, &x, snr, false, &mut rng)
                                .expect("config-validated dimensions")
                        } else {
                            x.iter().map(|&s| s * scale).collect()
                        };
                        let rx: Vec<u16> = y
                            .iter()
                            .map(|&z| constellation.quantize(z, scale))
                            .collect();
                        classify_block(&constellation, &tx, &rx)
                    })
                    .collect();
                for outcome in outcomes {
                    match outcome {
                        Some(st) => *tallies.entry(st).or_insert(0) += 1,
                        None => other_blocks += 1,
                    }
                }
                done += batch;
            }

            // Predicted probabilities: every structure within the error cap,
            // plus whatever was actually observed.
            let probs = symbol_error_probs::<Real>(cfg.modulation, snr);
            let mut predicted: HashMap<ErrorStructure, f64> = HashMap::new();
            let cap = PREDICTION_ERROR_CAP.min(l as u32);
            for errors in 0..=cap {
                for l1 in 0..=errors {
                    let st = ErrorStructure::new(l1, errors - l1);
                    let p = structure_probability(l as u32, st, &probs, cfg.modulation)
                        .expect("within block length");
                    predicted.insert(st, p);
                }
            }
            for st in tallies.keys() {
                predicted.entry(*st).or_insert_with(|| {
                    structure_probability(l as u32, *st, &probs, cfg.modulation)
                        .expect("within block length")
                });
            }

            // Keep the top predicted candidates and everything observed.
            let mut candidates: Vec<(ErrorStructure, f64)> =
                predicted.iter().map(|(&s, &p)| (s, p)).collect();
            candidates.sort_by(|(sa, pa), (sb, pb)| {
                pb.partial_cmp(pa)
                    .expect("finite probabilities")
                    .then(sa.cmp(sb))
            });
            let mut keep: Vec<ErrorStructure> =
                candidates.iter().take(top).map(|&(s, _)| s).collect();
            for st in tallies.keys() {
                if !keep.contains(st) {
                    keep.push(*st);
                }
            }

            let mut rows: Vec<CensusRow> = keep
                .into_iter()
                .map(|structure| {
                    let count = tallies.get(&structure).copied().unwrap_or(0);
                    let measured = count as f64 / blocks as f64;
                    CensusRow {
                        structure,
                        predicted: predicted[&structure],
                        count,
                        measured,
                        stderr: (measured * (1.0 - measured) / blocks as f64).sqrt(),
                    }
                })
                .collect();
            rows.sort_by(|a, b| {
                b.predicted
                    .partial_cmp(&a.predicted)
                    .expect("finite probabilities")
                    .then(a.structure.cmp(&b.structure))
            });

            CensusPoint {
                eb_n0_db,
                snr_linear: snr,
                blocks,
                other_blocks,
                rows,
            }
        })
        .collect();

    CensusResult { points }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{DecoderKind, PchMode};

    fn census_config() -> SimConfig {
        SimConfig {
            k: 103,
            n: 128,
            modulation: 16,
            n_r: 32,
            w_th: 3,
            eb_n0_db: vec![12.0],
            decoders: vec![DecoderKind::Symbol],
            target_block_errors: 1,
            max_trials: 1,
            master_seed: 5,
            code_seed: None,
            pch: PchMode::On { array_gain: false },
            noise: true,
        }
    }

    #[test]
    fn zero_noise_gives_all_zero_structure() {
        let mut cfg = census_config();
        cfg.noise = false;
        let result = run_structure_census(&cfg, 200, 5);
        let point = &result.points[0];
        let zero = point
            .rows
            .iter()
            .find(|r| r.structure == ErrorStructure::new(0, 0))
            .unwrap();
        assert_eq!(zero.count, 200);
        assert_eq!(point.other_blocks, 0);
    }

    #[test]
    fn other_class_vanishes_at_high_ebn0() {
        let mut cfg = census_config();
        cfg.eb_n0_db = vec![6.0, 14.0];
        let result = run_structure_census(&cfg, 3000, 8);
        let low = result.points[0].other_rate();
        let high = result.points[1].other_rate();
        assert!(high <= low);
        assert!(high < 0.01, "other rate at 14 dB: {high}");
    }

    #[test]
    fn census_is_deterministic() {
        let cfg = census_config();
        let a = run_structure_census(&cfg, 500, 6).to_csv();
        let b = run_structure_census(&cfg, 500, 6).to_csv();
        assert_eq!(a, b);
    }
}
