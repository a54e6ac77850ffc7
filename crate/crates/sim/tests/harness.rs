//! End-to-end harness behavior beyond the acceptance criteria: the
//! complexity halving at meaningful redundancy, the clean-channel limits,
//! and the uncoded baseline.

use grandmimo_sim::campaign::run_campaign;
use grandmimo_sim::config::{DecoderKind, PchMode, SimConfig};
use grandmimo_sim::wilson95;

fn base_config() -> SimConfig {
    SimConfig {
        k: 26,
        n: 32,
        modulation: 16,
        n_r: 25,
        w_th: 3,
        eb_n0_db: vec![6.0],
        decoders: vec![
            DecoderKind::Bit,
            DecoderKind::BitSorted,
            DecoderKind::Symbol,
            DecoderKind::SymbolSorted,
            DecoderKind::Uncoded,
        ],
        target_block_errors: 100,
        max_trials: 8192,
        master_seed: 1,
        code_seed: Some(3110),
        pch: PchMode::Off,
        noise: true,
    }
}

#[test]
fn complexity_halving_emerges_with_redundancy() {
    // With 16 parity bits the candidate pools (5489 bit patterns vs ~2200
    // neighborhood patterns at w_th = 3) drive the cost whenever the search
    // exhausts, and the symbol-level restriction pays off outright.
    let mut cfg = base_config();
    cfg.k = 16;
    cfg.eb_n0_db = vec![-4.0];
    cfg.max_trials = 1024;
    let result = run_campaign(&cfg);
    let point = &result.points[0];
    let bit = point.stats(DecoderKind::Bit).unwrap();
    let sorted_symbol = point.stats(DecoderKind::SymbolSorted).unwrap();
    let ratio = sorted_symbol.avg_queries(point.trials) / bit.avg_queries(point.trials);
    assert!(
        ratio <= 0.5,
        "expected at least a halving of query counts, got ratio {ratio:.3}"
    );
    assert!(
        bit.abandon_rate(point.trials) > 0.5,
        "deep-noise point should abandon often"
    );
    // Same correction power: the two decoders' BLER intervals overlap.
    let (b_lo, b_hi) = wilson95(bit.block_errors, point.trials);
    let (s_lo, s_hi) = wilson95(sorted_symbol.block_errors, point.trials);
    assert!(b_lo <= s_hi && s_lo <= b_hi);
}

#[test]
fn clean_channel_queries_tend_to_one() {
    let mut cfg = base_config();
    cfg.eb_n0_db = vec![14.0];
    cfg.max_trials = 4096;
    let result = run_campaign(&cfg);
    let point = &result.points[0];
    for &decoder in &DecoderKind::ALL_GRAND {
        let stats = point.stats(decoder).unwrap();
        assert_eq!(stats.block_errors, 0, "{decoder} erred on a clean channel");
        let avg = stats.avg_queries(point.trials);
        assert!(avg < 1.01, "{decoder} averaged {avg} queries");
    }
}

#[test]
fn uncoded_baseline_loses_to_every_decoder() {
    let mut cfg = base_config();
    cfg.eb_n0_db = vec![6.0, 8.0];
    let result = run_campaign(&cfg);
    for point in &result.points {
        let uncoded = point
            .stats(DecoderKind::Uncoded)
            .unwrap()
            .bler(point.trials);
        for &decoder in &DecoderKind::ALL_GRAND {
            let coded = point.stats(decoder).unwrap().bler(point.trials);
            assert!(
                coded < uncoded,
                "{decoder} at {} dB: {coded} vs uncoded {uncoded}",
                point.eb_n0_db
            );
        }
    }
}

#[test]
fn abandonment_counts_as_block_error() {
    let mut cfg = base_config();
    cfg.k = 16;
    cfg.eb_n0_db = vec![-2.0];
    cfg.max_trials = 512;
    let result = run_campaign(&cfg);
    let point = &result.points[0];
    let bit = point.stats(DecoderKind::Bit).unwrap();
    assert!(bit.abandons > 0);
    assert!(bit.block_errors >= bit.abandons);
}

#[test]
fn sixty_four_qam_pipeline_end_to_end() {
    // 6 bits per symbol: RLC(18,24) over 4 strings of 64-QAM.
    let mut cfg = base_config();
    cfg.k = 18;
    cfg.n = 24;
    cfg.modulation = 64;
    cfg.n_r = 12;
    cfg.eb_n0_db = vec![12.0, 16.0];
    cfg.max_trials = 2048;
    assert_eq!(cfg.n_t(), 4);
    let result = run_campaign(&cfg);
    for point in &result.points {
        let uncoded = point
            .stats(DecoderKind::Uncoded)
            .unwrap()
            .bler(point.trials);
        for &decoder in &DecoderKind::ALL_GRAND {
            let stats = point.stats(decoder).unwrap();
            assert!(stats.bler(point.trials) <= uncoded);
            assert!(stats.avg_queries(point.trials) >= 1.0);
        }
        let pair = point.bit_pair.as_ref().unwrap();
        assert_eq!(pair.success_mismatches, 0);
    }
    // BLER falls with Eb/N0 for the coded decoders.
    let lo = result.points[0]
        .stats(DecoderKind::Symbol)
        .unwrap()
        .block_errors;
    let hi = result.points[1]
        .stats(DecoderKind::Symbol)
        .unwrap()
        .block_errors;
    assert!(hi <= lo);
}
