//! The float-generic surface instantiated at single precision: everything
//! compiles and tracks the f64 path to within f32 resolution.

use grandmimo::channel::{ChannelRealization, ZfDetector};
use grandmimo::error_model::{
    rank_structures, structure_probability, symbol_error_probs, ErrorStructure,
};
use grandmimo::lattice::{orthogonality_defect, real_lattice_basis};
use grandmimo::modulation::Constellation;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn constellation_energy_in_single_precision() {
    let c = Constellation::<f32>::gray_qam(64).unwrap();
    let total: f32 = (0..64u16).map(|l| c.point(l).norm_sqr()).sum();
    assert!((total / 64.0 - 1.0).abs() < 1e-5);
}

#[test]
fn zero_forcing_in_single_precision() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let ch = ChannelRealization::<f32>::sample(3, 9, &mut rng).unwrap();
    let det = ZfDetector::from_channel(&ch).unwrap();
    let prod = det.pseudo_inverse().matmul(ch.matrix());
    for i in 0..3 {
        for j in 0..3 {
            let expect = if i == j { 1.0 } else { 0.0 };
            assert!((prod.get(i, j).re - expect).abs() < 1e-4);
            assert!(prod.get(i, j).im.abs() < 1e-4);
        }
    }
    let od = orthogonality_defect(&real_lattice_basis(&ch)).unwrap();
    assert!(od >= 1.0 - 1e-4);
}

#[test]
fn structure_probabilities_track_double_precision() {
    let snr = 31.6;
    let narrow = symbol_error_probs::<f32>(16, snr as f32);
    let wide = symbol_error_probs::<f64>(16, snr);
    let p32 = structure_probability(8, ErrorStructure::new(1, 0), &narrow, 16).unwrap() as f64;
    let p64 = structure_probability(8, ErrorStructure::new(1, 0), &wide, 16).unwrap();
    assert!((p32 - p64).abs() < 1e-5 * p64.max(1e-6));
    // Same ranking order at both widths.
    let r32 = rank_structures::<f32>(8, 16, snr as f32, 3);
    let r64 = rank_structures::<f64>(8, 16, snr, 3);
    let order32: Vec<_> = r32.structures().collect();
    let order64: Vec<_> = r64.structures().collect();
    assert_eq!(order32, order64);
}
