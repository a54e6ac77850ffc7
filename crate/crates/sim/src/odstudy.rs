//! Orthogonality-defect study: samples random channels over an antenna grid
//! and reports mean and standard deviation of the defect per configuration.

use crate::rng::unit_rng;
use grandmimo::channel::ChannelRealization;
use grandmimo::lattice::{orthogonality_defect, real_lattice_basis};
use grandmimo::Real;
use rayon::prelude::*;

#[derive(Debug, Clone)]
pub struct OdPoint {
    pub n_t: usize,
    pub n_r: usize,
    pub samples: u64,
    pub od_mean: f64,
    pub od_std: f64,
    pub od_min: f64,
}

#[derive(Debug, Clone)]
pub struct OdStudyResult {
    pub points: Vec<OdPoint>,
}

impl OdStudyResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n_t,n_r,samples,od_mean,od_std\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{:.6},{:.6}\n",
                p.n_t, p.n_r, p.samples, p.od_mean, p.od_std
            ));
        }
        out
    }

    pub fn point(&self, n_t: usize, n_r: usize) -> Option<&OdPoint> {
        self.points.iter().find(|p| p.n_t == n_t && p.n_r == n_r)
    }
}

/// Mean and std of the defect per `(N_T, N_R)` pair. Every `n_r` must cover
/// the largest `n_t` so all combinations are tall.
pub fn run_od_study(
    n_t_list: &[usize],
    n_r_list: &[usize],
    samples: u64,
    master_seed: u64,
) -> OdStudyResult {
    let max_n_t = n_t_list.iter().copied().max().expect("non-empty N_T list");
    assert!(
        n_r_list.iter().all(|&n_r| n_r >= max_n_t),
        "every N_R must be at least max(N_T)"
    );
    let mut points = Vec::new();
    let mut combo = 0usize;
    for &n_t in n_t_list {
        for &n_r in n_r_list {
            // Per-sample streams, summed in index order: byte-identical
            // output for any worker count.
            let values: Vec<f64> = (0..samples)
                .into_par_iter()
                .map(|s| {
                    let mut rng = unit_rng(master_seed, combo, s);
                    let ch = ChannelRealization::<Real>::sample(n_t, n_r, &mut rng)
                        .expect("tall dimensions");
                    orthogonality_defect(&real_lattice_basis(&ch)).expect("full rank a.s.")
                })
                .collect();
            let n = samples as f64;
            let mean = values.iter().sum::<f64>() / n;
            let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
            let od_min = values.iter().copied().fold(f64::INFINITY, f64::min);
            points.push(OdPoint {
                n_t,
                n_r,
                samples,
                od_mean: mean,
                od_std: var.sqrt(),
                od_min,
            });
            combo += 1;
        }
    }
    OdStudyResult { points }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defect_trends_with_antenna_counts() {
        let result = run_od_study(&[2], &[4, 20, 200], 400, 11);
        let near = result.point(2, 4).unwrap();
        let mid = result.point(2, 20).unwrap();
        let far = result.point(2, 200).unwrap();
        assert!(near.od_mean > mid.od_mean && mid.od_mean > far.od_mean);
        assert!(near.od_min >= 1.0 - 1e-9);
        // Larger N_T needs a larger N_R for the same defect.
        let wide = run_od_study(&[2, 4], &[20], 400, 11);
        assert!(wide.point(4, 20).unwrap().od_mean > wide.point(2, 20).unwrap().od_mean);
    }

    #[test]
    fn defect_mean_nonincreasing_from_square_to_tall() {
        // Grid N_T..8N_T, shared seeds, 2-standard-error slack.
        for n_t in [2usize, 4] {
            let grid: Vec<usize> = [1, 2, 4, 8].iter().map(|m| m * n_t).collect();
            let study = run_od_study(&[n_t], &grid, 500, 17);
            for pair in study.points.windows(2) {
                let se = ((pair[0].od_std.powi(2) + pair[1].od_std.powi(2)) / 500.0).sqrt();
                assert!(
                    pair[1].od_mean <= pair[0].od_mean + 2.0 * se,
                    "N_T={n_t}: od mean rose from {} to {}",
                    pair[0].od_mean,
                    pair[1].od_mean
                );
            }
        }
    }

    #[test]
    fn study_is_deterministic() {
        let a = run_od_study(&[2, 3], &[6, 12], 100, 3).to_csv();
        let b = run_od_study(&[2, 3], &[6, 12], 100, 3).to_csv();
        assert_eq!(a, b);
    }
}
