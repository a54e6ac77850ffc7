//! Ranking-table emission: per-SNR structure rankings over a dB grid,
//! deduplicated past the point where the ordering stabilizes, with the
//! memory accounting for the retained tables.

use grandmimo::error_model::{
    lookup_memory_bits, rank_structures, structure_index_bits, StructureRanking,
};
use grandmimo::Real;

#[derive(Debug, Clone)]
pub struct TablesResult {
    pub l: u32,
    pub m: u32,
    pub w_th: u32,
    /// One ranking per grid point, full grid.
    pub rankings: Vec<StructureRanking<Real>>,
    /// Grid index of the first table from which the ordering never changes;
    /// tables after it are redundant.
    pub stabilized_at: usize,
}

impl TablesResult {
    /// Structures stored per table.
    pub fn v(&self) -> u64 {
        self.rankings.first().map_or(0, |r| r.entries.len() as u64)
    }

    /// Tables kept after deduplication: up to and including the
    /// stabilization point.
    pub fn tau(&self) -> u64 {
        (self.stabilized_at + 1) as u64
    }

    pub fn lambda_bits(&self) -> u32 {
        structure_index_bits(self.w_th)
    }

    pub fn memory_bits(&self) -> u64 {
        lookup_memory_bits(self.w_th, self.v(), self.tau())
    }

    /// CSV rows for the retained tables only.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("snr_db,rank,l1,l2,probability\n");
        for ranking in self.rankings.iter().take(self.stabilized_at + 1) {
            for (rank, (st, p)) in ranking.entries.iter().enumerate() {
                out.push_str(&format!(
                    "{:.1},{},{},{},{:.6e}\n",
                    ranking.snr_db,
                    rank + 1,
                    st.l1,
                    st.l2,
                    p
                ));
            }
        }
        out
    }

    pub fn summary(&self) -> String {
        format!(
            "lambda = {} bits, v = {} structures, tau = {} tables (of {} grid points), memory = {} bits",
            self.lambda_bits(),
            self.v(),
            self.tau(),
            self.rankings.len(),
            self.memory_bits()
        )
    }
}

/// Builds rankings for every SNR on `[snr_db_min, snr_db_max]` with the
/// given step.
pub fn build_tables(
    l: u32,
    m: u32,
    w_th: u32,
    snr_db_min: f64,
    snr_db_max: f64,
    step: f64,
) -> TablesResult {
    assert!(step > 0.0 && snr_db_max >= snr_db_min);
    let mut rankings = Vec::new();
    let mut snr_db = snr_db_min;
    while snr_db <= snr_db_max + 1e-9 {
        rankings.push(rank_structures::<Real>(
            l,
            m,
            10f64.powf(snr_db / 10.0),
            w_th,
        ));
        snr_db += step;
    }
    let last = rankings.last().expect("non-empty grid");
    let mut stabilized_at = rankings.len() - 1;
    while stabilized_at > 0 && rankings[stabilized_at - 1].same_order(last) {
        stabilized_at -= 1;
    }
    TablesResult {
        l,
        m,
        w_th,
        rankings,
        stabilized_at,
    }
}
