//! Analytical model of post-detection error patterns: the Gaussian tail
//! probability, the nine per-point-class symbol error probabilities, the
//! probability that a block of `L` detected strings carries `L1` weight-1
//! and `L2` weight-2 error strings, likelihood-ordered structure rankings
//! per SNR, lookup-table memory accounting, and the bit-level query upper
//! bound.
//!
//! All probabilities are joint with the uniform 1/M symbol prior: e.g. the
//! corner/no-error term is the probability of transmitting one *specific*
//! corner symbol and detecting it unchanged. The structure probability sums
//! these over the multinomial placement of corner/side/inner symbols with
//! point-count factors `4^(Lc+Ls) * (sqrt(M)-2)^(Ls+2Li)`.

use crate::scalar::Scalar;
use num_bigint::BigUint;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("structure [{l1} {l2}] violates L1 + L2 <= L = {l}")]
    StructureTooLarge { l1: u32, l2: u32, l: u32 },
    #[error("block of {0} strings exceeds the supported bound of {MAX_BLOCK_STRINGS}")]
    BlockTooLong(u32),
}

/// Largest supported number of strings per block: binomial coefficients stay
/// exact in 64 bits up to here.
pub const MAX_BLOCK_STRINGS: u32 = 64;

/// Tail distribution of the standard normal: `Q(z) = erfc(z / sqrt(2)) / 2`.
#[inline]
pub fn q_function<S: Scalar>(z: S) -> S {
    S::erfc(z / S::of(std::f64::consts::SQRT_2)) * S::of(0.5)
}

/// Counts of weight-1 (`l1`) and weight-2 (`l2`) error strings in a block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ErrorStructure {
    pub l1: u32,
    pub l2: u32,
}

impl ErrorStructure {
    pub fn new(l1: u32, l2: u32) -> Self {
        ErrorStructure { l1, l2 }
    }

    /// Bit weight of any pattern with this structure.
    pub fn weight(&self) -> u32 {
        self.l1 + 2 * self.l2
    }
}

/// The nine joint probabilities of (point class, error type) for one symbol,
/// plus the scaled half-distance they derive from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolErrorProbs<S: Scalar> {
    pub d_prime: S,
    pub corner_zero: S,
    pub side_zero: S,
    pub inner_zero: S,
    pub corner_e1: S,
    pub side_e1: S,
    pub inner_e1: S,
    pub corner_e2: S,
    pub side_e2: S,
    pub inner_e2: S,
}

impl<S: Scalar> SymbolErrorProbs<S> {
    fn class_probs(&self, class: usize) -> (S, S, S) {
        match class {
            0 => (self.corner_zero, self.corner_e1, self.corner_e2),
            1 => (self.side_zero, self.side_e1, self.side_e2),
            _ => (self.inner_zero, self.inner_e1, self.inner_e2),
        }
    }
}

/// Evaluates the nine probability terms at a linear SNR, with
/// `d' = sqrt(3 snr / (M-1))`.
pub fn symbol_error_probs<S: Scalar>(m: u32, snr: S) -> SymbolErrorProbs<S> {
    let d_prime = (S::of(3.0) * snr / S::of(m as f64 - 1.0)).sqrt();
    let q = q_function(d_prime);
    let inv_m = S::one() / S::of(m as f64);
    let one = S::one();
    let two = S::of(2.0);
    let stay1 = one - q; // one boundary on this axis
    let stay2 = one - two * q; // two boundaries on this axis
    SymbolErrorProbs {
        d_prime,
        corner_zero: inv_m * stay1 * stay1,
        side_zero: inv_m * stay1 * stay2,
        inner_zero: inv_m * stay2 * stay2,
        corner_e1: two * inv_m * stay1 * q,
        side_e1: inv_m * (two * stay1 * q + stay2 * q),
        inner_e1: S::of(4.0) * inv_m * stay2 * q,
        corner_e2: inv_m * q * q,
        side_e2: two * inv_m * q * q,
        inner_e2: S::of(4.0) * inv_m * q * q,
    }
}

fn binomial_table(l: usize) -> Vec<Vec<u64>> {
    debug_assert!(l <= MAX_BLOCK_STRINGS as usize);
    let mut table = vec![vec![0u64; l + 1]; l + 1];
    for (n, row) in table.iter_mut().enumerate() {
        row[0] = 1;
        for t in 1..=n {
            // The intermediate product can spill past 64 bits near n = 64;
            // the quotient is an exact binomial and fits.
            let wide = row[t - 1] as u128 * (n - t + 1) as u128 / t as u128;
            row[t] = wide as u64;
        }
    }
    table
}

/// Probability that a block of `l` strings carries exactly `l1` weight-1 and
/// `l2` weight-2 error strings: the triple sum over the placement of point
/// classes, of erroneous symbols among them, and of weight-1 errors among
/// the erroneous ones.
pub fn structure_probability<S: Scalar>(
    l: u32,
    structure: ErrorStructure,
    probs: &SymbolErrorProbs<S>,
    m: u32,
) -> Result<S, ModelError> {
    let (l1, l2) = (structure.l1, structure.l2);
    if l > MAX_BLOCK_STRINGS {
        return Err(ModelError::BlockTooLong(l));
    }
    if l1 + l2 > l {
        return Err(ModelError::StructureTooLarge { l1, l2, l });
    }
    let l = l as usize;
    let erroneous = (l1 + l2) as usize;
    let l1 = l1 as usize;
    let binom = binomial_table(l);
    let side_count = S::of((m as f64).sqrt() - 2.0);
    let four = S::of(4.0);

    // Power tables: index [class][exponent].
    let mut p0 = vec![vec![S::one(); l + 1]; 3];
    let mut pe1 = vec![vec![S::one(); erroneous + 1]; 3];
    let mut pe2 = vec![vec![S::one(); erroneous + 1]; 3];
    for class in 0..3 {
        let (z, e1, e2) = probs.class_probs(class);
        for x in 1..=l {
            p0[class][x] = p0[class][x - 1] * z;
        }
        for x in 1..=erroneous {
            pe1[class][x] = pe1[class][x - 1] * e1;
            pe2[class][x] = pe2[class][x - 1] * e2;
        }
    }

    let mut total = S::zero();
    for lc in 0..=l {
        for ls in 0..=l - lc {
            let li = l - lc - ls;
            let outer = S::from_u64(binom[l][lc]).unwrap()
                * S::from_u64(binom[l - lc][ls]).unwrap()
                * four.powi((lc + ls) as i32)
                * side_count.powi((ls + 2 * li) as i32);
            if outer == S::zero() {
                continue;
            }
            let counts = [lc, ls, li];
            let mut mid_total = S::zero();
            for lce in 0..=erroneous.min(lc) {
                for lse in 0..=(erroneous - lce).min(ls) {
                    let lie = erroneous - lce - lse;
                    if lie > li {
                        continue;
                    }
                    let errs = [lce, lse, lie];
                    let mut mid = S::one();
                    for class in 0..3 {
                        mid = mid
                            * S::from_u64(binom[counts[class]][errs[class]]).unwrap()
                            * p0[class][counts[class] - errs[class]];
                    }
                    let mut inner_total = S::zero();
                    for lce1 in 0..=l1.min(lce) {
                        for lse1 in 0..=(l1 - lce1).min(lse) {
                            let lie1 = l1 - lce1 - lse1;
                            if lie1 > lie {
                                continue;
                            }
                            let ones = [lce1, lse1, lie1];
                            let mut inner = S::one();
                            for class in 0..3 {
                                inner = inner
                                    * S::from_u64(binom[errs[class]][ones[class]]).unwrap()
                                    * pe1[class][ones[class]]
                                    * pe2[class][errs[class] - ones[class]];
                            }
                            inner_total = inner_total + inner;
                        }
                    }
                    mid_total = mid_total + mid * inner_total;
                }
            }
            total = total + outer * mid_total;
        }
    }
    // The exact sum lies in [0,1]; floating accumulation can overshoot by a
    // few ulps at extreme SNR.
    Ok(total.max(S::zero()).min(S::one()))
}

/// Likelihood-ordered table of candidate structures for one SNR point.
#[derive(Debug, Clone)]
pub struct StructureRanking<S: Scalar> {
    pub snr_db: S,
    pub w_th: u32,
    /// Descending probability; ties break to smaller weight, then smaller
    /// `l2`, then smaller `l1`.
    pub entries: Vec<(ErrorStructure, S)>,
}

impl<S: Scalar> StructureRanking<S> {
    pub fn structures(&self) -> impl Iterator<Item = ErrorStructure> + '_ {
        self.entries.iter().map(|(s, _)| *s)
    }

    /// True when two rankings order the same structures identically.
    pub fn same_order(&self, other: &Self) -> bool {
        self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|((a, _), (b, _))| a == b)
    }
}

/// All structures with `0 < L1 + 2 L2 <= w_th` and `L1 + L2 <= L`, sorted by
/// descending probability at the given linear SNR.
pub fn rank_structures<S: Scalar>(l: u32, m: u32, snr: S, w_th: u32) -> StructureRanking<S> {
    assert!(w_th >= 1, "abandonment threshold must be at least 1");
    let probs = symbol_error_probs(m, snr);
    let mut entries = Vec::new();
    for l2 in 0..=w_th / 2 {
        for l1 in 0..=w_th - 2 * l2 {
            let st = ErrorStructure::new(l1, l2);
            if st.weight() == 0 || l1 + l2 > l {
                continue;
            }
            let p = structure_probability(l, st, &probs, m).expect("bounds checked");
            entries.push((st, p));
        }
    }
    entries.sort_by(|(sa, pa), (sb, pb)| {
        pb.partial_cmp(pa)
            .expect("probabilities are finite")
            .then(sa.weight().cmp(&sb.weight()))
            .then(sa.l2.cmp(&sb.l2))
            .then(sa.l1.cmp(&sb.l1))
    });
    StructureRanking {
        snr_db: snr.log10() * S::of(10.0),
        w_th,
        entries,
    }
}

fn ceil_log2(x: u64) -> u32 {
    debug_assert!(x >= 1);
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// Bits needed to store one `[L1 L2]` structure: one index field per
/// coordinate, `L1 in 0..=w_th` and `L2 in 0..=w_th/2`.
pub fn structure_index_bits(w_th: u32) -> u32 {
    ceil_log2(w_th as u64 + 1) + ceil_log2(w_th as u64 / 2 + 1)
}

/// Total lookup-table memory: bits per structure times `v` structures per
/// table times `tau` tables.
pub fn lookup_memory_bits(w_th: u32, v: u64, tau: u64) -> u64 {
    assert!(w_th >= 1 && v >= 1 && tau >= 1);
    structure_index_bits(w_th) as u64 * v * tau
}

/// Exact number of membership tests a bit-level search can need:
/// `sum_{t=0}^{w_th} C(n, t)`, including the initial all-zero query.
pub fn bitlevel_query_upper_bound(n: u32, w_th: u32) -> BigUint {
    assert!(w_th <= n, "threshold cannot exceed the block length");
    let mut total = BigUint::from(1u32);
    let mut term = BigUint::from(1u32);
    for t in 1..=w_th {
        term = term * BigUint::from(n - t + 1) / BigUint::from(t);
        total += &term;
    }
    total
}
