//! Systematic random linear codes over GF(2): generation, encoding, syndrome
//! computation and small-scale oracle decoders.
//!
//! A code is fully reproducible from its `(k, n, seed)` triple: the parity
//! block `P` of the generator `[I_k | P]` is drawn bit by bit, row-major,
//! from a ChaCha8 stream seeded with `seed`. The parity-check matrix is the
//! systematic companion `[P^T | I_{n-k}]`, which satisfies `G H^T = 0` by
//! construction.

use crate::bits::BitWord;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Cap on `n` for the coset-leader oracle (table has `2^(n-k)` entries and
/// the leader search scans all `2^n` words).
pub const COSET_ORACLE_MAX_N: usize = 24;

/// Cap on `k` for the exhaustive maximum-likelihood oracle.
pub const ML_ORACLE_MAX_K: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodeError {
    #[error("invalid code dimensions: k = {k}, n = {n} (need 0 < k < n)")]
    InvalidDimensions { k: usize, n: usize },
    #[error("word length {got} does not match expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("oracle refused: {0}")]
    OracleScale(String),
}

/// A systematic binary linear code with generator `[I_k | P]`.
#[derive(Debug, Clone)]
pub struct SystematicCode {
    k: usize,
    n: usize,
    seed: u64,
    /// Rows of the parity block `P`, each of length `n - k`.
    p_rows: Vec<BitWord>,
    /// Rows of the parity-check matrix `[P^T | I_{n-k}]`, each of length `n`.
    check_rows: Vec<BitWord>,
    /// Columns of the parity-check matrix, each of length `n - k`. The
    /// syndrome of a single-bit error at position `j` is exactly column `j`;
    /// decoders build candidate syndromes by XOR-ing these.
    col_syndromes: Vec<BitWord>,
}

impl SystematicCode {
    /// Draws a random systematic code from a deterministic ChaCha8 stream.
    pub fn generate(k: usize, n: usize, seed: u64) -> Result<Self, CodeError> {
        if k == 0 || k >= n {
            return Err(CodeError::InvalidDimensions { k, n });
        }
        let r = n - k;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p_rows: Vec<BitWord> = (0..k)
            .map(|_| BitWord::from_fn(r, |_| rng.random::<bool>()))
            .collect();

        let check_rows: Vec<BitWord> = (0..r)
            .map(|j| {
                BitWord::from_fn(n, |col| {
                    if col < k {
                        p_rows[col].get(j)
                    } else {
                        col - k == j
                    }
                })
            })
            .collect();

        let col_syndromes: Vec<BitWord> = (0..n)
            .map(|col| BitWord::from_fn(r, |j| check_rows[j].get(col)))
            .collect();

        Ok(SystematicCode {
            k,
            n,
            seed,
            p_rows,
            check_rows,
            col_syndromes,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// Row `i` of the generator `[I_k | P]`.
    pub fn generator_row(&self, i: usize) -> BitWord {
        assert!(i < self.k);
        BitWord::from_fn(self.n, |col| {
            if col < self.k {
                col == i
            } else {
                self.p_rows[i].get(col - self.k)
            }
        })
    }

    /// Row `j` of the parity-check matrix `[P^T | I_{n-k}]`.
    pub fn parity_check_row(&self, j: usize) -> &BitWord {
        &self.check_rows[j]
    }

    /// Column `j` of the parity-check matrix: the syndrome of a single-bit
    /// error at position `j`.
    #[inline]
    pub fn col_syndrome(&self, j: usize) -> &BitWord {
        &self.col_syndromes[j]
    }

    /// FNV-1a digest of the `P` block, for golden-test fixtures that store
    /// the `(k, n, seed)` triple plus a hash.
    pub fn p_digest(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for row in &self.p_rows {
            for bit in row.iter() {
                h ^= bit as u64;
                h = h.wrapping_mul(0x1000_0000_01b3);
            }
        }
        h
    }

    /// Systematic encoding: the message followed by `a · P`.
    pub fn encode(&self, a: &BitWord) -> Result<BitWord, CodeError> {
        if a.len() != self.k {
            return Err(CodeError::LengthMismatch {
                expected: self.k,
                got: a.len(),
            });
        }
        let mut parity = BitWord::zeros(self.n - self.k);
        for i in 0..self.k {
            if a.get(i) {
                parity.xor_assign(&self.p_rows[i]);
            }
        }
        Ok(BitWord::from_fn(self.n, |col| {
            if col < self.k {
                a.get(col)
            } else {
                parity.get(col - self.k)
            }
        }))
    }

    /// `H · y^T` over GF(2).
    pub fn syndrome(&self, y: &BitWord) -> Result<BitWord, CodeError> {
        if y.len() != self.n {
            return Err(CodeError::LengthMismatch {
                expected: self.n,
                got: y.len(),
            });
        }
        Ok(BitWord::from_fn(self.n - self.k, |j| {
            self.check_rows[j].dot(y)
        }))
    }

    /// Membership test: true iff the syndrome of `y` is all-zero.
    pub fn is_codeword(&self, y: &BitWord) -> Result<bool, CodeError> {
        Ok(self.syndrome(y)?.is_zero())
    }

    /// Exhaustive minimum distance (test oracle; `k` capped).
    pub fn min_distance(&self) -> Result<usize, CodeError> {
        if self.k > ML_ORACLE_MAX_K {
            return Err(CodeError::OracleScale(format!(
                "min_distance scans 2^k codewords; k = {} exceeds {}",
                self.k, ML_ORACLE_MAX_K
            )));
        }
        let mut best = self.n + 1;
        for msg in 1u64..(1u64 << self.k) {
            let a = BitWord::from_fn(self.k, |i| (msg >> i) & 1 == 1);
            let w = self.encode(&a).expect("length fixed").weight();
            best = best.min(w);
        }
        Ok(best)
    }
}

/// Syndrome-indexed table of minimum-weight coset leaders (test oracle).
#[derive(Debug, Clone)]
pub struct CosetLeaderTable {
    n: usize,
    r: usize,
    leaders: Vec<BitWord>,
}

impl CosetLeaderTable {
    /// Scans all `2^n` words in lexicographic order, keeping per syndrome the
    /// first word of strictly smallest weight — so ties resolve to the
    /// lexicographically smallest leader.
    pub fn build(code: &SystematicCode) -> Result<Self, CodeError> {
        let n = code.n();
        let r = n - code.k();
        if n > COSET_ORACLE_MAX_N {
            return Err(CodeError::OracleScale(format!(
                "coset leader table scans 2^n words; n = {n} exceeds {COSET_ORACLE_MAX_N}"
            )));
        }
        let mut leaders = vec![BitWord::zeros(n); 1 << r];
        let mut weights = vec![usize::MAX; 1 << r];
        for v in 0u64..(1u64 << n) {
            // Bit i of the word is bit (n-1-i) of v, so ascending v is
            // ascending lexicographic word order.
            let word = BitWord::from_fn(n, |i| (v >> (n - 1 - i)) & 1 == 1);
            let w = word.weight();
            let idx = syndrome_index(&code.syndrome(&word).expect("length fixed"));
            if w < weights[idx] {
                weights[idx] = w;
                leaders[idx] = word;
            }
        }
        Ok(CosetLeaderTable { n, r, leaders })
    }

    pub fn len(&self) -> usize {
        self.leaders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaders.is_empty()
    }

    /// The minimum-weight error pattern producing this syndrome.
    pub fn leader(&self, syndrome: &BitWord) -> &BitWord {
        assert_eq!(syndrome.len(), self.r, "syndrome length mismatch");
        &self.leaders[syndrome_index(syndrome)]
    }

    /// Syndrome decoding: subtract the coset leader of the received word's
    /// syndrome.
    pub fn decode(&self, code: &SystematicCode, y: &BitWord) -> Result<BitWord, CodeError> {
        if y.len() != self.n {
            return Err(CodeError::LengthMismatch {
                expected: self.n,
                got: y.len(),
            });
        }
        let leader = self.leader(&code.syndrome(y)?);
        Ok(y.xored(leader))
    }
}

fn syndrome_index(s: &BitWord) -> usize {
    let mut idx = 0usize;
    for (j, bit) in s.iter().enumerate() {
        if bit {
            idx |= 1 << j;
        }
    }
    idx
}

/// Exhaustive-codebook maximum-likelihood decoding over the Hamming metric
/// (test oracle; `k` capped). Ties resolve to the lexicographically smallest
/// codeword.
pub fn ml_decode_oracle(code: &SystematicCode, y: &BitWord) -> Result<BitWord, CodeError> {
    if code.k() > ML_ORACLE_MAX_K {
        return Err(CodeError::OracleScale(format!(
            "ml_decode_oracle scans 2^k codewords; k = {} exceeds {}",
            code.k(),
            ML_ORACLE_MAX_K
        )));
    }
    if y.len() != code.n() {
        return Err(CodeError::LengthMismatch {
            expected: code.n(),
            got: y.len(),
        });
    }
    let mut best: Option<(usize, BitWord)> = None;
    for msg in 0u64..(1u64 << code.k()) {
        let a = BitWord::from_fn(code.k(), |i| (msg >> i) & 1 == 1);
        let cw = code.encode(&a).expect("length fixed");
        let dist = cw.xored(y).weight();
        let better = match &best {
            None => true,
            Some((d, c)) => dist < *d || (dist == *d && cw < *c),
        };
        if better {
            best = Some((dist, cw));
        }
    }
    Ok(best.expect("codebook nonempty").1)
}
