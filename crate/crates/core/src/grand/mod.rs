//! Noise-guessing decoders: bit-level and symbol-level searches over
//! candidate error patterns, each with an optional CSI-driven position
//! priority, instrumented with membership-query counters.
//!
//! The bit-level search tests patterns by ascending Hamming weight; within a
//! weight class, support sets follow colexicographic order over the priority
//! order (natural bit order by default), so patterns confined to
//! early-priority positions come first. The symbol-level search walks a
//! likelihood-ordered [`StructureRanking`] and, per structure `[L1 L2]`,
//! assigns `L1` positions a weight-1 error string and `L2` disjoint positions
//! a weight-2 error string drawn from the detected label's neighborhood sets,
//! again in colex order over the priority. Every decoder counts the initial
//! all-zero query.

pub mod patterns;

use crate::bits::BitWord;
use crate::code::{CodeError, SystematicCode};
use crate::error_model::{ErrorStructure, StructureRanking};
use crate::modulation::{Constellation, ModulationError};
use crate::scalar::Scalar;
use patterns::{for_each_choice, for_each_combination, for_each_disjoint_pair};
use std::ops::ControlFlow;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GrandError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Modulation(#[from] ModulationError),
    #[error("{what} has length {got}, expected {expected}")]
    Length {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("priority order is not a permutation of the positions")]
    InvalidPriority,
}

/// Decoding verdict plus the number of membership tests it took.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub result: DecodeResult,
    pub queries: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeResult {
    Decoded(BitWord),
    Abandoned,
}

impl DecodeOutcome {
    pub fn is_decoded(&self) -> bool {
        matches!(self.result, DecodeResult::Decoded(_))
    }

    pub fn codeword(&self) -> Option<&BitWord> {
        match &self.result {
            DecodeResult::Decoded(cw) => Some(cw),
            DecodeResult::Abandoned => None,
        }
    }

    /// First `k` bits of the decoded codeword.
    pub fn info_bits(&self, k: usize) -> Option<BitWord> {
        self.codeword().map(|cw| cw.prefix(k))
    }
}

/// Position order by ascending reliability; `order()[0]` is the least
/// reliable position. Ties keep the original index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortPermutation {
    order: Vec<usize>,
}

impl SortPermutation {
    pub fn from_gains<S: PartialOrd + Copy>(gains: &[S]) -> Self {
        let mut order: Vec<usize> = (0..gains.len()).collect();
        order.sort_by(|&a, &b| {
            gains[a]
                .partial_cmp(&gains[b])
                .expect("gains must be comparable")
                .then(a.cmp(&b))
        });
        SortPermutation { order }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.order.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Reorders items so the least reliable comes first.
    pub fn apply<T: Clone>(&self, items: &[T]) -> Vec<T> {
        assert_eq!(items.len(), self.order.len());
        self.order.iter().map(|&p| items[p].clone()).collect()
    }

    /// Undoes [`Self::apply`] (the transpose of the permutation matrix).
    pub fn unapply<T: Clone + Default>(&self, items: &[T]) -> Vec<T> {
        assert_eq!(items.len(), self.order.len());
        let mut out = vec![T::default(); items.len()];
        for (rank, &p) in self.order.iter().enumerate() {
            out[p] = items[rank].clone();
        }
        out
    }
}

/// Sorts symbol positions by ascending post-processing gain.
pub fn antenna_sort<S: Scalar>(gains: &[S]) -> SortPermutation {
    SortPermutation::from_gains(gains)
}

fn check_priority(priority: &[usize], n: usize) -> Result<(), GrandError> {
    if priority.len() != n {
        return Err(GrandError::InvalidPriority);
    }
    let mut seen = vec![false; n];
    for &p in priority {
        if p >= n || seen[p] {
            return Err(GrandError::InvalidPriority);
        }
        seen[p] = true;
    }
    Ok(())
}

/// Bit-level noise guessing: tests error patterns of weight 0, 1, ..,
/// `w_th`, returning the first one whose correction lands in the codebook.
pub fn bit_level_grand(
    y: &BitWord,
    code: &SystematicCode,
    w_th: u32,
    priority: Option<&[usize]>,
) -> Result<DecodeOutcome, GrandError> {
    let n = code.n();
    if y.len() != n {
        return Err(GrandError::Length {
            what: "received word",
            expected: n,
            got: y.len(),
        });
    }
    assert!(w_th as usize <= n, "threshold cannot exceed block length");
    let natural: Vec<usize>;
    let priority = match priority {
        Some(p) => {
            check_priority(p, n)?;
            p
        }
        None => {
            natural = (0..n).collect();
            &natural
        }
    };

    let s_y = code.syndrome(y)?;
    let mut queries = 1u64;
    if s_y.is_zero() {
        return Ok(DecodeOutcome {
            result: DecodeResult::Decoded(y.clone()),
            queries,
        });
    }

    let mut scratch = BitWord::zeros(n - code.k());
    let mut hit: Option<BitWord> = None;
    for w in 1..=w_th as usize {
        let flow = for_each_combination(n, w, |ranks| {
            scratch.copy_from(&s_y);
            for &rank in ranks {
                scratch.xor_assign(code.col_syndrome(priority[rank]));
            }
            queries += 1;
            if scratch.is_zero() {
                let mut pattern = BitWord::zeros(n);
                for &rank in ranks {
                    pattern.set(priority[rank], true);
                }
                hit = Some(pattern);
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        if flow.is_break() {
            break;
        }
    }
    Ok(match hit {
        Some(pattern) => {
            let decoded = y.xored(&pattern);
            debug_assert!(code.is_codeword(&decoded).unwrap());
            DecodeOutcome {
                result: DecodeResult::Decoded(decoded),
                queries,
            }
        }
        None => DecodeOutcome {
            result: DecodeResult::Abandoned,
            queries,
        },
    })
}

/// Bit-level guessing with the flip order steered by per-antenna gains: all
/// bits of the least reliable string first, preserving intra-string order.
/// The decoded word comes back in the original position convention.
pub fn sorted_bit_level_grand<S: Scalar>(
    y: &BitWord,
    code: &SystematicCode,
    w_th: u32,
    gains: &[S],
    constellation: &Constellation<S>,
) -> Result<DecodeOutcome, GrandError> {
    let b = constellation.bits_per_symbol() as usize;
    let n = code.n();
    if gains.len() * b != n {
        return Err(GrandError::Length {
            what: "gains",
            expected: n / b,
            got: gains.len(),
        });
    }
    let perm = antenna_sort(gains);
    let mut priority = Vec::with_capacity(n);
    for &string_pos in perm.order() {
        for j in 0..b {
            priority.push(string_pos * b + j);
        }
    }
    bit_level_grand(y, code, w_th, Some(&priority))
}

/// Candidate error slots for one position: the per-slot choice list.
struct SlotChoices<'a> {
    position: usize,
    strings: &'a [u16],
}

/// Symbol-level noise guessing: walks the structure ranking and tests every
/// assignment of neighborhood error strings to position subsets.
pub fn symbol_level_grand<S: Scalar>(
    labels: &[u16],
    code: &SystematicCode,
    constellation: &Constellation<S>,
    ranking: &StructureRanking<S>,
    priority: Option<&[usize]>,
) -> Result<DecodeOutcome, GrandError> {
    let b = constellation.bits_per_symbol() as usize;
    let l = labels.len();
    let n = code.n();
    if l * b != n {
        return Err(GrandError::Length {
            what: "detected labels",
            expected: n / b,
            got: l,
        });
    }
    for &label in labels {
        if label as u32 >= constellation.size() {
            return Err(GrandError::Modulation(ModulationError::UnknownLabel(label)));
        }
    }
    let natural: Vec<usize>;
    let priority = match priority {
        Some(p) => {
            check_priority(p, l)?;
            p
        }
        None => {
            natural = (0..l).collect();
            &natural
        }
    };

    let y = constellation.bits_from_labels(labels);
    let s_y = code.syndrome(&y)?;
    let mut queries = 1u64;
    if s_y.is_zero() {
        return Ok(DecodeOutcome {
            result: DecodeResult::Decoded(y),
            queries,
        });
    }

    // Syndrome contribution of applying error string `e` at position `pos`.
    let r = n - code.k();
    let contribution = |pos: usize, e: u16| -> BitWord {
        let mut acc = BitWord::zeros(r);
        for j in 0..b {
            if (e >> (b - 1 - j)) & 1 == 1 {
                acc.xor_assign(code.col_syndrome(pos * b + j));
            }
        }
        acc
    };
    let contribs: Vec<(Vec<BitWord>, Vec<BitWord>)> = (0..l)
        .map(|pos| {
            let nb = constellation.error_strings_unchecked(labels[pos]);
            (
                nb.e1.iter().map(|&e| contribution(pos, e)).collect(),
                nb.e2.iter().map(|&e| contribution(pos, e)).collect(),
            )
        })
        .collect();

    let mut scratch = BitWord::zeros(r);
    let mut hit: Option<Vec<(usize, u16)>> = None;
    'ranking: for (structure, _) in &ranking.entries {
        let (l1, l2) = (structure.l1 as usize, structure.l2 as usize);
        if l1 + l2 > l {
            continue;
        }
        let flow = for_each_disjoint_pair(l, l1, l2, |s1_ranks, s2_ranks| {
            // Slot layout: the L1 weight-1 slots (by ascending rank), then
            // the L2 weight-2 slots.
            let mut slots: Vec<SlotChoices<'_>> = Vec::with_capacity(l1 + l2);
            let mut counts = Vec::with_capacity(l1 + l2);
            for &rank in s1_ranks {
                let pos = priority[rank];
                let strings = &constellation.error_strings_unchecked(labels[pos]).e1;
                counts.push(strings.len());
                slots.push(SlotChoices {
                    position: pos,
                    strings,
                });
            }
            for &rank in s2_ranks {
                let pos = priority[rank];
                let strings = &constellation.error_strings_unchecked(labels[pos]).e2;
                counts.push(strings.len());
                slots.push(SlotChoices {
                    position: pos,
                    strings,
                });
            }
            for_each_choice(&counts, |digits| {
                scratch.copy_from(&s_y);
                for (slot_idx, slot) in slots.iter().enumerate() {
                    let side = if slot_idx < l1 { 0 } else { 1 };
                    let pool = if side == 0 {
                        &contribs[slot.position].0
                    } else {
                        &contribs[slot.position].1
                    };
                    scratch.xor_assign(&pool[digits[slot_idx]]);
                }
                queries += 1;
                if scratch.is_zero() {
                    hit = Some(
                        slots
                            .iter()
                            .zip(digits)
                            .map(|(slot, &d)| (slot.position, slot.strings[d]))
                            .collect(),
                    );
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            })
        });
        if flow.is_break() {
            break 'ranking;
        }
    }

    Ok(match hit {
        Some(slots) => {
            let mut pattern = BitWord::zeros(n);
            for (pos, e) in slots {
                for j in 0..b {
                    if (e >> (b - 1 - j)) & 1 == 1 {
                        pattern.set(pos * b + j, true);
                    }
                }
            }
            let decoded = y.xored(&pattern);
            debug_assert!(code.is_codeword(&decoded).unwrap());
            DecodeOutcome {
                result: DecodeResult::Decoded(decoded),
                queries,
            }
        }
        None => DecodeOutcome {
            result: DecodeResult::Abandoned,
            queries,
        },
    })
}

/// Symbol-level guessing with positions prioritized by ascending gain. The
/// decoded word is reported in the original position convention.
pub fn sorted_symbol_level_grand<S: Scalar>(
    labels: &[u16],
    code: &SystematicCode,
    constellation: &Constellation<S>,
    ranking: &StructureRanking<S>,
    gains: &[S],
) -> Result<DecodeOutcome, GrandError> {
    if gains.len() != labels.len() {
        return Err(GrandError::Length {
            what: "gains",
            expected: labels.len(),
            got: gains.len(),
        });
    }
    let perm = antenna_sort(gains);
    symbol_level_grand(labels, code, constellation, ranking, Some(perm.order()))
}

/// Exact number of patterns the symbol-level search emits for one structure,
/// given the per-position neighborhood cardinalities: the coefficient of
/// `x^L1 y^L2` in `prod_i (1 + |E1_i| x + |E2_i| y)`.
pub fn pattern_count_for_structure<S: Scalar>(
    structure: ErrorStructure,
    labels: &[u16],
    constellation: &Constellation<S>,
) -> u128 {
    let (l1, l2) = (structure.l1 as usize, structure.l2 as usize);
    let mut dp = vec![vec![0u128; l2 + 1]; l1 + 1];
    dp[0][0] = 1;
    for &label in labels {
        let nb = constellation.error_strings_unchecked(label);
        let (a, b) = (nb.e1.len() as u128, nb.e2.len() as u128);
        for i in (0..=l1).rev() {
            for j in (0..=l2).rev() {
                let mut v = dp[i][j];
                if i > 0 {
                    v = v
                        .checked_add(dp[i - 1][j].checked_mul(a).expect("count fits u128"))
                        .expect("count fits u128");
                }
                if j > 0 {
                    v = v
                        .checked_add(dp[i][j - 1].checked_mul(b).expect("count fits u128"))
                        .expect("count fits u128");
                }
                dp[i][j] = v;
            }
        }
    }
    dp[l1][l2]
}

/// Collects the `(position, error string)` slates the symbol-level search
/// would test for one structure, in emission order. Test support.
pub fn collect_structure_patterns<S: Scalar>(
    labels: &[u16],
    constellation: &Constellation<S>,
    structure: ErrorStructure,
    priority: Option<&[usize]>,
) -> Vec<Vec<(usize, u16)>> {
    let l = labels.len();
    let natural: Vec<usize> = (0..l).collect();
    let priority = priority.unwrap_or(&natural);
    let (l1, l2) = (structure.l1 as usize, structure.l2 as usize);
    let mut out = Vec::new();
    let _ = for_each_disjoint_pair(l, l1, l2, |s1_ranks, s2_ranks| {
        let mut slots: Vec<(usize, &[u16])> = Vec::with_capacity(l1 + l2);
        let mut counts = Vec::with_capacity(l1 + l2);
        for &rank in s1_ranks {
            let pos = priority[rank];
            let strings = &constellation.error_strings_unchecked(labels[pos]).e1;
            counts.push(strings.len());
            slots.push((pos, strings));
        }
        for &rank in s2_ranks {
            let pos = priority[rank];
            let strings = &constellation.error_strings_unchecked(labels[pos]).e2;
            counts.push(strings.len());
            slots.push((pos, strings));
        }
        for_each_choice(&counts, |digits| {
            out.push(
                slots
                    .iter()
                    .zip(digits)
                    .map(|(&(pos, strings), &d)| (pos, strings[d]))
                    .collect(),
            );
            ControlFlow::Continue(())
        })
    });
    out
}
