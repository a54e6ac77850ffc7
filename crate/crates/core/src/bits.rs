//! Fixed-length words over GF(2), packed into 64-bit blocks.
//!
//! Bit `i` of a word lives in block `i / 64` at position `i % 64`. The unused
//! high bits of the last block are kept zero so that equality, weight and
//! ordering can work block-wise. Lexicographic order compares bit 0 first,
//! with 0 < 1 — the same order as reading the word as a left-to-right string
//! of '0'/'1' characters.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// A fixed-length vector over GF(2).
///
/// The length is set at construction; elementwise operations panic on length
/// mismatch (a programming error, not an input error).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitWord {
    len: usize,
    blocks: Vec<u64>,
}

impl BitWord {
    /// All-zero word of the given length.
    pub fn zeros(len: usize) -> Self {
        BitWord {
            len,
            blocks: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut w = BitWord::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                w.set(i, true);
            }
        }
        w
    }

    /// Builds a word by evaluating `f` at every index.
    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut w = BitWord::zeros(len);
        for i in 0..len {
            if f(i) {
                w.set(i, true);
            }
        }
        w
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range (len {})",
            self.len
        );
        (self.blocks[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range (len {})",
            self.len
        );
        let mask = 1u64 << (i % 64);
        if v {
            self.blocks[i / 64] |= mask;
        } else {
            self.blocks[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit index {i} out of range (len {})",
            self.len
        );
        self.blocks[i / 64] ^= 1u64 << (i % 64);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "XOR requires equal lengths");
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a ^= b;
        }
    }

    pub fn xored(&self, other: &Self) -> Self {
        let mut w = self.clone();
        w.xor_assign(other);
        w
    }

    /// Overwrites `self` with `other` without reallocating.
    #[inline]
    pub fn copy_from(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "copy requires equal lengths");
        self.blocks.copy_from_slice(&other.blocks);
    }

    /// Hamming weight.
    #[inline]
    pub fn weight(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    /// Parity of the AND with `other`: the GF(2) inner product.
    #[inline]
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "dot requires equal lengths");
        let ones: u32 = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    /// Indices of the set bits, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (bi, &block) in self.blocks.iter().enumerate() {
            let mut b = block;
            while b != 0 {
                out.push(bi * 64 + b.trailing_zeros() as usize);
                b &= b - 1;
            }
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// The first `k` bits as a new word.
    pub fn prefix(&self, k: usize) -> BitWord {
        assert!(k <= self.len);
        BitWord::from_fn(k, |i| self.get(i))
    }
}

impl Ord for BitWord {
    fn cmp(&self, other: &Self) -> Ordering {
        assert_eq!(self.len, other.len, "ordering requires equal lengths");
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            let diff = a ^ b;
            if diff != 0 {
                // Lowest differing index decides; the word holding 0 there
                // is the lexicographically smaller one.
                let i = diff.trailing_zeros();
                return if (a >> i) & 1 == 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for BitWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord({self})")
    }
}

/// Parse error for [`BitWord::from_str`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid bit character {0:?}")]
pub struct ParseBitWordError(char);

impl FromStr for BitWord {
    type Err = ParseBitWordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut w = BitWord::zeros(s.chars().count());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => w.set(i, true),
                other => return Err(ParseBitWordError(other)),
            }
        }
        Ok(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn set_get_roundtrip() {
        let mut w = BitWord::zeros(130);
        w.set(0, true);
        w.set(64, true);
        w.set(129, true);
        assert!(w.get(0) && w.get(64) && w.get(129));
        assert!(!w.get(1) && !w.get(63) && !w.get(128));
        assert_eq!(w.weight(), 3);
        assert_eq!(w.support(), vec![0, 64, 129]);
    }

    #[test]
    fn xor_with_self_is_zero() {
        let w: BitWord = "1011001".parse().unwrap();
        assert!(w.xored(&w).is_zero());
    }

    #[test]
    fn lexicographic_order_matches_strings() {
        let a: BitWord = "0100".parse().unwrap();
        let b: BitWord = "1000".parse().unwrap();
        assert!(a < b);
        let c: BitWord = "0011".parse().unwrap();
        assert!(c < a);
    }

    #[test]
    fn display_roundtrip() {
        let s = "010110100110";
        let w: BitWord = s.parse().unwrap();
        assert_eq!(w.to_string(), s);
    }

    proptest! {
        #[test]
        fn xor_commutes(a in proptest::collection::vec(any::<bool>(), 1..200),
                        b_seed in any::<u64>()) {
            let len = a.len();
            let a = BitWord::from_bools(&a);
            let b = BitWord::from_fn(len, |i| (b_seed >> (i % 64)) & 1 == 1);
            prop_assert_eq!(a.xored(&b), b.xored(&a));
        }

        #[test]
        fn order_agrees_with_string_order(
            a in proptest::collection::vec(any::<bool>(), 1..150),
            b in proptest::collection::vec(any::<bool>(), 1..150),
        ) {
            let len = a.len().min(b.len());
            let wa = BitWord::from_bools(&a[..len]);
            let wb = BitWord::from_bools(&b[..len]);
            let sa = wa.to_string();
            let sb = wb.to_string();
            prop_assert_eq!(wa.cmp(&wb), sa.cmp(&sb));
        }
    }
}
