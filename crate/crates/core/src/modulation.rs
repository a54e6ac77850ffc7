//! Gray-labeled square M-QAM: construction, bit mapping, hard-decision
//! quantization, point classification, and the per-symbol neighborhoods and
//! error-string sets that the symbol-level decoder consumes.
//!
//! # Grid convention
//!
//! A label of `log2(M)` bits is read left to right as `b1 b2 b3 ...`; the
//! odd-position bits `(b1, b3, ...)` form the in-phase (I) Gray word, MSB
//! first, and the even-position bits `(b2, b4, ...)` form the quadrature (Q)
//! Gray word. Along each axis, coordinate index `0..sqrt(M)` (increasing
//! coordinate, i.e. left to right for I and bottom to top for Q) follows the
//! reflected-binary Gray sequence rotated so the word `10...0` comes first:
//! for two bits `10, 00, 01, 11`. Points sit at `(2*idx - (sqrt(M)-1)) * d`
//! with `d = sqrt(3 / (2(M-1)))`, which normalizes the average symbol energy
//! to one.
//!
//! For 16-QAM this yields the grid (rows top to bottom = decreasing Q):
//!
//! ```text
//! 1101 0101 0111 1111
//! 1001 0001 0011 1011
//! 1000 0000 0010 1010
//! 1100 0100 0110 1110
//! ```
//!
//! Labels are stored as integers with `b1` in the most significant of the
//! `log2(M)` bits, so integer order equals lexicographic bit-string order.

use crate::bits::BitWord;
use crate::scalar::Scalar;
use num_complex::Complex;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModulationError {
    #[error("constellation size {0} is not an even power of two >= 4")]
    InvalidSize(u32),
    #[error("bit length {got} is not a multiple of {bits_per_symbol} bits per symbol")]
    BitLength { got: usize, bits_per_symbol: u32 },
    #[error("label {0:#06b} outside the constellation")]
    UnknownLabel(u16),
    #[error("symbol is not a constellation point")]
    NotAConstellationPoint,
}

/// Position of a point within the square grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointClass {
    /// Both coordinates extreme; 4 per constellation.
    Corner,
    /// Exactly one coordinate extreme; `4(sqrt(M)-2)` per constellation.
    Side,
    /// Neither extreme; `(sqrt(M)-2)^2` per constellation.
    Inner,
}

/// Error strings of one label: XOR differences to its nearest (distance
/// `2d`) and next-nearest (distance `2*sqrt(2)*d`) neighbors. Gray labeling
/// makes every `e1` element weight 1 and every `e2` element weight 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighborhood {
    pub e1: Vec<u16>,
    pub e2: Vec<u16>,
}

/// A Gray-labeled square M-QAM constellation with unit average energy.
#[derive(Debug, Clone)]
pub struct Constellation<S: Scalar> {
    m: u32,
    side: u32,
    bits: u32,
    d: S,
    points: Vec<Complex<S>>,
    axis_idx: Vec<(u32, u32)>,
    classes: Vec<PointClass>,
    neighbors1: Vec<Vec<u16>>,
    neighbors2: Vec<Vec<u16>>,
    strings: Vec<Neighborhood>,
    /// `grid[q_idx * side + i_idx]` = label at that coordinate pair.
    grid: Vec<u16>,
}

impl<S: Scalar> Constellation<S> {
    /// Builds the interleaved-Gray grid for a square constellation.
    pub fn gray_qam(m: u32) -> Result<Self, ModulationError> {
        if m < 4 || !m.is_power_of_two() || !m.trailing_zeros().is_multiple_of(2) || m > 1 << 16 {
            return Err(ModulationError::InvalidSize(m));
        }
        let bits = m.trailing_zeros();
        let half_bits = bits / 2;
        let side = 1u32 << half_bits;
        let d = S::of((3.0 / (2.0 * (m as f64 - 1.0))).sqrt());

        // Reflected-binary Gray sequence rotated so `10..0` maps to index 0.
        let axis_word = |idx: u32| -> u32 {
            if idx == 0 {
                1 << (half_bits - 1)
            } else {
                (idx - 1) ^ ((idx - 1) >> 1)
            }
        };

        let mut grid = vec![0u16; (side * side) as usize];
        let mut points = vec![Complex::new(S::zero(), S::zero()); m as usize];
        let mut axis_idx = vec![(0u32, 0u32); m as usize];
        for q_idx in 0..side {
            for i_idx in 0..side {
                let iw = axis_word(i_idx);
                let qw = axis_word(q_idx);
                // Interleave: b1 from the I word, b2 from the Q word, ...
                let mut label = 0u16;
                for j in 0..half_bits {
                    let ib = (iw >> (half_bits - 1 - j)) & 1;
                    let qb = (qw >> (half_bits - 1 - j)) & 1;
                    label |= (ib as u16) << (bits - 1 - 2 * j);
                    label |= (qb as u16) << (bits - 2 - 2 * j);
                }
                grid[(q_idx * side + i_idx) as usize] = label;
                let coord = |idx: u32| S::of(2.0 * idx as f64 - (side as f64 - 1.0)) * d;
                points[label as usize] = Complex::new(coord(i_idx), coord(q_idx));
                axis_idx[label as usize] = (i_idx, q_idx);
            }
        }

        let mut classes = Vec::with_capacity(m as usize);
        let mut neighbors1 = Vec::with_capacity(m as usize);
        let mut neighbors2 = Vec::with_capacity(m as usize);
        let mut strings = Vec::with_capacity(m as usize);
        let at = |i: i64, q: i64| grid[(q as u32 * side + i as u32) as usize];
        for label in 0..m as u16 {
            let (i_idx, q_idx) = axis_idx[label as usize];
            let (i, q) = (i_idx as i64, q_idx as i64);
            let extreme = |idx: i64| -> bool { idx == 0 || idx == side as i64 - 1 };
            classes.push(match (extreme(i), extreme(q)) {
                (true, true) => PointClass::Corner,
                (false, false) => PointClass::Inner,
                _ => PointClass::Side,
            });
            let in_grid = |i: i64, q: i64| i >= 0 && i < side as i64 && q >= 0 && q < side as i64;
            let mut n1 = Vec::new();
            for (di, dq) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
                if in_grid(i + di, q + dq) {
                    n1.push(at(i + di, q + dq));
                }
            }
            let mut n2 = Vec::new();
            for (di, dq) in [(-1, -1), (-1, 1), (1, -1), (1, 1)] {
                if in_grid(i + di, q + dq) {
                    n2.push(at(i + di, q + dq));
                }
            }
            n1.sort_unstable();
            n2.sort_unstable();
            let mut e1: Vec<u16> = n1.iter().map(|nb| nb ^ label).collect();
            let mut e2: Vec<u16> = n2.iter().map(|nb| nb ^ label).collect();
            e1.sort_unstable();
            e2.sort_unstable();
            neighbors1.push(n1);
            neighbors2.push(n2);
            strings.push(Neighborhood { e1, e2 });
        }

        Ok(Constellation {
            m,
            side,
            bits,
            d,
            points,
            axis_idx,
            classes,
            neighbors1,
            neighbors2,
            strings,
            grid,
        })
    }

    pub fn size(&self) -> u32 {
        self.m
    }

    pub fn bits_per_symbol(&self) -> u32 {
        self.bits
    }

    pub fn side(&self) -> u32 {
        self.side
    }

    /// Half the minimum distance between points.
    pub fn half_distance(&self) -> S {
        self.d
    }

    fn check_label(&self, label: u16) -> Result<(), ModulationError> {
        if (label as u32) < self.m {
            Ok(())
        } else {
            Err(ModulationError::UnknownLabel(label))
        }
    }

    /// Complex coordinate carrying this label.
    pub fn point(&self, label: u16) -> Complex<S> {
        self.points[label as usize]
    }

    /// Grid coordinate indices `(i, q)` of a label, each in `0..side`,
    /// index 0 at the most negative coordinate.
    pub fn axis_indices(&self, label: u16) -> (u32, u32) {
        self.axis_idx[label as usize]
    }

    /// Label at grid position (`row` 0 is the top / largest Q, `col` 0 is the
    /// leftmost / smallest I).
    pub fn grid_label(&self, row: u32, col: u32) -> u16 {
        assert!(row < self.side && col < self.side);
        self.grid[((self.side - 1 - row) * self.side + col) as usize]
    }

    /// The label's bit string, MSB first.
    pub fn label_string(&self, label: u16) -> String {
        (0..self.bits)
            .map(|j| {
                if (label >> (self.bits - 1 - j)) & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    }

    pub fn classify(&self, label: u16) -> Result<PointClass, ModulationError> {
        self.check_label(label)?;
        Ok(self.classes[label as usize])
    }

    /// Labels at distance `2d` from this one, ascending.
    pub fn neighbors1(&self, label: u16) -> Result<&[u16], ModulationError> {
        self.check_label(label)?;
        Ok(&self.neighbors1[label as usize])
    }

    /// Labels at distance `2*sqrt(2)*d` from this one, ascending.
    pub fn neighbors2(&self, label: u16) -> Result<&[u16], ModulationError> {
        self.check_label(label)?;
        Ok(&self.neighbors2[label as usize])
    }

    /// The error-string sets of this label, each sorted ascending.
    pub fn error_strings(&self, label: u16) -> Result<&Neighborhood, ModulationError> {
        self.check_label(label)?;
        Ok(&self.strings[label as usize])
    }

    #[inline]
    pub(crate) fn error_strings_unchecked(&self, label: u16) -> &Neighborhood {
        &self.strings[label as usize]
    }

    /// Splits a word into consecutive `log2(M)`-bit labels.
    pub fn labels_from_bits(&self, bits: &BitWord) -> Result<Vec<u16>, ModulationError> {
        let b = self.bits as usize;
        if !bits.len().is_multiple_of(b) {
            return Err(ModulationError::BitLength {
                got: bits.len(),
                bits_per_symbol: self.bits,
            });
        }
        Ok((0..bits.len() / b)
            .map(|i| {
                let mut label = 0u16;
                for j in 0..b {
                    if bits.get(i * b + j) {
                        label |= 1 << (b - 1 - j);
                    }
                }
                label
            })
            .collect())
    }

    /// Concatenates labels back into a word.
    pub fn bits_from_labels(&self, labels: &[u16]) -> BitWord {
        let b = self.bits as usize;
        BitWord::from_fn(labels.len() * b, |i| {
            (labels[i / b] >> (b - 1 - i % b)) & 1 == 1
        })
    }

    /// Maps a word onto complex symbols, one per `log2(M)` bits.
    pub fn map_bits(&self, bits: &BitWord) -> Result<Vec<Complex<S>>, ModulationError> {
        Ok(self
            .labels_from_bits(bits)?
            .iter()
            .map(|&l| self.point(l))
            .collect())
    }

    /// Demaps exact constellation points back to their bit string. Inputs
    /// that are not (numerically) on a constellation point violate the
    /// contract: quantize first.
    pub fn demap(&self, symbols: &[Complex<S>]) -> Result<BitWord, ModulationError> {
        let tol = self.d * S::of(1e-6);
        let mut labels = Vec::with_capacity(symbols.len());
        for z in symbols {
            let label = self.quantize(*z, S::one());
            if (*z - self.point(label)).norm() > tol {
                return Err(ModulationError::NotAConstellationPoint);
            }
            labels.push(label);
        }
        Ok(self.bits_from_labels(&labels))
    }

    /// Hard decision: the label of the point nearest to `z / scale`.
    /// Exact ties resolve to the lexicographically smallest label.
    pub fn quantize(&self, z: Complex<S>, scale: S) -> u16 {
        assert!(scale > S::zero(), "scale must be positive");
        let z = z / scale;
        let (i_cands, ni) = self.axis_candidates(z.re);
        let (q_cands, nq) = self.axis_candidates(z.im);
        let mut best: Option<(S, u16)> = None;
        for &i_idx in &i_cands[..ni] {
            for &q_idx in &q_cands[..nq] {
                let label = self.grid[(q_idx * self.side + i_idx) as usize];
                let dist = (z - self.point(label)).norm_sqr();
                let better = match best {
                    None => true,
                    Some((bd, bl)) => dist < bd || (dist == bd && label < bl),
                };
                if better {
                    best = Some((dist, label));
                }
            }
        }
        best.expect("candidate set nonempty").1
    }

    /// Nearest one or two coordinate indices along one axis (two when the
    /// value sits between grid points, so exact midpoints tie-break on the
    /// full label).
    fn axis_candidates(&self, v: S) -> ([u32; 2], usize) {
        let last = self.side - 1;
        let u = (v / self.d + S::of(last as f64)) / S::of(2.0);
        let lo = u.floor();
        let lo_idx = if lo < S::zero() {
            0
        } else if lo > S::of(last as f64) {
            last
        } else {
            lo.to_u32().unwrap_or(last).min(last)
        };
        let hi_idx = (lo_idx + 1).min(last);
        if hi_idx == lo_idx {
            ([lo_idx, lo_idx], 1)
        } else {
            ([lo_idx, hi_idx], 2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qam16() -> Constellation<f64> {
        Constellation::gray_qam(16).unwrap()
    }

    fn parse_label(c: &Constellation<f64>, s: &str) -> u16 {
        assert_eq!(s.len() as u32, c.bits_per_symbol());
        u16::from_str_radix(s, 2).unwrap()
    }

    #[test]
    fn rejects_non_square_sizes() {
        for m in [2u32, 8, 32, 128, 3, 5] {
            assert!(Constellation::<f64>::gray_qam(m).is_err());
        }
    }

    #[test]
    fn sixteen_qam_grid_layout() {
        let c = qam16();
        let expected = [
            ["1101", "0101", "0111", "1111"],
            ["1001", "0001", "0011", "1011"],
            ["1000", "0000", "0010", "1010"],
            ["1100", "0100", "0110", "1110"],
        ];
        for (r, row) in expected.iter().enumerate() {
            for (col, lbl) in row.iter().enumerate() {
                assert_eq!(
                    c.label_string(c.grid_label(r as u32, col as u32)),
                    *lbl,
                    "grid mismatch at row {r} col {col}"
                );
            }
        }
    }

    #[test]
    fn half_distance_value() {
        let c = qam16();
        assert!((c.half_distance() - (3.0f64 / 30.0).sqrt()).abs() < 1e-15);
        assert!((c.half_distance() - 0.316228).abs() < 1e-6);
    }

    #[test]
    fn unit_average_energy() {
        for m in [4u32, 16, 64, 256] {
            let c = Constellation::<f64>::gray_qam(m).unwrap();
            let total: f64 = (0..m as u16).map(|l| c.point(l).norm_sqr()).sum();
            assert!(
                (total / m as f64 - 1.0).abs() < 1e-12,
                "average energy off for M = {m}"
            );
        }
    }

    #[test]
    fn gray_property_all_sizes() {
        // Any two labels at distance 2d along one axis differ in one bit.
        for m in [4u32, 16, 64, 256] {
            let c = Constellation::<f64>::gray_qam(m).unwrap();
            for label in 0..m as u16 {
                for &nb in c.neighbors1(label).unwrap() {
                    assert_eq!((label ^ nb).count_ones(), 1, "M={m} {label:b}~{nb:b}");
                }
                for &nb in c.neighbors2(label).unwrap() {
                    assert_eq!((label ^ nb).count_ones(), 2, "M={m} {label:b}~{nb:b}");
                }
            }
        }
    }

    #[test]
    fn bottom_right_quadrant_neighborhoods() {
        // Bottom-right quadrant neighborhoods of the 16-QAM grid.
        let c = qam16();
        let cases: [(&str, &[&str], &[&str]); 4] = [
            ("1110", &["1010", "0110"], &["0010"]),
            ("1010", &["1011", "1110", "0010"], &["0011", "0110"]),
            ("0110", &["0010", "1110", "0100"], &["0000", "1010"]),
            (
                "0010",
                &["0000", "1010", "0011", "0110"],
                &["0001", "0100", "1011", "1110"],
            ),
        ];
        for (label, n1, n2) in cases {
            let l = parse_label(&c, label);
            let mut expect1: Vec<u16> = n1.iter().map(|s| parse_label(&c, s)).collect();
            let mut expect2: Vec<u16> = n2.iter().map(|s| parse_label(&c, s)).collect();
            expect1.sort_unstable();
            expect2.sort_unstable();
            assert_eq!(c.neighbors1(l).unwrap(), &expect1[..], "N1({label})");
            assert_eq!(c.neighbors2(l).unwrap(), &expect2[..], "N2({label})");
        }
    }

    #[test]
    fn error_strings_of_1101() {
        let c = qam16();
        let l = parse_label(&c, "1101");
        let nb = c.error_strings(l).unwrap();
        let mut e1: Vec<u16> = vec![parse_label(&c, "1000"), parse_label(&c, "0100")];
        e1.sort_unstable();
        assert_eq!(nb.e1, e1);
        assert_eq!(nb.e2, vec![parse_label(&c, "1100")]);
    }

    #[test]
    fn point_classes_and_cardinalities() {
        let c = qam16();
        assert_eq!(
            c.classify(parse_label(&c, "1110")).unwrap(),
            PointClass::Corner
        );
        assert_eq!(
            c.classify(parse_label(&c, "0010")).unwrap(),
            PointClass::Inner
        );
        for m in [4u32, 16, 64, 256] {
            let c = Constellation::<f64>::gray_qam(m).unwrap();
            let side = c.side();
            let mut counts = [0u32; 3];
            for label in 0..m as u16 {
                let class = c.classify(label).unwrap();
                let idx = match class {
                    PointClass::Corner => 0,
                    PointClass::Side => 1,
                    PointClass::Inner => 2,
                };
                counts[idx] += 1;
                let nb = c.error_strings(label).unwrap();
                let expect = match class {
                    PointClass::Corner => (2, 1),
                    PointClass::Side => (3, 2),
                    PointClass::Inner => (4, 4),
                };
                assert_eq!((nb.e1.len(), nb.e2.len()), expect, "M={m} label={label:b}");
            }
            assert_eq!(counts[0], 4);
            assert_eq!(counts[1], 4 * (side - 2));
            assert_eq!(counts[2], (side - 2) * (side - 2));
        }
    }

    #[test]
    fn qpsk_is_all_corners() {
        let c = Constellation::<f64>::gray_qam(4).unwrap();
        for label in 0..4u16 {
            assert_eq!(c.classify(label).unwrap(), PointClass::Corner);
            for &nb in c.neighbors1(label).unwrap() {
                assert_eq!((label ^ nb).count_ones(), 1);
            }
        }
    }

    #[test]
    fn adjacency_pairs_counted_twice() {
        // The union over labels of {label ^ e : e in E1} re-lists every
        // 2d-adjacent pair from both ends.
        let c = qam16();
        let mut pairs = std::collections::HashMap::new();
        for label in 0..16u16 {
            for &e in &c.error_strings(label).unwrap().e1 {
                let key = (label.min(label ^ e), label.max(label ^ e));
                *pairs.entry(key).or_insert(0u32) += 1;
            }
        }
        // 2 * side * (side-1) adjacent pairs on a 4x4 grid = 24.
        assert_eq!(pairs.len(), 24);
        assert!(pairs.values().all(|&count| count == 2));
    }

    #[test]
    fn map_demap_symbol_counts() {
        let c16 = qam16();
        let w = BitWord::zeros(128);
        assert_eq!(c16.map_bits(&w).unwrap().len(), 32);
        let c64 = Constellation::<f64>::gray_qam(64).unwrap();
        let w = BitWord::zeros(132);
        assert_eq!(c64.map_bits(&w).unwrap().len(), 22);
        assert!(c64.map_bits(&BitWord::zeros(131)).is_err());
    }

    #[test]
    fn single_symbol_demap() {
        let c = qam16();
        let l = parse_label(&c, "1101");
        let bits = c.demap(&[c.point(l)]).unwrap();
        assert_eq!(bits.to_string(), "1101");
        assert!(c
            .demap(&[c.point(l) + num_complex::Complex::new(0.1, 0.0)])
            .is_err());
    }

    #[test]
    fn quantize_on_point_and_midpoint() {
        let c = qam16();
        for label in 0..16u16 {
            assert_eq!(c.quantize(c.point(label), 1.0), label);
        }
        // Midpoint between horizontally adjacent points: lexicographically
        // smaller label wins.
        let a = parse_label(&c, "0000");
        let b = parse_label(&c, "0010");
        let mid = (c.point(a) + c.point(b)) / 2.0;
        assert_eq!(c.quantize(mid, 1.0), a.min(b));
    }

    #[test]
    fn quantize_clamps_outside_grid() {
        let c = qam16();
        let far = num_complex::Complex::new(10.0, -10.0);
        let label = c.quantize(far, 1.0);
        // Bottom-right corner of the grid.
        assert_eq!(c.label_string(label), "1110");
    }

    proptest! {
        #[test]
        fn map_then_demap_roundtrip(bits in proptest::collection::vec(any::<bool>(), 0..20)) {
            for m in [4u32, 16, 64] {
                let c = Constellation::<f64>::gray_qam(m).unwrap();
                let b = c.bits_per_symbol() as usize;
                let len = (bits.len() / b) * b;
                let w = BitWord::from_bools(&bits[..len]);
                let symbols = c.map_bits(&w).unwrap();
                prop_assert_eq!(c.demap(&symbols).unwrap(), w);
            }
        }

        #[test]
        fn quantize_within_decision_region(label in 0u16..16, dre in -0.9f64..0.9, dim in -0.9f64..0.9) {
            // Perturbations below d along each axis stay in the cell.
            let c = Constellation::<f64>::gray_qam(16).unwrap();
            let d = c.half_distance();
            let z = c.point(label) + num_complex::Complex::new(dre * d, dim * d);
            prop_assert_eq!(c.quantize(z, 1.0), label);
        }

        #[test]
        fn quantize_respects_scale(label in 0u16..64, scale in 0.01f64..100.0) {
            let c = Constellation::<f64>::gray_qam(64).unwrap();
            let z = c.point(label) * scale;
            prop_assert_eq!(c.quantize(z, scale), label);
        }
    }
}
