//! Rayleigh MIMO channel sampling, the transmit model, zero-forcing
//! detection with per-stream post-processing gains, and the perfect
//! channel-hardening (PCH) reference channel.
//!
//! The channel matrix is `N_R x N_T` (tall) with i.i.d. `CN(0,1)` entries, so
//! `H x` is well-formed for an `N_T`-vector of symbols. The received signal
//! is `sqrt(snr / N_T) * H * x + n` with unit-variance complex noise.

use crate::linalg::{CMat, LinalgError};
use crate::scalar::Scalar;
use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChannelError {
    #[error("invalid antenna counts: N_T = {n_t}, N_R = {n_r} (need N_R >= N_T >= 1)")]
    BadDimensions { n_t: usize, n_r: usize },
    #[error("vector length {got} does not match expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("Gram matrix numerically singular; resample the channel")]
    SingularGram,
}

/// One standard normal draw, taken in `f64` and narrowed, so every scalar
/// type consumes the RNG stream identically.
#[inline]
pub(crate) fn standard_normal<S: Scalar, R: Rng + ?Sized>(rng: &mut R) -> S {
    let v: f64 = rng.sample(StandardNormal);
    S::of(v)
}

/// `CN(0, 1)` draw: each real dimension has variance 1/2.
#[inline]
pub(crate) fn complex_normal<S: Scalar, R: Rng + ?Sized>(rng: &mut R) -> Complex<S> {
    let half = S::of(0.5).sqrt();
    Complex::new(
        standard_normal::<S, R>(rng) * half,
        standard_normal::<S, R>(rng) * half,
    )
}

/// A vector of i.i.d. `CN(0, 1)` samples: the receiver noise model.
pub fn sample_cn01<S: Scalar, R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<Complex<S>> {
    (0..len).map(|_| complex_normal::<S, R>(rng)).collect()
}

/// One draw of the `N_R x N_T` fading matrix.
#[derive(Debug, Clone)]
pub struct ChannelRealization<S: Scalar> {
    h: CMat<S>,
    n_t: usize,
    n_r: usize,
}

impl<S: Scalar> ChannelRealization<S> {
    /// Samples entries i.i.d. `CN(0,1)`, row-major.
    pub fn sample<R: Rng + ?Sized>(
        n_t: usize,
        n_r: usize,
        rng: &mut R,
    ) -> Result<Self, ChannelError> {
        if n_t == 0 || n_r < n_t {
            return Err(ChannelError::BadDimensions { n_t, n_r });
        }
        let mut data = Vec::with_capacity(n_r * n_t);
        for _ in 0..n_r * n_t {
            data.push(complex_normal::<S, R>(rng));
        }
        let mut idx = 0;
        let h = CMat::from_fn(n_r, n_t, |_, _| {
            let v = data[idx];
            idx += 1;
            v
        });
        Ok(ChannelRealization { h, n_t, n_r })
    }

    /// Wraps an explicit matrix (tests and deterministic stubs).
    pub fn from_matrix(h: CMat<S>) -> Result<Self, ChannelError> {
        let (n_r, n_t) = (h.rows(), h.cols());
        if n_t == 0 || n_r < n_t {
            return Err(ChannelError::BadDimensions { n_t, n_r });
        }
        Ok(ChannelRealization { h, n_t, n_r })
    }

    pub fn matrix(&self) -> &CMat<S> {
        &self.h
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    /// `sqrt(snr / N_T) * H * x + n`, noise i.i.d. `CN(0,1)`.
    pub fn transmit<R: Rng + ?Sized>(
        &self,
        x: &[Complex<S>],
        snr: S,
        rng: &mut R,
    ) -> Result<Vec<Complex<S>>, ChannelError> {
        let mut y = self.transmit_noiseless(x, snr)?;
        for v in &mut y {
            *v = *v + complex_normal::<S, R>(rng);
        }
        Ok(y)
    }

    /// The zero-noise limit of [`Self::transmit`], for diagnostics.
    pub fn transmit_noiseless(
        &self,
        x: &[Complex<S>],
        snr: S,
    ) -> Result<Vec<Complex<S>>, ChannelError> {
        if x.len() != self.n_t {
            return Err(ChannelError::LengthMismatch {
                expected: self.n_t,
                got: x.len(),
            });
        }
        let amp = (snr / S::of(self.n_t as f64)).sqrt();
        Ok(self.h.mul_vec(x).into_iter().map(|v| v * amp).collect())
    }
}

/// Zero-forcing detector: pseudo-inverse, Gram matrix, and the per-stream
/// SNR gains `g_i = 1 / [G^-1]_ii` that drive antenna sorting.
#[derive(Debug, Clone)]
pub struct ZfDetector<S: Scalar> {
    pinv: CMat<S>,
    gram: CMat<S>,
    gram_inv: CMat<S>,
    gains: Vec<S>,
}

impl<S: Scalar> ZfDetector<S> {
    pub fn from_channel(ch: &ChannelRealization<S>) -> Result<Self, ChannelError> {
        let gram = ch.h.gram();
        let gram_inv = match gram.inverse() {
            Ok(m) => m,
            Err(LinalgError::Singular) => return Err(ChannelError::SingularGram),
            Err(LinalgError::Dimension(d)) => unreachable!("gram is square: {d}"),
        };
        let gains: Vec<S> = (0..ch.n_t)
            .map(|i| S::one() / gram_inv.get(i, i).re)
            .collect();
        // Diagonal of the inverse of a Hermitian positive-definite matrix.
        debug_assert!(gains.iter().all(|g| *g > S::zero()));
        let pinv = gram_inv.matmul(&ch.h.hermitian());
        Ok(ZfDetector {
            pinv,
            gram,
            gram_inv,
            gains,
        })
    }

    /// Moore-Penrose pseudo-inverse `(H^H H)^-1 H^H`.
    pub fn pseudo_inverse(&self) -> &CMat<S> {
        &self.pinv
    }

    pub fn gram(&self) -> &CMat<S> {
        &self.gram
    }

    pub fn gram_inverse(&self) -> &CMat<S> {
        &self.gram_inv
    }

    /// Post-processing SNR multipliers, one per transmit stream.
    pub fn gains(&self) -> &[S] {
        &self.gains
    }

    /// Applies the pseudo-inverse to a received vector.
    pub fn detect(&self, y: &[Complex<S>]) -> Result<Vec<Complex<S>>, ChannelError> {
        if y.len() != self.pinv.cols() {
            return Err(ChannelError::LengthMismatch {
                expected: self.pinv.cols(),
                got: y.len(),
            });
        }
        Ok(self.pinv.mul_vec(y))
    }

    /// Autocorrelation of the filtered noise: `sigma^2 * G^-1`.
    pub fn noise_autocorrelation(&self, sigma2: S) -> CMat<S> {
        CMat::from_fn(self.gram_inv.rows(), self.gram_inv.cols(), |r, c| {
            self.gram_inv.get(r, c) * sigma2
        })
    }
}

/// Post-processing gains straight from a realization (builds the detector).
pub fn post_processing_gains<S: Scalar>(
    ch: &ChannelRealization<S>,
) -> Result<Vec<S>, ChannelError> {
    Ok(ZfDetector::from_channel(ch)?.gains().to_vec())
}

/// The equivalent channel when the Gram matrix has hardened to `N_R * I`.
///
/// With `array_gain` on this is the literal hardened model,
/// `sqrt(snr / N_T) * x + u` with `u_i ~ CN(0, 1/N_R)` (per-stream SNR
/// `snr * N_R / N_T`). With `array_gain` off each stream sees per-symbol SNR
/// exactly `snr`: `sqrt(snr) * x + n` with `n_i ~ CN(0,1)`, the convention
/// under which `d' = sqrt(3 snr / (M-1))`.
pub fn pch_transmit<S: Scalar, R: Rng + ?Sized>(
    n_t: usize,
    n_r: usize,
    x: &[Complex<S>],
    snr: S,
    array_gain: bool,
    rng: &mut R,
) -> Result<Vec<Complex<S>>, ChannelError> {
    if n_t == 0 || n_r < n_t {
        return Err(ChannelError::BadDimensions { n_t, n_r });
    }
    if x.len() != n_t {
        return Err(ChannelError::LengthMismatch {
            expected: n_t,
            got: x.len(),
        });
    }
    let (amp, noise_scale) = if array_gain {
        (
            (snr / S::of(n_t as f64)).sqrt(),
            S::one() / S::of(n_r as f64).sqrt(),
        )
    } else {
        (snr.sqrt(), S::one())
    };
    Ok(x.iter()
        .map(|&s| s * amp + complex_normal::<S, R>(rng) * noise_scale)
        .collect())
}

/// The amplitude that [`pch_transmit`] applies to each symbol; divide it out
/// before quantizing.
pub fn pch_scale<S: Scalar>(n_t: usize, snr: S, array_gain: bool) -> S {
    if array_gain {
        (snr / S::of(n_t as f64)).sqrt()
    } else {
        snr.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn dimension_checks() {
        let mut r = rng(0);
        assert!(ChannelRealization::<f64>::sample(32, 50, &mut r).is_ok());
        assert!(matches!(
            ChannelRealization::<f64>::sample(50, 32, &mut r),
            Err(ChannelError::BadDimensions { .. })
        ));
        assert!(matches!(
            ChannelRealization::<f64>::sample(0, 4, &mut r),
            Err(ChannelError::BadDimensions { .. })
        ));
    }

    #[test]
    fn entry_variance_near_unit() {
        let mut r = rng(1);
        let mut sum = 0.0;
        let mut count = 0usize;
        for _ in 0..100 {
            let ch = ChannelRealization::<f64>::sample(10, 100, &mut r).unwrap();
            for row in 0..100 {
                for col in 0..10 {
                    sum += ch.matrix().get(row, col).norm_sqr();
                    count += 1;
                }
            }
        }
        let var = sum / count as f64;
        assert!((0.99..=1.01).contains(&var), "per-entry variance {var}");
    }

    #[test]
    fn noiseless_transmit_then_detect_recovers_scaled_input() {
        let mut r = rng(2);
        let ch = ChannelRealization::<f64>::sample(4, 12, &mut r).unwrap();
        let det = ZfDetector::from_channel(&ch).unwrap();
        let x: Vec<Complex64> = (0..4)
            .map(|i| Complex64::new(1.0 - i as f64, 0.5 * i as f64))
            .collect();
        let snr = 10.0;
        let y = ch.transmit_noiseless(&x, snr).unwrap();
        let z = det.detect(&y).unwrap();
        let amp = (snr / 4.0).sqrt();
        for (zi, xi) in z.iter().zip(&x) {
            assert!((zi - xi * amp).norm() < 1e-9);
        }
    }

    #[test]
    fn pseudo_inverse_left_inverts_channel() {
        let mut r = rng(3);
        for _ in 0..20 {
            let ch = ChannelRealization::<f64>::sample(3, 9, &mut r).unwrap();
            let det = ZfDetector::from_channel(&ch).unwrap();
            let prod = det.pseudo_inverse().matmul(ch.matrix());
            for i in 0..3 {
                for j in 0..3 {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((prod.get(i, j) - Complex64::new(expect, 0.0)).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn scalar_channel_detects_by_division() {
        let h = CMat::from_fn(1, 1, |_, _| Complex64::new(0.3, -1.2));
        let ch = ChannelRealization::from_matrix(h).unwrap();
        let det = ZfDetector::from_channel(&ch).unwrap();
        let y = Complex64::new(0.7, 0.4);
        let z = det.detect(&[y]).unwrap();
        assert!((z[0] - y / Complex64::new(0.3, -1.2)).norm() < 1e-12);
    }

    #[test]
    fn orthogonal_columns_give_array_gain() {
        // Orthogonal columns of squared norm N_R: every gain equals N_R.
        let n_r = 6;
        let h = CMat::from_fn(n_r, 2, |r, c| {
            // Two orthogonal +-1 columns.
            let sign = if c == 1 && r >= 3 { -1.0 } else { 1.0 };
            Complex64::new(sign, 0.0)
        });
        let ch = ChannelRealization::from_matrix(h).unwrap();
        let det = ZfDetector::from_channel(&ch).unwrap();
        for &g in det.gains() {
            assert!((g - n_r as f64).abs() < 1e-9);
        }
        // R_u = (sigma^2 / N_R) I in this hardened case.
        let r_u = det.noise_autocorrelation(1.0);
        let mut trace = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 / n_r as f64 } else { 0.0 };
                assert!((r_u.get(i, j) - Complex64::new(expect, 0.0)).norm() < 1e-9);
            }
            trace += r_u.get(i, i).re;
        }
        assert!((trace - 1.0 * 2.0 / n_r as f64).abs() < 1e-9);
    }

    #[test]
    fn hand_inverted_gains_stub() {
        let h = CMat::from_fn(2, 2, |r, c| {
            Complex64::new(if r == 0 || c == 1 { 1.0 } else { 0.0 }, 0.0)
        });
        let ch = ChannelRealization::from_matrix(h).unwrap();
        let det = ZfDetector::from_channel(&ch).unwrap();
        assert!((det.gains()[0] - 0.5).abs() < 1e-12);
        assert!((det.gains()[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gains_permute_with_columns() {
        let mut r = rng(4);
        let ch = ChannelRealization::<f64>::sample(3, 8, &mut r).unwrap();
        let gains = post_processing_gains(&ch).unwrap();
        let perm = [2usize, 0, 1];
        let permuted = CMat::from_fn(8, 3, |row, col| ch.matrix().get(row, perm[col]));
        let ch_p = ChannelRealization::from_matrix(permuted).unwrap();
        let gains_p = post_processing_gains(&ch_p).unwrap();
        for (col, &src) in perm.iter().enumerate() {
            assert!((gains_p[col] - gains[src]).abs() < 1e-9);
        }
    }

    #[test]
    fn noise_autocorrelation_is_hermitian() {
        let mut r = rng(5);
        let ch = ChannelRealization::<f64>::sample(4, 10, &mut r).unwrap();
        let det = ZfDetector::from_channel(&ch).unwrap();
        let r_u = det.noise_autocorrelation(1.0);
        for i in 0..4 {
            for j in 0..4 {
                assert!((r_u.get(i, j) - r_u.get(j, i).conj()).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn zero_input_transmit_is_pure_noise() {
        let mut r = rng(6);
        let x = vec![Complex64::new(0.0, 0.0); 4];
        let n = 20_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let y = pch_transmit(4, 16, &x, 8.0, true, &mut r).unwrap();
            sum += y.iter().map(|v| v.norm_sqr()).sum::<f64>();
        }
        let per_entry = sum / (n as f64 * 4.0);
        let expect = 1.0 / 16.0;
        assert!(
            (per_entry - expect).abs() < 0.05 * expect,
            "pch noise variance {per_entry} vs {expect}"
        );
    }

    #[test]
    fn pch_noise_vanishes_with_many_antennas() {
        let mut r = rng(7);
        let x = vec![Complex64::new(0.0, 0.0); 2];
        let y = pch_transmit(2, 1_000_000, &x, 1.0, true, &mut r).unwrap();
        assert!(y.iter().all(|v| v.norm_sqr() < 1e-3));
    }

    #[test]
    fn per_receive_antenna_signal_power_equals_snr() {
        // Each row of H sums N_T unit-variance terms scaled by snr/N_T.
        let mut r = rng(8);
        let snr = 5.0;
        let n_t = 8;
        let x: Vec<Complex64> = (0..n_t).map(|_| complex_normal(&mut r)).collect();
        // Unit-energy symbols in expectation; use many channel draws.
        let mut sum = 0.0;
        let trials = 4000;
        for _ in 0..trials {
            let ch = ChannelRealization::<f64>::sample(n_t, 10, &mut r).unwrap();
            let y = ch.transmit_noiseless(&x, snr).unwrap();
            sum += y.iter().map(|v| v.norm_sqr()).sum::<f64>() / 10.0;
        }
        let mean = sum / trials as f64;
        let expect = snr / n_t as f64 * x.iter().map(|v| v.norm_sqr()).sum::<f64>();
        assert!(
            (mean - expect).abs() < 0.05 * expect,
            "mean rx power {mean} vs {expect}"
        );
    }
}
