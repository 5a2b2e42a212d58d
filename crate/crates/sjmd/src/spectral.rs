//! Fourier-domain machinery: one-sided spectra of real signals and the three
//! spectral update rules of the inner loop.
//!
//! Conventions: unnormalized forward DFT, 1/M inverse, frequencies on the
//! normalized grid nu_n = n / M for n = 0..M/2 (cycles per sample). The
//! normalization cancels in every update ratio.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;
use thiserror::Error;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("spectrum has zero energy, center frequency undefined")]
    ZeroSpectrum,
}

/// One-sided spectrum of a real signal of length `extended_length`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpectrum {
    /// DFT coefficients at bins 0..=M/2.
    pub coefficients: Vec<Complex64>,
    pub extended_length: usize,
}

impl HalfSpectrum {
    pub fn zeros(extended_length: usize) -> Self {
        Self {
            coefficients: vec![Complex64::ZERO; extended_length / 2 + 1],
            extended_length,
        }
    }

    pub fn num_bins(&self) -> usize {
        self.coefficients.len()
    }

    /// Normalized frequency of a bin, in cycles per sample.
    pub fn freq(&self, bin: usize) -> f64 {
        bin as f64 / self.extended_length as f64
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.num_bins()).map(|n| self.freq(n)).collect()
    }

    /// Sum of squared magnitudes over the one-sided grid.
    pub fn energy(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Unnormalized DFT of a real signal, keeping bins 0..=M/2.
pub fn forward_half_spectrum(samples: &[f64]) -> HalfSpectrum {
    let m = samples.len();
    assert!(m >= 2, "spectrum needs at least 2 samples");
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(m).process(&mut buf));
    buf.truncate(m / 2 + 1);
    HalfSpectrum {
        coefficients: buf,
        extended_length: m,
    }
}

/// Hermitian-symmetric completion of the half spectrum followed by the
/// normalized inverse DFT; real parts of the result are returned.
pub fn inverse_real(spectrum: &HalfSpectrum) -> Vec<f64> {
    let m = spectrum.extended_length;
    let mut buf = vec![Complex64::ZERO; m];
    buf[..spectrum.num_bins()].copy_from_slice(&spectrum.coefficients);
    for n in 1..=(m - 1) / 2 {
        buf[m - n] = spectrum.coefficients[n].conj();
    }
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(m).process(&mut buf));
    let scale = 1.0 / m as f64;
    buf.iter().map(|c| c.re * scale).collect()
}

/// Mode update: (s - r - v) / (1 + 2 alpha (nu - omega)^2) per bin.
pub fn update_mode(
    s_hat: &HalfSpectrum,
    r_hat: &HalfSpectrum,
    v_hat: &HalfSpectrum,
    omega: f64,
    alpha: f64,
) -> HalfSpectrum {
    debug_assert_eq!(s_hat.extended_length, r_hat.extended_length);
    debug_assert_eq!(s_hat.extended_length, v_hat.extended_length);
    debug_assert!(alpha > 0.0);
    let m = s_hat.extended_length as f64;
    let coefficients = s_hat
        .coefficients
        .iter()
        .zip(&r_hat.coefficients)
        .zip(&v_hat.coefficients)
        .enumerate()
        .map(|(n, ((s, r), v))| {
            let d = n as f64 / m - omega;
            (s - r - v) / (1.0 + 2.0 * alpha * d * d)
        })
        .collect();
    HalfSpectrum {
        coefficients,
        extended_length: s_hat.extended_length,
    }
}

/// Residual update: a (s - u - v) / (1 + a) per bin, a = alpha^2 (nu - omega)^4.
pub fn update_residual(
    s_hat: &HalfSpectrum,
    u_hat: &HalfSpectrum,
    v_hat: &HalfSpectrum,
    omega: f64,
    alpha: f64,
) -> HalfSpectrum {
    debug_assert_eq!(s_hat.extended_length, u_hat.extended_length);
    debug_assert_eq!(s_hat.extended_length, v_hat.extended_length);
    debug_assert!(alpha > 0.0);
    let m = s_hat.extended_length as f64;
    let coefficients = s_hat
        .coefficients
        .iter()
        .zip(&u_hat.coefficients)
        .zip(&v_hat.coefficients)
        .enumerate()
        .map(|(n, ((s, u), v))| {
            let d = n as f64 / m - omega;
            let a = {
                let q = alpha * d * d;
                q * q
            };
            (s - u - v) * (a / (1.0 + a))
        })
        .collect();
    HalfSpectrum {
        coefficients,
        extended_length: s_hat.extended_length,
    }
}

/// Power-weighted spectral centroid over the one-sided grid.
pub fn update_center_frequency(u_hat: &HalfSpectrum) -> Result<f64, SpectralError> {
    update_center_frequency_coupled(std::slice::from_ref(u_hat))
}

/// Centroid pooled over several channels that share one grid. Sums run in
/// channel-major bin order so the reduction is deterministic.
pub fn update_center_frequency_coupled(u_hats: &[HalfSpectrum]) -> Result<f64, SpectralError> {
    let mut num = 0.0;
    let mut den = 0.0;
    for u in u_hats {
        let m = u.extended_length as f64;
        for (n, c) in u.coefficients.iter().enumerate() {
            let p = c.norm_sqr();
            num += n as f64 / m * p;
            den += p;
        }
    }
    if den == 0.0 {
        Err(SpectralError::ZeroSpectrum)
    } else {
        Ok(num / den)
    }
}
