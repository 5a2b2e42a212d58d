//! Synthetic benchmark generators with exact ground truth for scoring.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::signal::{MultichannelSignal, Signal};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("invalid jump spec: {0}")]
    InvalidBreakpoints(String),
}

/// Piecewise-constant jump description on the unit interval: a starting
/// level and (time, level) breakpoints with strictly increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpSpec {
    pub start_level: f64,
    pub breakpoints: Vec<(f64, f64)>,
}

impl JumpSpec {
    /// Unit-height pulse on [0.3, 0.7).
    pub fn unit_pulse() -> Self {
        Self {
            start_level: 0.0,
            breakpoints: vec![(0.3, 1.0), (0.7, 0.0)],
        }
    }

    pub fn constant(level: f64) -> Self {
        Self {
            start_level: level,
            breakpoints: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        if !self.start_level.is_finite() {
            return Err(SynthError::InvalidBreakpoints(
                "start level must be finite".into(),
            ));
        }
        let mut prev = 0.0;
        for &(t, level) in &self.breakpoints {
            if !t.is_finite() || !level.is_finite() {
                return Err(SynthError::InvalidBreakpoints(
                    "breakpoint values must be finite".into(),
                ));
            }
            if t <= prev || t >= 1.0 {
                return Err(SynthError::InvalidBreakpoints(format!(
                    "times must be strictly increasing within (0, 1), got {t} after {prev}"
                )));
            }
            prev = t;
        }
        Ok(())
    }
}

impl Default for JumpSpec {
    fn default() -> Self {
        Self::unit_pulse()
    }
}

/// Samples the piecewise-constant jump at t = i/T for i = 0..T-1.
pub fn gen_jump(spec: &JumpSpec, t_samples: usize) -> Result<Signal, SynthError> {
    spec.validate()?;
    let mut samples = Vec::with_capacity(t_samples);
    let mut next_bp = 0;
    let mut level = spec.start_level;
    for i in 0..t_samples {
        let t = i as f64 / t_samples as f64;
        while next_bp < spec.breakpoints.len() && t >= spec.breakpoints[next_bp].0 {
            level = spec.breakpoints[next_bp].1;
            next_bp += 1;
        }
        samples.push(level);
    }
    Ok(Signal::new(samples, t_samples as f64))
}

/// Ground-truth components of the three-channel benchmark signal.
#[derive(Debug, Clone)]
pub struct BenchmarkTruth {
    /// cos(2 pi 2 t), present in every channel.
    pub low_tone: Signal,
    /// 0.5 cos(2 pi 40 t), present in channels 1 and 2.
    pub high_tone: Signal,
    /// The jump, present in channels 1 and 3.
    pub jump: Signal,
    /// Noise-free channels; exact component sums.
    pub noiseless: MultichannelSignal,
}

/// Three-channel benchmark on t in [0, 1): a 2 Hz unit tone everywhere, a
/// half-amplitude 40 Hz tone in channels 1-2, the jump in channels 1 and 3,
/// and independent white Gaussian noise (standard deviation `sigma`) in all
/// channels, drawn channel-by-channel from one seeded generator.
pub fn gen_benchmark(
    t_samples: usize,
    sigma: f64,
    jump: &JumpSpec,
    seed: u64,
) -> Result<(MultichannelSignal, BenchmarkTruth), SynthError> {
    assert!(t_samples >= 100, "benchmark needs at least 100 samples");
    assert!(sigma >= 0.0 && sigma.is_finite());
    let fs = t_samples as f64;
    let jump_sig = gen_jump(jump, t_samples)?;

    let tone = |hz: f64, amp: f64| -> Vec<f64> {
        (0..t_samples)
            .map(|i| amp * (std::f64::consts::TAU * hz * i as f64 / fs).cos())
            .collect()
    };
    let low = tone(2.0, 1.0);
    let high = tone(40.0, 0.5);

    let add = |parts: &[&[f64]]| -> Vec<f64> {
        (0..t_samples)
            .map(|i| parts.iter().map(|p| p[i]).sum())
            .collect()
    };
    let clean = [
        add(&[&low, &high, &jump_sig.samples]),
        add(&[&low, &high]),
        add(&[&low, &jump_sig.samples]),
    ];

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma).expect("sigma is a valid standard deviation");
    let noisy: Vec<Vec<f64>> = clean
        .iter()
        .map(|ch| ch.iter().map(|&x| x + normal.sample(&mut rng)).collect())
        .collect();

    Ok((
        MultichannelSignal::from_samples(noisy, fs),
        BenchmarkTruth {
            low_tone: Signal::new(low, fs),
            high_tone: Signal::new(high, fs),
            jump: jump_sig,
            noiseless: MultichannelSignal::from_samples(clean.to_vec(), fs),
        },
    ))
}
