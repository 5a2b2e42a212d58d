//! Signal containers, solver configuration, and the mirror extension used to
//! suppress boundary artifacts in the spectral updates.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Minimum number of samples the decomposition accepts.
pub const MIN_SIGNAL_LEN: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SignalError {
    #[error("signal contains a non-finite sample")]
    NonFinite,
    #[error("signal has {len} samples, need at least {min}")]
    TooShort { len: usize, min: usize },
    #[error("channel lengths differ: {first} vs {other}")]
    ChannelMismatch { first: usize, other: usize },
    #[error("channel sample rates differ")]
    SampleRateMismatch,
    #[error("sample rate must be positive and finite")]
    InvalidSampleRate,
    #[error("signal has no channels")]
    NoChannels,
    #[error("extended length {extended} does not match twice the original length {original}")]
    LengthMismatch { extended: usize, original: usize },
}

/// A uniformly sampled real-valued time series.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub samples: Vec<f64>,
    /// Samples per second.
    pub sample_rate: f64,
}

impl Signal {
    pub fn new(samples: Vec<f64>, sample_rate: f64) -> Self {
        Self {
            samples,
            sample_rate,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Channels of identical length and rate treated as one multivariate signal.
#[derive(Debug, Clone, PartialEq)]
pub struct MultichannelSignal {
    pub channels: Vec<Signal>,
}

impl MultichannelSignal {
    pub fn new(channels: Vec<Signal>) -> Self {
        Self { channels }
    }

    pub fn single(signal: Signal) -> Self {
        Self {
            channels: vec![signal],
        }
    }

    /// Builds channels that all share one sample rate.
    pub fn from_samples(channels: Vec<Vec<f64>>, sample_rate: f64) -> Self {
        Self {
            channels: channels
                .into_iter()
                .map(|s| Signal::new(s, sample_rate))
                .collect(),
        }
    }

    pub fn num_channels(&self) -> usize {
        self.channels.len()
    }

    /// Samples per channel (0 when there are no channels).
    pub fn len(&self) -> usize {
        self.channels.first().map_or(0, Signal::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sample_rate(&self) -> f64 {
        self.channels.first().map_or(0.0, |c| c.sample_rate)
    }
}

/// Checks the solver's input invariants: at least one channel, equal lengths
/// and rates, at least [`MIN_SIGNAL_LEN`] samples, and no NaN/infinity.
pub fn validate(signal: &MultichannelSignal) -> Result<(), SignalError> {
    let first = signal.channels.first().ok_or(SignalError::NoChannels)?;
    let len = first.len();
    let rate = first.sample_rate;
    for ch in &signal.channels {
        if ch.len() != len {
            return Err(SignalError::ChannelMismatch {
                first: len,
                other: ch.len(),
            });
        }
        if ch.sample_rate != rate {
            return Err(SignalError::SampleRateMismatch);
        }
    }
    if len < MIN_SIGNAL_LEN {
        return Err(SignalError::TooShort {
            len,
            min: MIN_SIGNAL_LEN,
        });
    }
    if !rate.is_finite() || rate <= 0.0 {
        return Err(SignalError::InvalidSampleRate);
    }
    for ch in &signal.channels {
        if ch.samples.iter().any(|x| !x.is_finite()) {
            return Err(SignalError::NonFinite);
        }
    }
    Ok(())
}

/// Extends a signal to length 2N by reflecting half of it at each end.
/// Odd lengths reflect the first ceil(N/2) and last floor(N/2) samples.
pub fn mirror_extend_samples(samples: &[f64]) -> Vec<f64> {
    let n = samples.len();
    assert!(n >= 2, "mirror extension needs at least 2 samples");
    let head = n.div_ceil(2);
    let tail = n / 2;
    let mut out = Vec::with_capacity(2 * n);
    out.extend(samples[..head].iter().rev());
    out.extend_from_slice(samples);
    out.extend(samples[n - tail..].iter().rev());
    out
}

pub fn mirror_extend(signal: &Signal) -> Signal {
    Signal::new(mirror_extend_samples(&signal.samples), signal.sample_rate)
}

/// Recovers the central `original_length` samples of a mirror-extended signal.
pub fn crop_samples(extended: &[f64], original_length: usize) -> Result<Vec<f64>, SignalError> {
    if extended.len() != 2 * original_length {
        return Err(SignalError::LengthMismatch {
            extended: extended.len(),
            original: original_length,
        });
    }
    let start = original_length.div_ceil(2);
    Ok(extended[start..start + original_length].to_vec())
}

pub fn crop(extended: &Signal, original_length: usize) -> Result<Signal, SignalError> {
    Ok(Signal::new(
        crop_samples(&extended.samples, original_length)?,
        extended.sample_rate,
    ))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("tau must be greater than 1, got {0}")]
    TauNotGreaterThanOne(f64),
    #[error("{name} must be at least 1")]
    ZeroCount { name: &'static str },
    #[error("derived parameter {name} is not finite")]
    DerivedNotFinite { name: &'static str },
}

/// All user parameters of the solver.
///
/// The stage schedule doubles the bandwidth weight from `alpha_init` up to
/// `alpha_max`; values of `alpha_max` in the range 1e3 to 1e5 work well for
/// most signals. `beta` weighs the jump penalty and is best set to roughly
/// one over the expected number of jumps. `b_bar` is the smallest step
/// height (in signal units) that should count as a jump, and `tau > 1`
/// scales the splitting penalty so the scalar shrink problems stay strongly
/// convex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Largest bandwidth weight the stage schedule reaches.
    pub alpha_max: f64,
    /// Bandwidth weight of the first stage.
    pub alpha_init: f64,
    /// Jump regularization weight.
    pub beta: f64,
    /// Minimal jump height, in signal units.
    pub b_bar: f64,
    /// Splitting penalty factor, strictly greater than one.
    pub tau: f64,
    /// Relative-change tolerance of the inner loop.
    pub eps: f64,
    /// Mode-energy tolerance of the outer extraction loop.
    pub eps_mode: f64,
    /// Iteration cap for one inner stage.
    pub max_inner_iters: usize,
    /// Hard cap on the number of extracted modes.
    pub max_modes: usize,
    /// When false, the jump component is pinned to zero.
    pub jump_enabled: bool,
    /// Carry the center frequency from one alpha stage to the next.
    pub warm_start_omega: bool,
}

impl SolverConfig {
    /// Config with the documented defaults for everything but the two
    /// signal-dependent weights.
    pub fn new(alpha_max: f64, beta: f64) -> Self {
        Self {
            alpha_max,
            alpha_init: 10.0,
            beta,
            b_bar: 0.3,
            tau: 50.0,
            eps: 1e-7,
            eps_mode: 1e-7,
            max_inner_iters: 500,
            max_modes: 30,
            jump_enabled: true,
            warm_start_omega: true,
        }
    }

    /// Non-convexity parameter of the jump penalty, 2 / b_bar^2.
    pub fn b(&self) -> f64 {
        2.0 / (self.b_bar * self.b_bar)
    }

    /// Splitting penalty scalar, tau * b * beta.
    pub fn gamma(&self) -> f64 {
        self.tau * self.b() * self.beta
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let positive = [
            ("alpha_max", self.alpha_max),
            ("alpha_init", self.alpha_init),
            ("beta", self.beta),
            ("b_bar", self.b_bar),
            ("eps", self.eps),
            ("eps_mode", self.eps_mode),
        ];
        for (name, value) in positive {
            if !value.is_finite() || value <= 0.0 {
                return Err(ConfigError::NonPositive { name, value });
            }
        }
        if !self.tau.is_finite() || self.tau <= 1.0 {
            return Err(ConfigError::TauNotGreaterThanOne(self.tau));
        }
        if self.max_inner_iters == 0 {
            return Err(ConfigError::ZeroCount {
                name: "max_inner_iters",
            });
        }
        if self.max_modes == 0 {
            return Err(ConfigError::ZeroCount { name: "max_modes" });
        }
        if !self.b().is_finite() || self.b() <= 0.0 {
            return Err(ConfigError::DerivedNotFinite { name: "b" });
        }
        if !self.gamma().is_finite() {
            return Err(ConfigError::DerivedNotFinite { name: "gamma" });
        }
        Ok(())
    }
}
