//! Successive decomposition of nonstationary signals into narrowband AM-FM
//! modes, a piecewise-constant jump component, and a residual.
//!
//! One mode is extracted at a time by an inner ADMM loop that alternates
//! spectral updates (mode, center frequency, residual) with an exact
//! time-domain solve for the jump component, run under a doubling bandwidth
//! schedule. Extraction stops on its own when mode energies stop growing,
//! so the number of modes never has to be chosen up front. The multivariate
//! variant couples channels through one shared center frequency per mode.

pub mod jump;
pub mod metrics;
pub mod signal;
pub mod solver;
pub mod spectral;
pub mod synth;

pub use signal::{MultichannelSignal, Signal, SolverConfig};
pub use solver::{decompose, decompose_multivariate, DecompositionResult};
