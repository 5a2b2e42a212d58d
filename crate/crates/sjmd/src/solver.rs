//! Extraction orchestration: the inner ADMM stage, the doubling-alpha
//! schedule, and the outer successive-mode loop shared by the univariate
//! and multivariate solvers.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::jump::{self, JumpSolver, PenaltyParams};
use crate::signal::{self, ConfigError, MultichannelSignal, SignalError, SolverConfig};
use crate::spectral::{self, HalfSpectrum};
use rustfft::num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// Per-channel ADMM variables of one stage, on the mirror-extended grid.
#[derive(Debug, Clone)]
pub struct ChannelState {
    pub u_hat: HalfSpectrum,
    pub r_hat: HalfSpectrum,
    pub v_hat: HalfSpectrum,
    /// Mode estimate in the time domain.
    pub u: Vec<f64>,
    /// Residual estimate in the time domain.
    pub r: Vec<f64>,
    /// Jump estimate, length M.
    pub v: Vec<f64>,
    /// Split derivative variable, length M-1.
    pub x: Vec<f64>,
    /// Lagrange multipliers, length M-1.
    pub rho: Vec<f64>,
}

/// The jump-side variables carried between stages and mode passes.
#[derive(Debug, Clone)]
pub struct JumpState {
    pub v: Vec<f64>,
    pub x: Vec<f64>,
    pub rho: Vec<f64>,
}

impl ChannelState {
    /// Fresh stage state. The jump starts at the channel mean rather than
    /// zero: constants are fixed points of the jump solve, and seeding the
    /// mean there keeps the first mode update from freezing the DC content
    /// into the mode (the mode update runs first and would otherwise keep
    /// it for good).
    fn fresh(channel: &[f64], jump_enabled: bool) -> Self {
        let m = channel.len();
        let mut v_hat = HalfSpectrum::zeros(m);
        let mut v = vec![0.0; m];
        if jump_enabled {
            let mean = channel.iter().sum::<f64>() / m as f64;
            v_hat.coefficients[0] = Complex64::new(mean * m as f64, 0.0);
            v.fill(mean);
        }
        Self {
            u_hat: HalfSpectrum::zeros(m),
            r_hat: HalfSpectrum::zeros(m),
            v_hat,
            u: vec![0.0; m],
            r: vec![0.0; m],
            v,
            x: vec![0.0; m - 1],
            rho: vec![0.0; m - 1],
        }
    }

    /// Stage state carrying a previous stage's jump variables.
    fn rewarmed(m: usize, warm: &JumpState) -> Self {
        Self {
            u_hat: HalfSpectrum::zeros(m),
            r_hat: HalfSpectrum::zeros(m),
            v_hat: spectral::forward_half_spectrum(&warm.v),
            u: vec![0.0; m],
            r: vec![0.0; m],
            v: warm.v.clone(),
            x: warm.x.clone(),
            rho: warm.rho.clone(),
        }
    }

    fn jump_state(&self) -> JumpState {
        JumpState {
            v: self.v.clone(),
            x: self.x.clone(),
            rho: self.rho.clone(),
        }
    }
}

/// State of one ADMM stage after it ran to convergence or the iteration cap.
#[derive(Debug, Clone)]
pub struct AdmmState {
    pub channels: Vec<ChannelState>,
    /// Shared center frequency, cycles per sample in [0, 0.5].
    pub omega: f64,
    pub alpha: f64,
    pub iterations: usize,
    pub converged: bool,
    pub final_relative_change: f64,
    /// Relative change of u + v at every iteration.
    pub relative_change_trace: Vec<f64>,
    /// Center frequency after every iteration.
    pub omega_iter_trace: Vec<f64>,
}

/// Convergence record of one alpha stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaStageRecord {
    pub alpha: f64,
    pub iterations: usize,
    pub final_relative_change: f64,
    pub converged: bool,
    pub relative_change_trace: Vec<f64>,
}

/// Diagnostics for one pass of the alpha schedule (one mode attempt).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageDiagnostics {
    /// 1-based extraction index.
    pub mode_index: usize,
    pub alpha_stages: Vec<AlphaStageRecord>,
    /// Center frequency after each alpha stage.
    pub omega_trace: Vec<f64>,
    /// True when every alpha stage met the tolerance within the cap.
    pub converged: bool,
}

/// Everything a decomposition produces. The reconstruction identity
/// jump + sum of modes + residual = input holds exactly because the residual
/// is defined by subtraction.
#[derive(Debug, Clone)]
pub struct DecompositionResult {
    /// Retained modes in extraction order.
    pub modes: Vec<MultichannelSignal>,
    pub jump: MultichannelSignal,
    pub residual: MultichannelSignal,
    /// One entry per retained mode, in Hz.
    pub center_frequencies: Vec<f64>,
    /// Mean squared amplitude of each retained mode (per channel, per sample).
    pub mode_energies: Vec<f64>,
    /// One entry per mode attempt, including a final dropped one.
    pub diagnostics: Vec<StageDiagnostics>,
}

/// One inner ADMM stage at fixed alpha over mirror-extended channels.
///
/// Update order per iteration: every channel's mode spectrum, the shared
/// center frequency, then per channel the residual spectrum, both inverse
/// transforms, the jump solve, the shrink, the multiplier step, and the
/// jump's forward transform. Terminates when the summed relative change of
/// u + v across channels drops to `config.eps`.
pub fn run_admm_stage(
    work: &[Vec<f64>],
    omega_init: f64,
    alpha: f64,
    config: &SolverConfig,
) -> AdmmState {
    run_admm_stage_warm(work, omega_init, alpha, config, None)
}

/// Stage with the jump variables (v, x, rho) carried in from a previous
/// stage. The spectral variables always start from zero; they rebuild in a
/// few iterations, while a reset jump state would have to win its content
/// back from the mode through a handoff the relative-change test is blind
/// to (the mode update has unit gain at its center bin, so u + v barely
/// moves while mass migrates between u and v).
fn run_admm_stage_warm(
    work: &[Vec<f64>],
    omega_init: f64,
    alpha: f64,
    config: &SolverConfig,
    warm: Option<&[JumpState]>,
) -> AdmmState {
    assert!(!work.is_empty(), "stage needs at least one channel");
    assert!(
        (0.0..=0.5).contains(&omega_init),
        "omega_init must lie in [0, 0.5]"
    );
    let m = work[0].len();
    let penalty = PenaltyParams::new(config.beta, config.b_bar, config.tau);
    let jump_solver = JumpSolver::new(m, penalty.gamma);
    let mut jump_scratch = JumpScratch::new(m);

    let s_hats: Vec<HalfSpectrum> = work
        .iter()
        .map(|ch| spectral::forward_half_spectrum(ch))
        .collect();
    let mut channels: Vec<ChannelState> = match warm {
        Some(prev) => work
            .iter()
            .zip(prev)
            .map(|(ch, w)| ChannelState::rewarmed(ch.len(), w))
            .collect(),
        None => work
            .iter()
            .map(|ch| ChannelState::fresh(ch, config.jump_enabled))
            .collect(),
    };
    let mut omega = omega_init;
    let mut prev_g: Vec<Vec<f64>> = channels
        .iter()
        .map(|ch| ch.u.iter().zip(&ch.v).map(|(u, v)| u + v).collect())
        .collect();
    let mut trace = Vec::new();
    let mut omega_iter_trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let mut rel = f64::INFINITY;

    while iterations < config.max_inner_iters {
        iterations += 1;

        for (ch, s_hat) in channels.iter_mut().zip(&s_hats) {
            ch.u_hat = spectral::update_mode(s_hat, &ch.r_hat, &ch.v_hat, omega, alpha);
        }
        let u_hats: Vec<HalfSpectrum> = channels.iter().map(|c| c.u_hat.clone()).collect();
        if let Ok(w) = spectral::update_center_frequency_coupled(&u_hats) {
            omega = w;
        } // zero spectrum keeps the previous omega
        omega_iter_trace.push(omega);

        for (ch, s_hat) in channels.iter_mut().zip(&s_hats) {
            ch.r_hat = spectral::update_residual(s_hat, &ch.u_hat, &ch.v_hat, omega, alpha);
            ch.u = spectral::inverse_real(&ch.u_hat);
            ch.r = spectral::inverse_real(&ch.r_hat);
        }

        if config.jump_enabled {
            for (ch, s) in channels.iter_mut().zip(work) {
                let target: Vec<f64> = s
                    .iter()
                    .zip(&ch.r)
                    .zip(&ch.u)
                    .map(|((&si, &ri), &ui)| si - ri - ui)
                    .collect();
                sweep_jump_block(ch, &target, &jump_solver, &penalty, &mut jump_scratch);
                ch.v_hat = spectral::forward_half_spectrum(&ch.v);
            }
        }

        let mut num = 0.0;
        let mut den = 0.0;
        for (ch, pg) in channels.iter().zip(prev_g.iter_mut()) {
            for i in 0..m {
                let g = ch.u[i] + ch.v[i];
                let d = g - pg[i];
                num += d * d;
                den += pg[i] * pg[i];
                pg[i] = g;
            }
        }
        rel = if den > 0.0 {
            num / den
        } else if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        trace.push(rel);
        if rel <= config.eps {
            converged = true;
            break;
        }
    }

    AdmmState {
        channels,
        omega,
        alpha,
        iterations,
        converged,
        final_relative_change: rel,
        relative_change_trace: trace,
        omega_iter_trace,
    }
}

/// Sweep cap for the jump block within one outer iteration.
const MAX_JUMP_SWEEPS: usize = 8;

/// Scratch buffers reused by the jump block across iterations.
struct JumpScratch {
    combined: Vec<f64>,
    v_new: Vec<f64>,
    h: Vec<f64>,
}

impl JumpScratch {
    fn new(m: usize) -> Self {
        Self {
            combined: vec![0.0; m - 1],
            v_new: vec![0.0; m],
            h: vec![0.0; m - 1],
        }
    }
}

/// Runs the jump block (v solve, shrink, multiplier step) to its own
/// equilibrium for a fixed spectral state. A single sweep per outer
/// iteration leaves the step content crawling from the mode into the jump
/// at a rate slow enough to trip the outer relative-change test long before
/// the handoff finishes; iterating the block is cheap (no transforms) and
/// leaves the stage fixed point unchanged.
fn sweep_jump_block(
    ch: &mut ChannelState,
    target: &[f64],
    solver: &JumpSolver,
    penalty: &PenaltyParams,
    scratch: &mut JumpScratch,
) {
    let gamma = penalty.gamma;
    let inv_gamma = 1.0 / gamma;
    let m = target.len();
    for _ in 0..MAX_JUMP_SWEEPS {
        // The multiplier enters the v solve negated: with the
        // h = Dv + rho/gamma shrink target and the descent step
        // rho -= gamma (x - Dv), the dual feedback damps the constraint
        // violation only with this orientation.
        for ((c, &xj), &rj) in scratch.combined.iter_mut().zip(&ch.x).zip(&ch.rho) {
            *c = gamma * xj - rj;
        }
        solver.build_rhs(target, &scratch.combined, &mut scratch.v_new);
        solver.solve_in_place(&mut scratch.v_new);
        let settled = scratch
            .v_new
            .iter()
            .zip(&ch.v)
            .all(|(a, b)| (a - b).abs() <= 1e-9 * b.abs().max(1.0));
        std::mem::swap(&mut ch.v, &mut scratch.v_new);
        for i in 0..m - 1 {
            scratch.h[i] = (ch.v[i + 1] - ch.v[i]) + ch.rho[i] * inv_gamma;
        }
        jump::update_auxiliary_into(&scratch.h, penalty, &mut ch.x);
        for i in 0..m - 1 {
            ch.rho[i] -= gamma * (ch.x[i] - (ch.v[i + 1] - ch.v[i]));
        }
        if settled {
            break;
        }
    }
}

/// Result of one pass of the alpha schedule.
#[derive(Debug, Clone)]
pub struct SchedulePass {
    /// State of the final (largest-alpha) stage.
    pub state: AdmmState,
    pub alpha_stages: Vec<AlphaStageRecord>,
    pub omega_trace: Vec<f64>,
}

/// Runs stages at alpha_init, 2 alpha_init, ... while alpha stays at or
/// below alpha_max; at least one stage always runs. The spectral variables
/// reset between stages; the center frequency carries over while
/// `warm_start_omega` is set, and the jump variables always carry over, so
/// the content each narrowing stage releases from the mode settles into
/// the jump instead of being refought from scratch.
pub fn run_alpha_schedule(work: &[Vec<f64>], config: &SolverConfig) -> SchedulePass {
    run_alpha_schedule_warm(work, config, None)
}

fn run_alpha_schedule_warm(
    work: &[Vec<f64>],
    config: &SolverConfig,
    warm: Option<Vec<JumpState>>,
) -> SchedulePass {
    let mut alpha = config.alpha_init;
    let mut omega = 0.0;
    let mut alpha_stages = Vec::new();
    let mut omega_trace = Vec::new();
    let mut jump_warm = warm;
    loop {
        let state = run_admm_stage_warm(work, omega, alpha, config, jump_warm.as_deref());
        alpha_stages.push(AlphaStageRecord {
            alpha,
            iterations: state.iterations,
            final_relative_change: state.final_relative_change,
            converged: state.converged,
            relative_change_trace: state.relative_change_trace.clone(),
        });
        omega_trace.push(state.omega);
        omega = if config.warm_start_omega {
            state.omega
        } else {
            0.0
        };
        let next = alpha * 2.0;
        if next > config.alpha_max {
            return SchedulePass {
                state,
                alpha_stages,
                omega_trace,
            };
        }
        jump_warm = Some(state.channels.iter().map(ChannelState::jump_state).collect());
        alpha = next;
    }
}

/// Mean squared amplitude across channels and samples.
fn mode_energy(channels: &[Vec<f64>]) -> f64 {
    let total: f64 = channels
        .iter()
        .flat_map(|ch| ch.iter())
        .map(|&x| x * x)
        .sum();
    let count: usize = channels.iter().map(Vec::len).sum();
    total / count as f64
}

/// Decomposes a signal into narrowband modes, a jump component, and a
/// residual, discovering the mode count as it goes.
///
/// The signal is mirror-extended once; each pass of the alpha schedule
/// yields one mode, which is subtracted from the working signal while the
/// jump stays in place and is re-estimated by every pass. Extraction stops
/// when a mode's energy no longer exceeds the previous one by more than
/// `eps_mode`, when it falls to `eps_mode` (that mode is dropped), or at
/// `max_modes`. Channels of a multichannel input share one center frequency
/// per mode.
pub fn decompose(
    signal: &MultichannelSignal,
    config: &SolverConfig,
) -> Result<DecompositionResult, SolverError> {
    signal::validate(signal)?;
    config.validate()?;

    let n = signal.len();
    let n_ch = signal.num_channels();
    let fs = signal.sample_rate();
    let mut work: Vec<Vec<f64>> = signal
        .channels
        .iter()
        .map(|ch| signal::mirror_extend_samples(&ch.samples))
        .collect();

    let mut modes: Vec<Vec<Vec<f64>>> = Vec::new();
    let mut omegas: Vec<f64> = Vec::new();
    let mut energies: Vec<f64> = Vec::new();
    let mut diagnostics: Vec<StageDiagnostics> = Vec::new();
    let mut jump_ext: Vec<Vec<f64>> = vec![vec![0.0; 2 * n]; n_ch];
    let mut prev_energy: Option<f64> = None;

    for k in 1..=config.max_modes {
        let pass = run_alpha_schedule(&work, config);
        let all_converged = pass.alpha_stages.iter().all(|s| s.converged);
        diagnostics.push(StageDiagnostics {
            mode_index: k,
            alpha_stages: pass.alpha_stages,
            omega_trace: pass.omega_trace,
            converged: all_converged,
        });
        // the jump estimate of the most recent pass is the reported one
        jump_ext = pass.state.channels.iter().map(|c| c.v.clone()).collect();

        let cropped: Vec<Vec<f64>> = pass
            .state
            .channels
            .iter()
            .map(|c| signal::crop_samples(&c.u, n).expect("extended length is 2N"))
            .collect();
        let energy = mode_energy(&cropped);

        if energy <= config.eps_mode {
            break; // negligible mode: drop it and stop
        }
        for (w, ch) in work.iter_mut().zip(&pass.state.channels) {
            for (wi, ui) in w.iter_mut().zip(&ch.u) {
                *wi -= ui;
            }
        }
        modes.push(cropped);
        omegas.push(pass.state.omega);
        energies.push(energy);
        if let Some(prev) = prev_energy {
            // mode energies stopped growing: the oscillatory content is out
            if energy - prev <= config.eps_mode {
                break;
            }
        }
        prev_energy = Some(energy);
    }

    let jump: Vec<Vec<f64>> = jump_ext
        .iter()
        .map(|v| signal::crop_samples(v, n).expect("extended length is 2N"))
        .collect();
    let mut residual: Vec<Vec<f64>> = signal
        .channels
        .iter()
        .zip(&jump)
        .map(|(ch, j)| {
            ch.samples
                .iter()
                .zip(j)
                .map(|(&s, &v)| s - v)
                .collect::<Vec<f64>>()
        })
        .collect();
    for mode in &modes {
        for (res, u) in residual.iter_mut().zip(mode) {
            for (ri, ui) in res.iter_mut().zip(u) {
                *ri -= ui;
            }
        }
    }

    Ok(DecompositionResult {
        modes: modes
            .into_iter()
            .map(|chs| MultichannelSignal::from_samples(chs, fs))
            .collect(),
        jump: MultichannelSignal::from_samples(jump, fs),
        residual: MultichannelSignal::from_samples(residual, fs),
        center_frequencies: omegas.iter().map(|w| w * fs).collect(),
        mode_energies: energies,
        diagnostics,
    })
}

/// Multivariate entry point: channels are coupled through one shared center
/// frequency per mode. A single-channel input reduces to [`decompose`],
/// whose orchestration is identical.
pub fn decompose_multivariate(
    signal: &MultichannelSignal,
    config: &SolverConfig,
) -> Result<DecompositionResult, SolverError> {
    decompose(signal, config)
}
