//! Time-domain jump sub-problem: the saturating step penalty, the forward
//! difference operator, the exact tridiagonal solve for the jump component,
//! and the closed-form shrink for its split derivative.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JumpError {
    #[error("penalty input must be nonnegative, got {0}")]
    NegativeInput(f64),
}

/// Parameters of the concave jump penalty and its splitting scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyParams {
    /// Non-convexity parameter, 2 / b_bar^2.
    pub b: f64,
    /// Jump regularization weight.
    pub beta: f64,
    /// Quadratic splitting scalar, tau * b * beta.
    pub gamma: f64,
    /// beta / gamma = 1 / (tau b). mu * b < 1 keeps the scalar problems
    /// strongly convex.
    pub mu: f64,
}

impl PenaltyParams {
    pub fn new(beta: f64, b_bar: f64, tau: f64) -> Self {
        assert!(beta > 0.0 && b_bar > 0.0, "weights must be positive");
        assert!(tau > 1.0, "tau must exceed 1");
        let b = 2.0 / (b_bar * b_bar);
        let gamma = tau * b * beta;
        Self {
            b,
            beta,
            gamma,
            mu: beta / gamma,
        }
    }

    /// Step height at which the penalty saturates, sqrt(2/b) = b_bar.
    pub fn threshold(&self) -> f64 {
        (2.0 / self.b).sqrt()
    }
}

/// Saturating piecewise-quadratic step penalty: 0 at the origin, 1 from
/// sqrt(2/b) on, concave quadratic in between.
pub fn penalty_phi(x: f64, b: f64) -> Result<f64, JumpError> {
    if x < 0.0 {
        return Err(JumpError::NegativeInput(x));
    }
    assert!(b > 0.0, "b must be positive");
    let threshold = (2.0 / b).sqrt();
    if x < threshold {
        Ok(-0.5 * b * x * x + (2.0 * b).sqrt() * x)
    } else {
        Ok(1.0)
    }
}

/// First-order forward difference, conceptually the (M-1) x M matrix D with
/// (Dv)_j = v_{j+1} - v_j. D annihilates constants and D^T D is the standard
/// second-difference tridiagonal with unit corner entries.
#[derive(Debug, Clone, Copy)]
pub struct DifferenceOperator {
    len: usize,
}

impl DifferenceOperator {
    pub fn new(len: usize) -> Self {
        assert!(len >= 2, "difference operator needs at least 2 points");
        Self { len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// D v, length M-1.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.len);
        v.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// D^T y, length M.
    pub fn apply_transpose(&self, y: &[f64]) -> Vec<f64> {
        debug_assert_eq!(y.len(), self.len - 1);
        let mut out = vec![0.0; self.len];
        out[0] = -y[0];
        for i in 1..self.len - 1 {
            out[i] = y[i - 1] - y[i];
        }
        out[self.len - 1] = y[self.len - 2];
        out
    }
}

/// Solves (gamma D^T D + 2 I) v = D^T rho + gamma D^T x + 2 target exactly
/// in O(M) by symmetric tridiagonal elimination. The system matrix is
/// positive definite for any gamma > 0.
pub fn update_jump(target: &[f64], x: &[f64], rho: &[f64], gamma: f64) -> Vec<f64> {
    let m = target.len();
    assert!(m >= 2, "jump solve needs at least 2 samples");
    assert_eq!(x.len(), m - 1);
    assert_eq!(rho.len(), m - 1);
    let solver = JumpSolver::new(m, gamma);
    let mut rhs = vec![0.0; m];
    let combined: Vec<f64> = rho
        .iter()
        .zip(x)
        .map(|(&r, &xj)| r + gamma * xj)
        .collect();
    solver.build_rhs(target, &combined, &mut rhs);
    solver.solve_in_place(&mut rhs);
    rhs
}

/// Factored form of gamma D^T D + 2 I (diagonal gamma (1,2,..,2,1) + 2,
/// off-diagonals -gamma). The Thomas elimination coefficients depend only
/// on gamma and the length, so they are computed once and reused across
/// solves. Diagonally dominant, so no pivoting is needed.
#[derive(Debug, Clone)]
pub struct JumpSolver {
    gamma: f64,
    /// Eliminated upper-diagonal coefficients.
    upper: Vec<f64>,
    /// Reciprocals of the eliminated pivots.
    inv_pivot: Vec<f64>,
}

impl JumpSolver {
    pub fn new(m: usize, gamma: f64) -> Self {
        assert!(m >= 2, "jump solve needs at least 2 samples");
        assert!(gamma > 0.0);
        let e = -gamma;
        let diag =
            |i: usize| {
                if i == 0 || i == m - 1 {
                    gamma + 2.0
                } else {
                    2.0 * gamma + 2.0
                }
            };
        let mut upper = vec![0.0; m];
        let mut inv_pivot = vec![0.0; m];
        inv_pivot[0] = 1.0 / diag(0);
        upper[0] = e * inv_pivot[0];
        for i in 1..m {
            let pivot = diag(i) - e * upper[i - 1];
            inv_pivot[i] = 1.0 / pivot;
            upper[i] = e * inv_pivot[i];
        }
        Self {
            gamma,
            upper,
            inv_pivot,
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// rhs = D^T combined + 2 target, where combined holds the
    /// difference-domain drive (rho + gamma x in the public form).
    pub fn build_rhs(&self, target: &[f64], combined: &[f64], rhs: &mut [f64]) {
        let m = rhs.len();
        debug_assert_eq!(target.len(), m);
        debug_assert_eq!(combined.len(), m - 1);
        rhs[0] = -combined[0] + 2.0 * target[0];
        for i in 1..m - 1 {
            rhs[i] = combined[i - 1] - combined[i] + 2.0 * target[i];
        }
        rhs[m - 1] = combined[m - 2] + 2.0 * target[m - 1];
    }

    /// Overwrites rhs with the solution.
    pub fn solve_in_place(&self, rhs: &mut [f64]) {
        let m = rhs.len();
        debug_assert_eq!(m, self.upper.len());
        let e = -self.gamma;
        rhs[0] *= self.inv_pivot[0];
        for i in 1..m {
            rhs[i] = (rhs[i] - e * rhs[i - 1]) * self.inv_pivot[i];
        }
        for i in (0..m - 1).rev() {
            rhs[i] -= self.upper[i] * rhs[i + 1];
        }
    }
}

/// Componentwise closed-form minimizer of
/// mu phi(|x_j|; b) + (x_j - h_j)^2 / 2: a firm shrink that zeroes
/// |h_j| <= mu sqrt(2b) and passes |h_j| >= sqrt(2/b) through unchanged.
pub fn update_auxiliary(h: &[f64], params: &PenaltyParams) -> Vec<f64> {
    let mut out = vec![0.0; h.len()];
    update_auxiliary_into(h, params, &mut out);
    out
}

/// In-place form of [`update_auxiliary`].
pub fn update_auxiliary_into(h: &[f64], params: &PenaltyParams, out: &mut [f64]) {
    let b = params.b;
    let mu = params.mu;
    debug_assert!(mu * b < 1.0, "strong convexity requires mu * b < 1");
    debug_assert_eq!(h.len(), out.len());
    let stretch = 1.0 / (1.0 - mu * b);
    let knee = mu * (2.0 * b).sqrt() * stretch;
    for (o, &hj) in out.iter_mut().zip(h) {
        *o = if hj == 0.0 {
            0.0
        } else {
            (stretch - knee / hj.abs()).clamp(0.0, 1.0) * hj
        };
    }
}

/// Dual ascent step rho - gamma (x - D v).
pub fn update_multiplier(rho: &[f64], x: &[f64], v: &[f64], gamma: f64) -> Vec<f64> {
    debug_assert_eq!(rho.len(), x.len());
    debug_assert_eq!(v.len(), rho.len() + 1);
    rho.iter()
        .zip(x)
        .zip(v.windows(2))
        .map(|((&r, &xj), w)| r - gamma * (xj - (w[1] - w[0])))
        .collect()
}
