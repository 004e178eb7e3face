use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by all modules. Reports embed a copy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// |f(p) - p| below which p counts as fixed.
    pub fix: f64,
    /// Residual accepted for computed roots and preimages.
    pub root: f64,
    /// |f'| below which a point is treated as critical.
    pub crit: f64,
    /// Distance of an eigenvalue modulus from 1 that counts as non-hyperbolic.
    pub hyp: f64,
    /// Central finite-difference step.
    pub fd_step: f64,
    /// Slack allowed when testing whether an iterate left [0, 1].
    pub escape: f64,
    /// Slack allowed on inequality certificates.
    pub ineq: f64,
}

pub const TOL_FIX: f64 = 1e-10;
pub const TOL_ROOT: f64 = 1e-12;
pub const TOL_CRIT: f64 = 1e-8;
pub const TOL_HYP: f64 = 1e-6;
pub const FD_STEP: f64 = 1e-6;
pub const TOL_ESCAPE: f64 = 1e-12;
pub const TOL_INEQ: f64 = 1e-8;

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            fix: TOL_FIX,
            root: TOL_ROOT,
            crit: TOL_CRIT,
            hyp: TOL_HYP,
            fd_step: FD_STEP,
            escape: TOL_ESCAPE,
            ineq: TOL_INEQ,
        }
    }
}
