use serde::{Deserialize, Serialize};

use super::MapModel;
use crate::error::{Error, Result};
use crate::tol::{FD_STEP, TOL_FIX, TOL_HYP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FixedPointKind {
    Sink,
    Source,
    Saddle,
    /// Some eigenvalue modulus lies within `tol_hyp` of 1.
    NonHyperbolic,
}

fn eigen_moduli(j: [[f64; 2]; 2]) -> [f64; 2] {
    let tr = j[0][0] + j[1][1];
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    let disc = tr * tr - 4.0 * det;
    if disc >= 0.0 {
        let s = disc.sqrt();
        [(0.5 * (tr - s)).abs(), (0.5 * (tr + s)).abs()]
    } else {
        let r = det.sqrt();
        [r, r]
    }
}

/// Classifies a fixed point of a planar map by the eigenvalue moduli of a
/// finite-difference Jacobian.
pub fn classify_fixed_point_2d(model: &MapModel, point: (f64, f64)) -> Result<FixedPointKind> {
    if model.dimension() != 2 {
        return Err(Error::Arity { expected: 2, got: 1 });
    }
    let (x, y) = point;
    let (u, v) = model.eval2(x, y)?;
    let residual = (u - x).hypot(v - y);
    if !(residual < TOL_FIX) {
        return Err(Error::NotFixed { residual });
    }
    let moduli = eigen_moduli(model.jacobian(x, y, FD_STEP)?);
    if moduli.iter().any(|m| (m - 1.0).abs() <= TOL_HYP) {
        return Ok(FixedPointKind::NonHyperbolic);
    }
    let inside = moduli.iter().filter(|&&m| m < 1.0).count();
    Ok(match inside {
        2 => FixedPointKind::Sink,
        0 => FixedPointKind::Source,
        _ => FixedPointKind::Saddle,
    })
}
