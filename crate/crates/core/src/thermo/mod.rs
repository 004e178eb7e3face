//! Utility potentials, pressure and equilibrium measures on the inverse
//! limit of the logistic Cantor set.

mod audit;
mod block;
mod ensemble;
mod utility;

pub use audit::{bowen_ball_audit, bowen_ball_audit_with, holder_estimate, AuditReport, AuditRow, HolderEstimate};
pub use block::{equilibrium_block_markov, equilibrium_block_markov_folded, BlockMarkovMeasure, WindowInfo, L_MAX};
pub use ensemble::{
    equilibrium_on_table, equilibrium_periodic, equilibrium_periodic_with, pressure_periodic, pressure_periodic_with,
    Member, OrbitEnsemble, PressureEstimate, PressureRow,
};
pub use utility::{birkhoff_sum, eval_utility_w, Potential, Terms, UtilitySpec, WValue, TAIL_TARGET};

use crate::error::{Error, Result};
use crate::exec::Exec;

/// Either kind of invariant measure the crate builds.
#[derive(Debug, Clone, Copy)]
pub enum Measure<'a> {
    Ensemble(&'a OrbitEnsemble),
    BlockMarkov(&'a BlockMarkovMeasure),
}

impl<'a> From<&'a OrbitEnsemble> for Measure<'a> {
    fn from(m: &'a OrbitEnsemble) -> Self {
        Measure::Ensemble(m)
    }
}

impl<'a> From<&'a BlockMarkovMeasure> for Measure<'a> {
    fn from(m: &'a BlockMarkovMeasure) -> Self {
        Measure::BlockMarkov(m)
    }
}

/// `int phi dmu`.
pub fn measure_average<'a>(mu: impl Into<Measure<'a>>, phi: &Potential) -> Result<f64> {
    match mu.into() {
        Measure::Ensemble(e) => Ok(e.average(phi, Exec::default())),
        Measure::BlockMarkov(b) => b.average(phi),
    }
}

/// `h = P(phi) - int phi dmu` for the equilibrium ensemble of `phi`.
pub fn measure_entropy(mu: &OrbitEnsemble, pressure: &PressureEstimate) -> Result<f64> {
    if mu.potential() != &pressure.potential || mu.nu() != pressure.nu {
        return Err(Error::MismatchedPotential);
    }
    let p = pressure.at(mu.period()).unwrap_or(pressure.estimate);
    Ok(p - mu.average(mu.potential(), Exec::default()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const LN2: f64 = std::f64::consts::LN_2;

    #[test]
    fn entropy_of_constants() {
        for c in [0.0, -1.0, 2.5] {
            let phi = Potential::Constant(c);
            let mu = equilibrium_periodic(&phi, 5.0, 10).unwrap();
            let p = pressure_periodic(&phi, 5.0, &[8, 10]).unwrap();
            assert!((measure_entropy(&mu, &p).unwrap() - LN2).abs() < 1e-12);
            assert!((measure_average(&mu, &phi).unwrap() - c).abs() < 1e-12);
        }
    }

    #[test]
    fn entropy_of_w_is_bounded_by_log2() {
        let spec = UtilitySpec::new(0.5, 0.5, 0.5).unwrap();
        let phi = Potential::w(spec);
        let mu = equilibrium_periodic(&phi, 5.0, 12).unwrap();
        let p = pressure_periodic(&phi, 5.0, &[12]).unwrap();
        let h = measure_entropy(&mu, &p).unwrap();
        assert!(h > 0.0 && h <= LN2 + 1e-9, "h = {h}");
        let mme = pressure_periodic(&Potential::zero(), 5.0, &[12]).unwrap();
        assert_eq!(measure_entropy(&mu, &mme), Err(Error::MismatchedPotential));
    }

    #[test]
    fn block_markov_average_of_constant() {
        let b = BlockMarkovMeasure::from_window_potential(3, vec![0.0; 8]).unwrap();
        assert!((measure_average(&b, &Potential::Constant(1.5)).unwrap() - 1.5).abs() < 1e-12);
    }
}
