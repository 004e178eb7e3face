//! Economic map families: evaluation, derivatives, Schwarzian derivative,
//! unimodal classification and the chaos criteria used on them.
//!
//! Every family is a pure function of an immutable [`MapModel`]. The
//! two-dimensional overlapping-generations system is stored in its backward
//! form only: it maps time-(t+1) data `(z, w)` to time-t data.

mod planar;
mod poly;
mod unimodal;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol::{FD_STEP, TOL_CRIT};

pub use planar::{classify_fixed_point_2d, FixedPointKind};
pub use poly::{PiecewisePolynomial, Polynomial};
pub use unimodal::{
    analyze_unimodal, find_period3, inverse_branches, inverse_branches_on, snap_back_check, FixedPoint, Period3Orbit,
    SchwarzianSign,
    SnapBackReport, UnimodalReport, UnimodalType,
};

/// Parameters of the heterogeneous-market map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeteroParams {
    pub alpha: f64,
    pub b: f64,
    pub big_b: f64,
    pub beta: f64,
    pub c1: f64,
    pub c2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    Logistic,
    GenericUnimodal,
    Cobweb,
    CashInAdvance,
    Olg2d,
    HeteroMarket,
    Linear2d,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MapModel {
    /// `F(x) = nu x (1 - x)`.
    Logistic { nu: f64 },
    /// A user-supplied polynomial offer curve.
    GenericUnimodal { curve: Polynomial },
    /// Adaptive adjustment `f(z) = (1 - alpha) z + alpha / z^beta_c`.
    Cobweb { alpha: f64, beta_c: f64 },
    /// Cash-in-advance recursion `x_t = f(x_{t+1})` with piecewise-polynomial `f`.
    CashInAdvance { curve: PiecewisePolynomial },
    /// Backward overlapping-generations system with capital.
    Olg2d { a: f64, delta: f64, offer: Polynomial },
    HeteroMarket(HeteroParams),
    /// `p -> M p`; used for testing planar classification.
    Linear2d { m: [[f64; 2]; 2] },
}

/// A point of a one- or two-dimensional phase space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Point {
    One(f64),
    Two(f64, f64),
}

impl Point {
    pub fn dim(&self) -> usize {
        match self {
            Point::One(_) => 1,
            Point::Two(..) => 2,
        }
    }
}

impl From<f64> for Point {
    fn from(x: f64) -> Self {
        Point::One(x)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::Two(x, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DerivativeValue {
    Scalar(f64),
    Jacobian([[f64; 2]; 2]),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Derivative {
    pub value: DerivativeValue,
    /// Finite-difference step, when the derivative was not analytic.
    pub fd_step: Option<f64>,
}

fn positive_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
    }
}

impl MapModel {
    pub fn logistic(nu: f64) -> Result<Self> {
        positive_finite("nu", nu)?;
        Ok(MapModel::Logistic { nu })
    }

    pub fn cobweb(alpha: f64, beta_c: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!("cobweb alpha must lie in (0, 1), got {alpha}")));
        }
        positive_finite("beta_c", beta_c)?;
        Ok(MapModel::Cobweb { alpha, beta_c })
    }

    pub fn generic_unimodal(curve: Polynomial) -> Self {
        MapModel::GenericUnimodal { curve }
    }

    pub fn cash_in_advance(curve: PiecewisePolynomial) -> Self {
        MapModel::CashInAdvance { curve }
    }

    pub fn olg2d(a: f64, delta: f64, offer: Polynomial) -> Result<Self> {
        positive_finite("a", a)?;
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!("delta must lie in (0, 1), got {delta}")));
        }
        Ok(MapModel::Olg2d { a, delta, offer })
    }

    pub fn hetero_market(p: HeteroParams) -> Result<Self> {
        let all = [p.alpha, p.b, p.big_b, p.beta, p.c1, p.c2];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("heterogeneous-market parameters must be finite".into()));
        }
        if p.big_b == 0.0 {
            return Err(Error::InvalidParameter("B must be non-zero".into()));
        }
        Ok(MapModel::HeteroMarket(p))
    }

    /// Builds a scalar-parameter family from a flat parameter vector.
    /// Arity: Logistic 1 (nu), Cobweb 2 (alpha, beta_c), HeteroMarket 6
    /// (alpha, b, B, beta, C1, C2), Linear2d 4 (row-major).
    pub fn from_params(family: Family, params: &[f64]) -> Result<Self> {
        let arity = match family {
            Family::Logistic => 1,
            Family::Cobweb => 2,
            Family::HeteroMarket => 6,
            Family::Linear2d => 4,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "{other:?} is built from coefficient lists, not a flat parameter vector"
                )))
            }
        };
        if params.len() != arity {
            return Err(Error::InvalidParameter(format!(
                "{family:?} takes {arity} parameters, got {}",
                params.len()
            )));
        }
        match family {
            Family::Logistic => Self::logistic(params[0]),
            Family::Cobweb => Self::cobweb(params[0], params[1]),
            Family::HeteroMarket => Self::hetero_market(HeteroParams {
                alpha: params[0],
                b: params[1],
                big_b: params[2],
                beta: params[3],
                c1: params[4],
                c2: params[5],
            }),
            Family::Linear2d => Ok(MapModel::Linear2d { m: [[params[0], params[1]], [params[2], params[3]]] }),
            _ => unreachable!(),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            MapModel::Logistic { .. } => Family::Logistic,
            MapModel::GenericUnimodal { .. } => Family::GenericUnimodal,
            MapModel::Cobweb { .. } => Family::Cobweb,
            MapModel::CashInAdvance { .. } => Family::CashInAdvance,
            MapModel::Olg2d { .. } => Family::Olg2d,
            MapModel::HeteroMarket(_) => Family::HeteroMarket,
            MapModel::Linear2d { .. } => Family::Linear2d,
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            MapModel::Olg2d { .. } | MapModel::HeteroMarket(_) | MapModel::Linear2d { .. } => 2,
            _ => 1,
        }
    }

    /// Natural interval of a one-dimensional family, where one exists.
    pub fn domain(&self) -> Option<(f64, f64)> {
        match self {
            MapModel::Logistic { .. } => Some((0.0, 1.0)),
            MapModel::GenericUnimodal { curve } => Some(curve.domain()),
            MapModel::CashInAdvance { curve } => Some(curve.domain()),
            _ => None,
        }
    }

    pub fn evaluate(&self, p: Point) -> Result<Point> {
        match p {
            Point::One(x) => self.eval1(x).map(Point::One),
            Point::Two(x, y) => self.eval2(x, y).map(|(u, v)| Point::Two(u, v)),
        }
    }

    /// Evaluates a one-dimensional family.
    pub fn eval1(&self, x: f64) -> Result<f64> {
        match self {
            MapModel::Logistic { nu } => Ok(nu * x * (1.0 - x)),
            MapModel::GenericUnimodal { curve } => Ok(curve.eval(x)),
            MapModel::Cobweb { alpha, beta_c } => {
                if !(x > 0.0) {
                    return Err(Error::Domain(format!("cobweb map needs z > 0, got {x}")));
                }
                Ok((1.0 - alpha) * x + alpha / x.powf(*beta_c))
            }
            MapModel::CashInAdvance { curve } => curve.eval(x),
            _ => Err(Error::Arity { expected: 2, got: 1 }),
        }
    }

    /// Evaluates a two-dimensional family.
    pub fn eval2(&self, x: f64, y: f64) -> Result<(f64, f64)> {
        match self {
            MapModel::Olg2d { a, delta, offer } => {
                // (z_{t+1}, w_{t+1}) -> (z_t, w_t)
                let arg = a * (1.0 - delta + 1.0 / a) * x - a * y;
                Ok((offer.eval(arg), x))
            }
            MapModel::HeteroMarket(p) => {
                let z = x;
                let m = y;
                let z_next = z * ((1.0 - p.alpha) - p.alpha * p.b * (1.0 - m) / (2.0 * p.big_b));
                let m_next = (p.beta * p.b / 4.0 * z * z * (p.b * (1.0 - m) / p.big_b + 1.0)
                    + p.beta / 2.0 * (p.c2 - p.c1))
                    .tanh();
                Ok((z_next, m_next))
            }
            MapModel::Linear2d { m } => Ok((m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y)),
            _ => Err(Error::Arity { expected: 1, got: 2 }),
        }
    }

    /// Iterates a one-dimensional family `k` times.
    pub fn iterate1(&self, mut x: f64, k: usize) -> Result<f64> {
        for _ in 0..k {
            x = self.eval1(x)?;
        }
        Ok(x)
    }

    /// Analytic derivative of order 1..=3 for one-dimensional families.
    pub fn derivative1(&self, x: f64, order: u8) -> Result<f64> {
        if !(1..=3).contains(&order) {
            return Err(Error::UnsupportedOrder { order });
        }
        let k = order as usize;
        match self {
            MapModel::Logistic { nu } => Ok(match order {
                1 => nu * (1.0 - 2.0 * x),
                2 => -2.0 * nu,
                _ => 0.0,
            }),
            MapModel::GenericUnimodal { curve } => Ok(curve.derivative(x, k)),
            MapModel::Cobweb { alpha, beta_c } => {
                if !(x > 0.0) {
                    return Err(Error::Domain(format!("cobweb map needs z > 0, got {x}")));
                }
                let b = *beta_c;
                Ok(match order {
                    1 => (1.0 - alpha) - alpha * b * x.powf(-b - 1.0),
                    2 => alpha * b * (b + 1.0) * x.powf(-b - 2.0),
                    _ => -alpha * b * (b + 1.0) * (b + 2.0) * x.powf(-b - 3.0),
                })
            }
            MapModel::CashInAdvance { curve } => curve.derivative(x, k),
            _ => Err(Error::Arity { expected: 2, got: 1 }),
        }
    }

    /// Central finite-difference Jacobian of a two-dimensional family.
    pub fn jacobian(&self, x: f64, y: f64, h: f64) -> Result<[[f64; 2]; 2]> {
        let (a1, b1) = self.eval2(x + h, y)?;
        let (a0, b0) = self.eval2(x - h, y)?;
        let (c1, d1) = self.eval2(x, y + h)?;
        let (c0, d0) = self.eval2(x, y - h)?;
        let inv = 1.0 / (2.0 * h);
        Ok([[(a1 - a0) * inv, (c1 - c0) * inv], [(b1 - b0) * inv, (d1 - d0) * inv]])
    }

    /// Derivative of the requested order at `p`. One-dimensional families
    /// are analytic; planar families return a finite-difference Jacobian
    /// for order 1 only.
    pub fn differentiate(&self, p: Point, order: u8) -> Result<Derivative> {
        match p {
            Point::One(x) => {
                if self.dimension() != 1 {
                    return Err(Error::Arity { expected: 2, got: 1 });
                }
                Ok(Derivative { value: DerivativeValue::Scalar(self.derivative1(x, order)?), fd_step: None })
            }
            Point::Two(x, y) => {
                if self.dimension() != 2 {
                    return Err(Error::Arity { expected: 1, got: 2 });
                }
                if order != 1 {
                    return Err(Error::UnsupportedOrder { order });
                }
                Ok(Derivative { value: DerivativeValue::Jacobian(self.jacobian(x, y, FD_STEP)?), fd_step: Some(FD_STEP) })
            }
        }
    }

    /// `Sf = f'''/f' - 3/2 (f''/f')^2`.
    pub fn schwarzian(&self, x: f64) -> Result<f64> {
        if self.dimension() != 1 {
            return Err(Error::Arity { expected: 1, got: 2 });
        }
        let d1 = self.derivative1(x, 1)?;
        if d1.abs() < TOL_CRIT {
            return Err(Error::SingularPoint { x, derivative: d1 });
        }
        let d2 = self.derivative1(x, 2)?;
        let d3 = self.derivative1(x, 3)?;
        let r = d2 / d1;
        Ok(d3 / d1 - 1.5 * r * r)
    }
}

/// Value of `beta_c` above which the cobweb fixed point `z = 1` repels:
/// `(2 - alpha) / alpha`.
pub fn cobweb_repelling_threshold(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok((2.0 - alpha) / alpha)
}

pub fn is_repelling(alpha: f64, beta_c: f64) -> Result<bool> {
    Ok(beta_c > cobweb_repelling_threshold(alpha)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn logistic(nu: f64) -> MapModel {
        MapModel::logistic(nu).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let m = logistic(5.0);
        assert_eq!(m.evaluate(Point::One(0.0)).unwrap(), Point::One(0.0));
        assert_eq!(m.eval1(0.5).unwrap(), 1.25);
        for (a, b) in [(0.1, 0.5), (0.5, 3.0), (0.9, 20.0)] {
            let c = MapModel::cobweb(a, b).unwrap();
            assert!((c.eval1(1.0).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn evaluate_errors() {
        let c = MapModel::cobweb(0.5, 3.0).unwrap();
        assert!(matches!(c.eval1(0.0), Err(Error::Domain(_))));
        assert!(matches!(c.eval1(-1.0), Err(Error::Domain(_))));
        assert!(matches!(c.evaluate(Point::Two(1.0, 1.0)), Err(Error::Arity { .. })));
        let l = MapModel::Linear2d { m: [[1.0, 0.0], [0.0, 1.0]] };
        assert!(matches!(l.evaluate(Point::One(1.0)), Err(Error::Arity { .. })));
    }

    #[test]
    fn constructor_validation() {
        assert!(MapModel::cobweb(0.0, 1.0).is_err());
        assert!(MapModel::cobweb(1.0, 1.0).is_err());
        assert!(MapModel::cobweb(0.5, -1.0).is_err());
        assert!(MapModel::from_params(Family::Logistic, &[5.0, 1.0]).is_err());
        assert!(MapModel::from_params(Family::HeteroMarket, &[0.5; 5]).is_err());
        assert_eq!(MapModel::from_params(Family::Logistic, &[5.0]).unwrap(), logistic(5.0));
    }

    #[test]
    fn derivative_examples() {
        let m = logistic(5.0);
        assert_eq!(m.derivative1(0.0, 1).unwrap(), 5.0);
        assert_eq!(m.derivative1(0.5, 1).unwrap(), 0.0);
        let c = MapModel::cobweb(0.5, 3.0).unwrap();
        let d = c.differentiate(Point::One(1.0), 1).unwrap();
        assert_eq!(d.value, DerivativeValue::Scalar(-1.0));
        assert!(d.fd_step.is_none());
        let l = MapModel::Linear2d { m: [[0.5, 0.0], [0.0, 2.0]] };
        assert!(matches!(l.differentiate(Point::Two(0.0, 0.0), 3), Err(Error::UnsupportedOrder { order: 3 })));
        let j = l.differentiate(Point::Two(0.0, 0.0), 1).unwrap();
        assert_eq!(j.fd_step, Some(FD_STEP));
        assert!(matches!(m.differentiate(Point::One(0.1), 4), Err(Error::UnsupportedOrder { order: 4 })));
    }

    #[test]
    fn schwarzian_examples() {
        let m = logistic(5.0);
        assert!((m.schwarzian(0.0).unwrap() + 6.0).abs() < 1e-12);
        assert!((m.schwarzian(0.25).unwrap() + 24.0).abs() < 1e-12);
        assert!(matches!(m.schwarzian(0.5), Err(Error::SingularPoint { .. })));
        assert!(matches!(logistic(3.3).schwarzian(0.5), Err(Error::SingularPoint { .. })));
    }

    #[test]
    fn cobweb_threshold_examples() {
        assert_eq!(cobweb_repelling_threshold(0.5).unwrap(), 3.0);
        let near_one = cobweb_repelling_threshold(1.0 - 1e-9).unwrap();
        assert!((near_one - 1.0).abs() < 1e-8);
        assert!(!is_repelling(0.5, 3.0).unwrap());
        let d = MapModel::cobweb(0.5, 3.0).unwrap().derivative1(1.0, 1).unwrap();
        assert_eq!(d.abs(), 1.0);
        assert!(cobweb_repelling_threshold(0.0).is_err());
        assert!(cobweb_repelling_threshold(1.0).is_err());
    }

    #[test]
    fn repelling_predicate_matches_derivative_on_grid() {
        for i in 1..=20 {
            let alpha = i as f64 / 21.0;
            for j in 1..=20 {
                let beta_c = 0.5 * j as f64;
                let d = MapModel::cobweb(alpha, beta_c).unwrap().derivative1(1.0, 1).unwrap();
                let threshold = cobweb_repelling_threshold(alpha).unwrap();
                // skip grid points sitting on the boundary to round-off
                if (beta_c - threshold).abs() < 1e-9 {
                    continue;
                }
                assert_eq!(is_repelling(alpha, beta_c).unwrap(), d.abs() > 1.0, "alpha={alpha} beta={beta_c}");
            }
        }
    }

    #[test]
    fn hetero_market_z_axis_is_invariant() {
        let p = HeteroParams { alpha: 0.3, b: 1.5, big_b: 2.0, beta: 1.2, c1: 0.2, c2: 0.7 };
        let m = MapModel::hetero_market(p).unwrap();
        let m_star = (p.beta * (p.c2 - p.c1) / 2.0).tanh();
        let (z, w) = m.eval2(0.0, m_star).unwrap();
        assert_eq!(z, 0.0);
        assert!((w - m_star).abs() < 1e-15);
        // m' does not depend on m when z = 0
        assert_eq!(m.eval2(0.0, -0.4).unwrap().1, m.eval2(0.0, 0.9).unwrap().1);
    }

    #[test]
    fn olg2d_backward_map_shifts_second_coordinate() {
        let chi = Polynomial::new(vec![0.0, 3.6, -3.6], (0.0, 1.0)).unwrap();
        let m = MapModel::olg2d(0.5, 0.2, chi.clone()).unwrap();
        let (z, w) = m.eval2(0.3, 0.1).unwrap();
        let arg = 0.5 * (1.0 - 0.2 + 2.0) * 0.3 - 0.5 * 0.1;
        assert!((z - chi.eval(arg)).abs() < 1e-15);
        assert_eq!(w, 0.3);
    }

    #[test]
    fn evaluation_is_pure() {
        let m = MapModel::cobweb(0.3, 7.0).unwrap();
        let a = m.eval1(0.77).unwrap();
        let b = m.eval1(0.77).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    proptest! {
        #[test]
        fn logistic_derivative_matches_finite_difference(x in 0.0f64..1.0, nu in 3.0f64..8.0) {
            prop_assume!((x - 0.5).abs() > 0.01);
            let m = logistic(nu);
            let h = 1e-6;
            let fd = (m.eval1(x + h).unwrap() - m.eval1(x - h).unwrap()) / (2.0 * h);
            let d = m.derivative1(x, 1).unwrap();
            prop_assert!(((fd - d) / d).abs() < 1e-6);
        }

        #[test]
        fn cobweb_derivatives_match_finite_difference(z in 0.3f64..3.0, alpha in 0.05f64..0.95, b in 0.5f64..6.0) {
            let m = MapModel::cobweb(alpha, b).unwrap();
            let h = 1e-5;
            for order in 1..=3u8 {
                let lo = m.derivative1(z - h, order - 1).or_else(|_| m.eval1(z - h)).unwrap();
                let hi = m.derivative1(z + h, order - 1).or_else(|_| m.eval1(z + h)).unwrap();
                let fd = (hi - lo) / (2.0 * h);
                let d = m.derivative1(z, order).unwrap();
                prop_assert!((fd - d).abs() <= 1e-5 * d.abs().max(1.0), "order {} fd {} d {}", order, fd, d);
            }
        }

        #[test]
        fn logistic_schwarzian_is_negative(x in 0.0f64..1.0, nu in 3.0f64..8.0) {
            prop_assume!((x - 0.5).abs() > 1e-6);
            prop_assert!(logistic(nu).schwarzian(x).unwrap() < 0.0);
        }
    }
}
