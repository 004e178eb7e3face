use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invlim::Prehistory;

/// Default bound on the discarded tail of `W`.
pub const TAIL_TARGET: f64 = 1e-12;

/// Parameters of the utility `U` and its discounted sum `W`.
///
/// `U(x) = m^(1-sigma)/(1-sigma) + (2-m)^(1-gamma)/(1-gamma)` with
/// `m = min(1, x)`, and `W(x) = sum_i beta^i U(x_-i)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UtilitySpec {
    pub sigma: f64,
    pub gamma: f64,
    pub beta: f64,
    pub tail_target: f64,
    /// Inputs below the floor are evaluated at the floor. Required when
    /// `sigma > 1` or `gamma > 1`.
    pub x_floor: Option<f64>,
}

impl UtilitySpec {
    pub fn new(sigma: f64, gamma: f64, beta: f64) -> Result<Self> {
        Self::with_options(sigma, gamma, beta, TAIL_TARGET, None)
    }

    pub fn with_options(sigma: f64, gamma: f64, beta: f64, tail_target: f64, x_floor: Option<f64>) -> Result<Self> {
        if sigma == 1.0 || gamma == 1.0 {
            return Err(Error::SigmaOne);
        }
        if !(sigma > 0.0 && gamma > 0.0 && sigma.is_finite() && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!("sigma and gamma must be positive, got {sigma}, {gamma}")));
        }
        if !(0.0..1.0).contains(&beta) {
            return Err(Error::InvalidParameter(format!("beta must lie in [0, 1), got {beta}")));
        }
        if !(tail_target > 0.0) {
            return Err(Error::InvalidParameter(format!("tail_target must be positive, got {tail_target}")));
        }
        match x_floor {
            Some(f) if !(f > 0.0 && f < 1.0) => {
                return Err(Error::InvalidParameter(format!("x_floor must lie in (0, 1), got {f}")))
            }
            None if sigma > 1.0 || gamma > 1.0 => {
                return Err(Error::InvalidParameter("sigma or gamma above 1 needs an x_floor".into()))
            }
            _ => {}
        }
        Ok(Self { sigma, gamma, beta, tail_target, x_floor })
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        Self::with_options(self.sigma, self.gamma, beta, self.tail_target, self.x_floor)
    }

    fn floor(&self) -> f64 {
        self.x_floor.unwrap_or(0.0)
    }

    /// `U(x)` without input checks; `x` is clamped to the floor.
    #[inline]
    pub fn u(&self, x: f64) -> f64 {
        let m = x.max(self.floor()).min(1.0);
        m.powf(1.0 - self.sigma) / (1.0 - self.sigma) + (2.0 - m).powf(1.0 - self.gamma) / (1.0 - self.gamma)
    }

    pub fn eval_u(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(Error::Domain(format!("utility needs x >= 0, got {x}")));
        }
        Ok(self.u(x))
    }

    /// Two-good form `x^(1-sigma)/(1-sigma) + y^(1-gamma)/(1-gamma)`.
    pub fn eval_u2(&self, x: f64, y: f64) -> Result<f64> {
        if !(x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0) {
            return Err(Error::Domain(format!("two-good utility needs x, y in (0, 1), got ({x}, {y})")));
        }
        Ok(x.powf(1.0 - self.sigma) / (1.0 - self.sigma) + y.powf(1.0 - self.gamma) / (1.0 - self.gamma))
    }

    /// `sup |U|` over `[0, 1]`. `U` is nondecreasing there since
    /// `m^-sigma >= 1 >= (2-m)^-gamma`, so the supremum sits at an endpoint.
    pub fn sup_abs_u(&self) -> f64 {
        self.u(self.floor()).abs().max(self.u(1.0).abs())
    }

    /// Hoelder exponent of `U` on `[0, 1]`.
    pub fn holder_exponent(&self) -> f64 {
        if self.sigma < 1.0 {
            1.0 - self.sigma
        } else {
            1.0
        }
    }

    /// Modulus of continuity: `|U(x) - U(y)| <= omega(|x - y|)` for `|x - y| <= 1`.
    pub fn modulus(&self, delta: f64) -> f64 {
        let delta = delta.clamp(0.0, 1.0);
        if self.sigma < 1.0 {
            (1.0 / (1.0 - self.sigma) + 1.0) * delta.powf(1.0 - self.sigma)
        } else {
            (self.floor().powf(-self.sigma) + 1.0) * delta
        }
    }

    /// `beta^(r+1) sup|U| / (1 - beta)`, the tail beyond term `r`.
    pub fn tail_bound(&self, r: usize) -> f64 {
        if self.beta == 0.0 {
            return 0.0;
        }
        self.beta.powi(r as i32 + 1) * self.sup_abs_u() / (1.0 - self.beta)
    }

    /// Smallest truncation depth whose tail is below `tail_target`.
    pub fn r_w(&self) -> usize {
        (0..).find(|&r| self.tail_bound(r) < self.tail_target).expect("beta < 1")
    }

    /// `sum_{i<=r} beta^i`.
    pub fn discount_sum(&self, r: usize) -> f64 {
        (0..=r).map(|i| self.beta.powi(i as i32)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WValue {
    pub value: f64,
    pub tail_bound: f64,
}

/// `W` truncated at `r_W` terms, with the certified tail.
pub fn eval_utility_w(spec: &UtilitySpec, x: &Prehistory) -> Result<WValue> {
    let r = spec.r_w();
    if x.depth() < r {
        return Err(Error::InsufficientDepth { needed: r, have: x.depth() });
    }
    let mut w = 1.0;
    let mut value = 0.0;
    for &s in &x.states()[..=r] {
        value += w * spec.u(s);
        w *= spec.beta;
    }
    Ok(WValue { value, tail_bound: spec.tail_bound(r) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Terms {
    /// All terms up to `r_W`.
    Full,
    /// `W_n = sum_{i<=n} beta^i U(x_-i)`; `Upto(0)` is `U` of the head.
    Upto(usize),
}

/// A potential on prehistories.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Potential {
    Constant(f64),
    Utility { spec: UtilitySpec, terms: Terms },
    Shifted(Box<Potential>, f64),
}

impl Potential {
    pub fn zero() -> Self {
        Potential::Constant(0.0)
    }

    /// `U` composed with the projection to the head coordinate.
    pub fn u(spec: UtilitySpec) -> Self {
        Potential::Utility { spec, terms: Terms::Upto(0) }
    }

    pub fn w(spec: UtilitySpec) -> Self {
        Potential::Utility { spec, terms: Terms::Full }
    }

    pub fn w_n(spec: UtilitySpec, n: usize) -> Self {
        Potential::Utility { spec, terms: Terms::Upto(n) }
    }

    pub fn shifted(self, c: f64) -> Self {
        Potential::Shifted(Box::new(self), c)
    }

    /// Number of past coordinates read, beyond the head.
    pub fn depth(&self) -> usize {
        match self {
            Potential::Constant(_) => 0,
            Potential::Utility { spec, terms: Terms::Full } => spec.r_w(),
            Potential::Utility { terms: Terms::Upto(n), .. } => *n,
            Potential::Shifted(p, _) => p.depth(),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Potential::Constant(_) => true,
            Potential::Shifted(p, _) => p.is_constant(),
            Potential::Utility { .. } => false,
        }
    }

    pub fn eval(&self, x: &Prehistory) -> Result<f64> {
        let r = self.depth();
        if x.depth() < r {
            return Err(Error::InsufficientDepth { needed: r, have: x.depth() });
        }
        Ok(self.eval_with(|i| x.states()[i]))
    }

    /// Evaluates on coordinates supplied by `coord(i) = x_-i`.
    pub(crate) fn eval_with<C: Fn(usize) -> f64>(&self, coord: C) -> f64 {
        match self {
            Potential::Constant(c) => *c,
            Potential::Shifted(p, c) => p.eval_with(coord) + c,
            Potential::Utility { spec, .. } => {
                let mut w = 1.0;
                let mut v = 0.0;
                for i in 0..=self.depth() {
                    v += w * spec.u(coord(i));
                    w *= spec.beta;
                }
                v
            }
        }
    }

    /// `S_n phi` along a periodic orbit `orbit[k] = f^k(orbit[0])`, each
    /// term read from the cyclic prehistory.
    pub fn birkhoff_periodic(&self, orbit: &[f64]) -> f64 {
        let n = orbit.len();
        match self {
            Potential::Constant(c) => n as f64 * c,
            Potential::Shifted(p, c) => p.birkhoff_periodic(orbit) + n as f64 * c,
            Potential::Utility { spec, .. } => {
                let us: Vec<f64> = orbit.iter().map(|&x| spec.u(x)).collect();
                let r = self.depth();
                (0..n)
                    .map(|k| {
                        let mut w = 1.0;
                        let mut v = 0.0;
                        let mut j = k;
                        for _ in 0..=r {
                            v += w * us[j];
                            w *= spec.beta;
                            j = if j == 0 { n - 1 } else { j - 1 };
                        }
                        v
                    })
                    .sum()
            }
        }
    }
}

/// `S_n phi(x) = sum_{k<n} phi(f^k x)` along the lifted map.
pub fn birkhoff_sum(phi: &Potential, x: &Prehistory, n: usize) -> Result<f64> {
    let mut p = x.clone();
    let mut total = 0.0;
    for k in 0..n {
        if k > 0 {
            p = p.lift_shift()?;
        }
        total += phi.eval(&p)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::MapModel;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn half() -> UtilitySpec {
        UtilitySpec::new(0.5, 0.5, 0.5).unwrap()
    }

    fn fixed(p: f64, depth: usize) -> Prehistory {
        Prehistory::periodic(Arc::new(MapModel::logistic(5.0).unwrap()), &[p], depth).unwrap()
    }

    #[test]
    fn u_examples() {
        let s = half();
        assert_eq!(s.eval_u(1.0).unwrap(), 4.0);
        assert_eq!(s.eval_u(2.0).unwrap(), 4.0);
        assert!((s.eval_u(0.25).unwrap() - (1.0 + 2.0 * 1.75f64.sqrt())).abs() < 1e-14);
        assert!(matches!(s.eval_u(-0.1), Err(Error::Domain(_))));
        assert_eq!(UtilitySpec::new(1.0, 0.5, 0.5), Err(Error::SigmaOne));
        assert_eq!(UtilitySpec::new(0.5, 1.0, 0.5), Err(Error::SigmaOne));
        assert!(UtilitySpec::new(1.5, 0.5, 0.5).is_err());
        assert!(UtilitySpec::with_options(1.5, 0.5, 0.5, 1e-12, Some(0.01)).is_ok());
        assert!((s.eval_u2(0.25, 0.25).unwrap() - 2.0).abs() < 1e-15);
        assert!(s.eval_u2(0.0, 0.5).is_err());
    }

    #[test]
    fn sup_and_truncation() {
        let s = half();
        assert_eq!(s.sup_abs_u(), 4.0);
        let r = s.r_w();
        assert!(s.tail_bound(r) < 1e-12);
        assert!(s.tail_bound(r - 1) >= 1e-12);
        let zero = UtilitySpec::new(0.5, 0.5, 0.0).unwrap();
        assert_eq!(zero.r_w(), 0);
        assert_eq!(zero.tail_bound(0), 0.0);
    }

    #[test]
    fn w_examples() {
        let s = half();
        let p = 0.8;
        let r = s.r_w();
        let w = eval_utility_w(&s, &fixed(p, r)).unwrap();
        assert!((w.value - s.u(p) * (1.0 - 0.5f64.powi(r as i32 + 1)) / 0.5).abs() < 1e-13);
        assert!((w.value - s.u(p) / 0.5).abs() <= w.tail_bound);

        let zero = UtilitySpec::new(0.5, 0.5, 0.0).unwrap();
        let w0 = eval_utility_w(&zero, &fixed(p, 0)).unwrap();
        assert_eq!(w0.value, zero.u(p));
        assert_eq!(w0.tail_bound, 0.0);

        let nu = 5.0f64;
        let root = ((nu + 1.0) * (nu - 3.0)).sqrt();
        let (q1, q2) = ((nu + 1.0 - root) / (2.0 * nu), (nu + 1.0 + root) / (2.0 * nu));
        let cyc = Prehistory::periodic(Arc::new(MapModel::logistic(nu).unwrap()), &[q1, q2], r).unwrap();
        let w = eval_utility_w(&s, &cyc).unwrap();
        // x-1 = q2, x-2 = q1, ...
        let closed = (s.u(q1) + 0.5 * s.u(q2)) / (1.0 - 0.25);
        assert!((w.value - closed).abs() <= w.tail_bound + 1e-14);

        assert!(matches!(eval_utility_w(&s, &fixed(p, 3)), Err(Error::InsufficientDepth { .. })));
    }

    #[test]
    fn birkhoff_examples() {
        let x = fixed(0.8, 60);
        assert_eq!(birkhoff_sum(&Potential::Constant(1.5), &x, 4).unwrap(), 6.0);
        let w = Potential::w(half());
        let one = birkhoff_sum(&w, &x, 1).unwrap();
        assert_eq!(one, w.eval(&x).unwrap());
        let five = birkhoff_sum(&w, &x, 5).unwrap();
        assert!((five - 5.0 * one).abs() < 1e-12);
    }

    #[test]
    fn periodic_birkhoff_matches_lifted_sum() {
        let nu = 5.0;
        let table = crate::symbolic::PeriodicTable::build(nu, 5).unwrap();
        let orbit = table.orbit(0b01101);
        let spec = UtilitySpec::new(0.3, 0.7, 0.4).unwrap();
        let depth = spec.r_w() + 10;
        let x = Prehistory::periodic(Arc::new(MapModel::logistic(nu).unwrap()), &orbit, depth).unwrap();
        for phi in [Potential::w(spec), Potential::u(spec), Potential::w_n(spec, 3).shifted(-1.0)] {
            let lifted = birkhoff_sum(&phi, &x, 5).unwrap();
            assert!((phi.birkhoff_periodic(&orbit) - lifted).abs() < 1e-10);
        }
    }

    proptest! {
        #[test]
        fn truncation_brackets_deeper_sum(x0 in 0.0f64..1.0, sigma in 0.1f64..0.9, gamma in 0.1f64..0.9, beta in 0.05f64..0.9) {
            let s = UtilitySpec::new(sigma, gamma, beta).unwrap();
            let r = s.r_w();
            // a prehistory through an arbitrary head: walk back along the left branch
            let mut states = vec![x0];
            for _ in 0..r + 10 {
                let y = *states.last().unwrap();
                states.push(crate::symbolic::inverse_branch(5.0, 1, y));
            }
            let full = Prehistory::new(Arc::new(MapModel::logistic(5.0).unwrap()), states).unwrap();
            let short = eval_utility_w(&s, &full).unwrap();
            let deep: f64 = full.states().iter().enumerate().map(|(i, &x)| beta.powi(i as i32) * s.u(x)).sum();
            prop_assert!((short.value - deep).abs() <= short.tail_bound + 1e-12);
        }

        #[test]
        fn modulus_bounds_differences(x in 0.0f64..1.0, y in 0.0f64..1.0, sigma in 0.05f64..0.95, gamma in 0.05f64..0.95) {
            let s = UtilitySpec::new(sigma, gamma, 0.5).unwrap();
            prop_assert!((s.u(x) - s.u(y)).abs() <= s.modulus((x - y).abs()) + 1e-12);
            prop_assert!(s.u(x).abs() <= s.sup_abs_u() + 1e-12);
        }
    }
}
