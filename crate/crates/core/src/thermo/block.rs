use serde::{Deserialize, Serialize};

use super::utility::{Potential, Terms, UtilitySpec};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::symbolic::{self, code_to_symbols, cylinder_interval};

/// Longest block handled by the transfer matrix.
pub const L_MAX: usize = 16;
const MAX_ITER: usize = 200_000;
const RESIDUAL_TOL: f64 = 1e-10;

/// How the window potential was built from a utility.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowInfo {
    pub nu: f64,
    pub potential: Potential,
    /// Number of past terms read (`W_n` reads `x0 .. x-n`).
    pub n_terms: usize,
    /// Forward symbols used to place each coordinate.
    pub r_d: usize,
    /// `U` of the decode midpoint of each `r_d`-word, for the window spec.
    mids: Vec<f64>,
    /// Bound on `|W_n - window potential|`.
    pub error_bound: f64,
}

/// Stationary Markov measure on `L`-symbol windows with transition weights
/// `exp(Phi(u))` from window `u` to each of its two successors.
///
/// Windows are stored as integers with the oldest symbol in the most
/// significant bit; the successor of `u` drops it and appends a new symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockMarkovMeasure {
    l: usize,
    phi: Vec<f64>,
    right: Vec<f64>,
    stationary: Vec<f64>,
    log_lambda: f64,
    residual: f64,
    iterations: usize,
    window: Option<WindowInfo>,
}

fn normalize(v: &mut [f64]) -> f64 {
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    s
}

impl BlockMarkovMeasure {
    /// Builds the measure from a potential given on all `2^l` windows.
    pub fn from_window_potential(l: usize, phi: Vec<f64>) -> Result<Self> {
        Self::build(l, phi, None)
    }

    fn build(l: usize, phi: Vec<f64>, window: Option<WindowInfo>) -> Result<Self> {
        if l == 0 || l > L_MAX {
            return Err(Error::Capacity(format!("block length must be in 1..={L_MAX}, got {l}")));
        }
        let size = 1usize << l;
        if phi.len() != size {
            return Err(Error::InvalidParameter(format!("window potential needs {size} values, got {}", phi.len())));
        }
        if phi.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParameter("window potential must be finite".into()));
        }
        let mask = size - 1;
        let top = 1usize << (l - 1);
        let shift = phi.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let e: Vec<f64> = phi.iter().map(|p| (p - shift).exp()).collect();

        let mut r = vec![1.0 / size as f64; size];
        let mut left = r.clone();
        let mut next = vec![0.0; size];
        let mut lambda = 0.0;
        let mut residual = f64::INFINITY;
        let mut iterations = 0;
        while iterations < MAX_ITER {
            iterations += 1;
            for u in 0..size {
                let v = (u << 1) & mask;
                next[u] = e[u] * (r[v] + r[v | 1]);
            }
            let lam_r = normalize(&mut next);
            let res_r = next.iter().zip(&r).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
                / r.iter().copied().fold(0.0, f64::max);
            std::mem::swap(&mut r, &mut next);

            for (v, out) in next.iter_mut().enumerate() {
                let u0 = v >> 1;
                let u1 = u0 | top;
                *out = e[u0] * left[u0] + e[u1] * left[u1];
            }
            let lam_l = normalize(&mut next);
            let res_l = next.iter().zip(&left).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
                / left.iter().copied().fold(0.0, f64::max);
            std::mem::swap(&mut left, &mut next);

            lambda = 0.5 * (lam_r + lam_l);
            residual = res_r.max(res_l).max((lam_r - lam_l).abs() / lambda);
            if residual < 1e-14 {
                break;
            }
        }
        if !(residual < RESIDUAL_TOL) {
            return Err(Error::NonConvergence { residual, iterations });
        }
        let mut stationary: Vec<f64> = left.iter().zip(&r).map(|(a, b)| a * b).collect();
        normalize(&mut stationary);
        Ok(Self { l, phi, right: r, stationary, log_lambda: lambda.ln() + shift, residual, iterations, window })
    }

    /// Block measure for a constant (`L = 1`), a truncation `W_n` (`L = n + r_d`)
    /// or the full `W` (folded, `L = r_d`).
    pub fn for_potential(phi: &Potential, nu: f64, r_d: usize) -> Result<Self> {
        match phi {
            Potential::Constant(c) => Self::from_window_potential(1, vec![*c; 2]),
            Potential::Shifted(base, c) => {
                let mut m = Self::for_potential(base, nu, r_d)?;
                m.phi.iter_mut().for_each(|p| *p += c);
                m.log_lambda += c;
                if let Some(w) = m.window.as_mut() {
                    w.potential = phi.clone();
                }
                Ok(m)
            }
            Potential::Utility { spec, terms: Terms::Upto(n) } => equilibrium_block_markov(spec, *n, r_d, nu),
            Potential::Utility { spec, terms: Terms::Full } => equilibrium_block_markov_folded(spec, r_d, nu),
        }
    }

    pub fn block_length(&self) -> usize {
        self.l
    }

    /// Pressure of the window potential, `log` of the leading eigenvalue.
    pub fn pressure(&self) -> f64 {
        self.log_lambda
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    pub fn window_potential(&self) -> &[f64] {
        &self.phi
    }

    pub fn window(&self) -> Option<&WindowInfo> {
        self.window.as_ref()
    }

    /// Stationary expectation of the window potential.
    pub fn mean_potential(&self) -> f64 {
        self.stationary.iter().zip(&self.phi).map(|(p, f)| p * f).sum()
    }

    /// Kolmogorov-Sinai entropy, `P - integral of Phi`.
    pub fn entropy(&self) -> f64 {
        self.log_lambda - self.mean_potential()
    }

    /// Mass of the cylinder of words starting with `prefix`.
    pub fn cylinder_mass(&self, prefix: &[u8]) -> f64 {
        let l = self.l;
        let k = prefix.len();
        if k <= l {
            let want = symbolic::symbols_to_code(prefix) as usize;
            return self.stationary.iter().enumerate().filter(|(u, _)| u >> (l - k) == want).map(|(_, p)| p).sum();
        }
        // extend along the Markov chain: P(u -> v) = e^Phi(u) r_v / (lambda r_u)
        let mask = (1usize << l) - 1;
        let lambda = self.log_lambda;
        let mut u = symbolic::symbols_to_code(&prefix[..l]) as usize;
        let mut mass = self.stationary[u];
        for &s in &prefix[l..] {
            let v = ((u << 1) & mask) | usize::from(s - 1);
            mass *= (self.phi[u] - lambda).exp() * self.right[v] / self.right[u];
            u = v;
        }
        mass
    }

    /// Stationary average of `phi`. Utility potentials are read through the
    /// window midpoints; terms older than the window use stationarity.
    pub fn average(&self, phi: &Potential) -> Result<f64> {
        match phi {
            Potential::Constant(c) => Ok(*c),
            Potential::Shifted(base, c) => Ok(self.average(base)? + c),
            Potential::Utility { spec, .. } => {
                if self.window.as_ref().map(|w| &w.potential) == Some(phi) {
                    return Ok(self.mean_potential());
                }
                let w = self.window.as_ref().ok_or(Error::MismatchedPotential)?;
                let positions = w.n_terms + 1;
                let mask = (1usize << w.r_d) - 1;
                let us: Vec<f64> = w.mids.iter().map(|&m| spec.u(m)).collect();
                // expectation of U at window position j (0 = oldest)
                let at = |j: usize| -> f64 {
                    let sh = self.l - j - w.r_d;
                    self.stationary.iter().enumerate().map(|(u, p)| p * us[(u >> sh) & mask]).sum()
                };
                let expect: Vec<f64> = (0..positions).map(at).collect();
                let r = phi.depth();
                let mut total = 0.0;
                let mut b = 1.0;
                for i in 0..=r {
                    let j = w.n_terms.saturating_sub(i);
                    total += b * expect[j];
                    b *= spec.beta;
                }
                Ok(total)
            }
        }
    }
}

/// Equilibrium measure of `W_n` with each coordinate replaced by the decode
/// midpoint of its next `r_d` symbols; block length `n + r_d`.
pub fn equilibrium_block_markov(spec: &UtilitySpec, n: usize, r_d: usize, nu: f64) -> Result<BlockMarkovMeasure> {
    let l = n + r_d;
    if r_d == 0 || l > L_MAX {
        return Err(Error::Capacity(format!("block length n + r_d = {l} must be in 1..={L_MAX} with r_d >= 1")));
    }
    let (mids, us, error_bound) = window_utilities(spec, r_d, nu)?;
    let width_mask = (1usize << r_d) - 1;
    let phi = Exec::default().map_range(1usize << l, |u| {
        let mut b = 1.0;
        let mut v = 0.0;
        for i in 0..=n {
            // coordinate x_-i starts at window position n - i
            let sh = l - (n - i) - r_d;
            v += b * us[(u >> sh) & width_mask];
            b *= spec.beta;
        }
        v
    });
    let info = WindowInfo {
        nu,
        potential: Potential::w_n(*spec, n),
        n_terms: n,
        r_d,
        mids,
        error_bound: error_bound * spec.discount_sum(n),
    };
    BlockMarkovMeasure::build(l, phi, Some(info))
}

/// Equilibrium measure of the full `W` on `r_d`-symbol windows.
///
/// On a periodic orbit `S_N W = S_N U / (1 - beta)` term by term, so `W` and
/// `U / (1 - beta)` (with the same truncation) are cohomologous and share
/// pressure and equilibrium measure; the latter reads a single coordinate.
pub fn equilibrium_block_markov_folded(spec: &UtilitySpec, r_d: usize, nu: f64) -> Result<BlockMarkovMeasure> {
    if r_d == 0 || r_d > L_MAX {
        return Err(Error::Capacity(format!("block length r_d = {r_d} must be in 1..={L_MAX}")));
    }
    let (mids, us, error_bound) = window_utilities(spec, r_d, nu)?;
    let scale = spec.discount_sum(spec.r_w());
    let phi = us.iter().map(|u| u * scale).collect();
    let info = WindowInfo { nu, potential: Potential::w(*spec), n_terms: 0, r_d, mids, error_bound: error_bound * scale };
    BlockMarkovMeasure::build(r_d, phi, Some(info))
}

fn window_utilities(spec: &UtilitySpec, r_d: usize, nu: f64) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    symbolic::branch_gap(nu)?;
    let mids: Vec<f64> = (0..1usize << r_d)
        .map(|w| {
            let (lo, hi) = cylinder_interval(nu, &code_to_symbols(w as u64, r_d));
            0.5 * (lo + hi)
        })
        .collect();
    let us = mids.iter().map(|&m| spec.u(m)).collect();
    let width = symbolic::max_cylinder_width(nu, r_d, Exec::default())?;
    Ok((mids, us, spec.modulus(width)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo::{equilibrium_periodic, pressure_periodic};

    const LN2: f64 = std::f64::consts::LN_2;

    #[test]
    fn constant_potential_gives_uniform_measure() {
        for (l, c) in [(1, 0.0), (4, 0.7), (8, -2.0)] {
            let m = BlockMarkovMeasure::from_window_potential(l, vec![c; 1 << l]).unwrap();
            assert!((m.pressure() - (LN2 + c)).abs() < 1e-13);
            let u = 1.0 / (1 << l) as f64;
            assert!(m.stationary().iter().all(|p| (p - u).abs() < 1e-15));
            assert!((m.entropy() - LN2).abs() < 1e-13);
        }
        assert!(matches!(BlockMarkovMeasure::from_window_potential(17, vec![]), Err(Error::Capacity(_))));
    }

    #[test]
    fn stationary_is_a_probability_vector() {
        let spec = UtilitySpec::new(0.5, 0.5, 0.3).unwrap();
        let m = equilibrium_block_markov(&spec, 2, 8, 5.0).unwrap();
        let total: f64 = m.stationary().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(m.residual() < 1e-10);
        let depth1 = m.cylinder_mass(&[1]) + m.cylinder_mass(&[2]);
        assert!((depth1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn long_cylinders_are_consistent() {
        let spec = UtilitySpec::new(0.5, 0.5, 0.3).unwrap();
        let m = equilibrium_block_markov(&spec, 1, 3, 5.0).unwrap();
        let prefix = [1u8, 2, 2, 1, 2, 1];
        let a = m.cylinder_mass(&prefix);
        let mut ext = prefix.to_vec();
        ext.push(1);
        let b = m.cylinder_mass(&ext);
        ext.pop();
        ext.push(2);
        let c = m.cylinder_mass(&ext);
        assert!((a - b - c).abs() < 1e-14);
        // stationarity: the mass of [w] equals the summed mass of [s w]
        let shifted = m.cylinder_mass(&[1, 1, 2, 2]) + m.cylinder_mass(&[2, 1, 2, 2]);
        assert!((shifted - m.cylinder_mass(&[1, 2, 2])).abs() < 1e-12);
    }

    #[test]
    fn head_utility_matches_periodic_pressure() {
        // W_0 = U of the head
        let spec = UtilitySpec::new(0.5, 0.5, 0.5).unwrap();
        let bm = equilibrium_block_markov(&spec, 0, 10, 5.0).unwrap();
        let per = pressure_periodic(&Potential::u(spec), 5.0, &[12]).unwrap();
        assert!((bm.pressure() - per.estimate).abs() < 1e-6, "{} vs {}", bm.pressure(), per.estimate);
    }

    #[test]
    fn averages_through_window() {
        let spec = UtilitySpec::new(0.5, 0.5, 0.3).unwrap();
        let m = equilibrium_block_markov(&spec, 2, 6, 5.0).unwrap();
        let own = m.average(&Potential::w_n(spec, 2)).unwrap();
        assert!((own - m.mean_potential()).abs() < 1e-12);
        // recomputed from per-position expectations
        let other = UtilitySpec { beta: 0.3 + 1e-9, ..spec };
        let near = m.average(&Potential::w_n(other, 2)).unwrap();
        assert!((near - own).abs() < 1e-6);
        assert_eq!(m.average(&Potential::Constant(2.5)).unwrap(), 2.5);
        let plain = BlockMarkovMeasure::from_window_potential(2, vec![0.0; 4]).unwrap();
        assert_eq!(plain.average(&Potential::u(spec)), Err(Error::MismatchedPotential));
    }

    #[test]
    fn cylinder_masses_agree_with_periodic_ensemble() {
        let spec = UtilitySpec::new(0.5, 0.5, 0.3).unwrap();
        let bm = equilibrium_block_markov(&spec, 2, 8, 5.0).unwrap();
        let ens = equilibrium_periodic(&Potential::w_n(spec, 2), 5.0, 12).unwrap();
        for c in 0..8u64 {
            let w = code_to_symbols(c, 3);
            assert!((bm.cylinder_mass(&w) - ens.cylinder_mass(&w)).abs() < 1e-3);
        }
    }
}
