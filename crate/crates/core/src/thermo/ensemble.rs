use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::utility::Potential;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::symbolic::{rotate, PeriodicTable, SymbolWord};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PressureRow {
    pub n: usize,
    pub log_z: f64,
    /// `log Z_n / n`.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PressureEstimate {
    pub nu: f64,
    pub potential: Potential,
    pub rows: Vec<PressureRow>,
    /// Value at the largest `n`.
    pub estimate: f64,
    /// Difference between the last two values (0 with a single row).
    pub cauchy_gap: f64,
}

impl PressureEstimate {
    pub fn at(&self, n: usize) -> Option<f64> {
        self.rows.iter().find(|r| r.n == n).map(|r| r.value)
    }
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

fn birkhoff_table(phi: &Potential, table: &PeriodicTable, exec: Exec) -> Vec<f64> {
    let n = table.period();
    if phi.is_constant() {
        let s = phi.birkhoff_periodic(&vec![0.0; n]);
        return vec![s; table.len()];
    }
    exec.map_range(table.len(), |c| phi.birkhoff_periodic(&table.orbit(c as u64)))
}

/// `(1/n) log sum_{Fix(f^n)} exp(S_n phi)` for each `n` in `ns`.
pub fn pressure_periodic(phi: &Potential, nu: f64, ns: &[usize]) -> Result<PressureEstimate> {
    pressure_periodic_with(phi, nu, ns, Exec::default())
}

pub fn pressure_periodic_with(phi: &Potential, nu: f64, ns: &[usize], exec: Exec) -> Result<PressureEstimate> {
    if ns.is_empty() {
        return Err(Error::InvalidParameter("need at least one period".into()));
    }
    let rows = ns
        .iter()
        .map(|&n| {
            let table = PeriodicTable::build_with(nu, n, exec)?;
            let log_z = log_sum_exp(&birkhoff_table(phi, &table, exec));
            Ok(PressureRow { n, log_z, value: log_z / n as f64 })
        })
        .collect::<Result<Vec<_>>>()?;
    let estimate = rows[rows.len() - 1].value;
    let cauchy_gap = if rows.len() > 1 { (estimate - rows[rows.len() - 2].value).abs() } else { 0.0 };
    Ok(PressureEstimate { nu, potential: phi.clone(), rows, estimate, cauchy_gap })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Member {
    pub code: u64,
    pub birkhoff: f64,
    pub weight: f64,
}

/// A finitely supported invariant measure on periodic points of period
/// dividing `n`: `exp(S_n phi)`-weighted for equilibrium ensembles.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitEnsemble {
    table: Arc<PeriodicTable>,
    potential: Potential,
    members: Vec<Member>,
    log_z: f64,
}

impl OrbitEnsemble {
    pub fn period(&self) -> usize {
        self.table.period()
    }

    pub fn nu(&self) -> f64 {
        self.table.nu()
    }

    pub fn table(&self) -> &PeriodicTable {
        &self.table
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn log_z(&self) -> f64 {
        self.log_z
    }

    pub fn word(&self, code: u64) -> SymbolWord {
        self.table.word(code)
    }

    /// The invariant probability on a single periodic orbit, equally
    /// weighted over its distinct points.
    pub fn single_orbit(nu: f64, word: &SymbolWord) -> Result<Self> {
        if !word.is_periodic() {
            return Err(Error::InvalidParameter("single_orbit needs a periodic word".into()));
        }
        let n = word.block().len();
        let table = Arc::new(PeriodicTable::build(nu, n)?);
        let mut code = crate::symbolic::symbols_to_code(word.block());
        let members = (0..n)
            .map(|_| {
                let m = Member { code, birkhoff: 0.0, weight: 1.0 / n as f64 };
                code = rotate(code, n);
                m
            })
            .collect();
        Ok(Self { table, potential: Potential::zero(), members, log_z: 0.0 })
    }

    /// Mass of the cylinder of words starting with `prefix`.
    pub fn cylinder_mass(&self, prefix: &[u8]) -> f64 {
        let n = self.period();
        let k = prefix.len();
        if k > n {
            // periodic points with this longer prefix
            return self
                .members
                .iter()
                .filter(|m| (0..k).all(|j| ((m.code >> (n - 1 - j % n)) & 1) as u8 + 1 == prefix[j]))
                .map(|m| m.weight)
                .sum();
        }
        let want = crate::symbolic::symbols_to_code(prefix);
        self.members.iter().filter(|m| m.code >> (n - k) == want).map(|m| m.weight).sum()
    }

    /// `sum_i weight_i (1/n) S_n phi(p_i)`.
    pub fn average(&self, phi: &Potential, exec: Exec) -> f64 {
        let n = self.period() as f64;
        if phi.is_constant() {
            return phi.birkhoff_periodic(&[0.0]);
        }
        if phi == &self.potential {
            return self.members.iter().map(|m| m.weight * m.birkhoff / n).sum();
        }
        let parts = exec.map_slice(&self.members, |m| m.weight * phi.birkhoff_periodic(&self.table.orbit(m.code)) / n);
        parts.into_iter().sum()
    }
}

/// Equilibrium ensemble of `phi`: every periodic point of period dividing
/// `n`, weighted by `exp(S_n phi) / Z_n`.
pub fn equilibrium_periodic(phi: &Potential, nu: f64, n: usize) -> Result<OrbitEnsemble> {
    equilibrium_periodic_with(phi, nu, n, Exec::default())
}

pub fn equilibrium_periodic_with(phi: &Potential, nu: f64, n: usize, exec: Exec) -> Result<OrbitEnsemble> {
    let table = Arc::new(PeriodicTable::build_with(nu, n, exec)?);
    equilibrium_on_table(phi, table, exec)
}

/// Same as [`equilibrium_periodic`] on an existing table of periodic points.
pub fn equilibrium_on_table(phi: &Potential, table: Arc<PeriodicTable>, exec: Exec) -> Result<OrbitEnsemble> {
    let sums = birkhoff_table(phi, &table, exec);
    let log_z = log_sum_exp(&sums);
    if !log_z.is_finite() {
        return Err(Error::InvalidParameter("potential produced a non-finite partition function".into()));
    }
    let members = sums
        .iter()
        .enumerate()
        .map(|(c, &s)| Member { code: c as u64, birkhoff: s, weight: (s - log_z).exp() })
        .collect();
    Ok(OrbitEnsemble { table, potential: phi.clone(), members, log_z })
}
