use std::path::{Path, PathBuf};

use ergodyn_core::maps::{Family, HeteroParams, MapModel, PiecewisePolynomial, Polynomial};
use ergodyn_core::thermo::{Potential, UtilitySpec, TAIL_TARGET};
use ergodyn_core::{symbolic, thermo, Tolerances};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    #[serde(default)]
    pub utility: UtilityConfig,
    #[serde(default)]
    pub compute: ComputeConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    Logistic,
    GenericUnimodal,
    Cobweb,
    CashInAdvance,
    Olg2d,
    HeteroMarket,
    Linear2d,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub family: FamilyName,
    pub nu: Option<f64>,
    pub alpha: Option<f64>,
    pub beta_c: Option<f64>,
    pub a: Option<f64>,
    pub delta: Option<f64>,
    /// Polynomial coefficients, lowest degree first (generic unimodal curve
    /// or the offer curve of the 2D model).
    pub coeffs: Option<Vec<f64>>,
    pub domain: Option<(f64, f64)>,
    /// Row-major 2x2 matrix for `linear2d`.
    pub matrix: Option<[f64; 4]>,
    pub hm: Option<HmConfig>,
    pub cia: Option<CiaConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HmConfig {
    pub alpha: f64,
    pub b: f64,
    pub big_b: f64,
    pub beta: f64,
    pub c1: f64,
    pub c2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CiaConfig {
    pub breaks: Vec<f64>,
    pub coeffs: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct UtilityConfig {
    pub sigma: f64,
    pub gamma: f64,
    pub beta: f64,
    pub tail_target: f64,
    pub x_floor: Option<f64>,
}

impl Default for UtilityConfig {
    fn default() -> Self {
        Self { sigma: 0.5, gamma: 0.5, beta: 0.5, tail_target: TAIL_TARGET, x_floor: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialName {
    Zero,
    U,
    W,
    WN,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ComputeConfig {
    pub n_max: usize,
    pub quad_depth: usize,
    pub block_n: usize,
    pub decode_depth: usize,
    pub seed: u64,
    pub potential: PotentialName,
    pub orbit_start: f64,
    pub orbit_len: usize,
    pub nu_grid: Option<Vec<f64>>,
    pub beta_grid: Option<Vec<f64>>,
    pub samples: usize,
    pub eps: f64,
    pub tolerances: Tolerances,
}

impl Default for ComputeConfig {
    fn default() -> Self {
        Self {
            n_max: 12,
            quad_depth: 12,
            block_n: 2,
            decode_depth: 8,
            seed: 0x5EED,
            potential: PotentialName::W,
            orbit_start: 0.3,
            orbit_len: 20,
            nu_grid: None,
            beta_grid: None,
            samples: 100_000,
            eps: 0.1,
            tolerances: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("out"), formats: vec![Format::Csv, Format::Json] }
    }
}

/// Commands that work on the Cantor set of the logistic map.
pub fn is_symbolic(command: &str) -> bool {
    matches!(command, "pressure" | "measure" | "average" | "sweep" | "verify")
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(before.len(), |i| before.len() - i - 1) + 1;
    (line, col)
}

/// Parses config text; positions in errors are 1-based.
pub fn parse_config(src: &str) -> Result<RunConfig, CliError> {
    toml::from_str(src).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_col(src, s.start));
        CliError::Parse { line, column, message: e.message().to_string() }
    })
}

pub fn load_config(path: &Path) -> Result<(RunConfig, String), CliError> {
    let src = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok((parse_config(&src)?, src))
}

fn need(v: Option<f64>, name: &str, family: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::Validation(format!("{family} needs model.{name}")))
}

impl RunConfig {
    pub fn model(&self) -> Result<MapModel, CliError> {
        let m = &self.model;
        let model = match m.family {
            FamilyName::Logistic => MapModel::logistic(need(m.nu, "nu", "logistic")?),
            FamilyName::Cobweb => {
                MapModel::cobweb(need(m.alpha, "alpha", "cobweb")?, need(m.beta_c, "beta_c", "cobweb")?)
            }
            FamilyName::GenericUnimodal => {
                let coeffs = m.coeffs.clone().ok_or_else(|| CliError::Validation("generic_unimodal needs model.coeffs".into()))?;
                Polynomial::new(coeffs, m.domain.unwrap_or((0.0, 1.0))).map(MapModel::generic_unimodal)
            }
            FamilyName::CashInAdvance => match &m.cia {
                Some(c) => PiecewisePolynomial::new(c.breaks.clone(), c.coeffs.clone()).map(MapModel::cash_in_advance),
                None => Ok(MapModel::cash_in_advance(PiecewisePolynomial::representative_cia())),
            },
            FamilyName::Olg2d => {
                let coeffs = m.coeffs.clone().ok_or_else(|| CliError::Validation("olg2d needs model.coeffs".into()))?;
                let offer = Polynomial::new(coeffs, m.domain.unwrap_or((0.0, 1.0)))?;
                MapModel::olg2d(need(m.a, "a", "olg2d")?, need(m.delta, "delta", "olg2d")?, offer)
            }
            FamilyName::HeteroMarket => {
                let h = m.hm.ok_or_else(|| CliError::Validation("hetero_market needs a [model.hm] table".into()))?;
                MapModel::hetero_market(HeteroParams {
                    alpha: h.alpha,
                    b: h.b,
                    big_b: h.big_b,
                    beta: h.beta,
                    c1: h.c1,
                    c2: h.c2,
                })
            }
            FamilyName::Linear2d => {
                let p = m.matrix.ok_or_else(|| CliError::Validation("linear2d needs model.matrix".into()))?;
                MapModel::from_params(Family::Linear2d, &p)
            }
        };
        Ok(model?)
    }

    pub fn utility_spec(&self) -> Result<UtilitySpec, CliError> {
        let u = &self.utility;
        Ok(UtilitySpec::with_options(u.sigma, u.gamma, u.beta, u.tail_target, u.x_floor)?)
    }

    pub fn potential(&self) -> Result<Potential, CliError> {
        let spec = self.utility_spec()?;
        Ok(match self.compute.potential {
            PotentialName::Zero => Potential::zero(),
            PotentialName::U => Potential::u(spec),
            PotentialName::W => Potential::w(spec),
            PotentialName::WN => Potential::w_n(spec, self.compute.block_n),
        })
    }

    /// `nu` of the logistic family.
    pub fn nu(&self) -> Result<f64, CliError> {
        match (self.model.family, self.model.nu) {
            (FamilyName::Logistic, Some(nu)) => Ok(nu),
            _ => Err(CliError::Validation("this command needs family = \"logistic\" with model.nu".into())),
        }
    }

    /// Re-checks module invariants for `command`.
    pub fn validate(&self, command: &str) -> Result<(), CliError> {
        self.model()?;
        self.utility_spec()?;
        let c = &self.compute;
        if is_symbolic(command) {
            let nu = self.nu()?;
            if !(nu > 4.0) {
                return Err(CliError::Validation("nu must exceed 4".into()));
            }
            for &g in c.nu_grid.iter().flatten() {
                if !(g > 4.0) {
                    return Err(CliError::Validation(format!("nu must exceed 4 (nu_grid has {g})")));
                }
            }
            for &b in c.beta_grid.iter().flatten() {
                self.utility_spec()?.with_beta(b)?;
            }
        }
        if c.n_max == 0 || c.n_max > symbolic::N_MAX {
            return Err(CliError::Validation(format!("n_max must lie in 1..={}", symbolic::N_MAX)));
        }
        if c.quad_depth > 16 {
            return Err(CliError::Validation("quad_depth must be at most 16".into()));
        }
        if c.decode_depth == 0 || c.block_n + c.decode_depth > thermo::L_MAX {
            return Err(CliError::Validation(format!(
                "block_n + decode_depth must be at most {} with decode_depth >= 1",
                thermo::L_MAX
            )));
        }
        if !(c.eps > 0.0 && c.eps < 1.0) {
            return Err(CliError::Validation("eps must lie in (0, 1)".into()));
        }
        if c.samples < 2 {
            return Err(CliError::Validation("samples must be at least 2".into()));
        }
        if self.output.formats.is_empty() {
            return Err(CliError::Validation("output.formats must name at least one format".into()));
        }
        Ok(())
    }
}
