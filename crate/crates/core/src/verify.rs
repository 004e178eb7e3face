//! Executable certificates for the invariance, averaging and equilibrium
//! results, plus the `(nu, beta)` utility sweep.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::invlim::{self, SpecificationTask};
use crate::symbolic::{self, code_to_symbols, cylinder_interval, PeriodicTable, SymbolWord};
use crate::thermo::{
    self, equilibrium_block_markov, equilibrium_block_markov_folded, equilibrium_periodic, measure_average,
    pressure_periodic, OrbitEnsemble, Potential, UtilitySpec,
};
use crate::tol::TOL_INEQ;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Pass when `|lhs - rhs| <= tol`.
    Equality,
    /// Pass when `slack >= -tol`.
    Inequality,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub id: String,
    pub kind: CheckKind,
    pub params: Map<String, Value>,
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs - rhs|` for equalities, `lhs - rhs` for inequalities.
    pub slack: f64,
    pub tol: f64,
    pub pass: bool,
    pub seconds: f64,
}

impl TheoremReport {
    fn equality(id: &str, params: Value, lhs: f64, rhs: f64, tol: f64, started: Instant) -> Self {
        let slack = (lhs - rhs).abs();
        Self::finish(id, CheckKind::Equality, params, lhs, rhs, slack, tol, slack <= tol, started)
    }

    fn inequality(id: &str, params: Value, lhs: f64, rhs: f64, tol: f64, started: Instant) -> Self {
        let slack = lhs - rhs;
        Self::finish(id, CheckKind::Inequality, params, lhs, rhs, slack, tol, slack >= -tol, started)
    }

    #[allow(clippy::too_many_arguments)]
    fn finish(
        id: &str,
        kind: CheckKind,
        params: Value,
        lhs: f64,
        rhs: f64,
        slack: f64,
        tol: f64,
        pass: bool,
        started: Instant,
    ) -> Self {
        let params = match params {
            Value::Object(m) => m,
            other => Map::from_iter([("value".to_string(), other)]),
        };
        Self { id: id.into(), kind, params, lhs, rhs, slack, tol, pass, seconds: started.elapsed().as_secs_f64() }
    }
}

/// `int W dmu` against `(1/(1-beta)) int U o pi dmu` for an invariant
/// ensemble (a single periodic orbit or an equilibrium ensemble).
pub fn check_average_identity(spec: &UtilitySpec, mu: &OrbitEnsemble) -> TheoremReport {
    let started = Instant::now();
    let w = Potential::w(*spec);
    let lhs = mu.average(&w, Exec::default());
    let rhs = mu.average(&Potential::u(*spec), Exec::default()) / (1.0 - spec.beta);
    let tail = spec.tail_bound(spec.r_w());
    let params = json!({
        "nu": mu.nu(), "sigma": spec.sigma, "gamma": spec.gamma, "beta": spec.beta,
        "period": mu.period(), "members": mu.members().len(), "r_w": spec.r_w(), "tail_bound": tail,
    });
    TheoremReport::equality("average_identity", params, lhs, rhs, 10.0 * spec.tail_target, started)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureValue {
    pub value: f64,
    pub error_bound: f64,
    pub depth: usize,
}

/// `sum_{|w| = k} 2^-k f(midpoint of [w])`, the measure of maximal entropy
/// integral of `f` by cylinder quadrature, with the largest cylinder width.
pub fn mme_quadrature<F: Fn(f64) -> f64 + Sync>(nu: f64, k: usize, f: F) -> Result<(f64, f64)> {
    if k > 16 {
        return Err(Error::Capacity(format!("quadrature depth {k} exceeds 16")));
    }
    symbolic::branch_gap(nu)?;
    let size = 1usize << k;
    let sum = Exec::default().sum_range(size, |c| {
        let (lo, hi) = cylinder_interval(nu, &code_to_symbols(c as u64, k));
        f(0.5 * (lo + hi))
    });
    let width = symbolic::max_cylinder_width(nu, k, Exec::default())?;
    Ok((sum / size as f64, width))
}

/// `int W dmu_0 = (1/(1-beta)) int U o h^-1 dmu_{1/2,1/2}` by depth-`k`
/// cylinder quadrature.
pub fn mme_average_utility(spec: &UtilitySpec, nu: f64, k: usize) -> Result<QuadratureValue> {
    let (mean, width) = mme_quadrature(nu, k, |x| spec.u(x))?;
    let scale = 1.0 / (1.0 - spec.beta);
    Ok(QuadratureValue { value: mean * scale, error_bound: spec.modulus(width) * scale, depth: k })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloValue {
    pub mean: f64,
    pub std_err: f64,
    pub samples: usize,
}

/// Monte-Carlo version of [`mme_average_utility`]: uniform random words of
/// length 48, decoded to their cylinder midpoint.
pub fn mme_monte_carlo(spec: &UtilitySpec, nu: f64, samples: usize, seed: u64) -> Result<MonteCarloValue> {
    const LEN: usize = 48;
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least two samples".into()));
    }
    symbolic::branch_gap(nu)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 / (1.0 - spec.beta);
    let words: Vec<Vec<u8>> = (0..samples).map(|_| (0..LEN).map(|_| rng.gen_range(1..=2)).collect()).collect();
    let vals = Exec::default().map_slice(&words, |w| {
        let (lo, hi) = cylinder_interval(nu, w);
        spec.u(0.5 * (lo + hi)) * scale
    });
    let n = samples as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    Ok(MonteCarloValue { mean, std_err: (var / n).sqrt(), samples })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub nu: f64,
    pub beta: f64,
    pub value: f64,
    pub error_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub cells: Vec<SweepCell>,
    /// Indices into `cells` of the maximum and up to two runners-up.
    pub ranking: Vec<usize>,
}

impl SweepTable {
    pub fn best(&self) -> &SweepCell {
        &self.cells[self.ranking[0]]
    }
}

/// Average utility under the measure of maximal entropy over a `(nu, beta)`
/// grid; `sigma`, `gamma` and the tail settings come from `template`.
pub fn optimize_params(template: &UtilitySpec, nu_grid: &[f64], beta_grid: &[f64], k: usize) -> Result<SweepTable> {
    if nu_grid.is_empty() || beta_grid.is_empty() {
        return Err(Error::InvalidParameter("sweep grids must be non-empty".into()));
    }
    let specs = beta_grid.iter().map(|&b| template.with_beta(b)).collect::<Result<Vec<_>>>()?;
    let pairs: Vec<(f64, usize)> = nu_grid.iter().flat_map(|&nu| (0..specs.len()).map(move |j| (nu, j))).collect();
    let cells = Exec::default()
        .map_slice(&pairs, |&(nu, j)| {
            let q = mme_average_utility(&specs[j], nu, k)?;
            Ok(SweepCell { nu, beta: specs[j].beta, value: q.value, error_bound: q.error_bound })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..cells.len()).collect();
    order.sort_by(|&a, &b| cells[b].value.total_cmp(&cells[a].value).then(a.cmp(&b)));
    order.truncate(3);
    Ok(SweepTable { cells, ranking: order })
}

/// Stand-in for the equilibrium measure of the full `W`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Proxy {
    /// Periodic-point ensemble of period `n`.
    Ensemble { n: usize },
    /// Transfer-matrix measure on `r_d`-symbol windows.
    BlockMarkov { r_d: usize },
}

/// `int W dmu_W - int W dmu_0 >= 0`.
pub fn check_eq_vs_mme(spec: &UtilitySpec, nu: f64, proxy: Proxy) -> Result<TheoremReport> {
    let started = Instant::now();
    let w = Potential::w(*spec);
    let (lhs, rhs, proxy_error) = match proxy {
        Proxy::Ensemble { n } => {
            let eq = equilibrium_periodic(&w, nu, n)?;
            let mme = equilibrium_periodic(&Potential::zero(), nu, n)?;
            (measure_average(&eq, &w)?, measure_average(&mme, &w)?, spec.tail_bound(spec.r_w()))
        }
        Proxy::BlockMarkov { r_d } => {
            let eq = equilibrium_block_markov_folded(spec, r_d, nu)?;
            // same window midpoints under the uniform measure
            let (mean, _) = mme_quadrature(nu, r_d, |x| spec.u(x))?;
            let err = eq.window().map_or(0.0, |wi| wi.error_bound);
            (measure_average(&eq, &w)?, mean * spec.discount_sum(spec.r_w()), err)
        }
    };
    let params = json!({
        "nu": nu, "sigma": spec.sigma, "gamma": spec.gamma, "beta": spec.beta,
        "proxy": proxy, "proxy_error": proxy_error,
    });
    Ok(TheoremReport::inequality("equilibrium_vs_mme", params, lhs, rhs, TOL_INEQ, started))
}

/// `e_n = |int W dmu_W - int W_n dmu_{W_n}|` on `r_d`-symbol decode windows:
/// decreasing, `e_n / beta^n` within a factor 10, and
/// `e_n <= 2 beta^n sup|U| / (1 - beta)`.
pub fn check_truncation_convergence(spec: &UtilitySpec, nu: f64, ns: &[usize], r_d: usize) -> Result<TheoremReport> {
    const ZERO: f64 = 1e-10;
    let started = Instant::now();
    if ns.is_empty() || ns.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::InvalidParameter("truncation orders must be increasing".into()));
    }
    let w = Potential::w(*spec);
    let full = equilibrium_block_markov_folded(spec, r_d, nu)?;
    let target = measure_average(&full, &w)?;
    let errors = ns
        .iter()
        .map(|&n| {
            let m = equilibrium_block_markov(spec, n, r_d, nu)?;
            Ok((target - measure_average(&m, &Potential::w_n(*spec, n))?).abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    let bounds: Vec<f64> =
        ns.iter().map(|&n| 2.0 * spec.beta.powi(n as i32) * spec.sup_abs_u() / (1.0 - spec.beta)).collect();
    let decreasing = errors.windows(2).all(|p| p[1] <= p[0] || p[0] <= ZERO);
    let scaled: Vec<f64> = if errors.iter().all(|&e| e <= ZERO) {
        vec![]
    } else {
        ns.iter().zip(&errors).map(|(&n, &e)| e / spec.beta.powi(n as i32)).collect()
    };
    let spread = if scaled.is_empty() {
        1.0
    } else {
        scaled.iter().copied().fold(0.0, f64::max) / scaled.iter().copied().fold(f64::INFINITY, f64::min)
    };
    // tightest margin against the displayed bound
    let (k, _) = errors
        .iter()
        .zip(&bounds)
        .enumerate()
        .map(|(i, (e, b))| (i, b - e))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty");
    let params = json!({
        "nu": nu, "sigma": spec.sigma, "gamma": spec.gamma, "beta": spec.beta, "r_d": r_d, "ns": ns,
        "errors": errors, "bounds": bounds, "decreasing": decreasing, "scaled_spread": spread,
        "proxy": "block_markov_folded", "proxy_error": full.window().map_or(0.0, |wi| wi.error_bound),
    });
    let mut report = TheoremReport::inequality("truncation_convergence", params, bounds[k], errors[k], ZERO, started);
    report.pass = report.pass && decreasing && spread < 10.0;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityFacts {
    pub nu: f64,
    pub counts_ok: bool,
    pub max_orbit_residual: f64,
    pub pressure_error: f64,
    pub roundtrip_failures: usize,
}

const ROUNDTRIPS: usize = 500;
const ROUNDTRIP_LEN: usize = 20;

fn stability_facts(nu: f64, n_max: usize, seed: u64) -> Result<StabilityFacts> {
    let mut counts_ok = true;
    let mut max_orbit_residual: f64 = 0.0;
    for n in 1..=n_max {
        let table = PeriodicTable::build(nu, n)?;
        let mut pts = table.points().to_vec();
        pts.sort_by(f64::total_cmp);
        let distinct = pts.windows(2).all(|p| p[1] > p[0]);
        let inside = pts.iter().all(|&x| (0.0..=1.0).contains(&x));
        counts_ok &= distinct && inside && pts.len() == 1 << n;
        let res = Exec::default()
            .map_range(table.len(), |c| {
                let orbit = table.orbit(c as u64);
                (0..n).map(|j| (nu * orbit[j] * (1.0 - orbit[j]) - orbit[(j + 1) % n]).abs()).fold(0.0, f64::max)
            })
            .into_iter()
            .fold(0.0, f64::max);
        max_orbit_residual = max_orbit_residual.max(res);
    }
    let p = pressure_periodic(&Potential::zero(), nu, &[n_max])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut roundtrip_failures = 0;
    for _ in 0..ROUNDTRIPS {
        let word = SymbolWord::binary((0..ROUNDTRIP_LEN).map(|_| rng.gen_range(1..=2)).collect())?;
        let x = symbolic::decode(nu, &word)?.midpoint;
        if symbolic::itinerary(nu, x, ROUNDTRIP_LEN).ok().as_ref() != Some(&word) {
            roundtrip_failures += 1;
        }
    }
    Ok(StabilityFacts {
        nu,
        counts_ok: counts_ok && max_orbit_residual < crate::tol::TOL_FIX,
        max_orbit_residual,
        pressure_error: (p.estimate - std::f64::consts::LN_2).abs(),
        roundtrip_failures,
    })
}

/// Observable consequences of conjugate inverse limits for two parameters
/// in the Cantor regime: `2^n` periodic points for `n <= n_max`, pressure
/// of zero equal to `log 2`, and `itinerary o decode = id` on random words.
pub fn check_perturbation_stability(nu1: f64, nu2: f64, n_max: usize, seed: u64) -> Result<TheoremReport> {
    let started = Instant::now();
    for nu in [nu1, nu2] {
        if !(nu > 4.0) {
            return Err(Error::InvalidParameter(format!("nu must exceed 4, got {nu}")));
        }
    }
    if n_max == 0 || n_max > symbolic::N_MAX {
        return Err(Error::Capacity(format!("n_max must be in 1..={}", symbolic::N_MAX)));
    }
    let a = stability_facts(nu1, n_max, seed)?;
    let b = stability_facts(nu2, n_max, seed)?;
    let pressure_error = a.pressure_error.max(b.pressure_error);
    let params = json!({ "nu1": nu1, "nu2": nu2, "n_max": n_max, "seed": seed, "facts": [a, b] });
    let mut report = TheoremReport::equality("perturbation_stability", params, pressure_error, 0.0, 1e-6, started);
    report.pass = report.pass && a.counts_ok && b.counts_ok && a.roundtrip_failures == 0 && b.roundtrip_failures == 0;
    Ok(report)
}

/// Inputs to [`run_suite`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub nu: f64,
    pub spec: UtilitySpec,
    /// Period of the periodic-point ensembles.
    pub n: usize,
    /// Cylinder quadrature depth.
    pub k: usize,
    /// Decode depth of the transfer-matrix windows.
    pub r_d: usize,
    pub truncations: Vec<usize>,
    pub nu_pair: (f64, f64),
    pub n_max: usize,
    pub eps: f64,
    pub samples: usize,
    pub seed: u64,
}

impl SuiteConfig {
    pub fn new(nu: f64, spec: UtilitySpec) -> Self {
        Self {
            nu,
            spec,
            n: 12,
            k: 12,
            r_d: 8,
            truncations: (1..=6).collect(),
            nu_pair: (4.2, 4.3),
            n_max: 12,
            eps: 0.1,
            samples: 100_000,
            seed: 0x5EED,
        }
    }
}

fn mme_quadrature_report(cfg: &SuiteConfig) -> Result<TheoremReport> {
    let started = Instant::now();
    let coarse = mme_average_utility(&cfg.spec, cfg.nu, cfg.k)?;
    let fine = mme_average_utility(&cfg.spec, cfg.nu, (cfg.k + 2).min(16))?;
    let params = json!({ "nu": cfg.nu, "k": cfg.k, "fine_depth": fine.depth, "error_bound": coarse.error_bound });
    Ok(TheoremReport::equality("mme_average.refinement", params, coarse.value, fine.value, coarse.error_bound, started))
}

fn mme_monte_carlo_report(cfg: &SuiteConfig) -> Result<TheoremReport> {
    let started = Instant::now();
    let q = mme_average_utility(&cfg.spec, cfg.nu, cfg.k)?;
    let mc = mme_monte_carlo(&cfg.spec, cfg.nu, cfg.samples, cfg.seed)?;
    let params = json!({ "nu": cfg.nu, "k": cfg.k, "samples": mc.samples, "std_err": mc.std_err, "seed": cfg.seed });
    Ok(TheoremReport::equality("mme_average.monte_carlo", params, q.value, mc.mean, 3.0 * mc.std_err, started))
}

fn pressure_zero_report(cfg: &SuiteConfig) -> Result<TheoremReport> {
    let started = Instant::now();
    let ns: Vec<usize> = (1..=cfg.n).collect();
    let p = pressure_periodic(&Potential::zero(), cfg.nu, &ns)?;
    let worst = p.rows.iter().map(|r| (r.value - std::f64::consts::LN_2).abs()).fold(0.0, f64::max);
    let params = json!({ "nu": cfg.nu, "n_max": cfg.n, "worst_error": worst });
    Ok(TheoremReport::equality("pressure.zero", params, p.estimate, std::f64::consts::LN_2, 1e-9, started))
}

fn average_identity_reports(cfg: &SuiteConfig) -> Result<Vec<TheoremReport>> {
    let fixed = OrbitEnsemble::single_orbit(cfg.nu, &SymbolWord::periodic(2, &[2])?)?;
    let cycle = OrbitEnsemble::single_orbit(cfg.nu, &SymbolWord::periodic(2, &[1, 2])?)?;
    let mme = equilibrium_periodic(&Potential::zero(), cfg.nu, cfg.n)?;
    let eq = equilibrium_periodic(&Potential::w(cfg.spec), cfg.nu, cfg.n)?;
    Ok([("fixed_point", &fixed), ("two_cycle", &cycle), ("mme", &mme), ("equilibrium", &eq)]
        .into_iter()
        .map(|(name, mu)| {
            let mut r = check_average_identity(&cfg.spec, mu);
            r.id = format!("average_identity.{name}");
            r
        })
        .collect())
}

fn bowen_reports(cfg: &SuiteConfig) -> Result<Vec<TheoremReport>> {
    let eps = 0.95 * symbolic::branch_gap(cfg.nu)?;
    let period = cfg.n.max(14);
    let ns: Vec<usize> = (1..=12.min(period)).collect();
    let mut out = Vec::new();
    for (name, phi) in [("mme", Potential::zero()), ("equilibrium", Potential::w(cfg.spec))] {
        let started = Instant::now();
        let mu = equilibrium_periodic(&phi, cfg.nu, period)?;
        let p = pressure_periodic(&phi, cfg.nu, &[period])?;
        let a = thermo::bowen_ball_audit(&mu, &p, eps, &ns, 40, cfg.seed)?;
        let params = json!({
            "nu": cfg.nu, "period": period, "eps": eps, "ns": ns, "min_ratio": a.min_ratio,
            "max_ratio": a.max_ratio, "slope": a.slope, "proxy": Proxy::Ensemble { n: period },
        });
        let mut r = TheoremReport::inequality(&format!("bowen_ball.{name}"), params, 10.0, a.spread, 0.0, started);
        r.pass = r.pass && a.spread < 10.0 && a.slope.abs() <= 0.05;
        out.push(r);
    }
    Ok(out)
}

fn holder_report(cfg: &SuiteConfig) -> Result<TheoremReport> {
    let started = Instant::now();
    let fit = thermo::holder_estimate(&cfg.spec, cfg.nu, 2000, cfg.seed)?;
    let check = thermo::holder_estimate(&cfg.spec, cfg.nu, 2000, cfg.seed ^ 0xA5A5)?;
    let params = json!({ "nu": cfg.nu, "rho": fit.rho, "lambda": fit.lambda, "pairs": fit.pairs, "holdout_pairs": check.pairs });
    // holdout ratios against the fitted constant, with a factor 2 allowance
    Ok(TheoremReport::inequality("holder_constant", params, 2.0 * fit.c, check.c, 0.0, started))
}

fn shadow_report(cfg: &SuiteConfig) -> Result<TheoremReport> {
    let started = Instant::now();
    let probe = SpecificationTask::new(vec![(0, 4)], vec![SymbolWord::periodic(2, &[1, 2])?])?;
    let needed = invlim::shadow_specification(&probe, cfg.nu, cfg.eps)?.required_spacing;
    let task = SpecificationTask::new(
        vec![(0, 4), (5 + needed, 9 + needed)],
        vec![SymbolWord::periodic(2, &[1, 2])?, SymbolWord::periodic(2, &[2])?],
    )?;
    let res = invlim::shadow_specification(&task, cfg.nu, cfg.eps)?;
    let params = json!({
        "nu": cfg.nu, "eps": cfg.eps, "period": res.period, "word": res.periodic_word.to_string(),
        "required_spacing": res.required_spacing,
    });
    Ok(TheoremReport::inequality("shadowing", params, cfg.eps, res.max_distance, 0.0, started))
}

/// Runs every check on `cfg`; reports come back sorted by id.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<TheoremReport>> {
    type Job<'a> = Box<dyn Fn() -> Result<Vec<TheoremReport>> + Send + Sync + 'a>;
    let one = |r: Result<TheoremReport>| r.map(|x| vec![x]);
    let jobs: Vec<Job> = vec![
        Box::new(|| average_identity_reports(cfg)),
        Box::new(move || one(mme_quadrature_report(cfg))),
        Box::new(move || one(mme_monte_carlo_report(cfg))),
        Box::new(move || one(pressure_zero_report(cfg))),
        Box::new(move || {
            let mut r = check_eq_vs_mme(&cfg.spec, cfg.nu, Proxy::Ensemble { n: cfg.n })?;
            r.id.push_str(".ensemble");
            Ok(vec![r])
        }),
        Box::new(move || {
            let mut r = check_eq_vs_mme(&cfg.spec, cfg.nu, Proxy::BlockMarkov { r_d: 16.min(cfg.r_d * 2) })?;
            r.id.push_str(".block_markov");
            Ok(vec![r])
        }),
        Box::new(move || one(check_truncation_convergence(&cfg.spec, cfg.nu, &cfg.truncations, cfg.r_d))),
        Box::new(move || one(check_perturbation_stability(cfg.nu_pair.0, cfg.nu_pair.1, cfg.n_max, cfg.seed))),
        Box::new(move || bowen_reports(cfg)),
        Box::new(move || one(holder_report(cfg))),
        Box::new(move || one(shadow_report(cfg))),
    ];
    let mut reports: Vec<TheoremReport> = Exec::default()
        .map_slice(&jobs, |job| job())
        .into_iter()
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    reports.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(reports)
}
