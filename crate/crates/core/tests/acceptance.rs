//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

use std::time::Instant;

use ergodyn_core::invlim::{shadow_specification, SpecificationTask};
use ergodyn_core::maps::{cobweb_repelling_threshold, find_period3, snap_back_check, MapModel};
use ergodyn_core::symbolic::{self, code_to_symbols, SymbolWord};
use ergodyn_core::thermo::{
    bowen_ball_audit, equilibrium_block_markov, equilibrium_periodic, pressure_periodic, Potential, UtilitySpec,
};
use ergodyn_core::verify::{
    check_average_identity, check_eq_vs_mme, check_perturbation_stability, check_truncation_convergence,
    mme_average_utility, mme_monte_carlo, Proxy,
};
use ergodyn_core::thermo::OrbitEnsemble;

const LN2: f64 = std::f64::consts::LN_2;
const SEED: u64 = 0x5EED;

type Outcome = Result<(bool, String), ergodyn_core::Error>;
type Criterion = (&'static str, fn() -> Outcome);

fn pressure_sanity() -> Outcome {
    let t = Instant::now();
    let ns: Vec<usize> = (4..=16).collect();
    let p = pressure_periodic(&Potential::zero(), 5.0, &ns)?;
    let worst = p.rows.iter().map(|r| (r.value - LN2).abs()).fold(0.0, f64::max);
    let secs = t.elapsed().as_secs_f64();
    Ok((worst < 1e-9 && secs < 30.0, format!("max |P_n - log 2| = {worst:.2e} over n=4..16 in {secs:.2}s")))
}

fn mme_cylinders() -> Outcome {
    let mu = equilibrium_periodic(&Potential::zero(), 5.0, 14)?;
    let worst = (0..8u64).map(|c| (mu.cylinder_mass(&code_to_symbols(c, 3)) - 0.125).abs()).fold(0.0, f64::max);
    Ok((worst < 1e-12, format!("max |mass - 1/8| = {worst:.2e} over 8 depth-3 cylinders")))
}

fn average_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut tol = f64::INFINITY;
    for beta in [0.3, 0.5, 0.9] {
        let spec = UtilitySpec::new(0.5, 0.5, beta)?;
        for block in [&[2u8][..], &[1, 2]] {
            let mu = OrbitEnsemble::single_orbit(5.0, &SymbolWord::periodic(2, block)?)?;
            let r = check_average_identity(&spec, &mu);
            worst = worst.max(r.slack);
            tol = tol.min(10.0 * spec.tail_target);
        }
    }
    Ok((worst < tol, format!("max |LHS - RHS| = {worst:.2e} (tol {tol:.0e}), fixed point and 2-cycle, beta in {{0.3,0.5,0.9}}")))
}

fn mme_average() -> Outcome {
    let spec = UtilitySpec::new(0.5, 0.5, 0.5)?;
    let q12 = mme_average_utility(&spec, 5.0, 12)?;
    let q14 = mme_average_utility(&spec, 5.0, 14)?;
    let mc = mme_monte_carlo(&spec, 5.0, 100_000, SEED)?;
    let d_mc = (q12.value - mc.mean).abs();
    let d_q = (q12.value - q14.value).abs();
    Ok((
        d_mc < 3.0 * mc.std_err && d_q < q12.error_bound,
        format!(
            "k=12 {:.8} vs MC {:.8} (|d| = {d_mc:.2e}, 3 s.e. = {:.2e}); vs k=14 |d| = {d_q:.2e} < bound {:.2e}",
            q12.value,
            mc.mean,
            3.0 * mc.std_err,
            q12.error_bound
        ),
    ))
}

fn equilibrium_vs_mme() -> Outcome {
    let grid = [0.2, 0.5, 0.8];
    let mut worst = f64::INFINITY;
    let mut count = 0;
    for &sigma in &grid {
        for &gamma in &grid {
            for &beta in &grid {
                let spec = UtilitySpec::new(sigma, gamma, beta)?;
                for proxy in [Proxy::Ensemble { n: 12 }, Proxy::BlockMarkov { r_d: 12 }] {
                    worst = worst.min(check_eq_vs_mme(&spec, 5.0, proxy)?.slack);
                    count += 1;
                }
            }
        }
    }
    Ok((worst >= -1e-8, format!("min slack = {worst:.4e} over {count} checks (3x3x3 grid, ensemble n=12 and block-Markov r_d=12)")))
}

fn truncation_rate() -> Outcome {
    let spec = UtilitySpec::new(0.5, 0.5, 0.3)?;
    let r = check_truncation_convergence(&spec, 5.0, &[2, 3, 4, 5, 6], 8)?;
    let errors: Vec<f64> = serde_json::from_value(r.params["errors"].clone()).unwrap_or_default();
    let spread = r.params["scaled_spread"].as_f64().unwrap_or(f64::NAN);
    let shown: Vec<String> = errors.iter().map(|e| format!("{e:.2e}")).collect();
    Ok((r.pass, format!("e_n = [{}], max/min of e_n/beta^n = {spread:.4}, tightest bound margin {:.2e}", shown.join(", "), r.slack)))
}

fn bowen_ball() -> Outcome {
    let nu = 5.0;
    let eps = 0.95 * symbolic::branch_gap(nu)?;
    let ns: Vec<usize> = (1..=12).collect();
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, phi) in [("MME", Potential::zero()), ("W", Potential::w(UtilitySpec::new(0.5, 0.5, 0.5)?))] {
        let mu = equilibrium_periodic(&phi, nu, 16)?;
        let p = pressure_periodic(&phi, nu, &[16])?;
        let a = bowen_ball_audit(&mu, &p, eps, &ns, 40, SEED)?;
        ok &= a.spread < 10.0 && a.slope.abs() <= 0.05;
        parts.push(format!(
            "{name}: max/min across n {:.3}, slope {:+.4} (pooled ratios {:.3}..{:.3})",
            a.spread, a.slope, a.min_ratio, a.max_ratio
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn oracle_equivalence() -> Outcome {
    let spec = UtilitySpec::new(0.5, 0.5, 0.3)?;
    let ens = equilibrium_periodic(&Potential::w_n(spec, 2), 5.0, 14)?;
    let bm = equilibrium_block_markov(&spec, 2, 8, 5.0)?;
    let worst = (0..8u64)
        .map(|c| {
            let w = code_to_symbols(c, 3);
            (ens.cylinder_mass(&w) - bm.cylinder_mass(&w)).abs()
        })
        .fold(0.0, f64::max);
    Ok((worst < 1e-3, format!("max depth-3 cylinder difference = {worst:.2e} (W_2, n=14 vs L=10)")))
}

fn cobweb_threshold() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut crossings = true;
    for i in 1..=9 {
        let alpha = i as f64 / 10.0;
        let bc = cobweb_repelling_threshold(alpha)?;
        worst = worst.max((bc - (2.0 - alpha) / alpha).abs());
        let slope = |b: f64| MapModel::cobweb(alpha, b).and_then(|m| m.derivative1(1.0, 1)).map(f64::abs);
        worst = worst.max((slope(bc)? - 1.0).abs());
        crossings &= slope(bc * (1.0 - 1e-6))? < 1.0 && slope(bc * (1.0 + 1e-6))? > 1.0;
    }
    Ok((worst < 1e-12 && crossings, format!("max | |f'(1)| - 1 | at beta_c = {worst:.2e}; crossing confirmed: {crossings}")))
}

fn chaos_detectors() -> Outcome {
    let snap = |nu: f64| MapModel::logistic(nu).and_then(|m| snap_back_check(&m, (0.0, 1.0))).map(|r| r.holds);
    let p3 = |nu: f64| MapModel::logistic(nu).and_then(|m| find_period3(&m, (0.0, 1.0), 100_000));
    let snaps = (snap(3.9)?, snap(4.0)?, snap(3.2)?);
    let found = p3(3.83)?;
    let none = p3(3.2)?.is_none();
    let ok = snaps == (true, true, false) && found.is_some_and(|o| o.residual < 1e-9) && none;
    let detail = match found {
        Some(o) => format!("p = {:.13}, residual {:.1e}", o.p, o.residual),
        None => "no 3-cycle at 3.83".into(),
    };
    Ok((ok, format!("snap-back (3.9, 4.0, 3.2) = {snaps:?}; period 3 at 3.83: {detail}; none at 3.2: {none}")))
}

fn perturbation() -> Outcome {
    let t = Instant::now();
    let r = check_perturbation_stability(4.2, 4.3, 12, SEED)?;
    let secs = t.elapsed().as_secs_f64();
    Ok((r.pass && secs < 60.0, format!("counts, log 2 pressure and 500 round trips at nu = 4.2, 4.3 in {secs:.2}s")))
}

fn shadowing() -> Outcome {
    let eps = 0.1;
    let anchors = vec![SymbolWord::periodic(2, &[1, 2])?, SymbolWord::periodic(2, &[2, 2, 1])?];
    let probe = SpecificationTask::new(vec![(0, 5)], vec![anchors[0].clone()])?;
    let m = shadow_specification(&probe, 5.0, eps)?.required_spacing;
    let task = SpecificationTask::new(vec![(0, 5), (6 + m, 14 + m)], anchors)?;
    let r = shadow_specification(&task, 5.0, eps)?;
    let both = (0..2).all(|i| r.log.iter().any(|e| e.interval == i));
    Ok((
        r.verified && both && r.max_distance < eps,
        format!("period {} word, spacing {m}, max certified distance {:.3e} < {eps}", r.period, r.max_distance),
    ))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("pressure of zero equals log 2", pressure_sanity),
        ("maximal-entropy cylinder masses", mme_cylinders),
        ("average identity on periodic orbits", average_identity),
        ("maximal-entropy average utility", mme_average),
        ("equilibrium average beats maximal entropy", equilibrium_vs_mme),
        ("truncation convergence rate", truncation_rate),
        ("Bowen-ball bounds", bowen_ball),
        ("periodic vs transfer-matrix oracle", oracle_equivalence),
        ("cobweb repelling threshold", cobweb_threshold),
        ("snap-back and period-3 detectors", chaos_detectors),
        ("perturbation stability", perturbation),
        ("specification shadowing", shadowing),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (pass, detail) = match check() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!("{} [{:>2}] {name}: {detail}", if pass { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
