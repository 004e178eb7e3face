use std::path::{Path, PathBuf};

use clap::ValueEnum;
use ergodyn_core::invlim::{preimage_tree, TreePolicy};
use ergodyn_core::thermo::{self, equilibrium_periodic, measure_average, pressure_periodic, Potential};
use ergodyn_core::verify::{self, SuiteConfig};
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::report::{fmt_f64, write_csv, write_json, Header, Table};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Orbit,
    Pressure,
    Measure,
    Average,
    Sweep,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Orbit => "orbit",
            Command::Pressure => "pressure",
            Command::Measure => "measure",
            Command::Average => "average",
            Command::Sweep => "sweep",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    /// False when a theorem check failed.
    pub passed: bool,
    pub files: Vec<PathBuf>,
}

struct Output {
    table: Table,
    data: Value,
    passed: bool,
}

fn f(x: f64) -> String {
    fmt_f64(x)
}

fn orbit(cfg: &RunConfig) -> Result<Output, CliError> {
    let model = cfg.model()?;
    let c = &cfg.compute;
    let mut table = Table::new(&["t", "x", "y"]);
    if model.dimension() == 2 {
        let (mut x, mut y) = (c.orbit_start, c.orbit_start);
        for t in 0..=c.orbit_len {
            table.push(vec![t.to_string(), f(x), f(y)]);
            match model.eval2(x, y) {
                Ok((u, v)) if u.is_finite() && v.is_finite() => (x, y) = (u, v),
                _ => break,
            }
        }
    } else {
        let chains = preimage_tree(&model, c.orbit_start, c.orbit_len, TreePolicy::RandomPath { seed: c.seed })?;
        if let Some(p) = chains.first() {
            for (i, x) in p.states().iter().enumerate().skip(1).rev() {
                table.push(vec![format!("-{i}"), f(*x), String::new()]);
            }
        }
        let mut x = c.orbit_start;
        for t in 0..=c.orbit_len {
            table.push(vec![t.to_string(), f(x), String::new()]);
            match model.eval1(x) {
                Ok(u) if u.is_finite() => x = u,
                _ => break,
            }
        }
    }
    let data = json!({ "columns": table.columns, "rows": table.rows });
    Ok(Output { table, data, passed: true })
}

fn pressure(cfg: &RunConfig) -> Result<Output, CliError> {
    let ns: Vec<usize> = (1..=cfg.compute.n_max).collect();
    let p = pressure_periodic(&cfg.potential()?, cfg.nu()?, &ns)?;
    let mut table = Table::new(&["n", "log_z", "value"]);
    for r in &p.rows {
        table.push(vec![r.n.to_string(), f(r.log_z), f(r.value)]);
    }
    let data = serde_json::to_value(&p).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(Output { table, data, passed: true })
}

fn measure(cfg: &RunConfig) -> Result<Output, CliError> {
    let mu = equilibrium_periodic(&cfg.potential()?, cfg.nu()?, cfg.compute.n_max)?;
    let mut table = Table::new(&["word", "point", "weight", "birkhoff"]);
    for m in mu.members() {
        table.push(vec![mu.word(m.code).to_string(), f(mu.table().point(m.code)), f(m.weight), f(m.birkhoff)]);
    }
    let data = json!({ "period": mu.period(), "log_z": mu.log_z(), "members": table.rows.len() });
    Ok(Output { table, data, passed: true })
}

fn average(cfg: &RunConfig) -> Result<Output, CliError> {
    let nu = cfg.nu()?;
    let spec = cfg.utility_spec()?;
    let c = &cfg.compute;
    let w = Potential::w(spec);
    let q = verify::mme_average_utility(&spec, nu, c.quad_depth)?;
    let phi = cfg.potential()?;
    let eq = equilibrium_periodic(&phi, nu, c.n_max)?;
    let bm = thermo::BlockMarkovMeasure::for_potential(&phi, nu, c.decode_depth)?;
    let rows = [
        ("mme_average_utility", q.value, q.error_bound),
        ("equilibrium_average", measure_average(&eq, &w)?, spec.tail_bound(spec.r_w())),
        ("block_markov_average", measure_average(&bm, &w)?, bm.window().map_or(0.0, |wi| wi.error_bound)),
    ];
    let mut table = Table::new(&["quantity", "value", "error_bound"]);
    for (name, v, e) in rows {
        table.push(vec![name.into(), f(v), f(e)]);
    }
    let data = json!({
        "quad_depth": c.quad_depth,
        "rows": rows.iter().map(|(n, v, e)| json!({ "quantity": n, "value": v, "error_bound": e })).collect::<Vec<_>>(),
    });
    Ok(Output { table, data, passed: true })
}

fn sweep(cfg: &RunConfig) -> Result<Output, CliError> {
    let nu = cfg.nu()?;
    let c = &cfg.compute;
    let nus = c.nu_grid.clone().unwrap_or_else(|| vec![nu]);
    let betas = c.beta_grid.clone().unwrap_or_else(|| vec![cfg.utility.beta]);
    let t = verify::optimize_params(&cfg.utility_spec()?, &nus, &betas, c.quad_depth)?;
    let mut table = Table::new(&["nu", "beta", "value", "error_bound", "rank"]);
    for (i, cell) in t.cells.iter().enumerate() {
        let rank = t.ranking.iter().position(|&j| j == i).map_or(String::new(), |r| (r + 1).to_string());
        table.push(vec![f(cell.nu), f(cell.beta), f(cell.value), f(cell.error_bound), rank]);
    }
    let data = serde_json::to_value(&t).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(Output { table, data, passed: true })
}

fn verify_suite(cfg: &RunConfig) -> Result<Output, CliError> {
    let c = &cfg.compute;
    let mut suite = SuiteConfig::new(cfg.nu()?, cfg.utility_spec()?);
    suite.n = c.n_max.min(14);
    suite.k = c.quad_depth;
    suite.r_d = c.decode_depth;
    suite.eps = c.eps;
    suite.samples = c.samples;
    suite.seed = c.seed;
    let reports = verify::run_suite(&suite)?;
    let mut table = Table::new(&["id", "kind", "pass", "lhs", "rhs", "slack", "tol", "seconds"]);
    for r in &reports {
        let kind = serde_json::to_value(r.kind).map_err(|e| CliError::Io(e.to_string()))?;
        table.push(vec![
            r.id.clone(),
            kind.as_str().unwrap_or_default().to_string(),
            r.pass.to_string(),
            f(r.lhs),
            f(r.rhs),
            f(r.slack),
            f(r.tol),
            f(r.seconds),
        ]);
    }
    let passed = reports.iter().all(|r| r.pass);
    let data = serde_json::to_value(&reports).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(Output { table, data, passed })
}

/// Validates `cfg`, runs `command` and writes `<dir>/<command>.{csv,json}`.
pub fn run_pipeline(cfg: &RunConfig, source: &str, command: Command, out_dir: &Path) -> Result<Outcome, CliError> {
    cfg.validate(command.name())?;
    let out = match command {
        Command::Orbit => orbit(cfg)?,
        Command::Pressure => pressure(cfg)?,
        Command::Measure => measure(cfg)?,
        Command::Average => average(cfg)?,
        Command::Sweep => sweep(cfg)?,
        Command::Verify => verify_suite(cfg)?,
    };
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::Io(format!("{}: {e}", out_dir.display())))?;
    let header = Header::new(command.name(), cfg, source);
    let mut files = Vec::new();
    for format in &cfg.output.formats {
        let path = match format {
            Format::Csv => {
                let p = out_dir.join(format!("{}.csv", command.name()));
                write_csv(&p, &header, &out.table)?;
                p
            }
            Format::Json => {
                let p = out_dir.join(format!("{}.json", command.name()));
                write_json(&p, &header, &out.data)?;
                p
            }
        };
        files.push(path);
    }
    Ok(Outcome { passed: out.passed, files })
}
