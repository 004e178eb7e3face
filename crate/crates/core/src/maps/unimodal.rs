use serde::{Deserialize, Serialize};

use super::MapModel;
use crate::error::{Error, Result};
use crate::tol::{Tolerances, TOL_FIX, TOL_ROOT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UnimodalType {
    /// `f(a) = a`, `f(c) < b`.
    A,
    /// `f(a) > a`, `f(b) = a`.
    B,
    /// `f(a) = f(b) = a`, `f(c) > b`.
    C,
    /// Unimodal, but none of the three boundary patterns holds.
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SchwarzianSign {
    Yes,
    No,
    UndefinedAtSamples,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub location: f64,
    pub multiplier: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnimodalReport {
    pub kind: UnimodalType,
    pub interval: (f64, f64),
    pub critical_point: f64,
    pub critical_value: f64,
    pub fixed_points: Vec<FixedPoint>,
    pub schwarzian_negative: SchwarzianSign,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnapBackReport {
    pub holds: bool,
    pub x_m: f64,
    pub x_star: f64,
    pub chi3_xm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Period3Orbit {
    pub p: f64,
    pub orbit: [f64; 3],
    pub residual: f64,
}

fn check_1d(model: &MapModel) -> Result<()> {
    if model.dimension() != 1 {
        return Err(Error::Arity { expected: 1, got: 2 });
    }
    Ok(())
}

fn grid(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    let h = (b - a) / n as f64;
    (0..=n).map(move |i| if i == n { b } else { a + h * i as f64 })
}

/// Bisection for a root of `g` in `[lo, hi]` with `g(lo)` and `g(hi)` of
/// opposite sign. Runs until the bracket cannot shrink further.
pub(crate) fn bisect<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64) -> f64 {
    let mut glo = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if (gm < 0.0) == (glo < 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    if g(lo).abs() <= g(hi).abs() {
        lo
    } else {
        hi
    }
}

fn golden_max<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (g(x1), g(x2));
    for _ in 0..200 {
        if hi - lo < 1e-15 * (1.0 + lo.abs()) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = g(x1);
        }
    }
    0.5 * (lo + hi)
}

/// Locates the turning point, classifies the map as type A, B or C, and
/// lists fixed points found by sign changes of `f(x) - x`.
pub fn analyze_unimodal(model: &MapModel, interval: (f64, f64), grid_n: usize) -> Result<UnimodalReport> {
    check_1d(model)?;
    if grid_n < 64 {
        return Err(Error::InvalidParameter(format!("grid_n must be at least 64, got {grid_n}")));
    }
    let (a, b) = interval;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidParameter(format!("invalid interval [{a}, {b}]")));
    }
    let xs: Vec<f64> = grid(a, b, grid_n).collect();
    let ys = xs.iter().map(|&x| model.eval1(x)).collect::<Result<Vec<f64>>>()?;

    let scale = ys.iter().fold(0.0f64, |m, y| m.max(y.abs())).max(1.0);
    let flat = 1e-14 * scale;
    let imax = (0..ys.len()).fold(0, |best, i| if ys[i] > ys[best] { i } else { best });
    if imax == 0 || imax == grid_n {
        return Err(Error::NotUnimodal("maximum sits on the boundary (monotone or flat)".into()));
    }
    let diffs: Vec<f64> = ys.windows(2).map(|w| w[1] - w[0]).collect();
    let (up, down) = diffs.split_at(imax);
    if up.iter().any(|&d| d < -flat) || down.iter().any(|&d| d > flat) {
        return Err(Error::NotUnimodal("several interior extrema on the grid".into()));
    }
    if !up.iter().any(|&d| d > flat) || !down.iter().any(|&d| d < -flat) {
        return Err(Error::NotUnimodal("no strict rise and fall around the maximum".into()));
    }

    let f = |x: f64| model.eval1(x).unwrap_or(f64::NEG_INFINITY);
    let (lo, hi) = (xs[imax - 1], xs[imax + 1]);
    let mut c = golden_max(f, lo, hi);
    // sharpen with f' = 0 when the derivative changes sign across the bracket
    if let (Ok(dl), Ok(dh)) = (model.derivative1(lo, 1), model.derivative1(hi, 1)) {
        if dl > 0.0 && dh < 0.0 {
            c = bisect(|x| model.derivative1(x, 1).unwrap_or(0.0), lo, hi);
        }
    }
    let fa = ys[0];
    let fb = ys[grid_n];
    let fc = model.eval1(c)?;

    let near = |u: f64, v: f64| (u - v).abs() < TOL_FIX;
    let kind = if near(fa, a) && near(fb, a) && fc > b + TOL_FIX {
        UnimodalType::C
    } else if near(fa, a) && fc < b - TOL_FIX {
        UnimodalType::A
    } else if fa > a + TOL_FIX && near(fb, a) {
        UnimodalType::B
    } else {
        UnimodalType::Other
    };

    let fixed_points = fixed_points(model, &xs, &ys)?;
    let schwarzian_negative = schwarzian_sign(model, &xs, c, (b - a) / grid_n as f64);

    Ok(UnimodalReport {
        kind,
        interval,
        critical_point: c,
        critical_value: fc,
        fixed_points,
        schwarzian_negative,
        tolerances: Tolerances::default(),
    })
}

fn fixed_points(model: &MapModel, xs: &[f64], ys: &[f64]) -> Result<Vec<FixedPoint>> {
    let g: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| y - x).collect();
    let mut roots: Vec<f64> = Vec::new();
    for i in 0..xs.len() {
        if g[i] == 0.0 {
            roots.push(xs[i]);
        } else if i + 1 < xs.len() && g[i + 1] != 0.0 && (g[i] < 0.0) != (g[i + 1] < 0.0) {
            roots.push(bisect(|x| model.eval1(x).map(|y| y - x).unwrap_or(f64::NAN), xs[i], xs[i + 1]));
        }
    }
    roots.dedup_by(|p, q| (*p - *q).abs() < 1e-9);
    roots
        .into_iter()
        .filter(|&p| (model.eval1(p).map(|y| (y - p).abs()).unwrap_or(f64::INFINITY)) < TOL_FIX)
        .map(|p| Ok(FixedPoint { location: p, multiplier: model.derivative1(p, 1)? }))
        .collect()
}

fn schwarzian_sign(model: &MapModel, xs: &[f64], c: f64, h: f64) -> SchwarzianSign {
    let mut undefined = false;
    for &x in xs {
        match model.schwarzian(x) {
            Ok(s) if s >= 0.0 => return SchwarzianSign::No,
            Ok(_) => {}
            // the turning point itself is always singular
            Err(Error::SingularPoint { .. }) if (x - c).abs() <= 2.0 * h => {}
            Err(_) => undefined = true,
        }
    }
    if undefined {
        SchwarzianSign::UndefinedAtSamples
    } else {
        SchwarzianSign::Yes
    }
}

/// All preimages of `y` inside the family's natural interval, ascending.
pub fn inverse_branches(model: &MapModel, y: f64) -> Result<Vec<f64>> {
    check_1d(model)?;
    if let MapModel::Logistic { nu } = *model {
        let disc = 1.0 - 4.0 * y / nu;
        if disc < 0.0 {
            return Err(Error::NoPreimage { y, max: nu / 4.0 });
        }
        let s = disc.sqrt();
        let hi = 0.5 * (1.0 + s);
        // product of the roots is y / nu; avoids cancellation in (1 - s) / 2
        let lo = (y / nu) / hi;
        let mut out: Vec<f64> = [lo, hi].into_iter().filter(|x| (0.0..=1.0).contains(x)).collect();
        out.dedup();
        return Ok(out);
    }
    let interval = model
        .domain()
        .ok_or_else(|| Error::NotUnimodal("family has no bounded interval for inverse branches".into()))?;
    inverse_branches_on(model, y, interval)
}

/// Preimages of `y` on the two monotone branches over `interval`.
pub fn inverse_branches_on(model: &MapModel, y: f64, interval: (f64, f64)) -> Result<Vec<f64>> {
    let rep = analyze_unimodal(model, interval, 256)?;
    let (a, b) = interval;
    let c = rep.critical_point;
    if y > rep.critical_value {
        return Err(Error::NoPreimage { y, max: rep.critical_value });
    }
    let mut out = Vec::with_capacity(2);
    for (lo, hi) in [(a, c), (c, b)] {
        let g = |x: f64| model.eval1(x).map(|v| v - y).unwrap_or(f64::NAN);
        let (gl, gh) = (g(lo), g(hi));
        if gl == 0.0 {
            out.push(lo);
        } else if gh == 0.0 {
            out.push(hi);
        } else if (gl < 0.0) != (gh < 0.0) {
            out.push(bisect(g, lo, hi));
        }
    }
    out.retain(|&x| model.eval1(x).map(|v| (v - y).abs() < TOL_ROOT.max(1e-15 * y.abs())).unwrap_or(false));
    out.sort_by(f64::total_cmp);
    out.dedup();
    Ok(out)
}

/// Marotto criterion for the largest interior fixed point:
/// `x*` is a snap-back repeller when `f^3(x_m) < x*`.
pub fn snap_back_check(model: &MapModel, interval: (f64, f64)) -> Result<SnapBackReport> {
    let rep = analyze_unimodal(model, interval, 1024)?;
    let (a, b) = interval;
    let x_star = rep
        .fixed_points
        .iter()
        .map(|fp| fp.location)
        .filter(|&p| p > a + TOL_FIX && p < b - TOL_FIX)
        .fold(None, |acc: Option<f64>, p| Some(acc.map_or(p, |q| q.max(p))))
        .ok_or(Error::NoInteriorFixedPoint { a, b })?;
    let x_m = rep.critical_point;
    let chi3_xm = model.iterate1(x_m, 3)?;
    Ok(SnapBackReport { holds: chi3_xm < x_star, x_m, x_star, chi3_xm })
}

/// Smallest point of a genuine 3-cycle, found by sign changes of
/// `f^3(x) - x` on a uniform grid.
pub fn find_period3(model: &MapModel, interval: (f64, f64), grid_n: usize) -> Result<Option<Period3Orbit>> {
    check_1d(model)?;
    let (a, b) = interval;
    if grid_n == 0 || !(a < b) {
        return Err(Error::InvalidParameter("find_period3 needs a non-empty grid and interval".into()));
    }
    let g = |x: f64| model.iterate1(x, 3).map(|y| y - x).unwrap_or(f64::NAN);
    let xs: Vec<f64> = grid(a, b, grid_n).collect();
    let gs: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
    for i in 0..xs.len() {
        let p = if gs[i] == 0.0 {
            xs[i]
        } else if i + 1 < xs.len() && gs[i + 1] != 0.0 && gs[i].is_finite() && gs[i + 1].is_finite()
            && (gs[i] < 0.0) != (gs[i + 1] < 0.0)
        {
            bisect(g, xs[i], xs[i + 1])
        } else {
            continue;
        };
        let f1 = model.eval1(p)?;
        if (f1 - p).abs() <= TOL_FIX {
            continue;
        }
        let residual = g(p).abs();
        if residual >= TOL_ROOT {
            continue;
        }
        let f2 = model.eval1(f1)?;
        return Ok(Some(Period3Orbit { p, orbit: [p, f1, f2], residual }));
    }
    Ok(None)
}
