//! Truncated points of the inverse limit, the weighted product metric, the
//! lifted shift, preimage trees, Bowen balls, expansivity and constructive
//! shadowing of specifications.
//!
//! A [`Prehistory`] stores `(x0, x-1, ..., x-r)` with `f(x-i) = x-(i-1)`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::maps::{inverse_branches, MapModel};
use crate::symbolic::{self, cylinder_interval, inverse_branch, SymbolWord};
use crate::tol::TOL_ROOT;

/// Default metric truncation depth; the tail is at most `2^-40`.
pub const R_METRIC: usize = 40;

/// Largest number of chains a preimage tree may hold.
pub const TREE_CAP: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq)]
pub struct Prehistory {
    model: Arc<MapModel>,
    states: Vec<f64>,
}

fn one_dimensional(model: &MapModel) -> Result<()> {
    if model.dimension() != 1 {
        return Err(Error::Arity { expected: 1, got: 2 });
    }
    Ok(())
}

impl Prehistory {
    /// Validates consecutive-preimage consistency to `tol_root`.
    pub fn new(model: Arc<MapModel>, states: Vec<f64>) -> Result<Self> {
        one_dimensional(&model)?;
        if states.is_empty() {
            return Err(Error::InvalidParameter("a prehistory needs at least x0".into()));
        }
        let p = Self { model, states };
        for i in 1..p.states.len() {
            let residual = p.residual_at(i)?;
            if !(residual < TOL_ROOT) {
                return Err(Error::Inconsistent { index: i, residual });
            }
        }
        Ok(p)
    }

    /// Prehistory of a periodic orbit `orbit[k] = f^k(orbit[0])`, read
    /// cyclically: `x-i = orbit[-i mod n]`.
    pub fn periodic(model: Arc<MapModel>, orbit: &[f64], depth: usize) -> Result<Self> {
        let n = orbit.len();
        if n == 0 {
            return Err(Error::InvalidParameter("empty orbit".into()));
        }
        let states = (0..=depth).map(|i| orbit[(n - i % n) % n]).collect();
        Self::new(model, states)
    }

    /// Logistic prehistory whose forward itinerary starts with `future` and
    /// whose past coordinates `x-1, x-2, ...` lie in the branch intervals
    /// named by `past`. `x0` is the midpoint of the `future` cylinder.
    pub fn from_symbols(nu: f64, future: &[u8], past: &[u8]) -> Result<Self> {
        symbolic::branch_gap(nu)?;
        if future.is_empty() {
            return Err(Error::InvalidParameter("need at least one future symbol".into()));
        }
        let (lo, hi) = cylinder_interval(nu, future);
        let mut x = 0.5 * (lo + hi);
        let mut states = Vec::with_capacity(past.len() + 1);
        states.push(x);
        for &s in past {
            x = inverse_branch(nu, s, x);
            states.push(x);
        }
        Self::new(Arc::new(MapModel::logistic(nu)?), states)
    }

    pub fn model(&self) -> &Arc<MapModel> {
        &self.model
    }

    pub fn states(&self) -> &[f64] {
        &self.states
    }

    pub fn head(&self) -> f64 {
        self.states[0]
    }

    pub fn depth(&self) -> usize {
        self.states.len() - 1
    }

    fn residual_at(&self, i: usize) -> Result<f64> {
        Ok((self.model.eval1(self.states[i])? - self.states[i - 1]).abs())
    }

    /// Largest `|f(x-i) - x-(i-1)|` over the stored coordinates.
    pub fn max_residual(&self) -> f64 {
        (1..self.states.len()).map(|i| self.residual_at(i).unwrap_or(f64::INFINITY)).fold(0.0, f64::max)
    }

    /// The lifted map: `(x0, x-1, ...) -> (f(x0), x0, x-1, ...)`.
    pub fn lift_shift(&self) -> Result<Self> {
        let mut states = Vec::with_capacity(self.states.len() + 1);
        states.push(self.model.eval1(self.states[0])?);
        states.extend_from_slice(&self.states);
        Ok(Self { model: Arc::clone(&self.model), states })
    }

    /// Inverse of [`lift_shift`](Self::lift_shift): drops `x0`.
    pub fn drop_head(&self) -> Result<Self> {
        if self.states.len() < 2 {
            return Err(Error::InsufficientDepth { needed: 1, have: 0 });
        }
        Ok(Self { model: Arc::clone(&self.model), states: self.states[1..].to_vec() })
    }

    pub fn truncate(&self, depth: usize) -> Self {
        let keep = (depth + 1).min(self.states.len());
        Self { model: Arc::clone(&self.model), states: self.states[..keep].to_vec() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Distance {
    /// Weighted sum over the common depth.
    pub value: f64,
    /// Bound on the omitted terms, `diam * 2^-depth`.
    pub tail_bound: f64,
}

impl Distance {
    pub fn upper(&self) -> f64 {
        self.value + self.tail_bound
    }
}

fn diameter(model: &MapModel) -> f64 {
    model.domain().map_or(f64::INFINITY, |(a, b)| b - a)
}

/// `d(x, y) = sum_i |x-i - y-i| / 2^i`, truncated at the common depth.
pub fn invlim_distance(x: &Prehistory, y: &Prehistory) -> Result<Distance> {
    if x.model != y.model {
        return Err(Error::ModelMismatch);
    }
    let common = x.states.len().min(y.states.len());
    let mut w = 1.0;
    let mut value = 0.0;
    for i in 0..common {
        value += (x.states[i] - y.states[i]).abs() * w;
        w *= 0.5;
    }
    Ok(Distance { value, tail_bound: diameter(&x.model) * 2f64.powi(-(common as i32 - 1)) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TreePolicy {
    All,
    RandomPath { seed: u64 },
    MaxBranchCount(usize),
}

/// Chains `(x, x-1, ..., x-r)` of consecutive preimages inside the family's
/// interval, in lexicographic order of the branch choices.
pub fn preimage_tree(model: &MapModel, x: f64, depth: usize, policy: TreePolicy) -> Result<Vec<Prehistory>> {
    preimage_tree_with(model, x, depth, policy, Exec::default())
}

pub fn preimage_tree_with(
    model: &MapModel,
    x: f64,
    depth: usize,
    policy: TreePolicy,
    exec: Exec,
) -> Result<Vec<Prehistory>> {
    one_dimensional(model)?;
    let preimages = |y: f64| -> Result<Vec<f64>> {
        match inverse_branches(model, y) {
            Ok(v) => Ok(v),
            Err(Error::NoPreimage { .. }) => Ok(Vec::new()),
            Err(e) => Err(e),
        }
    };
    let model = Arc::new(model.clone());
    let chains: Vec<Vec<f64>> = match policy {
        TreePolicy::RandomPath { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut chain = vec![x];
            for _ in 0..depth {
                let pre = preimages(*chain.last().expect("non-empty"))?;
                if pre.is_empty() {
                    return Ok(Vec::new());
                }
                chain.push(pre[rng.gen_range(0..pre.len())]);
            }
            vec![chain]
        }
        TreePolicy::All | TreePolicy::MaxBranchCount(_) => {
            let limit = match policy {
                TreePolicy::MaxBranchCount(n) => n,
                _ => usize::MAX,
            };
            let mut level = vec![vec![x]];
            for _ in 0..depth {
                let expanded: Vec<Result<Vec<Vec<f64>>>> = exec.map_slice(&level, |chain| {
                    let pre = preimages(*chain.last().expect("non-empty"))?;
                    Ok(pre
                        .into_iter()
                        .map(|p| {
                            let mut c = Vec::with_capacity(chain.len() + 1);
                            c.extend_from_slice(chain);
                            c.push(p);
                            c
                        })
                        .collect())
                });
                let mut next = Vec::with_capacity(level.len() * 2);
                for e in expanded {
                    next.extend(e?);
                    if next.len() > TREE_CAP {
                        return Err(Error::Capacity(format!("preimage tree exceeds {TREE_CAP} chains")));
                    }
                }
                next.truncate(limit);
                level = next;
            }
            level
        }
    };
    chains.into_iter().map(|c| Prehistory::new(Arc::clone(&model), c)).collect()
}

/// Certified Bowen-ball membership: true iff the distance plus its tail
/// bound stays below `eps` along the first `n` lifted iterates.
pub fn bowen_ball_test(x: &Prehistory, y: &Prehistory, n: usize, eps: f64) -> Result<bool> {
    let have = x.depth().min(y.depth());
    if have < R_METRIC {
        return Err(Error::InsufficientDepth { needed: R_METRIC, have });
    }
    let (mut a, mut b) = (x.clone(), y.clone());
    for i in 0..n {
        if i > 0 {
            a = a.lift_shift()?;
            b = b.lift_shift()?;
        }
        let d = invlim_distance(&a, &b)?;
        if d.tail_bound >= eps {
            return Err(Error::InsufficientDepth { needed: R_METRIC, have });
        }
        if d.upper() >= eps {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansivityReport {
    /// Lower estimate of the expansivity constant.
    pub delta0: f64,
    pub trials: usize,
    /// Trials whose separation at the first disagreement reached `delta0`.
    pub confirmed: usize,
    pub min_separation: f64,
}

/// The branch gap as expansivity constant, confirmed on random pairs of
/// distinct words: after shifting to the first disagreement the two points
/// lie in different branch intervals.
pub fn expansivity_estimate(nu: f64, samples: usize, seed: u64) -> Result<ExpansivityReport> {
    const K: usize = 16;
    let delta0 = symbolic::branch_gap(nu)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut confirmed = 0;
    let mut min_separation = f64::INFINITY;
    for _ in 0..samples {
        let u: Vec<u8> = (0..K).map(|_| rng.gen_range(1..=2)).collect();
        let mut v: Vec<u8> = (0..K).map(|_| rng.gen_range(1..=2)).collect();
        if u == v {
            let j = rng.gen_range(0..K);
            v[j] = 3 - v[j];
        }
        let j = (0..K).find(|&i| u[i] != v[i]).expect("words differ");
        let x = symbolic::decode(nu, &SymbolWord::binary(u[j..].to_vec())?)?;
        let y = symbolic::decode(nu, &SymbolWord::binary(v[j..].to_vec())?)?;
        let sep = (x.midpoint - y.midpoint).abs();
        min_separation = min_separation.min(sep);
        if sep >= delta0 {
            confirmed += 1;
        }
    }
    Ok(ExpansivityReport { delta0, trials: samples, confirmed, min_separation })
}

/// Orbit pieces to shadow: anchor `i` is the periodic extension of
/// `anchors[i]`, started at time `intervals[i].0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecificationTask {
    intervals: Vec<(i64, i64)>,
    anchors: Vec<SymbolWord>,
}

impl SpecificationTask {
    pub fn new(intervals: Vec<(i64, i64)>, anchors: Vec<SymbolWord>) -> Result<Self> {
        if intervals.is_empty() || intervals.len() != anchors.len() {
            return Err(Error::InvalidParameter("need one anchor word per interval".into()));
        }
        if intervals.iter().any(|&(a, b)| a > b) || intervals.windows(2).any(|w| w[0].1 >= w[1].0) {
            return Err(Error::InvalidParameter("intervals must be non-empty, disjoint and increasing".into()));
        }
        if anchors.iter().any(|w| w.alphabet() != 2 || w.is_empty()) {
            return Err(Error::InvalidParameter("anchors must be non-empty binary words".into()));
        }
        Ok(Self { intervals, anchors })
    }

    pub fn intervals(&self) -> &[(i64, i64)] {
        &self.intervals
    }

    pub fn anchors(&self) -> &[SymbolWord] {
        &self.anchors
    }

    /// Smallest number of unspecified times between consecutive intervals.
    pub fn spacing(&self) -> i64 {
        self.intervals.windows(2).map(|w| w[1].0 - w[0].1 - 1).min().unwrap_or(i64::MAX)
    }

    /// `L(S) = b_m - a_1`.
    pub fn span(&self) -> i64 {
        self.intervals[self.intervals.len() - 1].1 - self.intervals[0].0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShadowLogEntry {
    pub time: i64,
    pub interval: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShadowResult {
    pub periodic_word: SymbolWord,
    pub period: usize,
    /// Past depth with `2^-r < eps/2`.
    pub r: usize,
    /// Forward depth with cylinder widths below `eps/4`.
    pub w: usize,
    pub required_spacing: i64,
    pub log: Vec<ShadowLogEntry>,
    pub max_distance: f64,
    pub verified: bool,
}

/// Builds a periodic orbit that `eps`-shadows every anchor on its interval.
///
/// Each anchor's symbols are copied over `[a_i - r, b_i + w - 1]`, the rest
/// of one period is filled with symbol 1, and the result is checked against
/// the anchor orbits with the inverse-limit metric at every specified time.
pub fn shadow_specification(task: &SpecificationTask, nu: f64, eps: f64) -> Result<ShadowResult> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("eps must lie in (0, 1), got {eps}")));
    }
    symbolic::branch_gap(nu)?;
    let r = (0..).find(|&r| 2f64.powi(-r) < eps / 2.0).expect("eps > 0") as usize;
    let w = symbolic::depth_for_width(nu, eps / 4.0, 20)?;
    let required = (w + 2 * r) as i64;
    let spacing = task.spacing();
    if spacing < required {
        return Err(Error::SpacingTooSmall { spacing, required });
    }
    let q = (required + task.span()) as usize;
    let start = task.intervals[0].0 - r as i64;

    let anchor_symbol = |i: usize, t: i64| -> u8 {
        let block = task.anchors[i].symbols();
        block[(t - task.intervals[i].0).rem_euclid(block.len() as i64) as usize]
    };
    let symbol_at = |t: i64| -> u8 {
        let tau = start + (t - start).rem_euclid(q as i64);
        task.intervals
            .iter()
            .position(|&(a, b)| tau >= a - r as i64 && tau < b + w as i64)
            .map_or(1, |i| anchor_symbol(i, tau))
    };
    let word: Vec<u8> = (0..q as i64).map(symbol_at).collect();

    // the shadowing orbit: orbit[j] is the point at time j (mod q)
    let orbit: Vec<f64> = (0..q).map(|j| symbolic::periodic_point(nu, &rotate_left(&word, j))).collect();
    let model = Arc::new(MapModel::logistic(nu)?);
    let at_time = |pts: &dyn Fn(i64) -> f64, t: i64| -> Result<Prehistory> {
        let states = (0..=R_METRIC as i64).map(|k| pts(t - k)).collect();
        Prehistory::new(Arc::clone(&model), states)
    };

    let mut log = Vec::new();
    for (i, &(a, b)) in task.intervals.iter().enumerate() {
        let block = task.anchors[i].symbols();
        let anchor_orbit: Vec<f64> =
            (0..block.len()).map(|j| symbolic::periodic_point(nu, &rotate_left(&block, j))).collect();
        let n = block.len() as i64;
        for t in a..=b {
            let shadow = at_time(&|s| orbit[s.rem_euclid(q as i64) as usize], t)?;
            let target = at_time(&|s| anchor_orbit[(s - a).rem_euclid(n) as usize], t)?;
            let d = invlim_distance(&shadow, &target)?;
            log.push(ShadowLogEntry { time: t, interval: i, distance: d.upper() });
        }
    }
    let max_distance = log.iter().map(|e| e.distance).fold(0.0, f64::max);
    Ok(ShadowResult {
        periodic_word: SymbolWord::periodic(2, &word)?,
        period: q,
        r,
        w,
        required_spacing: required,
        log,
        max_distance,
        verified: max_distance < eps,
    })
}

fn rotate_left(word: &[u8], j: usize) -> Vec<u8> {
    let mut v = word.to_vec();
    v.rotate_left(j % word.len());
    v
}
