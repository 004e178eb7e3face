//! Symbolic dynamics of the logistic Cantor set.
//!
//! For `nu > 4` the points of `[0, 1]` whose forward orbit never leaves the
//! interval form a Cantor set coded by the full one-sided shift on two
//! symbols. Symbol 1 is the left branch interval `I1 = [0, x-]`, symbol 2
//! the right one `I2 = [x+, 1]`.
//!
//! Binary words of length `n` are also handled as integer codes: bit
//! `n - 1 - j` holds `symbol_j - 1`, so integer order equals lexicographic
//! order and the shift is a rotation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::tol::TOL_ESCAPE;

/// Largest period handled by [`enumerate_periodic`].
pub const N_MAX: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolWord {
    alphabet: u8,
    block: Vec<u8>,
    multiplicity: usize,
    periodic: bool,
}

fn check_symbols(alphabet: u8, symbols: &[u8]) -> Result<()> {
    if !(2..=9).contains(&alphabet) {
        return Err(Error::InvalidParameter(format!("alphabet size must be in 2..=9, got {alphabet}")));
    }
    if let Some(s) = symbols.iter().find(|&&s| s == 0 || s > alphabet) {
        return Err(Error::InvalidParameter(format!("symbol {s} outside 1..={alphabet}")));
    }
    Ok(())
}

fn minimal_period(symbols: &[u8]) -> usize {
    let n = symbols.len();
    (1..=n).find(|&p| n.is_multiple_of(p) && (p..n).all(|i| symbols[i] == symbols[i - p])).unwrap_or(n)
}

impl SymbolWord {
    /// A finite word.
    pub fn new(alphabet: u8, symbols: Vec<u8>) -> Result<Self> {
        check_symbols(alphabet, &symbols)?;
        Ok(Self { alphabet, block: symbols, multiplicity: 1, periodic: false })
    }

    /// The infinite periodic extension of `symbols`, stored as its minimal
    /// block with a multiplicity.
    pub fn periodic(alphabet: u8, symbols: &[u8]) -> Result<Self> {
        check_symbols(alphabet, symbols)?;
        if symbols.is_empty() {
            return Err(Error::InvalidParameter("a periodic word needs at least one symbol".into()));
        }
        let p = minimal_period(symbols);
        Ok(Self { alphabet, block: symbols[..p].to_vec(), multiplicity: symbols.len() / p, periodic: true })
    }

    pub fn binary(symbols: Vec<u8>) -> Result<Self> {
        Self::new(2, symbols)
    }

    /// Parses a digit string such as `"12212"`.
    pub fn parse(alphabet: u8, s: &str) -> Result<Self> {
        let symbols = s
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(|| Error::InvalidParameter(format!("bad symbol {c:?}"))))
            .collect::<Result<Vec<u8>>>()?;
        Self::new(alphabet, symbols)
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    /// Minimal block of a periodic word, or the whole word.
    pub fn block(&self) -> &[u8] {
        &self.block
    }

    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    /// Length of the stored word (block length times multiplicity).
    pub fn len(&self) -> usize {
        self.block.len() * self.multiplicity
    }

    pub fn is_empty(&self) -> bool {
        self.block.is_empty()
    }

    pub fn symbols(&self) -> Vec<u8> {
        self.block.repeat(self.multiplicity)
    }

    /// First `k` symbols; periodic words are extended as far as needed.
    pub fn prefix(&self, k: usize) -> Result<Vec<u8>> {
        if self.periodic {
            Ok((0..k).map(|i| self.block[i % self.block.len()]).collect())
        } else if k <= self.block.len() {
            Ok(self.block[..k].to_vec())
        } else {
            Err(Error::InsufficientDepth { needed: k, have: self.block.len() })
        }
    }

    /// Integer code of a binary word (see module docs).
    pub fn code(&self) -> Result<u64> {
        if self.alphabet != 2 || self.len() > 63 {
            return Err(Error::InvalidParameter("only binary words up to length 63 have codes".into()));
        }
        Ok(symbols_to_code(&self.symbols()))
    }
}

impl fmt::Display for SymbolWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.symbols() {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cylinder {
    prefix: SymbolWord,
}

impl Cylinder {
    pub fn new(prefix: SymbolWord) -> Result<Self> {
        if prefix.is_periodic() {
            return Err(Error::InvalidParameter("cylinder prefixes are finite words".into()));
        }
        Ok(Self { prefix })
    }

    pub fn binary(symbols: Vec<u8>) -> Result<Self> {
        Self::new(SymbolWord::binary(symbols)?)
    }

    pub fn prefix(&self) -> &SymbolWord {
        &self.prefix
    }

    pub fn depth(&self) -> usize {
        self.prefix.len()
    }

    pub fn contains(&self, symbols: &[u8]) -> bool {
        symbols.starts_with(self.prefix.block())
    }
}

impl fmt::Display for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.prefix)
    }
}

pub fn symbols_to_code(symbols: &[u8]) -> u64 {
    symbols.iter().fold(0u64, |c, &s| (c << 1) | u64::from(s - 1))
}

pub fn code_to_symbols(code: u64, n: usize) -> Vec<u8> {
    (0..n).map(|j| ((code >> (n - 1 - j)) & 1) as u8 + 1).collect()
}

/// Shift of a cyclic binary word of length `n`: drops the first symbol and
/// appends it at the end.
pub fn rotate(code: u64, n: usize) -> u64 {
    let mask = (1u64 << n) - 1;
    ((code << 1) | (code >> (n - 1))) & mask
}

/// All `m^n` words fixed by the n-th power of the shift, in lexicographic
/// order, each as a periodic word in canonical form.
pub fn enumerate_periodic(n: usize, m: u8) -> Result<Vec<SymbolWord>> {
    enumerate_periodic_with(n, m, Exec::default())
}

pub fn enumerate_periodic_with(n: usize, m: u8, exec: Exec) -> Result<Vec<SymbolWord>> {
    if n == 0 || n > N_MAX {
        return Err(Error::Capacity(format!("period must be in 1..={N_MAX}, got {n}")));
    }
    check_symbols(m, &[])?;
    let count = (m as u64).checked_pow(n as u32).filter(|&c| c <= 1 << N_MAX).ok_or_else(|| {
        Error::Capacity(format!("{m}^{n} periodic words exceed the limit of 2^{N_MAX}"))
    })?;
    exec.map_range(count as usize, |mut idx| {
        let mut symbols = vec![0u8; n];
        for s in symbols.iter_mut().rev() {
            *s = (idx % m as usize) as u8 + 1;
            idx /= m as usize;
        }
        SymbolWord::periodic(m, &symbols)
    })
    .into_iter()
    .collect()
}

fn check_nu(nu: f64) -> Result<()> {
    if !(nu > 4.0 && nu.is_finite()) {
        return Err(Error::Domain(format!("symbolic coding needs nu > 4, got {nu}")));
    }
    Ok(())
}

/// Distance between the branch intervals, `sqrt(1 - 4/nu)`.
pub fn branch_gap(nu: f64) -> Result<f64> {
    check_nu(nu)?;
    Ok((1.0 - 4.0 / nu).sqrt())
}

/// Inner endpoints `(x-, x+)` of the branch intervals.
pub fn branch_endpoints(nu: f64) -> Result<(f64, f64)> {
    let s = branch_gap(nu)?;
    let hi = 0.5 * (1.0 + s);
    Ok(((1.0 / nu) / hi, hi))
}

/// Inverse of `F_nu` on the branch interval of `symbol`, for `y` in `[0, 1]`.
#[inline]
pub fn inverse_branch(nu: f64, symbol: u8, y: f64) -> f64 {
    let s = (1.0 - 4.0 * y / nu).max(0.0).sqrt();
    let hi = 0.5 * (1.0 + s);
    if symbol == 1 {
        (y / nu) / hi
    } else {
        hi
    }
}

/// Image of `[lo, hi]` under the inverse branch of `symbol`.
#[inline]
fn pull_interval(nu: f64, symbol: u8, (lo, hi): (f64, f64)) -> (f64, f64) {
    if symbol == 1 {
        (inverse_branch(nu, 1, lo), inverse_branch(nu, 1, hi))
    } else {
        // the right branch reverses orientation
        (inverse_branch(nu, 2, hi), inverse_branch(nu, 2, lo))
    }
}

/// Cylinder interval of a finite word: `I_{j0} ∩ F^-1 I_{j1} ∩ ...`.
pub fn cylinder_interval(nu: f64, symbols: &[u8]) -> (f64, f64) {
    symbols.iter().rev().fold((0.0, 1.0), |iv, &s| pull_interval(nu, s, iv))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decoded {
    pub interval: (f64, f64),
    pub midpoint: f64,
}

impl Decoded {
    pub fn width(&self) -> f64 {
        self.interval.1 - self.interval.0
    }
}

const PERIODIC_DEPTH_CAP: usize = 4000;

/// Point of the Cantor set with the given itinerary. Finite words decode to
/// their cylinder interval; periodic words to the periodic point, found by
/// pulling `[0, 1]` back along repeated blocks until the interval collapses.
pub fn decode(nu: f64, word: &SymbolWord) -> Result<Decoded> {
    check_nu(nu)?;
    if word.alphabet() != 2 || word.is_empty() {
        return Err(Error::InvalidParameter("decode needs a non-empty binary word".into()));
    }
    let interval = if word.is_periodic() {
        periodic_interval(nu, word.block())
    } else {
        cylinder_interval(nu, word.block())
    };
    Ok(Decoded { interval, midpoint: 0.5 * (interval.0 + interval.1) })
}

/// Cylinder of the first `depth` symbols of `word` (periodic words extended).
pub fn decode_depth(nu: f64, word: &SymbolWord, depth: usize) -> Result<Decoded> {
    let prefix = word.prefix(depth)?;
    decode(nu, &SymbolWord::binary(prefix)?)
}

fn periodic_interval(nu: f64, block: &[u8]) -> (f64, f64) {
    let mut iv = (0.0, 1.0);
    let mut used = 0;
    while used < PERIODIC_DEPTH_CAP {
        let next = block.iter().rev().fold(iv, |j, &s| pull_interval(nu, s, j));
        used += block.len();
        // relative stopping rule keeps points near 0 accurate
        let done = next.1 - next.0 <= 1e-16 * next.1.abs() || next == iv;
        iv = next;
        if done {
            break;
        }
    }
    iv
}

/// The periodic point whose itinerary repeats `block` forever.
pub fn periodic_point(nu: f64, block: &[u8]) -> f64 {
    let (lo, hi) = periodic_interval(nu, block);
    0.5 * (lo + hi)
}

/// First `k` symbols of the itinerary of `x`.
pub fn itinerary(nu: f64, x: f64, k: usize) -> Result<SymbolWord> {
    check_nu(nu)?;
    if !(-TOL_ESCAPE..=1.0 + TOL_ESCAPE).contains(&x) {
        return Err(Error::EscapedDomain { step: 0, value: x });
    }
    let mut x = x.clamp(0.0, 1.0);
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let y = nu * x * (1.0 - x);
        if y > 1.0 + TOL_ESCAPE {
            return Err(Error::EscapedDomain { step: j + 1, value: y });
        }
        out.push(if x < 0.5 { 1 } else { 2 });
        x = y.min(1.0);
    }
    SymbolWord::binary(out)
}

/// Bernoulli(1/m, ..., 1/m) mass of a cylinder.
pub fn bernoulli_cylinder_mass(cyl: &Cylinder) -> f64 {
    (1.0 / cyl.prefix().alphabet() as f64).powi(cyl.depth() as i32)
}

/// Largest cylinder width over all binary words of length `k`.
pub fn max_cylinder_width(nu: f64, k: usize, exec: Exec) -> Result<f64> {
    check_nu(nu)?;
    if k > 24 {
        return Err(Error::Capacity(format!("cylinder depth {k} exceeds 24")));
    }
    let widths = exec.map_range(1usize << k, |c| {
        let (lo, hi) = cylinder_interval(nu, &code_to_symbols(c as u64, k));
        hi - lo
    });
    Ok(widths.into_iter().fold(0.0, f64::max))
}

/// Smallest depth whose cylinders all have width below `target`.
pub fn depth_for_width(nu: f64, target: f64, cap: usize) -> Result<usize> {
    (0..=cap)
        .find(|&k| max_cylinder_width(nu, k, Exec::default()).map(|w| w < target).unwrap_or(false))
        .ok_or_else(|| Error::Capacity(format!("no depth up to {cap} gives cylinder width below {target}")))
}

/// Periodic points of period dividing `n`, indexed by binary word code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicTable {
    nu: f64,
    n: usize,
    points: Vec<f64>,
}

impl PeriodicTable {
    pub fn build(nu: f64, n: usize) -> Result<Self> {
        Self::build_with(nu, n, Exec::default())
    }

    pub fn build_with(nu: f64, n: usize, exec: Exec) -> Result<Self> {
        check_nu(nu)?;
        if n == 0 || n > N_MAX {
            return Err(Error::Capacity(format!("period must be in 1..={N_MAX}, got {n}")));
        }
        let points = exec.map_range(1usize << n, |c| periodic_point(nu, &code_to_symbols(c as u64, n)));
        Ok(Self { nu, n, points })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn period(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn point(&self, code: u64) -> f64 {
        self.points[code as usize]
    }

    /// `x, F(x), ..., F^{n-1}(x)` for the point coded by `code`, read off
    /// the table (the orbit of a code is its rotations).
    pub fn orbit(&self, code: u64) -> Vec<f64> {
        let mut c = code;
        (0..self.n)
            .map(|_| {
                let x = self.points[c as usize];
                c = rotate(c, self.n);
                x
            })
            .collect()
    }

    pub fn word(&self, code: u64) -> SymbolWord {
        SymbolWord::periodic(2, &code_to_symbols(code, self.n)).expect("binary symbols are valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const NU: f64 = 5.0;

    fn two_cycle(nu: f64) -> (f64, f64) {
        let r = ((nu + 1.0) * (nu - 3.0)).sqrt();
        ((nu + 1.0 - r) / (2.0 * nu), (nu + 1.0 + r) / (2.0 * nu))
    }

    fn logistic_iter(nu: f64, mut x: f64, n: usize) -> f64 {
        for _ in 0..n {
            x = nu * x * (1.0 - x);
        }
        x
    }

    #[test]
    fn enumerate_counts() {
        let one = enumerate_periodic(1, 2).unwrap();
        assert_eq!(one.iter().map(|w| w.to_string()).collect::<Vec<_>>(), ["1", "2"]);
        assert_eq!(enumerate_periodic(3, 2).unwrap().len(), 8);
        assert_eq!(enumerate_periodic(10, 2).unwrap().len(), 1024);
        assert_eq!(enumerate_periodic(2, 3).unwrap().len(), 9);
        assert!(matches!(enumerate_periodic(21, 2), Err(Error::Capacity(_))));
        assert!(matches!(enumerate_periodic(0, 2), Err(Error::Capacity(_))));
    }

    #[test]
    fn enumeration_is_canonical_and_lexicographic() {
        let words = enumerate_periodic(4, 2).unwrap();
        let rendered: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        let mut sorted = rendered.clone();
        sorted.sort();
        assert_eq!(rendered, sorted);
        let w = &words[symbols_to_code(&[1, 2, 1, 2]) as usize];
        assert_eq!(w.block(), &[1, 2]);
        assert_eq!(w.multiplicity(), 2);
    }

    #[test]
    fn rendering() {
        let w = SymbolWord::parse(2, "12212").unwrap();
        assert_eq!(w.to_string(), "12212");
        assert_eq!(Cylinder::binary(vec![1, 2, 2]).unwrap().to_string(), "[122]");
        assert!(SymbolWord::binary(vec![1, 3]).is_err());
        assert!(SymbolWord::parse(2, "1x").is_err());
    }

    #[test]
    fn itinerary_examples() {
        assert_eq!(itinerary(NU, 0.0, 9).unwrap().symbols(), vec![1; 9]);
        assert_eq!(itinerary(NU, 0.8, 9).unwrap().symbols(), vec![2; 9]);
        match itinerary(NU, 0.6, 1) {
            Err(Error::EscapedDomain { step, value }) => {
                assert_eq!(step, 1);
                assert!((value - 1.2).abs() < 1e-12);
            }
            other => panic!("expected escape, got {other:?}"),
        }
        assert!(itinerary(4.0, 0.1, 3).is_err());
    }

    #[test]
    fn decode_examples() {
        let d = decode(NU, &SymbolWord::binary(vec![2; 12]).unwrap()).unwrap();
        assert!(d.interval.0 <= 0.8 && 0.8 <= d.interval.1);
        assert!(d.width() < 1e-4);

        let (q1, q2) = two_cycle(NU);
        let w12 = SymbolWord::periodic(2, &[1, 2]).unwrap();
        let w21 = SymbolWord::periodic(2, &[2, 1]).unwrap();
        let d12 = decode_depth(NU, &w12, 12).unwrap();
        let d21 = decode_depth(NU, &w21, 12).unwrap();
        assert!((d12.midpoint - q1).abs() <= d12.width());
        assert!((d21.midpoint - q2).abs() <= d21.width());
        assert!((decode(NU, &w12).unwrap().midpoint - q1).abs() < 1e-14);
        assert!((decode(NU, &w21).unwrap().midpoint - q2).abs() < 1e-14);

        let d1 = decode(NU, &SymbolWord::binary(vec![1]).unwrap()).unwrap();
        assert_eq!(d1.interval.0, 0.0);
        assert!((d1.interval.1 - (1.0 - 0.2f64.sqrt()) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn branch_gap_examples() {
        assert!((branch_gap(5.0).unwrap() - 0.2f64.sqrt()).abs() < 1e-15);
        assert!((branch_gap(8.0).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(branch_gap(4.0 + 1e-12).unwrap() < 1e-5);
        assert!(matches!(branch_gap(4.0), Err(Error::Domain(_))));
        let (lo, hi) = branch_endpoints(5.0).unwrap();
        assert!((hi - lo - branch_gap(5.0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn cylinder_masses() {
        let empty = Cylinder::binary(vec![]).unwrap();
        assert_eq!(bernoulli_cylinder_mass(&empty), 1.0);
        assert_eq!(bernoulli_cylinder_mass(&Cylinder::binary(vec![1, 2, 2]).unwrap()), 0.125);
        assert_eq!(bernoulli_cylinder_mass(&Cylinder::binary(vec![1; 10]).unwrap()), 1.0 / 1024.0);
        for k in 0..=12 {
            let total: f64 = (0..1u64 << k)
                .map(|c| bernoulli_cylinder_mass(&Cylinder::binary(code_to_symbols(c, k)).unwrap()))
                .sum();
            assert_eq!(total, 1.0);
        }
    }

    #[test]
    fn periodic_words_realize_periodic_points() {
        for n in 1..=12 {
            let table = PeriodicTable::build(NU, n).unwrap();
            for &p in table.points() {
                assert!((logistic_iter(NU, p, n) - p).abs() < 1e-8, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn table_orbits_follow_the_map() {
        let table = PeriodicTable::build(NU, 6).unwrap();
        for code in [0u64, 5, 17, 42, 63] {
            let orbit = table.orbit(code);
            for j in 0..6 {
                let next = orbit[(j + 1) % 6];
                assert!((NU * orbit[j] * (1.0 - orbit[j]) - next).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn widths_shrink_geometrically() {
        // above 2 + sqrt 5 the map expands on the Cantor set
        for nu in [4.5, 5.0, 8.0] {
            let lambda = nu * branch_gap(nu).unwrap();
            let mut prev = 1.0;
            for k in 1..=14 {
                let w = max_cylinder_width(nu, k, Exec::Sequential).unwrap();
                assert!(w < prev);
                if k > 1 {
                    assert!(w / prev <= 1.0 / lambda + 1e-12, "nu={nu} k={k}");
                }
                prev = w;
            }
        }
    }

    proptest! {
        #[test]
        fn coding_round_trip(symbols in proptest::collection::vec(1u8..=2, 1..=14)) {
            let w = SymbolWord::binary(symbols).unwrap();
            let d = decode(NU, &w).unwrap();
            prop_assert_eq!(itinerary(NU, d.midpoint, w.len()).unwrap(), w);
        }

        #[test]
        fn rotation_is_the_shift(code in 0u64..4096) {
            let s = code_to_symbols(code, 12);
            let mut shifted = s[1..].to_vec();
            shifted.push(s[0]);
            prop_assert_eq!(code_to_symbols(rotate(code, 12), 12), shifted);
            prop_assert_eq!(symbols_to_code(&s), code);
        }
    }
}
