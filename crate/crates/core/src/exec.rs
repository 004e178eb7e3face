//! Execution policy for the data-parallel inner loops.
//!
//! With the `parallel` feature (on by default) the heavy loops run on the
//! rayon global pool. Without it, [`Exec::Parallel`] silently degrades to the
//! sequential path, so callers never need to branch on the feature.
//!
//! Every helper returns results in index order regardless of policy.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// True when this policy actually fans out work.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// `(0..n).map(f).collect()` in index order.
    pub fn map_range<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Send + Sync,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Maps a slice in order.
    pub fn map_slice<S, T, F>(self, items: &[S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&S) -> T + Send + Sync,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Flat-maps a slice, concatenating per-item outputs in order.
    pub fn flat_map_slice<S, T, F>(self, items: &[S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&S) -> Vec<T> + Send + Sync,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            return items.par_iter().flat_map_iter(f).collect();
        }
        items.iter().flat_map(f).collect()
    }

    /// Sum of `f(i)` over `0..n`, reduced in fixed-size chunks so the result
    /// is bit-identical under both policies.
    pub fn sum_range<F>(self, n: usize, f: F) -> f64
    where
        F: Fn(usize) -> f64 + Send + Sync,
    {
        const CHUNK: usize = 1024;
        let chunks = n.div_ceil(CHUNK);
        let partial = self.map_range(chunks, |c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n);
            (lo..hi).map(&f).sum::<f64>()
        });
        partial.into_iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policies_agree_bitwise() {
        let f = |i: usize| ((i as f64) * 0.37).sin() / (1.0 + i as f64);
        let a = Exec::Sequential.sum_range(100_003, f);
        let b = Exec::Parallel.sum_range(100_003, f);
        assert_eq!(a.to_bits(), b.to_bits());
        let v1 = Exec::Sequential.map_range(5000, |i| i * i);
        let v2 = Exec::Parallel.map_range(5000, |i| i * i);
        assert_eq!(v1, v2);
    }

    #[test]
    fn flat_map_keeps_order() {
        let items = [1usize, 2, 3];
        let out = Exec::Parallel.flat_map_slice(&items, |&k| vec![k; k]);
        assert_eq!(out, vec![1, 2, 2, 3, 3, 3]);
    }
}
