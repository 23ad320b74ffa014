//! Execution policy for the data-parallel loops (Gram entries, grid sups, sweep rows).
//!
//! With the `parallel` feature disabled, [`Exec::Parallel`] silently runs sequentially,
//! so callers never need their own `cfg` switches.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Ordered map over an index range.
    pub fn map_range<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Ordered map over a slice.
    pub fn map_slice<S, T, F>(self, items: &[S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&S) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Index and value of the maximum of `f` over `items`, ties resolved to the lowest index.
    pub fn argmax<S, F>(self, items: &[S], f: F) -> Option<(usize, f64)>
    where
        S: Sync,
        F: Fn(&S) -> f64 + Sync + Send,
    {
        let values = self.map_slice(items, f);
        let mut best: Option<(usize, f64)> = None;
        for (i, v) in values.into_iter().enumerate() {
            match best {
                Some((_, b)) if !(v > b) => {}
                _ if v.is_nan() => {}
                _ => best = Some((i, v)),
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_policies_agree() {
        let xs: Vec<f64> = (0..257).map(|i| ((i * 37) % 101) as f64).collect();
        for exec in [Exec::Sequential, Exec::Parallel] {
            let sq = exec.map_slice(&xs, |x| x * x);
            assert_eq!(sq.len(), xs.len());
            assert_eq!(exec.argmax(&xs, |x| *x), Some((xs.iter().position(|&x| x == 100.0).unwrap(), 100.0)));
        }
        assert_eq!(Exec::Sequential.map_range(5, |i| i * 2), vec![0, 2, 4, 6, 8]);
        assert_eq!(Exec::Parallel.map_range(5, |i| i * 2), vec![0, 2, 4, 6, 8]);
    }
}
