//! Execution strategy for the exhaustive verification sweeps.
//!
//! With the `parallel` feature (on by default) the sweeps shard across a
//! rayon pool; without it, or with [`ExecMode::Sequential`], they run on one
//! thread. Results are identical either way: witness searches always return
//! the positionally first hit.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    /// Falls back to sequential execution when the `parallel` feature is off.
    Parallel,
}

impl Default for ExecMode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

/// Applies `check` to every item and returns the first failure, in item
/// order, if any.
pub fn find_first<T, W, F>(mode: ExecMode, items: &[T], check: F) -> Option<W>
where
    T: Sync,
    W: Send,
    F: Fn(&T) -> Option<W> + Sync,
{
    match mode {
        ExecMode::Sequential => items.iter().find_map(check),
        ExecMode::Parallel => {
            #[cfg(feature = "parallel")]
            {
                items.par_iter().filter_map(|t| check(t)).find_first(|_| true)
            }
            #[cfg(not(feature = "parallel"))]
            {
                items.iter().find_map(check)
            }
        }
    }
}

/// Maps every item, preserving order.
pub fn map_collect<T, U, F>(mode: ExecMode, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    match mode {
        ExecMode::Sequential => items.iter().map(f).collect(),
        ExecMode::Parallel => {
            #[cfg(feature = "parallel")]
            {
                items.par_iter().map(|t| f(t)).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                items.iter().map(f).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_witness_is_deterministic() {
        let items: Vec<u32> = (0..10_000).collect();
        for mode in [ExecMode::Sequential, ExecMode::Parallel] {
            let w = find_first(mode, &items, |&x| if x % 997 == 23 { Some(x) } else { None });
            assert_eq!(w, Some(23));
        }
    }

    #[test]
    fn map_preserves_order() {
        let items: Vec<u32> = (0..100).collect();
        let out = map_collect(ExecMode::Parallel, &items, |&x| x * 2);
        assert_eq!(out, (0..100).map(|x| x * 2).collect::<Vec<_>>());
    }
}
