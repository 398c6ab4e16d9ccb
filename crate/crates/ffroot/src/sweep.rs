//! Data-parallel helpers for the exhaustive verification sweeps.
//!
//! With the `parallel` feature (default) the work is spread over rayon's
//! pool; without it the same entry points run sequentially. The sweeps are
//! the only data-parallel surface of the crate: individual root extractions
//! are sequential chains of field operations.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map over items sequentially. Always available; the baseline the
/// criterion suite compares against.
pub fn map_sequential<I, O, F>(items: &[I], f: F) -> Vec<O>
where
    I: Sync,
    O: Send,
    F: Fn(&I) -> O + Sync,
{
    items.iter().map(f).collect()
}

/// Map over items on the rayon pool.
#[cfg(feature = "parallel")]
pub fn map_parallel<I, O, F>(items: &[I], f: F) -> Vec<O>
where
    I: Sync,
    O: Send,
    F: Fn(&I) -> O + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Map with the best available strategy.
pub fn map<I, O, F>(items: &[I], f: F) -> Vec<O>
where
    I: Sync,
    O: Send,
    F: Fn(&I) -> O + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        map_parallel(items, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sequential(items, f)
    }
}

/// Run checks over items, collecting failure descriptions.
pub fn collect_failures<I, F>(items: &[I], check: F) -> Vec<String>
where
    I: Sync,
    F: Fn(&I) -> Option<String> + Sync + Send,
{
    map(items, check).into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = map_sequential(&items, |x| x * x % 97);
        let any = map(&items, |x| x * x % 97);
        assert_eq!(seq, any);
    }
}
