//! Parallel/sequential execution of data-parallel batches. The parallel path
//! sits behind the `parallel` feature; both paths collect in input order so
//! results are bit-identical regardless of schedule.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[cfg_attr(feature = "parallel", default)]
    Parallel,
}

/// Order-preserving map over a batch.
pub fn map_batch<T, R, F>(mode: ExecMode, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match mode {
        ExecMode::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => items.par_iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let items: Vec<u64> = (0..500).collect();
        let seq = map_batch(ExecMode::Sequential, &items, |x| x * x + 1);
        let def = map_batch(ExecMode::default(), &items, |x| x * x + 1);
        assert_eq!(seq, def);
    }
}
