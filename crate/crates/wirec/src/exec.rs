//! Batch evaluation strategy: data-parallel by default, sequential on
//! request or when the `parallel` feature is disabled.

/// How to map over independent work items.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    Parallel,
}

/// The best mode the build supports.
pub fn default_mode() -> ExecMode {
    if cfg!(feature = "parallel") {
        ExecMode::Parallel
    } else {
        ExecMode::Sequential
    }
}

/// Apply `f` to every item, preserving order. `Parallel` silently degrades
/// to sequential when the feature is compiled out.
pub fn map_instances<T, R, F>(mode: ExecMode, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match mode {
        ExecMode::Sequential => items.iter().map(f).collect(),
        ExecMode::Parallel => {
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
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
    fn mapping_preserves_order_in_both_modes() {
        let data: Vec<u64> = (0..64).collect();
        let seq = map_instances(ExecMode::Sequential, &data, |x| x * x);
        let par = map_instances(ExecMode::Parallel, &data, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(seq[10], 100);
        assert_eq!(seq.len(), 64);
    }

    #[test]
    fn default_mode_tracks_the_feature() {
        let mode = default_mode();
        if cfg!(feature = "parallel") {
            assert_eq!(mode, ExecMode::Parallel);
        } else {
            assert_eq!(mode, ExecMode::Sequential);
        }
    }
}
