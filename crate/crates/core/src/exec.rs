//! Data-parallel helpers with a sequential fallback.
//!
//! Every helper returns exactly what the sequential loop would: `map` keeps
//! index order and `find_first` returns the hit with the smallest index.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
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

// Indices handed to one task at a time; keeps per-task overhead negligible
// against cheap per-index work.
#[cfg(feature = "parallel")]
const CHUNK: usize = 1 << 12;

impl Exec {
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            _ => (0..n).map(f).collect(),
        }
    }

    pub fn find_first<T, F>(self, n: usize, f: F) -> Option<T>
    where
        T: Send,
        F: Fn(usize) -> Option<T> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel if n > CHUNK => {
                use rayon::prelude::*;
                let chunks = n.div_ceil(CHUNK);
                (0..chunks)
                    .into_par_iter()
                    .find_map_first(|c| (c * CHUNK..((c + 1) * CHUNK).min(n)).find_map(&f))
            }
            _ => (0..n).find_map(f),
        }
    }

    /// True iff `f` holds for every index.
    pub fn all<F>(self, n: usize, f: F) -> bool
    where
        F: Fn(usize) -> bool + Sync + Send,
    {
        self.find_first(n, |i| (!f(i)).then_some(())).is_none()
    }
}
