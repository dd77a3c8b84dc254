//! Parallel evaluation of grid points. Results come back in input order, so
//! output does not depend on the number of workers.

use rayon::prelude::*;

use crate::error::{CliError, CliResult};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "RQICHAN_THREADS";

pub struct Executor {
    pool: rayon::ThreadPool,
}

impl Executor {
    /// Worker count from `RQICHAN_THREADS` (unset → rayon's default).
    pub fn from_env() -> CliResult<Self> {
        let n = match std::env::var(THREADS_ENV) {
            Err(_) => None,
            Ok(v) => match v.trim().parse::<usize>() {
                Ok(n) if n > 0 => Some(n),
                _ => return Err(CliError::Usage(format!("{THREADS_ENV}: `{v}` is not a positive integer"))),
            },
        };
        Self::with_threads(n)
    }

    pub fn with_threads(n: Option<usize>) -> CliResult<Self> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = n {
            b = b.num_threads(n);
        }
        let pool = b.build().map_err(|e| CliError::Invariant(format!("thread pool: {e}")))?;
        Ok(Self { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// `f` at every item, in item order.
    pub fn map<I: Sync, T: Send, F: Fn(&I) -> T + Sync>(&self, items: &[I], f: F) -> Vec<T> {
        self.pool.install(|| items.par_iter().map(&f).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let items: Vec<u64> = (0..500).collect();
        let f = |&x: &u64| (x * x) % 97;
        let one = Executor::with_threads(Some(1)).unwrap().map(&items, f);
        let four = Executor::with_threads(Some(4)).unwrap().map(&items, f);
        assert_eq!(one, four);
        assert_eq!(one, items.iter().map(f).collect::<Vec<_>>());
    }
}
