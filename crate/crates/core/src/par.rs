//! Ordered fan-out over independent cases.

use crate::report::{fault_injection_enabled, with_fault_injection};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    #[default]
    Sequential,
    Parallel,
}

impl Execution {
    pub fn from_flag(parallel: bool) -> Self {
        if parallel {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Apply `f` to every item, returning results in input order. `Parallel`
/// uses the rayon pool when the `parallel` feature is on and runs
/// sequentially otherwise. The calling thread's fault-injection flag is
/// carried into the workers.
pub fn map_ordered<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    let corrupt = fault_injection_enabled();
    let g = |t: &T| with_fault_injection(corrupt, || f(t));
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(g).collect()
        }
        _ => items.iter().map(g).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let items: Vec<u64> = (0..200).collect();
        let seq = map_ordered(Execution::Sequential, &items, |x| x * x);
        let par = map_ordered(Execution::Parallel, &items, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(seq[13], 169);
    }

    #[test]
    fn fault_flag_reaches_workers() {
        let items = [0u8; 16];
        let flags =
            with_fault_injection(true, || map_ordered(Execution::Parallel, &items, |_| fault_injection_enabled()));
        assert!(flags.iter().all(|&b| b));
    }
}
