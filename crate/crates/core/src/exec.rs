//! Data-parallel helpers with a process-wide sequential switch.
//!
//! Every helper collects results in input order, so outputs do not depend on
//! the policy or on thread scheduling. Without the `parallel` feature all
//! helpers run sequentially.

use std::sync::atomic::{AtomicU8, Ordering};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecPolicy {
    Sequential,
    Parallel,
}

static POLICY: AtomicU8 = AtomicU8::new(1);

pub fn set_policy(p: ExecPolicy) {
    POLICY.store(
        match p {
            ExecPolicy::Sequential => 0,
            ExecPolicy::Parallel => 1,
        },
        Ordering::Relaxed,
    );
}

pub fn policy() -> ExecPolicy {
    if cfg!(feature = "parallel") && POLICY.load(Ordering::Relaxed) == 1 {
        ExecPolicy::Parallel
    } else {
        ExecPolicy::Sequential
    }
}

/// Ordered map over a slice.
pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if policy() == ExecPolicy::Parallel && items.len() > 1 {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Ordered map over `0..n`.
pub fn par_map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if policy() == ExecPolicy::Parallel && n > 1 {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let v: Vec<u64> = (0..1000).collect();
        let a = par_map(&v, |x| x * x);
        let b: Vec<u64> = v.iter().map(|x| x * x).collect();
        assert_eq!(a, b);
        assert_eq!(par_map_range(5, |i| i + 1), vec![1, 2, 3, 4, 5]);
    }
}
