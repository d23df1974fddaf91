//! Ordered sharding for exhaustive searches.
//!
//! A search tree is cut into shards at a fixed depth, in depth-first order.
//! Shards run on the current rayon pool; the reported result is the first shard
//! in order that did not exhaust its subtree, and the node count is the sum over
//! that shard and every shard before it. Both are therefore independent of the
//! number of worker threads.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShardOutcome<T> {
    Found(T),
    Exhausted,
    /// The shard hit its node budget before finishing.
    Budget,
}

impl<T> ShardOutcome<T> {
    pub fn is_exhausted(&self) -> bool {
        matches!(self, ShardOutcome::Exhausted)
    }
}

/// Cooperative cancellation flag handed to each shard; poll it now and then.
pub trait Cancel {
    fn cancelled(&self) -> bool;
}

struct After<'a> {
    best: &'a AtomicUsize,
    index: usize,
}

impl Cancel for After<'_> {
    fn cancelled(&self) -> bool {
        self.best.load(Ordering::Relaxed) < self.index
    }
}

/// Never cancels.
pub struct NoCancel;

impl Cancel for NoCancel {
    fn cancelled(&self) -> bool {
        false
    }
}

/// Runs `search` on each shard and returns the first decisive outcome in shard
/// order along with the deterministic node total.
pub fn first_in_order<S, T, F>(shards: &[S], parallel: bool, search: F) -> (Option<(usize, ShardOutcome<T>)>, u64)
where
    S: Sync,
    T: Send,
    F: Fn(&S, &dyn Cancel) -> (ShardOutcome<T>, u64) + Sync,
{
    if !parallel || shards.len() <= 1 {
        let mut nodes = 0;
        for (i, shard) in shards.iter().enumerate() {
            let (outcome, n) = search(shard, &NoCancel);
            nodes += n;
            if !outcome.is_exhausted() {
                return (Some((i, outcome)), nodes);
            }
        }
        return (None, nodes);
    }

    let best = AtomicUsize::new(usize::MAX);
    let results: Vec<Option<(ShardOutcome<T>, u64)>> = shards
        .par_iter()
        .enumerate()
        .map(|(i, shard)| {
            if best.load(Ordering::Relaxed) < i {
                return None;
            }
            let (outcome, n) = search(shard, &After { best: &best, index: i });
            if !outcome.is_exhausted() {
                best.fetch_min(i, Ordering::Relaxed);
            }
            Some((outcome, n))
        })
        .collect();

    let mut nodes = 0;
    for (i, r) in results.into_iter().enumerate() {
        // Every shard up to the first decisive one ran to completion.
        let (outcome, n) = r.expect("shards before the decisive one are never skipped");
        nodes += n;
        if !outcome.is_exhausted() {
            return (Some((i, outcome)), nodes);
        }
    }
    (None, nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(shard: &u32, _: &dyn Cancel) -> (ShardOutcome<u32>, u64) {
        if shard % 7 == 3 {
            (ShardOutcome::Found(*shard), *shard as u64)
        } else {
            (ShardOutcome::Exhausted, 1)
        }
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let shards: Vec<u32> = (0..200).collect();
        let seq = first_in_order(&shards, false, toy);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let par = pool.install(|| first_in_order(&shards, true, toy));
        assert_eq!(seq, par);
        assert_eq!(seq.0, Some((3, ShardOutcome::Found(3))));
        assert_eq!(seq.1, 3 + 3);
    }

    #[test]
    fn no_decisive_shard() {
        let shards = vec![1u32, 2, 4];
        let (hit, nodes) = first_in_order(&shards, true, toy);
        assert!(hit.is_none());
        assert_eq!(nodes, 3);
    }
}
