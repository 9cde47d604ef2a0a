//! Breadth-first search over configuration spaces.
//!
//! Configurations are packed before they enter the visited set: a radix-`n`
//! integer when `n <= 12`, a byte string otherwise.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Largest `n` packed into a single `u64`.
pub const PACKED_MAX_N: usize = 12;

/// Default state cap for configuration-space searches.
pub const DEFAULT_CAP: usize = 50_000_000;

/// Resource knobs shared by every configuration-space search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of distinct states before giving up.
    pub cap: usize,
    /// Worker threads for frontier expansion; 1 keeps everything on the caller.
    pub jobs: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            cap: DEFAULT_CAP,
            jobs: 1,
        }
    }
}

impl SearchOptions {
    pub fn with_cap(cap: usize) -> Self {
        SearchOptions {
            cap,
            ..Default::default()
        }
    }
}

trait Codec: Copy + Send + Sync {
    type Key: Hash + Eq + Clone + Send + Sync;
    fn encode(&self, image: &[usize]) -> Self::Key;
    fn decode(&self, key: &Self::Key) -> Vec<usize>;
}

#[derive(Clone, Copy)]
struct Packed {
    n: usize,
}

impl Codec for Packed {
    type Key = u64;

    fn encode(&self, image: &[usize]) -> u64 {
        image
            .iter()
            .rev()
            .fold(0u64, |acc, &v| acc * self.n as u64 + v as u64)
    }

    fn decode(&self, key: &u64) -> Vec<usize> {
        let mut k = *key;
        (0..self.n)
            .map(|_| {
                let v = (k % self.n as u64) as usize;
                k /= self.n as u64;
                v
            })
            .collect()
    }
}

#[derive(Clone, Copy)]
struct Bytes;

impl Codec for Bytes {
    type Key = Box<[u8]>;

    fn encode(&self, image: &[usize]) -> Box<[u8]> {
        image.iter().map(|&v| v as u8).collect()
    }

    fn decode(&self, key: &Box<[u8]>) -> Vec<usize> {
        key.iter().map(|&v| v as usize).collect()
    }
}

/// The set of configurations visited by a search.
#[derive(Clone, Debug)]
pub struct StateSet {
    n: usize,
    states: States,
}

#[derive(Clone, Debug)]
enum States {
    Packed(HashSet<u64>),
    Bytes(HashSet<Box<[u8]>>),
}

impl StateSet {
    pub fn len(&self) -> usize {
        match &self.states {
            States::Packed(s) => s.len(),
            States::Bytes(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        if p.len() != self.n {
            return false;
        }
        match &self.states {
            States::Packed(s) => s.contains(&Packed { n: self.n }.encode(p.as_slice())),
            States::Bytes(s) => s.contains(&Bytes.encode(p.as_slice())),
        }
    }

    /// Every state, in unspecified order.
    pub fn iter(&self) -> Box<dyn Iterator<Item = Permutation> + '_> {
        match &self.states {
            States::Packed(s) => {
                let c = Packed { n: self.n };
                Box::new(
                    s.iter()
                        .map(move |k| Permutation::from_vec_unchecked(c.decode(k))),
                )
            }
            States::Bytes(s) => Box::new(
                s.iter()
                    .map(|k| Permutation::from_vec_unchecked(Bytes.decode(k))),
            ),
        }
    }

    /// Every state, sorted.
    pub fn to_sorted_vec(&self) -> Vec<Permutation> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort();
        v
    }
}

/// Outcome of an exploration: the visited set and whether the target was hit.
pub(crate) struct Exploration {
    pub visited: StateSet,
    pub found: bool,
}

/// BFS from `start` using `neighbors`, stopping early if `target` is reached.
pub(crate) fn explore<F>(
    start: &Permutation,
    target: Option<&Permutation>,
    opts: SearchOptions,
    neighbors: F,
) -> Result<Exploration>
where
    F: Fn(&[usize], &mut dyn FnMut(Vec<usize>)) + Sync,
{
    let n = start.len();
    if n <= PACKED_MAX_N {
        let (set, found) = run(Packed { n }, start, target, opts, &neighbors)?;
        Ok(Exploration {
            visited: StateSet {
                n,
                states: States::Packed(set),
            },
            found,
        })
    } else if n <= u8::MAX as usize + 1 {
        let (set, found) = run(Bytes, start, target, opts, &neighbors)?;
        Ok(Exploration {
            visited: StateSet {
                n,
                states: States::Bytes(set),
            },
            found,
        })
    } else {
        Err(Error::ResourceLimit(format!(
            "configuration search supports at most 256 vertices, got {n}"
        )))
    }
}

fn expand<C: Codec, F>(codec: C, key: &C::Key, neighbors: &F) -> Vec<C::Key>
where
    F: Fn(&[usize], &mut dyn FnMut(Vec<usize>)) + Sync,
{
    let image = codec.decode(key);
    let mut out = Vec::new();
    neighbors(&image, &mut |next| out.push(codec.encode(&next)));
    out
}

fn run<C: Codec, F>(
    codec: C,
    start: &Permutation,
    target: Option<&Permutation>,
    opts: SearchOptions,
    neighbors: &F,
) -> Result<(HashSet<C::Key>, bool)>
where
    F: Fn(&[usize], &mut dyn FnMut(Vec<usize>)) + Sync,
{
    let start_key = codec.encode(start.as_slice());
    let target_key = target.map(|t| codec.encode(t.as_slice()));
    let mut visited = HashSet::new();
    visited.insert(start_key.clone());
    if opts.cap == 0 {
        return Err(Error::CapExceeded { cap: opts.cap });
    }
    if target_key.as_ref() == Some(&start_key) {
        return Ok((visited, true));
    }
    let pool = if opts.jobs > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(opts.jobs)
                .build()
                .map_err(|e| Error::ResourceLimit(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };
    let mut frontier = vec![start_key];
    while !frontier.is_empty() {
        let candidates: Vec<Vec<C::Key>> = match &pool {
            Some(pool) => pool.install(|| {
                frontier
                    .par_iter()
                    .map(|k| expand(codec, k, neighbors))
                    .collect()
            }),
            None => frontier
                .iter()
                .map(|k| expand(codec, k, neighbors))
                .collect(),
        };
        let mut next = Vec::new();
        for key in candidates.into_iter().flatten() {
            if visited.contains(&key) {
                continue;
            }
            if target_key.as_ref() == Some(&key) {
                visited.insert(key);
                return Ok((visited, true));
            }
            visited.insert(key.clone());
            if visited.len() > opts.cap {
                return Err(Error::CapExceeded { cap: opts.cap });
            }
            next.push(key);
        }
        frontier = next;
    }
    Ok((visited, false))
}

/// BFS that records parents; returns the labels along a shortest route from
/// `start` to `target`, or `None` when the target is unreachable.
pub(crate) fn shortest_route<L, F>(
    start: &Permutation,
    target: &Permutation,
    cap: usize,
    neighbors: F,
) -> Result<Option<Vec<L>>>
where
    L: Clone,
    F: Fn(&[usize], &mut dyn FnMut(L, Vec<usize>)),
{
    let mut parent: HashMap<Vec<usize>, Option<(Vec<usize>, L)>> = HashMap::new();
    parent.insert(start.as_slice().to_vec(), None);
    let mut frontier = vec![start.as_slice().to_vec()];
    let goal = target.as_slice().to_vec();
    let mut reached = parent.contains_key(&goal);
    while !frontier.is_empty() && !reached {
        let mut next = Vec::new();
        for state in &frontier {
            neighbors(state, &mut |label, succ| {
                if reached || parent.contains_key(&succ) {
                    return;
                }
                parent.insert(succ.clone(), Some((state.clone(), label)));
                if succ == goal {
                    reached = true;
                }
                next.push(succ);
            });
            if reached {
                break;
            }
            if parent.len() > cap {
                return Err(Error::CapExceeded { cap });
            }
        }
        frontier = next;
    }
    if !reached {
        return Ok(None);
    }
    let mut labels = Vec::new();
    let mut cur = goal;
    while let Some(Some((prev, label))) = parent.get(&cur) {
        labels.push(label.clone());
        cur = prev.clone();
    }
    labels.reverse();
    Ok(Some(labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packing_round_trips() {
        let c = Packed { n: 12 };
        let image: Vec<usize> = (0..12).rev().collect();
        assert_eq!(c.decode(&c.encode(&image)), image);
        let big: Vec<usize> = (0..40).rev().collect();
        assert_eq!(Bytes.decode(&Bytes.encode(&big)), big);
    }

    #[test]
    fn adjacent_transpositions_reach_everything() {
        let start = Permutation::identity(5);
        let nb = |s: &[usize], out: &mut dyn FnMut(Vec<usize>)| {
            for i in 0..s.len() - 1 {
                let mut t = s.to_vec();
                t.swap(i, i + 1);
                out(t);
            }
        };
        let seq = explore(&start, None, SearchOptions::default(), nb).unwrap();
        let par = explore(
            &start,
            None,
            SearchOptions {
                cap: DEFAULT_CAP,
                jobs: 3,
            },
            nb,
        )
        .unwrap();
        assert_eq!(seq.visited.len(), 120);
        assert_eq!(par.visited.to_sorted_vec(), seq.visited.to_sorted_vec());
        assert!(matches!(
            explore(&start, None, SearchOptions::with_cap(10), nb),
            Err(Error::CapExceeded { cap: 10 })
        ));
    }
}
