//! Permutations of `V(G)`, automorphism groups, and cyclic-group utilities.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A bijection on `0..n`; `image[i]` is the image of `i`.
///
/// Configurations of a puzzle use the same representation: `image[x]` is the
/// pebble sitting on board vertex `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n).collect(),
        }
    }

    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::NotAPermutation(format!(
                    "{}",
                    DisplayOneBased(&image)
                )));
            }
        }
        Ok(Permutation { image })
    }

    /// From 1-based images, as written in files.
    pub fn from_one_based(image: &[usize]) -> Result<Self> {
        if image.contains(&0) {
            return Err(Error::NotAPermutation("labels are 1-based".into()));
        }
        Permutation::new(image.iter().map(|&v| v - 1).collect())
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.image.iter().map(|&v| v + 1).collect()
    }

    /// The transposition of `a` and `b` on `n` points.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p = Permutation::identity(n);
        p.image.swap(a, b);
        p
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, v: usize) -> usize {
        self.image[v]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.image
    }

    pub(crate) fn swap_images(&mut self, a: usize, b: usize) {
        self.image.swap(a, b);
    }

    pub(crate) fn from_vec_unchecked(image: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(image.clone()).is_ok());
        Permutation { image }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(self.then_unchecked(other))
    }

    pub(crate) fn then_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation {
            image: other.image.iter().map(|&v| self.image[v]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { image: inv }
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Permutation {
        let order = self.order() as i64;
        let mut e = k.rem_euclid(order);
        let mut result = Permutation::identity(self.len());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.then_unchecked(&base);
            }
            base = base.then_unchecked(&base);
            e >>= 1;
        }
        result
    }

    /// Cycles of length at least two, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] || self.image[s] == s {
                continue;
            }
            let mut cycle = vec![s];
            seen[s] = true;
            let mut v = self.image[s];
            while v != s {
                seen[v] = true;
                cycle.push(v);
                v = self.image[v];
            }
            out.push(cycle);
        }
        out
    }

    /// Sorted cycle lengths including fixed points.
    pub fn cycle_type(&self) -> Vec<usize> {
        let moved: usize = self.cycles().iter().map(Vec::len).sum();
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.extend(std::iter::repeat_n(1, self.len() - moved));
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    /// The orbit of `x` under the cyclic group generated by `self`, in
    /// generation order `x, p(x), p^2(x), ...`.
    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let mut orbit = vec![x];
        let mut v = self.image[x];
        while v != x {
            orbit.push(v);
            v = self.image[v];
        }
        orbit
    }

    /// Parity of the permutation (`true` when even).
    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    /// The same permutation acting on `n >= len` points, fixing the extras.
    pub fn extend_to(&self, n: usize) -> Permutation {
        let mut image = self.image.clone();
        image.extend(self.len()..n);
        Permutation { image }
    }
}

impl fmt::Display for Permutation {
    /// One-based images separated by single spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", DisplayOneBased(&self.image))
    }
}

struct DisplayOneBased<'a>(&'a [usize]);

impl fmt::Display for DisplayOneBased<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", v + 1)?;
        }
        Ok(())
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.image.iter().map(|v| v + 1))
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Trial-division factorisation as `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime_power(n: u64) -> bool {
    factorize(n).len() == 1
}

/// Extended Euclid: `(g, x, y)` with `a x + b y = g`.
pub fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = extended_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

// ------------------------------------------------------------------- groups

/// A finite permutation group listed element by element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupSummary {
    pub order: usize,
    pub elements: Vec<Permutation>,
}

impl GroupSummary {
    /// Sorts, deduplicates and checks closure under composition and inverse.
    pub fn from_elements(mut elements: Vec<Permutation>) -> Result<Self> {
        elements.sort();
        elements.dedup();
        let group = GroupSummary {
            order: elements.len(),
            elements,
        };
        if !group.is_closed() {
            return Err(Error::internal(
                "group summary",
                "element list is not closed",
            ));
        }
        Ok(group)
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn is_closed(&self) -> bool {
        let Some(first) = self.elements.first() else {
            return false;
        };
        let set: HashSet<&Permutation> = self.elements.iter().collect();
        set.contains(&Permutation::identity(first.len()))
            && self.elements.iter().all(|a| {
                set.contains(&a.inverse())
                    && self
                        .elements
                        .iter()
                        .all(|b| set.contains(&a.then_unchecked(b)))
            })
    }

    /// `true` when `self` is a normal subgroup of `of`.
    pub fn is_normal_in(&self, of: &GroupSummary) -> bool {
        self.elements.iter().all(|h| of.contains(h))
            && of.elements.iter().all(|g| {
                let gi = g.inverse();
                self.elements
                    .iter()
                    .all(|h| self.contains(&g.then_unchecked(h).then_unchecked(&gi)))
            })
    }
}

pub fn is_automorphism(g: &Graph, p: &Permutation) -> Result<bool> {
    if p.len() != g.n() {
        return Err(Error::SizeMismatch {
            expected: g.n(),
            actual: p.len(),
        });
    }
    Ok(g.edges().all(|(u, v)| g.has_edge(p.apply(u), p.apply(v)))
        && (0..g.n()).all(|v| g.degree(v) == g.degree(p.apply(v))))
}

/// Default vertex cap for exhaustive automorphism search.
pub const DEFAULT_AUT_CAP: usize = 16;

/// All automorphisms, by backtracking over vertex images pruned by degree and
/// by adjacency to the already-assigned prefix. Output is lexicographic.
pub fn automorphisms(g: &Graph) -> Result<GroupSummary> {
    automorphisms_with_cap(g, DEFAULT_AUT_CAP)
}

pub fn automorphisms_with_cap(g: &Graph, cap: usize) -> Result<GroupSummary> {
    let n = g.n();
    if n > cap {
        return Err(Error::ResourceLimit(format!(
            "automorphism search limited to {cap} vertices, graph has {n}"
        )));
    }
    let mut out = Vec::new();
    let mut image = Vec::with_capacity(n);
    let mut used = vec![false; n];
    aut_backtrack(g, &mut image, &mut used, &mut out);
    Ok(GroupSummary {
        order: out.len(),
        elements: out,
    })
}

fn aut_backtrack(g: &Graph, image: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
    let v = image.len();
    if v == g.n() {
        out.push(Permutation {
            image: image.clone(),
        });
        return;
    }
    for w in 0..g.n() {
        if used[w] || g.degree(w) != g.degree(v) {
            continue;
        }
        if (0..v).any(|u| g.has_edge(u, v) != g.has_edge(image[u], w)) {
            continue;
        }
        used[w] = true;
        image.push(w);
        aut_backtrack(g, image, used, out);
        image.pop();
        used[w] = false;
    }
}

/// `C(p)`: the cyclic group generated by `p`.
pub fn cyclic_group(p: &Permutation) -> GroupSummary {
    let order = p.order();
    let elements = (0..order as i64).map(|k| p.pow(k)).collect();
    GroupSummary::from_elements(elements).expect("powers of a permutation form a group")
}

/// Generators of `C(p)`: the powers `p^e` with `gcd(e, order) = 1`, by `e`.
pub fn generators_of_cyclic(p: &Permutation) -> Vec<Permutation> {
    let order = p.order();
    (1..=order)
        .filter(|&e| gcd(e, order) == 1)
        .map(|e| p.pow(e as i64 % order as i64))
        .collect()
}

/// Base point for the flip construction: a generator `p^exponent` of `C(sigma)`
/// and a vertex `x` minimising `(d(x, generator(x)), |orbit(x)|)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipBasepoint {
    pub exponent: u64,
    pub generator: Permutation,
    pub x: usize,
    pub distance: usize,
    pub orbit_size: usize,
}

/// Ties are broken by the smallest exponent, then the smallest vertex.
pub fn select_flip_basepoint(g: &Graph, sigma: &Permutation) -> Result<FlipBasepoint> {
    if !is_automorphism(g, sigma)? {
        return Err(Error::NotAutomorphism);
    }
    let order = sigma.order();
    if order < 2 || !is_prime_power(order) {
        return Err(Error::NotPrimePower(order));
    }
    let all: Vec<usize> = (0..g.n()).collect();
    select_basepoint_with(sigma, &g.distance_matrix(), &all)
}

/// Basepoint search restricted to `vertices`.
pub(crate) fn select_basepoint_with(
    sigma: &Permutation,
    dist: &[Vec<Option<usize>>],
    vertices: &[usize],
) -> Result<FlipBasepoint> {
    let order = sigma.order();
    let mut best: Option<(usize, usize, u64, usize)> = None;
    for e in (1..order).filter(|&e| gcd(e, order) == 1) {
        let gen = sigma.pow(e as i64);
        for &x in vertices {
            let d = dist[x][gen.apply(x)].ok_or(Error::Disconnected)?;
            let m = sigma.orbit(x).len();
            let key = (d, m, e, x);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
    }
    let (distance, orbit_size, exponent, x) =
        best.ok_or_else(|| Error::internal("select_flip_basepoint", "empty search space"))?;
    Ok(FlipBasepoint {
        exponent,
        generator: sigma.pow(exponent as i64),
        x,
        distance,
        orbit_size,
    })
}
