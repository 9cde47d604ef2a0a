//! Path flips, and the constructive realization of graph automorphisms by
//! sequences of flips.
//!
//! The realizer works on subgraphs `K` of the input graph: a set of active
//! vertices together with a subset of the edges between them. Every block it
//! produces is replayed on its own `K` before being handed upwards, so an
//! inapplicable flip surfaces as an [`Error::Internal`] naming the step.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::perm::{extended_gcd, factorize, is_automorphism, select_basepoint_with, Permutation};
use crate::puzzle::Configuration;
use crate::search::{self, SearchOptions, StateSet};

/// Reversal of the pebbles along a board path.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathFlip {
    pub path: Vec<usize>,
}

impl PathFlip {
    pub fn new(path: Vec<usize>) -> Self {
        PathFlip { path }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FlipSequence {
    pub flips: Vec<PathFlip>,
}

impl FlipSequence {
    pub fn new(flips: Vec<PathFlip>) -> Self {
        FlipSequence { flips }
    }

    pub fn len(&self) -> usize {
        self.flips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flips.is_empty()
    }

    /// Total number of board vertices touched, counted with multiplicity.
    pub fn total_path_vertices(&self) -> usize {
        self.flips.iter().map(|f| f.path.len()).sum()
    }
}

fn one_based(seq: &[usize]) -> String {
    seq.iter()
        .map(|v| (v + 1).to_string())
        .collect::<Vec<_>>()
        .join("-")
}

/// Flips `flip` at configuration `f` in `Puz(G)`.
pub fn apply_flip(g: &Graph, f: &Configuration, flip: &PathFlip) -> Result<Configuration> {
    if f.len() != g.n() {
        return Err(Error::SizeMismatch {
            expected: g.n(),
            actual: f.len(),
        });
    }
    if !g.is_path(&flip.path) {
        return Err(Error::InvalidBoardPath(one_based(&flip.path)));
    }
    let image: Vec<usize> = flip.path.iter().map(|&v| f.apply(v)).collect();
    if !g.is_path(&image) {
        return Err(Error::PebbleImageNotPath(one_based(&image)));
    }
    let mut out = f.as_slice().to_vec();
    for (&v, &p) in flip.path.iter().zip(image.iter().rev()) {
        out[v] = p;
    }
    Ok(Permutation::from_vec_unchecked(out))
}

/// Replays `seq` from `start`, reporting the first inapplicable flip.
pub fn replay_flips(g: &Graph, start: &Configuration, seq: &FlipSequence) -> Result<Configuration> {
    let mut f = start.clone();
    for (i, flip) in seq.flips.iter().enumerate() {
        f = apply_flip(g, &f, flip).map_err(|e| match e {
            Error::InvalidBoardPath(s) => Error::InvalidBoardPath(format!("flip #{}: {s}", i + 1)),
            Error::PebbleImageNotPath(s) => {
                Error::PebbleImageNotPath(format!("flip #{}: {s}", i + 1))
            }
            e => e,
        })?;
    }
    Ok(f)
}

/// Concatenates `s1` (identity to `tau`) and `s2` (identity to `mu`) into a
/// sequence realizing `tau ∘ mu`; `tau` must be an automorphism of `g`.
pub fn compose_flip_sequences(
    g: &Graph,
    s1: &FlipSequence,
    s2: &FlipSequence,
) -> Result<FlipSequence> {
    let id = Permutation::identity(g.n());
    let tau = replay_flips(g, &id, s1)?;
    let mu = replay_flips(g, &id, s2)?;
    if !is_automorphism(g, &tau)? {
        return Err(Error::NotAutomorphism);
    }
    let mut flips = s1.flips.clone();
    flips.extend(s2.flips.iter().cloned());
    let out = FlipSequence::new(flips);
    let end = replay_flips(g, &id, &out)?;
    if end != tau.then_unchecked(&mu) {
        return Err(Error::internal(
            "compose_flip_sequences",
            "concatenation does not realize the product",
        ));
    }
    Ok(out)
}

// ------------------------------------------------------------------ oracle

/// Every simple path with at least two vertices, one orientation each.
fn all_paths(g: &Graph) -> Vec<Vec<usize>> {
    fn extend(g: &Graph, path: &mut Vec<usize>, on: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let last = *path.last().unwrap();
        for &w in g.neighbors(last) {
            if on[w] {
                continue;
            }
            path.push(w);
            on[w] = true;
            if path[0] < w {
                out.push(path.clone());
            }
            extend(g, path, on, out);
            on[w] = false;
            path.pop();
        }
    }
    let mut out = Vec::new();
    let mut on = vec![false; g.n()];
    for v in 0..g.n() {
        on[v] = true;
        extend(g, &mut vec![v], &mut on, &mut out);
        on[v] = false;
    }
    out
}

fn flip_successor(g: &Graph, state: &[usize], path: &[usize]) -> Option<Vec<usize>> {
    let image: Vec<usize> = path.iter().map(|&v| state[v]).collect();
    if !image.windows(2).all(|w| g.has_edge(w[0], w[1])) {
        return None;
    }
    let mut next = state.to_vec();
    for (&v, &p) in path.iter().zip(image.iter().rev()) {
        next[v] = p;
    }
    Some(next)
}

/// Configurations reachable from the identity by single applicable flips.
pub fn flip_reachable_set(g: &Graph, opts: SearchOptions) -> Result<StateSet> {
    let paths = all_paths(g);
    let start = Permutation::identity(g.n());
    let nb = |state: &[usize], out: &mut dyn FnMut(Vec<usize>)| {
        for p in &paths {
            if let Some(next) = flip_successor(g, state, p) {
                out(next);
            }
        }
    };
    Ok(search::explore(&start, None, opts, nb)?.visited)
}

/// Brute-force flip reachability of `sigma` from the identity, with a
/// shortest witness when reachable.
pub fn flip_bfs_oracle(
    g: &Graph,
    sigma: &Permutation,
    cap: usize,
) -> Result<(bool, Option<FlipSequence>)> {
    if sigma.len() != g.n() {
        return Err(Error::SizeMismatch {
            expected: g.n(),
            actual: sigma.len(),
        });
    }
    let paths = all_paths(g);
    let start = Permutation::identity(g.n());
    let route = search::shortest_route(
        &start,
        sigma,
        cap,
        |state, out: &mut dyn FnMut(usize, Vec<usize>)| {
            for (i, p) in paths.iter().enumerate() {
                if let Some(next) = flip_successor(g, state, p) {
                    out(i, next);
                }
            }
        },
    )?;
    Ok(match route {
        Some(idx) => (
            true,
            Some(FlipSequence::new(
                idx.into_iter()
                    .map(|i| PathFlip::new(paths[i].clone()))
                    .collect(),
            )),
        ),
        None => (false, None),
    })
}

// ---------------------------------------------------------------- realizer

/// Knobs for [`realize_by_flips_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RealizeOptions {
    /// Maximum recursion depth; `None` means ten times the vertex count.
    pub max_depth: Option<usize>,
}

/// A flip sequence replaying from the identity to `sigma`.
pub fn realize_by_flips(g: &Graph, sigma: &Permutation) -> Result<FlipSequence> {
    realize_by_flips_with(g, sigma, RealizeOptions::default())
}

pub fn realize_by_flips_with(
    g: &Graph,
    sigma: &Permutation,
    opts: RealizeOptions,
) -> Result<FlipSequence> {
    if !is_automorphism(g, sigma)? {
        return Err(Error::NotAutomorphism);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let realizer = Realizer {
        max_depth: opts.max_depth.unwrap_or(10 * g.n().max(1)),
    };
    let k = Sub {
        g: g.clone(),
        active: (0..g.n()).collect(),
    };
    let paths = realizer.realize(&k, sigma, 0)?;
    let seq = FlipSequence::new(paths.into_iter().map(PathFlip::new).collect());
    let end = replay_flips(g, &Permutation::identity(g.n()), &seq)
        .map_err(|e| Error::internal("realize_by_flips", e.to_string()))?;
    if &end != sigma {
        return Err(Error::internal(
            "realize_by_flips",
            "sequence does not end at the target",
        ));
    }
    Ok(seq)
}

/// Active vertices plus the edges of the current subgraph; inactive
/// vertices stay isolated so that labels remain global.
#[derive(Clone, Debug)]
struct Sub {
    g: Graph,
    active: Vec<usize>,
}

impl Sub {
    fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        active: Vec<usize>,
    ) -> Sub {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.insert_edge(u, v);
        }
        Sub { g, active }
    }

    /// The subgraph induced on the active vertices accepted by `keep`.
    fn restrict(&self, keep: impl Fn(usize) -> bool) -> Sub {
        let active: Vec<usize> = self.active.iter().copied().filter(|&v| keep(v)).collect();
        let edges = self.g.edges().filter(|&(u, v)| keep(u) && keep(v));
        Sub::from_edges(self.g.n(), edges, active)
    }

    fn without(&self, removed: &[usize]) -> Sub {
        self.restrict(|v| !removed.contains(&v))
    }

    fn is_connected(&self) -> bool {
        let Some(&first) = self.active.first() else {
            return true;
        };
        let dist = self.g.distances_from(first);
        self.active.iter().all(|&v| dist[v].is_some())
    }

    fn components(&self) -> Vec<Vec<usize>> {
        let is_active = self.mask();
        self.g
            .components()
            .into_iter()
            .filter(|c| is_active[c[0]])
            .collect()
    }

    fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.g.n()];
        for &v in &self.active {
            m[v] = true;
        }
        m
    }
}

/// `sigma` on `vertices`, the identity elsewhere.
fn restricted(sigma: &Permutation, keep: impl Fn(usize) -> bool) -> Permutation {
    Permutation::from_vec_unchecked(
        (0..sigma.len())
            .map(|v| if keep(v) { sigma.apply(v) } else { v })
            .collect(),
    )
}

fn repeat(block: &[Vec<usize>], times: u64) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(block.len() * times as usize);
    for _ in 0..times {
        out.extend(block.iter().cloned());
    }
    out
}

fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let (g, x, _) = extended_gcd(a as i64, n as i64);
    (g == 1).then(|| x.rem_euclid(n as i64) as u64)
}

fn check(cond: bool, step: &str, detail: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::internal(step, detail()))
    }
}

struct Realizer {
    max_depth: usize,
}

/// A path of `k` whose flip from the identity is exactly `sigma`, if a short
/// bounded search finds one.
fn single_flip(k: &Sub, sigma: &Permutation) -> Option<Vec<usize>> {
    const BUDGET: usize = 10_000;
    let moved: Vec<usize> = k
        .active
        .iter()
        .copied()
        .filter(|&v| sigma.apply(v) != v)
        .collect();
    if moved.is_empty() || moved.iter().any(|&v| sigma.apply(sigma.apply(v)) != v) {
        return None;
    }
    let half = moved.len() / 2;
    let mask = k.mask();
    let mut used = vec![false; k.g.n()];
    let mut front = Vec::with_capacity(half);
    let mut steps = 0;

    fn close(k: &Sub, sigma: &Permutation, mask: &[bool], front: &[usize]) -> Option<Vec<usize>> {
        let last = *front.last()?;
        let mirror = sigma.apply(last);
        let back = front.iter().rev().map(|&v| sigma.apply(v));
        if k.g.has_edge(last, mirror) {
            return Some(front.iter().copied().chain(back).collect());
        }
        let middle =
            k.g.neighbors(last)
                .iter()
                .copied()
                .find(|&c| mask[c] && sigma.apply(c) == c && k.g.has_edge(c, mirror))?;
        Some(
            front
                .iter()
                .copied()
                .chain(std::iter::once(middle))
                .chain(back)
                .collect(),
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        k: &Sub,
        sigma: &Permutation,
        mask: &[bool],
        half: usize,
        used: &mut [bool],
        front: &mut Vec<usize>,
        steps: &mut usize,
    ) -> Option<Vec<usize>> {
        *steps += 1;
        if *steps > BUDGET {
            return None;
        }
        if front.len() == half {
            return close(k, sigma, mask, front);
        }
        let last = *front.last().unwrap();
        for &w in k.g.neighbors(last) {
            if !mask[w] || used[w] || sigma.apply(w) == w {
                continue;
            }
            used[w] = true;
            used[sigma.apply(w)] = true;
            front.push(w);
            let found = extend(k, sigma, mask, half, used, front, steps);
            front.pop();
            used[w] = false;
            used[sigma.apply(w)] = false;
            if found.is_some() {
                return found;
            }
        }
        None
    }

    for &a in &moved {
        if a > sigma.apply(a) {
            continue;
        }
        used[a] = true;
        used[sigma.apply(a)] = true;
        front.push(a);
        let found = extend(k, sigma, &mask, half, &mut used, &mut front, &mut steps);
        front.clear();
        used[a] = false;
        used[sigma.apply(a)] = false;
        if found.is_some() {
            return found;
        }
    }
    None
}

impl Realizer {
    /// Replays `paths` from the identity using only the edges of `k`.
    fn validate(
        &self,
        k: &Sub,
        paths: &[Vec<usize>],
        target: &Permutation,
        step: &str,
    ) -> Result<()> {
        let mask = k.mask();
        let mut f = Permutation::identity(k.g.n());
        for (i, p) in paths.iter().enumerate() {
            if p.iter().any(|&v| !mask[v]) {
                return Err(Error::internal(
                    step,
                    format!("flip #{} leaves the subgraph: {}", i + 1, one_based(p)),
                ));
            }
            f = apply_flip(&k.g, &f, &PathFlip::new(p.clone()))
                .map_err(|e| Error::internal(step, format!("flip #{}: {e}", i + 1)))?;
        }
        check(&f == target, step, || {
            format!("block ends at {f}, expected {target}")
        })
    }

    fn realize(&self, k: &Sub, sigma: &Permutation, depth: usize) -> Result<Vec<Vec<usize>>> {
        if depth > self.max_depth {
            return Err(Error::internal(
                "realize",
                format!("recursion depth exceeded {}", self.max_depth),
            ));
        }
        if sigma.is_identity() {
            return Ok(Vec::new());
        }
        if let Some(path) = single_flip(k, sigma) {
            return Ok(vec![path]);
        }
        check(k.is_connected(), "realize", || {
            "subgraph is disconnected".into()
        })?;
        let order = sigma.order();
        let factors = factorize(order);
        let out = if factors.len() > 1 {
            let (p, a) = factors[0];
            let r = p.pow(a);
            let s = order / r;
            let seq_r = self.realize(k, &sigma.pow(r as i64), depth + 1)?;
            let seq_s = self.realize(k, &sigma.pow(s as i64), depth + 1)?;
            let (_, x, y) = extended_gcd(r as i64, s as i64);
            let mut out = repeat(&seq_r, x.rem_euclid(s as i64) as u64);
            out.extend(repeat(&seq_s, y.rem_euclid(r as i64) as u64));
            out
        } else {
            let dist = k.g.distance_matrix();
            let bp = select_basepoint_with(sigma, &dist, &k.active)?;
            let block = if bp.orbit_size == 1 {
                self.fixed_basepoint(k, &bp.generator, bp.x, depth)?
            } else {
                self.moving_basepoint(k, &bp.generator, bp.x, depth)?
            };
            let times = mod_inverse(bp.exponent, order).ok_or_else(|| {
                Error::internal("realize", "generator exponent is not invertible")
            })?;
            repeat(&block, times)
        };
        self.validate(k, &out, sigma, "realize")?;
        Ok(out)
    }

    /// `sigma` fixes `x`.
    fn fixed_basepoint(
        &self,
        k: &Sub,
        sigma: &Permutation,
        x: usize,
        depth: usize,
    ) -> Result<Vec<Vec<usize>>> {
        let rest = k.without(&[x]);
        if rest.is_connected() {
            return self.realize(&rest, sigma, depth + 1);
        }
        let comps = rest.components();
        let mut comp_of = vec![usize::MAX; k.g.n()];
        for (c, vs) in comps.iter().enumerate() {
            for &v in vs {
                comp_of[v] = c;
            }
        }
        let mut out = Vec::new();
        let mut cur = sigma.clone();
        // Swap whole branches at x until every branch is mapped to itself.
        while let Some(c) = (0..comps.len()).find(|&c| comp_of[cur.apply(comps[c][0])] != c) {
            let c2 = comp_of[cur.apply(comps[c][0])];
            let inv = cur.inverse();
            let mut t: Vec<usize> = (0..k.g.n()).collect();
            for &v in &comps[c] {
                t[v] = cur.apply(v);
            }
            for &v in &comps[c2] {
                t[v] = inv.apply(v);
            }
            let t =
                Permutation::new(t).map_err(|e| Error::internal("branch swap", e.to_string()))?;
            out.extend(self.swap_branches(k, &t, x, &comps[c], depth)?);
            cur = t.then_unchecked(&cur);
        }
        for vs in &comps {
            let in_branch = |v: usize| v == x || comp_of[v] == comp_of[vs[0]];
            let branch = k.restrict(in_branch);
            out.extend(self.realize(&branch, &restricted(&cur, in_branch), depth + 1)?);
        }
        self.validate(k, &out, sigma, "fixed basepoint")?;
        Ok(out)
    }

    /// Realizes an involution `t` exchanging the branch `comp` at the cut
    /// vertex `x` with another branch.
    fn swap_branches(
        &self,
        k: &Sub,
        t: &Permutation,
        x: usize,
        comp: &[usize],
        depth: usize,
    ) -> Result<Vec<Vec<usize>>> {
        let dist = k.g.distances_from(x);
        let v1 = *comp
            .iter()
            .max_by_key(|&&v| (dist[v], std::cmp::Reverse(v)))
            .ok_or_else(|| Error::internal("branch swap", "empty branch"))?;
        let v2 = t.apply(v1);
        let path =
            k.g.shortest_path(v1, v2)
                .ok_or_else(|| Error::internal("branch swap", "no path"))?;
        let mut out = vec![path.clone()];
        if path.len() >= 4 {
            out.push(path[1..path.len() - 1].to_vec());
        }
        let rest = k.without(&[v1, v2]);
        check(rest.is_connected(), "branch swap", || {
            "removing the swapped pair disconnects".into()
        })?;
        out.extend(self.realize(&rest, &restricted(t, |v| v != v1 && v != v2), depth + 1)?);
        self.validate(k, &out, t, "branch swap")?;
        Ok(out)
    }

    /// `sigma` moves `x`, whose orbit and distance to its image are minimal.
    fn moving_basepoint(
        &self,
        k: &Sub,
        sigma: &Permutation,
        x: usize,
        depth: usize,
    ) -> Result<Vec<Vec<usize>>> {
        let n_all = k.g.n();
        let order = sigma.order() as usize;
        let m = sigma.orbit(x).len();
        let pows: Vec<Permutation> = (0..order).map(|i| sigma.pow(i as i64)).collect();
        let p =
            k.g.shortest_path(x, sigma.apply(x))
                .ok_or_else(|| Error::internal("translates", "no path to image"))?;
        let d = p.len() - 1;

        // Orbits of y_0 .. y_{d-1} must be pairwise disjoint, with sizes divisible by m.
        let mut owner = vec![usize::MAX; n_all];
        for (j, &y) in p[..d].iter().enumerate() {
            let orbit = sigma.orbit(y);
            check(orbit.len().is_multiple_of(m), "translates", || {
                format!(
                    "orbit of {} has size {} not divisible by {m}",
                    y + 1,
                    orbit.len()
                )
            })?;
            for v in orbit {
                check(owner[v] == usize::MAX, "translates", || {
                    format!("orbits meet at {}", v + 1)
                })?;
                owner[v] = j;
            }
        }
        let in_h: Vec<bool> = owner.iter().map(|&o| o != usize::MAX).collect();
        let h_vertices: Vec<usize> = (0..n_all).filter(|&v| in_h[v]).collect();
        let mut edges: HashSet<(usize, usize)> = HashSet::new();
        let add_translates = |edges: &mut HashSet<(usize, usize)>, path: &[usize]| {
            for s in &pows {
                for w in path.windows(2) {
                    let (a, b) = (s.apply(w[0]), s.apply(w[1]));
                    edges.insert((a.min(b), a.max(b)));
                }
            }
        };
        add_translates(&mut edges, &p);

        // Level bookkeeping: first[v] marks X_0 ∪ W_0, last[v] marks X_{m-1} ∪ W_{m-1},
        // both excluding the orbit of x, on which sigma^m is trivial.
        let mut first = vec![false; n_all];
        let mut last = vec![false; n_all];
        let mark_levels = |first: &mut [bool], last: &mut [bool], v0: usize| {
            for (i, s) in pows.iter().enumerate() {
                let v = s.apply(v0);
                if i % m == 0 {
                    first[v] = true;
                }
                if i % m == m - 1 {
                    last[v] = true;
                }
            }
        };
        for &y in &p[1..d] {
            mark_levels(&mut first, &mut last, y);
        }

        let mut attach: Option<(Vec<usize>, usize)> = None; // (Q from z to y in Y, index of y in P)
        if h_vertices.len() != k.active.len() {
            let dist_h = k.g.distances_from_set(h_vertices.iter().copied());
            let z = *k
                .active
                .iter()
                .filter(|&&v| !in_h[v])
                .max_by_key(|&&v| (dist_h[v], std::cmp::Reverse(v)))
                .expect("vertex outside H");
            let q =
                k.g.shortest_path_to_set(z, &h_vertices)
                    .ok_or_else(|| Error::internal("attachment", "no path to H"))?;
            let y = *q.last().unwrap();
            let j0 = owner[y];
            let i = (0..order)
                .find(|&i| pows[i].apply(p[j0]) == y)
                .ok_or_else(|| {
                    Error::internal("attachment", "end vertex outside the translates of Y")
                })?;
            let back = &pows[(order - i) % order];
            let q: Vec<usize> = q.iter().map(|&v| back.apply(v)).collect();
            add_translates(&mut edges, &q);
            for &w in &q[..q.len() - 1] {
                mark_levels(&mut first, &mut last, w);
            }
            attach = Some((q, j0));
        }
        let mut in_f = in_h.clone();
        for &(a, b) in &edges {
            in_f[a] = true;
            in_f[b] = true;
        }
        let f_active: Vec<usize> = (0..n_all).filter(|&v| in_f[v]).collect();
        let f = Sub::from_edges(n_all, edges.iter().copied(), f_active);

        if let Some((q, _)) = &attach {
            if f.active.len() != k.active.len() {
                let out = self.partial_cover(k, &f, sigma, q[0], depth)?;
                self.validate(k, &out, sigma, "partial cover")?;
                return Ok(out);
            }
        }

        let out = if m < order {
            self.split_levels(&f, sigma, &pows, x, m, &first, &last, depth)?
        } else {
            self.reflections(&f, sigma, &pows, &p, attach.as_ref(), depth)?
        };
        self.validate(k, &out, sigma, "full cover")?;
        Ok(out)
    }

    /// `F` misses some vertex: realize `sigma|F`, undo it on `F - orbit(z)`,
    /// then realize `sigma` on `K - orbit(z)`.
    fn partial_cover(
        &self,
        k: &Sub,
        f: &Sub,
        sigma: &Permutation,
        z: usize,
        depth: usize,
    ) -> Result<Vec<Vec<usize>>> {
        let orbit_z = sigma.orbit(z);
        let f_mask = f.mask();
        let mut out = self.realize(f, &restricted(sigma, |v| f_mask[v]), depth + 1)?;
        let f_rest = f.without(&orbit_z);
        let g_rest = k.without(&orbit_z);
        check(
            f_rest.is_connected() && g_rest.is_connected(),
            "partial cover",
            || "removing the attachment orbit disconnects".into(),
        )?;
        let f_rest_mask = f_rest.mask();
        out.extend(self.realize(
            &f_rest,
            &restricted(&sigma.inverse(), |v| f_rest_mask[v]),
            depth + 1,
        )?);
        let g_rest_mask = g_rest.mask();
        out.extend(self.realize(&g_rest, &restricted(sigma, |v| g_rest_mask[v]), depth + 1)?);
        Ok(out)
    }

    /// `m < order`: `sigma = mu ∘ tau` with `tau` of order `m` shifting levels
    /// and `mu = sigma^m` on level zero.
    #[allow(clippy::too_many_arguments)]
    fn split_levels(
        &self,
        f: &Sub,
        sigma: &Permutation,
        pows: &[Permutation],
        x: usize,
        m: usize,
        first: &[bool],
        last: &[bool],
        depth: usize,
    ) -> Result<Vec<Vec<usize>>> {
        let order = pows.len();
        let n_all = f.g.n();
        let f_mask = f.mask();
        let back = &pows[(order + 1 - m) % order];
        let tau: Vec<usize> = (0..n_all)
            .map(|v| {
                if !f_mask[v] {
                    v
                } else if last[v] {
                    back.apply(v)
                } else {
                    sigma.apply(v)
                }
            })
            .collect();
        let tau = Permutation::new(tau)
            .map_err(|e| Error::internal("level shift", format!("tau: {e}")))?;
        check(is_automorphism(&f.g, &tau)?, "level shift", || {
            format!("tau {tau} is not an automorphism")
        })?;
        let sm = &pows[m];
        let level0 = |v: usize| f_mask[v] && (first[v] || v == x || v == sigma.apply(x));
        let mu = restricted(sm, |v| first[v]);
        check(mu.then_unchecked(&tau) == *sigma, "level shift", || {
            "sigma is not mu∘tau".into()
        })?;
        let f0 = f.restrict(level0);
        let mut out = self.realize(&f0, &mu, depth + 1)?;
        out.extend(self.realize(f, &tau, depth + 1)?);
        Ok(out)
    }

    /// `m = order`: the translates of `P` form a cycle and `sigma = rho_1 ∘ rho_0`
    /// for two reflections.
    fn reflections(
        &self,
        f: &Sub,
        sigma: &Permutation,
        pows: &[Permutation],
        p: &[usize],
        attach: Option<&(Vec<usize>, usize)>,
        depth: usize,
    ) -> Result<Vec<Vec<usize>>> {
        let n = pows.len() as i64;
        let d = (p.len() - 1) as i64;
        let r = d * n;
        let j0 = attach.map_or(0, |&(_, j)| j as i64);
        // cycle[k] = z_k, with z_0 the attachment point
        let cycle: Vec<usize> = (0..r)
            .map(|k| {
                let c = (k + j0) % r;
                pows[(c / d) as usize].apply(p[(c % d) as usize])
            })
            .collect();
        let mut seen = HashSet::new();
        check(cycle.iter().all(|v| seen.insert(*v)), "reflections", || {
            "translates of P do not form a cycle".into()
        })?;

        let rho = |t: i64| -> Result<Permutation> {
            let mut img: Vec<Option<usize>> = vec![None; f.g.n()];
            let mut set = |v: usize, w: usize| -> Result<()> {
                match img[v] {
                    Some(prev) if prev != w => Err(Error::internal(
                        "reflections",
                        format!("rho_{t} is not well defined at {}", v + 1),
                    )),
                    _ => {
                        img[v] = Some(w);
                        Ok(())
                    }
                }
            };
            for k in 0..r {
                set(cycle[k as usize], cycle[(d * t - k).rem_euclid(r) as usize])?;
            }
            if let Some((q, _)) = attach {
                for i in 0..n {
                    let to = &pows[(t - i).rem_euclid(n) as usize];
                    for &w in &q[..q.len() - 1] {
                        set(pows[i as usize].apply(w), to.apply(w))?;
                    }
                }
            }
            let img: Vec<usize> = img
                .iter()
                .enumerate()
                .map(|(v, w)| w.unwrap_or(v))
                .collect();
            let perm = Permutation::new(img)
                .map_err(|e| Error::internal("reflections", format!("rho_{t}: {e}")))?;
            check(is_automorphism(&f.g, &perm)?, "reflections", || {
                format!("rho_{t} is not an automorphism")
            })?;
            Ok(perm)
        };
        let rho1 = rho(1)?;
        let rho0 = rho(0)?;
        check(rho1.then_unchecked(&rho0) == *sigma, "reflections", || {
            "sigma is not rho_1∘rho_0".into()
        })?;
        let orbit_z = attach.map(|(q, _)| sigma.orbit(q[0]));
        let mut out = Vec::new();
        for rho in [&rho1, &rho0] {
            let block = match &orbit_z {
                None => self.reflect_cycle(&cycle, rho)?,
                Some(oz) => self.reflect_with_attachments(f, rho, oz, depth)?,
            };
            self.validate(f, &block, rho, "reflection")?;
            out.extend(block);
        }
        Ok(out)
    }

    /// A reflection of a bare cycle is a single flip.
    fn reflect_cycle(&self, cycle: &[usize], rho: &Permutation) -> Result<Vec<Vec<usize>>> {
        if rho.is_identity() {
            return Ok(Vec::new());
        }
        let r = cycle.len();
        let at = |k: usize| cycle[k % r];
        if let Some(b) = (0..r).find(|&b| rho.apply(at(b)) == at(b)) {
            return Ok(vec![(1..r).map(|i| at(b + i)).collect()]);
        }
        let a = (0..r)
            .find(|&a| rho.apply(at(a)) == at(a + r - 1))
            .ok_or_else(|| Error::internal("reflections", "no flip realizes the reflection"))?;
        Ok(vec![(0..r).map(|i| at(a + i)).collect()])
    }

    /// Swap each pair of attachment ends by a double flip along a path that
    /// avoids the rest of their orbit, then recurse on what remains.
    fn reflect_with_attachments(
        &self,
        f: &Sub,
        rho: &Permutation,
        orbit_z: &[usize],
        depth: usize,
    ) -> Result<Vec<Vec<usize>>> {
        let mut sorted = orbit_z.to_vec();
        sorted.sort_unstable();
        let mut out = Vec::new();
        for &a in &sorted {
            let b = rho.apply(a);
            if a >= b {
                continue;
            }
            let corridor = f.restrict(|v| v == a || v == b || !orbit_z.contains(&v));
            let path = corridor.g.shortest_path(a, b).ok_or_else(|| {
                Error::internal(
                    "reflections",
                    format!("no path from {} to {}", a + 1, b + 1),
                )
            })?;
            if path.len() >= 4 {
                let inner = path[1..path.len() - 1].to_vec();
                out.push(path);
                out.push(inner);
            } else {
                out.push(path);
            }
        }
        let rest = f.without(orbit_z);
        let rest_mask = rest.mask();
        out.extend(self.realize(&rest, &restricted(rho, |v| rest_mask[v]), depth + 1)?);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::automorphisms;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::from_one_based(v).unwrap()
    }

    fn rotation(n: usize, k: usize) -> Permutation {
        Permutation::new((0..n).map(|i| (i + k) % n).collect()).unwrap()
    }

    #[test]
    fn single_flips() {
        let p2 = Graph::path(2).unwrap();
        let id2 = Permutation::identity(2);
        assert_eq!(
            apply_flip(&p2, &id2, &PathFlip::new(vec![0, 1])).unwrap(),
            perm(&[2, 1])
        );
        let p5 = Graph::path(5).unwrap();
        let rev = apply_flip(
            &p5,
            &Permutation::identity(5),
            &PathFlip::new(vec![0, 1, 2, 3, 4]),
        )
        .unwrap();
        assert_eq!(rev, perm(&[5, 4, 3, 2, 1]));
        let c5 = Graph::cycle(5).unwrap();
        let refl = apply_flip(
            &c5,
            &Permutation::identity(5),
            &PathFlip::new(vec![0, 1, 2, 3, 4]),
        )
        .unwrap();
        assert_eq!(refl, perm(&[5, 4, 3, 2, 1]));
        assert!(is_automorphism(&c5, &refl).unwrap());
    }

    #[test]
    fn flip_errors_are_distinct() {
        let p3 = Graph::path(3).unwrap();
        let id = Permutation::identity(3);
        assert!(matches!(
            apply_flip(&p3, &id, &PathFlip::new(vec![0, 2])),
            Err(Error::InvalidBoardPath(_))
        ));
        assert!(matches!(
            apply_flip(&p3, &id, &PathFlip::new(vec![0, 1, 0])),
            Err(Error::InvalidBoardPath(_))
        ));
        let f = perm(&[2, 1, 3]);
        assert!(matches!(
            apply_flip(&p3, &f, &PathFlip::new(vec![1, 2])),
            Err(Error::PebbleImageNotPath(_))
        ));
    }

    #[test]
    fn realize_small_examples() {
        let p4 = Graph::path(4).unwrap();
        assert!(realize_by_flips(&p4, &Permutation::identity(4))
            .unwrap()
            .is_empty());
        let rev = perm(&[4, 3, 2, 1]);
        let seq = realize_by_flips(&p4, &rev).unwrap();
        assert_eq!(
            replay_flips(&p4, &Permutation::identity(4), &seq).unwrap(),
            rev
        );
        let whole = FlipSequence::new(vec![PathFlip::new(vec![0, 1, 2, 3])]);
        assert_eq!(
            replay_flips(&p4, &Permutation::identity(4), &whole).unwrap(),
            rev
        );

        assert_eq!(seq, whole);

        let c5 = Graph::cycle(5).unwrap();
        let seq = realize_by_flips(&c5, &rotation(5, 1)).unwrap();
        assert_eq!(seq.len(), 2);
        assert_eq!(
            replay_flips(&c5, &Permutation::identity(5), &seq).unwrap(),
            rotation(5, 1)
        );
    }

    #[test]
    fn realize_every_automorphism_of_named_graphs() {
        let graphs = vec![
            Graph::cycle(6).unwrap(),
            Graph::star(4).unwrap(),
            Graph::hypercube(3).unwrap(),
            Graph::complete(5).unwrap(),
            Graph::theta_122(),
            Graph::grid(3, 3).unwrap(),
            Graph::complete_multipartite(&[2, 2, 2]).unwrap(),
            Graph::cycle(5).unwrap().subdivide_each_edge(1),
        ];
        for g in graphs {
            let id = Permutation::identity(g.n());
            for sigma in automorphisms(&g).unwrap().elements {
                let seq = realize_by_flips(&g, &sigma).unwrap_or_else(|e| panic!("{sigma}: {e}"));
                assert_eq!(replay_flips(&g, &id, &seq).unwrap(), sigma);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let p3 = Graph::path(3).unwrap();
        assert_eq!(
            realize_by_flips(&p3, &perm(&[2, 1, 3])),
            Err(Error::NotAutomorphism)
        );
        let two = Graph::empty(2);
        assert_eq!(
            realize_by_flips(&two, &perm(&[2, 1])),
            Err(Error::Disconnected)
        );
    }

    #[test]
    fn oracle() {
        let p3 = Graph::path(3).unwrap();
        let (ok, witness) = flip_bfs_oracle(&p3, &perm(&[2, 1, 3]), 1000).unwrap();
        assert!(ok);
        assert_eq!(witness.unwrap().flips, vec![PathFlip::new(vec![0, 1])]);
        let c5 = Graph::cycle(5).unwrap();
        let (ok, witness) = flip_bfs_oracle(&c5, &rotation(5, 2), 10_000).unwrap();
        assert!(ok);
        assert_eq!(
            replay_flips(&c5, &Permutation::identity(5), &witness.unwrap()).unwrap(),
            rotation(5, 2)
        );
        assert!(matches!(
            flip_bfs_oracle(&c5, &rotation(5, 2), 1),
            Err(Error::CapExceeded { .. })
        ));
        let c4 = Graph::cycle(4).unwrap();
        let reach = flip_reachable_set(&c4, SearchOptions::default()).unwrap();
        assert!(automorphisms(&c4)
            .unwrap()
            .elements
            .iter()
            .all(|s| reach.contains(s)));
    }

    #[test]
    fn composition() {
        let c5 = Graph::cycle(5).unwrap();
        let refl = FlipSequence::new(vec![PathFlip::new(vec![0, 1, 2, 3, 4])]);
        let twice = compose_flip_sequences(&c5, &refl, &refl).unwrap();
        assert_eq!(
            replay_flips(&c5, &Permutation::identity(5), &twice).unwrap(),
            Permutation::identity(5)
        );
        let empty = FlipSequence::default();
        assert_eq!(compose_flip_sequences(&c5, &empty, &refl).unwrap(), refl);
        let p3 = Graph::path(3).unwrap();
        let edge = FlipSequence::new(vec![PathFlip::new(vec![0, 1])]);
        assert_eq!(
            compose_flip_sequences(&p3, &edge, &edge),
            Err(Error::NotAutomorphism)
        );
    }
}
