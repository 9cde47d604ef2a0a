//! Exhaustive catalogs of small graphs up to isomorphism.
//!
//! Graphs are grown one vertex at a time; every candidate is reduced to a
//! canonical adjacency bitstring (maximised over all vertex orders that
//! respect an iterated degree refinement) and duplicates are dropped.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::graph::Graph;

/// Largest vertex count the brute-force canonical form supports.
pub const MAX_CANONICAL_N: usize = 16;

/// Canonical form: vertex count plus the maximal upper-triangle bitstring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n: usize,
    pub bits: u128,
}

/// Isomorphism-invariant vertex colours from iterated degree refinement.
fn refined_colors(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut colors: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut classes = usize::MAX;
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = g.neighbors(v).iter().map(|&w| colors[w]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        colors = sigs
            .iter()
            .map(|s| distinct.binary_search(s).unwrap())
            .collect();
        if distinct.len() == classes {
            return colors;
        }
        classes = distinct.len();
    }
}

struct CanonSearch<'a> {
    g: &'a Graph,
    n: usize,
    total: u32,
    slots: Vec<Vec<usize>>, // candidate vertices per position
    order: Vec<usize>,
    used: Vec<bool>,
    best: Option<(u128, Vec<usize>)>,
}

impl CanonSearch<'_> {
    fn pair_bit(&self, i: usize, j: usize) -> u32 {
        // pairs ordered (0,1),(0,2),(1,2),(0,3),... ; first pair is most significant
        let idx = (j * (j - 1) / 2 + i) as u32;
        self.total - 1 - idx
    }

    fn search(&mut self, pos: usize, value: u128) {
        if pos == self.n {
            if self.best.as_ref().is_none_or(|(b, _)| value > *b) {
                self.best = Some((value, self.order.clone()));
            }
            return;
        }
        for ci in 0..self.slots[pos].len() {
            let v = self.slots[pos][ci];
            if self.used[v] {
                continue;
            }
            let mut val = value;
            for i in 0..pos {
                if self.g.has_edge(self.order[i], v) {
                    val |= 1u128 << self.pair_bit(i, pos);
                }
            }
            let known = (pos * (pos + 1) / 2) as u32;
            if let Some((b, _)) = &self.best {
                if known > 0 {
                    let shift = self.total - known;
                    if (val >> shift) < (b >> shift) {
                        continue;
                    }
                }
            }
            self.used[v] = true;
            self.order.push(v);
            self.search(pos + 1, val);
            self.order.pop();
            self.used[v] = false;
        }
    }
}

/// Canonical vertex order (position -> vertex) and its bitstring.
pub fn canonical_order(g: &Graph) -> Option<(CanonicalForm, Vec<usize>)> {
    let n = g.n();
    if n > MAX_CANONICAL_N {
        return None;
    }
    if n <= 1 {
        return Some((CanonicalForm { n, bits: 0 }, (0..n).collect()));
    }
    let colors = refined_colors(g);
    let mut by_color: Vec<usize> = (0..n).collect();
    by_color.sort_by_key(|&v| (colors[v], v));
    let slots: Vec<Vec<usize>> = by_color
        .iter()
        .map(|&v| (0..n).filter(|&w| colors[w] == colors[v]).collect())
        .collect();
    let mut search = CanonSearch {
        g,
        n,
        total: (n * (n - 1) / 2) as u32,
        slots,
        order: Vec::with_capacity(n),
        used: vec![false; n],
        best: None,
    };
    search.search(0, 0);
    let (bits, order) = search.best.expect("at least one ordering");
    Some((CanonicalForm { n, bits }, order))
}

pub fn canonical_form(g: &Graph) -> Option<CanonicalForm> {
    canonical_order(g).map(|(c, _)| c)
}

/// The canonical representative: `g` relabelled by its canonical order.
pub fn canonical_graph(g: &Graph) -> Option<(CanonicalForm, Graph)> {
    let (form, order) = canonical_order(g)?;
    let mut map = vec![0; g.n()];
    for (pos, &v) in order.iter().enumerate() {
        map[v] = pos;
    }
    Some((form, g.relabel(&map)))
}

/// All graphs with `1..=max_n` vertices whose every induced subgraph satisfies
/// `keep` (the predicate must be hereditary), one per isomorphism class,
/// grouped by vertex count.
pub fn hereditary_family<F>(max_n: usize, keep: F) -> Vec<Vec<Graph>>
where
    F: Fn(&Graph) -> bool + Sync,
{
    assert!(
        max_n <= MAX_CANONICAL_N,
        "catalog limited to {MAX_CANONICAL_N} vertices"
    );
    let mut levels: Vec<Vec<Graph>> = Vec::new();
    let single = Graph::empty(1);
    levels.push(if keep(&single) { vec![single] } else { vec![] });
    for n in 2..=max_n {
        let prev = &levels[n - 2];
        let found: Vec<(CanonicalForm, Graph)> = prev
            .par_iter()
            .flat_map_iter(|g| {
                let keep = &keep;
                (0u32..(1u32 << (n - 1))).filter_map(move |mask| {
                    let mut h = Graph::empty(n);
                    for (u, v) in g.edges() {
                        h.insert_edge(u, v);
                    }
                    for u in 0..n - 1 {
                        if mask & (1 << u) != 0 {
                            h.insert_edge(u, n - 1);
                        }
                    }
                    if keep(&h) {
                        canonical_graph(&h)
                    } else {
                        None
                    }
                })
            })
            .collect();
        let mut unique: HashMap<CanonicalForm, Graph> = HashMap::new();
        for (form, h) in found {
            unique.entry(form).or_insert(h);
        }
        let mut level: Vec<(CanonicalForm, Graph)> = unique.into_iter().collect();
        level.sort_by_key(|a| a.0);
        levels.push(level.into_iter().map(|(_, g)| g).collect());
    }
    levels
}

/// Connected graphs on `min_n..=max_n` vertices, one per isomorphism class.
pub fn connected_graphs(min_n: usize, max_n: usize) -> Vec<Graph> {
    connected_in_family(min_n, max_n, |_| true)
}

/// Connected members of a hereditary family (e.g. forests, girth >= 5).
pub fn connected_in_family<F>(min_n: usize, max_n: usize, keep: F) -> Vec<Graph>
where
    F: Fn(&Graph) -> bool + Sync,
{
    hereditary_family(max_n, keep)
        .into_iter()
        .enumerate()
        .filter(|(i, _)| i + 1 >= min_n)
        .flat_map(|(_, level)| level.into_iter().filter(Graph::is_connected))
        .collect()
}

/// Trees on `min_n..=max_n` vertices.
pub fn trees(min_n: usize, max_n: usize) -> Vec<Graph> {
    connected_in_family(min_n, max_n, |g| g.girth().is_none())
}
