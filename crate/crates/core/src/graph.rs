//! Simple undirected graphs and the structural facts the puzzle results rest on.
//!
//! Vertices are dense indices `0..n`. Every text boundary (files, reports,
//! error messages) shows them 1-based.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// A finite simple undirected graph stored as sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

/// Maps product vertices to coordinate pairs for `G1 x G2`.
///
/// Vertex `(a, b)` of the product has index `a * n2 + b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductCoords {
    pub n1: usize,
    pub n2: usize,
}

impl ProductCoords {
    pub fn index(&self, a: usize, b: usize) -> usize {
        a * self.n2 + b
    }

    pub fn coords(&self, v: usize) -> (usize, usize) {
        (v / self.n2, v % self.n2)
    }
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph, rejecting loops, duplicates and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w + 1, n });
                }
            }
            if u == v {
                return Err(Error::InvalidParameter(format!(
                    "self-loop at vertex {}",
                    u + 1
                )));
            }
            if g.has_edge(u, v) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate edge {} {}",
                    u.min(v) + 1,
                    u.max(v) + 1
                )));
            }
            g.insert_edge(u, v);
        }
        Ok(g)
    }

    /// Insert an edge if absent. Callers guarantee `u != v` and range.
    pub(crate) fn insert_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        if let Err(pos) = self.adj[u].binary_search(&v) {
            self.adj[u].insert(pos, v);
            let pos = self.adj[v].binary_search(&u).unwrap_err();
            self.adj[v].insert(pos, u);
        }
    }

    pub(crate) fn remove_edge(&mut self, u: usize, v: usize) {
        if let Ok(pos) = self.adj[u].binary_search(&v) {
            self.adj[u].remove(pos);
            let pos = self.adj[v].binary_search(&u).unwrap();
            self.adj[v].remove(pos);
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        d.sort_unstable();
        d
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v + 1,
                n: self.n(),
            })
        }
    }

    // ---------------------------------------------------------------- metric

    /// BFS hop counts from `source`; `None` marks unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        self.distances_from_set(std::iter::once(source))
    }

    /// Multi-source BFS hop counts.
    pub fn distances_from_set(
        &self,
        sources: impl IntoIterator<Item = usize>,
    ) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        let mut queue = VecDeque::new();
        for s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Shortest-path length, `None` when `u` and `v` are disconnected.
    pub fn distance(&self, u: usize, v: usize) -> Result<Option<usize>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.distances_from(u)[v])
    }

    /// All-pairs distance table (BFS from every vertex).
    pub fn distance_matrix(&self) -> Vec<Vec<Option<usize>>> {
        (0..self.n()).map(|v| self.distances_from(v)).collect()
    }

    /// A shortest path from `from` to `to`, choosing the smallest-labelled
    /// predecessor at every step so that the result is deterministic.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        self.shortest_path_to_set(from, &[to])
    }

    /// A shortest path from `from` to the nearest vertex of `targets`, with the
    /// same smallest-predecessor rule walking back from `from`.
    pub fn shortest_path_to_set(&self, from: usize, targets: &[usize]) -> Option<Vec<usize>> {
        let dist = self.distances_from_set(targets.iter().copied());
        let mut d = dist[from]?;
        let mut path = vec![from];
        let mut cur = from;
        while d > 0 {
            cur = *self.adj[cur].iter().find(|&&w| dist[w] == Some(d - 1))?;
            path.push(cur);
            d -= 1;
        }
        Some(path)
    }

    /// Length of the shortest cycle, `None` for forests.
    ///
    /// Runs a BFS from every vertex and closes a cycle at each non-tree edge.
    pub fn girth(&self) -> Option<usize> {
        let n = self.n();
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for root in 0..n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[root] = 0;
            parent[root] = usize::MAX;
            queue.clear();
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                if let Some(b) = best {
                    if 2 * dist[u] + 1 >= b {
                        break;
                    }
                }
                for &w in &self.adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    // ---------------------------------------------------------- constructions

    /// `G^2`: same vertices, edges between vertices at distance 1 or 2.
    pub fn square(&self) -> Graph {
        let mut sq = self.clone();
        for v in 0..self.n() {
            for &a in &self.adj[v] {
                for &b in &self.adj[v] {
                    if a < b {
                        sq.insert_edge(a, b);
                    }
                }
            }
        }
        sq
    }

    /// Cartesian product with its coordinate map.
    pub fn cartesian_product(&self, other: &Graph) -> (Graph, ProductCoords) {
        let coords = ProductCoords {
            n1: self.n(),
            n2: other.n(),
        };
        let mut g = Graph::empty(self.n() * other.n());
        for a in 0..self.n() {
            for b in 0..other.n() {
                let v = coords.index(a, b);
                for &a2 in &self.adj[a] {
                    g.insert_edge(v, coords.index(a2, b));
                }
                for &b2 in &other.adj[b] {
                    g.insert_edge(v, coords.index(a, b2));
                }
            }
        }
        (g, coords)
    }

    pub fn path(n: usize) -> Result<Graph> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "path needs at least one vertex".into(),
            ));
        }
        let mut g = Graph::empty(n);
        for i in 1..n {
            g.insert_edge(i - 1, i);
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Result<Graph> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!(
                "cycle needs n >= 3, got {n}"
            )));
        }
        let mut g = Graph::path(n)?;
        g.insert_edge(n - 1, 0);
        Ok(g)
    }

    /// `K_{1,leaves}` with the centre at vertex 0.
    pub fn star(leaves: usize) -> Result<Graph> {
        Graph::complete_multipartite(&[1, leaves])
    }

    pub fn complete(n: usize) -> Result<Graph> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "complete graph needs n >= 1".into(),
            ));
        }
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert_edge(u, v);
            }
        }
        Ok(g)
    }

    /// `K_{n_1,...,n_r}` with parts laid out consecutively.
    pub fn complete_multipartite(parts: &[usize]) -> Result<Graph> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::InvalidParameter(format!("bad partition {parts:?}")));
        }
        let n: usize = parts.iter().sum();
        let mut part_of = Vec::with_capacity(n);
        for (i, &p) in parts.iter().enumerate() {
            part_of.extend(std::iter::repeat_n(i, p));
        }
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if part_of[u] != part_of[v] {
                    g.insert_edge(u, v);
                }
            }
        }
        Ok(g)
    }

    /// `Q_d`; vertex bits are coordinates.
    pub fn hypercube(d: usize) -> Result<Graph> {
        if d == 0 || d > 20 {
            return Err(Error::InvalidParameter(format!("hypercube dimension {d}")));
        }
        let n = 1usize << d;
        let mut g = Graph::empty(n);
        for v in 0..n {
            for b in 0..d {
                let w = v ^ (1 << b);
                if v < w {
                    g.insert_edge(v, w);
                }
            }
        }
        Ok(g)
    }

    /// `P_a x P_b`.
    pub fn grid(a: usize, b: usize) -> Result<Graph> {
        Ok(Graph::path(a)?.cartesian_product(&Graph::path(b)?).0)
    }

    /// The 7-vertex theta graph: a 6-cycle `v1..v6` plus the path `v1 v7 v4`.
    pub fn theta_122() -> Graph {
        Graph::from_edges(
            7,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 0),
                (0, 6),
                (3, 6),
            ],
        )
        .expect("fixed edge list")
    }

    /// `G + H`; vertices of `self` come first.
    pub fn join(&self, other: &Graph) -> Graph {
        let off = self.n();
        let mut g = Graph::empty(off + other.n());
        for (u, v) in self.edges() {
            g.insert_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.insert_edge(off + u, off + v);
        }
        for u in 0..off {
            for v in 0..other.n() {
                g.insert_edge(u, off + v);
            }
        }
        g
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if !self.has_edge(u, v) {
                    g.insert_edge(u, v);
                }
            }
        }
        g
    }

    /// Replaces every edge by a path with `k` new interior vertices, appended
    /// in edge order.
    pub fn subdivide_each_edge(&self, k: usize) -> Graph {
        let edges: Vec<_> = self.edges().collect();
        let mut g = Graph::empty(self.n() + k * edges.len());
        let mut next = self.n();
        for (u, v) in edges {
            let mut prev = u;
            for _ in 0..k {
                g.insert_edge(prev, next);
                prev = next;
                next += 1;
            }
            g.insert_edge(prev, v);
        }
        g
    }

    /// Replaces every edge `uv` by the tree `T_uv`: fresh `x1, x2, x3` with
    /// edges `u x1`, `v x1`, `x1 x2`, `x2 x3`.
    pub fn replace_edges_with_t(&self) -> Graph {
        let edges: Vec<_> = self.edges().collect();
        let mut g = Graph::empty(self.n() + 3 * edges.len());
        for (i, (u, v)) in edges.into_iter().enumerate() {
            let x1 = self.n() + 3 * i;
            g.insert_edge(u, x1);
            g.insert_edge(v, x1);
            g.insert_edge(x1, x1 + 1);
            g.insert_edge(x1 + 1, x1 + 2);
        }
        g
    }

    /// Induced subgraph on `vertices` (relabelled in the given order).
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Graph::empty(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                if index[w] != usize::MAX && index[w] > i {
                    g.insert_edge(i, index[w]);
                }
            }
        }
        g
    }

    /// Applies a vertex relabelling `v -> map[v]`.
    pub fn relabel(&self, map: &[usize]) -> Graph {
        let mut g = Graph::empty(self.n());
        for (u, v) in self.edges() {
            g.insert_edge(map[u], map[v]);
        }
        g
    }

    // ------------------------------------------------------------- structure

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.distances_from(0).iter().all(Option::is_some)
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// A proper 2-colouring if one exists.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut color: Vec<Option<bool>> = vec![None; self.n()];
        for s in 0..self.n() {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for &w in &self.adj[u] {
                    match color[w] {
                        None => {
                            color[w] = Some(!cu);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(Option::unwrap).collect())
    }

    pub fn is_cycle(&self) -> bool {
        self.n() >= 3 && self.adj.iter().all(|a| a.len() == 2) && self.is_connected()
    }

    pub fn is_tree(&self) -> bool {
        self.n() >= 1 && self.edge_count() + 1 == self.n() && self.is_connected()
    }

    /// Connected, at least three vertices, and no cut vertex.
    pub fn is_2connected(&self) -> bool {
        self.n() >= 3 && self.is_connected() && self.cut_vertices().iter().all(|c| !c)
    }

    pub fn is_theta_122(&self) -> bool {
        let theta = Graph::theta_122();
        self.n() == 7
            && self.edge_count() == 8
            && self.degree_sequence() == theta.degree_sequence()
            && crate::catalog::canonical_form(self) == crate::catalog::canonical_form(&theta)
    }

    /// Cut-vertex flags and bridge list, from one lowpoint DFS per component.
    fn lowpoint_scan(&self) -> (Vec<bool>, Vec<(usize, usize)>) {
        let n = self.n();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut cut = vec![false; n];
        let mut bridges = Vec::new();
        let mut time = 0;
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = time;
            low[root] = time;
            time += 1;
            let mut root_children = 0;
            // (vertex, parent, next neighbour position)
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            while let Some(&mut (u, parent, ref mut pos)) = stack.last_mut() {
                if *pos < self.adj[u].len() {
                    let w = self.adj[u][*pos];
                    *pos += 1;
                    if disc[w] == usize::MAX {
                        disc[w] = time;
                        low[w] = time;
                        time += 1;
                        if u == root {
                            root_children += 1;
                        }
                        stack.push((w, u, 0));
                    } else if w != parent {
                        low[u] = low[u].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if parent != usize::MAX {
                        low[parent] = low[parent].min(low[u]);
                        if low[u] > disc[parent] {
                            bridges.push((parent.min(u), parent.max(u)));
                        }
                        if parent != root && low[u] >= disc[parent] {
                            cut[parent] = true;
                        }
                    }
                }
            }
            if root_children >= 2 {
                cut[root] = true;
            }
        }
        bridges.sort_unstable();
        (cut, bridges)
    }

    pub fn cut_vertices(&self) -> Vec<bool> {
        self.lowpoint_scan().0
    }

    pub fn bridges(&self) -> Vec<(usize, usize)> {
        self.lowpoint_scan().1
    }

    /// Finds a `k`-isthmus: a path `v_1 ... v_k` whose edges are all bridges,
    /// whose vertices are all cut vertices, and whose interior vertices have
    /// degree 2. Returns the first witness in vertex order.
    pub fn find_k_isthmus(&self, k: usize) -> Result<Option<Vec<usize>>> {
        if k == 0 {
            return Err(Error::InvalidParameter(
                "isthmus length k must be >= 1".into(),
            ));
        }
        let (cut, bridges) = self.lowpoint_scan();
        let is_bridge = |u: usize, v: usize| bridges.binary_search(&(u.min(v), u.max(v))).is_ok();
        for start in 0..self.n() {
            if !cut[start] {
                continue;
            }
            let mut path = vec![start];
            if self.extend_isthmus(&mut path, k, &cut, &is_bridge) {
                return Ok(Some(path));
            }
        }
        Ok(None)
    }

    fn extend_isthmus(
        &self,
        path: &mut Vec<usize>,
        k: usize,
        cut: &[bool],
        is_bridge: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        if path.len() == k {
            return true;
        }
        let last = *path.last().unwrap();
        // `last` becomes interior once extended.
        if path.len() >= 2 && self.degree(last) != 2 {
            return false;
        }
        let prev = if path.len() >= 2 {
            Some(path[path.len() - 2])
        } else {
            None
        };
        for &w in &self.adj[last] {
            if Some(w) == prev || !cut[w] || !is_bridge(last, w) {
                continue;
            }
            path.push(w);
            if self.extend_isthmus(path, k, cut, is_bridge) {
                return true;
            }
            path.pop();
        }
        false
    }

    pub fn has_k_isthmus(&self, k: usize) -> Result<bool> {
        Ok(self.find_k_isthmus(k)?.is_some())
    }

    /// True when `seq` lists distinct vertices with consecutive ones adjacent.
    pub fn is_path(&self, seq: &[usize]) -> bool {
        if seq.is_empty() || seq.iter().any(|&v| v >= self.n()) {
            return false;
        }
        let mut seen = vec![false; self.n()];
        for &v in seq {
            if std::mem::replace(&mut seen[v], true) {
                return false;
            }
        }
        seq.windows(2).all(|w| self.has_edge(w[0], w[1]))
    }

    /// Streams every matching exactly once, starting with the empty one.
    pub fn matchings(&self) -> Matchings<'_> {
        Matchings::new(self)
    }
}

/// A set of pairwise disjoint edges, each stored as `(u, v)` with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    pub edges: Vec<(usize, usize)>,
}

impl Matching {
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let mut used = vec![false; g.n()];
        self.edges.iter().all(|&(u, v)| {
            g.has_edge(u, v)
                && !std::mem::replace(&mut used[u], true)
                && !std::mem::replace(&mut used[v], true)
        })
    }
}

/// Depth-first enumeration of matchings as increasing edge-index lists.
pub struct Matchings<'a> {
    edges: Vec<(usize, usize)>,
    used: Vec<bool>,
    chosen: Vec<usize>,
    cursor: Vec<usize>,
    started: bool,
    _graph: std::marker::PhantomData<&'a Graph>,
}

impl<'a> Matchings<'a> {
    fn new(g: &'a Graph) -> Self {
        Matchings {
            edges: g.edges().collect(),
            used: vec![false; g.n()],
            chosen: Vec::new(),
            cursor: vec![0],
            started: false,
            _graph: std::marker::PhantomData,
        }
    }

    fn current(&self) -> Matching {
        Matching {
            edges: self.chosen.iter().map(|&i| self.edges[i]).collect(),
        }
    }
}

impl Iterator for Matchings<'_> {
    type Item = Matching;

    fn next(&mut self) -> Option<Matching> {
        if !self.started {
            self.started = true;
            return Some(self.current());
        }
        loop {
            let depth = self.chosen.len();
            let start = self.cursor[depth];
            let found = (start..self.edges.len()).find(|&i| {
                let (u, v) = self.edges[i];
                !self.used[u] && !self.used[v]
            });
            match found {
                Some(i) => {
                    self.cursor[depth] = i + 1;
                    let (u, v) = self.edges[i];
                    self.used[u] = true;
                    self.used[v] = true;
                    self.chosen.push(i);
                    self.cursor.push(i + 1);
                    return Some(self.current());
                }
                None => {
                    if depth == 0 {
                        return None;
                    }
                    self.cursor.pop();
                    let i = self.chosen.pop().unwrap();
                    let (u, v) = self.edges[i];
                    self.used[u] = false;
                    self.used[v] = false;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_set(g: &Graph) -> Vec<(usize, usize)> {
        g.edges().collect()
    }

    /// Girth by deleting each edge and measuring the detour.
    fn girth_by_edge_deletion(g: &Graph) -> Option<usize> {
        let mut best = None;
        for (u, v) in g.edges().collect::<Vec<_>>() {
            let mut h = g.clone();
            h.remove_edge(u, v);
            if let Some(d) = h.distances_from(u)[v] {
                let len = d + 1;
                best = Some(best.map_or(len, |b: usize| b.min(len)));
            }
        }
        best
    }

    #[test]
    fn distances_on_small_graphs() {
        let p5 = Graph::path(5).unwrap();
        assert_eq!(p5.distance(0, 4).unwrap(), Some(4));
        assert_eq!(p5.distance(2, 2).unwrap(), Some(0));
        assert_eq!(Graph::theta_122().distance(0, 3).unwrap(), Some(2));
        assert_eq!(Graph::empty(2).distance(0, 1).unwrap(), None);
        assert!(matches!(
            p5.distance(0, 5),
            Err(Error::VertexOutOfRange { vertex: 6, n: 5 })
        ));
    }

    #[test]
    fn girth_examples() {
        assert_eq!(Graph::cycle(5).unwrap().girth(), Some(5));
        assert_eq!(Graph::path(4).unwrap().girth(), None);
        assert_eq!(Graph::theta_122().girth(), Some(5));
        assert_eq!(Graph::complete(4).unwrap().girth(), Some(3));
        assert_eq!(Graph::hypercube(3).unwrap().girth(), Some(4));
    }

    #[test]
    fn girth_matches_edge_deletion_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..10);
            let p = rng.gen_range(0.1..0.6);
            let mut g = Graph::empty(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        g.insert_edge(u, v);
                    }
                }
            }
            assert_eq!(g.girth(), girth_by_edge_deletion(&g), "{g:?}");
        }
    }

    #[test]
    fn square_examples() {
        let sq = Graph::path(5).unwrap().square();
        assert_eq!(
            edge_set(&sq),
            vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (2, 4), (3, 4)]
        );
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(k3.square(), k3);
        assert_eq!(
            Graph::star(3).unwrap().square(),
            Graph::complete(4).unwrap()
        );
    }

    #[test]
    fn products() {
        let p2 = Graph::path(2).unwrap();
        let (c4, _) = p2.cartesian_product(&p2);
        assert!(c4.is_cycle() && c4.n() == 4);
        let (q3, _) = c4.cartesian_product(&p2);
        assert_eq!(q3.edge_count(), 12);
        assert_eq!(q3.girth(), Some(4));
        let (grid, coords) = p2.cartesian_product(&Graph::path(3).unwrap());
        assert_eq!(grid.edge_count(), 7);
        assert_eq!(coords.coords(coords.index(1, 2)), (1, 2));
        assert_eq!(Graph::grid(2, 3).unwrap(), grid);
    }

    #[test]
    fn constructors() {
        assert_eq!(
            Graph::complete_multipartite(&[1, 4]).unwrap(),
            Graph::star(4).unwrap()
        );
        assert!(Graph::cycle(2).is_err());
        assert!(Graph::path(0).is_err());
        assert!(Graph::complete_multipartite(&[2, 0]).is_err());

        let t = Graph::path(2).unwrap().replace_edges_with_t();
        assert_eq!(t.n(), 5);
        assert_eq!(edge_set(&t), vec![(0, 2), (1, 2), (2, 3), (3, 4)]);
        assert!(t.is_tree());

        // K_2 + complement(K_3)
        let g = Graph::complete(2)
            .unwrap()
            .join(&Graph::complete(3).unwrap().complement());
        assert_eq!(g.n(), 5);
        assert_eq!(g.edge_count(), 1 + 6);
        assert_eq!(g.degree_sequence(), vec![2, 2, 2, 4, 4]);

        let sub = Graph::cycle(3).unwrap().subdivide_each_edge(2);
        assert!(sub.is_cycle() && sub.n() == 9);
        assert_eq!(Graph::hypercube(3).unwrap().edge_count(), 12);
    }

    #[test]
    fn isthmus_examples() {
        let p4 = Graph::path(4).unwrap();
        assert_eq!(p4.find_k_isthmus(2).unwrap(), Some(vec![1, 2]));
        assert!(!p4.has_k_isthmus(3).unwrap());
        assert!(!Graph::complete(4).unwrap().has_k_isthmus(1).unwrap());
        assert_eq!(
            Graph::star(3).unwrap().find_k_isthmus(1).unwrap(),
            Some(vec![0])
        );
        assert!(p4.find_k_isthmus(0).is_err());
        assert_eq!(
            Graph::path(5).unwrap().find_k_isthmus(3).unwrap(),
            Some(vec![1, 2, 3])
        );
        // interior vertices must have degree 2
        let branched = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)]).unwrap();
        assert!(!branched.has_k_isthmus(3).unwrap());
        assert!(branched.has_k_isthmus(2).unwrap());
    }

    #[test]
    fn matching_counts() {
        assert_eq!(Graph::path(3).unwrap().matchings().count(), 3);
        assert_eq!(Graph::complete(3).unwrap().matchings().count(), 4);
        assert_eq!(
            Graph::empty(4).matchings().collect::<Vec<_>>(),
            vec![Matching { edges: vec![] }]
        );
        assert_eq!(Graph::cycle(5).unwrap().matchings().count(), 11);
        let k4 = Graph::complete(4).unwrap();
        let all: Vec<_> = k4.matchings().collect();
        assert_eq!(all.len(), 10);
        assert!(all.iter().all(|m| m.is_valid_for(&k4)));
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), all.len());
    }

    #[test]
    fn predicates() {
        let c6 = Graph::cycle(6).unwrap();
        assert!(c6.is_cycle() && c6.is_bipartite() && c6.is_2connected());
        assert!(!Graph::cycle(5).unwrap().is_bipartite());
        assert!(Graph::theta_122().is_theta_122());
        assert!(!Graph::cycle(7).unwrap().is_theta_122());
        assert!(!Graph::path(2).unwrap().is_2connected());
        assert!(Graph::path(6).unwrap().is_tree());
        let relabelled = Graph::theta_122().relabel(&[3, 0, 6, 2, 5, 1, 4]);
        assert!(relabelled.is_theta_122());
    }

    #[test]
    fn bridges_and_cut_vertices() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)])
            .unwrap();
        assert_eq!(g.bridges(), vec![(2, 3)]);
        assert_eq!(
            g.cut_vertices(),
            vec![false, false, true, true, false, false]
        );
    }

    #[test]
    fn shortest_path_prefers_small_predecessors() {
        let c6 = Graph::cycle(6).unwrap();
        // two shortest routes 0->3; walking back from 0 picks neighbour 1
        assert_eq!(c6.shortest_path(0, 3), Some(vec![0, 1, 2, 3]));
        assert_eq!(c6.shortest_path(3, 0), Some(vec![3, 2, 1, 0]));
        assert_eq!(Graph::empty(2).shortest_path(0, 1), None);
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(Graph::from_edges(2, &[(0, 0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 2)]).is_err());
    }
}
