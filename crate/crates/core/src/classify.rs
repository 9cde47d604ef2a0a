//! Closed-form feasibility tests for star, split, complete bipartite and
//! complete multipartite pebble graphs, plus checkers for the girth-five and
//! product statements about `Peb`.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::perm::{is_automorphism, Permutation};
use crate::puzzle::{peb_group_with_states, PuzzleInstance};
use crate::search::SearchOptions;

/// The clause that decided a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    NotApplicable,
    Cycle,
    Bipartite,
    Theta,
    KIsthmus,
    Default,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibilityVerdict {
    /// `None` when the statement does not cover the instance.
    pub feasible: Option<bool>,
    pub rule: Rule,
    /// Isthmus path, 1-based.
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "one_based_path"
    )]
    pub witness: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn one_based_path<S: serde::Serializer>(
    p: &Option<Vec<usize>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match p {
        Some(p) => s.collect_seq(p.iter().map(|v| v + 1)),
        None => s.serialize_none(),
    }
}

impl FeasibilityVerdict {
    fn not_applicable(note: impl Into<String>) -> Self {
        FeasibilityVerdict {
            feasible: None,
            rule: Rule::NotApplicable,
            witness: None,
            note: Some(note.into()),
        }
    }

    fn infeasible(rule: Rule, note: impl Into<String>) -> Self {
        FeasibilityVerdict {
            feasible: Some(false),
            rule,
            witness: None,
            note: Some(note.into()),
        }
    }

    fn feasible() -> Self {
        FeasibilityVerdict {
            feasible: Some(true),
            rule: Rule::Default,
            witness: None,
            note: None,
        }
    }

    fn isthmus(path: Vec<usize>) -> Self {
        FeasibilityVerdict {
            feasible: Some(false),
            rule: Rule::KIsthmus,
            witness: Some(path),
            note: None,
        }
    }
}

/// Pebble graph `K_k + complement(K_{n-k})`: `k` mutually exchangeable pebbles.
pub fn split_pebbles(n: usize, k: usize) -> Result<Graph> {
    if k > n {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds n = {n}")));
    }
    Ok(Graph::complete(k)?.join(&Graph::empty(n - k)))
}

fn isthmus_or_feasible(g: &Graph, k: usize) -> Result<FeasibilityVerdict> {
    Ok(match g.find_k_isthmus(k)? {
        Some(path) => FeasibilityVerdict::isthmus(path),
        None => FeasibilityVerdict::feasible(),
    })
}

/// `Puz(g, K_{1,n-1})`.
pub fn wilson_feasible(g: &Graph) -> FeasibilityVerdict {
    if !g.is_2connected() {
        return FeasibilityVerdict::not_applicable("board is not 2-connected");
    }
    if g.is_cycle() && g.n() >= 4 {
        return FeasibilityVerdict::infeasible(Rule::Cycle, "pebbles keep their cyclic order");
    }
    if g.is_bipartite() {
        return FeasibilityVerdict::infeasible(
            Rule::Bipartite,
            "both graphs bipartite: only even configurations are reachable",
        );
    }
    if g.is_theta_122() {
        return FeasibilityVerdict::infeasible(Rule::Theta, "exceptional graph");
    }
    FeasibilityVerdict::feasible()
}

/// `Puz(g, K_k + complement(K_{n-k}))`.
pub fn kms_feasible(g: &Graph, k: usize) -> Result<FeasibilityVerdict> {
    if !(2..=g.n()).contains(&k) {
        return Ok(FeasibilityVerdict::not_applicable(format!(
            "k = {k} outside 2..={}",
            g.n()
        )));
    }
    if !g.is_connected() {
        return Ok(FeasibilityVerdict::not_applicable("board is disconnected"));
    }
    if g.is_cycle() {
        return Ok(FeasibilityVerdict::not_applicable("board is a cycle"));
    }
    isthmus_or_feasible(g, k)
}

/// `Puz(g, K_{k,n-k})` with `2 <= k <= n/2`.
pub fn bipartite_pebbles_feasible(g: &Graph, k: usize) -> Result<FeasibilityVerdict> {
    if k < 2 || 2 * k > g.n() {
        return Err(Error::InvalidParameter(format!(
            "k = {k} outside 2..={}",
            g.n() / 2
        )));
    }
    if !g.is_connected() {
        return Ok(FeasibilityVerdict::not_applicable("board is disconnected"));
    }
    if g.is_cycle() {
        return Ok(FeasibilityVerdict::infeasible(
            Rule::Cycle,
            "board is a cycle",
        ));
    }
    if g.is_bipartite() {
        return Ok(FeasibilityVerdict::infeasible(
            Rule::Bipartite,
            "both graphs bipartite: parity is preserved",
        ));
    }
    isthmus_or_feasible(g, k)
}

/// `Puz(g, K_{n_1,...,n_r})` with `r >= 3` parts of size at least two.
pub fn multipartite_feasible(g: &Graph, parts: &[usize]) -> Result<FeasibilityVerdict> {
    let mut sorted = parts.to_vec();
    sorted.sort_unstable();
    if sorted.len() < 3 || sorted[0] < 2 || sorted.iter().sum::<usize>() != g.n() {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 parts of size >= 2 summing to {}, got {parts:?}",
            g.n()
        )));
    }
    if !g.is_connected() {
        return Ok(FeasibilityVerdict::not_applicable("board is disconnected"));
    }
    if g.is_cycle() {
        return Ok(FeasibilityVerdict::infeasible(
            Rule::Cycle,
            "board is a cycle",
        ));
    }
    isthmus_or_feasible(g, g.n() - sorted[sorted.len() - 1])
}

/// Which closed-form test, if any, covers a pebble graph (up to relabelling).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "shape")]
pub enum PebbleShape {
    Star,
    /// `K_k + complement(K_{n-k})`; `K_n` itself is reported with `k = n`.
    Split {
        k: usize,
    },
    CompleteBipartite {
        k: usize,
    },
    Multipartite {
        parts: Vec<usize>,
    },
    Other,
}

/// Recognises complete multipartite pebble graphs by the cliques of the
/// complement.
pub fn pebble_shape(h: &Graph) -> PebbleShape {
    let n = h.n();
    let co = h.complement();
    let comps = co.components();
    let is_clique = |c: &Vec<usize>| c.iter().all(|&v| co.degree(v) == c.len() - 1);
    if n < 2 || !comps.iter().all(is_clique) {
        return PebbleShape::Other;
    }
    let mut parts: Vec<usize> = comps.iter().map(Vec::len).collect();
    parts.sort_unstable();
    let ones = parts.iter().filter(|&&p| p == 1).count();
    let big = parts.len() - ones;
    match (ones, big) {
        (_, 0) => PebbleShape::Split { k: n },
        (1, 1) => PebbleShape::Star,
        (k, 1) if k >= 2 => PebbleShape::Split { k },
        (0, 2) => PebbleShape::CompleteBipartite { k: parts[0] },
        (0, r) if r >= 3 => PebbleShape::Multipartite { parts },
        _ => PebbleShape::Other,
    }
}

/// Dispatches to the closed-form test matching the shape of `pebbles`.
pub fn classify(board: &Graph, pebbles: &Graph) -> Result<FeasibilityVerdict> {
    if board.n() != pebbles.n() {
        return Err(Error::SizeMismatch {
            expected: board.n(),
            actual: pebbles.n(),
        });
    }
    match pebble_shape(pebbles) {
        PebbleShape::Star => Ok(wilson_feasible(board)),
        PebbleShape::Split { k } => kms_feasible(board, k),
        PebbleShape::CompleteBipartite { k } => bipartite_pebbles_feasible(board, k),
        PebbleShape::Multipartite { parts } => multipartite_feasible(board, &parts),
        PebbleShape::Other => Ok(FeasibilityVerdict::not_applicable(
            "pebble graph is not complete multipartite",
        )),
    }
}

// ------------------------------------------------------------ girth five

/// The configurations obtained by swapping the ends of each edge of a matching.
pub fn girth5_reachable_oracle(g: &Graph) -> Result<Vec<Permutation>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.girth().is_some_and(|l| l < 5) {
        return Err(Error::InvalidParameter("girth below 5".into()));
    }
    let mut out: Vec<Permutation> = g
        .matchings()
        .map(|m| {
            let mut p = Permutation::identity(g.n());
            for (u, v) in m.edges {
                p.swap_images(u, v);
            }
            p
        })
        .collect();
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GirthFiveReport {
    pub n: usize,
    pub girth: Option<usize>,
    pub matchings: usize,
    pub bfs_states: usize,
    pub reachable_matches_oracle: bool,
    pub peb_order: usize,
    pub passed: bool,
}

/// BFS class of the identity versus the matching oracle, and `|Peb(g)|`.
pub fn verify_girth_five(g: &Graph, opts: SearchOptions) -> Result<GirthFiveReport> {
    let oracle = girth5_reachable_oracle(g)?;
    let (peb, bfs_states) = peb_group_with_states(g, opts)?;
    let reach =
        PuzzleInstance::symmetric(g.clone()).reachable_set(&Permutation::identity(g.n()), opts)?;
    let reachable_matches_oracle =
        reach.len() == oracle.len() && oracle.iter().all(|p| reach.contains(p));
    Ok(GirthFiveReport {
        n: g.n(),
        girth: g.girth(),
        matchings: oracle.len(),
        bfs_states,
        reachable_matches_oracle,
        peb_order: peb.order,
        passed: reachable_matches_oracle && peb.order == 1,
    })
}

// -------------------------------------------------------------- products

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductReport {
    pub n1: usize,
    pub n2: usize,
    pub peb1_order: usize,
    pub peb2_order: usize,
    pub peb_product_order: usize,
    pub bfs_states: usize,
    pub sets_equal: bool,
    /// Reached configurations never put two pebbles sharing a copy of one
    /// factor onto boards sharing a copy of the other.
    pub copies_stay_transversal: bool,
    /// Reached automorphisms map each copy of a factor onto a copy of the same factor.
    pub automorphisms_preserve_copies: bool,
    pub passed: bool,
}

/// Compares `Peb(g1 x g2)` with `Peb(g1) x Peb(g2)` by BFS.
pub fn verify_product(g1: &Graph, g2: &Graph, opts: SearchOptions) -> Result<ProductReport> {
    let (prod, coords) = g1.cartesian_product(g2);
    let n = prod.n();
    let (peb1, _) = peb_group_with_states(g1, opts)?;
    let (peb2, _) = peb_group_with_states(g2, opts)?;
    let reach =
        PuzzleInstance::symmetric(prod.clone()).reachable_set(&Permutation::identity(n), opts)?;

    let same_g1_copy = |u: usize, v: usize| coords.coords(u).1 == coords.coords(v).1;
    let same_g2_copy = |u: usize, v: usize| coords.coords(u).0 == coords.coords(v).0;

    let mut copies_stay_transversal = true;
    let mut automorphisms_preserve_copies = true;
    let mut reached_auts = Vec::new();
    for f in reach.iter() {
        let boards = f.inverse();
        for x in 0..n {
            for y in x + 1..n {
                let (bx, by) = (boards.apply(x), boards.apply(y));
                if (same_g1_copy(bx, by) && same_g2_copy(x, y))
                    || (same_g2_copy(bx, by) && same_g1_copy(x, y))
                {
                    copies_stay_transversal = false;
                }
            }
        }
        if is_automorphism(&prod, &f)? {
            for x in 0..n {
                for y in x + 1..n {
                    let (bx, by) = (boards.apply(x), boards.apply(y));
                    if (same_g1_copy(bx, by) && !same_g1_copy(x, y))
                        || (same_g2_copy(bx, by) && !same_g2_copy(x, y))
                    {
                        automorphisms_preserve_copies = false;
                    }
                }
            }
            reached_auts.push(f);
        }
    }

    let expected: HashSet<Permutation> = peb1
        .elements
        .iter()
        .flat_map(|s| {
            peb2.elements.iter().map(move |t| {
                Permutation::from_vec_unchecked(
                    (0..n)
                        .map(|v| {
                            let (a, b) = coords.coords(v);
                            coords.index(s.apply(a), t.apply(b))
                        })
                        .collect(),
                )
            })
        })
        .collect();
    let found: HashSet<Permutation> = reached_auts.iter().cloned().collect();
    let sets_equal = expected == found;
    Ok(ProductReport {
        n1: g1.n(),
        n2: g2.n(),
        peb1_order: peb1.order,
        peb2_order: peb2.order,
        peb_product_order: found.len(),
        bfs_states: reach.len(),
        sets_equal,
        copies_stay_transversal,
        automorphisms_preserve_copies,
        passed: sets_equal && copies_stay_transversal && automorphisms_preserve_copies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_feasible(board: &Graph, pebbles: Graph) -> bool {
        PuzzleInstance::new(board.clone(), pebbles)
            .unwrap()
            .is_feasible(SearchOptions::default())
            .unwrap()
    }

    #[test]
    fn wilson_examples() {
        assert_eq!(
            wilson_feasible(&Graph::complete(4).unwrap()).feasible,
            Some(true)
        );
        let theta = wilson_feasible(&Graph::theta_122());
        assert_eq!((theta.feasible, theta.rule), (Some(false), Rule::Theta));
        let c7 = wilson_feasible(&Graph::cycle(7).unwrap());
        assert_eq!((c7.feasible, c7.rule), (Some(false), Rule::Cycle));
        assert_eq!(
            wilson_feasible(&Graph::path(4).unwrap()).rule,
            Rule::NotApplicable
        );
        // the triangle is a cycle, but with a single free pebble it is feasible
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(wilson_feasible(&k3).feasible, Some(true));
        assert!(is_feasible(&k3, Graph::star(2).unwrap()));
        let c6 = wilson_feasible(&Graph::cycle(6).unwrap());
        assert_eq!(c6.rule, Rule::Cycle);
    }

    #[test]
    fn kms_examples() {
        let p4 = kms_feasible(&Graph::path(4).unwrap(), 2).unwrap();
        assert_eq!(p4.feasible, Some(false));
        assert_eq!(p4.witness, Some(vec![1, 2]));
        let mut diamond = Graph::complete(4).unwrap();
        diamond.remove_edge(0, 1);
        assert_eq!(kms_feasible(&diamond, 2).unwrap().feasible, Some(true));
        for k in 2..=5 {
            assert_eq!(
                kms_feasible(&Graph::cycle(5).unwrap(), k).unwrap().rule,
                Rule::NotApplicable
            );
        }
        assert!(!is_feasible(
            &Graph::path(4).unwrap(),
            split_pebbles(4, 2).unwrap()
        ));
        assert!(is_feasible(&diamond, split_pebbles(4, 2).unwrap()));
    }

    #[test]
    fn bipartite_pebble_examples() {
        let c6 = bipartite_pebbles_feasible(&Graph::cycle(6).unwrap(), 2).unwrap();
        assert_eq!(c6.feasible, Some(false));
        assert_eq!(
            bipartite_pebbles_feasible(&Graph::complete(4).unwrap(), 2)
                .unwrap()
                .feasible,
            Some(true)
        );
        assert_eq!(
            bipartite_pebbles_feasible(&Graph::path(5).unwrap(), 2)
                .unwrap()
                .feasible,
            Some(false)
        );
        assert!(bipartite_pebbles_feasible(&Graph::path(5).unwrap(), 3).is_err());
    }

    #[test]
    fn multipartite_examples() {
        let k6 = multipartite_feasible(&Graph::complete(6).unwrap(), &[2, 2, 2]).unwrap();
        assert_eq!(k6.feasible, Some(true));
        let c6 = multipartite_feasible(&Graph::cycle(6).unwrap(), &[2, 2, 2]).unwrap();
        assert_eq!((c6.feasible, c6.rule), (Some(false), Rule::Cycle));
        // two triangles joined by a path on four vertices; n - n_r = 4
        let g = Graph::from_edges(
            8,
            &[
                (0, 1),
                (1, 2),
                (0, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 6),
                (6, 7),
                (5, 7),
            ],
        )
        .unwrap();
        let v = multipartite_feasible(&g, &[2, 2, 4]).unwrap();
        assert_eq!((v.feasible, v.rule), (Some(false), Rule::KIsthmus));
        assert_eq!(v.witness, Some(vec![2, 3, 4, 5]));
        assert!(multipartite_feasible(&g, &[2, 3, 3])
            .unwrap()
            .feasible
            .unwrap());
        assert!(multipartite_feasible(&g, &[3, 5]).is_err());
        assert!(multipartite_feasible(&g, &[1, 2, 5]).is_err());
    }

    #[test]
    fn matching_oracle() {
        assert_eq!(
            girth5_reachable_oracle(&Graph::path(3).unwrap())
                .unwrap()
                .len(),
            3
        );
        assert_eq!(
            girth5_reachable_oracle(&Graph::cycle(5).unwrap())
                .unwrap()
                .len(),
            11
        );
        assert!(girth5_reachable_oracle(&Graph::complete(3).unwrap()).is_err());
    }

    #[test]
    fn prop2_reports() {
        let c5 = verify_girth_five(&Graph::cycle(5).unwrap(), SearchOptions::default()).unwrap();
        assert!(c5.passed);
        assert_eq!((c5.bfs_states, c5.peb_order), (11, 1));
        let c7 = verify_girth_five(&Graph::cycle(7).unwrap(), SearchOptions::default()).unwrap();
        assert!(c7.passed);
        assert_eq!(c7.bfs_states, 29);
    }

    #[test]
    fn product_reports() {
        let p2 = Graph::path(2).unwrap();
        let r = verify_product(&p2, &p2, SearchOptions::default()).unwrap();
        assert!(r.passed);
        assert_eq!(r.peb_product_order, 4);
        let r = verify_product(&p2, &Graph::path(3).unwrap(), SearchOptions::default()).unwrap();
        assert!(r.passed);
        assert_eq!((r.peb2_order, r.peb_product_order), (1, 2));
    }

    #[test]
    fn pebble_shapes_are_recognised_up_to_relabelling() {
        let star = Graph::star(4).unwrap().relabel(&[3, 0, 1, 2, 4]);
        assert_eq!(pebble_shape(&star), PebbleShape::Star);
        assert_eq!(
            pebble_shape(&split_pebbles(6, 3).unwrap()),
            PebbleShape::Split { k: 3 }
        );
        assert_eq!(
            pebble_shape(&Graph::complete(4).unwrap()),
            PebbleShape::Split { k: 4 }
        );
        assert_eq!(
            pebble_shape(&Graph::cycle(4).unwrap()),
            PebbleShape::CompleteBipartite { k: 2 }
        );
        let k223 = Graph::complete_multipartite(&[3, 2, 2]).unwrap();
        assert_eq!(
            pebble_shape(&k223),
            PebbleShape::Multipartite {
                parts: vec![2, 2, 3]
            }
        );
        assert_eq!(
            pebble_shape(&Graph::complete_multipartite(&[1, 2, 2]).unwrap()),
            PebbleShape::Other
        );
        assert_eq!(pebble_shape(&Graph::path(4).unwrap()), PebbleShape::Other);

        let c6 = Graph::cycle(6).unwrap();
        assert_eq!(
            classify(&c6, &Graph::star(5).unwrap()).unwrap().rule,
            Rule::Cycle
        );
        assert!(classify(&c6, &Graph::star(4).unwrap()).is_err());
    }
}
