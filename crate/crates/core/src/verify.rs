//! Batch checks that run a constructive procedure over a family of graphs and
//! compare it against exhaustive search.

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::connected_graphs;
use crate::classify::{
    bipartite_pebbles_feasible, kms_feasible, multipartite_feasible, split_pebbles,
    wilson_feasible, FeasibilityVerdict,
};
use crate::error::Result;
use crate::flip::{flip_reachable_set, realize_by_flips, replay_flips};
use crate::graph::Graph;
use crate::perm::{automorphisms, Permutation};
use crate::puzzle::PuzzleInstance;
use crate::search::SearchOptions;
use crate::square::{compile_automorphism_to_square_moves, reversal, seq_a};

/// How many failure descriptions a report keeps.
const MAX_FAILURES: usize = 20;

/// 1-based edge list, for failure messages.
pub fn describe(g: &Graph) -> String {
    let edges: Vec<String> = g
        .edges()
        .map(|(u, v)| format!("{}-{}", u + 1, v + 1))
        .collect();
    format!("n={} [{}]", g.n(), edges.join(" "))
}

fn keep_failures(mut failures: Vec<String>) -> (usize, Vec<String>) {
    let total = failures.len();
    failures.truncate(MAX_FAILURES);
    (total, failures)
}

// ------------------------------------------------------------- path squares

#[derive(Clone, Debug, Serialize)]
pub struct SquareSequenceRow {
    pub n: usize,
    pub moves: usize,
    pub replays: bool,
    /// `None` above the search threshold.
    pub bfs_reachable: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SquareSequenceReport {
    pub rows: Vec<SquareSequenceRow>,
    pub failures: usize,
    pub passed: bool,
}

/// Replays `A(n)` for `n <= max_n` and confirms the reversal is reachable by
/// search for `n <= bfs_max_n`.
pub fn square_sequence_suite(
    max_n: usize,
    bfs_max_n: usize,
    opts: SearchOptions,
) -> Result<SquareSequenceReport> {
    let mut rows = Vec::new();
    for n in 1..=max_n {
        let cert = seq_a(n)?;
        let replays = cert.verify().is_ok() && cert.end == reversal(n) && cert.start.is_identity();
        let bfs_reachable = if n <= bfs_max_n {
            let reach = cert.puzzle.reachable_set(&Permutation::identity(n), opts)?;
            Some(reach.contains(&reversal(n)))
        } else {
            None
        };
        rows.push(SquareSequenceRow {
            n,
            moves: cert.moves.len(),
            replays,
            bfs_reachable,
        });
    }
    let failures = rows
        .iter()
        .filter(|r| !r.replays || r.bfs_reachable == Some(false))
        .count();
    Ok(SquareSequenceReport {
        rows,
        failures,
        passed: failures == 0,
    })
}

// -------------------------------------------------------------- path flips

#[derive(Clone, Debug, Serialize)]
pub struct FlipReport {
    pub graphs: usize,
    pub automorphisms: usize,
    pub oracle_checked: usize,
    pub total_flips: usize,
    pub max_flips: usize,
    pub failures: usize,
    pub failure_samples: Vec<String>,
    pub passed: bool,
}

struct FlipTally {
    automorphisms: usize,
    oracle_checked: usize,
    total_flips: usize,
    max_flips: usize,
    failures: Vec<String>,
}

fn flip_check(g: &Graph, oracle: bool, opts: SearchOptions) -> FlipTally {
    let mut t = FlipTally {
        automorphisms: 0,
        oracle_checked: 0,
        total_flips: 0,
        max_flips: 0,
        failures: Vec::new(),
    };
    let aut = match automorphisms(g) {
        Ok(a) => a,
        Err(e) => {
            t.failures.push(format!("{}: {e}", describe(g)));
            return t;
        }
    };
    let id = Permutation::identity(g.n());
    let reach = if oracle {
        Some(flip_reachable_set(g, opts))
    } else {
        None
    };
    for sigma in &aut.elements {
        t.automorphisms += 1;
        match realize_by_flips(g, sigma).and_then(|s| replay_flips(g, &id, &s).map(|end| (s, end)))
        {
            Ok((s, end)) if &end == sigma => {
                t.total_flips += s.len();
                t.max_flips = t.max_flips.max(s.len());
            }
            Ok((_, end)) => t.failures.push(format!(
                "{} sigma={sigma}: replay ends at {end}",
                describe(g)
            )),
            Err(e) => t
                .failures
                .push(format!("{} sigma={sigma}: {e}", describe(g))),
        }
        match &reach {
            Some(Ok(r)) => {
                t.oracle_checked += 1;
                if !r.contains(sigma) {
                    t.failures
                        .push(format!("{} sigma={sigma}: not flip-reachable", describe(g)));
                }
            }
            Some(Err(e)) => t
                .failures
                .push(format!("{}: oracle failed: {e}", describe(g))),
            None => {}
        }
    }
    t
}

/// Realizes every automorphism of every connected graph on `<= max_n`
/// vertices by flips, cross-checking with the flip search on `<= oracle_max_n`.
pub fn flip_suite(max_n: usize, oracle_max_n: usize, opts: SearchOptions) -> FlipReport {
    let graphs = connected_graphs(1, max_n);
    let tallies: Vec<FlipTally> = graphs
        .par_iter()
        .map(|g| flip_check(g, g.n() <= oracle_max_n, opts))
        .collect();
    let mut failures = Vec::new();
    let mut r = FlipReport {
        graphs: graphs.len(),
        automorphisms: 0,
        oracle_checked: 0,
        total_flips: 0,
        max_flips: 0,
        failures: 0,
        failure_samples: Vec::new(),
        passed: false,
    };
    for t in tallies {
        r.automorphisms += t.automorphisms;
        r.oracle_checked += t.oracle_checked;
        r.total_flips += t.total_flips;
        r.max_flips = r.max_flips.max(t.max_flips);
        failures.extend(t.failures);
    }
    (r.failures, r.failure_samples) = keep_failures(failures);
    r.passed = r.failures == 0;
    r
}

// ------------------------------------------------------- square compilation

#[derive(Clone, Debug, Serialize)]
pub struct CompilerReport {
    pub graphs: usize,
    pub automorphisms: usize,
    pub bfs_checked: usize,
    pub total_moves: usize,
    pub failures: usize,
    pub failure_samples: Vec<String>,
    pub passed: bool,
}

fn compile_check(g: &Graph, bfs: bool, opts: SearchOptions) -> (usize, usize, usize, Vec<String>) {
    let (mut auts, mut checked, mut moves, mut failures) = (0, 0, 0, Vec::new());
    let aut = match automorphisms(g) {
        Ok(a) => a,
        Err(e) => return (0, 0, 0, vec![format!("{}: {e}", describe(g))]),
    };
    let reach = if bfs {
        Some(
            PuzzleInstance::symmetric(g.square())
                .reachable_set(&Permutation::identity(g.n()), opts),
        )
    } else {
        None
    };
    for sigma in &aut.elements {
        auts += 1;
        match compile_automorphism_to_square_moves(g, sigma) {
            Ok(cert) => {
                moves += cert.moves.len();
                if let Err(e) = cert.verify() {
                    failures.push(format!("{} sigma={sigma}: {e}", describe(g)));
                } else if &cert.end != sigma {
                    failures.push(format!(
                        "{} sigma={sigma}: certificate ends at {}",
                        describe(g),
                        cert.end
                    ));
                }
            }
            Err(e) => failures.push(format!("{} sigma={sigma}: {e}", describe(g))),
        }
        match &reach {
            Some(Ok(r)) => {
                checked += 1;
                if !r.contains(sigma) {
                    failures.push(format!(
                        "{} sigma={sigma}: not reachable in the square",
                        describe(g)
                    ));
                }
            }
            Some(Err(e)) => failures.push(format!("{}: search failed: {e}", describe(g))),
            None => {}
        }
    }
    (auts, checked, moves, failures)
}

/// Compiles every automorphism of each graph into square moves, confirming
/// the end point by search when the graph has `<= bfs_max_n` vertices.
pub fn compiler_suite(graphs: &[Graph], bfs_max_n: usize, opts: SearchOptions) -> CompilerReport {
    let parts: Vec<_> = graphs
        .par_iter()
        .map(|g| compile_check(g, g.n() <= bfs_max_n, opts))
        .collect();
    let mut r = CompilerReport {
        graphs: graphs.len(),
        automorphisms: 0,
        bfs_checked: 0,
        total_moves: 0,
        failures: 0,
        failure_samples: Vec::new(),
        passed: false,
    };
    let mut failures = Vec::new();
    for (a, c, m, f) in parts {
        r.automorphisms += a;
        r.bfs_checked += c;
        r.total_moves += m;
        failures.extend(f);
    }
    (r.failures, r.failure_samples) = keep_failures(failures);
    r.passed = r.failures == 0;
    r
}

// ------------------------------------------------------ closed-form checks

/// Partitions of `n` into at least three parts, each of size at least two,
/// in non-decreasing order.
pub fn multipartite_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            if cur.len() >= 3 {
                out.push(cur.clone());
            }
            return;
        }
        for p in min..=rest {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 2, &mut Vec::new(), &mut out);
    out
}

/// One closed-form test applied to a board, with the pebble graph it covers.
#[derive(Clone, Debug)]
pub struct PredicateCase {
    pub label: String,
    pub pebbles: Graph,
    pub verdict: FeasibilityVerdict,
}

/// Every closed-form test with every parameter that fits a board of this size.
pub fn predicate_cases(g: &Graph) -> Result<Vec<PredicateCase>> {
    let n = g.n();
    let mut cases = Vec::new();
    if n >= 2 {
        cases.push(PredicateCase {
            label: "star".into(),
            pebbles: Graph::star(n - 1)?,
            verdict: wilson_feasible(g),
        });
    }
    for k in 2..=n {
        cases.push(PredicateCase {
            label: format!("split k={k}"),
            pebbles: split_pebbles(n, k)?,
            verdict: kms_feasible(g, k)?,
        });
    }
    for k in 2..=n / 2 {
        cases.push(PredicateCase {
            label: format!("bipartite k={k}"),
            pebbles: Graph::complete_multipartite(&[k, n - k])?,
            verdict: bipartite_pebbles_feasible(g, k)?,
        });
    }
    for parts in multipartite_partitions(n) {
        cases.push(PredicateCase {
            label: format!("multipartite {parts:?}"),
            pebbles: Graph::complete_multipartite(&parts)?,
            verdict: multipartite_feasible(g, &parts)?,
        });
    }
    Ok(cases)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ExamplesReport {
    pub graphs: usize,
    pub cases: usize,
    pub applicable: usize,
    pub agreements: usize,
    pub infeasible_confirmed: usize,
    pub theta_star_infeasible: bool,
    pub cycle_star_checked: usize,
    pub failures: usize,
    pub failure_samples: Vec<String>,
    pub passed: bool,
}

#[derive(Default)]
struct ExamplesTally {
    cases: usize,
    applicable: usize,
    agreements: usize,
    infeasible_confirmed: usize,
    theta_star_infeasible: bool,
    cycle_star_checked: usize,
    failures: Vec<String>,
}

fn examples_check(g: &Graph, opts: SearchOptions) -> ExamplesTally {
    let mut t = ExamplesTally::default();
    let cases = match predicate_cases(g) {
        Ok(c) => c,
        Err(e) => {
            t.failures.push(format!("{}: {e}", describe(g)));
            return t;
        }
    };
    for case in cases {
        t.cases += 1;
        let Some(predicted) = case.verdict.feasible else {
            continue;
        };
        t.applicable += 1;
        let searched =
            PuzzleInstance::new(g.clone(), case.pebbles).and_then(|p| p.is_feasible(opts));
        match searched {
            Ok(actual) if actual == predicted => {
                t.agreements += 1;
                if !actual {
                    t.infeasible_confirmed += 1;
                }
                if case.label == "star" && g.is_theta_122() && !actual {
                    t.theta_star_infeasible = true;
                }
                if case.label == "star" && g.is_cycle() && g.n() >= 4 && !actual {
                    t.cycle_star_checked += 1;
                }
            }
            Ok(actual) => t.failures.push(format!(
                "{} {}: predicted {predicted} ({:?}), search says {actual}",
                describe(g),
                case.label,
                case.verdict.rule
            )),
            Err(e) => t
                .failures
                .push(format!("{} {}: {e}", describe(g), case.label)),
        }
    }
    t
}

/// Compares every applicable closed-form verdict with exhaustive search on
/// all connected boards with `2..=max_n` vertices.
pub fn examples_suite(max_n: usize, opts: SearchOptions) -> ExamplesReport {
    let graphs = connected_graphs(2, max_n);
    let tallies: Vec<ExamplesTally> = graphs.par_iter().map(|g| examples_check(g, opts)).collect();
    let mut r = ExamplesReport {
        graphs: graphs.len(),
        ..Default::default()
    };
    let mut failures = Vec::new();
    for t in tallies {
        r.cases += t.cases;
        r.applicable += t.applicable;
        r.agreements += t.agreements;
        r.infeasible_confirmed += t.infeasible_confirmed;
        r.theta_star_infeasible |= t.theta_star_infeasible;
        r.cycle_star_checked += t.cycle_star_checked;
        failures.extend(t.failures);
    }
    (r.failures, r.failure_samples) = keep_failures(failures);
    r.passed = r.failures == 0 && r.applicable > 0 && r.agreements == r.applicable;
    r
}
