//! Explicit move sequences reversing the pebbles of `Puz(P_n^2)`, and the
//! compiler from flip sequences to moves on `Puz(G^2)`.
//!
//! Three families are built together by recursion on `n`:
//!
//! * `A(n)` on `Puz(P_n^2)`, from the identity to the reversal;
//! * `B(n)` on `Puz(D_n, P_n^2)`, same endpoints;
//! * `C(n)` on `Puz(P_n^2, D_n)`, the transpose of `B(n)`;
//!
//! where `D_n` is `P_{n+1}^2` with its second-to-last vertex deleted and the
//! last vertex renamed, i.e. `P_n^2` without the chord between the last vertex
//! and the one two steps before it. Since `D_n` is a spanning subgraph of
//! `P_n^2`, every `B(n)` sequence is also an `A(n)` sequence.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flip::{apply_flip, realize_by_flips, PathFlip};
use crate::graph::Graph;
use crate::perm::Permutation;
use crate::puzzle::{Configuration, Move, MoveSequence, PuzzleInstance};

/// Largest `n` built without an explicit override; lengths grow like `2.414^n`.
pub const DEFAULT_MAX_N: usize = 16;

/// `P_{n+1}^2` minus its vertex `n` (1-based), relabelled onto `0..n`.
pub fn deleted_path_square(n: usize) -> Result<Graph> {
    let mut g = Graph::path(n)?.square();
    if n >= 3 {
        g.remove_edge(n - 3, n - 1);
    }
    Ok(g)
}

/// The reversal `i -> n-1-i`.
pub fn reversal(n: usize) -> Permutation {
    Permutation::from_vec_unchecked((0..n).rev().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    A,
    B,
    C,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Reversed,
}

/// How a certificate was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Recursive,
    Bfs,
    Transposed,
    Compiled,
}

/// An explicitly replayable move sequence with declared endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesisCertificate {
    pub puzzle: PuzzleInstance,
    pub start: Configuration,
    pub end: Configuration,
    pub moves: MoveSequence,
    pub provenance: Provenance,
}

impl SynthesisCertificate {
    /// Replays the moves and checks the declared end point.
    pub fn verify(&self) -> Result<()> {
        let end = self.puzzle.replay(&self.start, &self.moves)?;
        if end != self.end {
            return Err(Error::internal(
                "certificate",
                format!("replay ends at {end}, declared {}", self.end),
            ));
        }
        Ok(())
    }
}

/// Placement of a sub-puzzle certificate inside a host puzzle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubPuzzleEmbedding {
    pub board_map: Vec<usize>,
    pub pebble_map: Vec<usize>,
    pub direction: Direction,
}

impl SubPuzzleEmbedding {
    fn matches(&self, host: &Configuration, sub: &Configuration) -> bool {
        self.board_map
            .iter()
            .enumerate()
            .all(|(j, &b)| host.apply(b) == self.pebble_map[sub.apply(j)])
    }

    /// Replays `sub` on `host` starting from `host_start`, appending the host
    /// moves to `out` and returning the host configuration reached.
    pub fn apply(
        &self,
        host: &PuzzleInstance,
        host_start: &Configuration,
        sub: &SynthesisCertificate,
        out: &mut Vec<Move>,
    ) -> Result<Configuration> {
        let (from, to) = match self.direction {
            Direction::Forward => (&sub.start, &sub.end),
            Direction::Reversed => (&sub.end, &sub.start),
        };
        if !self.matches(host_start, from) {
            return Err(Error::internal(
                "embedding",
                "host configuration does not match the sub-certificate",
            ));
        }
        let moves: Box<dyn Iterator<Item = &Move>> = match self.direction {
            Direction::Forward => Box::new(sub.moves.moves.iter()),
            Direction::Reversed => Box::new(sub.moves.moves.iter().rev()),
        };
        let mut f = host_start.clone();
        let first = out.len();
        for m in moves {
            let hm = Move::new(self.board_map[m.x1], self.board_map[m.x2]);
            if !host.is_legal_move(&f, hm) {
                out.truncate(first);
                return Err(host.apply_move(&f, hm).unwrap_err());
            }
            f.swap_images(hm.x1, hm.x2);
            out.push(hm);
        }
        if !self.matches(&f, to) {
            out.truncate(first);
            return Err(Error::internal(
                "embedding",
                "embedded replay missed the sub-certificate end point",
            ));
        }
        Ok(f)
    }
}

/// Synthesis knobs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SynthOptions {
    /// Permit `n > DEFAULT_MAX_N`.
    pub allow_large: bool,
    /// Use a shortest BFS witness for `A(n)` when `n <= 5`.
    pub bfs_base: bool,
}

type Cache = Mutex<HashMap<(Family, usize), Arc<SynthesisCertificate>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn seq_a(n: usize) -> Result<Arc<SynthesisCertificate>> {
    seq_a_with(n, SynthOptions::default())
}

pub fn seq_b(n: usize) -> Result<Arc<SynthesisCertificate>> {
    build(Family::B, n, SynthOptions::default())
}

pub fn seq_c(n: usize) -> Result<Arc<SynthesisCertificate>> {
    build(Family::C, n, SynthOptions::default())
}

pub fn seq_a_with(n: usize, opts: SynthOptions) -> Result<Arc<SynthesisCertificate>> {
    if opts.bfs_base && (1..=5).contains(&n) {
        let puzzle = PuzzleInstance::symmetric(Graph::path(n)?.square());
        let start = Permutation::identity(n);
        let end = reversal(n);
        let moves = puzzle
            .shortest_moves(&start, &end, 1_000)?
            .ok_or_else(|| Error::internal("seq_a", "reversal unreachable by BFS"))?;
        let cert = SynthesisCertificate {
            puzzle,
            start,
            end,
            moves,
            provenance: Provenance::Bfs,
        };
        cert.verify()?;
        return Ok(Arc::new(cert));
    }
    build(Family::A, n, opts)
}

/// Certificate for the given family and size.
pub fn build(family: Family, n: usize, opts: SynthOptions) -> Result<Arc<SynthesisCertificate>> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "sequence size must be at least 1".into(),
        ));
    }
    if n > DEFAULT_MAX_N && !opts.allow_large {
        return Err(Error::ResourceLimit(format!(
            "n = {n} exceeds {DEFAULT_MAX_N} (about {} moves); pass the override to build it",
            sequence_length(n)
        )));
    }
    if let Some(c) = cache().lock().unwrap().get(&(family, n)) {
        return Ok(c.clone());
    }
    let cert = match family {
        Family::B => build_b(n, opts)?,
        Family::A => {
            let b = build(Family::B, n, opts)?;
            SynthesisCertificate {
                puzzle: PuzzleInstance::symmetric(Graph::path(n)?.square()),
                start: b.start.clone(),
                end: b.end.clone(),
                moves: b.moves.clone(),
                provenance: Provenance::Recursive,
            }
        }
        Family::C => {
            let b = build(Family::B, n, opts)?;
            let (puzzle, start) = b.puzzle.transpose_instance(&b.start);
            let moves = b.puzzle.transpose_sequence(&b.moves, &b.start)?;
            SynthesisCertificate {
                puzzle,
                start,
                end: b.end.inverse(),
                moves,
                provenance: Provenance::Transposed,
            }
        }
    };
    cert.verify()
        .map_err(|e| Error::internal(format!("seq_{family:?}({n})"), e.to_string()))?;
    let cert = Arc::new(cert);
    cache().lock().unwrap().insert((family, n), cert.clone());
    Ok(cert)
}

fn build_b(n: usize, opts: SynthOptions) -> Result<SynthesisCertificate> {
    let puzzle = PuzzleInstance::new(deleted_path_square(n)?, Graph::path(n)?.square())?;
    let start = Permutation::identity(n);
    let end = reversal(n);
    let moves = match n {
        1 => Vec::new(),
        2 => vec![Move::new(0, 1)],
        _ => {
            let mut out = Vec::new();
            let shift = |k: usize, by: usize| (0..k).map(|i| i + by).collect::<Vec<_>>();
            // Reverse the pebbles on every board but the first.
            let b = build(Family::B, n - 1, opts)?;
            let emb = SubPuzzleEmbedding {
                board_map: shift(n - 1, 1),
                pebble_map: shift(n - 1, 1),
                direction: Direction::Forward,
            };
            let f = emb
                .apply(&puzzle, &start, &b, &mut out)
                .map_err(|e| step_error(n, 1, e))?;
            // Undo that reversal on the middle boards.
            let a = build(Family::A, n - 2, opts)?;
            let f = embed_first_valid(
                &puzzle,
                &f,
                &a,
                shift(n - 2, 1),
                pebble_candidates(&(2..n).collect::<Vec<_>>()),
                &mut out,
            )
            .map_err(|e| step_error(n, 2, e))?;
            // Reverse every board but the last, skipping pebble 2.
            let c = build(Family::C, n - 1, opts)?;
            let host: Vec<usize> = std::iter::once(0).chain(2..n).collect();
            let f = embed_first_valid(
                &puzzle,
                &f,
                &c,
                shift(n - 1, 0),
                pebble_candidates(&host),
                &mut out,
            )
            .map_err(|e| step_error(n, 3, e))?;
            // Exchange pebbles 1 and 2 on the last two boards.
            let last = Move::new(n - 2, n - 1);
            puzzle
                .apply_move(&f, last)
                .map_err(|e| step_error(n, 4, e))?;
            out.push(last);
            out
        }
    };
    Ok(SynthesisCertificate {
        puzzle,
        start,
        end,
        moves: MoveSequence::new(moves),
        provenance: Provenance::Recursive,
    })
}

fn step_error(n: usize, step: usize, e: Error) -> Error {
    Error::internal(format!("seq_b({n}) step {step}"), e.to_string())
}

/// Order-preserving and order-reversing maps onto `host` pebbles.
fn pebble_candidates(host: &[usize]) -> Vec<Vec<usize>> {
    vec![host.to_vec(), host.iter().rev().copied().collect()]
}

/// Tries every pebble map in both directions and keeps the first that replays.
fn embed_first_valid(
    host: &PuzzleInstance,
    f: &Configuration,
    sub: &SynthesisCertificate,
    board_map: Vec<usize>,
    pebble_maps: Vec<Vec<usize>>,
    out: &mut Vec<Move>,
) -> Result<Configuration> {
    let mut last_err = None;
    for pebble_map in pebble_maps {
        for direction in [Direction::Forward, Direction::Reversed] {
            let emb = SubPuzzleEmbedding {
                board_map: board_map.clone(),
                pebble_map: pebble_map.clone(),
                direction,
            };
            match emb.apply(host, f, sub, out) {
                Ok(g) => return Ok(g),
                Err(e) => last_err = Some(e),
            }
        }
    }
    Err(last_err.unwrap_or_else(|| Error::internal("embedding", "no candidate embedding")))
}

/// Number of moves in `A(n)`, from the recurrence `L(n) = 2 L(n-1) + L(n-2) + 1`.
pub fn sequence_length(n: usize) -> u128 {
    let (mut prev, mut cur) = (0u128, 0u128); // L(0), L(1)
    if n <= 1 {
        return 0;
    }
    for _ in 2..=n {
        let next = cur.saturating_mul(2).saturating_add(prev).saturating_add(1);
        prev = cur;
        cur = next;
    }
    cur
}

/// Compiles `sigma` into moves on `Puz(G^2)`: realize it by path flips, then
/// replace each flip of a path on `k` vertices by `A(k)` laid along it.
pub fn compile_automorphism_to_square_moves(
    g: &Graph,
    sigma: &Permutation,
) -> Result<SynthesisCertificate> {
    compile_with(g, sigma, SynthOptions::default())
}

pub fn compile_with(
    g: &Graph,
    sigma: &Permutation,
    opts: SynthOptions,
) -> Result<SynthesisCertificate> {
    let flips = realize_by_flips(g, sigma)?;
    let puzzle = PuzzleInstance::symmetric(g.square());
    let start = Permutation::identity(g.n());
    let mut f = start.clone();
    let mut moves = Vec::new();
    for (i, flip) in flips.flips.iter().enumerate() {
        let path = &flip.path;
        let image: Vec<usize> = path.iter().map(|&v| f.apply(v)).collect();
        let sub = build(Family::A, path.len(), opts)?;
        let emb = SubPuzzleEmbedding {
            board_map: path.clone(),
            pebble_map: image,
            direction: Direction::Forward,
        };
        let next = emb
            .apply(&puzzle, &f, &sub, &mut moves)
            .map_err(|e| Error::internal(format!("compile flip #{}", i + 1), e.to_string()))?;
        let expected = apply_flip(g, &f, &PathFlip::new(path.clone()))?;
        if next != expected {
            return Err(Error::internal(
                format!("compile flip #{}", i + 1),
                "moves disagree with the flip",
            ));
        }
        f = next;
    }
    let cert = SynthesisCertificate {
        puzzle,
        start,
        end: sigma.clone(),
        moves: MoveSequence::new(moves),
        provenance: Provenance::Compiled,
    };
    cert.verify()?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::SearchOptions;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::from_one_based(v).unwrap()
    }

    #[test]
    fn deleted_square_shape() {
        let d = deleted_path_square(5).unwrap();
        assert_eq!(
            d.edge_count(),
            Graph::path(5).unwrap().square().edge_count() - 1
        );
        assert!(!d.has_edge(2, 4));
        assert!(d.has_edge(3, 4));
        // same graph as P_6^2 with vertex 5 removed
        let direct = Graph::path(6)
            .unwrap()
            .square()
            .induced_subgraph(&[0, 1, 2, 3, 5]);
        assert_eq!(d, direct);
        assert_eq!(deleted_path_square(2).unwrap(), Graph::path(2).unwrap());
    }

    #[test]
    fn base_cases() {
        assert!(seq_a(1).unwrap().moves.is_empty());
        assert_eq!(seq_a(2).unwrap().moves.moves, vec![Move::new(0, 1)]);
        assert_eq!(seq_b(2).unwrap().moves.moves, vec![Move::new(0, 1)]);
        assert!(seq_b(1).unwrap().moves.is_empty());
        assert!(seq_c(1).unwrap().moves.is_empty());
        assert_eq!(seq_c(2).unwrap().moves.moves, vec![Move::new(0, 1)]);
    }

    #[test]
    fn certificates_replay() {
        for n in 1..=10 {
            for c in [seq_a(n).unwrap(), seq_b(n).unwrap(), seq_c(n).unwrap()] {
                c.verify().unwrap();
                assert_eq!(c.start, Permutation::identity(n));
                assert_eq!(c.end, reversal(n));
            }
        }
        assert_eq!(seq_a(7).unwrap().end, perm(&[7, 6, 5, 4, 3, 2, 1]));
    }

    #[test]
    fn lengths_follow_recurrence() {
        let lens: Vec<u128> = (1..=7).map(sequence_length).collect();
        assert_eq!(lens, vec![0, 1, 3, 8, 20, 49, 119]);
        for n in 1..=10 {
            assert_eq!(seq_a(n).unwrap().moves.len() as u128, sequence_length(n));
        }
    }

    #[test]
    fn bfs_base_is_shorter() {
        let opts = SynthOptions {
            bfs_base: true,
            ..Default::default()
        };
        for n in 1..=5 {
            let bfs = seq_a_with(n, opts).unwrap();
            bfs.verify().unwrap();
            assert_eq!(bfs.provenance, Provenance::Bfs);
            assert!(bfs.moves.len() <= seq_a(n).unwrap().moves.len());
        }
    }

    #[test]
    fn size_guard() {
        assert!(matches!(seq_a(17), Err(Error::ResourceLimit(_))));
        assert!(matches!(seq_a(0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn compiler_examples() {
        let p5 = Graph::path(5).unwrap();
        let cert = compile_automorphism_to_square_moves(&p5, &reversal(5)).unwrap();
        assert_eq!(cert.moves, seq_a(5).unwrap().moves);

        let star = Graph::star(3).unwrap();
        for sigma in crate::perm::automorphisms(&star).unwrap().elements {
            compile_automorphism_to_square_moves(&star, &sigma)
                .unwrap()
                .verify()
                .unwrap();
        }

        let c5 = Graph::cycle(5).unwrap();
        let rot = Permutation::new(vec![1, 2, 3, 4, 0]).unwrap();
        let cert = compile_automorphism_to_square_moves(&c5, &rot).unwrap();
        assert_eq!(cert.end, rot);
        assert!(cert
            .puzzle
            .equivalent(&cert.start, &rot, SearchOptions::default())
            .unwrap());
    }
}
