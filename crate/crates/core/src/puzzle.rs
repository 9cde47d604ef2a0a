//! `Puz(G, H)`: configurations, moves, equivalence, feasibility and `Peb(G)`.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::perm::{is_automorphism, GroupSummary, Permutation};
use crate::search::{self, SearchOptions, StateSet};

/// A configuration maps each board vertex to the pebble sitting on it.
pub type Configuration = Permutation;

/// A board graph together with a pebble graph of the same order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuzzleInstance {
    pub board: Graph,
    pub pebbles: Graph,
}

/// Exchange of the pebbles on two board vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    pub x1: usize,
    pub x2: usize,
}

impl Move {
    pub fn new(x1: usize, x2: usize) -> Self {
        Move { x1, x2 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MoveSequence {
    pub moves: Vec<Move>,
}

impl MoveSequence {
    pub fn new(moves: Vec<Move>) -> Self {
        MoveSequence { moves }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Since moves are involutions, the reversed sequence undoes this one.
    pub fn reversed(&self) -> MoveSequence {
        MoveSequence {
            moves: self.moves.iter().rev().copied().collect(),
        }
    }
}

impl PuzzleInstance {
    pub fn new(board: Graph, pebbles: Graph) -> Result<Self> {
        if board.n() != pebbles.n() {
            return Err(Error::SizeMismatch {
                expected: board.n(),
                actual: pebbles.n(),
            });
        }
        Ok(PuzzleInstance { board, pebbles })
    }

    /// `Puz(G) = Puz(G, G)`.
    pub fn symmetric(g: Graph) -> Self {
        PuzzleInstance {
            pebbles: g.clone(),
            board: g,
        }
    }

    pub fn n(&self) -> usize {
        self.board.n()
    }

    fn check_config(&self, f: &Configuration) -> Result<()> {
        if f.len() != self.n() {
            return Err(Error::SizeMismatch {
                expected: self.n(),
                actual: f.len(),
            });
        }
        Ok(())
    }

    pub fn is_legal_move(&self, f: &Configuration, m: Move) -> bool {
        m.x1 < self.n()
            && m.x2 < self.n()
            && f.len() == self.n()
            && self.board.has_edge(m.x1, m.x2)
            && self.pebbles.has_edge(f.apply(m.x1), f.apply(m.x2))
    }

    fn legality_error(&self, f: &Configuration, m: Move) -> Error {
        let reason = if m.x1 >= self.n() || m.x2 >= self.n() {
            "board vertex out of range".to_string()
        } else if !self.board.has_edge(m.x1, m.x2) {
            "board vertices are not adjacent".to_string()
        } else {
            format!(
                "pebbles {} and {} are not adjacent in the pebble graph",
                f.apply(m.x1) + 1,
                f.apply(m.x2) + 1
            )
        };
        Error::IllegalMove {
            x1: m.x1 + 1,
            x2: m.x2 + 1,
            reason,
        }
    }

    pub fn apply_move(&self, f: &Configuration, m: Move) -> Result<Configuration> {
        self.check_config(f)?;
        if !self.is_legal_move(f, m) {
            return Err(self.legality_error(f, m));
        }
        let mut g = f.clone();
        g.swap_images(m.x1, m.x2);
        Ok(g)
    }

    /// Replays `moves` from `start`, validating each move.
    pub fn replay(&self, start: &Configuration, moves: &MoveSequence) -> Result<Configuration> {
        self.check_config(start)?;
        let mut f = start.clone();
        for (i, &m) in moves.moves.iter().enumerate() {
            if !self.is_legal_move(&f, m) {
                return Err(match self.legality_error(&f, m) {
                    Error::IllegalMove { x1, x2, reason } => Error::IllegalMove {
                        x1,
                        x2,
                        reason: format!("move #{}: {reason}", i + 1),
                    },
                    e => e,
                });
            }
            f.swap_images(m.x1, m.x2);
        }
        Ok(f)
    }

    fn move_neighbors(&self) -> impl Fn(&[usize], &mut dyn FnMut(Vec<usize>)) + Sync + '_ {
        let n = self.n();
        let mut peb = vec![false; n * n];
        for (u, v) in self.pebbles.edges() {
            peb[u * n + v] = true;
            peb[v * n + u] = true;
        }
        let edges: Vec<(usize, usize)> = self.board.edges().collect();
        move |state: &[usize], out: &mut dyn FnMut(Vec<usize>)| {
            for &(a, b) in &edges {
                if peb[state[a] * n + state[b]] {
                    let mut next = state.to_vec();
                    next.swap(a, b);
                    out(next);
                }
            }
        }
    }

    /// The equivalence class of `f0` under legal moves.
    pub fn reachable_set(&self, f0: &Configuration, opts: SearchOptions) -> Result<StateSet> {
        self.check_config(f0)?;
        Ok(search::explore(f0, None, opts, self.move_neighbors())?.visited)
    }

    pub fn equivalent(
        &self,
        f: &Configuration,
        g: &Configuration,
        opts: SearchOptions,
    ) -> Result<bool> {
        self.check_config(f)?;
        self.check_config(g)?;
        Ok(search::explore(f, Some(g), opts, self.move_neighbors())?.found)
    }

    /// All `n!` configurations are mutually equivalent.
    pub fn is_feasible(&self, opts: SearchOptions) -> Result<bool> {
        Ok(self.feasibility_count(opts)?.0)
    }

    /// Feasibility plus the size of the identity's class.
    pub fn feasibility_count(&self, opts: SearchOptions) -> Result<(bool, usize)> {
        let n = self.n();
        let total = (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k));
        let reached = self.reachable_set(&Permutation::identity(n), opts)?.len();
        Ok((total == Some(reached), reached))
    }

    /// A shortest legal move sequence from `from` to `to`, if one exists.
    pub fn shortest_moves(
        &self,
        from: &Configuration,
        to: &Configuration,
        cap: usize,
    ) -> Result<Option<MoveSequence>> {
        self.check_config(from)?;
        self.check_config(to)?;
        let edges: Vec<(usize, usize)> = self.board.edges().collect();
        let route = search::shortest_route(
            from,
            to,
            cap,
            |state, out: &mut dyn FnMut(Move, Vec<usize>)| {
                for &(a, b) in &edges {
                    if self.pebbles.has_edge(state[a], state[b]) {
                        let mut next = state.to_vec();
                        next.swap(a, b);
                        out(Move::new(a, b), next);
                    }
                }
            },
        )?;
        Ok(route.map(MoveSequence::new))
    }

    /// Swaps the roles of board and pebble graphs; `f` becomes `f^{-1}`.
    pub fn transpose_instance(&self, f: &Configuration) -> (PuzzleInstance, Configuration) {
        (
            PuzzleInstance {
                board: self.pebbles.clone(),
                pebbles: self.board.clone(),
            },
            f.inverse(),
        )
    }

    /// Rewrites a sequence valid from `f0` for the transposed puzzle: the move
    /// exchanging pebbles `y1, y2` on boards `x1, x2` becomes the move on boards
    /// `y1, y2`, played from `f0^{-1}`.
    pub fn transpose_sequence(
        &self,
        moves: &MoveSequence,
        f0: &Configuration,
    ) -> Result<MoveSequence> {
        self.check_config(f0)?;
        let mut f = f0.clone();
        let mut out = Vec::with_capacity(moves.len());
        for &m in &moves.moves {
            if !self.is_legal_move(&f, m) {
                return Err(Error::internal(
                    "transpose_sequence",
                    self.legality_error(&f, m).to_string(),
                ));
            }
            out.push(Move::new(f.apply(m.x1), f.apply(m.x2)));
            f.swap_images(m.x1, m.x2);
        }
        Ok(MoveSequence::new(out))
    }
}

/// `Peb(G)`: automorphisms of `g` equivalent to the identity in `Puz(G)`.
pub fn peb_group(g: &Graph, opts: SearchOptions) -> Result<GroupSummary> {
    Ok(peb_group_with_states(g, opts)?.0)
}

/// `Peb(G)` together with the number of configurations explored.
pub fn peb_group_with_states(g: &Graph, opts: SearchOptions) -> Result<(GroupSummary, usize)> {
    let puz = PuzzleInstance::symmetric(g.clone());
    let reach = puz.reachable_set(&Permutation::identity(g.n()), opts)?;
    let mut elements = Vec::new();
    for f in reach.iter() {
        if is_automorphism(g, &f)? {
            elements.push(f);
        }
    }
    Ok((GroupSummary::from_elements(elements)?, reach.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::from_one_based(v).unwrap()
    }

    fn opts() -> SearchOptions {
        SearchOptions::default()
    }

    #[test]
    fn legality() {
        let p2 = PuzzleInstance::symmetric(Graph::path(2).unwrap());
        assert!(p2.is_legal_move(&Permutation::identity(2), Move::new(0, 1)));
        let p3 = PuzzleInstance::symmetric(Graph::path(3).unwrap());
        assert!(!p3.is_legal_move(&Permutation::identity(3), Move::new(0, 2)));
        let k3 = PuzzleInstance::symmetric(Graph::path(3).unwrap().square());
        for f in [perm(&[1, 2, 3]), perm(&[3, 1, 2]), perm(&[2, 3, 1])] {
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                assert!(k3.is_legal_move(&f, Move::new(a, b)));
            }
        }
    }

    #[test]
    fn apply_move_swaps_images() {
        let p2 = PuzzleInstance::symmetric(Graph::path(2).unwrap());
        let once = p2
            .apply_move(&Permutation::identity(2), Move::new(0, 1))
            .unwrap();
        assert_eq!(once, perm(&[2, 1]));
        assert_eq!(
            p2.apply_move(&once, Move::new(0, 1)).unwrap(),
            Permutation::identity(2)
        );
        let sq = PuzzleInstance::symmetric(Graph::path(3).unwrap().square());
        assert_eq!(
            sq.apply_move(&perm(&[1, 2, 3]), Move::new(0, 2)).unwrap(),
            perm(&[3, 2, 1])
        );
        let p3 = PuzzleInstance::symmetric(Graph::path(3).unwrap());
        let err = p3
            .apply_move(&perm(&[1, 2, 3]), Move::new(0, 2))
            .unwrap_err();
        assert!(matches!(err, Error::IllegalMove { x1: 1, x2: 3, .. }));
        let err = p3
            .apply_move(&perm(&[2, 1, 3]), Move::new(1, 2))
            .unwrap_err();
        assert!(err.to_string().contains("pebbles 1 and 3"));
    }

    #[test]
    fn reachable_sets() {
        let p2 = PuzzleInstance::symmetric(Graph::path(2).unwrap());
        assert_eq!(
            p2.reachable_set(&Permutation::identity(2), opts())
                .unwrap()
                .len(),
            2
        );
        let p3 = PuzzleInstance::symmetric(Graph::path(3).unwrap());
        let r = p3.reachable_set(&Permutation::identity(3), opts()).unwrap();
        assert_eq!(
            r.to_sorted_vec(),
            vec![perm(&[1, 2, 3]), perm(&[1, 3, 2]), perm(&[2, 1, 3])]
        );
        let grid =
            PuzzleInstance::new(Graph::grid(2, 3).unwrap(), Graph::star(5).unwrap()).unwrap();
        assert_eq!(
            grid.reachable_set(&Permutation::identity(6), opts())
                .unwrap()
                .len(),
            360
        );
        assert!(matches!(
            grid.reachable_set(&Permutation::identity(6), SearchOptions::with_cap(100)),
            Err(Error::CapExceeded { cap: 100 })
        ));
    }

    #[test]
    fn equivalence() {
        let c4 = PuzzleInstance::symmetric(Graph::cycle(4).unwrap());
        let id = Permutation::identity(4);
        assert!(c4.equivalent(&id, &id, opts()).unwrap());
        assert!(!c4.equivalent(&id, &perm(&[2, 3, 4, 1]), opts()).unwrap());
        let k3 = PuzzleInstance::symmetric(Graph::complete(3).unwrap());
        assert!(k3
            .equivalent(&perm(&[1, 2, 3]), &perm(&[3, 1, 2]), opts())
            .unwrap());
    }

    #[test]
    fn feasibility() {
        for n in 1..=5 {
            let sq = PuzzleInstance::symmetric(Graph::path(n).unwrap().square());
            assert!(sq.is_feasible(opts()).unwrap(), "P_{n}^2");
        }
        let c6 = PuzzleInstance::new(Graph::cycle(6).unwrap(), Graph::star(5).unwrap()).unwrap();
        assert!(!c6.is_feasible(opts()).unwrap());
        let bip = PuzzleInstance::new(Graph::path(4).unwrap(), Graph::cycle(4).unwrap()).unwrap();
        assert!(!bip.is_feasible(opts()).unwrap());
    }

    #[test]
    fn pebble_groups() {
        assert_eq!(
            peb_group(&Graph::path(2).unwrap(), opts()).unwrap().order,
            2
        );
        assert_eq!(
            peb_group(&Graph::cycle(5).unwrap(), opts()).unwrap().order,
            1
        );
        let q3 = peb_group(&Graph::hypercube(3).unwrap(), opts()).unwrap();
        assert_eq!(q3.order, 8);
        assert!(q3.elements.iter().all(|p| p.order() <= 2));
    }

    #[test]
    fn transposition_of_sequences() {
        let p2 = PuzzleInstance::symmetric(Graph::path(2).unwrap());
        let id = Permutation::identity(2);
        assert!(p2
            .transpose_sequence(&MoveSequence::default(), &id)
            .unwrap()
            .is_empty());
        let one = MoveSequence::new(vec![Move::new(0, 1)]);
        assert_eq!(p2.transpose_sequence(&one, &id).unwrap(), one);

        // a scrambled asymmetric instance: replaying the transposed sequence
        // from f0^{-1} must end at the inverse of the original end point
        let puz =
            PuzzleInstance::new(Graph::grid(2, 3).unwrap(), Graph::complete(6).unwrap()).unwrap();
        let f0 = perm(&[3, 1, 2, 6, 4, 5]);
        let moves = MoveSequence::new(vec![
            Move::new(0, 1),
            Move::new(1, 4),
            Move::new(3, 4),
            Move::new(2, 5),
        ]);
        let end = puz.replay(&f0, &moves).unwrap();
        let (tp, g0) = puz.transpose_instance(&f0);
        let tmoves = puz.transpose_sequence(&moves, &f0).unwrap();
        assert_eq!(tp.replay(&g0, &tmoves).unwrap(), end.inverse());
        // transposing twice gives back the original moves
        assert_eq!(tp.transpose_sequence(&tmoves, &g0).unwrap(), moves);
    }

    #[test]
    fn shortest_witness() {
        let sq = PuzzleInstance::symmetric(Graph::path(4).unwrap().square());
        let target = perm(&[4, 3, 2, 1]);
        let moves = sq
            .shortest_moves(&Permutation::identity(4), &target, 1000)
            .unwrap()
            .unwrap();
        assert_eq!(
            sq.replay(&Permutation::identity(4), &moves).unwrap(),
            target
        );
        let c4 = PuzzleInstance::symmetric(Graph::cycle(4).unwrap());
        assert!(c4
            .shortest_moves(&Permutation::identity(4), &perm(&[2, 3, 4, 1]), 1000)
            .unwrap()
            .is_none());
    }
}
