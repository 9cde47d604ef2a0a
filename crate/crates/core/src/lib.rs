//! The pebble-exchange puzzle `Puz(G, H)`: two graphs on the same vertex set,
//! one carrying the board and one constraining which pebbles may trade places.

pub mod catalog;
pub mod classify;
pub mod error;
pub mod flip;
pub mod format;
pub mod graph;
pub mod perm;
pub mod puzzle;
pub mod search;
pub mod square;
pub mod verify;

pub use error::{Error, Result};
pub use flip::{FlipSequence, PathFlip};
pub use graph::Graph;
pub use perm::Permutation;
pub use puzzle::{Configuration, Move, MoveSequence, PuzzleInstance};
pub use search::SearchOptions;
