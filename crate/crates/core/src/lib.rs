//! Exact analysis of synchronizing automata.
//!
//! The crate covers shortest reset, rank, subset and avoiding words in the
//! power automaton, the Frankl-Pin and one-cluster upper bounds on reset
//! length, structural classifiers, isomorph-free generation of automata with
//! bound-based pruning, and verification campaigns over generated classes.
//!
//! ```
//! use synchrolab::{fixture, search, Fixture};
//!
//! let c4 = fixture(Fixture::Cerny, Some(4)).unwrap();
//! let (len, word) = search::reset_word(&c4).unwrap();
//! assert_eq!(len, 9);
//! assert_eq!(c4.word_rank(&word).unwrap(), 1);
//! ```

pub mod automaton;
pub mod bounds;
pub mod canon;
pub mod error;
pub mod fixtures;
pub mod genx;
pub mod search;
pub mod stateset;
pub mod structure;
pub mod transform;
pub mod verify;

pub use automaton::{Automaton, Word};
pub use canon::{automorphisms, canonical_form, is_isomorphic};
pub use error::{Error, Result};
pub use fixtures::{fixture, Fixture};
pub use stateset::StateSet;
pub use transform::Transformation;
