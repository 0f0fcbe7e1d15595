//! Final coalgebras and finite limits for finitary polynomial functors,
//! realized over finite sets.
//!
//! The crate works with two automaton presentations of coalgebras:
//! [`PAutomaton`] for `P(X) = Σᵢ Ωᵢ × X^{Aᵢ}` and [`QAutomaton`] for
//! `Q(X) = Ω × X^A`. The completion [`completion_k`] embeds the former in
//! the latter, [`coreflect_d`] retracts Q-automata onto the delta
//! subcategory, and [`reflect_l`] strips the sink sort. Behaviors live in
//! `Ω^{A*}` as [`LazyTree`]s, and finite limits are computed in
//! [`limits`]. The [`fixpoint`] module evaluates the posetal analogue on
//! Kripke frames.

#![allow(clippy::needless_range_loop)]

pub mod automata;
pub mod behavior;
pub mod delta;
mod error;
pub mod fixpoint;
pub mod fixtures;
pub mod format;
pub mod limits;
pub mod partition;
pub mod signature;
mod text;

pub use automata::{
    completion_k, find_isomorphism, hom_count, hom_enumerate, is_isomorphic, is_morphism, is_morphism_p, is_morphism_q,
    reflect_l, sink_extend, validate_p, validate_q, AutMorphism, Automaton, PAutomaton, QAutomaton, StateId,
    DEFAULT_HOM_CAP,
};
pub use behavior::{behavior, bisimilar, clause_check, minimize, tree_eq_depth, unfold_tree, Expansion, LazyTree};
pub use delta::{coreflect_d, delta_check, delta_check_words, factoring_check, DeltaReport, ExtendedAction};
pub use error::{Error, Result};
pub use fixpoint::{KripkeFrame, WorldSet};
pub use limits::LimitResult;
pub use signature::{full_alphabet, load_signature, Dir, LabelId, Omega, Signature, Sort, SortId, Word};
