//! Small named automata over the two-sort `f`/`g` signature, used by the
//! test suites and the examples in the README.
//!
//! `f` is unary (direction `f1`) and `g` binary (directions `g1`, `g2`).

use std::sync::Arc;

use crate::automata::{PAutomaton, QAutomaton};
use crate::format::{parse_paut, parse_qaut};
use crate::signature::Signature;

pub const SIG_FG: &str = "sig\nsort 1\nlabels f\ndirs f1\nsort 2\nlabels g\ndirs g1 g2\n";

/// One `f` state looping on itself.
pub const A_LOOP: &str = "paut\nstate q sort 1 label f\ntrans q f1 q\n";

/// Two disjoint `f` loops.
pub const A_2LOOP: &str = "paut
state q1 sort 1 label f
state q2 sort 1 label f
trans q1 f1 q1
trans q2 f1 q2
";

/// Alternating `f`/`g` term: `f(g(f(..), f(..)))`.
pub const A_FG: &str = "paut
state p sort 1 label f
state r sort 2 label g
trans p f1 r
trans r g1 p
trans r g2 p
";

/// Completion of [`A_LOOP`].
pub const K_LOOP: &str = "qaut
state q sort 1 label f
state _sink_ sort 0
trans q f1 q
trans q g1 _sink_
trans q g2 _sink_
trans _sink_ f1 _sink_
trans _sink_ g1 _sink_
trans _sink_ g2 _sink_
";

/// An `f` state whose own direction falls into the sink.
pub const B_BAD: &str = "qaut
state bot sort 0
state x sort 1 label f
trans bot f1 bot
trans bot g1 bot
trans bot g2 bot
trans x f1 bot
trans x g1 bot
trans x g2 bot
";

/// [`B_BAD`] plus a well-behaved state `y` that reaches `x`.
pub const B3: &str = "qaut
state bot sort 0
state x sort 1 label f
state y sort 1 label f
trans bot f1 bot
trans bot g1 bot
trans bot g2 bot
trans x f1 bot
trans x g1 bot
trans x g2 bot
trans y f1 x
trans y g1 bot
trans y g2 bot
";

pub fn sig_fg() -> Arc<Signature> {
    Arc::new(Signature::parse(SIG_FG).expect("fixture signature"))
}

fn p(text: &str) -> PAutomaton {
    parse_paut(&sig_fg(), text).expect("fixture automaton")
}

fn q(text: &str) -> QAutomaton {
    parse_qaut(&sig_fg(), text).expect("fixture automaton")
}

pub fn a_loop() -> PAutomaton {
    p(A_LOOP)
}

pub fn a_2loop() -> PAutomaton {
    p(A_2LOOP)
}

pub fn a_fg() -> PAutomaton {
    p(A_FG)
}

pub fn k_loop() -> QAutomaton {
    q(K_LOOP)
}

pub fn b_bad() -> QAutomaton {
    q(B_BAD)
}

pub fn b3() -> QAutomaton {
    q(B3)
}
