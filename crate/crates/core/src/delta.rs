//! The delta-subcategory of Q-automata and its coreflector.
//!
//! A Q-automaton is a delta-automaton when, at every state of sort `j` and
//! every direction `d` of sort `i`, the `d`-successor is labeled (sort in
//! `I`) if `i = j`, and is a sink-sorted state otherwise. These are exactly
//! the completions of P-automata up to extra sink states.

use std::collections::HashSet;

use crate::automata::{is_morphism_q, AutMorphism, Automaton, QAutomaton, StateId};
use crate::error::{Error, Result};
use crate::signature::{Dir, Sort};

/// The extension `ŝ : A* × Q → Q` of the transition function to words.
#[derive(Debug, Clone, Copy)]
pub struct ExtendedAction<'a> {
    aut: &'a QAutomaton,
}

impl<'a> ExtendedAction<'a> {
    pub fn new(aut: &'a QAutomaton) -> Self {
        ExtendedAction { aut }
    }

    /// `ŝ(w, q)`: the state reached from `q` by reading `w` left to right.
    pub fn apply(&self, word: &[Dir], q: StateId) -> StateId {
        word.iter().fold(q, |s, &d| self.aut.succ(s, d))
    }
}

/// A failed local condition: `step(state, dir)` has sort `target_sort`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub state: StateId,
    pub dir: Dir,
    pub target_sort: Sort,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaReport {
    pub verdict: bool,
    pub witnesses: Vec<Witness>,
}

/// Whether the transition on `d` out of a state of sort `from` may land in
/// a state of sort `to`.
fn allowed(from: Sort, dir_sort: crate::signature::SortId, to: Sort) -> bool {
    match from {
        Sort::Labeled(j) if j == dir_sort => !to.is_sink(),
        _ => to.is_sink(),
    }
}

fn local_witnesses(aut: &QAutomaton, q: StateId) -> impl Iterator<Item = Witness> + '_ {
    let sig = aut.sig();
    let from = aut.sort_of(q);
    sig.full_alphabet().into_iter().filter_map(move |d| {
        let to = aut.sort_of(aut.succ(q, d));
        (!allowed(from, sig.dir_sort(d), to)).then_some(Witness {
            state: q,
            dir: d,
            target_sort: to,
        })
    })
}

/// Checks the factoring conditions state by state. Expects a valid automaton.
pub fn delta_check(aut: &QAutomaton) -> DeltaReport {
    let witnesses: Vec<Witness> = (0..aut.num_states()).flat_map(|q| local_witnesses(aut, q)).collect();
    DeltaReport {
        verdict: witnesses.is_empty(),
        witnesses,
    }
}

/// Decides delta-membership through the subobjects
/// `P_j = {(w,q) : ŝ(w,q) ∈ Q_j}` and `P_{i,j} ⊆ Aᵢ × A* × Q`, checking
/// `P_j ≤ ∀_{Fᵢ} P_{i,j}` for every `i ∈ I`, `j ∈ J`. Words are enumerated
/// up to length `|Q| - 1`, which reaches every reachable state.
pub fn delta_check_words(aut: &QAutomaton) -> bool {
    let sig = aut.sig();
    let ext = ExtendedAction::new(aut);
    let n = aut.num_states();
    let alphabet = sig.full_alphabet();
    let max_len = n.saturating_sub(1);

    let mut words: Vec<Vec<Dir>> = vec![vec![]];
    let mut frontier = words.clone();
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|w| {
                alphabet.iter().map(move |&d| {
                    let mut v = w.clone();
                    v.push(d);
                    v
                })
            })
            .collect();
        words.extend(frontier.iter().cloned());
    }

    let j_sorts: Vec<Sort> = std::iter::once(Sort::Sink)
        .chain(sig.sort_ids().map(Sort::Labeled))
        .collect();
    for &j in &j_sorts {
        // P_j
        let p_j: Vec<(&[Dir], StateId)> = words
            .iter()
            .flat_map(|w| (0..n).map(move |q| (w.as_slice(), q)))
            .filter(|&(w, q)| aut.sort_of(ext.apply(w, q)) == j)
            .collect();
        for i in sig.sort_ids() {
            // P_{i,j}
            let mut p_ij: HashSet<(Dir, &[Dir], StateId)> = HashSet::new();
            for w in &words {
                for q in 0..n {
                    for d in sig.dirs_of(i) {
                        let mut wd = w.clone();
                        wd.push(d);
                        let target = aut.sort_of(ext.apply(&wd, q));
                        let member = if Sort::Labeled(i) == j {
                            !target.is_sink()
                        } else {
                            target.is_sink()
                        };
                        if member {
                            p_ij.insert((d, w.as_slice(), q));
                        }
                    }
                }
            }
            let holds = p_j
                .iter()
                .all(|&(w, q)| sig.dirs_of(i).all(|d| p_ij.contains(&(d, w, q))));
            if !holds {
                return false;
            }
        }
    }
    true
}

/// Carrier of the coreflection: states from which no locally bad state is
/// reachable.
pub fn coreflect_carrier(aut: &QAutomaton) -> Vec<bool> {
    let n = aut.num_states();
    let sig = aut.sig();
    let mut preds: Vec<Vec<StateId>> = vec![vec![]; n];
    for q in 0..n {
        for d in sig.full_alphabet() {
            preds[aut.succ(q, d)].push(q);
        }
    }
    let mut keep = vec![true; n];
    let mut stack: Vec<StateId> = (0..n).filter(|&q| local_witnesses(aut, q).next().is_some()).collect();
    for &q in &stack {
        keep[q] = false;
    }
    while let Some(q) = stack.pop() {
        for &p in &preds[q] {
            if keep[p] {
                keep[p] = false;
                stack.push(p);
            }
        }
    }
    keep
}

/// The largest delta sub-automaton, with its inclusion into `aut`.
pub fn coreflect_d(aut: &QAutomaton) -> (QAutomaton, AutMorphism) {
    aut.restrict(&coreflect_carrier(aut))
}

/// Checks that a morphism out of a delta-automaton lands inside the carrier
/// of the target's coreflection.
pub fn factoring_check(src: &QAutomaton, tgt: &QAutomaton, f: &AutMorphism) -> Result<bool> {
    if !is_morphism_q(src, tgt, f)? {
        return Err(Error::Precondition("not a Q-automaton morphism".into()));
    }
    if !delta_check(src).verdict {
        return Err(Error::Precondition("source is not a delta-automaton".into()));
    }
    let carrier = coreflect_carrier(tgt);
    Ok(f.map.iter().all(|&t| carrier[t]))
}
