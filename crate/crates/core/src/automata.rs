//! P-automata and Q-automata over finite state sets.
//!
//! A [`PAutomaton`] is a coalgebra for `P(X) = Σᵢ Ωᵢ × X^{Aᵢ}` presented as a
//! partial deterministic automaton: every state carries a sort `i`, a label
//! in `Ωᵢ`, and one successor per direction of `Aᵢ`. A [`QAutomaton`] is a
//! coalgebra for `Q(X) = Ω × X^A`: a total deterministic Moore machine whose
//! states are sorted by `J = {0} ∪ I`. The coproduct decompositions are kept
//! as sort tags on the states.
//!
//! Automata are plain data. Nothing is assumed about them until
//! [`validate_p`]/[`validate_q`] is called, and morphisms are bare state maps
//! checked by [`is_morphism_p`]/[`is_morphism_q`].

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::signature::{Dir, LabelId, Omega, Signature, Sort, SortId};
use crate::text::is_name;

pub type StateId = usize;

/// Name given to the state added by [`completion_k`].
pub const SINK_STATE: &str = "_sink_";

/// Default cap on `|B|^|A|` for [`hom_enumerate`].
pub const DEFAULT_HOM_CAP: u128 = 1_000_000;

/// Read access shared by both automaton kinds.
pub trait Automaton {
    fn sig(&self) -> &Arc<Signature>;
    fn num_states(&self) -> usize;
    fn state_name(&self, q: StateId) -> &str;
    fn state_sort(&self, q: StateId) -> Sort;
    fn observation(&self, q: StateId) -> Omega;
    fn step(&self, q: StateId, d: Dir) -> Option<StateId>;
    /// Whether the morphism equations quantify over `d` at `q`.
    fn applicable(&self, q: StateId, d: Dir) -> bool;

    fn state_by_name(&self, name: &str) -> Option<StateId> {
        (0..self.num_states()).find(|&q| self.state_name(q) == name)
    }
}

pub(crate) fn same_sig(a: &Arc<Signature>, b: &Arc<Signature>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn check_new_name(names: &[String], name: &str) -> Result<()> {
    if !is_name(name) {
        return Err(Error::Invalid(format!("`{name}` is not a valid state name")));
    }
    if names.iter().any(|n| n == name) {
        return Err(Error::Duplicate {
            kind: "state",
            name: name.to_owned(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAutomaton {
    sig: Arc<Signature>,
    names: Vec<String>,
    sort: Vec<SortId>,
    label: Vec<LabelId>,
    step: Vec<Option<StateId>>,
}

impl PAutomaton {
    pub fn new(sig: Arc<Signature>) -> Self {
        PAutomaton {
            sig,
            names: vec![],
            sort: vec![],
            label: vec![],
            step: vec![],
        }
    }

    pub fn add_state(&mut self, name: &str, sort: SortId, label: LabelId) -> Result<StateId> {
        check_new_name(&self.names, name)?;
        self.names.push(name.to_owned());
        self.sort.push(sort);
        self.label.push(label);
        self.step.extend(std::iter::repeat_n(None, self.sig.num_dirs()));
        Ok(self.names.len() - 1)
    }

    pub fn set_step(&mut self, q: StateId, d: Dir, target: StateId) {
        let k = self.sig.num_dirs();
        self.step[q * k + d.0] = Some(target);
    }

    pub fn clear_step(&mut self, q: StateId, d: Dir) {
        let k = self.sig.num_dirs();
        self.step[q * k + d.0] = None;
    }

    pub fn set_label(&mut self, q: StateId, label: LabelId) {
        self.label[q] = label;
    }

    pub fn set_sort(&mut self, q: StateId, sort: SortId) {
        self.sort[q] = sort;
    }

    pub fn sort_of(&self, q: StateId) -> SortId {
        self.sort[q]
    }

    pub fn label_of(&self, q: StateId) -> LabelId {
        self.label[q]
    }
}

impl Automaton for PAutomaton {
    fn sig(&self) -> &Arc<Signature> {
        &self.sig
    }
    fn num_states(&self) -> usize {
        self.names.len()
    }
    fn state_name(&self, q: StateId) -> &str {
        &self.names[q]
    }
    fn state_sort(&self, q: StateId) -> Sort {
        Sort::Labeled(self.sort[q])
    }
    fn observation(&self, q: StateId) -> Omega {
        Omega::Label(self.label[q])
    }
    fn step(&self, q: StateId, d: Dir) -> Option<StateId> {
        self.step[q * self.sig.num_dirs() + d.0]
    }
    fn applicable(&self, q: StateId, d: Dir) -> bool {
        self.sig.dir_sort(d) == self.sort[q]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QAutomaton {
    sig: Arc<Signature>,
    names: Vec<String>,
    sort: Vec<Sort>,
    label: Vec<Option<LabelId>>,
    step: Vec<Option<StateId>>,
}

impl QAutomaton {
    pub fn new(sig: Arc<Signature>) -> Self {
        QAutomaton {
            sig,
            names: vec![],
            sort: vec![],
            label: vec![],
            step: vec![],
        }
    }

    pub fn add_state(&mut self, name: &str, sort: Sort, label: Option<LabelId>) -> Result<StateId> {
        check_new_name(&self.names, name)?;
        self.names.push(name.to_owned());
        self.sort.push(sort);
        self.label.push(label);
        self.step.extend(std::iter::repeat_n(None, self.sig.num_dirs()));
        Ok(self.names.len() - 1)
    }

    pub fn set_step(&mut self, q: StateId, d: Dir, target: StateId) {
        let k = self.sig.num_dirs();
        self.step[q * k + d.0] = Some(target);
    }

    pub fn clear_step(&mut self, q: StateId, d: Dir) {
        let k = self.sig.num_dirs();
        self.step[q * k + d.0] = None;
    }

    pub fn set_label(&mut self, q: StateId, label: Option<LabelId>) {
        self.label[q] = label;
    }

    pub fn sort_of(&self, q: StateId) -> Sort {
        self.sort[q]
    }

    pub fn label_of(&self, q: StateId) -> Option<LabelId> {
        self.label[q]
    }

    /// Successor of a valid automaton; panics on a missing transition.
    pub fn succ(&self, q: StateId, d: Dir) -> StateId {
        self.step[q * self.sig.num_dirs() + d.0].expect("Q-automaton transition must be total")
    }

    /// The one-state automaton whose single sink state loops on every direction.
    pub fn sink_only(sig: Arc<Signature>) -> Self {
        completion_k(&PAutomaton::new(sig))
    }

    /// Sub-automaton on the states marked in `keep`, in the original order,
    /// with its inclusion morphism. `keep` must be forward-closed.
    pub fn restrict(&self, keep: &[bool]) -> (QAutomaton, AutMorphism) {
        let mut index = vec![usize::MAX; self.num_states()];
        let mut out = QAutomaton::new(self.sig.clone());
        let mut incl = Vec::new();
        for q in (0..self.num_states()).filter(|&q| keep[q]) {
            index[q] = out.names.len();
            out.names.push(self.names[q].clone());
            out.sort.push(self.sort[q]);
            out.label.push(self.label[q]);
            incl.push(q);
        }
        let k = self.sig.num_dirs();
        out.step = vec![None; incl.len() * k];
        for (nq, &q) in incl.iter().enumerate() {
            for d in 0..k {
                out.step[nq * k + d] = self.step[q * k + d].map(|t| index[t]);
            }
        }
        debug_assert!(out.step.iter().all(|s| s.is_some_and(|t| t != usize::MAX)));
        (out, AutMorphism { map: incl })
    }
}

impl Automaton for QAutomaton {
    fn sig(&self) -> &Arc<Signature> {
        &self.sig
    }
    fn num_states(&self) -> usize {
        self.names.len()
    }
    fn state_name(&self, q: StateId) -> &str {
        &self.names[q]
    }
    fn state_sort(&self, q: StateId) -> Sort {
        self.sort[q]
    }
    fn observation(&self, q: StateId) -> Omega {
        match self.label[q] {
            Some(l) if !self.sort[q].is_sink() => Omega::Label(l),
            _ => Omega::Bot,
        }
    }
    fn step(&self, q: StateId, d: Dir) -> Option<StateId> {
        self.step[q * self.sig.num_dirs() + d.0]
    }
    fn applicable(&self, _q: StateId, _d: Dir) -> bool {
        true
    }
}

/// A state map between two automata of the same kind. The source and
/// target are supplied alongside the map wherever it is interpreted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AutMorphism {
    pub map: Vec<StateId>,
}

impl AutMorphism {
    pub fn identity(n: usize) -> Self {
        AutMorphism { map: (0..n).collect() }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &AutMorphism) -> AutMorphism {
        AutMorphism {
            map: self.map.iter().map(|&q| other.map[q]).collect(),
        }
    }

    pub fn apply(&self, q: StateId) -> StateId {
        self.map[q]
    }
}

/// Checks every [`PAutomaton`] invariant, reporting the first violation.
pub fn validate_p(aut: &PAutomaton) -> Result<()> {
    let sig = &aut.sig;
    let n = aut.num_states();
    for q in 0..n {
        let s = aut.sort[q];
        if s.0 >= sig.num_sorts() {
            return Err(Error::Invalid(format!("state {}: sort out of range", aut.names[q])));
        }
        if aut.label[q].0 >= sig.num_labels() || sig.label_sort(aut.label[q]) != s {
            return Err(Error::Invalid(format!(
                "state {}: label does not belong to sort {}",
                aut.names[q],
                sig.sort_name(s)
            )));
        }
        for d in sig.full_alphabet() {
            match (aut.applicable(q, d), aut.step(q, d)) {
                (true, None) => {
                    return Err(Error::Invalid(format!(
                        "state {}: missing transition on {}",
                        aut.names[q],
                        sig.dir_name(d)
                    )))
                }
                (false, Some(_)) => {
                    return Err(Error::Invalid(format!(
                        "state {}: direction outside sort's arity: {}",
                        aut.names[q],
                        sig.dir_name(d)
                    )))
                }
                (true, Some(t)) if t >= n => {
                    return Err(Error::Invalid(format!(
                        "state {}: transition on {} targets an unknown state",
                        aut.names[q],
                        sig.dir_name(d)
                    )))
                }
                _ => {}
            }
        }
    }
    Ok(())
}

/// Checks every [`QAutomaton`] invariant, reporting the first violation.
pub fn validate_q(aut: &QAutomaton) -> Result<()> {
    let sig = &aut.sig;
    let n = aut.num_states();
    for q in 0..n {
        let name = &aut.names[q];
        match (aut.sort[q], aut.label[q]) {
            (Sort::Sink, Some(_)) => {
                return Err(Error::Invalid(format!(
                    "state {name}: sink-sorted state carries a label"
                )))
            }
            (Sort::Labeled(_), None) => return Err(Error::Invalid(format!("state {name}: missing label"))),
            (Sort::Labeled(s), Some(l)) => {
                if s.0 >= sig.num_sorts() || l.0 >= sig.num_labels() || sig.label_sort(l) != s {
                    return Err(Error::Invalid(format!(
                        "state {name}: label does not belong to its sort"
                    )));
                }
            }
            (Sort::Sink, None) => {}
        }
        for d in sig.full_alphabet() {
            match aut.step(q, d) {
                None => {
                    return Err(Error::Invalid(format!(
                        "state {name}: missing transition on {}",
                        sig.dir_name(d)
                    )))
                }
                Some(t) if t >= n => {
                    return Err(Error::Invalid(format!(
                        "state {name}: transition on {} targets an unknown state",
                        sig.dir_name(d)
                    )))
                }
                _ => {}
            }
        }
    }
    Ok(())
}

/// Sort-, label- and transition-preservation for any automaton kind.
pub fn is_morphism<A: Automaton>(src: &A, tgt: &A, f: &AutMorphism) -> Result<bool> {
    if !same_sig(src.sig(), tgt.sig()) {
        return Err(Error::SignatureMismatch);
    }
    if f.map.len() != src.num_states() || f.map.iter().any(|&t| t >= tgt.num_states()) {
        return Ok(false);
    }
    let alphabet = src.sig().full_alphabet();
    for q in 0..src.num_states() {
        let fq = f.map[q];
        if src.state_sort(q) != tgt.state_sort(fq) || src.observation(q) != tgt.observation(fq) {
            return Ok(false);
        }
        for &d in &alphabet {
            if !src.applicable(q, d) {
                continue;
            }
            let (Some(a), Some(b)) = (src.step(q, d), tgt.step(fq, d)) else {
                return Ok(false);
            };
            if f.map[a] != b {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn is_morphism_p(src: &PAutomaton, tgt: &PAutomaton, f: &AutMorphism) -> Result<bool> {
    is_morphism(src, tgt, f)
}

pub fn is_morphism_q(src: &QAutomaton, tgt: &QAutomaton, f: &AutMorphism) -> Result<bool> {
    is_morphism(src, tgt, f)
}

/// The completion functor on objects: adds a fresh absorbing sink state
/// (always the last state) and sends every foreign direction to it.
pub fn completion_k(aut: &PAutomaton) -> QAutomaton {
    let sig = aut.sig.clone();
    let n = aut.num_states();
    let mut sink_name = SINK_STATE.to_owned();
    let mut suffix = 1;
    while aut.names.contains(&sink_name) {
        sink_name = format!("{SINK_STATE}{suffix}");
        suffix += 1;
    }
    let mut out = QAutomaton::new(sig.clone());
    out.names = aut.names.clone();
    out.names.push(sink_name);
    out.sort = aut.sort.iter().map(|&s| Sort::Labeled(s)).chain([Sort::Sink]).collect();
    out.label = aut.label.iter().map(|&l| Some(l)).chain([None]).collect();
    let k = sig.num_dirs();
    out.step = vec![Some(n); (n + 1) * k];
    for q in 0..n {
        for d in sig.dirs_of(aut.sort[q]) {
            out.step[q * k + d.0] = aut.step(q, d);
        }
    }
    out
}

/// The completion functor on arrows: `f ↦ f + 1` between `K(A)` and `K(B)`.
pub fn sink_extend(f: &AutMorphism, target_states: usize) -> AutMorphism {
    let mut map = f.map.clone();
    map.push(target_states);
    AutMorphism { map }
}

/// The reflector into P-automata, together with the partial index map
/// `states(aut) → states(L aut)` (sink-sorted states map to `None`).
pub fn reflect_l_indexed(aut: &QAutomaton) -> Result<(PAutomaton, Vec<Option<StateId>>)> {
    let report = crate::delta::delta_check(aut);
    if let Some(w) = report.witnesses.first() {
        return Err(Error::Precondition(format!(
            "not a delta-automaton: state {} direction {} reaches sort {}",
            aut.state_name(w.state),
            aut.sig.dir_name(w.dir),
            aut.sig.j_sort_name(w.target_sort)
        )));
    }
    let sig = aut.sig.clone();
    let mut index = vec![None; aut.num_states()];
    let mut out = PAutomaton::new(sig.clone());
    for q in 0..aut.num_states() {
        if let (Sort::Labeled(s), Some(l)) = (aut.sort[q], aut.label[q]) {
            index[q] = Some(out.names.len());
            out.names.push(aut.names[q].clone());
            out.sort.push(s);
            out.label.push(l);
        }
    }
    let k = sig.num_dirs();
    out.step = vec![None; out.names.len() * k];
    for (q, slot) in index.iter().enumerate() {
        let Some(nq) = *slot else { continue };
        for d in sig.dirs_of(out.sort[nq]) {
            let t = aut.step(q, d).and_then(|t| index[t]);
            debug_assert!(t.is_some());
            out.step[nq * k + d.0] = t;
        }
    }
    Ok((out, index))
}

/// Strips the sink sort of a delta-automaton.
pub fn reflect_l(aut: &QAutomaton) -> Result<PAutomaton> {
    reflect_l_indexed(aut).map(|(p, _)| p)
}

/// Every morphism `a → b`, found by enumerating sort- and
/// observation-preserving state maps and filtering with [`is_morphism`].
pub fn hom_enumerate<A: Automaton>(a: &A, b: &A, cap: u128) -> Result<Vec<AutMorphism>> {
    let mut out = Vec::new();
    hom_for_each(a, b, cap, |f| out.push(f.clone()))?;
    Ok(out)
}

pub fn hom_count<A: Automaton>(a: &A, b: &A, cap: u128) -> Result<usize> {
    let mut count = 0;
    hom_for_each(a, b, cap, |_| count += 1)?;
    Ok(count)
}

fn hom_for_each<A: Automaton>(a: &A, b: &A, cap: u128, mut visit: impl FnMut(&AutMorphism)) -> Result<()> {
    if !same_sig(a.sig(), b.sig()) {
        return Err(Error::SignatureMismatch);
    }
    let (na, nb) = (a.num_states(), b.num_states());
    let needed = (nb as u128).checked_pow(na as u32).unwrap_or(u128::MAX);
    if needed > cap {
        return Err(Error::BoundExceeded { needed, cap });
    }
    let candidates: Vec<Vec<StateId>> = (0..na)
        .map(|q| {
            (0..nb)
                .filter(|&t| a.state_sort(q) == b.state_sort(t) && a.observation(q) == b.observation(t))
                .collect()
        })
        .collect();
    if candidates.iter().any(|c| c.is_empty()) {
        return Ok(());
    }
    let mut digits = vec![0usize; na];
    let mut f = AutMorphism {
        map: candidates.iter().map(|c| c[0]).collect(),
    };
    loop {
        if is_morphism(a, b, &f)? {
            visit(&f);
        }
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == na {
                return Ok(());
            }
            digits[pos] += 1;
            if digits[pos] < candidates[pos].len() {
                f.map[pos] = candidates[pos][digits[pos]];
                break;
            }
            digits[pos] = 0;
            f.map[pos] = candidates[pos][0];
            pos += 1;
        }
    }
}

/// Decides whether two automata of the same kind are isomorphic, returning
/// a witnessing bijection.
pub fn find_isomorphism<A: Automaton>(a: &A, b: &A) -> Option<AutMorphism> {
    if !same_sig(a.sig(), b.sig()) || a.num_states() != b.num_states() {
        return None;
    }
    let n = a.num_states();
    let alphabet = a.sig().full_alphabet();
    let obs_key = |aut: &A, q| (aut.state_sort(q), aut.observation(q));
    let count = |aut: &A| {
        let mut m: HashMap<(Sort, Omega), usize> = HashMap::new();
        for q in 0..n {
            *m.entry(obs_key(aut, q)).or_default() += 1;
        }
        m
    };
    if count(a) != count(b) {
        return None;
    }

    // Assign `q ↦ t` and propagate along transitions; false on conflict.
    fn assign<A: Automaton>(
        a: &A,
        b: &A,
        alphabet: &[Dir],
        fwd: &mut [Option<StateId>],
        bwd: &mut [Option<StateId>],
        q: StateId,
        t: StateId,
    ) -> bool {
        let mut stack = vec![(q, t)];
        while let Some((q, t)) = stack.pop() {
            match (fwd[q], bwd[t]) {
                (Some(x), _) if x != t => return false,
                (_, Some(y)) if y != q => return false,
                (Some(_), _) => continue,
                _ => {}
            }
            if a.state_sort(q) != b.state_sort(t) || a.observation(q) != b.observation(t) {
                return false;
            }
            fwd[q] = Some(t);
            bwd[t] = Some(q);
            for &d in alphabet {
                if !a.applicable(q, d) {
                    continue;
                }
                match (a.step(q, d), b.step(t, d)) {
                    (Some(x), Some(y)) => stack.push((x, y)),
                    (None, None) => {}
                    _ => return false,
                }
            }
        }
        true
    }

    fn search<A: Automaton>(
        a: &A,
        b: &A,
        alphabet: &[Dir],
        fwd: Vec<Option<StateId>>,
        bwd: Vec<Option<StateId>>,
    ) -> Option<Vec<StateId>> {
        let Some(q) = fwd.iter().position(Option::is_none) else {
            return Some(fwd.into_iter().map(Option::unwrap).collect());
        };
        for t in (0..b.num_states()).filter(|&t| bwd[t].is_none()) {
            let (mut f2, mut b2) = (fwd.clone(), bwd.clone());
            if assign(a, b, alphabet, &mut f2, &mut b2, q, t) {
                if let Some(done) = search(a, b, alphabet, f2, b2) {
                    return Some(done);
                }
            }
        }
        None
    }

    search(a, b, &alphabet, vec![None; n], vec![None; n]).map(|map| AutMorphism { map })
}

pub fn is_isomorphic<A: Automaton>(a: &A, b: &A) -> bool {
    find_isomorphism(a, b).is_some()
}

/// States reachable from `start` (including it), as a membership mask.
pub fn reachable_from<A: Automaton>(aut: &A, start: StateId) -> Vec<bool> {
    let alphabet = aut.sig().full_alphabet();
    let mut seen = vec![false; aut.num_states()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(q) = stack.pop() {
        for &d in &alphabet {
            if let Some(t) = aut.step(q, d) {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
    }
    seen
}

/// Distinct state names, for constructing automata from generated data.
pub(crate) fn unique_names(raw: impl IntoIterator<Item = String>) -> Vec<String> {
    let mut used = HashSet::new();
    raw.into_iter()
        .map(|base| {
            let mut name = base.clone();
            let mut k = 1;
            while !used.insert(name.clone()) {
                name = format!("{base}_{k}");
                k += 1;
            }
            name
        })
        .collect()
}

impl QAutomaton {
    /// Assembles an automaton from parallel vectors; names are deduplicated.
    /// The result is not validated.
    pub(crate) fn from_parts(
        sig: Arc<Signature>,
        names: Vec<String>,
        sort: Vec<Sort>,
        label: Vec<Option<LabelId>>,
        step: Vec<Option<StateId>>,
    ) -> Self {
        QAutomaton {
            sig,
            names: unique_names(names),
            sort,
            label,
            step,
        }
    }
}
