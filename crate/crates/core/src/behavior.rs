//! Behaviors: elements of the final Q-coalgebra `Ω^{A*}`.
//!
//! A [`LazyTree`] is a complete `A`-branching tree labeled in `Ω`, evaluated
//! on demand. Trees come from a state of a Q-automaton ([`behavior`]), from a
//! user step function ([`unfold_tree`]), or are the constant `⊥` tree.
//! Equality of trees is only offered up to a depth ([`tree_eq_depth`]) or,
//! for automaton-backed trees, through [`bisimilar`].
//!
//! Step functions must be pure: the same seed must always expand the same
//! way. Expansions are memoized per unfolding.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::hash::Hash;
use std::sync::{Arc, Mutex};

use crate::automata::{same_sig, AutMorphism, Automaton, QAutomaton, StateId};
use crate::error::{Error, Result};
use crate::partition::coarsest_partition;
use crate::signature::{Dir, LabelId, Omega, Signature, Sort, SortId};

/// One expansion step of a P-coalgebra given pointwise: a sort, a label of
/// that sort, and one successor seed per direction of the sort (in
/// declaration order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion<S> {
    pub sort: SortId,
    pub label: LabelId,
    pub succ: Vec<S>,
}

#[derive(Clone)]
pub struct LazyTree {
    obs: Omega,
    sig: Arc<Signature>,
    node: Node,
}

#[derive(Clone)]
enum Node {
    Bot,
    Automaton { aut: Arc<QAutomaton>, state: StateId },
    Unfold { space: Arc<dyn SeedSpace>, seed: usize },
}

trait SeedSpace: Send + Sync {
    fn child(self: Arc<Self>, seed: usize, d: Dir) -> Result<LazyTree>;
}

type NodeKey = (usize, usize);

impl LazyTree {
    /// The tree labeled `⊥` everywhere.
    pub fn bot(sig: Arc<Signature>) -> Self {
        LazyTree {
            obs: Omega::Bot,
            sig,
            node: Node::Bot,
        }
    }

    pub fn sig(&self) -> &Arc<Signature> {
        &self.sig
    }

    /// Observation at the empty word.
    pub fn root(&self) -> Omega {
        self.obs
    }

    /// Subtree in direction `d`. Fails only for step-function trees whose
    /// step violates its contract.
    pub fn try_child(&self, d: Dir) -> Result<LazyTree> {
        match &self.node {
            Node::Bot => Ok(LazyTree::bot(self.sig.clone())),
            Node::Automaton { aut, state } => {
                let t = aut.succ(*state, d);
                Ok(LazyTree {
                    obs: aut.observation(t),
                    sig: self.sig.clone(),
                    node: Node::Automaton {
                        aut: aut.clone(),
                        state: t,
                    },
                })
            }
            Node::Unfold { space, seed } => space.clone().child(*seed, d),
        }
    }

    /// Like [`LazyTree::try_child`], panicking on a step-function contract
    /// violation.
    pub fn child(&self, d: Dir) -> LazyTree {
        self.try_child(d).unwrap_or_else(|e| panic!("{e}"))
    }

    /// Subtree rooted at `word`.
    pub fn try_subtree(&self, word: &[Dir]) -> Result<LazyTree> {
        let mut t = self.clone();
        for &d in word {
            t = t.try_child(d)?;
        }
        Ok(t)
    }

    /// `t(w)`.
    pub fn try_at(&self, word: &[Dir]) -> Result<Omega> {
        self.try_subtree(word).map(|t| t.obs)
    }

    pub fn at(&self, word: &[Dir]) -> Omega {
        self.try_at(word).unwrap_or_else(|e| panic!("{e}"))
    }

    /// Identity of the underlying node; equal keys mean equal subtrees.
    fn key(&self) -> NodeKey {
        match &self.node {
            Node::Bot => (0, 0),
            Node::Automaton { aut, state } => (Arc::as_ptr(aut) as usize, *state),
            Node::Unfold { space, seed } => (Arc::as_ptr(space) as *const () as usize, *seed),
        }
    }
}

impl std::fmt::Debug for LazyTree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LazyTree")
            .field("root", &self.obs)
            .finish_non_exhaustive()
    }
}

/// The image of `q` under the unique map into the final Q-coalgebra.
pub fn behavior(aut: &Arc<QAutomaton>, q: StateId) -> Result<LazyTree> {
    if q >= aut.num_states() {
        return Err(Error::Unknown {
            kind: "state",
            name: q.to_string(),
        });
    }
    Ok(LazyTree {
        obs: aut.observation(q),
        sig: aut.sig().clone(),
        node: Node::Automaton {
            aut: aut.clone(),
            state: q,
        },
    })
}

/// [`behavior`] with the state given by name.
pub fn behavior_named(aut: &Arc<QAutomaton>, name: &str) -> Result<LazyTree> {
    let q = aut.state_by_name(name).ok_or_else(|| Error::Unknown {
        kind: "state",
        name: name.to_owned(),
    })?;
    behavior(aut, q)
}

struct Unfolding<S, F> {
    sig: Arc<Signature>,
    step: F,
    memo: Mutex<Interner<S>>,
}

/// A seed's expansion with successors replaced by interned ids.
type Interned = Arc<(SortId, LabelId, Vec<usize>)>;

struct Interner<S> {
    ids: HashMap<S, usize>,
    seeds: Vec<S>,
    expanded: Vec<Option<Interned>>,
}

impl<S, F> Unfolding<S, F>
where
    S: Clone + Eq + Hash + Send + Sync + 'static,
    F: Fn(&S) -> Expansion<S> + Send + Sync + 'static,
{
    fn intern(&self, seed: S) -> usize {
        let mut memo = self.memo.lock().unwrap();
        if let Some(&id) = memo.ids.get(&seed) {
            return id;
        }
        let id = memo.seeds.len();
        memo.seeds.push(seed.clone());
        memo.expanded.push(None);
        memo.ids.insert(seed, id);
        id
    }

    fn expand(&self, id: usize) -> Result<Interned> {
        let seed = {
            let memo = self.memo.lock().unwrap();
            if let Some(e) = &memo.expanded[id] {
                return Ok(e.clone());
            }
            memo.seeds[id].clone()
        };
        let e = (self.step)(&seed);
        if e.sort.0 >= self.sig.num_sorts() {
            return Err(Error::Step(format!("sort index {} out of range", e.sort.0)));
        }
        if e.label.0 >= self.sig.num_labels() || self.sig.label_sort(e.label) != e.sort {
            return Err(Error::Step(format!(
                "label outside its declared sort {}",
                self.sig.sort_name(e.sort)
            )));
        }
        if e.succ.len() != self.sig.arity(e.sort) {
            return Err(Error::Step(format!(
                "{} successors given, sort {} has arity {}",
                e.succ.len(),
                self.sig.sort_name(e.sort),
                self.sig.arity(e.sort)
            )));
        }
        let succ = e.succ.into_iter().map(|s| self.intern(s)).collect();
        let out = Arc::new((e.sort, e.label, succ));
        self.memo.lock().unwrap().expanded[id] = Some(out.clone());
        Ok(out)
    }
}

fn unfold_node<S, F>(space: &Arc<Unfolding<S, F>>, id: usize) -> Result<LazyTree>
where
    S: Clone + Eq + Hash + Send + Sync + 'static,
    F: Fn(&S) -> Expansion<S> + Send + Sync + 'static,
{
    let e = space.expand(id)?;
    let sig = space.sig.clone();
    let space: Arc<dyn SeedSpace> = space.clone();
    Ok(LazyTree {
        obs: Omega::Label(e.1),
        sig,
        node: Node::Unfold { space, seed: id },
    })
}

impl<S, F> SeedSpace for Unfolding<S, F>
where
    S: Clone + Eq + Hash + Send + Sync + 'static,
    F: Fn(&S) -> Expansion<S> + Send + Sync + 'static,
{
    fn child(self: Arc<Self>, seed: usize, d: Dir) -> Result<LazyTree> {
        let e = self.expand(seed)?;
        if self.sig.dir_sort(d) != e.0 {
            return Ok(LazyTree::bot(self.sig.clone()));
        }
        let next = e.2[self.sig.local_dir_index(d)];
        unfold_node(&self, next)
    }
}

/// The anamorphism of a pointwise P-coalgebra into `Ω^{A*}`. The root seed
/// is expanded eagerly so that a bad root is reported here; deeper seeds
/// are expanded on demand.
pub fn unfold_tree<S, F>(sig: Arc<Signature>, step: F, seed: S) -> Result<LazyTree>
where
    S: Clone + Eq + Hash + Send + Sync + 'static,
    F: Fn(&S) -> Expansion<S> + Send + Sync + 'static,
{
    let space = Arc::new(Unfolding {
        sig,
        step,
        memo: Mutex::new(Interner {
            ids: HashMap::new(),
            seeds: Vec::new(),
            expanded: Vec::new(),
        }),
    });
    let id = space.intern(seed);
    unfold_node(&space, id)
}

/// Distinct subtrees at each level, up to node identity.
fn levels_dedup<T, K>(
    start: Vec<T>,
    depth: usize,
    key: impl Fn(&T) -> K,
    mut visit: impl FnMut(usize, &T) -> Option<Vec<T>>,
) -> bool
where
    K: Eq + Hash,
{
    let mut level = start;
    for k in 0..=depth {
        let mut seen = std::collections::HashSet::new();
        let mut next = Vec::new();
        for item in level {
            if !seen.insert(key(&item)) {
                continue;
            }
            match visit(k, &item) {
                None => return false,
                Some(children) if k < depth => next.extend(children),
                Some(_) => {}
            }
        }
        level = next;
    }
    true
}

/// `t1(w) = t2(w)` for every word of length at most `depth`.
/// Trees over different signatures are never equal.
pub fn tree_eq_depth(t1: &LazyTree, t2: &LazyTree, depth: usize) -> bool {
    if *t1.sig != *t2.sig {
        return false;
    }
    let alphabet = t1.sig.full_alphabet();
    levels_dedup(
        vec![(t1.clone(), t2.clone())],
        depth,
        |(a, b)| (a.key(), b.key()),
        |_, (a, b)| {
            if a.root() != b.root() {
                return None;
            }
            Some(alphabet.iter().map(|&d| (a.child(d), b.child(d))).collect())
        },
    )
}

/// Depth-bounded membership in the largest subcoalgebra of `Ω^{A*}` whose
/// nodes respect arities: below a node of sort `j`, exactly the directions
/// of `A_j` carry non-`⊥` labels, and below `⊥` everything is `⊥`. With
/// `require_root`, the root must also be labeled.
pub fn clause_check(t: &LazyTree, depth: usize, require_root: bool) -> bool {
    let sig = &*t.sig;
    if require_root && t.root() == Omega::Bot {
        return false;
    }
    if depth == 0 {
        return true;
    }
    let alphabet = sig.full_alphabet();
    levels_dedup(vec![t.clone()], depth - 1, LazyTree::key, |_, node| {
        let here = sig.omega_sort(node.root());
        let children: Vec<LazyTree> = alphabet.iter().map(|&d| node.child(d)).collect();
        for (&d, c) in alphabet.iter().zip(&children) {
            let labeled = c.root() != Omega::Bot;
            let want = matches!(here, Sort::Labeled(j) if j == sig.dir_sort(d));
            if labeled != want {
                return None;
            }
        }
        Some(children)
    })
}

/// Bisimilarity classes of the states of `aut`, numbered by first occurrence.
pub fn bisimulation_classes(aut: &QAutomaton) -> Vec<usize> {
    let n = aut.num_states();
    let k = aut.sig().num_dirs();
    let mut succ = Vec::with_capacity(n * k);
    for q in 0..n {
        succ.extend(aut.sig().full_alphabet().into_iter().map(|d| aut.succ(q, d)));
    }
    let output: Vec<Omega> = (0..n).map(|q| aut.observation(q)).collect();
    coarsest_partition(n, k, &succ, &output)
}

/// Bisimilarity classes of the disjoint union `a + b`; states of `b` are
/// offset by `|a|`.
pub fn joint_classes(a: &QAutomaton, b: &QAutomaton) -> Result<Vec<usize>> {
    if !same_sig(a.sig(), b.sig()) {
        return Err(Error::SignatureMismatch);
    }
    let (na, nb) = (a.num_states(), b.num_states());
    let alphabet = a.sig().full_alphabet();
    let mut succ = Vec::with_capacity((na + nb) * alphabet.len());
    for q in 0..na {
        succ.extend(alphabet.iter().map(|&d| a.succ(q, d)));
    }
    for q in 0..nb {
        succ.extend(alphabet.iter().map(|&d| na + b.succ(q, d)));
    }
    let output: Vec<Omega> = (0..na)
        .map(|q| a.observation(q))
        .chain((0..nb).map(|q| b.observation(q)))
        .collect();
    Ok(coarsest_partition(na + nb, alphabet.len(), &succ, &output))
}

/// Whether `qa` in `a` and `qb` in `b` have the same behavior.
pub fn bisimilar(a: &QAutomaton, qa: StateId, b: &QAutomaton, qb: StateId) -> Result<bool> {
    let classes = joint_classes(a, b)?;
    Ok(classes[qa] == classes[a.num_states() + qb])
}

/// Quotient by bisimilarity with its projection. Each class is named after
/// its first state.
pub fn minimize(aut: &QAutomaton) -> (QAutomaton, AutMorphism) {
    let classes = bisimulation_classes(aut);
    let m = classes.iter().copied().max().map_or(0, |x| x + 1);
    let mut rep = vec![usize::MAX; m];
    for (q, &c) in classes.iter().enumerate() {
        if rep[c] == usize::MAX {
            rep[c] = q;
        }
    }
    let sig = aut.sig().clone();
    let names = rep.iter().map(|&q| aut.state_name(q).to_owned()).collect();
    let sort = rep.iter().map(|&q| aut.sort_of(q)).collect();
    let label = rep.iter().map(|&q| aut.label_of(q)).collect();
    let mut step = Vec::with_capacity(m * sig.num_dirs());
    for &q in &rep {
        step.extend(sig.full_alphabet().into_iter().map(|d| Some(classes[aut.succ(q, d)])));
    }
    let out = QAutomaton::from_parts(sig, names, sort, label, step);
    (out, AutMorphism { map: classes })
}

/// Indented text rendering of the depth-`depth` truncation.
pub fn render_tree_text(t: &LazyTree, depth: usize) -> String {
    let sig = &*t.sig;
    fn go(t: &LazyTree, depth: usize, indent: usize, sig: &Signature, out: &mut String) {
        if depth == 0 {
            return;
        }
        for d in sig.full_alphabet() {
            let c = t.child(d);
            let _ = writeln!(
                out,
                "{:width$}{}: {}",
                "",
                sig.dir_name(d),
                sig.omega_token(c.root()),
                width = indent
            );
            go(&c, depth - 1, indent + 2, sig, out);
        }
    }
    let mut out = format!("{}\n", sig.omega_token(t.root()));
    go(t, depth, 2, sig, &mut out);
    out
}

/// Graphviz rendering of the depth-`depth` truncation: one node per word,
/// edges labeled with directions.
pub fn render_tree_dot(t: &LazyTree, depth: usize) -> String {
    let sig = &*t.sig;
    fn go(t: &LazyTree, id: usize, depth: usize, next: &mut usize, sig: &Signature, out: &mut String) {
        if depth == 0 {
            return;
        }
        for d in sig.full_alphabet() {
            let c = t.child(d);
            let cid = *next;
            *next += 1;
            let _ = writeln!(out, "  n{cid} [label=\"{}\"];", sig.omega_token(c.root()));
            let _ = writeln!(out, "  n{id} -> n{cid} [label=\"{}\"];", sig.dir_name(d));
            go(&c, cid, depth - 1, next, sig, out);
        }
    }
    let mut out = String::from("digraph tree {\n");
    let _ = writeln!(out, "  n0 [label=\"{}\"];", sig.omega_token(t.root()));
    let mut next = 1;
    go(t, 0, depth, &mut next, sig, &mut out);
    out.push_str("}\n");
    out
}
