//! Finite limits of Q-automata and P-automata.
//!
//! Q-automata are coalgebras over the slice of their behaviors, so a product
//! is the set of pairs of states with equal behavior, and equalizers are
//! computed pointwise. Limits of P-automata are obtained by completing,
//! taking the limit among Q-automata, coreflecting onto the delta part and
//! stripping the sink sort.

use crate::automata::{
    completion_k, is_morphism_p, is_morphism_q, reflect_l_indexed, sink_extend, AutMorphism, Automaton, PAutomaton,
    QAutomaton, StateId,
};
use crate::behavior::joint_classes;
use crate::delta::{coreflect_d, delta_check};
use crate::error::{Error, Result};

/// A limit cone: the apex and one projection per diagram vertex, in the
/// order the vertices were passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitResult<A> {
    pub limit: A,
    pub projections: Vec<AutMorphism>,
}

/// Builds the sub-automaton of `a × b` on `pairs`, which must be closed
/// under componentwise steps and pair bisimilar states.
fn pair_automaton(a: &QAutomaton, b: &QAutomaton, pairs: &[(StateId, StateId)]) -> LimitResult<QAutomaton> {
    let sig = a.sig().clone();
    let nb = b.num_states();
    let mut index = vec![usize::MAX; a.num_states() * nb];
    for (k, &(x, y)) in pairs.iter().enumerate() {
        index[x * nb + y] = k;
    }
    let names = pairs
        .iter()
        .map(|&(x, y)| format!("{}_{}", a.state_name(x), b.state_name(y)))
        .collect();
    let sort = pairs.iter().map(|&(x, _)| a.sort_of(x)).collect();
    let label = pairs.iter().map(|&(x, _)| a.label_of(x)).collect();
    let mut step = Vec::with_capacity(pairs.len() * sig.num_dirs());
    for &(x, y) in pairs {
        for d in sig.full_alphabet() {
            let t = index[a.succ(x, d) * nb + b.succ(y, d)];
            debug_assert_ne!(t, usize::MAX, "pair carrier not forward-closed");
            step.push(Some(t));
        }
    }
    let limit = QAutomaton::from_parts(sig, names, sort, label, step);
    let projections = vec![
        AutMorphism {
            map: pairs.iter().map(|p| p.0).collect(),
        },
        AutMorphism {
            map: pairs.iter().map(|p| p.1).collect(),
        },
    ];
    LimitResult { limit, projections }
}

/// Product in Q-automata: pairs of states with equal behavior.
pub fn product_q(a: &QAutomaton, b: &QAutomaton) -> Result<LimitResult<QAutomaton>> {
    let classes = joint_classes(a, b)?;
    let na = a.num_states();
    let pairs: Vec<(StateId, StateId)> = (0..na)
        .flat_map(|x| (0..b.num_states()).map(move |y| (x, y)))
        .filter(|&(x, y)| classes[x] == classes[na + y])
        .collect();
    Ok(pair_automaton(a, b, &pairs))
}

fn require_q_morphism(src: &QAutomaton, tgt: &QAutomaton, f: &AutMorphism, what: &str) -> Result<()> {
    if is_morphism_q(src, tgt, f)? {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{what} is not a Q-automaton morphism")))
    }
}

fn require_p_morphism(src: &PAutomaton, tgt: &PAutomaton, f: &AutMorphism, what: &str) -> Result<()> {
    if is_morphism_p(src, tgt, f)? {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{what} is not a P-automaton morphism")))
    }
}

/// Equalizer of `f, g : a → b`. Projections go to `a` and `b`.
pub fn equalizer_q(
    a: &QAutomaton,
    b: &QAutomaton,
    f: &AutMorphism,
    g: &AutMorphism,
) -> Result<LimitResult<QAutomaton>> {
    require_q_morphism(a, b, f, "first arrow")?;
    require_q_morphism(a, b, g, "second arrow")?;
    let keep: Vec<bool> = (0..a.num_states()).map(|q| f.map[q] == g.map[q]).collect();
    let (limit, incl) = a.restrict(&keep);
    let to_b = incl.then(f);
    Ok(LimitResult {
        limit,
        projections: vec![incl, to_b],
    })
}

/// Pullback of `f : a → c` and `g : b → c`. Projections go to `a`, `b`, `c`.
pub fn pullback_q(
    a: &QAutomaton,
    b: &QAutomaton,
    c: &QAutomaton,
    f: &AutMorphism,
    g: &AutMorphism,
) -> Result<LimitResult<QAutomaton>> {
    require_q_morphism(a, c, f, "first arrow")?;
    require_q_morphism(b, c, g, "second arrow")?;
    let classes = joint_classes(a, b)?;
    let na = a.num_states();
    let pairs: Vec<(StateId, StateId)> = (0..na)
        .flat_map(|x| (0..b.num_states()).map(move |y| (x, y)))
        .filter(|&(x, y)| classes[x] == classes[na + y] && f.map[x] == g.map[y])
        .collect();
    let mut out = pair_automaton(a, b, &pairs);
    let to_c = out.projections[0].then(f);
    out.projections.push(to_c);
    Ok(out)
}

/// Transports a Q-limit over completed P-automata back to P-automata:
/// coreflect, strip the sink sort, and turn each projection into K(Aₖ)
/// into a projection into Aₖ.
fn back_to_p(q: LimitResult<QAutomaton>) -> Result<LimitResult<PAutomaton>> {
    let (d, emb) = coreflect_d(&q.limit);
    let (limit, index) = reflect_l_indexed(&d)?;
    let mut from_l = vec![0; limit.num_states()];
    for (ds, slot) in index.iter().enumerate() {
        if let Some(ls) = slot {
            from_l[*ls] = emb.map[ds];
        }
    }
    // labeled states of K(A) are exactly the states of A, at the same index
    let projections = q
        .projections
        .iter()
        .map(|p| AutMorphism {
            map: from_l.iter().map(|&s| p.map[s]).collect(),
        })
        .collect();
    Ok(LimitResult { limit, projections })
}

/// Product in P-automata, computed as `L(D(K a × K b))`.
pub fn product_p(a: &PAutomaton, b: &PAutomaton) -> Result<LimitResult<PAutomaton>> {
    let q = product_q(&completion_k(a), &completion_k(b))?;
    back_to_p(q)
}

/// Equalizer of `f, g : a → b` in P-automata, computed as
/// `L(D(eq(K f, K g)))`. Projections go to `a` and `b`.
pub fn equalizer_p(
    a: &PAutomaton,
    b: &PAutomaton,
    f: &AutMorphism,
    g: &AutMorphism,
) -> Result<LimitResult<PAutomaton>> {
    require_p_morphism(a, b, f, "first arrow")?;
    require_p_morphism(a, b, g, "second arrow")?;
    let (ka, kb) = (completion_k(a), completion_k(b));
    let nb = b.num_states();
    let q = equalizer_q(&ka, &kb, &sink_extend(f, nb), &sink_extend(g, nb))?;
    // a sub-automaton of a delta-automaton is already delta
    assert!(
        delta_check(&q.limit).verdict,
        "equalizer of completed automata left the delta subcategory"
    );
    back_to_p(q)
}
