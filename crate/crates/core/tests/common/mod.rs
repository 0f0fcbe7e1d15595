//! Exhaustive and seeded generators of automata, plus brute-force oracles
//! that share no code with the library's algorithms.
#![allow(dead_code, clippy::needless_range_loop)]

use std::sync::Arc;

use coalg::{Automaton, Dir, LabelId, Omega, PAutomaton, QAutomaton, Signature, Sort, SortId};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[allow(unused_imports)]
pub use coalg::fixtures::sig_fg;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Mixed-radix counter over `radices`; yields every digit vector once.
pub fn odometer(radices: Vec<usize>) -> impl Iterator<Item = Vec<usize>> {
    let total: usize = radices.iter().product();
    (0..total).map(move |mut code| {
        radices
            .iter()
            .map(|&r| {
                let digit = code % r;
                code /= r;
                digit
            })
            .collect()
    })
}

fn all_labels(sig: &Signature) -> Vec<LabelId> {
    (0..sig.num_labels()).map(LabelId).collect()
}

/// Every P-automaton with exactly `n` states named `s0, s1, ...`.
pub fn all_p(sig: &Arc<Signature>, n: usize) -> impl Iterator<Item = PAutomaton> {
    let sig = sig.clone();
    let labels = all_labels(&sig);
    let mut radices = vec![labels.len(); n];
    let max_arity = sig.sort_ids().map(|s| sig.arity(s)).max().unwrap_or(0);
    radices.extend(std::iter::repeat_n(n, n * max_arity));
    odometer(if n == 0 { vec![] } else { radices }).filter_map(move |digits| {
        let mut a = PAutomaton::new(sig.clone());
        for q in 0..n {
            let l = labels[digits[q]];
            a.add_state(&format!("s{q}"), sig.label_sort(l), l).unwrap();
        }
        for q in 0..n {
            let dirs: Vec<Dir> = sig.dirs_of(a.sort_of(q)).collect();
            for k in 0..max_arity {
                let digit = digits[n + q * max_arity + k];
                match dirs.get(k) {
                    Some(&d) => a.set_step(q, d, digit),
                    // unused digit: keep one representative
                    None if digit != 0 => return None,
                    None => {}
                }
            }
        }
        Some(a)
    })
}

pub fn all_p_upto(sig: &Arc<Signature>, n: usize) -> impl Iterator<Item = PAutomaton> {
    let sig = sig.clone();
    (0..=n).flat_map(move |k| all_p(&sig, k))
}

/// Every Q-automaton with exactly `n` states named `s0, s1, ...`.
pub fn all_q(sig: &Arc<Signature>, n: usize) -> impl Iterator<Item = QAutomaton> {
    let sig = sig.clone();
    let labels = all_labels(&sig);
    let k = sig.num_dirs();
    let mut radices = vec![labels.len() + 1; n];
    radices.extend(std::iter::repeat_n(n, n * k));
    odometer(if n == 0 { vec![] } else { radices }).map(move |digits| {
        let mut a = QAutomaton::new(sig.clone());
        for q in 0..n {
            match digits[q] {
                0 => a.add_state(&format!("s{q}"), Sort::Sink, None),
                l => {
                    let l = labels[l - 1];
                    a.add_state(&format!("s{q}"), Sort::Labeled(sig.label_sort(l)), Some(l))
                }
            }
            .unwrap();
        }
        for q in 0..n {
            for d in 0..k {
                a.set_step(q, Dir(d), digits[n + q * k + d]);
            }
        }
        a
    })
}

pub fn all_q_upto(sig: &Arc<Signature>, n: usize) -> impl Iterator<Item = QAutomaton> {
    let sig = sig.clone();
    (0..=n).flat_map(move |k| all_q(&sig, k))
}

/// A signature with `sorts` sorts named `1..`, each with one or two labels
/// and one or two directions.
pub fn random_sig(rng: &mut impl Rng, sorts: usize) -> Arc<Signature> {
    let decls: Vec<(String, Vec<String>, Vec<String>)> = (1..=sorts)
        .map(|i| {
            let labels = (0..rng.gen_range(1..=2)).map(|k| format!("l{i}_{k}")).collect();
            let dirs = (0..rng.gen_range(1..=2)).map(|k| format!("d{i}_{k}")).collect();
            (i.to_string(), labels, dirs)
        })
        .collect();
    let borrowed: Vec<(String, Vec<&str>, Vec<&str>)> = decls
        .iter()
        .map(|(s, l, d)| {
            (
                s.clone(),
                l.iter().map(String::as_str).collect(),
                d.iter().map(String::as_str).collect(),
            )
        })
        .collect();
    let args: Vec<(&str, &[&str], &[&str])> = borrowed
        .iter()
        .map(|(s, l, d)| (s.as_str(), l.as_slice(), d.as_slice()))
        .collect();
    Arc::new(Signature::new(&args).unwrap())
}

pub fn random_p(rng: &mut impl Rng, sig: &Arc<Signature>, n: usize) -> PAutomaton {
    let labels = all_labels(sig);
    let mut a = PAutomaton::new(sig.clone());
    for q in 0..n {
        let l = *labels.choose(rng).unwrap();
        a.add_state(&format!("s{q}"), sig.label_sort(l), l).unwrap();
    }
    for q in 0..n {
        for d in sig.dirs_of(a.sort_of(q)) {
            a.set_step(q, d, rng.gen_range(0..n));
        }
    }
    a
}

pub fn random_q(rng: &mut impl Rng, sig: &Arc<Signature>, n: usize) -> QAutomaton {
    let labels = all_labels(sig);
    let mut a = QAutomaton::new(sig.clone());
    for q in 0..n {
        if rng.gen_bool(0.25) {
            a.add_state(&format!("s{q}"), Sort::Sink, None).unwrap();
        } else {
            let l = *labels.choose(rng).unwrap();
            a.add_state(&format!("s{q}"), Sort::Labeled(sig.label_sort(l)), Some(l))
                .unwrap();
        }
    }
    for q in 0..n {
        for d in sig.full_alphabet() {
            a.set_step(q, d, rng.gen_range(0..n));
        }
    }
    a
}

/// A delta-automaton: a completed P-automaton with `extra` further sink
/// states, all of which loop among the sinks.
pub fn random_delta_q(rng: &mut impl Rng, sig: &Arc<Signature>, n: usize, extra: usize) -> QAutomaton {
    let p = random_p(rng, sig, n);
    let mut a = QAutomaton::new(sig.clone());
    for q in 0..n {
        a.add_state(&format!("s{q}"), Sort::Labeled(p.sort_of(q)), Some(p.label_of(q)))
            .unwrap();
    }
    for e in 0..=extra {
        a.add_state(&format!("z{e}"), Sort::Sink, None).unwrap();
    }
    let sinks: Vec<usize> = (n..=n + extra).collect();
    for q in 0..n + extra + 1 {
        for d in sig.full_alphabet() {
            let t = match q < n && sig.dir_sort(d) == p.sort_of(q) {
                true => p.step(q, d).unwrap(),
                false => *sinks.choose(rng).unwrap(),
            };
            a.set_step(q, d, t);
        }
    }
    a
}

/// Brute-force morphism test straight from the definition.
pub fn oracle_is_morphism<A: Automaton>(a: &A, b: &A, f: &[usize]) -> bool {
    let sig = a.sig();
    (0..a.num_states()).all(|q| {
        a.state_sort(q) == b.state_sort(f[q])
            && a.observation(q) == b.observation(f[q])
            && sig.full_alphabet().into_iter().all(|d| match a.step(q, d) {
                Some(t) => b.step(f[q], d) == Some(f[t]),
                None => true,
            })
    })
}

/// Every morphism `a → b`, by trying all `|B|^|A|` maps.
pub fn oracle_homs<A: Automaton>(a: &A, b: &A) -> Vec<Vec<usize>> {
    let (n, m) = (a.num_states(), b.num_states());
    if n == 0 {
        return vec![vec![]];
    }
    if m == 0 {
        return vec![];
    }
    odometer(vec![m; n]).filter(|f| oracle_is_morphism(a, b, f)).collect()
}

/// Local delta condition, spelled out case by case.
pub fn oracle_delta(a: &QAutomaton) -> bool {
    let sig = a.sig();
    (0..a.num_states()).all(|q| {
        sig.full_alphabet().into_iter().all(|d| {
            let t = a.sort_of(a.succ(q, d));
            match a.sort_of(q) {
                Sort::Sink => t == Sort::Sink,
                Sort::Labeled(j) if j == sig.dir_sort(d) => t != Sort::Sink,
                Sort::Labeled(_) => t == Sort::Sink,
            }
        })
    })
}

/// Greatest bisimulation between `a` and `b` by repeatedly deleting pairs
/// with different observations or non-related successors.
pub fn oracle_bisim(a: &QAutomaton, b: &QAutomaton) -> Vec<Vec<bool>> {
    let alphabet = a.sig().full_alphabet();
    let mut rel: Vec<Vec<bool>> = (0..a.num_states())
        .map(|x| {
            (0..b.num_states())
                .map(|y| a.observation(x) == b.observation(y))
                .collect()
        })
        .collect();
    loop {
        let mut changed = false;
        for x in 0..a.num_states() {
            for y in 0..b.num_states() {
                if rel[x][y] && alphabet.iter().any(|&d| !rel[a.succ(x, d)][b.succ(y, d)]) {
                    rel[x][y] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return rel;
        }
    }
}

/// Observation of the state reached from `q` along `word`.
pub fn oracle_obs(a: &QAutomaton, q: usize, word: &[Dir]) -> Omega {
    a.observation(word.iter().fold(q, |s, &d| a.succ(s, d)))
}

pub fn sort_ids(sig: &Signature) -> Vec<SortId> {
    sig.sort_ids().collect()
}
