//! Text formats for automata and morphisms.
//!
//! ```text
//! paut                                  qaut
//! state q sort 1 label f                state q sort 1 label f
//! trans q f1 q                          state _sink_ sort 0
//!                                       trans q f1 q
//!                                       trans q g1 _sink_
//!                                       ...
//! morph
//! map q1 -> q
//! ```
//!
//! The signature is never embedded; it is passed alongside. Parsing checks
//! only the grammar and name resolution, so structurally invalid automata
//! can still be read and then rejected by the validators.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::automata::{AutMorphism, Automaton, PAutomaton, QAutomaton, StateId};
use crate::error::{Error, Result};
use crate::signature::{Dir, Signature};
use crate::text::{expect_header, parse_err, token_lines};

/// Either automaton kind, as selected by the file header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyAutomaton {
    P(PAutomaton),
    Q(QAutomaton),
}

struct RawState<'a> {
    line: usize,
    name: &'a str,
    sort: &'a str,
    label: Option<&'a str>,
}

struct RawTrans<'a> {
    line: usize,
    from: &'a str,
    dir: &'a str,
    to: &'a str,
}

fn parse_body<'a>(text: &'a str, header: &str) -> Result<(Vec<RawState<'a>>, Vec<RawTrans<'a>>)> {
    let mut lines = token_lines(text);
    expect_header(&mut lines, header)?;
    let mut states = Vec::new();
    let mut trans = Vec::new();
    for (n, toks) in lines {
        match toks.as_slice() {
            ["state", name, "sort", sort, "label", label] => {
                if !trans.is_empty() {
                    return Err(parse_err(n, "state lines must precede trans lines"));
                }
                states.push(RawState {
                    line: n,
                    name,
                    sort,
                    label: Some(label),
                });
            }
            ["state", name, "sort", sort] => {
                if !trans.is_empty() {
                    return Err(parse_err(n, "state lines must precede trans lines"));
                }
                states.push(RawState {
                    line: n,
                    name,
                    sort,
                    label: None,
                });
            }
            ["trans", from, dir, to] => trans.push(RawTrans { line: n, from, dir, to }),
            _ => return Err(parse_err(n, format!("unrecognized line `{}`", toks.join(" ")))),
        }
    }
    Ok((states, trans))
}

fn resolve_trans<A: Automaton>(
    aut: &A,
    trans: &[RawTrans<'_>],
    mut set: impl FnMut(StateId, Dir, StateId),
) -> Result<()> {
    let sig = aut.sig().clone();
    let mut seen = std::collections::HashSet::new();
    for t in trans {
        let from = aut
            .state_by_name(t.from)
            .ok_or_else(|| parse_err(t.line, format!("unknown state `{}`", t.from)))?;
        let to = aut
            .state_by_name(t.to)
            .ok_or_else(|| parse_err(t.line, format!("unknown state `{}`", t.to)))?;
        let d = sig
            .dir_by_name(t.dir)
            .ok_or_else(|| parse_err(t.line, format!("unknown direction `{}`", t.dir)))?;
        if !seen.insert((from, d)) {
            return Err(parse_err(
                t.line,
                format!("duplicate transition for `{}` on `{}`", t.from, t.dir),
            ));
        }
        set(from, d, to);
    }
    Ok(())
}

fn line_err(line: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Parse { .. } => e,
        other => parse_err(line, other.to_string()),
    }
}

pub fn parse_paut(sig: &Arc<Signature>, text: &str) -> Result<PAutomaton> {
    let (states, trans) = parse_body(text, "paut")?;
    let mut aut = PAutomaton::new(sig.clone());
    for s in &states {
        let sort = sig
            .sort_by_name(s.sort)
            .ok_or_else(|| parse_err(s.line, format!("unknown sort `{}`", s.sort)))?;
        let label = s
            .label
            .ok_or_else(|| parse_err(s.line, "P-automaton states need a label"))?;
        let label = sig
            .label_by_name(label)
            .ok_or_else(|| parse_err(s.line, format!("unknown label `{label}`")))?;
        aut.add_state(s.name, sort, label).map_err(line_err(s.line))?;
    }
    let mut steps = Vec::new();
    resolve_trans(&aut, &trans, |q, d, t| steps.push((q, d, t)))?;
    for (q, d, t) in steps {
        aut.set_step(q, d, t);
    }
    Ok(aut)
}

pub fn parse_qaut(sig: &Arc<Signature>, text: &str) -> Result<QAutomaton> {
    let (states, trans) = parse_body(text, "qaut")?;
    let mut aut = QAutomaton::new(sig.clone());
    for s in &states {
        let sort = sig
            .j_sort_by_name(s.sort)
            .ok_or_else(|| parse_err(s.line, format!("unknown sort `{}`", s.sort)))?;
        let label = match s.label {
            Some(l) => Some(
                sig.label_by_name(l)
                    .ok_or_else(|| parse_err(s.line, format!("unknown label `{l}`")))?,
            ),
            None => None,
        };
        aut.add_state(s.name, sort, label).map_err(line_err(s.line))?;
    }
    let mut steps = Vec::new();
    resolve_trans(&aut, &trans, |q, d, t| steps.push((q, d, t)))?;
    for (q, d, t) in steps {
        aut.set_step(q, d, t);
    }
    Ok(aut)
}

/// Parses either kind, dispatching on the header line.
pub fn parse_automaton(sig: &Arc<Signature>, text: &str) -> Result<AnyAutomaton> {
    match token_lines(text).next() {
        Some((_, toks)) if toks == ["paut"] => parse_paut(sig, text).map(AnyAutomaton::P),
        Some((_, toks)) if toks == ["qaut"] => parse_qaut(sig, text).map(AnyAutomaton::Q),
        Some((n, _)) => Err(parse_err(n, "expected header `paut` or `qaut`")),
        None => Err(parse_err(1, "empty input")),
    }
}

fn render_trans<A: Automaton>(aut: &A, out: &mut String) {
    let sig = aut.sig();
    for q in 0..aut.num_states() {
        for d in sig.full_alphabet() {
            if let Some(t) = aut.step(q, d) {
                let _ = writeln!(
                    out,
                    "trans {} {} {}",
                    aut.state_name(q),
                    sig.dir_name(d),
                    aut.state_name(t)
                );
            }
        }
    }
}

pub fn render_paut(aut: &PAutomaton) -> String {
    let sig = aut.sig();
    let mut out = String::from("paut\n");
    for q in 0..aut.num_states() {
        let _ = writeln!(
            out,
            "state {} sort {} label {}",
            aut.state_name(q),
            sig.sort_name(aut.sort_of(q)),
            sig.label_name(aut.label_of(q))
        );
    }
    render_trans(aut, &mut out);
    out
}

pub fn render_qaut(aut: &QAutomaton) -> String {
    let sig = aut.sig();
    let mut out = String::from("qaut\n");
    for q in 0..aut.num_states() {
        let _ = write!(
            out,
            "state {} sort {}",
            aut.state_name(q),
            sig.j_sort_name(aut.sort_of(q))
        );
        if let Some(l) = aut.label_of(q) {
            let _ = write!(out, " label {}", sig.label_name(l));
        }
        out.push('\n');
    }
    render_trans(aut, &mut out);
    out
}

pub fn render_automaton(aut: &AnyAutomaton) -> String {
    match aut {
        AnyAutomaton::P(p) => render_paut(p),
        AnyAutomaton::Q(q) => render_qaut(q),
    }
}

/// Parses a `morph` file, resolving names against `src` and `tgt`.
/// Every source state must be mapped exactly once.
pub fn parse_morphism<A: Automaton>(src: &A, tgt: &A, text: &str) -> Result<AutMorphism> {
    let mut lines = token_lines(text);
    expect_header(&mut lines, "morph")?;
    let mut map: Vec<Option<StateId>> = vec![None; src.num_states()];
    for (n, toks) in lines {
        let ["map", from, "->", to] = toks.as_slice() else {
            return Err(parse_err(n, "expected `map <src> -> <dst>`"));
        };
        let q = src
            .state_by_name(from)
            .ok_or_else(|| parse_err(n, format!("unknown source state `{from}`")))?;
        let t = tgt
            .state_by_name(to)
            .ok_or_else(|| parse_err(n, format!("unknown target state `{to}`")))?;
        if map[q].replace(t).is_some() {
            return Err(parse_err(n, format!("state `{from}` mapped twice")));
        }
    }
    let map = map
        .into_iter()
        .enumerate()
        .map(|(q, t)| t.ok_or_else(|| Error::Invalid(format!("state `{}` is not mapped", src.state_name(q)))))
        .collect::<Result<_>>()?;
    Ok(AutMorphism { map })
}

pub fn render_morphism<A: Automaton, B: Automaton>(src: &A, tgt: &B, f: &AutMorphism) -> String {
    let mut out = String::from("morph\n");
    for (q, &t) in f.map.iter().enumerate() {
        let _ = writeln!(out, "map {} -> {}", src.state_name(q), tgt.state_name(t));
    }
    out
}

/// Graphviz rendering: one node per state labeled `name:sort:label`, one
/// edge per transition labeled with its direction.
pub fn automaton_dot<A: Automaton>(aut: &A) -> String {
    let sig = aut.sig();
    let mut out = String::from("digraph automaton {\n");
    for q in 0..aut.num_states() {
        let _ = writeln!(
            out,
            "  \"{name}\" [label=\"{name}:{sort}:{obs}\"];",
            name = aut.state_name(q),
            sort = sig.j_sort_name(aut.state_sort(q)),
            obs = sig.omega_token(aut.observation(q))
        );
    }
    for q in 0..aut.num_states() {
        for d in sig.full_alphabet() {
            if let Some(t) = aut.step(q, d) {
                let _ = writeln!(
                    out,
                    "  \"{}\" -> \"{}\" [label=\"{}\"];",
                    aut.state_name(q),
                    aut.state_name(t),
                    sig.dir_name(d)
                );
            }
        }
    }
    out.push_str("}\n");
    out
}
