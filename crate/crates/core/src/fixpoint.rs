//! Modal fixpoints on finite Kripke frames.
//!
//! Each sort `i` of a frame contributes an accessibility relation `Rᵢ`
//! (read as the modalities `□ᵢ`/`◇ᵢ`) and a valuation `Vᵢ` (where `Ωᵢ`
//! holds). The cofree operator `S ↦ νY.(S ∩ ⋂ᵢ □ᵢY)` is box over the
//! reflexive-transitive closure of `⋃ᵢ Rᵢ`.

use std::fmt::{self, Write as _};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::text::{check_name, expect_header, parse_err, token_lines};

/// A set of worlds, as a bit-vector over the frame's world order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WorldSet(FixedBitSet);

impl WorldSet {
    pub fn empty(n: usize) -> Self {
        WorldSet(FixedBitSet::with_capacity(n))
    }

    pub fn full(n: usize) -> Self {
        let mut s = FixedBitSet::with_capacity(n);
        s.insert_range(..);
        WorldSet(s)
    }

    pub fn from_worlds(n: usize, worlds: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(n);
        for w in worlds {
            s.insert(w);
        }
        s
    }

    pub fn insert(&mut self, w: usize) {
        self.0.insert(w);
    }

    pub fn contains(&self, w: usize) -> bool {
        self.0.contains(w)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn count(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn union(&self, other: &WorldSet) -> WorldSet {
        let mut s = self.0.clone();
        s.union_with(&other.0);
        WorldSet(s)
    }

    pub fn intersection(&self, other: &WorldSet) -> WorldSet {
        let mut s = self.0.clone();
        s.intersect_with(&other.0);
        WorldSet(s)
    }

    pub fn complement(&self) -> WorldSet {
        let mut s = self.0.clone();
        s.toggle_range(..);
        WorldSet(s)
    }

    pub fn is_subset(&self, other: &WorldSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

/// Least fixpoint of a monotone operator, iterating from the empty set.
pub fn lfp(worlds: usize, op: impl Fn(&WorldSet) -> WorldSet) -> Result<WorldSet> {
    iterate(WorldSet::empty(worlds), worlds, op)
}

/// Greatest fixpoint of a monotone operator, iterating from the full set.
pub fn gfp(worlds: usize, op: impl Fn(&WorldSet) -> WorldSet) -> Result<WorldSet> {
    iterate(WorldSet::full(worlds), worlds, op)
}

fn iterate(mut cur: WorldSet, worlds: usize, op: impl Fn(&WorldSet) -> WorldSet) -> Result<WorldSet> {
    // a monotone chain in a lattice of height `worlds` stabilizes within `worlds` steps
    for _ in 0..=worlds {
        let next = op(&cur);
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
    Err(Error::NotStable(worlds + 1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeFrame {
    worlds: Vec<String>,
    sorts: Vec<String>,
    succ: Vec<Vec<Vec<usize>>>,
    val: Vec<WorldSet>,
}

impl KripkeFrame {
    pub fn new<S: Into<String>>(worlds: impl IntoIterator<Item = S>, sorts: impl IntoIterator<Item = S>) -> Self {
        let worlds: Vec<String> = worlds.into_iter().map(Into::into).collect();
        let sorts: Vec<String> = sorts.into_iter().map(Into::into).collect();
        let n = worlds.len();
        KripkeFrame {
            succ: vec![vec![Vec::new(); n]; sorts.len()],
            val: vec![WorldSet::empty(n); sorts.len()],
            worlds,
            sorts,
        }
    }

    pub fn num_worlds(&self) -> usize {
        self.worlds.len()
    }

    pub fn num_sorts(&self) -> usize {
        self.sorts.len()
    }

    pub fn world_name(&self, w: usize) -> &str {
        &self.worlds[w]
    }

    pub fn world_by_name(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == name)
    }

    pub fn sort_by_name(&self, name: &str) -> Option<usize> {
        self.sorts.iter().position(|s| s == name)
    }

    fn check_sort(&self, i: usize) -> Result<()> {
        if i < self.sorts.len() {
            Ok(())
        } else {
            Err(Error::Unknown {
                kind: "sort",
                name: i.to_string(),
            })
        }
    }

    pub fn add_edge(&mut self, sort: usize, from: usize, to: usize) {
        if !self.succ[sort][from].contains(&to) {
            self.succ[sort][from].push(to);
            self.succ[sort][from].sort_unstable();
        }
    }

    pub fn set_valuation(&mut self, sort: usize, worlds: WorldSet) {
        self.val[sort] = worlds;
    }

    pub fn valuation(&self, sort: usize) -> &WorldSet {
        &self.val[sort]
    }

    pub fn all(&self) -> WorldSet {
        WorldSet::full(self.num_worlds())
    }

    /// `□ᵢS = {w : every Rᵢ-successor of w is in S}`.
    pub fn box_(&self, i: usize, s: &WorldSet) -> Result<WorldSet> {
        self.check_sort(i)?;
        let n = self.num_worlds();
        Ok(WorldSet::from_worlds(
            n,
            (0..n).filter(|&w| self.succ[i][w].iter().all(|&v| s.contains(v))),
        ))
    }

    /// `◇ᵢS = {w : some Rᵢ-successor of w is in S}`.
    pub fn dia(&self, i: usize, s: &WorldSet) -> Result<WorldSet> {
        self.check_sort(i)?;
        let n = self.num_worlds();
        Ok(WorldSet::from_worlds(
            n,
            (0..n).filter(|&w| self.succ[i][w].iter().any(|&v| s.contains(v))),
        ))
    }

    fn box_unchecked(&self, i: usize, s: &WorldSet) -> WorldSet {
        self.box_(i, s).expect("sort index in range")
    }

    fn dia_unchecked(&self, i: usize, s: &WorldSet) -> WorldSet {
        self.dia(i, s).expect("sort index in range")
    }

    /// `Ω_I = ⋃ᵢ Vᵢ`.
    pub fn labeled(&self) -> WorldSet {
        self.val
            .iter()
            .fold(WorldSet::empty(self.num_worlds()), |acc, v| acc.union(v))
    }

    /// `νY.(S ∩ ⋂ᵢ □ᵢY)`.
    pub fn cofree_box(&self, s: &WorldSet) -> Result<WorldSet> {
        gfp(self.num_worlds(), |y| {
            (0..self.num_sorts()).fold(s.clone(), |acc, i| acc.intersection(&self.box_unchecked(i, y)))
        })
    }

    /// `μY.(S ∪ ⋃ᵢ ◇ᵢY)`.
    pub fn dia_star(&self, s: &WorldSet) -> Result<WorldSet> {
        lfp(self.num_worlds(), |y| {
            (0..self.num_sorts()).fold(s.clone(), |acc, i| acc.union(&self.dia_unchecked(i, y)))
        })
    }

    /// The operator `X ↦ ⋃ᵢ (Vᵢ ∩ □ᵢX)` whose greatest fixpoint is the
    /// left side of [`segerberg_sides`].
    pub fn sum_operator(&self, x: &WorldSet) -> WorldSet {
        (0..self.num_sorts()).fold(WorldSet::empty(self.num_worlds()), |acc, i| {
            acc.union(&self.val[i].intersection(&self.box_unchecked(i, x)))
        })
    }

    pub fn format_set(&self, s: &WorldSet) -> String {
        let names: Vec<&str> = s.iter().map(|w| self.world_name(w)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Parses the `frame` format. Sorts are declared by an optional
    /// `sorts` line and otherwise on first use.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = token_lines(text);
        expect_header(&mut lines, "frame")?;
        let mut frame: Option<KripkeFrame> = None;
        for (n, toks) in lines {
            match toks[0] {
                "worlds" => {
                    if frame.is_some() {
                        return Err(parse_err(n, "duplicate `worlds` line"));
                    }
                    if toks.len() < 2 {
                        return Err(parse_err(n, "a frame needs at least one world"));
                    }
                    for (k, w) in toks[1..].iter().enumerate() {
                        check_name(n, w)?;
                        if toks[1..1 + k].contains(w) {
                            return Err(parse_err(n, format!("duplicate world `{w}`")));
                        }
                    }
                    frame = Some(KripkeFrame::new(toks[1..].iter().copied(), std::iter::empty()));
                }
                kw => {
                    let f = frame.as_mut().ok_or_else(|| parse_err(n, "`worlds` must come first"))?;
                    match (kw, toks.len()) {
                        ("sorts", _) => {
                            for s in &toks[1..] {
                                check_name(n, s)?;
                                if f.sort_by_name(s).is_some() {
                                    return Err(parse_err(n, format!("duplicate sort `{s}`")));
                                }
                                f.push_sort(s);
                            }
                        }
                        ("rel", 4) => {
                            let i = f.sort_or_declare(n, toks[1])?;
                            let a = f.world(n, toks[2])?;
                            let b = f.world(n, toks[3])?;
                            f.add_edge(i, a, b);
                        }
                        ("val", _) if toks.len() >= 2 => {
                            let i = f.sort_or_declare(n, toks[1])?;
                            for w in &toks[2..] {
                                let w = f.world(n, w)?;
                                f.val[i].insert(w);
                            }
                        }
                        _ => return Err(parse_err(n, format!("unrecognized line `{}`", toks.join(" ")))),
                    }
                }
            }
        }
        frame.ok_or_else(|| parse_err(1, "missing `worlds` line"))
    }

    fn push_sort(&mut self, name: &str) {
        self.sorts.push(name.to_owned());
        self.succ.push(vec![Vec::new(); self.num_worlds()]);
        self.val.push(WorldSet::empty(self.num_worlds()));
    }

    fn sort_or_declare(&mut self, line: usize, name: &str) -> Result<usize> {
        check_name(line, name)?;
        if let Some(i) = self.sort_by_name(name) {
            return Ok(i);
        }
        self.push_sort(name);
        Ok(self.sorts.len() - 1)
    }

    fn world(&self, line: usize, name: &str) -> Result<usize> {
        self.world_by_name(name)
            .ok_or_else(|| parse_err(line, format!("unknown world `{name}`")))
    }

    pub fn render(&self) -> String {
        let mut out = String::from("frame\n");
        let _ = writeln!(out, "worlds {}", self.worlds.join(" "));
        if !self.sorts.is_empty() {
            let _ = writeln!(out, "sorts {}", self.sorts.join(" "));
        }
        for (i, rel) in self.succ.iter().enumerate() {
            for (w, targets) in rel.iter().enumerate() {
                for &v in targets {
                    let _ = writeln!(out, "rel {} {} {}", self.sorts[i], self.worlds[w], self.worlds[v]);
                }
            }
        }
        for (i, v) in self.val.iter().enumerate() {
            if !v.is_empty() {
                let names: Vec<&str> = v.iter().map(|w| self.world_name(w)).collect();
                let _ = writeln!(out, "val {} {}", self.sorts[i], names.join(" "));
            }
        }
        out
    }
}

impl fmt::Display for KripkeFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Both sides of `νX.(⋁ᵢ(Ωᵢ ∧ □ᵢX)) = Ω_I ∧ ⋀ᵢ G̃(Ωᵢ → □ᵢΩ_I)`, with
/// Boolean implication.
pub fn segerberg_sides(frame: &KripkeFrame) -> Result<(WorldSet, WorldSet)> {
    let n = frame.num_worlds();
    let lhs = gfp(n, |x| frame.sum_operator(x))?;
    let labeled = frame.labeled();
    let mut rhs = labeled.clone();
    for i in 0..frame.num_sorts() {
        let local = frame.valuation(i).complement().union(&frame.box_(i, &labeled)?);
        rhs = rhs.intersection(&frame.cofree_box(&local)?);
    }
    Ok((lhs, rhs))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleReport {
    pub lhs: WorldSet,
    pub rhs: WorldSet,
    pub violated: bool,
}

/// Evaluates the diamond form of the two-sort equation:
/// `(Ω₁ ∧ Ω₂) ∨ ◇*(¬Ω₁ ∧ ◇₁(Ω₁ ∧ Ω₂)) ∨ ◇*(¬Ω₂ ∧ ◇₂(Ω₁ ∧ Ω₂))
///  ≤ μX.((Ω₁ ∨ ◇₁X) ∧ (Ω₂ ∨ ◇₂X))`.
pub fn counterexample_check(frame: &KripkeFrame) -> Result<CounterexampleReport> {
    if frame.num_sorts() != 2 {
        return Err(Error::Precondition(format!(
            "expected exactly 2 sorts, frame has {}",
            frame.num_sorts()
        )));
    }
    let (v1, v2) = (frame.valuation(0), frame.valuation(1));
    let both = v1.intersection(v2);
    let left1 = frame.dia_star(&v1.complement().intersection(&frame.dia(0, &both)?))?;
    let left2 = frame.dia_star(&v2.complement().intersection(&frame.dia(1, &both)?))?;
    let lhs = both.union(&left1).union(&left2);
    let rhs = lfp(frame.num_worlds(), |x| {
        v1.union(&frame.dia_unchecked(0, x))
            .intersection(&v2.union(&frame.dia_unchecked(1, x)))
    })?;
    let violated = !lhs.is_subset(&rhs);
    Ok(CounterexampleReport { lhs, rhs, violated })
}

/// Every frame on `worlds` worlds (named `w0, w1, ...`) and `sorts` sorts
/// (named `1, 2, ...`), over all relations and valuations.
pub fn all_frames(worlds: usize, sorts: usize) -> impl Iterator<Item = KripkeFrame> {
    let per_sort = worlds * worlds + worlds;
    let bits = per_sort * sorts;
    assert!(bits < 64, "frame space too large to enumerate");
    (0u64..1 << bits).map(move |code| {
        let mut f = KripkeFrame::new((0..worlds).map(|w| format!("w{w}")), (1..=sorts).map(|i| i.to_string()));
        for i in 0..sorts {
            let base = i * per_sort;
            for a in 0..worlds {
                for b in 0..worlds {
                    if code >> (base + a * worlds + b) & 1 == 1 {
                        f.add_edge(i, a, b);
                    }
                }
            }
            let v = WorldSet::from_worlds(
                worlds,
                (0..worlds).filter(|w| code >> (base + worlds * worlds + w) & 1 == 1),
            );
            f.set_valuation(i, v);
        }
        f
    })
}

/// First frame with at most `max_worlds` worlds on which the two sides of
/// [`segerberg_sides`] differ.
pub fn find_segerberg_disagreement(max_worlds: usize, sorts: usize) -> Option<KripkeFrame> {
    (1..=max_worlds).find_map(|n| {
        all_frames(n, sorts).find(|f| {
            let (l, r) = segerberg_sides(f).expect("monotone operators stabilize");
            l != r
        })
    })
}

/// The two-world frame `a →₁ b` with `Ω₁`, `Ω₂` holding at `b` only.
pub fn two_world_frame() -> KripkeFrame {
    KripkeFrame::parse(TWO_WORLD_FRAME).expect("built-in frame")
}

pub const TWO_WORLD_FRAME: &str = "frame\nworlds a b\nsorts 1 2\nrel 1 a b\nval 1 b\nval 2 b\n";
