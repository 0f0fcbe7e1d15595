//! Signatures of finitary polynomial functors `P(X) = Σᵢ Ωᵢ × X^{Aᵢ}`.
//!
//! A [`Signature`] records the sorts `I`, and for every sort its operation
//! labels `Ωᵢ` and its directions `Aᵢ`. The derived alphabet `A = Σᵢ Aᵢ`
//! and label set `Ω = {⊥} + Σᵢ Ωᵢ` are exposed through global indices
//! ([`Dir`], [`LabelId`]) laid out in declaration order.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::text::{check_name, expect_header, parse_err, token_lines};

/// Name reserved for the sink sort.
pub const SINK_SORT: &str = "0";
/// Token used for the sink label `⊥` in files and DOT output.
pub const BOT_TOKEN: &str = "_bot_";

/// Index of a sort in `I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SortId(pub usize);

/// Index of a direction in the full alphabet `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dir(pub usize);

/// Index of a label in `Σᵢ Ωᵢ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelId(pub usize);

/// A sort in `J = {0} ∪ I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Sink,
    Labeled(SortId),
}

impl Sort {
    pub fn is_sink(self) -> bool {
        matches!(self, Sort::Sink)
    }
}

/// An element of `Ω`: either the sink label or a signature label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Omega {
    Bot,
    Label(LabelId),
}

/// A finite word over the full alphabet.
pub type Word = Vec<Dir>;

#[derive(Debug, Clone, PartialEq, Eq)]
struct SortDecl {
    name: String,
    labels: Vec<String>,
    dirs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    sorts: Vec<SortDecl>,
    label_sort: Vec<SortId>,
    label_name: Vec<String>,
    dir_sort: Vec<SortId>,
    dir_name: Vec<String>,
    label_start: Vec<usize>,
    dir_start: Vec<usize>,
}

impl Signature {
    /// Builds a signature from `(sort, labels, dirs)` triples, checking all
    /// naming invariants.
    pub fn new<S: AsRef<str>>(sorts: &[(S, &[S], &[S])]) -> Result<Self> {
        let decls = sorts
            .iter()
            .map(|(name, labels, dirs)| SortDecl {
                name: name.as_ref().to_owned(),
                labels: labels.iter().map(|s| s.as_ref().to_owned()).collect(),
                dirs: dirs.iter().map(|s| s.as_ref().to_owned()).collect(),
            })
            .collect();
        Self::from_decls(decls, 0)
    }

    fn from_decls(sorts: Vec<SortDecl>, line: usize) -> Result<Self> {
        if sorts.is_empty() {
            return Err(parse_err(line, "signature declares no sorts"));
        }
        let mut seen_sorts = HashSet::new();
        let mut seen_labels = HashSet::new();
        let mut seen_dirs = HashSet::new();
        let mut sig = Signature {
            sorts: Vec::new(),
            label_sort: Vec::new(),
            label_name: Vec::new(),
            dir_sort: Vec::new(),
            dir_name: Vec::new(),
            label_start: Vec::new(),
            dir_start: Vec::new(),
        };
        for (i, decl) in sorts.iter().enumerate() {
            check_name(line, &decl.name)?;
            if decl.name == SINK_SORT {
                return Err(Error::Duplicate {
                    kind: "sort (reserved)",
                    name: decl.name.clone(),
                });
            }
            if !seen_sorts.insert(decl.name.as_str()) {
                return Err(Error::Duplicate {
                    kind: "sort",
                    name: decl.name.clone(),
                });
            }
            if decl.labels.is_empty() || decl.dirs.is_empty() {
                return Err(Error::EmptySort(decl.name.clone()));
            }
            sig.label_start.push(sig.label_name.len());
            sig.dir_start.push(sig.dir_name.len());
            for l in &decl.labels {
                check_name(line, l)?;
                if l == BOT_TOKEN {
                    return Err(Error::Duplicate {
                        kind: "label (reserved)",
                        name: l.clone(),
                    });
                }
                if !seen_labels.insert(l.as_str()) {
                    return Err(Error::Duplicate {
                        kind: "label",
                        name: l.clone(),
                    });
                }
                sig.label_sort.push(SortId(i));
                sig.label_name.push(l.clone());
            }
            for d in &decl.dirs {
                check_name(line, d)?;
                if !seen_dirs.insert(d.as_str()) {
                    return Err(Error::Duplicate {
                        kind: "direction",
                        name: d.clone(),
                    });
                }
                sig.dir_sort.push(SortId(i));
                sig.dir_name.push(d.clone());
            }
        }
        sig.sorts = sorts;
        Ok(sig)
    }

    /// Parses the line-based signature format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = token_lines(text);
        expect_header(&mut lines, "sig")?;
        let mut decls: Vec<SortDecl> = Vec::new();
        let mut last_line = 1;
        // expected next keyword: "sort", "labels" or "dirs"
        let mut phase = 0;
        for (n, toks) in lines {
            last_line = n;
            match (phase, toks[0]) {
                (0, "sort") => {
                    if toks.len() != 2 {
                        return Err(parse_err(n, "expected `sort <name>`"));
                    }
                    decls.push(SortDecl {
                        name: toks[1].to_owned(),
                        labels: vec![],
                        dirs: vec![],
                    });
                    phase = 1;
                }
                (1, "labels") => {
                    if toks.len() < 2 {
                        return Err(Error::EmptySort(decls.last().unwrap().name.clone()));
                    }
                    decls.last_mut().unwrap().labels = toks[1..].iter().map(|s| s.to_string()).collect();
                    phase = 2;
                }
                (2, "dirs") => {
                    if toks.len() < 2 {
                        return Err(Error::EmptySort(decls.last().unwrap().name.clone()));
                    }
                    decls.last_mut().unwrap().dirs = toks[1..].iter().map(|s| s.to_string()).collect();
                    phase = 0;
                }
                (p, kw) => {
                    let want = ["sort", "labels", "dirs"][p];
                    return Err(parse_err(n, format!("expected `{want}`, found `{kw}`")));
                }
            }
            for t in &toks[1..] {
                check_name(n, t)?;
            }
        }
        if phase != 0 {
            return Err(Error::EmptySort(decls.last().unwrap().name.clone()));
        }
        Self::from_decls(decls, last_line)
    }

    /// Serializes in the format accepted by [`Signature::parse`].
    pub fn render(&self) -> String {
        let mut out = String::from("sig\n");
        for s in &self.sorts {
            let _ = writeln!(out, "sort {}", s.name);
            let _ = writeln!(out, "labels {}", s.labels.join(" "));
            let _ = writeln!(out, "dirs {}", s.dirs.join(" "));
        }
        out
    }

    pub fn num_sorts(&self) -> usize {
        self.sorts.len()
    }

    pub fn sort_ids(&self) -> impl Iterator<Item = SortId> + '_ {
        (0..self.sorts.len()).map(SortId)
    }

    pub fn sort_name(&self, s: SortId) -> &str {
        &self.sorts[s.0].name
    }

    pub fn sort_by_name(&self, name: &str) -> Option<SortId> {
        self.sorts.iter().position(|s| s.name == name).map(SortId)
    }

    /// Resolves a sort of `J`; `"0"` is the sink sort.
    pub fn j_sort_by_name(&self, name: &str) -> Option<Sort> {
        if name == SINK_SORT {
            Some(Sort::Sink)
        } else {
            self.sort_by_name(name).map(Sort::Labeled)
        }
    }

    pub fn j_sort_name(&self, s: Sort) -> &str {
        match s {
            Sort::Sink => SINK_SORT,
            Sort::Labeled(i) => self.sort_name(i),
        }
    }

    /// Size of `A = Σᵢ Aᵢ`.
    pub fn num_dirs(&self) -> usize {
        self.dir_name.len()
    }

    /// Size of `Σᵢ Ωᵢ` (without `⊥`).
    pub fn num_labels(&self) -> usize {
        self.label_name.len()
    }

    /// The full alphabet in canonical order: sort order, then declaration order.
    pub fn full_alphabet(&self) -> Vec<Dir> {
        (0..self.dir_name.len()).map(Dir).collect()
    }

    /// Directions of a single sort, `Aᵢ`.
    pub fn dirs_of(&self, s: SortId) -> impl Iterator<Item = Dir> + Clone {
        let start = self.dir_start[s.0];
        (start..start + self.sorts[s.0].dirs.len()).map(Dir)
    }

    pub fn arity(&self, s: SortId) -> usize {
        self.sorts[s.0].dirs.len()
    }

    /// Position of `d` inside `A_{sort(d)}`.
    pub fn local_dir_index(&self, d: Dir) -> usize {
        d.0 - self.dir_start[self.dir_sort[d.0].0]
    }

    pub fn labels_of(&self, s: SortId) -> impl Iterator<Item = LabelId> + Clone {
        let start = self.label_start[s.0];
        (start..start + self.sorts[s.0].labels.len()).map(LabelId)
    }

    pub fn dir_sort(&self, d: Dir) -> SortId {
        self.dir_sort[d.0]
    }

    pub fn dir_name(&self, d: Dir) -> &str {
        &self.dir_name[d.0]
    }

    pub fn dir_by_name(&self, name: &str) -> Option<Dir> {
        self.dir_name.iter().position(|n| n == name).map(Dir)
    }

    pub fn label_sort(&self, l: LabelId) -> SortId {
        self.label_sort[l.0]
    }

    pub fn label_name(&self, l: LabelId) -> &str {
        &self.label_name[l.0]
    }

    pub fn label_by_name(&self, name: &str) -> Option<LabelId> {
        self.label_name.iter().position(|n| n == name).map(LabelId)
    }

    /// `|Ω| = 1 + Σᵢ |Ωᵢ|`.
    pub fn omega_size(&self) -> usize {
        1 + self.label_name.len()
    }

    pub fn omega_token(&self, o: Omega) -> &str {
        match o {
            Omega::Bot => BOT_TOKEN,
            Omega::Label(l) => self.label_name(l),
        }
    }

    /// Sort of an observation: `⊥` lives in the sink sort.
    pub fn omega_sort(&self, o: Omega) -> Sort {
        match o {
            Omega::Bot => Sort::Sink,
            Omega::Label(l) => Sort::Labeled(self.label_sort(l)),
        }
    }

    /// Parses a whitespace-separated word of direction names.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        text.split(|c: char| c.is_whitespace() || c == '.' || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                self.dir_by_name(t).ok_or_else(|| Error::Unknown {
                    kind: "direction",
                    name: t.to_owned(),
                })
            })
            .collect()
    }
}

/// Alias of [`Signature::parse`].
pub fn load_signature(text: &str) -> Result<Signature> {
    Signature::parse(text)
}

/// Alias of [`Signature::full_alphabet`].
pub fn full_alphabet(sig: &Signature) -> Vec<Dir> {
    sig.full_alphabet()
}
