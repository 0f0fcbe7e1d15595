//! Command table for the `coalg` binary.
//!
//! Exit codes: 0 success, 1 a predicate answered no, 2 bad input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use coalg::behavior::{behavior_named, render_tree_text};
use coalg::fixpoint::{counterexample_check, segerberg_sides};
use coalg::format::{
    automaton_dot, parse_automaton, parse_morphism, parse_paut, parse_qaut, render_morphism, render_paut, render_qaut,
    AnyAutomaton,
};
use coalg::limits::{equalizer_p, equalizer_q, product_p, product_q, pullback_q, LimitResult};
use coalg::{
    bisimilar, clause_check, completion_k, coreflect_d, delta_check, delta_check_words, hom_count, is_morphism,
    load_signature, minimize, reflect_l, validate_p, validate_q, AutMorphism, Automaton, KripkeFrame, PAutomaton,
    QAutomaton, Signature,
};

const DEFAULT_DEPTH: usize = 10;
const DEFAULT_CAP: u128 = 1_000_000;

#[derive(Parser, Debug)]
#[command(
    name = "coalg",
    version,
    about = "Constructions on multi-sorted automata and Kripke frames"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct SigArg {
    /// Signature file.
    #[arg(long)]
    sig: PathBuf,
}

#[derive(Args, Debug)]
struct OutArg {
    /// Write the resulting automaton here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that an automaton file is well formed.
    Validate {
        #[command(flatten)]
        sig: SigArg,
        file: PathBuf,
    },
    /// Completion: add a sink state and totalize a P-automaton.
    Complete {
        #[command(flatten)]
        sig: SigArg,
        file: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Strip the sink sort of a delta Q-automaton.
    Reflect {
        #[command(flatten)]
        sig: SigArg,
        file: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Local delta condition, one `BAD` line per failure.
    DeltaCheck {
        #[command(flatten)]
        sig: SigArg,
        file: PathBuf,
    },
    /// Delta condition decided over words.
    DeltaCheckWords {
        #[command(flatten)]
        sig: SigArg,
        file: PathBuf,
    },
    /// Largest delta sub-automaton and its inclusion.
    Coreflect {
        #[command(flatten)]
        sig: SigArg,
        file: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Print the behavior tree of a state to a depth.
    Behavior {
        #[command(flatten)]
        sig: SigArg,
        file: PathBuf,
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// Check the final-coalgebra clauses on a state's behavior.
    Clauses {
        #[command(flatten)]
        sig: SigArg,
        file: PathBuf,
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        #[arg(long)]
        require_root: bool,
    },
    /// Decide whether two states have equal behavior.
    Bisim {
        #[command(flatten)]
        sig: SigArg,
        a: PathBuf,
        state_a: String,
        b: PathBuf,
        state_b: String,
    },
    /// Quotient by bisimilarity.
    Minimize {
        #[command(flatten)]
        sig: SigArg,
        file: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Product of two Q-automata.
    ProductQ {
        #[command(flatten)]
        sig: SigArg,
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Product of two P-automata.
    ProductP {
        #[command(flatten)]
        sig: SigArg,
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Equalizer of two Q-morphisms `a → b`.
    EqualizerQ {
        #[command(flatten)]
        sig: SigArg,
        a: PathBuf,
        b: PathBuf,
        f: PathBuf,
        g: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Equalizer of two P-morphisms `a → b`.
    EqualizerP {
        #[command(flatten)]
        sig: SigArg,
        a: PathBuf,
        b: PathBuf,
        f: PathBuf,
        g: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Pullback of Q-morphisms `f: a → c` and `g: b → c`.
    PullbackQ {
        #[command(flatten)]
        sig: SigArg,
        a: PathBuf,
        b: PathBuf,
        c: PathBuf,
        f: PathBuf,
        g: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Check that a morph file is a morphism between two automata.
    CheckMorphism {
        #[command(flatten)]
        sig: SigArg,
        a: PathBuf,
        b: PathBuf,
        morph: PathBuf,
    },
    /// Count morphisms between two automata of the same kind.
    HomCount {
        #[command(flatten)]
        sig: SigArg,
        a: PathBuf,
        b: PathBuf,
        /// Largest candidate-map count to enumerate.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u128,
    },
    /// Both sides of the fixpoint equation on a frame.
    Segerberg { frame: PathBuf },
    /// The two-sort inequality on a frame.
    Counterexample { frame: PathBuf },
    /// Graphviz rendering of an automaton.
    Dot {
        #[command(flatten)]
        sig: SigArg,
        file: PathBuf,
    },
}

/// Failure before a command could answer: exit code 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Outcome = Result<(String, u8), InputError>;

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn signature(arg: &SigArg) -> Result<Arc<Signature>, InputError> {
    let text = read(&arg.sig)?;
    load_signature(&text)
        .map(Arc::new)
        .map_err(|e| InputError(format!("{}: {e}", arg.sig.display())))
}

fn with_path<T>(path: &Path, r: coalg::Result<T>) -> Result<T, InputError> {
    r.map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_any(sig: &Arc<Signature>, path: &Path) -> Result<AnyAutomaton, InputError> {
    let aut = with_path(path, parse_automaton(sig, &read(path)?))?;
    match &aut {
        AnyAutomaton::P(p) => with_path(path, validate_p(p))?,
        AnyAutomaton::Q(q) => with_path(path, validate_q(q))?,
    }
    Ok(aut)
}

fn load_p(sig: &Arc<Signature>, path: &Path) -> Result<PAutomaton, InputError> {
    let aut = with_path(path, parse_paut(sig, &read(path)?))?;
    with_path(path, validate_p(&aut))?;
    Ok(aut)
}

fn load_q(sig: &Arc<Signature>, path: &Path) -> Result<QAutomaton, InputError> {
    let aut = with_path(path, parse_qaut(sig, &read(path)?))?;
    with_path(path, validate_q(&aut))?;
    Ok(aut)
}

/// Q-view of any automaton file; P-automata are completed first.
fn load_as_q(sig: &Arc<Signature>, path: &Path) -> Result<QAutomaton, InputError> {
    Ok(match load_any(sig, path)? {
        AnyAutomaton::P(p) => completion_k(&p),
        AnyAutomaton::Q(q) => q,
    })
}

fn load_frame(path: &Path) -> Result<KripkeFrame, InputError> {
    with_path(path, KripkeFrame::parse(&read(path)?))
}

fn verdict(v: bool) -> u8 {
    if v {
        0
    } else {
        1
    }
}

/// Writes `text` to `--out` when given, otherwise returns it for stdout.
fn emit(out: &OutArg, text: String) -> Result<String, InputError> {
    match &out.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

/// The automaton, then each projection as a `morph` block.
fn emit_limit<A: Automaton, B: Automaton>(
    out: &OutArg,
    result: &LimitResult<A>,
    render: impl Fn(&A) -> String,
    targets: &[&B],
) -> Outcome {
    let mut text = emit(out, render(&result.limit))?;
    for (p, tgt) in result.projections.iter().zip(targets) {
        if !text.is_empty() {
            text.push('\n');
        }
        text.push_str(&render_morphism(&result.limit, *tgt, p));
    }
    Ok((text, 0))
}

fn run_command(cmd: Command) -> Outcome {
    match cmd {
        Command::Validate { sig, file } => {
            let sig = signature(&sig)?;
            let aut = with_path(&file, parse_automaton(&sig, &read(&file)?))?;
            let check = match &aut {
                AnyAutomaton::P(p) => validate_p(p),
                AnyAutomaton::Q(q) => validate_q(q),
            };
            Ok(match check {
                Ok(()) => ("valid\n".into(), 0),
                Err(e) => (format!("invalid: {e}\n"), 1),
            })
        }
        Command::Complete { sig, file, out } => {
            let sig = signature(&sig)?;
            let k = completion_k(&load_p(&sig, &file)?);
            Ok((emit(&out, render_qaut(&k))?, 0))
        }
        Command::Reflect { sig, file, out } => {
            let sig = signature(&sig)?;
            let l = with_path(&file, reflect_l(&load_q(&sig, &file)?))?;
            Ok((emit(&out, render_paut(&l))?, 0))
        }
        Command::DeltaCheck { sig, file } => {
            let sig = signature(&sig)?;
            let aut = load_q(&sig, &file)?;
            let report = delta_check(&aut);
            let mut text = String::new();
            for w in &report.witnesses {
                let _ = writeln!(
                    text,
                    "BAD {} {} {}",
                    aut.state_name(w.state),
                    sig.dir_name(w.dir),
                    sig.j_sort_name(w.target_sort)
                );
            }
            if report.verdict {
                text.push_str("delta\n");
            }
            Ok((text, verdict(report.verdict)))
        }
        Command::DeltaCheckWords { sig, file } => {
            let sig = signature(&sig)?;
            let v = delta_check_words(&load_q(&sig, &file)?);
            Ok((format!("{v}\n"), verdict(v)))
        }
        Command::Coreflect { sig, file, out } => {
            let sig = signature(&sig)?;
            let aut = load_q(&sig, &file)?;
            let (d, incl) = coreflect_d(&aut);
            let result = LimitResult {
                limit: d,
                projections: vec![incl],
            };
            emit_limit(&out, &result, render_qaut, &[&aut])
        }
        Command::Behavior {
            sig,
            file,
            state,
            depth,
        } => {
            let sig = signature(&sig)?;
            let aut = Arc::new(load_as_q(&sig, &file)?);
            let t = behavior_named(&aut, &state)?;
            Ok((render_tree_text(&t, depth), 0))
        }
        Command::Clauses {
            sig,
            file,
            state,
            depth,
            require_root,
        } => {
            let sig = signature(&sig)?;
            let aut = Arc::new(load_as_q(&sig, &file)?);
            let t = behavior_named(&aut, &state)?;
            let v = clause_check(&t, depth, require_root);
            Ok((format!("{v}\n"), verdict(v)))
        }
        Command::Bisim {
            sig,
            a,
            state_a,
            b,
            state_b,
        } => {
            let sig = signature(&sig)?;
            let (qa, qb) = (load_as_q(&sig, &a)?, load_as_q(&sig, &b)?);
            let find = |aut: &QAutomaton, name: &str, path: &Path| {
                aut.state_by_name(name)
                    .ok_or_else(|| InputError(format!("{}: unknown state `{name}`", path.display())))
            };
            let (x, y) = (find(&qa, &state_a, &a)?, find(&qb, &state_b, &b)?);
            let v = bisimilar(&qa, x, &qb, y)?;
            Ok((format!("{v}\n"), verdict(v)))
        }
        Command::Minimize { sig, file, out } => {
            let sig = signature(&sig)?;
            let aut = load_as_q(&sig, &file)?;
            let (m, proj) = minimize(&aut);
            let mut text = emit(&out, render_qaut(&m))?;
            if !text.is_empty() {
                text.push('\n');
            }
            text.push_str(&render_morphism(&aut, &m, &proj));
            Ok((text, 0))
        }
        Command::ProductQ { sig, a, b, out } => {
            let sig = signature(&sig)?;
            let (qa, qb) = (load_q(&sig, &a)?, load_q(&sig, &b)?);
            emit_limit(&out, &product_q(&qa, &qb)?, render_qaut, &[&qa, &qb])
        }
        Command::ProductP { sig, a, b, out } => {
            let sig = signature(&sig)?;
            let (pa, pb) = (load_p(&sig, &a)?, load_p(&sig, &b)?);
            emit_limit(&out, &product_p(&pa, &pb)?, render_paut, &[&pa, &pb])
        }
        Command::EqualizerQ { sig, a, b, f, g, out } => {
            let sig = signature(&sig)?;
            let (qa, qb) = (load_q(&sig, &a)?, load_q(&sig, &b)?);
            let f = with_path(&f, parse_morphism(&qa, &qb, &read(&f)?))?;
            let g = with_path(&g, parse_morphism(&qa, &qb, &read(&g)?))?;
            emit_limit(&out, &equalizer_q(&qa, &qb, &f, &g)?, render_qaut, &[&qa, &qb])
        }
        Command::EqualizerP { sig, a, b, f, g, out } => {
            let sig = signature(&sig)?;
            let (pa, pb) = (load_p(&sig, &a)?, load_p(&sig, &b)?);
            let f = with_path(&f, parse_morphism(&pa, &pb, &read(&f)?))?;
            let g = with_path(&g, parse_morphism(&pa, &pb, &read(&g)?))?;
            emit_limit(&out, &equalizer_p(&pa, &pb, &f, &g)?, render_paut, &[&pa, &pb])
        }
        Command::PullbackQ {
            sig,
            a,
            b,
            c,
            f,
            g,
            out,
        } => {
            let sig = signature(&sig)?;
            let (qa, qb, qc) = (load_q(&sig, &a)?, load_q(&sig, &b)?, load_q(&sig, &c)?);
            let f = with_path(&f, parse_morphism(&qa, &qc, &read(&f)?))?;
            let g = with_path(&g, parse_morphism(&qb, &qc, &read(&g)?))?;
            emit_limit(&out, &pullback_q(&qa, &qb, &qc, &f, &g)?, render_qaut, &[&qa, &qb, &qc])
        }
        Command::CheckMorphism { sig, a, b, morph } => {
            let sig = signature(&sig)?;
            let v = match (load_any(&sig, &a)?, load_any(&sig, &b)?) {
                (AnyAutomaton::P(x), AnyAutomaton::P(y)) => morphism_holds(&x, &y, &morph)?,
                (AnyAutomaton::Q(x), AnyAutomaton::Q(y)) => morphism_holds(&x, &y, &morph)?,
                _ => return Err(InputError("automata must be of the same kind".into())),
            };
            Ok((format!("{v}\n"), verdict(v)))
        }
        Command::HomCount { sig, a, b, cap } => {
            let sig = signature(&sig)?;
            let n = match (load_any(&sig, &a)?, load_any(&sig, &b)?) {
                (AnyAutomaton::P(x), AnyAutomaton::P(y)) => hom_count(&x, &y, cap)?,
                (AnyAutomaton::Q(x), AnyAutomaton::Q(y)) => hom_count(&x, &y, cap)?,
                _ => return Err(InputError("automata must be of the same kind".into())),
            };
            Ok((format!("{n}\n"), 0))
        }
        Command::Segerberg { frame } => {
            let k = load_frame(&frame)?;
            let (lhs, rhs) = segerberg_sides(&k)?;
            let text = format!(
                "lhs {}\nrhs {}\n{}\n",
                k.format_set(&lhs),
                k.format_set(&rhs),
                if lhs == rhs { "equal" } else { "differ" }
            );
            Ok((text, verdict(lhs == rhs)))
        }
        Command::Counterexample { frame } => {
            let k = load_frame(&frame)?;
            let r = counterexample_check(&k)?;
            let text = format!(
                "lhs {}\nrhs {}\n{}\n",
                k.format_set(&r.lhs),
                k.format_set(&r.rhs),
                if r.violated { "violated" } else { "holds" }
            );
            Ok((text, verdict(!r.violated)))
        }
        Command::Dot { sig, file } => {
            let sig = signature(&sig)?;
            let text = match load_any(&sig, &file)? {
                AnyAutomaton::P(p) => automaton_dot(&p),
                AnyAutomaton::Q(q) => automaton_dot(&q),
            };
            Ok((text, 0))
        }
    }
}

fn morphism_holds<A: Automaton>(a: &A, b: &A, path: &Path) -> Result<bool, InputError> {
    let f: AutMorphism = with_path(path, parse_morphism(a, b, &read(path)?))?;
    Ok(is_morphism(a, b, &f)?)
}

/// Parses `argv` (program name first), runs the command, writes its output
/// to `out` and returns the exit code. Diagnostics go to stderr.
pub fn run<I, T>(argv: I, out: &mut impl Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run_command(cli.command) {
        Ok((text, code)) => {
            if out.write_all(text.as_bytes()).is_err() {
                return 2;
            }
            code
        }
        Err(InputError(msg)) => {
            eprintln!("error: {}", msg.lines().next().unwrap_or_default());
            2
        }
    }
}
