use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use coalg::fixpoint::TWO_WORLD_FRAME;
use coalg::fixtures::{self, A_2LOOP, A_FG, A_LOOP, B3, B_BAD, K_LOOP, SIG_FG};
use coalg::format::{parse_morphism, parse_paut, parse_qaut, render_qaut};
use coalg::{completion_k, is_morphism_q, Automaton};

struct Dir(PathBuf);

impl Dir {
    fn new(tag: &str) -> Self {
        let path = std::env::temp_dir().join(format!("coalg-cli-{}-{tag}", std::process::id()));
        let _ = std::fs::remove_dir_all(&path);
        std::fs::create_dir_all(&path).unwrap();
        let d = Dir(path);
        for (name, text) in [
            ("sig.txt", SIG_FG),
            ("aloop.paut", A_LOOP),
            ("a2loop.paut", A_2LOOP),
            ("afg.paut", A_FG),
            ("kloop.qaut", K_LOOP),
            ("bbad.qaut", B_BAD),
            ("b3.qaut", B3),
            ("two.frame", TWO_WORLD_FRAME),
        ] {
            d.write(name, text);
        }
        d
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> String {
        self.0.join(name).to_str().unwrap().to_owned()
    }

    fn run(&self, args: &[&str]) -> Output {
        let resolved: Vec<String> = args
            .iter()
            .map(|a| {
                if self.0.join(a).exists() {
                    self.path(a)
                } else {
                    a.to_string()
                }
            })
            .collect();
        Command::new(env!("CARGO_BIN_EXE_coalg"))
            .args(&resolved)
            .output()
            .unwrap()
    }
}

impl Drop for Dir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn read(p: impl AsRef<Path>) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn complete_produces_k_loop() {
    let d = Dir::new("complete");
    let o = d.run(&["complete", "--sig", "sig.txt", "aloop.paut"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), render_qaut(&fixtures::k_loop()));
    let again = d.run(&["complete", "--sig", "sig.txt", "aloop.paut"]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn out_flag_writes_reparsable_file() {
    let d = Dir::new("out");
    let out = d.path("k.qaut");
    let o = d.run(&["complete", "--sig", "sig.txt", "afg.paut", "--out", &out]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let sig = fixtures::sig_fg();
    assert_eq!(parse_qaut(&sig, &read(&out)).unwrap(), completion_k(&fixtures::a_fg()));

    let o = d.run(&["reflect", "--sig", "sig.txt", "k.qaut"]);
    assert_eq!(code(&o), 0);
    assert_eq!(parse_paut(&sig, &stdout(&o)).unwrap(), fixtures::a_fg());
}

#[test]
fn delta_check_reports_bad_transition() {
    let d = Dir::new("delta");
    let o = d.run(&["delta-check", "--sig", "sig.txt", "bbad.qaut"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).lines().any(|l| l == "BAD x f1 0"));
    assert_eq!(code(&d.run(&["delta-check", "--sig", "sig.txt", "kloop.qaut"])), 0);
    assert_eq!(code(&d.run(&["delta-check-words", "--sig", "sig.txt", "bbad.qaut"])), 1);
    assert_eq!(
        code(&d.run(&["delta-check-words", "--sig", "sig.txt", "kloop.qaut"])),
        0
    );
}

#[test]
fn counterexample_on_two_world_frame() {
    let d = Dir::new("cex");
    let o = d.run(&["counterexample", "two.frame"]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.contains("lhs {a,b}\n"));
    assert!(text.contains("rhs {b}\n"));
    assert!(text.contains("violated"));
}

#[test]
fn segerberg_on_frames() {
    let d = Dir::new("seg");
    let o = d.run(&["segerberg", "two.frame"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "lhs {b}\nrhs {b}\nequal\n");
    d.write(
        "split.frame",
        "frame\nworlds u v\nsorts 1 2\nrel 2 u v\nval 1 u\nval 2 u\n",
    );
    let o = d.run(&["segerberg", "split.frame"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).ends_with("differ\n"));
}

#[test]
fn input_errors_exit_two_with_one_line() {
    let d = Dir::new("errors");
    d.write("broken.paut", "paut\nstate q sort 9 label f\n");
    for args in [
        &["complete", "--sig", "sig.txt", "broken.paut"][..],
        &["complete", "--sig", "sig.txt", "missing.paut"],
        &["reflect", "--sig", "sig.txt", "bbad.qaut"],
        &["complete", "--sig", "aloop.paut", "aloop.paut"],
        &["counterexample", "aloop.paut"],
        &["no-such-command"],
    ] {
        let o = d.run(args);
        assert_eq!(code(&o), 2, "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        if args[0] != "no-such-command" {
            assert_eq!(err.trim_end().lines().count(), 1, "{err}");
        }
    }
    let o = d.run(&["reflect", "--sig", "sig.txt", "bbad.qaut"]);
    assert!(String::from_utf8(o.stderr).unwrap().contains("x"));
}

#[test]
fn validate_exit_codes() {
    let d = Dir::new("validate");
    assert_eq!(code(&d.run(&["validate", "--sig", "sig.txt", "afg.paut"])), 0);
    d.write("partial.qaut", "qaut\nstate q sort 1 label f\ntrans q f1 q\n");
    let o = d.run(&["validate", "--sig", "sig.txt", "partial.qaut"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("invalid"));
}

#[test]
fn coreflect_prints_inclusion() {
    let d = Dir::new("coreflect");
    let o = d.run(&["coreflect", "--sig", "sig.txt", "b3.qaut", "--out", &d.path("d.qaut")]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "morph\nmap bot -> bot\n");
    let sig = fixtures::sig_fg();
    let dq = parse_qaut(&sig, &read(d.path("d.qaut"))).unwrap();
    let b = fixtures::b3();
    let incl = parse_morphism(&dq, &b, &stdout(&o)).unwrap();
    assert!(is_morphism_q(&dq, &b, &incl).unwrap());
}

#[test]
fn behavior_and_clauses() {
    let d = Dir::new("behavior");
    let o = d.run(&[
        "behavior",
        "--sig",
        "sig.txt",
        "kloop.qaut",
        "--state",
        "q",
        "--depth",
        "1",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "f\n  f1: f\n  g1: _bot_\n  g2: _bot_\n");
    // P-automata are completed on the fly
    let p = d.run(&[
        "behavior",
        "--sig",
        "sig.txt",
        "aloop.paut",
        "--state",
        "q",
        "--depth",
        "1",
    ]);
    assert_eq!(o.stdout, p.stdout);
    let args = [
        "clauses",
        "--sig",
        "sig.txt",
        "kloop.qaut",
        "--state",
        "_sink_",
        "--depth",
        "5",
    ];
    assert_eq!(code(&d.run(&args)), 0);
    let mut strict = args.to_vec();
    strict.push("--require-root");
    assert_eq!(code(&d.run(&strict)), 1);
    assert_eq!(
        code(&d.run(&["behavior", "--sig", "sig.txt", "kloop.qaut", "--state", "zz"])),
        2
    );
}

#[test]
fn bisim_and_minimize() {
    let d = Dir::new("bisim");
    let o = d.run(&["bisim", "--sig", "sig.txt", "kloop.qaut", "q", "a2loop.paut", "q2"]);
    assert_eq!((code(&o), stdout(&o)), (0, "true\n".to_owned()));
    let o = d.run(&["bisim", "--sig", "sig.txt", "kloop.qaut", "q", "kloop.qaut", "_sink_"]);
    assert_eq!(code(&o), 1);

    let o = d.run(&[
        "minimize",
        "--sig",
        "sig.txt",
        "a2loop.paut",
        "--out",
        &d.path("m.qaut"),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "morph\nmap q1 -> q1\nmap q2 -> q1\nmap _sink_ -> _sink_\n");
    let m = parse_qaut(&fixtures::sig_fg(), &read(d.path("m.qaut"))).unwrap();
    assert_eq!(m.num_states(), 2);
}

#[test]
fn limits_from_files() {
    let d = Dir::new("limits");
    let o = d.run(&["product-p", "--sig", "sig.txt", "aloop.paut", "aloop.paut"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "paut\nstate q_q sort 1 label f\ntrans q_q f1 q_q\n\nmorph\nmap q_q -> q\n\nmorph\nmap q_q -> q\n"
    );

    let o = d.run(&["product-q", "--sig", "sig.txt", "kloop.qaut", "b3.qaut"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("state _sink__bot sort 0"));

    d.write("k2.qaut", &render_qaut(&completion_k(&fixtures::a_2loop())));
    d.write("id.morph", "morph\nmap q1 -> q1\nmap q2 -> q2\nmap _sink_ -> _sink_\n");
    d.write(
        "swap.morph",
        "morph\nmap q1 -> q2\nmap q2 -> q1\nmap _sink_ -> _sink_\n",
    );
    let o = d.run(&[
        "equalizer-q",
        "--sig",
        "sig.txt",
        "k2.qaut",
        "k2.qaut",
        "id.morph",
        "swap.morph",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("qaut\nstate _sink_ sort 0\n"));

    d.write("pid.morph", "morph\nmap q1 -> q1\nmap q2 -> q2\n");
    d.write("pswap.morph", "morph\nmap q1 -> q2\nmap q2 -> q1\n");
    let o = d.run(&[
        "equalizer-p",
        "--sig",
        "sig.txt",
        "a2loop.paut",
        "a2loop.paut",
        "pid.morph",
        "pswap.morph",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("paut\n\n"));

    let o = d.run(&[
        "pullback-q",
        "--sig",
        "sig.txt",
        "k2.qaut",
        "k2.qaut",
        "k2.qaut",
        "id.morph",
        "swap.morph",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).matches("morph\n").count(), 3);

    let o = d.run(&[
        "equalizer-q",
        "--sig",
        "sig.txt",
        "k2.qaut",
        "k2.qaut",
        "id.morph",
        "pid.morph",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn morphism_commands() {
    let d = Dir::new("morph");
    d.write("collapse.morph", "morph\nmap q1 -> q\nmap q2 -> q\n");
    d.write("bad.morph", "morph\nmap q -> r\n");
    let o = d.run(&[
        "check-morphism",
        "--sig",
        "sig.txt",
        "a2loop.paut",
        "aloop.paut",
        "collapse.morph",
    ]);
    assert_eq!((code(&o), stdout(&o)), (0, "true\n".to_owned()));
    let o = d.run(&[
        "check-morphism",
        "--sig",
        "sig.txt",
        "aloop.paut",
        "afg.paut",
        "bad.morph",
    ]);
    assert_eq!(code(&o), 1);

    let o = d.run(&["hom-count", "--sig", "sig.txt", "a2loop.paut", "a2loop.paut"]);
    assert_eq!(stdout(&o), "4\n");
    let o = d.run(&[
        "hom-count",
        "--sig",
        "sig.txt",
        "a2loop.paut",
        "a2loop.paut",
        "--cap",
        "3",
    ]);
    assert_eq!(code(&o), 2);
    let o = d.run(&["hom-count", "--sig", "sig.txt", "a2loop.paut", "kloop.qaut"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn dot_output() {
    let d = Dir::new("dot");
    let o = d.run(&["dot", "--sig", "sig.txt", "kloop.qaut"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("digraph automaton {\n") && text.ends_with("}\n"));
    assert!(text.contains("\"q\" [label=\"q:1:f\"];"));
    assert!(text.contains("\"_sink_\" [label=\"_sink_:0:_bot_\"];"));
    assert!(text.contains("\"q\" -> \"q\" [label=\"f1\"];"));
    assert_eq!(text.matches(" -> ").count(), 6);
}
