use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_subcycle"));
    c.env_remove("SUBCYCLE_SEED");
    c
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"))
        .join("cli")
        .join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn run(cmd: &mut Command) -> (i32, String, String) {
    let Output {
        status,
        stdout,
        stderr,
    } = cmd.output().unwrap();
    (
        status.code().unwrap(),
        String::from_utf8(stdout).unwrap(),
        String::from_utf8(stderr).unwrap(),
    )
}

fn fields(out: &str) -> HashMap<String, String> {
    out.lines()
        .map(|l| {
            let (k, v) = l.split_once(' ').unwrap_or((l, ""));
            (k.to_string(), v.to_string())
        })
        .collect()
}

const K3: &str = "n 3\ne 0 1\ne 1 2\ne 2 0\n";
const UNIT: &str = "modular\nw 0 1\nw 1 1\nw 2 1\n";

#[test]
fn exact_cycle_on_triangle() {
    let d = scratch("triangle");
    let g = write(&d, "g.txt", K3);
    let f = write(&d, "f.txt", UNIT);
    let (code, out, _) = run(bin().args(["exact-cycle", &g, &f]));
    assert_eq!(code, 0);
    let kv = fields(&out);
    assert_eq!(kv["cost"], "3");
    assert_eq!(kv["verified"], "yes");
    assert_eq!(kv["seed"], "0");
    let digest = hex::encode(Sha256::digest(K3.as_bytes()));
    assert!(out.contains(&format!("input-digest {g} {digest}")));
}

#[test]
fn approx_and_ptas_report_depth() {
    let d = scratch("ptas");
    let g = write(&d, "g.txt", "n 4\ne 0 1\ne 1 2\ne 2 3\ne 3 0\ne 0 2\n");
    let f = write(&d, "f.txt", "colors\nc 0 0\nc 1 1\nc 2 0\nc 3 1\n");
    let (code, out, _) = run(bin().args(["approx-cycle", &g, &f]));
    assert_eq!(code, 0);
    assert_eq!(fields(&out)["recursion-nodes"], "1");
    let (code, out, _) = run(bin().args(["ptas-cycle", &g, &f, "--epsilon", "0.25"]));
    assert_eq!(code, 0);
    let kv = fields(&out);
    assert_eq!(kv["depth"], "2");
    assert_eq!(kv["cost"], "2");
    let (_, out, _) = run(bin().args(["ptas-cycle", &g, &f, "--epsilon", "1/3"]));
    assert_eq!(fields(&out)["depth"], "2");
}

#[test]
fn adversary_exact_queries_every_cycle() {
    let (code, out, _) = run(bin().args([
        "adversary",
        "run",
        "--k",
        "2",
        "--p",
        "3",
        "--solver",
        "exact",
    ]));
    assert_eq!(code, 0);
    let kv = fields(&out);
    assert_eq!(kv["pk"], "9");
    assert!(kv["queries"].parse::<u64>().unwrap() >= 9);
    assert_eq!(kv["verdict"], "all-cycles-queried");
    assert_eq!(kv["claimed-cost"], "7");
}

#[test]
fn adversary_lazy_solver_is_fooled() {
    let (code, out, _) = run(bin().args([
        "adversary",
        "run",
        "--k",
        "3",
        "--p",
        "2",
        "--solver",
        "lazy",
    ]));
    assert_eq!(code, 0);
    let kv = fields(&out);
    assert_eq!(kv["verdict"], "fooled");
    assert_eq!(kv["fooled-optimum"], "14");
    assert_eq!(kv["certificate-consistent"], "yes");
    let (code, _, err) = run(bin().args([
        "adversary",
        "run",
        "--k",
        "2",
        "--p",
        "2",
        "--solver",
        "magic",
    ]));
    assert_eq!(code, 2);
    assert!(err.contains("unknown solver"));
}

#[test]
fn wfh_trivial_instance() {
    let d = scratch("wfh");
    let w = write(&d, "w.txt", "k 1\nu 2\nfamily\nset 0\nset 1\n");
    for algo in ["fpt", "brute", "random"] {
        let (code, out, _) = run(bin().args(["wfh", "solve", "--algo", algo, &w]));
        assert_eq!(code, 0, "{algo}");
        let kv = fields(&out);
        assert_eq!(kv["answer"], "yes");
        assert_eq!(kv["verified"], "yes");
    }
    let no = write(&d, "no.txt", "k 0\nu 2\nfamily\nset 0\nfamily\nset 1\n");
    let (code, out, _) = run(bin().args(["wfh", "solve", &no]));
    assert_eq!(code, 1);
    assert_eq!(fields(&out)["answer"], "no");
}

#[test]
fn seed_comes_from_flag_or_environment() {
    let d = scratch("seed");
    let w = write(
        &d,
        "w.txt",
        "k 2\nu 6\nfamily\nset 0 1\nset 2 3\nset 4 5\nfamily\nset 0 2\nset 1 4\nset 3 5\n",
    );
    let args = ["wfh", "solve", "--algo", "random", &w];
    let (_, a, _) = run(bin().args(args).args(["--seed", "17"]));
    let (_, b, _) = run(bin().args(args).env("SUBCYCLE_SEED", "17"));
    let (_, c, _) = run(bin().args(args).args(["--seed", "17", "--jobs", "3"]));
    let strip = |s: &str| {
        s.lines()
            .filter(|l| !l.starts_with("command"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(fields(&a)["seed"], "17");
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(strip(&a), strip(&c));
}

#[test]
fn reduce_then_exact_cycle_agrees() {
    let d = scratch("reduce");
    let yes = write(
        &d,
        "yes.txt",
        "k 2\nu 5\nfamily\nset 0 1\nset 2 3 4\nfamily\nset 1\nset 2 3 4\n",
    );
    let g = d.join("g.txt").to_string_lossy().into_owned();
    let f = d.join("f.txt").to_string_lossy().into_owned();
    let (code, out, _) = run(bin().args([
        "wfh",
        "reduce",
        &yes,
        "--graph-out",
        &g,
        "--function-out",
        &f,
    ]));
    assert_eq!(code, 0);
    let kv = fields(&out);
    let budget: i64 = kv["budget"].parse().unwrap();
    assert_eq!(kv["round-trip-answer"], "yes");
    let (code, out, _) = run(bin().args(["exact-cycle", &g, &f]));
    assert_eq!(code, 0);
    assert!(fields(&out)["cost"].parse::<i64>().unwrap() <= budget);
}

#[test]
fn planar_cut_on_theta() {
    let d = scratch("planar");
    let g = write(
        &d,
        "g.txt",
        "n 2\ne 0 1\ne 0 1\ne 0 1\nrot 0 0 1 2\nrot 1 2 1 0\n",
    );
    let f = write(&d, "f.txt", "modular\nw 0 1\nw 1 2\nw 2 3\n");
    let (code, out, _) = run(bin().args(["planar-cut", &g, &f, "--exact"]));
    assert_eq!(code, 0, "{out}");
    let kv = fields(&out);
    assert_eq!(kv["cost"], "6");
    assert_eq!(kv["cut-edges"], "0 1 2");
    assert_eq!(kv["verified"], "yes");
    let (code, _, err) = run(bin().args(["planar-cut", &g, &f]));
    assert_eq!(code, 2, "{err}");
}

#[test]
fn enumerate_and_verify() {
    let d = scratch("enumerate");
    let g = write(&d, "g.txt", "n 4\ne 0 1\ne 1 2\ne 2 3\ne 3 0\ne 0 2\n");
    let (code, out, _) = run(bin().args(["enumerate", &g]));
    assert_eq!(code, 0);
    assert_eq!(fields(&out)["cycles"], "3");
    assert_eq!(out.lines().filter(|l| l.starts_with("cycle ")).count(), 3);
    let f = write(&d, "f.txt", "colors\nc 0 0\nc 1 1\nc 2 0\nc 3 1\n");
    let (code, out, _) = run(bin().args(["verify-submodular", &g, &f]));
    assert_eq!(code, 0);
    assert_eq!(fields(&out)["passed"], "yes");
}

#[test]
fn exit_codes_for_bad_and_acyclic_input() {
    let d = scratch("errors");
    let f = write(&d, "f.txt", UNIT);
    let path = write(&d, "path.txt", "n 3\ne 0 1\ne 1 2\n");
    let (code, out, _) = run(bin().args(["exact-cycle", &path, &f]));
    assert_eq!(code, 1);
    assert_eq!(fields(&out)["result"], "no-cycle");
    let bad = write(&d, "bad.txt", "n 3\ne 0 1\nx 1 2\n");
    let (code, out, err) = run(bin().args(["exact-cycle", &bad, &f]));
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("line 3"), "{err}");
    let (code, _, err) = run(bin().args(["exact-cycle", &d.join("missing").to_string_lossy(), &f]));
    assert_eq!(code, 2, "{err}");
    let real = write(&d, "real.txt", "modular\nw 0 0.5\nw 1 1\nw 2 1\n");
    let tri = write(&d, "k3.txt", K3);
    let (code, _, err) = run(bin().args(["exact-cycle", &tri, &real]));
    assert_eq!(code, 2);
    assert!(err.contains("integer"), "{err}");
    let (code, _, _) = run(bin().args(["exact-cycle", &tri]));
    assert_eq!(code, 2);
}

#[test]
fn corpus_output_is_reproducible() {
    let once = |args: &[&str]| run(bin().args(["--seed", "5", "corpus"]).args(args)).1;
    for args in [
        &["graph", "--n", "8"][..],
        &["function", "--kind", "partition-matroid", "--ground", "9"],
        &[
            "wfh",
            "--k",
            "3",
            "--universe",
            "12",
            "--families",
            "4",
            "--max-family",
            "4",
            "--planted",
        ],
        &["planar", "--n", "6", "--chords", "5"],
    ] {
        let a = once(args);
        assert!(!a.is_empty());
        assert_eq!(a, once(args), "{args:?}");
    }
    let other = run(bin().args(["--seed", "6", "corpus", "graph", "--n", "8"])).1;
    assert_ne!(once(&["graph", "--n", "8"]), other);
}

#[test]
fn lower_bound_values_through_the_cli() {
    let d = scratch("lower-bound");
    let fpath = d.join("f.txt").to_string_lossy().into_owned();
    let (_, gtext, _) = run(bin().args([
        "corpus",
        "lower-bound",
        "--k",
        "2",
        "--p",
        "2",
        "--function-out",
        &fpath,
    ]));
    let g = write(&d, "g.txt", &gtext);
    let (code, out, _) = run(bin().args(["edge-cycle", &g, &fpath, "--exact"]));
    assert_eq!(code, 0);
    assert_eq!(fields(&out)["cost"], "7");
    let fc = d.join("fc.txt").to_string_lossy().into_owned();
    run(bin().args([
        "corpus",
        "lower-bound",
        "--k",
        "2",
        "--p",
        "2",
        "--cycle",
        "1",
        "2",
        "4",
        "--function-out",
        &fc,
    ]));
    let (code, out, _) = run(bin().args(["edge-cycle", &g, &fc, "--exact"]));
    assert_eq!(code, 0);
    let kv = fields(&out);
    assert_eq!(kv["cost"], "6");
    assert_eq!(kv["cycle-edges"], "1 2 4");
}
