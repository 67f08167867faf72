use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cvc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvc"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

// path (1-2-3-4-5) with S = {3}: G - S is two edges, a cluster graph
const PATH: &str = "p edge 5 4\ne 1 2\ne 2 3\ne 3 4\ne 4 5\n";

fn write_path(dir: &Path) {
    std::fs::write(dir.join("g.dimacs"), PATH).unwrap();
    std::fs::write(dir.join("s.txt"), "3\n").unwrap();
}

#[test]
fn solve_reports_schema_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    write_path(dir.path());
    let out = cvc(
        dir.path(),
        &[
            "solve",
            "--param",
            "cluster",
            "--graph",
            "g.dimacs",
            "--modulator",
            "s.txt",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["feasible"], true);
    assert_eq!(v["size"], 3);
    assert_eq!(v["vertices"], serde_json::json!([2, 3, 4]));
    assert_eq!(v["param_kind"], "cluster");
    assert!(v["stats"]["steiner_calls"].is_u64());

    let out = cvc(
        dir.path(),
        &[
            "solve",
            "--param",
            "cluster",
            "--graph",
            "g.dimacs",
            "--modulator",
            "s.txt",
            "--ell",
            "2",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["feasible"], false);

    // {3} does not make the path a clique
    let out = cvc(
        dir.path(),
        &[
            "solve",
            "--param",
            "clique",
            "--graph",
            "g.dimacs",
            "--modulator",
            "s.txt",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"], "kind_mismatch");

    std::fs::write(dir.path().join("bad.dimacs"), "p edge 2 1\ne 1 7\n").unwrap();
    let out = cvc(
        dir.path(),
        &[
            "solve",
            "--param",
            "split",
            "--graph",
            "bad.dimacs",
            "--find-modulator",
            "2",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"], "parse_error");
}

#[test]
fn find_modulator_for_every_param() {
    let dir = tempfile::tempdir().unwrap();
    write_path(dir.path());
    for param in ["split", "clique", "cluster", "degree1", "chordal", "modcc"] {
        let out = cvc(
            dir.path(),
            &[
                "solve",
                "--param",
                param,
                "--graph",
                "g.dimacs",
                "--find-modulator",
                "4",
            ],
        );
        assert_eq!(
            out.status.code(),
            Some(0),
            "{param}: {}",
            String::from_utf8_lossy(&out.stdout)
        );
        assert_eq!(json(&out)["size"], 3, "{param}");
    }
    let out = cvc(
        dir.path(),
        &["solve", "--param", "cliquecover", "--graph", "g.dimacs"],
    );
    assert_eq!(json(&out)["size"], 3);
}

#[test]
fn kernelize_then_lift_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = cvc(
        d,
        &[
            "gen",
            "--model",
            "cluster",
            "--n",
            "14",
            "--k",
            "3",
            "--seed",
            "9",
            "--out",
            "g.dimacs",
            "--out-modulator",
            "s.txt",
        ],
    );
    assert!(out.status.success());
    assert!(std::fs::read_to_string(d.join("g.dimacs"))
        .unwrap()
        .contains("seed=9"));

    let out = cvc(
        d,
        &[
            "kernelize",
            "--param",
            "cluster",
            "--alpha",
            "2",
            "--graph",
            "g.dimacs",
            "--modulator",
            "s.txt",
            "--out-graph",
            "r.dimacs",
            "--out-chain",
            "chain.json",
            "--out-modulator",
            "r.mod",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let summary = json(&out);
    assert_eq!(summary["certificate"]["holds"], true);
    assert!(summary["vertices_after"].as_u64() <= summary["vertices_before"].as_u64());

    let out = cvc(
        d,
        &[
            "solve",
            "--param",
            "cluster",
            "--graph",
            "r.dimacs",
            "--modulator",
            "r.mod",
        ],
    );
    let reduced: Vec<String> = json(&out)["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.to_string())
        .collect();
    std::fs::write(d.join("sol.txt"), reduced.join("\n")).unwrap();

    let out = cvc(
        d,
        &[
            "lift",
            "--chain",
            "chain.json",
            "--solution",
            "sol.txt",
            "--reduced",
            "r.dimacs",
            "--graph",
            "g.dimacs",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let lifted = json(&out);
    assert_eq!(lifted["verified"], true);

    let out = cvc(
        d,
        &[
            "solve",
            "--param",
            "cluster",
            "--graph",
            "g.dimacs",
            "--modulator",
            "s.txt",
        ],
    );
    let opt = json(&out)["size"].as_u64().unwrap();
    assert!(lifted["size"].as_u64().unwrap() <= 2 * opt);

    // wrong original graph is caught
    std::fs::write(d.join("other.dimacs"), PATH).unwrap();
    let out = cvc(
        d,
        &[
            "lift",
            "--chain",
            "chain.json",
            "--solution",
            "sol.txt",
            "--graph",
            "other.dimacs",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"], "chain_mismatch");
}

#[test]
fn kernelize_rejects_chordal_and_bad_alpha() {
    let dir = tempfile::tempdir().unwrap();
    write_path(dir.path());
    let base = [
        "kernelize",
        "--graph",
        "g.dimacs",
        "--modulator",
        "s.txt",
        "--out-graph",
        "r",
        "--out-chain",
        "c",
    ];
    let out = cvc(
        dir.path(),
        &[&base[..], &["--param", "chordal", "--alpha", "2"]].concat(),
    );
    assert_eq!(json(&out)["error"], "not_applicable");
    let out = cvc(
        dir.path(),
        &[&base[..], &["--param", "cluster", "--alpha", "1"]].concat(),
    );
    assert_eq!(json(&out)["error"], "invalid_parameter");
}

#[test]
fn verify_and_bench_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = cvc(
        dir.path(),
        &[
            "verify", "--mode", "steiner", "--nmax", "5", "--trials", "20",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let out = cvc(dir.path(), &["verify", "--mode", "oracle", "--nmax", "4"]);
    assert!(out.status.success());

    let out = cvc(
        dir.path(),
        &[
            "bench",
            "--suite",
            "kernel-sizes",
            "--reps",
            "1",
            "--out",
            "k.csv",
        ],
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("k.csv")).unwrap();
    assert!(csv.starts_with("suite,instance,metric,k,n,d,measured,bound,elapsed_ms,ok"));

    let out = cvc(
        dir.path(),
        &[
            "bench",
            "--suite",
            "cluster-scaling",
            "--kmax",
            "4",
            "--reps",
            "1",
        ],
    );
    assert_eq!(out.status.code(), Some(3));
    let out = cvc(dir.path(), &["bench", "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gen_gadget_writes_cover() {
    let dir = tempfile::tempdir().unwrap();
    let out = cvc(
        dir.path(),
        &[
            "gen",
            "--model",
            "gadget",
            "--n",
            "4",
            "--k",
            "2",
            "--out",
            "g.dimacs",
            "--out-cover",
            "c.txt",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = cvc(
        dir.path(),
        &[
            "solve",
            "--param",
            "cliquecover",
            "--graph",
            "g.dimacs",
            "--cover",
            "c.txt",
        ],
    );
    assert!(matches!(out.status.code(), Some(0) | Some(2)));
}
