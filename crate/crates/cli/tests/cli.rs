use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const FIXTURES: [&str; 9] = [
    "EX28", "EX31", "EX56", "E63", "EX611", "E76", "E77", "TRIV1", "Z2GL",
];

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Runs the binary from the fixture directory so file names stay short
/// and reports do not depend on the checkout location.
fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wbcc"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_in(&fixture_dir(), args)
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{args:?}: bad JSON ({e}); stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        )
    });
    (code(&out), v)
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn check_exit_codes() {
    assert_eq!(code(&run(&["check", "EX28.bcc"])), 0);
    let (c, v) = json(&["check", "EX28.bcc"]);
    assert_eq!(c, 0);
    let flags: Vec<&str> = v["result"]["flags"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f.as_str().unwrap())
        .collect();
    assert_eq!(flags, ["weakbcc", "proper", "solid"]);

    let (c, v) = json(&["check", "TRIV1.bcc"]);
    assert_eq!(c, 0);
    assert!(v["result"]["flags"]
        .as_array()
        .unwrap()
        .contains(&Value::from("bck")));

    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("garbage.txt"), "this is not a table\n").unwrap();
    assert_eq!(code(&run_in(tmp.path(), &["check", "garbage.txt"])), 1);
    assert_eq!(code(&run(&["check", "missing.bcc"])), 1);

    fs::write(tmp.path().join("bad.bcc"), "n=2\n0 0\n0 0\n").unwrap();
    assert_eq!(code(&run_in(tmp.path(), &["check", "bad.bcc"])), 2);
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&[])), 1);
    assert_eq!(code(&run(&["audit"])), 1);
    assert_eq!(
        code(&run(&["enumerate", "--order", "3", "--filter", "nope"])),
        1
    );
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
}

#[test]
fn classify_reports_branches_and_properties() {
    let (c, v) = json(&["classify", "EX31.bcc"]);
    assert_eq!(c, 0);
    let r = &v["result"];
    assert_eq!(r["branches"]["0"], serde_json::json!([0, 1, 2]));
    assert_eq!(r["branches"]["3"], serde_json::json!([3, 4]));
    assert_eq!(r["minimal"], serde_json::json!([0, 3]));
    assert_eq!(r["properties"]["branchwise-commutative"]["holds"], true);

    let (_, v) = json(&["classify", "E63.bcc"]);
    assert_eq!(
        v["result"]["properties"]["weakly-positive-implicative"]["holds"],
        true
    );

    let (_, v) = json(&["classify", "E76.bcc"]);
    let s = &v["result"]["condition_s"];
    assert_eq!(s["holds"], false);
    assert_eq!(s["failing_pair"]["x"], 1);
    assert_eq!(s["failing_pair"]["y"], 2);
    assert_eq!(s["failing_pair"]["a_set"], serde_json::json!([2, 3, 4]));

    // Human output uses labels.
    let text = stdout(&run(&["classify", "EX31.bcc"]));
    assert!(text.contains("B(0) = {0, a, b}"), "{text}");
    assert!(text.contains("B(c) = {c, d}"), "{text}");
}

#[test]
fn every_false_property_has_a_witness() {
    for f in FIXTURES {
        let (c, v) = json(&["classify", &format!("{f}.bcc")]);
        assert_eq!(c, 0, "{f}");
        let r = &v["result"];
        for section in ["properties", "identities"] {
            for (name, verdict) in r[section].as_object().unwrap() {
                if verdict["holds"] == false {
                    assert!(verdict["witness"].is_object(), "{f} {name}");
                }
            }
        }
    }
}

#[test]
fn scope_override_changes_the_identity_section() {
    let (_, default) = json(&["classify", "EX31.bcc"]);
    let (_, global) = json(&["classify", "EX31.bcc", "--scope", "global"]);
    assert_eq!(default["result"]["identities"]["E5"]["holds"], true);
    assert_eq!(global["result"]["identities"]["E5"]["holds"], false);
    assert_eq!(global["result"]["scope"], "global");
    assert_eq!(
        code(&run(&["classify", "EX31.bcc", "--scope", "sideways"])),
        1
    );
}

#[test]
fn circle_tables() {
    let (c, v) = json(&["circle", "E77.bcc"]);
    assert_eq!(c, 0);
    let t = &v["result"]["condition_s"]["circle"];
    assert_eq!(t[1][2], 2);
    assert_eq!(t[2][1], 3);
    assert_eq!(v["result"]["group"]["is_group"], false);

    let (c, v) = json(&["circle", "Z2GL.bcc"]);
    assert_eq!(c, 0);
    assert_eq!(
        v["result"]["condition_s"]["circle"],
        serde_json::json!([[0, 1], [1, 0]])
    );
    assert_eq!(v["result"]["group"]["is_group"], true);
    assert_eq!(v["result"]["group"]["is_abelian"], true);

    let (c, v) = json(&["circle", "E76.bcc"]);
    assert_eq!(c, 2);
    assert_eq!(v["result"]["condition_s"]["failing_pair"]["x"], 1);
}

#[test]
fn branches_command() {
    let (c, v) = json(&["branches", "EX31.bcc"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["greatest"]["0"], 2);
    assert_eq!(v["result"]["greatest"]["3"], 4);
}

#[test]
fn audit_commands() {
    let (c, v) = json(&["audit", "--file", "EX56.bcc", "--theorems", "T55"]);
    assert_eq!(c, 0);
    let t55 = &v["result"]["reports"][0]["report"]["outcomes"]["T55"];
    assert_eq!(t55["status"], "vacuous");
    assert_eq!(t55["hypotheses"]["I(G) BCK-ideal"], false);

    let (c, v) = json(&["audit", "--order", "3"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["catalog"]["models"], 5);
    assert_eq!(
        v["result"]["catalog"]["counterexamples"],
        serde_json::json!([])
    );
    assert_eq!(v["result"]["theorems"].as_array().unwrap().len(), 31);

    assert_eq!(
        code(&run(&["audit", "--file", "EX28.bcc", "--theorems", "XYZ"])),
        1
    );

    let mut args = vec!["audit"];
    let names: Vec<String> = FIXTURES.iter().map(|f| format!("{f}.bcc")).collect();
    for n in &names {
        args.push("--file");
        args.push(n);
    }
    let (c, v) = json(&args);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["counterexamples"], 0);
}

#[test]
fn audit_of_a_saved_catalog() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().to_str().unwrap();
    assert_eq!(code(&run(&["enumerate", "--order", "3", "--out", out])), 0);
    let index: Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("order-3/index.json")).unwrap())
            .unwrap();
    assert_eq!(index["count"], 5);
    let (c, v) = json(&["audit", "--catalog", out, "--theorems", "TFI,T55"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["catalog"]["models"], 5);
}

#[test]
fn audit_of_single_files() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("chain3.bcc"), "n=3\n0 0 0\n1 0 0\n2 1 0\n").unwrap();
    assert_eq!(
        code(&run_in(tmp.path(), &["audit", "--file", "chain3.bcc"])),
        0
    );
    // A table that is not weak BCC cannot be audited.
    fs::write(tmp.path().join("bad.bcc"), "n=2\n0 0\n0 0\n").unwrap();
    assert_eq!(
        code(&run_in(tmp.path(), &["audit", "--file", "bad.bcc"])),
        1
    );
}

#[test]
fn enumerate_counts() {
    for (n, expected) in [(1, 1), (2, 2), (3, 5)] {
        let (c, v) = json(&["enumerate", "--order", &n.to_string()]);
        assert_eq!(c, 0);
        assert_eq!(v["result"]["count"], expected, "order {n}");
    }
    let (c, v) = json(&["enumerate", "--order", "4", "--filter", "proper"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["count"], 2);
    assert_eq!(v["result"]["class_counts"]["proper"], 2);
    assert_eq!(code(&run(&["enumerate", "--order", "0"])), 1);
}

#[test]
fn enumerate_reports_unwritable_output() {
    let tmp = tempfile::tempdir().unwrap();
    let file = tmp.path().join("plain-file");
    fs::write(&file, "x").unwrap();
    let out = run(&["enumerate", "--order", "2", "--out", file.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
}

#[test]
fn iso_commands() {
    let (c, v) = json(&["iso", "EX28.bcc", "EX28.bcc"]);
    assert_eq!(c, 0);
    assert_eq!(
        v["result"]["mapping"],
        serde_json::json!([0, 1, 2, 3, 4, 5])
    );

    let tmp = tempfile::tempdir().unwrap();
    fs::copy(fixture_dir().join("Z2GL.bcc"), tmp.path().join("Z2GL.bcc")).unwrap();
    fs::write(tmp.path().join("chain2.bcc"), "n=2\n0 0\n1 0\n").unwrap();
    assert_eq!(
        code(&run_in(tmp.path(), &["iso", "Z2GL.bcc", "chain2.bcc"])),
        3
    );

    assert_eq!(code(&run(&["iso", "EX31.bcc", "EX56.bcc"])), 3);

    fs::write(
        tmp.path().join("ex31-swapped.bcc"),
        "n=5\n0 0 0 3 3\n1 0 2 4 3\n2 0 0 3 3\n3 3 3 0 0\n4 3 3 2 0\n",
    )
    .unwrap();
    fs::copy(fixture_dir().join("EX31.bcc"), tmp.path().join("EX31.bcc")).unwrap();
    let (c, v) = {
        let out = run_in(
            tmp.path(),
            &["--json", "iso", "EX31.bcc", "ex31-swapped.bcc"],
        );
        (
            code(&out),
            serde_json::from_slice::<Value>(&out.stdout).unwrap(),
        )
    };
    assert_eq!(c, 0);
    assert_eq!(v["result"]["mapping"], serde_json::json!([0, 2, 1, 3, 4]));
}

#[test]
fn jobs_flag_is_accepted() {
    let (c, v) = json(&["--jobs", "2", "enumerate", "--order", "3"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["count"], 5);
}

fn golden_cases() -> Vec<(String, Vec<String>)> {
    let mut cases = Vec::new();
    for f in FIXTURES {
        for cmd in ["check", "classify", "branches", "circle"] {
            cases.push((
                format!("{cmd}-{f}"),
                vec![cmd.to_string(), format!("{f}.bcc")],
            ));
        }
        cases.push((
            format!("audit-{f}"),
            vec!["audit".into(), "--file".into(), format!("{f}.bcc")],
        ));
    }
    cases.push((
        "enumerate-3".into(),
        vec!["enumerate".into(), "--order".into(), "3".into()],
    ));
    cases
}

/// Set `WBCC_BLESS=1` to rewrite the golden files.
#[test]
fn json_reports_match_golden_files() {
    let bless = std::env::var_os("WBCC_BLESS").is_some();
    let mut mismatches = Vec::new();
    for (name, args) in golden_cases() {
        let mut full = vec!["--json".to_string()];
        full.extend(args);
        let argv: Vec<&str> = full.iter().map(String::as_str).collect();
        let out = run(&argv);
        let path = golden_dir().join(format!("{name}.json"));
        if bless {
            fs::write(&path, &out.stdout).unwrap();
            continue;
        }
        let expected = fs::read(&path).unwrap_or_else(|_| panic!("missing golden {name}"));
        if expected != out.stdout {
            mismatches.push(name);
        }
    }
    assert!(mismatches.is_empty(), "golden mismatch: {mismatches:?}");
}

#[test]
fn json_is_byte_identical_across_runs() {
    for f in FIXTURES {
        let file = format!("{f}.bcc");
        for cmd in ["classify", "audit"] {
            let args: Vec<&str> = if cmd == "audit" {
                vec!["--json", cmd, "--file", &file]
            } else {
                vec!["--json", cmd, &file]
            };
            let first = run(&args).stdout;
            let second = run(&args).stdout;
            assert_eq!(first, second, "{cmd} {f}");
        }
    }
    let a = run(&["--json", "--jobs", "1", "audit", "--order", "3"]).stdout;
    let b = run(&["--json", "--jobs", "4", "audit", "--order", "3"]).stdout;
    assert_eq!(a, b);
}
