use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn rcw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rcw"))
        .args(args)
        .current_dir(fixtures())
        .env_remove("RCW_MACHINE_REGISTRY")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

/// Compares stdout with `tests/golden/<name>`; `RCW_UPDATE_GOLDEN=1`
/// rewrites the file.
fn golden(name: &str, out: &Output) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("RCW_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out.stdout).unwrap();
    }
    let expected = std::fs::read(&path).unwrap_or_else(|_| panic!("missing golden {name}"));
    assert!(
        expected == out.stdout,
        "{name} differs from golden:\n{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

fn no_floats(v: &Value) -> bool {
    match v {
        Value::Number(n) => !n.is_f64(),
        Value::Array(items) => items.iter().all(no_floats),
        Value::Object(map) => map.values().all(no_floats),
        _ => true,
    }
}

#[test]
fn kc_alloc_golden() {
    let out = rcw(&["kc", "alloc", "lengths.json"]);
    assert_eq!(code(&out), 0);
    golden("kc_alloc.json", &out);
    let v = json(&out);
    let words: Vec<&str> = v["result"]["codewords"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["codeword"].as_str().unwrap())
        .collect();
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            assert!(!a.starts_with(b) && !b.starts_with(a), "{a} {b}");
        }
    }
    assert_eq!(v["result"]["committed_weight"], "15/2^4");
    assert_eq!(
        v["manifest"]["inputs"]["lengths.json"]
            .as_str()
            .unwrap()
            .len(),
        64
    );
}

#[test]
fn kc_alloc_rejects_first_overshoot() {
    let out = rcw(&["kc", "alloc", "overweight.json"]);
    assert_eq!(code(&out), 2);
    let v = json(&out);
    assert_eq!(v["result"]["rejected"]["index"], 2);
    assert_eq!(v["result"]["codewords"].as_array().unwrap().len(), 2);
}

#[test]
fn roc_to_skt_two_thirds_golden() {
    let short = rcw(&[
        "convert",
        "roc-to-skt",
        "--name",
        "ap:2,1",
        "--rate",
        "shift:2",
        "--stages",
        "200",
    ]);
    assert_eq!(
        code(&short),
        0,
        "{}",
        String::from_utf8_lossy(&short.stderr)
    );
    golden("roc_to_skt.json", &short);
    let out = rcw(&[
        "convert",
        "roc-to-skt",
        "--name",
        "ap:2,1",
        "--rate",
        "shift:2",
        "--stages",
        "2000",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let r = &v["result"];
    assert_eq!(r["result"], "built");
    assert_eq!(r["validation"]["verdict"], "consistent");
    assert!(r["count_checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["result"] == "holds"));
    assert_eq!(v["manifest"]["stages"], 2000);
}

#[test]
fn weight_violating_family_exits_two() {
    let out = rcw(&["skt", "validate", "heavy_family.json", "--nmax", "3"]);
    assert_eq!(code(&out), 2);
    let v = json(&out);
    assert_eq!(v["result"]["verdict"], "refuted");
    assert_eq!(v["result"]["level"], 1);
    assert_eq!(v["result"]["violation"]["reason"], "weight");
}

#[test]
fn skt_from_rate_three_entry_levels() {
    let out = rcw(&[
        "skt",
        "from-rate",
        "--machine",
        "three_entry.json",
        "--rate",
        "shift:2",
        "--nmax",
        "1",
    ]);
    assert_eq!(code(&out), 0);
    golden("skt_from_rate.json", &out);
    let levels = &json(&out)["result"]["family"]["levels"];
    assert_eq!(levels[0]["strings"], serde_json::json!(["00", "01"]));
    assert_eq!(levels[1]["strings"], serde_json::json!(["111"]));
}

#[test]
fn lc_to_roc_one_third() {
    let out = rcw(&[
        "convert",
        "lc-to-roc",
        "--xs",
        "periodic:01",
        "--rate",
        "pow2:4",
        "--budget-l",
        "24",
        "--budget-t",
        "4096",
        "--stages",
        "80",
        "--blocks",
        "4",
    ]);
    assert_eq!(code(&out), 0);
    golden("lc_to_roc.json", &out);
    let r = &json(&out)["result"];
    assert_eq!(r["status"]["status"], "complete");
    assert_eq!(r["s"], serde_json::json!([0, 8, 16, 32, 64]));
    assert!(r["tail_checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["result"] == "holds-at-stage"));
}

#[test]
fn profile_csv_golden() {
    let out = rcw(&[
        "profile",
        "--stream",
        "periodic:01",
        "--nmax",
        "12",
        "--budget-l",
        "18",
    ]);
    assert_eq!(code(&out), 0);
    golden("profile.csv", &out);
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(out.stdout.as_slice());
    assert_eq!(
        reader.headers().unwrap(),
        vec!["n", "K", "status", "L", "t"]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 13);
    assert!(rows.iter().all(|r| &r[3] == "18" && &r[4] == "10000"));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("# manifest: {"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let runs: [&[&str]; 5] = [
        &["machine", "enumerate", "--budget-l", "10"],
        &["omega-s", "--machine", "three_entry.json", "--s", "1/2"],
        &[
            "immunity",
            "cohesive",
            "--set",
            "random:4:300",
            "--witness",
            "evens:300",
            "--horizon",
            "300",
        ],
        &[
            "construct",
            "interleave",
            "--stream",
            "random:11",
            "--n",
            "200",
        ],
        &[
            "dim",
            "--stream",
            "random:2",
            "--n0",
            "4",
            "--n1",
            "12",
            "--budget-l",
            "20",
        ],
    ];
    for args in runs {
        let a = rcw(args);
        let b = rcw(args);
        assert!(code(&a) == 0 || code(&a) == 2, "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(no_floats(&json(&a)), "{args:?}");
    }
}

#[test]
fn out_flag_does_not_change_the_artifact() {
    let dir = std::env::temp_dir().join(format!("rcw-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let target = dir.join("alloc.json");
    let stdout = rcw(&["kc", "alloc", "lengths.json"]);
    let written = rcw(&[
        "kc",
        "alloc",
        "lengths.json",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(code(&written), 0);
    assert!(written.stdout.is_empty());
    assert_eq!(std::fs::read(&target).unwrap(), stdout.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_print_schema_help() {
    let out = rcw(&["frobnicate"]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("Input forms"));
    let out = rcw(&["skt", "validate", "lengths.json"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("expected schema"));
    let out = rcw(&["profile", "--stream", "sideways:3"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("periodic:BITS"));
    let help = rcw(&["--help"]);
    assert_eq!(code(&help), 0);
}

#[test]
fn non_prefix_free_table_exits_two() {
    let out = rcw(&["machine", "validate", "not_prefix_free.json"]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["result"]["verdict"], "prefix-violation");
    let ok = rcw(&["machine", "validate", "three_entry.json"]);
    assert_eq!(code(&ok), 0);
}

#[test]
fn registry_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_rcw"))
        .args(["machine", "k", "--machine", "with-three", "--tau", "111"])
        .current_dir(fixtures())
        .env("RCW_MACHINE_REGISTRY", "registry.json")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    // table call to aux 0 costs 3 bits plus the 2-bit table program
    assert_eq!(v["result"]["value"], 5);
    assert!(v["manifest"]["inputs"]["registry.json"].is_string());
}

#[test]
fn artifacts_chain_into_later_commands() {
    let dir = std::env::temp_dir().join(format!("rcw-chain-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let machine = dir.join("kc.json");
    let built = rcw(&[
        "kc",
        "build",
        "requests.json",
        "--out",
        machine.to_str().unwrap(),
    ]);
    assert_eq!(code(&built), 0);
    let k = rcw(&[
        "machine",
        "k",
        "--machine",
        machine.to_str().unwrap(),
        "--tau",
        "0110",
    ]);
    assert_eq!(json(&k)["result"]["value"], 2);

    let family = dir.join("roc.json");
    let roc = rcw(&[
        "convert",
        "roc-to-skt",
        "--name",
        "ap:2,1",
        "--rate",
        "shift:2",
        "--stages",
        "300",
        "--out",
        family.to_str().unwrap(),
    ]);
    assert_eq!(code(&roc), 0);
    let v = rcw(&["skt", "validate", family.to_str().unwrap(), "--nmax", "3"]);
    assert_eq!(code(&v), 0);
    let c = rcw(&[
        "skt",
        "covers",
        family.to_str().unwrap(),
        "--stream",
        "periodic:10",
        "--level",
        "3",
    ]);
    assert!(json(&c)["result"]["witness"].is_string());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn immunity_verdicts_and_exit_codes() {
    let refuted = rcw(&[
        "immunity",
        "hyperimmune",
        "--set",
        "evens:4000",
        "--bound",
        "linear:2,0",
    ]);
    assert_eq!(code(&refuted), 2);
    assert_eq!(json(&refuted)["result"]["result"], "refuted-at-horizon");
    let consistent = rcw(&[
        "immunity",
        "immune",
        "--set",
        "evens:1000",
        "--witness",
        "ap:4,1:1000",
    ]);
    assert_eq!(code(&consistent), 0);
    assert_eq!(
        json(&consistent)["result"]["result"],
        "consistent-at-horizon"
    );
    let hhi = rcw(&[
        "immunity",
        "hyperhyperimmune",
        "--set",
        "evens:20",
        "--blocks",
        "blocks.json",
        "--horizon",
        "12",
        "--threshold",
        "3",
    ]);
    assert_eq!(code(&hhi), 2);
    let cohesive = rcw(&[
        "immunity",
        "cohesive",
        "--set",
        r#"{"kind":"join","left":{"kind":"random","seed":3,"horizon":500},"right":{"kind":"random","seed":3,"horizon":500}}"#,
        "--witness",
        "evens:1000",
        "--threshold",
        "100",
    ]);
    assert_eq!(code(&cohesive), 2);
    assert_eq!(json(&cohesive)["manifest"]["seeds"], serde_json::json!([3]));
    let missing = rcw(&["immunity", "immune", "--set", "evens:10"]);
    assert_eq!(code(&missing), 1);
}

#[test]
fn omega_of_three_entry_machine() {
    let out = rcw(&["omega", "--machine", "three_entry.json"]);
    assert_eq!(json(&out)["result"]["lower"], "1");
    let s = rcw(&[
        "omega-s",
        "--machine",
        "three_entry.json",
        "--s",
        "1/2",
        "--precision",
        "32",
    ]);
    let r = &json(&s)["result"];
    assert_eq!(r["lo"], "3/2^3");
    assert_eq!(r["hi"], "3/2^3");
}

#[test]
fn constructions() {
    let join = rcw(&[
        "construct",
        "join",
        "--left",
        "random:9:500",
        "--right",
        "random:9:500",
    ]);
    let r = &json(&join)["result"];
    assert_eq!(r["contains_010"], false);
    assert_eq!(r["contains_101"], false);
    let regular = rcw(&[
        "construct",
        "regular",
        "--part",
        "list:0,1/4",
        "--part",
        "list:0,1/8,1/2",
        "--stages",
        "3",
    ]);
    let r = &json(&regular)["result"];
    assert_eq!(
        r["values"],
        serde_json::json!(["0", "3/2^3", "3/2^2", "3/2^2"])
    );
    assert_eq!(r["limit"], "3/2^2");
}
