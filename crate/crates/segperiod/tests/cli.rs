//! End-to-end tests of the command line binary: output schema, batch
//! mode, registry overrides, and exit codes.

use std::io::Write;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_segperiod"))
}

fn run_ok(args: &[&str]) -> String {
    let out = bin().args(args).output().expect("spawn");
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8")
}

#[test]
fn classify_json_schema() {
    let text = run_ok(&["classify", "Z([mu*v^-1/2 .. mu*v^5/2])", "--json"]);
    let v: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(v["verdict"], "distinguished");
    assert_eq!(v["input"], "Z([mu*v^-1/2 .. mu*v^5/2])");
    assert_eq!(v["rules"][0]["id"], "T3.5");
    assert!(v["rules"][0]["citation"]
        .as_str()
        .unwrap()
        .contains("Theorem 3(5)"));
    assert!(v["normalized"].is_string());
}

#[test]
fn plain_and_json_verdicts_agree() {
    for expr in [
        "Z([rho2*v^0 .. rho2*v^1])",
        "L([rho2*v^0 .. rho2*v^1])",
        "chi x rho3",
    ] {
        let plain = run_ok(&["classify", expr]);
        let json = run_ok(&["classify", expr, "--json"]);
        let v: serde_json::Value = serde_json::from_str(json.trim()).unwrap();
        assert!(plain.starts_with(v["verdict"].as_str().unwrap()));
    }
}

#[test]
fn dual_worked_example() {
    let out = run_ok(&["dual", "[mu*v^3/2 .. mu*v^5/2];[mu*v^-1/2 .. mu*v^1/2]"]);
    assert_eq!(out.trim(), "[mu*v^5/2];[mu*v^1/2 .. mu*v^3/2];[mu*v^-1/2]");
}

#[test]
fn leq_example() {
    let out = run_ok(&[
        "leq",
        "[chi*v^-1 .. chi*v^3]",
        "[chi*v^-1 .. chi*v^1];[chi*v^3]",
    ]);
    assert_eq!(out.trim(), "true");
}

#[test]
fn enumerate_counts() {
    let out = run_ok(&["enumerate", "[chi*v^-2];[chi*v^0];[chi*v^2]", "--json"]);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["count"], 4);
}

#[test]
fn decompose_json_keys() {
    let out = run_ok(&["decompose", "Z([chi*v^-1]) x Z([chi*v^1])", "--json"]);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["irreducible"], false);
    assert_eq!(v["sub"], "Z([chi*v^-1 .. chi*v^1])");
    assert!(v["quotient"].is_string());
    assert_eq!(v["subquotients"].as_array().unwrap().len(), 2);
}

#[test]
fn jacquet_terms() {
    let out = run_ok(&["jacquet", "--cut", "1", "Z([mu*v^-1/2 .. mu*v^1/2])", "--json"]);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["terms"][0]["left"], "mu*v^-1/2");
    assert_eq!(v["terms"][0]["right"], "mu*v^1/2");
}

#[test]
fn batch_preserves_order_and_count() {
    let dir = std::env::temp_dir().join(format!("segperiod-batch-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("exprs.txt");
    let lines = [
        "chi",
        "mu",
        "Z([rho2*v^0 .. rho2*v^1])",
        "bogus*v^0",
        "L([chi*v^-1 .. chi*v^1]) x chi",
    ];
    let mut f = std::fs::File::create(&file).unwrap();
    for l in lines {
        writeln!(f, "{l}").unwrap();
    }
    drop(f);
    let out = run_ok(&["batch", file.to_str().unwrap()]);
    let records: Vec<serde_json::Value> = out
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(records.len(), lines.len());
    for (rec, input) in records.iter().zip(lines) {
        assert_eq!(rec["input"], input);
    }
    assert_eq!(records[0]["verdict"], "distinguished");
    assert_eq!(records[1]["verdict"], "not_distinguished");
    assert!(records[3]["error"].as_str().unwrap().contains("unknown label"));
    assert_eq!(records[4]["verdict"], "distinguished");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn support_file_changes_verdicts() {
    let dir = std::env::temp_dir().join(format!("segperiod-support-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("support.toml");
    std::fs::write(
        &file,
        r#"
[chi]
group = 1
class = "character"

[rho3]
group = 3
sp_status = "distinguished"
"#,
    )
    .unwrap();
    let out = run_ok(&[
        "classify",
        "chi x rho3",
        "--support",
        file.to_str().unwrap(),
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["verdict"], "distinguished");

    // The same registry through the environment fallback.
    let out = bin()
        .args(["classify", "chi x rho3", "--json"])
        .env("SEGPERIOD_SUPPORT", file.to_str().unwrap())
        .output()
        .unwrap();
    let v: serde_json::Value =
        serde_json::from_str(String::from_utf8(out.stdout).unwrap().trim()).unwrap();
    assert_eq!(v["verdict"], "distinguished");

    // Default registry leaves the cuspidal status open.
    let out = run_ok(&["classify", "chi x rho3", "--json"]);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["verdict"], "inconclusive");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exit_codes() {
    // Parse error.
    let out = bin()
        .args(["classify", "Z([chi*v^0 .. chi*v^1])"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    // Unsupported weight.
    let out = bin()
        .args(["classify", "Z([mu*v^0 .. mu*v^4])"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // Unsupported restriction presentation.
    let out = bin()
        .args(["jacquet", "--cut", "1", "Z([mu*v^0];[mu*v^1])"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn induced_flag_uses_orbit_analysis() {
    let out = run_ok(&[
        "classify",
        "L([mu*v^-1/2 .. mu*v^1/2]) x chi",
        "--induced",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["verdict"], "not_distinguished");
    assert_eq!(v["rules"][0]["id"], "IND.NONE");
}
