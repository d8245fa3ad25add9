use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn run_case(path: &Path) -> Result<(), String> {
    let fx: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let inputs = fixtures().join("inputs");
    let args: Vec<String> = fx["args"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a.as_str().unwrap().replace("{inputs}", inputs.to_str().unwrap()))
        .collect();
    let out = Command::new(env!("CARGO_BIN_EXE_cremona")).args(&args).output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    let stderr = String::from_utf8_lossy(&out.stderr);
    let code = out.status.code().unwrap_or(-1) as i64;
    if code != fx["exit"].as_i64().unwrap() {
        return Err(format!("exit {code}, expected {}; stderr: {stderr}", fx["exit"]));
    }
    if let Some(expected) = fx.get("stdout_json") {
        let got: Value = serde_json::from_str(&stdout).map_err(|e| format!("bad JSON ({e}): {stdout}"))?;
        if &got != expected {
            return Err(format!("JSON differs:\n{}", serde_json::to_string_pretty(&got).unwrap()));
        }
    }
    if let Some(expected) = fx.get("stdout").and_then(Value::as_str) {
        if stdout != expected {
            return Err(format!("stdout differs:\n{stdout}"));
        }
    }
    if let Some(needle) = fx.get("stderr_contains").and_then(Value::as_str) {
        if !stderr.contains(needle) {
            return Err(format!("stderr lacks {needle:?}: {stderr}"));
        }
    }
    Ok(())
}

#[test]
fn cli_fixtures() {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(fixtures().join("cli"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    assert!(paths.len() >= 20);
    let failures: Vec<String> = paths
        .iter()
        .filter_map(|p| run_case(p).err().map(|e| format!("{}: {e}", p.file_stem().unwrap().to_string_lossy())))
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n\n"));
}

// invariants and order agree for every representative the CLI lists
#[test]
fn classify_representatives_round_trip() {
    let bin = env!("CARGO_BIN_EXE_cremona");
    for n in [5u64, 6, 9] {
        let out = Command::new(bin).args(["--json", "classify", "--order", &n.to_string(), "--family-size", "1"]).output().unwrap();
        assert!(out.status.success());
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        for rep in v["representatives"].as_array().unwrap() {
            let map = rep["map"].as_str().unwrap();
            let mut args = vec!["--json", "order"];
            match rep.get("surface").and_then(Value::as_str) {
                Some(s) => args.extend(["--surface", s, "--aut", map]),
                None => args.extend(["--map", map]),
            }
            let out = Command::new(bin).args(&args).output().unwrap();
            assert!(out.status.success(), "{map}: {}", String::from_utf8_lossy(&out.stderr));
            let o: Value = serde_json::from_slice(&out.stdout).unwrap();
            assert_eq!(o["order"].as_u64(), Some(n), "{map}");
        }
    }
}
