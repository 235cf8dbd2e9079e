use std::path::PathBuf;
use std::process::Command;

use nestprof::cli::{run, EXIT_INPUT, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn nestprof(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("nestprof").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn lines(s: &str) -> Vec<serde_json::Value> {
    s.lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn spider_reports_two_thirds() {
    let f = fixture("overlap.jsonl");
    let (code, out, _) = nestprof(&["mine", "--input", &f, "--kind", "ind", "--algorithm", "spider", "--threshold", "0.6"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains(r#"{"kind":"nind","lhs":["$.b[*]"],"rhs":"$.a[*]","strength":0.666667,"satisfied":true}"#));
}

#[test]
fn exact_fdep_omits_violated_dependency() {
    let f = fixture("overlap.jsonl");
    let (code, out, _) = nestprof(&["mine", "--input", &f, "--kind", "fd", "--algorithm", "fdep", "--threshold", "1.0"]);
    assert_eq!(code, EXIT_OK);
    assert!(lines(&out).iter().all(|r| !(r["lhs"][0] == "$.a[*]" && r["rhs"] == "$.b[*]")));
}

#[test]
fn verify_printings_strength() {
    let f = fixture("printings.jsonl");
    let (code, out, _) = nestprof(&["verify", "--input", &f, "$.printings[*] < $.set"]);
    assert_eq!(code, EXIT_OK);
    let r = &lines(&out)[0];
    assert_eq!(r["strength"].as_f64(), Some(0.995));
    assert_eq!(r["valid"], false);
    assert_eq!(r["satisfied"], true);
}

#[test]
fn verify_index_paths_and_functional() {
    let f = fixture("product.json");
    let (code, out, _) = nestprof(&["verify", "-i", &f, "--format", "json-array", "$.categories[*][1] < $.categories[*][1]"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(lines(&out)[0]["valid"], true);
    let f = fixture("relations.jsonl");
    let (code, out, _) = nestprof(&["verify", "-i", &f, "$.id -> $.rel[*]"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(lines(&out)[0]["valid"], true);
    let f = fixture("overlap.jsonl");
    let (_, out, _) = nestprof(&["verify", "-i", &f, "$.a[*] -> $.b[*]"]);
    let r = &lines(&out)[0];
    assert_eq!((r["valid"].as_bool(), r["strength"].as_f64()), (Some(false), Some(0.5)));
}

#[test]
fn output_is_sorted_and_timed() {
    let f = fixture("relations.jsonl");
    let (code, out, _) = nestprof(&["mine", "-i", &f, "--kind", "fd", "--timing", "--threshold", "1"]);
    assert_eq!(code, EXIT_OK);
    let recs = lines(&out);
    let (timing, deps) = recs.split_last().unwrap();
    assert!(timing["phase_collect_s"].is_f64() && timing["phase_mine_s"].is_f64());
    assert_eq!(timing["rows_processed"], 4);
    let keys: Vec<(Vec<String>, String)> = deps
        .iter()
        .map(|r| {
            let lhs = r["lhs"].as_array().unwrap().iter().map(|p| p.as_str().unwrap().to_string()).collect();
            (lhs, r["rhs"].as_str().unwrap().to_string())
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(keys.contains(&(vec!["$.id".into()], "$.main".into())));
}

#[test]
fn usage_errors() {
    let f = fixture("overlap.jsonl");
    assert_eq!(nestprof(&["mine", "-i", &f, "--kind", "ind", "--algorithm", "tane"]).0, EXIT_USAGE);
    assert_eq!(nestprof(&["mine", "-i", &f, "--threshold", "0"]).0, EXIT_USAGE);
    assert_eq!(nestprof(&["mine", "-i", &f, "--threshold", "-0.5"]).0, EXIT_USAGE);
    assert_eq!(nestprof(&["mine", "-i", &f, "--kind", "fd", "--max-lhs", "0"]).0, EXIT_USAGE);
    assert_eq!(nestprof(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(nestprof(&["verify", "-i", &f, "$.a"]).0, EXIT_USAGE);
    assert_eq!(nestprof(&["--help"]).0, EXIT_OK);
}

#[test]
fn input_errors() {
    let f = fixture("product.json");
    let (code, _, err) = nestprof(&["mine", "-i", &f, "--format", "json-array", "--kind", "fd"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("insufficient documents"));
    assert_eq!(nestprof(&["mine", "-i", "/nonexistent/file.jsonl"]).0, EXIT_INPUT);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, "{\"a\":1}{").unwrap();
    let (code, _, err) = nestprof(&["mine", "-i", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("document 2"), "{err}");
}

#[test]
fn gen_is_deterministic_and_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("spec.json");
    std::fs::write(
        &cfg,
        r#"{"seed": 3, "n_docs": 50, "n_array_keys": 2, "array_len": 4,
            "planted": [{"kind": "inclusion", "lhs": "s0", "rhs": "a0"}]}"#,
    )
    .unwrap();
    let a = nestprof(&["gen", "--config", cfg.to_str().unwrap()]);
    let b = nestprof(&["gen", "--config", cfg.to_str().unwrap()]);
    assert_eq!(a.0, EXIT_OK);
    assert_eq!(a, b);
    assert_eq!(a.1.lines().count(), 50);
    let data = dir.path().join("data.jsonl");
    std::fs::write(&data, &a.1).unwrap();
    let (code, out, _) = nestprof(&["verify", "-i", data.to_str().unwrap(), "$.s0 < $.a0[*]"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(lines(&out)[0]["valid"], true);
    std::fs::write(&cfg, r#"{"planted": [{"kind": "inclusion", "lhs": "s9", "rhs": "a0"}]}"#).unwrap();
    assert_eq!(nestprof(&["gen", "--config", cfg.to_str().unwrap()]).0, EXIT_USAGE);
}

#[test]
fn unroll_writes_csv() {
    let f = fixture("product.json");
    let (code, out, _) = nestprof(&["unroll", "-i", &f, "--format", "json-array"]);
    assert_eq!(code, EXIT_OK);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[0].starts_with("_doc,$.asin,$.salesRank.Music,"));
}

#[test]
fn bench_prints_table() {
    let (code, out, _) = nestprof(&["bench", "--sizes", "20,40", "--algorithms", "spider,tane"]);
    assert_eq!(code, EXIT_OK, "{out}");
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[0].contains("improvement"));
    assert!(rows[1].contains("spider"));
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().join("out.jsonl");
    let f = fixture("overlap.jsonl");
    let (code, out, _) = nestprof(&["mine", "-i", &f, "-o", o.to_str().unwrap(), "--threshold", "0.5"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    assert_eq!(std::fs::read_to_string(o).unwrap().lines().count(), 2);
}

#[test]
fn memory_cap_exits_with_resource_code() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("big.jsonl");
    let (code, _, _) = nestprof(&["gen", "--docs", "2000", "-o", data.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let run = |cap: &str| {
        Command::new(env!("CARGO_BIN_EXE_nestprof"))
            .args(["mine", "-i", data.to_str().unwrap(), "--unroll", "static"])
            .env("NESTPROF_MAX_MEM_MB", cap)
            .output()
            .unwrap()
    };
    let capped = run("0");
    assert_eq!(capped.status.code(), Some(EXIT_RESOURCE));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("exceeds the limit"));
    assert_eq!(run("4096").status.code(), Some(EXIT_OK));
}
