use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sl3coh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sl3coh"))
        .args(args)
        .env_remove("SL3COH_DATA")
        .output()
        .expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("each line is JSON"))
        .collect()
}

fn schema() -> jsonschema::JSONSchema {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/query_record.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&schema).expect("schema compiles")
}

fn assert_valid(schema: &jsonschema::JSONSchema, rec: &Value) {
    if let Err(errs) = schema.validate(rec) {
        let msgs: Vec<String> = errs.map(|e| format!("{e} at {}", e.instance_path)).collect();
        panic!("{rec}\n{msgs:#?}");
    }
}

#[test]
fn h2_examples() {
    let out = sl3coh(&["h2", "--p", "5", "--weight", "5,5", "--route", "both"]);
    assert!(out.status.success());
    let r = &records(&out)[0];
    assert_eq!(r["h2_pipeline"], 1);
    assert_eq!(r["h2_theorem"], 1);
    assert_eq!(r["agree"], true);

    let out = sl3coh(&["h2", "--p", "3", "--weight", "3,0", "--route", "both", "--explain"]);
    let r = &records(&out)[0];
    assert_eq!(r["h2_pipeline"], 1);
    let cites_row = r["trace"]["steps"].as_array().unwrap().iter().any(|s| {
        s["term"] == "E2^02" && s["g1_row"]["source"] == "g1_cohom.tbl" && s["g1_row"]["line"] == 12 && s["dim"] == 1
    });
    assert!(cites_row, "{r}");

    let out = sl3coh(&["h2", "--p", "5", "--weight", "0,0"]);
    assert_eq!(records(&out)[0]["h2_pipeline"], 0);
}

#[test]
fn factor_syntax_and_repeated_weights() {
    let out = sl3coh(&["h2", "--p", "5", "--weight", "3,3;3,3", "--twist", "1", "--weight", "1,1"]);
    assert!(out.status.success());
    let recs = records(&out);
    assert_eq!(recs.len(), 2);
    assert_eq!(recs[0]["weight"], serde_json::json!([90, 90]));
    assert_eq!(recs[0]["pattern_ids"], serde_json::json!(["9", "9'"]));
    // The twist applies to every weight: (1,1)^[1].
    assert_eq!(recs[1]["h2_pipeline"], 1);
}

#[test]
fn linkage_and_ext1() {
    let r = &records(&sl3coh(&["linkage", "--p", "5", "--weight", "3,3"]))[0];
    assert_eq!(r["linked"], true);
    let r = &records(&sl3coh(&["ext1", "--p", "5", "--row", "1,0", "--mu", "3,2"]))[0];
    assert_eq!(r["dim"], 1);
    assert_eq!(r["family"]["line"], 8);
    let r = &records(&sl3coh(&["ext1", "--p", "5", "--row", "0,0", "--mu", "0,0"]))[0];
    assert_eq!(r["dim"], 0);
    let out = sl3coh(&["ext1", "--p", "5", "--row", "2,2", "--mu", "0,0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    assert_eq!(sl3coh(&["h2", "--p", "4", "--weight", "1,1"]).status.code(), Some(1));
    assert_eq!(sl3coh(&["h2", "--p", "5", "--weight", "1,x"]).status.code(), Some(1));
    assert_eq!(sl3coh(&["h2", "--p", "5", "--weight", "7,0;1,1"]).status.code(), Some(1));
    assert_eq!(sl3coh(&["h2", "--p", "5", "--weight", "1,1", "--errata", "maybe"]).status.code(), Some(1));
    assert_eq!(sl3coh(&["nonsense"]).status.code(), Some(1));
    assert_eq!(sl3coh(&["--help"]).status.code(), Some(0));
    assert_eq!(sl3coh(&["--version"]).status.code(), Some(0));
    let big = format!("{},0", 5i64.pow(12));
    assert_eq!(sl3coh(&["h2", "--p", "5", "--weight", &big]).status.code(), Some(1));

    // (1,1)*(0,1)^[1] at p = 3: family 3 says K, the pipeline says 0.
    let args = ["h2", "--p", "3", "--weight", "1,4", "--route", "both"];
    let out = sl3coh(&args);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(records(&out)[0]["agree"], false);
    let strict: Vec<&str> = args.iter().copied().chain(["--strict"]).collect();
    let out = sl3coh(&strict);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(records(&out).len(), 1);
    assert_eq!(sl3coh(&["h2", "--p", "5", "--weight", "5,5", "--strict"]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["h2", "--p", "3", "--weight", "3,0", "--weight", "27,27", "--explain"],
        vec!["table", "--p", "3", "--max", "27"],
        vec!["crosscheck", "--p", "2,3", "--max-len", "3"],
    ] {
        let a = sl3coh(&args);
        let b = sl3coh(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn every_record_matches_the_schema() {
    let schema = schema();
    let runs: Vec<Vec<&str>> = vec![
        vec!["h2", "--p", "3", "--weight", "3,0", "--weight", "1,4", "--weight", "0,0", "--explain"],
        vec!["h2", "--p", "5", "--weight", "3,3;3,3", "--twist", "2", "--explain"],
        vec!["h2", "--p", "2", "--weight", "1,1", "--route", "theorem"],
        vec!["h2", "--p", "7", "--weight", "5,5", "--route", "pipeline", "--explain"],
        vec!["linkage", "--p", "5", "--weight", "3,3", "--weight", "30,1"],
        vec!["ext1", "--p", "3", "--row", "1,1", "--mu", "4,1"],
        vec!["ext1", "--p", "3", "--row", "1,1", "--mu", "4,1", "--errata", "off"],
        vec!["ext1", "--p", "5", "--row", "0,0", "--mu", "0,0"],
    ];
    for args in runs {
        let out = sl3coh(&args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        for rec in records(&out) {
            assert_valid(&schema, &rec);
        }
    }
    let bad = serde_json::json!({"kind": "h2", "p": 5, "weight": [1, -1], "twist": 0, "decomposition": "", "route": "both"});
    assert!(!schema.is_valid(&bad));
}

#[test]
fn table_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p7.csv");
    let out = sl3coh(&["table", "--p", "7", "--max", "1", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, "a,b,h2_pipeline,h2_theorem,agree,pattern_ids,e2_02,e2_11,e2_20\n0,0,0,0,true,,0,0,0\n");

    let out = sl3coh(&["table", "--p", "2", "--max", "16", "--discrepancies-only"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.split(',').nth(4) == Some("false")));

    let out = sl3coh(&["table", "--p", "5", "--max", "5", "--output", "/nonexistent/dir/x.csv"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn crosscheck_report_shape() {
    let out = sl3coh(&["crosscheck", "--p", "5,7", "--max-len", "2"]);
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let primes = report["primes"].as_array().unwrap();
    assert_eq!(primes.len(), 2);
    assert!(primes.iter().all(|p| p["discrepancies"].as_array().unwrap().is_empty()));
    assert_eq!(sl3coh(&["crosscheck", "--p", "3", "--max-len", "2", "--strict"]).status.code(), Some(2));
}

#[test]
fn data_directory_override() {
    let dir = tempfile::tempdir().unwrap();
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data");
    for f in ["g1_cohom.tbl", "ext1.tbl"] {
        std::fs::copy(data.join(f), dir.path().join(f)).unwrap();
    }
    let run = |dir: &Path| {
        Command::new(env!("CARGO_BIN_EXE_sl3coh"))
            .args(["ext1", "--p", "3", "--row", "1,1", "--mu", "4,1"])
            .env("SL3COH_DATA", dir)
            .output()
            .unwrap()
    };
    // Without an overlay file the printed "(1.1)" entry stays unreadable.
    let out = run(dir.path());
    assert!(out.status.success());
    assert_eq!(records(&out)[0]["dim"], 0);
    std::fs::copy(data.join("errata.overlay"), dir.path().join("errata.overlay")).unwrap();
    assert_eq!(records(&run(dir.path()))[0]["dim"], 1);
    assert_eq!(run(Path::new("/nonexistent/sl3coh")).status.code(), Some(1));
}

#[test]
fn crosscheck_matches_committed_snapshots() {
    for q in ["2", "3"] {
        let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("../core/tests/golden/crosscheck_p{q}.json"));
        let out = sl3coh(&["crosscheck", "--p", q, "--max-len", "4"]);
        assert!(out.status.success());
        assert_eq!(String::from_utf8(out.stdout).unwrap(), std::fs::read_to_string(golden).unwrap(), "p={q}");
    }
}
