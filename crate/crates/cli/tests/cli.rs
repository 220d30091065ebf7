//! Invocations of the `mzv` tool through `run`, checking output and exit
//! status.

use mzv_cli::run;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn mzv(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("mzv").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Outcome { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

#[test]
fn dims_table_ends_with_d12() {
    let o = mzv(&["dims", "--max", "12"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.lines().last(), Some("12: 12"));
    assert_eq!(o.stdout.lines().count(), 13);
}

#[test]
fn ihara_takao_passes() {
    let o = mzv(&["ihara-takao"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("depth-2 component: 0 — PASS"), "{}", o.stdout);
}

#[test]
fn weight12_relation_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("rel52.json");
    std::fs::write(&file, r#"{"combination": "28*z(3,9) + 150*z(5,7) + 168*z(7,5)"}"#).unwrap();
    let o = mzv(&["check-relation", "--file", file.to_str().unwrap(), "--digits", "50"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.stdout.trim(), "holds with c = 5197/691");
}

#[test]
fn failing_relation_exits_one() {
    let o = mzv(&["check-relation", "z(3,9)"]);
    assert_eq!(o.code, 1);
    assert!(o.stdout.starts_with("fails"), "{}", o.stdout);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["frobnicate"][..],
        &[],
        &["dims", "--max", "many"],
        &["dims", "--digits", "5"],
        &["associator", "--truncation", "13"],
        &["eval-mzv", "2,1"],
        &["shuffle", "10", "12"],
        &["coaction", "z(2,3)", "--r", "4"],
        &["check-relation"],
        &["modular", "cocycle", "--forms", "e5"],
        &["modular", "cocycle", "--gamma", "1,1,1,1", "--forms", "e4"],
    ] {
        let o = mzv(args);
        assert_eq!(o.code, 2, "{args:?}: {}", o.stdout);
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
    let o = mzv(&["frobnicate"]);
    assert!(o.stderr.contains("Usage"), "{}", o.stderr);
}

#[test]
fn help_exits_zero() {
    let o = mzv(&["--help"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("check-relation"));
}

#[test]
fn algebra_commands() {
    assert_eq!(mzv(&["shuffle", "10", "10"]).stdout.trim(), "2·1010 + 4·1100");
    assert_eq!(mzv(&["regularize", "010"]).stdout.trim(), "-2·ζ(3)");
    assert_eq!(mzv(&["coaction", "z(2,3)"]).stdout.trim(), "[zu(2,3)] ⊗ (1) + [zu(3)] ⊗ (3*z(2))");
    assert_eq!(mzv(&["coaction", "z(4)"]).stdout.trim(), "0");
    let lyn = mzv(&["lyndon", "--max-weight", "8"]);
    assert_eq!(lyn.stdout.lines().last(), Some("count: 5"));
    let bk = mzv(&["bk-series", "--max", "12", "--depth", "4"]);
    let row: Vec<u32> = bk.stdout.lines().last().unwrap()[4..].split(' ').map(|x| x.parse().unwrap()).collect();
    assert_eq!(row.iter().sum::<u32>(), 12);
    let comp = mzv(&["ihara-compose", "1 + x0x1", "1", "--truncation", "4"]);
    assert_eq!(comp.stdout.lines().collect::<Vec<_>>(), ["1 · 1", "1 · x0x1"]);
}

#[test]
fn numeric_checks_pass() {
    let o = mzv(&["eval-mzv", "2,3", "--digits", "30"]);
    assert_eq!(o.stdout.trim(), "ζ(2,3) = 0.228810397603353759768746148942");
    assert_eq!(mzv(&["zagier-check", "--max-sum", "3"]).code, 0);
    assert_eq!(mzv(&["ramanujan-check"]).code, 0);
    let z = mzv(&["associator", "--truncation", "3", "--digits", "20"]);
    assert!(z.stdout.lines().any(|l| l.starts_with("x1x0: 1.64493406")), "{}", z.stdout);
    let s = mzv(&["associator", "--symbolic", "--truncation", "2"]);
    assert_eq!(s.stdout.lines().collect::<Vec<_>>(), ["1: 1", "x0x1: -z(2)", "x1x0: z(2)"]);
}

#[test]
fn modular_commands() {
    let o = mzv(&["modular", "eisenstein-check", "--weight", "6"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert_eq!(mzv(&["modular", "cusp-relations"]).code, 0);
    assert_eq!(mzv(&["modular", "t-structure", "--forms", "e4,delta"]).code, 0);
    let q = mzv(&["modular", "qexp", "--form", "delta", "--order", "3"]);
    assert_eq!(q.stdout.lines().collect::<Vec<_>>(), ["0: 0", "1: 1", "2: -24", "3: 252"]);
    let c = mzv(&["modular", "cocycle", "--gamma", "S", "--forms", "e4", "--digits", "30"]);
    assert_eq!(mzv(&["modular", "cocycle", "--gamma", "ST", "--forms", "e4", "--tau", "-0.5+i"]).code, 0);
    assert!(c.stdout.starts_with("[e4]: (1.2020569031595942854 + 0i) Y^2"), "{}", c.stdout);
}

#[test]
fn json_output_is_deterministic() {
    let args = ["modular", "cocycle", "--gamma", "ST", "--forms", "e4,e6", "--depth", "2", "--digits", "30", "--format", "json"];
    let a = mzv(&args);
    let b = mzv(&args);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(a.stdout.trim()).unwrap();
    assert_eq!(v["depth"], 2);
    for line in mzv(&["dims", "--max", "5", "--format", "json"]).stdout.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["d"].is_string());
    }
}

#[test]
fn relation_db_caches_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("relations.jsonl");
    let args = ["check-relation", "z(2,2)", "--db", db.to_str().unwrap(), "--format", "json"];
    let first = mzv(&args);
    assert_eq!(first.code, 0, "{}", first.stderr);
    let v: serde_json::Value = serde_json::from_str(first.stdout.trim()).unwrap();
    assert_eq!(v["verdict"], "holds");
    assert_eq!(v["c"], "3/4");
    assert_eq!(v["cached"], false);
    let second: serde_json::Value = serde_json::from_str(mzv(&args).stdout.trim()).unwrap();
    assert_eq!(second["cached"], true);
    assert_eq!(std::fs::read_to_string(&db).unwrap().lines().count(), 1);
    // nothing else is written next to the database
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn config_file_sets_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("mzv.toml");
    std::fs::write(&cfg, "precision = 20\nformat = \"json\"\n").unwrap();
    let o = mzv(&["eval-mzv", "3", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    let v: serde_json::Value = serde_json::from_str(o.stdout.trim()).unwrap();
    assert_eq!(v["digits"], 20);
    std::fs::write(&cfg, "truncation = 40\n").unwrap();
    assert_eq!(mzv(&["dims", "--config", cfg.to_str().unwrap()]).code, 2);
}

struct ClosedPipe;

impl std::io::Write for ClosedPipe {
    fn write(&mut self, _: &[u8]) -> std::io::Result<usize> {
        Err(std::io::ErrorKind::BrokenPipe.into())
    }

    fn flush(&mut self) -> std::io::Result<()> {
        Ok(())
    }
}

#[test]
fn closed_stdout_is_not_an_error() {
    let mut err = Vec::new();
    assert_eq!(run(["mzv", "dims"], &mut ClosedPipe, &mut err), 0);
    assert!(err.is_empty());
}
