use std::path::PathBuf;
use std::process::{Command, Output};

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("icosa-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn icosa(cache: &PathBuf, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_icosa"))
        .args(args)
        .env("ICOSA_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn intersect_and_chi() {
    let dir = scratch("classes");
    let o = icosa(&dir, &["intersect", "40H-5E5-7E3-8E2", "15H-5E5-3E3-2E2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0");

    let o = icosa(&dir, &["intersect", "40H-5E5-7E3-8E2", "40H-5E5-7E3-8E2"]);
    assert_eq!(stdout(&o).trim(), "0");

    let o = icosa(&dir, &["chi", "42H-5E5-7E3-8E2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "36");
}

#[test]
fn usage_errors_exit_two() {
    let dir = scratch("usage");
    assert_eq!(icosa(&dir, &["chi", "40H-5E5-5E5"]).status.code(), Some(2));
    assert_eq!(icosa(&dir, &["chi", "40Q"]).status.code(), Some(2));
    assert_eq!(icosa(&dir, &["verify", "everything"]).status.code(), Some(2));
    assert_eq!(icosa(&dir, &["alpha", "--orbit", "sextuple", "--m", "2"]).status.code(), Some(2));
    assert_eq!(icosa(&dir, &["alpha", "--orbit", "double", "--m", "0"]).status.code(), Some(2));
    assert_eq!(icosa(&dir, &["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_group_writes_json() {
    let dir = scratch("verify");
    let json = dir.join("group.json");
    let o = icosa(&dir, &["verify", "group", "--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("overall: pass"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["suite"], "group");
    assert!(v["timing_ms"].is_u64());
    let claims = v["claims"].as_array().unwrap();
    assert!(!claims.is_empty());
    for c in claims {
        assert_eq!(c["status"], "pass");
        for k in ["id", "anchor", "details"] {
            assert!(c[k].is_string());
        }
    }
}

#[test]
fn alpha_is_cached_and_revalidated() {
    let dir = scratch("alpha");
    let json = dir.join("q5.json");
    let o = icosa(&dir, &["alpha", "--orbit", "quintuple", "--m", "5", "--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("= 12"), "{out}");
    assert!(out.contains("ratio alpha/m = 12/5"));
    assert!(out.contains("certificate: computed"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["alpha"], 12);
    assert_eq!(v["ratio"], "12/5");

    let again = stdout(&icosa(&dir, &["alpha", "--orbit", "quintuples", "--m", "5"]));
    assert!(again.contains("certificate: cached, revalidated"), "{again}");

    // A corrupted object is detected by its hash and recomputed.
    let objects = dir.join("objects");
    for e in std::fs::read_dir(&objects).unwrap() {
        std::fs::write(e.unwrap().path(), b"{}").unwrap();
    }
    let o = icosa(&dir, &["alpha", "--orbit", "quintuple", "--m", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("certificate: computed"));
}

#[test]
fn alpha_small_cases() {
    let dir = scratch("alpha-small");
    let o = icosa(&dir, &["alpha", "--orbit", "double", "--m", "2"]);
    assert!(stdout(&o).contains("for doubles = 6"));
    let o = icosa(&dir, &["alpha", "--orbit", "all", "--m", "1"]);
    assert!(stdout(&o).contains("for all = 6"));
    let o = icosa(&dir, &["alpha", "--orbit", "all", "--m", "3", "--max-degree", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("inconclusive"));
}

#[test]
fn bounds_for_quintuples() {
    let dir = scratch("bounds");
    let o = icosa(&dir, &["bounds", "--orbit", "quintuple"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("lower 12/5"), "{out}");
    assert!(out.contains("upper 12/5"));
    assert!(out.contains("verdict 12/5"));
}

#[test]
fn render_default_chart() {
    let dir = scratch("render");
    let svg = dir.join("a.svg");
    let inc = dir.join("a.json");
    let o = icosa(&dir, &["render", "--out", svg.to_str().unwrap(), "--incidence", inc.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("15 lines, 26 finite points"), "{out}");
    assert!(out.contains("5 points at infinity"));
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&inc).unwrap()).unwrap();
    assert_eq!(v["lines"].as_array().unwrap().len(), 15);
    assert_eq!(v["points"].as_array().unwrap().len(), 31);

    let bad = icosa(&dir, &["render", "--patch", "x*y", "--out", svg.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));
}
