use std::path::Path;
use std::process::Command;

use lcong::cli::config::SweepConfig;
use lcong::cli::{run_sweep, run_with};

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(std::iter::once("lcong").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

const SWEEP: &str = r#"
[[jobs]]
id = "1.3"
k = "0..20:2"
n = "1..6"
q = [1, 3, 5]

[[jobs]]
id = "1.4"
p = 2
m = "3..5"
k = "0..20"
n = "1..3"
q = [1, 3]
"#;

fn config() -> SweepConfig {
    SweepConfig::from_toml(SWEEP).unwrap()
}

fn body(dir: &Path) -> String {
    let jsonl = std::fs::read_to_string(dir.join("report.jsonl")).unwrap();
    let (header, rest) = jsonl.split_once('\n').unwrap();
    assert!(header.contains("\"record\":\"header\""));
    rest.to_string()
}

#[test]
fn sweep_writes_reports_without_failures() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("sweep.toml");
    std::fs::write(&cfg_path, SWEEP).unwrap();
    let out = dir.path().join("out");
    let (code, stdout, stderr) =
        run(&["sweep", "--config", cfg_path.to_str().unwrap(), "--output", out.to_str().unwrap(), "--summary-only"]);
    assert_eq!(code, 0, "{stdout}{stderr}");
    assert!(stdout.contains("fails 0"), "{stdout}");
    let csv = std::fs::read_to_string(out.join("report.csv")).unwrap();
    assert!(csv.starts_with("id,branch,params,holds"));
    // out-of-hypothesis points (wrong parity, imprimitive) are skips, not verdicts
    assert!(body(&out).contains("\"record\":\"skip\""));
}

#[test]
fn reports_are_deterministic_and_parallelism_independent() {
    let dirs: Vec<_> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
    let mut bodies = Vec::new();
    let mut csvs = Vec::new();
    for (dir, width) in dirs.iter().zip([1, 4, 4]) {
        let mut cfg = config();
        cfg.output = Some(dir.path().to_path_buf());
        cfg.parallelism = Some(width);
        let report = run_sweep(&cfg).unwrap();
        assert!(report.all_hold());
        // the config (with its parallelism) is echoed in the body, so compare without it
        bodies.push(body(dir.path()).split_once('\n').unwrap().1.to_string());
        csvs.push(std::fs::read_to_string(dir.path().join("report.csv")).unwrap());
    }
    assert_eq!(bodies[1], bodies[2]);
    assert_eq!(csvs[1], csvs[2]);
    assert_eq!(bodies[0], bodies[1]);
    assert_eq!(csvs[0], csvs[1]);
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    let cache_s = cache.to_str().unwrap();
    let (code, ..) = run(&["verify", "1.4", "--p", "2", "--m", "3..4", "--k", "0..6", "--n", "1", "--q", "1", "--cache", cache_s]);
    assert_eq!(code, 0);
    let (code, stat, _) = run(&["cache", "stat", "--cache", cache_s]);
    assert_eq!(code, 0);
    assert!(!stat.contains(" 0 entries"), "{stat}");
    let (code, verify, _) = run(&["cache", "verify", "--cache", cache_s, "--sample", "1000"]);
    assert_eq!(code, 0);
    assert!(verify.contains("0 mismatched, 0 corrupt"), "{verify}");

    // a second run appends nothing new
    let before = std::fs::read_to_string(&cache).unwrap();
    run(&["verify", "1.4", "--p", "2", "--m", "3..4", "--k", "0..6", "--n", "1", "--q", "1", "--cache", cache_s]);
    assert_eq!(std::fs::read_to_string(&cache).unwrap(), before);

    std::fs::write(&cache, format!("{before}{{\"p\":2,\"m\":3,\"exponents\":[0,1],\"bernoulli_index\":9}}\n")).unwrap();
    let (code, verify, _) = run(&["cache", "verify", "--cache", cache_s]);
    assert_eq!(code, 3);
    assert!(verify.contains("j=9"), "{verify}");
    let (code, _, err) = run(&["verify", "1.3", "--k", "0", "--n", "1", "--q", "1", "--cache", cache_s]);
    assert_eq!(code, 3, "{err}");

    assert_eq!(run(&["cache", "clear", "--cache", cache_s]).0, 0);
    let (_, stat, _) = run(&["cache", "stat", "--cache", cache_s]);
    assert!(stat.contains(" 0 entries"), "{stat}");
}

#[test]
fn flags_override_config_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("c.toml");
    std::fs::write(&cfg_path, "[[jobs]]\nid = \"1.2\"\np = 3\nk = 0\nl = 2\n").unwrap();
    let cfg = cfg_path.to_str().unwrap();
    // E_0 - E_2 = 2 is not divisible by 3
    assert_eq!(run(&["verify", "1.2", "--config", cfg]).0, 1);
    assert_eq!(run(&["verify", "1.2", "--config", cfg, "--k", "2", "--l", "4"]).0, 0);
}

#[test]
fn distinct_errors() {
    let (code, _, err) = run(&["verify", "7.7"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown congruence id"));
    assert_eq!(run(&["verify", "1.3", "--k", "5..2", "--n", "1", "--q", "1"]).0, 2);
    assert_eq!(run(&["sweep", "--config", "/nonexistent/sweep.toml"]).0, 2);

    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let out = blocker.join("reports");
    let (code, _, err) = run(&["verify", "1.3", "--k", "0", "--n", "1", "--q", "1", "--output", out.to_str().unwrap()]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn binary_honours_cache_dir_variable() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_lcong"))
        .args(["verify", "1.4", "--chi", "2^3:0,1", "--k", "1", "--n", "1", "--q", "1"])
        .env("LCONG_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0), "{}", String::from_utf8_lossy(&status.stderr));
    assert!(String::from_utf8_lossy(&status.stdout).contains("1.4"));
    assert!(dir.path().join("generalized-bernoulli.jsonl").exists());

    let usage = Command::new(env!("CARGO_BIN_EXE_lcong")).arg("frobnicate").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}
