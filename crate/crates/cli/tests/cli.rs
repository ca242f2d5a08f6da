use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn codes_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../codes")
}

fn dstbc(args: &[&str], dir: &Path, env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dstbc"));
    cmd.args(args).current_dir(dir);
    for (k, _) in std::env::vars().filter(|(k, _)| k.starts_with("DSTBC_")) {
        cmd.env_remove(k);
    }
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn verify_shipped_codes() {
    let dir = codes_dir();
    for file in ["alamouti.code", "rate_halving_n4_k4.code", "rate_halving_n8_k6.code", "repetition_k4.code"] {
        let o = dstbc(&["verify", file], &dir, &[]);
        assert_eq!(o.status.code(), Some(0), "{file}: {}", stdout(&o));
        assert!(stdout(&o).contains("verdict: pass"));
    }
    let o = dstbc(&["verify", "pairwise_alamouti_n4_k4.code", "--family", "dostbc"], &dir, &[]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn corrupted_rate_halving_fails_with_named_condition() {
    let tmp = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(codes_dir().join("rate_halving_n4_k4.code")).unwrap();
    // Relay 2, first row of A: "0  1 ..." -> "0 -1 ...".
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    let at = lines.iter().position(|l| l == "relay 2").unwrap() + 1;
    assert!(lines[at].starts_with("0  1"));
    lines[at] = lines[at].replacen("0  1", "0 -1", 1);
    std::fs::write(tmp.path().join("bad.code"), lines.join("\n")).unwrap();

    let o = dstbc(&["verify", "bad.code", "--family", "cpi"], tmp.path(), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL at Eq21 k1=1 k2=2"), "{}", stdout(&o));

    let o = dstbc(&["verify", "bad.code", "--format", "json"], tmp.path(), &[]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["verdict"], "fail");
    assert_eq!(v["checks"]["definition2"]["verdict"], "fail");
}

#[test]
fn usage_and_io_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(dstbc(&["verify", "missing.code"], tmp.path(), &[]).status.code(), Some(2));
    std::fs::write(tmp.path().join("junk.code"), "not a code\n").unwrap();
    assert_eq!(dstbc(&["verify", "junk.code"], tmp.path(), &[]).status.code(), Some(2));
    assert_eq!(dstbc(&["bounds"], tmp.path(), &[]).status.code(), Some(2));
    std::fs::write(tmp.path().join("sim.cfg"), "scheme = cpi\nbogus = 1\n").unwrap();
    let o = dstbc(&["simulate", "--config", "sim.cfg", "--dry-run"], tmp.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));
    let o = dstbc(&["simulate", "--preset", "no-such-preset", "--dry-run"], tmp.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bounds_table() {
    let tmp = tempfile::tempdir().unwrap();
    for (n, k, dostbc, cpi) in [("4", "4", "1/2", "1/2"), ("8", "6", "1/3", "1/2"), ("1", "2", "1/1", "1/1")] {
        let o = dstbc(&["bounds", "--n", n, "--k", k, "--format", "json"], tmp.path(), &[]);
        assert_eq!(o.status.code(), Some(0));
        let v = json(&o);
        assert_eq!(v["dostbc_bound"], dostbc, "N={n} K={k}");
        assert_eq!(v["cpi_bound"], cpi, "N={n} K={k}");
    }
    let o = dstbc(&["bounds", "--code", "rate_halving_n4_k4.code", "--format", "json"], &codes_dir(), &[]);
    let v = json(&o);
    assert_eq!(v["n"], 4);
    assert_eq!(v["code"][1]["achieves_bound"], true);
}

#[test]
fn construct_matches_shipped_files() {
    let dir = codes_dir();
    let tmp = tempfile::tempdir().unwrap();
    for (args, file) in [
        (vec!["construct", "alamouti"], "alamouti.code"),
        (vec!["construct", "rate-halving", "--k", "4"], "rate_halving_n4_k4.code"),
        (vec!["construct", "rate-halving", "--k", "6"], "rate_halving_n8_k6.code"),
        (vec!["construct", "repetition", "--k", "4"], "repetition_k4.code"),
        (vec!["construct", "pairwise-alamouti", "--n", "4", "--k", "4"], "pairwise_alamouti_n4_k4.code"),
    ] {
        let o = dstbc(&args, tmp.path(), &[]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o), std::fs::read_to_string(dir.join(file)).unwrap(), "{file}");
    }
    assert_eq!(dstbc(&["construct", "repetition"], tmp.path(), &[]).status.code(), Some(2));
}

#[test]
fn search_exit_codes_and_witness_file() {
    let tmp = tempfile::tempdir().unwrap();
    let o = dstbc(&["search", "--structure", "cpi", "--n", "1", "--k", "2", "--t", "1"], tmp.path(), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["verdict"], "none");

    let o = dstbc(
        &["search", "--structure", "cpi", "--n", "1", "--k", "2", "--t", "2", "--out", "s.json"],
        tmp.path(),
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(tmp.path().join("s.json")).unwrap()).unwrap();
    assert_eq!(v["verdict"], "exists");
    assert_eq!(v["within_bound"], true);
    let witness = tmp.path().join("s.witness.code");
    let o = dstbc(&["verify", witness.to_str().unwrap(), "--family", "cpi"], tmp.path(), &[]);
    assert_eq!(o.status.code(), Some(0));

    let o = dstbc(&["search", "--n", "1", "--k", "3", "--t", "9"], tmp.path(), &[]);
    assert_eq!(o.status.code(), Some(2), "over budget is a usage error");
}

#[test]
fn search_config_file_and_env() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("s.cfg"), "structure = dostbc\nn = 2\nk = 2\nt = 2\n").unwrap();
    let o = dstbc(&["search", "--config", "s.cfg"], tmp.path(), &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["space"]["structure"], "column_monomial_dostbc");
    // Env beats the file, flags beat env.
    let o = dstbc(&["search", "--config", "s.cfg"], tmp.path(), &[("DSTBC_T", "1")]);
    assert_eq!(json(&o)["space"]["t"], 1);
    let o = dstbc(&["search", "--config", "s.cfg", "--t", "2"], tmp.path(), &[("DSTBC_T", "1")]);
    assert_eq!(json(&o)["space"]["t"], 2);
}

#[test]
fn simulate_dry_run_and_overrides() {
    let tmp = tempfile::tempdir().unwrap();
    let o = dstbc(&["simulate", "--preset", "fig1-trend", "--dry-run"], tmp.path(), &[]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let runs = v["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 3);
    assert!(runs.iter().all(|r| r["bits_per_channel_use"] == 2.0));

    let o = dstbc(
        &["simulate", "--preset", "fig2-trend", "--dry-run"],
        tmp.path(),
        &[("DSTBC_SNR_DB", "3,6"), ("DSTBC_SEED", "5")],
    );
    let v = json(&o);
    assert_eq!(v["runs"][0]["snr_db"], serde_json::json!([3.0, 6.0]));
    assert_eq!(v["runs"][1]["seed"], 5);
    let o = dstbc(
        &["simulate", "--preset", "fig2-trend", "--dry-run", "--snr-db", "9"],
        tmp.path(),
        &[("DSTBC_SNR_DB", "3,6")],
    );
    assert_eq!(json(&o)["runs"][0]["snr_db"], serde_json::json!([9.0]));

    std::fs::write(
        tmp.path().join("sim.json"),
        r#"{"scheme": "dostbc", "code": "../alamouti.code", "snr_db": [1, 2], "constellation": "qam16"}"#,
    )
    .unwrap();
    std::fs::create_dir(tmp.path().join("cfg")).unwrap();
    std::fs::rename(tmp.path().join("sim.json"), tmp.path().join("cfg/sim.json")).unwrap();
    std::fs::copy(codes_dir().join("alamouti.code"), tmp.path().join("alamouti.code")).unwrap();
    let o = dstbc(&["simulate", "--config", "cfg/sim.json", "--dry-run"], tmp.path(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["runs"][0]["constellation"], "qam16");
}

#[test]
fn simulate_writes_csv_sidecar_and_plot() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("sim.cfg"), "scheme = cpi\nfamily = alamouti\nsnr_db = 0, 5\nmin_trials = 2000\n").unwrap();
    let o = dstbc(&["simulate", "--config", "sim.cfg", "--out", "ber.csv", "--plot", "--quiet"], tmp.path(), &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stderr.is_empty());
    let csv = std::fs::read_to_string(tmp.path().join("ber.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("scheme,snr_db,trials,bit_errors,ber"));
    assert_eq!(lines.count(), 2);
    let cfg: Value = serde_json::from_str(&std::fs::read_to_string(tmp.path().join("ber.config.json")).unwrap()).unwrap();
    assert_eq!(cfg["runs"][0]["scheme"], "dostbc_cpi");
    assert!(std::fs::read_to_string(tmp.path().join("ber.plot.py")).unwrap().contains("ber.csv"));

    // Same seed, byte-identical output; different seed, different counts.
    let again = dstbc(&["simulate", "--config", "sim.cfg", "--quiet"], tmp.path(), &[]);
    assert_eq!(stdout(&again), csv);
    let other = dstbc(&["simulate", "--config", "sim.cfg", "--quiet", "--seed", "99"], tmp.path(), &[]);
    assert_ne!(stdout(&other), csv);
}

#[test]
fn partition_reports() {
    let o = dstbc(&["partition", "rate_halving_n4_k4.code"], &codes_dir(), &[]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["partition"].as_array().unwrap().len(), 1);

    let o = dstbc(&["partition", "repetition_k4.code"], &codes_dir(), &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["partition"].as_array().unwrap().len(), 4);
}
