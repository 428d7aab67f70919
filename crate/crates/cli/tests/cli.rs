use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn ramify(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ramify")).arg("--quiet").arg("--out").arg(out).args(args).output().unwrap()
}

fn ok(out: &Path, args: &[&str]) -> Value {
    let o = ramify(out, args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let manifest = String::from_utf8(o.stdout).unwrap();
    serde_json::from_str(&std::fs::read_to_string(manifest.trim()).unwrap()).unwrap()
}

fn json(path: impl AsRef<Path>) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn cubic_below_smallest_discriminant_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["enum-cubic", "--x", "22"]);
    assert_eq!(std::fs::read_to_string(dir.path().join("cubic-x22-records.csv")).unwrap(), "disc,omega,cyclic\n");
    assert_eq!(std::fs::read_to_string(dir.path().join("cubic-x22-omega.csv")).unwrap(), "omega,count\n");
    assert_eq!(json(dir.path().join("cubic-x22.json"))["fields"], 0);
}

#[test]
fn model_mean_is_the_sum_of_local_densities() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["model-moments", "--d", "3", "--z", "100", "--k", "4"]);
    let report = json(dir.path().join("model-d3-z100-k4.json"));
    let primes = [
        2.0f64, 3., 5., 7., 11., 13., 17., 19., 23., 29., 31., 37., 41., 43., 47., 53., 59., 61., 67., 71., 73., 79.,
        83., 89., 97.,
    ];
    let hand: f64 = primes.iter().map(|p| (p + 1.0) / (p * p + p + 1.0)).sum();
    assert_eq!(report["source"], "model-exact");
    assert_eq!(report["Z"], 100);
    assert_eq!(report["raw"][0], 1.0);
    assert!((report["raw"][1].as_f64().unwrap() - hand).abs() < 1e-13);
    assert_eq!(report["raw"].as_array().unwrap().len(), 5);
    assert!(report["standardized"].is_null());
}

#[test]
fn quadratic_records_at_twenty() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["enum-quadratic", "--x", "20"]);
    let text = std::fs::read_to_string(dir.path().join("quadratic-x20-records.csv")).unwrap();
    let discs: Vec<i64> = text.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(discs, [-3, -4, 5, -7, 8, -8, -11, 12, 13, -15, 17, -19, -20]);
    let summary = json(dir.path().join("quadratic-x20.json"));
    assert_eq!(summary["divisibility"][0]["q"], 2);
    assert_eq!(summary["divisibility"][0]["count"], 5);
    assert_eq!(summary["density_estimate"]["value"], 13.0 / 20.0);
    assert!(summary["density_estimate"]["kind"].as_str().unwrap().contains("estimate"));
}

#[test]
fn manifest_accounts_for_every_output() {
    let dir = tempfile::tempdir().unwrap();
    let m = ok(dir.path(), &["--workers", "2", "enum-cubic", "--x", "5000", "--only", "cyclic"]);
    assert_eq!(m["schema"], "ramify-manifest/1");
    assert_eq!(m["workers"], 2);
    assert_eq!(m["config"]["subcommand"], "enum-cubic");
    assert_eq!(m["config"]["only"], "cyclic");
    let outputs = m["outputs"].as_array().unwrap();
    let mut listed: Vec<&str> = outputs.iter().map(|e| e["file"].as_str().unwrap()).collect();
    listed.sort_unstable();
    let mut present: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| !n.ends_with(".manifest.json"))
        .collect();
    present.sort_unstable();
    assert_eq!(listed, present);
    for e in outputs {
        let bytes = std::fs::read(dir.path().join(e["file"].as_str().unwrap())).unwrap();
        assert_eq!(e["bytes"], bytes.len() as u64);
        let digest: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(e["sha256"], digest.as_str());
    }
    // Cyclic cubic fields have square discriminants: 49, 81, 169, ...
    let text = std::fs::read_to_string(dir.path().join("cubic-x5000-cyclic-records.csv")).unwrap();
    assert!(text.lines().skip(1).all(|l| l.ends_with(",1")));
    let mut sorted: Vec<i64> = text.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    sorted.sort_unstable();
    assert_eq!(&sorted[..3], [49, 81, 169]);
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_ramify"))
        .env("RAMIFY_OUT", dir.path())
        .args(["--quiet", "sieve-integers", "--x", "1000"])
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("integers-x1000-omega.csv").exists());
    assert!(dir.path().join("integers-x1000.manifest.json").exists());
}

#[test]
fn analyze_accepts_histograms_and_binary_dumps() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["sieve-integers", "--x", "100000"]);
    let hist = dir.path().join("integers-x100000-omega.csv");
    ok(dir.path(), &["analyze", "--input", hist.to_str().unwrap(), "--x", "100000", "--k", "4"]);
    let r = json(dir.path().join("analyze-integers-x100000-omega-x100000-k4.json"));
    assert_eq!(r["family"], "integers");
    assert_eq!(r["count"], 99_999);
    assert!(r["divisibility"].as_array().unwrap().is_empty());

    // The same fields as CSV and as a binary dump analyse identically.
    let csv_dir = dir.path().join("csv");
    let bin_dir = dir.path().join("bin");
    ok(&csv_dir, &["enum-cubic", "--x", "20000"]);
    ok(&bin_dir, &["--records", "bin", "enum-cubic", "--x", "20000"]);
    let a = csv_dir.join("cubic-x20000-records.csv");
    let b = bin_dir.join("cubic-x20000-records.bin");
    assert_eq!(&std::fs::read(&b).unwrap()[..8], b"RAMLABC1");
    ok(&csv_dir, &["analyze", "--input", a.to_str().unwrap(), "--x", "20000", "--z", "10", "--k", "3"]);
    ok(&bin_dir, &["analyze", "--input", b.to_str().unwrap(), "--x", "20000", "--z", "10", "--k", "3"]);
    let ra = json(csv_dir.join("analyze-cubic-x20000-records-x20000-z10-k3.json"));
    let rb = json(bin_dir.join("analyze-cubic-x20000-records-x20000-z10-k3.json"));
    for key in ["count", "moments", "ks", "divisibility", "truncation"] {
        assert_eq!(ra[key], rb[key], "{key}");
    }
    let ecdf = std::fs::read_to_string(csv_dir.join("analyze-cubic-x20000-records-x20000-z10-k3-ecdf.csv")).unwrap();
    assert!(ecdf.starts_with("omega,z,empirical,normal\n"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| ramify(dir.path(), args).status.code();
    // configuration
    assert_eq!(code(&["sieve-integers", "--x", "2000000000"]), Some(2));
    assert_eq!(code(&["model-moments", "--d", "6", "--z", "100", "--k", "2"]), Some(2));
    assert_eq!(code(&["sieve-integers", "--x", "1000", "--segment", "10"]), Some(2));
    ok(dir.path(), &["sieve-integers", "--x", "1000"]);
    let hist = dir.path().join("integers-x1000-omega.csv");
    assert_eq!(code(&["analyze", "--input", hist.to_str().unwrap(), "--x", "1000", "--z", "10", "--k", "2"]), Some(2));
    // domain
    assert_eq!(code(&["enum-quadratic", "--x", "2"]), Some(3));
    assert_eq!(code(&["model-moments", "--d", "3", "--z", "1", "--k", "2"]), Some(3));
    assert_eq!(code(&["enum-cubic", "--x", "100", "--moduli", "4"]), Some(3));
    // I/O
    let missing = dir.path().join("missing.csv");
    assert_eq!(code(&["analyze", "--input", missing.to_str().unwrap(), "--x", "1000", "--k", "2"]), Some(4));
    // invariant: a manifest whose recorded checksum cannot be reproduced
    let manifest_path = dir.path().join("integers-x1000.manifest.json");
    let mut m = json(&manifest_path);
    m["outputs"][0]["sha256"] = "00".repeat(32).into();
    std::fs::write(&manifest_path, serde_json::to_string(&m).unwrap()).unwrap();
    assert_eq!(code(&["replay", manifest_path.to_str().unwrap()]), Some(5));
}

#[test]
fn replay_reproduces() {
    let dir = tempfile::tempdir().unwrap();
    let m = ok(dir.path(), &["model-sample", "--d", "3", "--z", "500", "--n", "70000", "--seed", "3"]);
    let manifest = dir.path().join("sample-d3-z500-n70000-seed3-k6.manifest.json");
    let again = ok(&dir.path().join("again"), &["--workers", "3", "replay", manifest.to_str().unwrap()]);
    assert_eq!(m["outputs"], again["outputs"]);
    assert_eq!(again["workers"], 3);
}
