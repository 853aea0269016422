use std::process::{Command, Output};

fn paperlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paperlab"))
        .args(args)
        .env_remove("PAPERLAB_THREADS")
        .output()
        .expect("spawn paperlab")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn rips_passes_with_zero() {
    let out = paperlab(&["verify", "rips", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["status"] == "pass"));
    assert!(checks.iter().all(|c| c.get("runtime_ms").is_none()));
}

#[test]
fn small_m_is_a_config_error() {
    let out = paperlab(&["verify", "rips", "--m", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn bad_flag_is_a_usage_error() {
    assert_eq!(paperlab(&["verify", "rips", "--no-such-flag"]).status.code(), Some(2));
}

#[test]
fn small_k_fails_curvature() {
    let out = paperlab(&["verify", "rips", "--k", "4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let girth = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == "rips.curvature.girth")
        .unwrap();
    assert_eq!(girth["status"], "fail");
}

#[test]
fn json_is_stable_across_threads() {
    let one = paperlab(&["verify", "feighn-mess", "--format", "json"]);
    let many = Command::new(env!("CARGO_BIN_EXE_paperlab"))
        .args(["verify", "feighn-mess", "--format", "json"])
        .env("PAPERLAB_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn conj_instance_file() {
    let dir = std::env::temp_dir().join(format!("paperlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("s3.txt");
    std::fs::write(&good, "degree 3\nqdegree 2\ngen s (1 2)\ngen r (1 2 3)\nphi s (1 2)\nphi r ()\nsigma r\n").unwrap();
    let out = paperlab(&["verify", "conj", "--file", good.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "degree 99\n").unwrap();
    assert_eq!(paperlab(&["verify", "conj", "--file", bad.to_str().unwrap()]).status.code(), Some(2));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn export_presentation_round_trips() {
    let out = paperlab(&["export", "presentation", "--m", "30", "--k", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let p = paperlab_core::text::NamedPresentation::parse(&text).unwrap();
    assert_eq!(p.to_text(), text);
}
