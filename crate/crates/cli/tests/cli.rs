use std::process::{Command, Output};

fn paraword(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paraword"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const SMALL: [&str; 6] = ["--n-r", "48", "--n-theta", "64", "--r-max", "0.999"];

#[test]
fn stform_prints_normal_form() {
    let o = paraword(&["stform", "S M T"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("S^2 T + S T^2"), "{text}");
    assert!(text.contains("delta_L = 0"), "{text}");
    let o = paraword(&["stform", "T M", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"][0]["st_form"]["delta_l"], 0);
    assert_eq!(v["subcommand"], "stform");
    assert!(v["timings"]["total_s"].is_number());
}

#[test]
fn verify_small_suite() {
    let o = paraword(&["verify", "--max-len", "4", "--trials", "3", "--seed", "7"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("all identities exact"));
}

#[test]
fn usage_errors_exit_one_with_json() {
    for args in [
        vec!["stform", "M M"],
        vec!["--bogus"],
        vec!["seminorm", "--symbol", "nonsense"],
        vec!["seminorm", "--functional", "nope"],
        vec!["opnorm", "--threads", "0"],
        vec!["counterexample", "--r-list", "0.5,0.9"],
    ] {
        let o = paraword(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        let v: serde_json::Value = serde_json::from_slice(&o.stderr).expect("JSON diagnostic");
        assert_eq!(v["status"], "error");
    }
}

#[test]
fn seminorm_and_opnorm_values() {
    let mut args = vec!["seminorm", "--symbol", "z", "--functional", "bloch", "--json"];
    args.extend(SMALL);
    let v: serde_json::Value = serde_json::from_slice(&paraword(&args).stdout).unwrap();
    assert!((v["results"][0]["value"].as_f64().unwrap() - 1.0).abs() < 1e-6);

    let mut args = vec![
        "opnorm",
        "--word",
        "T",
        "--alpha",
        "-1",
        "--family",
        "monomials:10",
        "--json",
    ];
    args.extend(SMALL);
    let v: serde_json::Value = serde_json::from_slice(&paraword(&args).stdout).unwrap();
    assert!((v["results"][0]["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn scan_csv_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for k in 0..2 {
        let path = dir.path().join(format!("scan{k}.csv"));
        let mut args = vec![
            "scan",
            "--word",
            "T",
            "--symbol",
            "z",
            "--r-list",
            "0.5,0.99,0.999",
            "--output",
        ];
        let p = path.to_str().unwrap().to_string();
        args.push(&p);
        args.extend(SMALL);
        let o = paraword(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("# plateau: opnorm_lb plateau"));
        files.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(files[0], files[1]);
    let text = String::from_utf8(files.remove(0)).unwrap();
    assert!(text.starts_with("r,opnorm_lb,seminorm_pow_N,ratio\n"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"symbol": "loge", "functional": "bloch", "q": 1, "n_r": 48, "n_theta": 64}"#,
    )
    .unwrap();
    let report = dir.path().join("out.json");
    let o = paraword(&[
        "seminorm",
        "--config",
        cfg.to_str().unwrap(),
        "--symbol",
        "z",
        "--output",
        report.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["config"]["symbol"], "z");
    assert_eq!(v["config"]["n_r"], 48);
    assert_eq!(v["results"][0]["symbol"], "z");

    std::fs::write(
        &cfg,
        r#"{"symbol": {"kind": "powlog", "beta": 0.5, "dilate": 0.9}, "n_r": 48, "n_theta": 64}"#,
    )
    .unwrap();
    let o = paraword(&["seminorm", "--config", cfg.to_str().unwrap(), "--json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["results"][0]["value"].as_f64().unwrap() > 0.0);

    std::fs::write(&cfg, r#"{"unknown_key": 1}"#).unwrap();
    assert_eq!(
        paraword(&["seminorm", "--config", cfg.to_str().unwrap()]).status.code(),
        Some(1)
    );
}

#[test]
fn violated_checks_exit_two() {
    let mut args = vec!["hardystein", "--symbol", "poly:1,2,1", "--q", "1", "--tol=-1"];
    args.extend(SMALL);
    let o = paraword(&args);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(v["kind"], "assertion");

    let mut args = vec!["hardystein", "--symbol", "poly:1,2,1"];
    args.extend(SMALL);
    assert!(paraword(&args).status.success());
}
