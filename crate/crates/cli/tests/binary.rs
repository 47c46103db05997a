use std::io::Write;
use std::process::{Command, Output};

fn qcurv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcurv")).args(args).env_remove("QCURV_FORMAT").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bianchi_exit_codes() {
    let ok = qcurv(&["bianchi", "--k", "2", "--dim", "2", "--format", "json"]);
    assert_eq!(ok.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&ok)).unwrap();
    assert_eq!(v["results"][0]["residual_term_count"], 0);
    assert_eq!(v["command"], "bianchi");

    assert_eq!(qcurv(&["bianchi", "--k", "2", "--ring", "free"]).status.code(), Some(1));
    let bad = qcurv(&["bianchi", "--k", "2", "--ring", "prim:3"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(bad.stdout.is_empty());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("order 3"));
    assert_eq!(qcurv(&["bianchi"]).status.code(), Some(2));
    assert_eq!(qcurv(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn qtable_rows() {
    let out = stdout(&qcurv(&["qtable", "--m", "3"]));
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.contains(&"[3,2,1] q[1,2]*q[1,3]*q[2,3]"));
}

#[test]
fn format_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_qcurv"))
        .args(["qnum", "--n", "2"])
        .env("QCURV_FORMAT", "json")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"][0]["qint"], "1 + q");
}

#[test]
fn byte_identical_reruns() {
    for args in [
        &["tower", "--k", "3", "--dim", "2", "--format", "json"][..],
        &["propagator", "--samples", "30", "--seed", "11"],
        &["symmetrize", "--rank", "3", "--dim", "2", "--format", "json"],
    ] {
        assert_eq!(qcurv(args).stdout, qcurv(args).stdout, "{args:?}");
    }
}

fn temp_json(name: &str, body: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("qcurv-{}-{name}.json", std::process::id()));
    std::fs::File::create(&path).unwrap().write_all(body.as_bytes()).unwrap();
    path
}

#[test]
fn input_files() {
    let q = temp_json("q", r#"{"n": 2, "entries": [["-1", "q[1,2]"], ["q[1,2]^-1", "-1"]]}"#);
    let o = qcurv(&["em", "--dim", "2", "--abelian", "--q-matrix", q.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    let wrong = qcurv(&["em", "--dim", "3", "--q-matrix", q.to_str().unwrap()]);
    assert_eq!(wrong.status.code(), Some(2));

    let c = temp_json("c", r#"{"n": 1, "entries": [["w[1,1]"]]}"#);
    let o = qcurv(&["tower", "--k", "2", "--connection", c.to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"][1]["entries"]["1,1"], "q*w[1,1]*w[1,1] + d(w[1,1])");

    let n = temp_json("n", r#"{"n": 3, "entries": [[-1, "i", 2], ["-i", -1, "1/2"], ["1/2", 2, -1]]}"#);
    let o = qcurv(&["propagator", "--dim", "3", "--samples", "10", "--q-matrix", n.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"][0]["samples"], 10);

    let missing = qcurv(&["propagator", "--q-matrix", "/nonexistent/q.json"]);
    assert_eq!(missing.status.code(), Some(2));
    for p in [q, c, n] {
        let _ = std::fs::remove_file(p);
    }
}

#[test]
fn parse_errors_carry_positions() {
    let c = temp_json("bad", r#"{"n": 1, "entries": [["w[1,1] + d(w[1,1])"]]}"#);
    let o = qcurv(&["tower", "--k", "2", "--connection", c.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("1:8"), "{err}");
    let _ = std::fs::remove_file(c);
}
