use std::process::{Command, Output};

fn amorph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amorph")).args(args).env_remove("AMORPH_BUDGET_CELLS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn toeplitz_report() {
    let o = amorph(&["toeplitz", "--word", "0001*1*", "--m", "3", "--depth", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# amorph "));
    assert!(text.contains("word 0001*1* p=7 q=2 d=1"));
    assert!(text.contains("1,7,5/7\n2,49,45/49\n"));
    assert!(text.contains("predicted_ac 1.5532"));
    let bad = amorph(&["toeplitz", "--word", "0001*1*", "--m", "2"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn sweep_is_worker_independent() {
    let args = ["sweep", "--system", "torus_shear", "--deltas", "2^-2,2^-3", "--nus", "2^-1..2^-5", "--samples", "24,48", "--horizon", "512", "--seed", "7"];
    let run = |w: &str| {
        let mut a = args.to_vec();
        a.extend(["--workers", w]);
        let o = amorph(&a);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        o.stdout
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    assert_eq!(one, run("8"));
    let text = String::from_utf8(one).unwrap();
    assert!(text.contains("\nsystem,delta,nu,M,T,sep_est,span_est,saturated\n"));
    assert_eq!(text.lines().count(), 2 + 2 * 2 * 5);
    assert!(!text.contains('\r'));
}

#[test]
fn out_file_and_estimate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rot.csv");
    let o = amorph(&[
        "sweep", "--system", "rotation:alpha=golden", "--deltas", "2^-2", "--nus", "2^-1..2^-6", "--samples", "64",
        "--horizon", "256", "--out", csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let est = amorph(&["estimate", "--input", csv.to_str().unwrap()]);
    assert_eq!(est.status.code(), Some(0), "{}", String::from_utf8_lossy(&est.stderr));
    let text = stdout(&est);
    assert!(text.contains("system rotation:alpha=golden"));
    assert!(text.lines().any(|l| l.starts_with("summary ") && l.contains("bounded=1")), "{text}");
}

#[test]
fn exit_codes() {
    assert_eq!(amorph(&["sweep", "--system", "no_such_system"]).status.code(), Some(1));
    assert_eq!(amorph(&["sweep"]).status.code(), Some(1));
    assert_eq!(amorph(&["sweep", "--system", "doubling", "--nus", "2^-1..2^-2"]).status.code(), Some(1));
    assert_eq!(amorph(&["--no-such-flag"]).status.code(), Some(1));
    assert_eq!(amorph(&[]).status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_amorph"))
        .args(["sweep", "--system", "doubling"])
        .env("AMORPH_BUDGET_CELLS", "1000")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
    assert_eq!(amorph(&["--help"]).status.code(), Some(0));
}

#[test]
fn schema_documents_columns() {
    let o = amorph(&["--schema"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for col in ["sep_est", "span_est", "saturated", "metric", "theta", "infinite_suspected"] {
        assert!(text.contains(col), "{col}");
    }
}

#[test]
fn selftest_passes() {
    let o = amorph(&["selftest", "--instances", "50"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("selftest passed"));
    assert_eq!(amorph(&["selftest", "--max-points", "40"]).status.code(), Some(1));
}

#[test]
fn pinched_report() {
    let dir = tempfile::tempdir().unwrap();
    let lines = dir.path().join("lines.csv");
    let o = amorph(&[
        "pinched", "--alpha", "3", "--grid", "1024", "--depth", "200", "--lyapunov-horizon", "1e5", "--lines",
        lines.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("verdict=sna"), "{text}");
    assert!(text.contains("monotonicity_violations=0 lipschitz_violations=0"), "{text}");
    let csv = std::fs::read_to_string(&lines).unwrap();
    assert!(csv.lines().nth(1).unwrap() == "theta,n,value");
}

#[test]
fn besicovitch_report() {
    let dir = tempfile::tempdir().unwrap();
    let matrix = dir.path().join("m.csv");
    let o = amorph(&[
        "besicovitch", "--system", "thue_morse", "--samples", "32,64,128", "--horizon", "1024", "--eps", "2^-1..2^-4",
        "--matrix", matrix.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("sep_packing_identity 1"), "{text}");
    assert!(text.contains("not_totally_bounded=1"), "{text}");
    let csv = std::fs::read_to_string(&matrix).unwrap();
    assert!(csv.contains("besicovitch:1"));
    assert_eq!(amorph(&["besicovitch", "--system", "doubling"]).status.code(), Some(1));
}
