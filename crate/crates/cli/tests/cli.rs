use std::fs;
use std::path::Path;
use std::process::Command;

const UNIT_DISK: &str = "(set-logic QF_NRA)
(declare-fun x () Real)
(declare-fun y () Real)
(assert (or (< (+ (* x x) (* y y) (- 1)) 0) (> y 0)))
(check-sat)
";

fn nlcell() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nlcell"))
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn exit_codes_follow_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (UNIT_DISK, "sat\n", 10),
        ("(declare-fun x () Real)(assert (< (* x x) 0))(check-sat)", "unsat\n", 20),
        ("(assert true)(check-sat)", "sat\n", 10),
    ];
    for (i, (text, out, code)) in cases.into_iter().enumerate() {
        let f = write(dir.path(), &format!("c{i}.smt2"), text);
        for variant in ["baseline", "simple-3", "dynamic", "taylor", "pwl-2", "outside"] {
            let o = nlcell().arg("solve").arg(&f).args(["--variant", variant]).output().unwrap();
            assert_eq!(String::from_utf8_lossy(&o.stdout), out, "{variant}");
            assert_eq!(o.status.code(), Some(code), "{variant}");
        }
    }
}

#[test]
fn usage_and_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write(dir.path(), "ok.smt2", UNIT_DISK);
    let o = nlcell().arg("solve").arg(&ok).args(["--variant", "fastest"]).output().unwrap();
    assert_eq!(o.status.code(), Some(64));
    let o = nlcell().arg("frobnicate").output().unwrap();
    assert_eq!(o.status.code(), Some(64));
    let bad = write(dir.path(), "bad.smt2", "(declare-fun x () Real)\n(assert (let ((y x)) (> y 0)))");
    let o = nlcell().arg("solve").arg(&bad).output().unwrap();
    assert_eq!(o.status.code(), Some(65));
    let msg = String::from_utf8_lossy(&o.stderr);
    assert!(msg.contains("2:10: unsupported feature: let"), "{msg}");
}

#[test]
fn model_output_and_stats_row() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "half.smt2",
        "(declare-fun x () Real)(assert (= (* 2 x) 1))(check-sat)(get-model)",
    );
    let stats = dir.path().join("s.csv");
    let o = nlcell()
        .arg("solve")
        .arg(&f)
        .args(["--variant", "simple-3", "--max-apx-cells", "50", "--stats"])
        .arg(&stats)
        .output()
        .unwrap();
    assert_eq!(String::from_utf8_lossy(&o.stdout), "sat\n(\n  (define-fun x () Real (/ 1 2))\n)\n");
    let csv = fs::read_to_string(&stats).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("instance,variant,result,wall_ms,scc_calls,apx_cells,fallbacks,max_resultant_degree,learned_clauses")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!((row[1], row[2]), ("simple-3", "sat"));
}

#[test]
fn bench_rows_are_sorted_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst");
    fs::create_dir(&inst).unwrap();
    write(&inst, "b.smt2", UNIT_DISK);
    write(&inst, "a.smt2", "(declare-fun x () Real)(assert (< (* x x) 0))(check-sat)");
    write(&inst, "notes.txt", "ignored");
    let run = |out: &Path| {
        let o = nlcell()
            .arg("bench")
            .arg(&inst)
            .args(["--variants", "simple-3,baseline", "--jobs", "2", "--omit-timing", "--out"])
            .arg(out)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        fs::read_to_string(out).unwrap()
    };
    let first = run(&dir.path().join("r1.csv"));
    let second = run(&dir.path().join("r2.csv"));
    assert_eq!(first, second);
    let keys: Vec<String> = first.lines().skip(1).map(|l| l.split(',').take(3).collect::<Vec<_>>().join(",")).collect();
    assert_eq!(
        keys,
        ["a.smt2,baseline,unsat", "a.smt2,simple-3,unsat", "b.smt2,baseline,sat", "b.smt2,simple-3,sat"]
    );
}

#[test]
fn bench_reports_timeouts() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst");
    fs::create_dir(&inst).unwrap();
    // A zero budget is exceeded by process start-up alone.
    write(&inst, "slow.smt2", UNIT_DISK);
    let out = dir.path().join("r.csv");
    let o = nlcell()
        .arg("bench")
        .arg(&inst)
        .args(["--timeout-ms", "0", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(&out).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[2], "timeout");
}
