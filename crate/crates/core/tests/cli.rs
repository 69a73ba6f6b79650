use std::process::Command;

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_msq-stdp"))
}

#[test]
fn run_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("pairing.csv");
    let o = cli()
        .args([
            "run",
            "--protocol",
            "pairing",
            "--params",
            "hippocampal",
            "--engine",
            "both",
        ])
        .args(["--sweep", "dt=-10,10", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("metric=relative_rms"));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "condition,dw_model,dw_circuit,abs_err,rel_err");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("dt=-10,-"));
}

#[test]
fn characterize_ramp() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ramp.csv");
    let o = cli()
        .args(["characterize", "--pulses", "5", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.starts_with("pulse_index,weight\n1,"));
}

#[test]
fn calibrate_prints_table_values() {
    let o = cli()
        .args(["calibrate", "--params", "visual-cortex"])
        .output()
        .unwrap();
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("v_j_peak = 1.37"), "{text}");
    assert!(text.contains("g1 = 0.0"));
}

#[test]
fn inspect_dumps_frames() {
    let dir = tempfile::tempdir().unwrap();
    let frames = dir.path().join("frames.csv");
    let train = dir.path().join("train.csv");
    let o = cli()
        .args([
            "inspect",
            "--protocol",
            "pairing",
            "--dt",
            "10",
            "--repetitions",
            "2",
            "--frames",
        ])
        .arg(&frames)
        .arg("--train")
        .arg(&train)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    // two pairs, two active frames each, three slots per frame
    assert_eq!(
        std::fs::read_to_string(&frames).unwrap().lines().count(),
        1 + 12
    );
    assert_eq!(
        std::fs::read_to_string(&train).unwrap().lines().count(),
        1 + 4
    );
}

#[test]
fn exit_codes_follow_error_category() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let status = |args: &[&str]| cli().args(args).output().unwrap().status.code();

    let o = out.to_str().unwrap();
    assert_eq!(
        status(&[
            "run",
            "--protocol",
            "pairing",
            "--sweep",
            "T=20",
            "--out",
            o
        ]),
        Some(3)
    );
    assert_eq!(
        status(&[
            "run",
            "--protocol",
            "pairing",
            "--params",
            "no-such-set",
            "--out",
            o
        ]),
        Some(3)
    );
    assert_eq!(
        status(&[
            "run",
            "--protocol",
            "pairing",
            "--sweep",
            "dt=10",
            "--abort-rel-error",
            "0",
            "--out",
            o
        ]),
        Some(4)
    );
    assert_eq!(
        status(&[
            "run",
            "--protocol",
            "pairing",
            "--sweep",
            "dt=10",
            "--out",
            "/nonexistent/x.csv"
        ]),
        Some(5)
    );
    assert_eq!(
        status(&["run", "--protocol", "nonsense", "--out", o]),
        Some(2)
    );
}
