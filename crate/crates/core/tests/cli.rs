use heegner_core::cli::{run, EXIT_ERROR, EXIT_OK, EXIT_UNDETERMINED};
use serde_json::Value;

fn heegner(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(
        std::iter::once("heegner").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn analyze_example() {
    let (code, out, err) = heegner(&[
        "analyze", "--N", "99", "--disc", "-4", "--c", "3", "--sigma", "3,11",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["report"]["level"], 99);
    assert_eq!(v["report"]["heegner_count"], 8);
    assert_eq!(v["report"]["rationality_field"], "H_3");
    assert!(err.contains("level 99"));
}

#[test]
fn exit_codes() {
    let (code, out, _) = heegner(&["analyze", "--N", "99", "--disc", "-4", "--sigma", "3,11"]);
    assert_eq!(code, EXIT_ERROR);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"], "3 cannot lie in Σ: ε=+1");
    let (code, out, _) = heegner(&["analyze", "--N", "99", "--disc", "-4", "--c", "3"]);
    assert_eq!(code, EXIT_UNDETERMINED);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["report"]["verdict"], "blocked");
    assert_eq!(heegner(&["analyze", "--N", "99"]).0, EXIT_ERROR);
    assert_eq!(
        heegner(&["oracle-verify", "--p", "13", "--case", "eichler"]).0,
        EXIT_ERROR
    );
    assert_eq!(heegner(&["--help"]).0, EXIT_OK);
}

#[test]
fn request_echo_reproduces_output() {
    let (code, out, _) = heegner(&[
        "analyze",
        "--N",
        "99",
        "--disc",
        "-4",
        "--c",
        "3",
        "--sigma",
        "3,11",
        "--compact",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("req.json");
    std::fs::write(&path, v["request"].to_string()).unwrap();
    let (code, again, _) = heegner(&["analyze", "--request", path.to_str().unwrap(), "--compact"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(again, out);
}

#[test]
fn embed_queries() {
    let (code, out, _) = heegner(&[
        "embed",
        "--case",
        "division",
        "--p",
        "3",
        "--m",
        "1",
        "--n",
        "4",
        "--K-class",
        "ram_unit",
        "--L-class",
        "ram_unit",
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["exists"], true);
    let (code, _, _) = heegner(&[
        "embed",
        "--case",
        "eichler",
        "--p",
        "3",
        "--m",
        "0",
        "--n",
        "1",
        "--K-class",
        "inert",
    ]);
    assert_eq!(code, EXIT_ERROR);
}

#[test]
fn oracle_verify_division() {
    let (code, out, err) = heegner(&[
        "oracle-verify",
        "--p",
        "3",
        "--case",
        "division",
        "--max-m",
        "1",
        "--max-n",
        "2",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["mismatches"], 0);
}

#[test]
fn batch_rows() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.csv");
    std::fs::write(&good, "label,N,overrides\n11a,11,\n99a,99,\"3:sc:ram,1\"\n").unwrap();
    let (code, out, err) = heegner(&["batch", "--table", good.to_str().unwrap(), "--disc", "-7"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let lines: Vec<Value> = out
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["label"], "11a");
    assert_eq!(lines[1]["request"]["reps"]["3"]["psi_conductor"], 1);

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "label,N\nzero,0\n11a,11\n").unwrap();
    let (code, out, err) = heegner(&["batch", "--table", bad.to_str().unwrap(), "--disc", "-7"]);
    assert_eq!(code, EXIT_ERROR);
    assert_eq!(out.lines().count(), 1);
    assert!(err.contains("zero"));
}
