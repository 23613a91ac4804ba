use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shakecert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["eval", "(torus 2 5)", "--r", "0"]).status.code(), Some(0));
    let bad = run(&["eval", "unknot", "--suitable", "unknot@1"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("suitability-genus-bound"));
    assert_eq!(run(&["eval", "(torus 2 4)"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "unknot", "--bogus"]).status.code(), Some(2));
}

#[test]
fn output_is_reproducible() {
    for args in [
        &["eval", "(sat mazur :r -1 (wh (torus 2 3)))", "--r", "-1,0", "--format", "json"][..],
        &["eval", "(torus 3 4)", "--all", "--shuffle", "9"][..],
        &["table", "--pattern", "mazur", "--base", "(wh (torus 2 3))", "--r", "0", "--iters", "6"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn mazur_table_csv() {
    let o = run(&["table", "--pattern", "mazur", "--base", "(wh (torus 2 3))", "--r", "0", "--iters", "4"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("i,g4,tau,s,gsh_r,caveats"));
    let g4: Vec<String> = lines.map(|l| l.split(',').nth(1).unwrap().to_string()).collect();
    assert_eq!(g4, ["1", "2", "3", "4", "5"]);
}

#[test]
fn shake_genus_and_explain() {
    let o = run(&["eval", "(torus 2 5)", "--r", "0", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["invariants"]["gsh^0"]["lo"], 2);
    assert_eq!(v["invariants"]["gsh^0"]["hi"], 2);
    let id = v["invariants"]["gsh^0"]["trace_id"].as_u64().unwrap().to_string();
    let e = run(&["eval", "(torus 2 5)", "--r", "0", "--explain", &id]);
    assert!(e.status.success());
    assert!(stdout(&e).starts_with(&format!("#{id} ")), "{}", stdout(&e));
}

#[test]
fn verdicts() {
    let o = run(&["verdict", "(sat r1 :r 3 unknot)", "--r", "3"]);
    assert!(stdout(&o).contains("(mod SPC4)"), "{}", stdout(&o));
    let o = run(&["verdict", "(torus 2 3)", "--r", "1"]);
    assert!(stdout(&o).contains("Arf = 1"), "{}", stdout(&o));
}

#[test]
fn gluing_comparison() {
    let o = run(&["compare-gluings", "mazur", "w=2", "--r", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("3*m_i(Q)"), "{}", stdout(&o));
}

#[test]
fn shake_certificate_json() {
    let o = run(&["shake", "--pattern", "mazur", "--knot", "(torus 2 3)", "--r", "0"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["p"].as_u64(), v["q"].as_u64()), (Some(1), Some(3)));
}
