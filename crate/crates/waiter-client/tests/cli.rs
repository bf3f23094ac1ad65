use std::process::Command;

fn wcgame(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_wcgame")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn solve_k4_connectivity() {
    let (code, out, err) = wcgame(&["solve", "--connected", "4", "--q", "1", "--convention", "wc"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("Waiter"), "{out}");
}

#[test]
fn threshold_k5() {
    let (code, out, err) = wcgame(&["threshold", "--connected", "5", "--convention", "wc", "--q-max", "3"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains('2'), "{out}");
}

#[test]
fn oversized_solve_exits_with_cap_code() {
    let (code, _, err) = wcgame(&["solve", "--connected", "6", "--q", "1", "--convention", "wc"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn unknown_strategy_exits_with_config_code() {
    let (code, _, _) = wcgame(&["play", "--n", "6", "--q", "1", "--waiter", "bogus"]);
    assert_eq!(code, 1);
}

#[test]
fn play_writes_a_replayable_transcript() {
    let dir = std::env::temp_dir().join(format!("wcgame-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t.json");
    let p = path.to_str().unwrap();
    let (code, _, err) = wcgame(&[
        "play", "--n", "8", "--q", "2", "--waiter", "connectivity", "--predicate", "connected", "--seed", "3", "--json-out", p,
    ]);
    assert_eq!(code, 0, "{err}");
    let t = waiter_client::game::Transcript::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    t.replay().unwrap();
    let (code, out, err) = wcgame(&["verify", "--transcript", p, "--predicate", "connected"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("true"), "{out}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn scan_reports_are_reproducible() {
    let args = ["--no-timing", "--trials", "4", "scan", "--n", "8", "--q", "1..4", "--waiter", "connectivity"];
    let (code, a, err) = wcgame(&args);
    let (_, b, _) = wcgame(&args);
    // q = 4 is outside what the strategy supports, so the cell is invalid
    assert_eq!(code, 1, "{err}");
    assert_eq!(a, b);
}

#[test]
fn phi_of_triangles() {
    let (code, out, err) = wcgame(&["phi", "--family", "cliques(4,3)", "--q", "1"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("0.5"), "{out}");
}
