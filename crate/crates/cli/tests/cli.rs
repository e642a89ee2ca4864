use std::process::{Command, Output};

const NAGATA: &str = "(X + t*(t*Y + X^2), Y - 2*(t*Y + X^2)*X - t*(t*Y + X^2)^2)";
const EXAMPLE9: &str = "X += -(Y^2)/(t); Y += (t-1)*X; X += (t+1)*Y; Y += (X^2)/(t)";

fn polyauto(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyauto"))
        .args(args)
        .output()
        .expect("run polyauto")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn nagata_is_not_tame_over_r() {
    let o = polyauto(&["tame-check", NAGATA]);
    assert_eq!(o.status.code(), Some(2));
    let s = stdout(&o);
    assert!(s.contains("not tame over R"), "{s}");
    assert!(s.contains("step 6"), "{s}");
    assert!(s.contains("required constant (-1)/(t)"), "{s}");
}

#[test]
fn nagata_is_tame_over_k() {
    let o = polyauto(&["tame-check", "--field", NAGATA]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("tame over K"));
}

#[test]
fn example9_has_length_four() {
    let o = polyauto(&["length", EXAMPLE9]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("length 4\n"));
    let o = polyauto(&["--format", "json", "length", EXAMPLE9]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["kind"], "length");
    assert_eq!(v["length"], 4);
    assert_eq!(v["schema"], "polyauto-certificate/1");
}

#[test]
fn compose_and_invert() {
    let o = polyauto(&["compose", "(X, Y + X^2)", "(X + Y, Y)"]);
    assert_eq!(stdout(&o).trim(), "(X + Y, X^2 + 2*X*Y + Y^2 + Y)");
    let o = polyauto(&["invert", "Y += (X^2)/(t)"]);
    assert!(stdout(&o).contains("map: (X, (-X^2 + t*Y)/(t))"), "{}", stdout(&o));
    let o = polyauto(&["compose", "(X, Y)", "(X, Y, Z)"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn commutator_and_stable_tame() {
    let o = polyauto(&["commutator", "--C", "(t+1)*Z^2", "--D", "t*Z", "--a", "t", "--b", "t+1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("integral: true") && s.contains("jacobian: 1"), "{s}");

    let spec = "C = (t+1)*Z^2; D = t*Z; a = t; b = t+1";
    let o = polyauto(&["--format", "json", "stable-tame", spec]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["kind"], "stable-tame");
    assert_eq!(v["residual"]["length"], 3);
    let names: Vec<&str> = v["chain"].as_array().unwrap().iter().map(|l| l["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["E-conjugation", "L-normalization", "factorization", "residual"]);
}

#[test]
fn syntax_errors_exit_one_with_position() {
    let o = polyauto(&["tame-check", "(X, Y +"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("1:8") && err.contains("end of input"), "{err}");
    let o = polyauto(&["stable-tame", "C = Z; D = Z; a = t; b = t"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_paper_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = polyauto(&["--format", "json", "verify-paper", "--report", path.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let items = v["items"].as_array().unwrap();
    let failing: Vec<&str> = items
        .iter()
        .filter(|i| i["status"] != "pass")
        .map(|i| i["name"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["Example 9 printed identity"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(items.len() >= 15);
    assert!(items.iter().any(|i| i["name"] == "Nagata expansion" && i["status"] == "pass"));
}
