use std::fs;
use std::process::{Command, Output};

fn burniat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_burniat")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn torsion_listing() {
    let o = burniat(&["torsion", "--ksq", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r.len() == 8 && r.chars().filter(|c| *c == ' ').count() == 2));
    assert_eq!(stdout(&burniat(&["torsion", "--ksq", "2"])).lines().count(), 3);
    assert_eq!(stdout(&burniat(&["torsion", "--ksq", "6"])).lines().count(), 6);
}

#[test]
fn torsion_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k3.conf");
    let cfg = stdout(&burniat(&["config", "--ksq", "3"]));
    fs::write(&path, format!("# three points\n{cfg}")).unwrap();
    let o = burniat(&["torsion", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), stdout(&burniat(&["torsion", "--ksq", "3"])));
    fs::write(&path, "ksq = 3\ncolour = blue\n").unwrap();
    assert_eq!(burniat(&["torsion", "--config", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn effective_examples() {
    let o = burniat(&["effective", "--class", "(3; 0 00; 0 00; 0 00)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("NonEffective"));
    let o = burniat(&["effective", "--class", "(6; 1 00; 1 00; 1 00)"]);
    assert!(stdout(&o).contains("NonEffective\ttrusted:canonical"));
    let o = burniat(&["effective", "--class", "(1; -1 00; 0 00; 0 00)"]);
    assert_eq!(stdout(&o).trim_end(), "(1; -1 00; 0 00; 0 00)\tInS\tA0:1");
    let o = burniat(&["effective", "--class", "(2; 0 00; 0 00; 0 00)"]);
    assert_eq!(o.status.code(), Some(2), "congruence fails");
    assert_eq!(burniat(&["effective", "--class", "garbage"]).status.code(), Some(2));
}

#[test]
fn scan_to_file_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for p in [&a, &b] {
        let o = burniat(&["scan", "--max-degree", "4", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("# burniat-scan 1"));
    let o = burniat(&["scan", "--max-degree", "0", "--format", "human"]);
    assert!(stdout(&o).contains("minimal-form classes not in S: 0"));
    assert_eq!(burniat(&["scan", "--max-degree", "13"]).status.code(), Some(2));
}

#[test]
fn exc_check_output() {
    let o = burniat(&["exc-check", "--fiber", "degenerate", "--collection", "corrected"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# burniat-exc 1 fiber=degenerate collection=corrected\n"));
    assert_eq!(text.lines().filter(|l| l.ends_with("\tpass")).count(), 21);
    assert_eq!(burniat(&["exc-check", "--fiber", "sideways"]).status.code(), Some(2));
}

#[test]
fn verify_all_sections_and_faults() {
    let o = burniat(&["verify-all", "--only", "torsion,table"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().all(|l| l.starts_with("PASS")));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.table");
    fs::write(&bad, "# flip a torsion bit\nA1 B0 1 11\n").unwrap();
    let o = burniat(&["verify-all", "--table", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL table construction"));

    fs::write(&bad, "A1 B0 one 11\n").unwrap();
    assert_eq!(burniat(&["verify-all", "--table", bad.to_str().unwrap()]).status.code(), Some(2));
}
