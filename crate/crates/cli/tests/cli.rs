use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const T: &str = "1,1\n-1,1\n-2,0\n2,0\n";
const K: &str = "0,1\n-1,0\n0,-1\n3,0\n";
const R: &str = "0,0\n4,0\n0,3\n";
const R_BAR: &str = "0,0\n4,0\n0,-3\n";
const S: &str = "1,0\n-1,0\n0,1\n0,-1\n";
// T turned by 90 degrees and shifted.
const T_ROT: &str = "4,2\n4,0\n5,-1\n5,3\n";

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        let ws = Self {
            dir: TempDir::new().unwrap(),
        };
        for (name, text) in [
            ("T.csv", T),
            ("K.csv", K),
            ("R.csv", R),
            ("Rbar.csv", R_BAR),
            ("S.csv", S),
            ("Trot.csv", T_ROT),
            ("empty.csv", ""),
        ] {
            ws.write(name, text);
        }
        ws
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let path = self.path(name);
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, text).unwrap();
        path
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_simplexwise"))
            .current_dir(self.dir.path())
            .args(args)
            .output()
            .unwrap()
    }
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value(o: &Output) -> f64 {
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    stdout(o).trim().parse().unwrap()
}

fn json(o: &Output) -> Value {
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(o)).unwrap()
}

fn column(doc: &Value, field: &str) -> Vec<Value> {
    doc["entries"].as_array().unwrap().iter().map(|e| e[field].clone()).collect()
}

#[test]
fn sdd_document_of_t_has_table_weights() {
    let ws = Workspace::new();
    let doc = json(&ws.run(&["invariant", "--input", "T.csv", "--kind", "sdd", "--h", "2"]));
    let multiplicities: Vec<u64> = column(&doc, "multiplicity").iter().map(|v| v.as_u64().unwrap()).collect();
    assert_eq!(multiplicities, [2, 1, 2, 1]);
    let weights: Vec<f64> = column(&doc, "weight").iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(weights, [2.0 / 6.0, 1.0 / 6.0, 2.0 / 6.0, 1.0 / 6.0]);
}

#[test]
fn scd_document_of_the_square_has_one_entry() {
    let ws = Workspace::new();
    let doc = json(&ws.run(&["invariant", "--input", "S.csv", "--kind", "scd"]));
    assert_eq!(column(&doc, "weight"), [Value::from(1.0)]);
}

#[test]
fn every_kind_produces_a_document() {
    let ws = Workspace::new();
    for kind in ["sdv", "pdd", "amd", "sdd", "scd", "sdm", "cdm"] {
        let o = ws.run(&["invariant", "--input", "T.csv", "--kind", kind]);
        assert_eq!(json(&o)["kind"], kind);
    }
    let out = ws.path("t.json");
    let o = ws.run(&["invariant", "--input", "T.csv", "--kind", "sdd", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    assert!(fs::read_to_string(out).unwrap().contains("\"kind\": \"sdd\""));
}

#[test]
fn bad_input_exits_with_two() {
    let ws = Workspace::new();
    let o = ws.run(&["invariant", "--input", "empty.csv", "--kind", "sdd"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    ws.write("ragged.csv", "0,0\n1\n");
    assert_eq!(ws.run(&["invariant", "--input", "ragged.csv", "--kind", "sdv"]).status.code(), Some(2));
    assert_eq!(ws.run(&["invariant", "--input", "missing.csv", "--kind", "sdv"]).status.code(), Some(2));
    assert_eq!(ws.run(&["dist", "--a", "T.csv", "--b", "R.csv", "--invariant", "sdd"]).status.code(), Some(2));
    assert_eq!(ws.run(&["dist", "--a", "T.csv", "--b", "K.csv", "--invariant", "sdm", "--metric", "lac"]).status.code(), Some(2));
    assert_eq!(ws.run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn lac_refuses_collapsed_input() {
    let ws = Workspace::new();
    let o = ws.run(&["dist", "--a", "T.csv", "--b", "K.csv", "--metric", "lac", "--collapse-tol", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    let lac = value(&ws.run(&["dist", "--a", "T.csv", "--b", "K.csv", "--metric", "lac"]));
    let emd = value(&ws.run(&["dist", "--a", "T.csv", "--b", "K.csv", "--metric", "emd"]));
    assert!(emd <= lac + 1e-9);
}

#[test]
fn distances_of_the_worked_examples() {
    let ws = Workspace::new();
    let d = value(&ws.run(&["dist", "--a", "T.csv", "--b", "Trot.csv", "--invariant", "scd", "--metric", "emd", "--equivalence", "rigid"]));
    assert!(d <= 1e-9, "{d}");
    let d = value(&ws.run(&["dist", "--a", "T.csv", "--b", "K.csv", "--invariant", "sdd", "--h", "2", "--metric", "emd"]));
    assert!(d >= 0.25670, "{d}");
    let d = value(&ws.run(&["dist", "--a", "R.csv", "--b", "Rbar.csv", "--invariant", "scd", "--equivalence", "isometry"]));
    assert!(d <= 1e-9, "{d}");
    let d = value(&ws.run(&["dist", "--a", "R.csv", "--b", "Rbar.csv", "--invariant", "scd"]));
    assert!(d > 1e-6, "{d}");
    assert_eq!(value(&ws.run(&["dist", "--a", "T.csv", "--b", "K.csv", "--invariant", "sdv"])), 0.0);
    let printed = stdout(&ws.run(&["dist", "--a", "T.csv", "--b", "K.csv", "--invariant", "sdd"]));
    let digits = printed.trim().chars().filter(char::is_ascii_digit).count();
    assert_eq!(digits, 17, "{printed}");
}

fn matrix(ws: &Workspace, dir: &str, extra: &[&str]) -> Vec<Vec<String>> {
    let mut args = vec!["matrix", "--dir", dir];
    args.extend_from_slice(extra);
    let o = ws.run(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    stdout(&o).lines().map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn corpus_matrix() {
    let ws = Workspace::new();
    for (name, text) in [("T.csv", T), ("K.csv", K), ("Trot.csv", T_ROT)] {
        ws.write(&format!("corpus/{name}"), text);
    }
    let rows = matrix(&ws, "corpus", &["--invariant", "sdd", "--metric", "emd", "--jobs", "2"]);
    assert_eq!(rows[0], ["name", "K.csv", "T.csv", "Trot.csv"]);
    let v = |i: usize, j: usize| rows[i + 1][j + 1].parse::<f64>().unwrap();
    for i in 0..3 {
        assert_eq!(v(i, i), 0.0);
        for j in 0..3 {
            assert_eq!(v(i, j), v(j, i));
            for k in 0..3 {
                assert!(v(i, k) <= v(i, j) + v(j, k) + 1e-9);
            }
        }
    }
    assert!(v(1, 2) <= 1e-9);
    assert!(v(0, 1) > 0.0);
    assert!((v(0, 1) - v(0, 2)).abs() <= 1e-9);

    let filtered = matrix(&ws, "corpus", &["--prefilter", "--threshold", "0.01"]);
    assert_eq!(filtered[1][2], "inf");
    assert!(filtered[2][3].parse::<f64>().unwrap() <= 1e-9);

    ws.write("twins/a.csv", S);
    ws.write("twins/b.csv", S);
    let rows = matrix(&ws, "twins", &["--invariant", "scd"]);
    assert_eq!(rows[1][2].parse::<f64>().unwrap(), 0.0);

    ws.write("broken/a.csv", S);
    ws.write("broken/b.csv", "1,2\nx,y\n");
    let out = ws.path("broken.csv");
    let o = ws.run(&["matrix", "--dir", "broken", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn perturbation_harness() {
    let ws = Workspace::new();
    let o = ws.run(&["perturb", "--input", "S.csv", "--invariant", "scd", "--metric", "emd", "--eps", "0.01", "--trials", "50"]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o);
    assert!(line.contains("PASS"), "{line}");
    let ratio: f64 = line.split("ratio=").nth(1).unwrap().split_whitespace().next().unwrap().parse().unwrap();
    assert!(ratio <= 2.0);

    let o = ws.run(&["perturb", "--input", "T.csv", "--invariant", "sdd", "--metric", "lac", "--h", "2", "--eps", "0,0.05", "--trials", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().next().unwrap().contains("max=0.0000000000000000"), "{text}");
    assert_eq!(text.matches("PASS").count(), 2);

    let again = ws.run(&["perturb", "--input", "T.csv", "--invariant", "sdd", "--metric", "lac", "--h", "2", "--eps", "0,0.05", "--trials", "100"]);
    assert_eq!(stdout(&again), text);
    assert_eq!(ws.run(&["perturb", "--input", "T.csv", "--invariant", "sdv", "--eps", "0.1"]).status.code(), Some(2));
}

#[test]
fn oracle_verdicts() {
    let ws = Workspace::new();
    let o = ws.run(&["oracle", "--a", "T.csv", "--b", "K.csv"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(1), "not isometric"));
    let o = ws.run(&["oracle", "--a", "R.csv", "--b", "Rbar.csv"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "isometric reflected"));
    let o = ws.run(&["oracle", "--a", "T.csv", "--b", "T.csv"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "isometric rigid"));
    let big: String = (0..10).map(|i| format!("{i},{}\n", i * i)).collect();
    ws.write("big.csv", &big);
    assert_eq!(ws.run(&["oracle", "--a", "big.csv", "--b", "big.csv"]).status.code(), Some(2));
}

#[test]
fn xyz_input_is_detected_by_extension() {
    let ws = Workspace::new();
    ws.write("R.xyz", "3\ntriangle\nC 0 0\nC 4 0\nC 0 3\n");
    let a = stdout(&ws.run(&["invariant", "--input", "R.xyz", "--kind", "sdv"]));
    let b = stdout(&ws.run(&["invariant", "--input", "R.csv", "--kind", "sdv"]));
    assert_eq!(a, b);
    assert!(Path::new(&ws.path("R.xyz")).exists());
}
