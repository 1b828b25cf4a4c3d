use std::fs;
use std::path::Path;

use dualrisk::cli::run;
use dualrisk::risk::AtomList;
use dualrisk::Lottery;
use serde_json::Value;
use tempfile::TempDir;

fn run_to(dir: &TempDir, name: &str, args: &[&str]) -> (i32, String) {
    let path = dir.path().join(name);
    let mut argv = vec!["dualrisk", "--output", path.to_str().unwrap()];
    argv.extend_from_slice(args);
    let code = run(argv);
    (code, fs::read_to_string(&path).unwrap_or_default())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn premium_reports_both_terms() {
    let dir = TempDir::new().unwrap();
    let (code, out) = run_to(
        &dir,
        "premium.json",
        &[
            "premium",
            "--model",
            "rdu",
            "--utility",
            "power:0.5",
            "--weighting",
            "prelec:0.65",
            "--w0",
            "10",
            "--p0",
            "0.3",
            "--eps1",
            "0.05",
            "--eps2",
            "1",
        ],
    );
    assert_eq!(code, 0);
    let v = json(&out);
    let approx = v["approx"].as_f64().unwrap();
    let sum = v["variance_term"].as_f64().unwrap() + v["maxiance_term"].as_f64().unwrap();
    assert!((approx - sum).abs() < 1e-15);
    assert!((v["variance_term"].as_f64().unwrap() - 0.025).abs() < 1e-15);
    assert!((v["exact"].as_f64().unwrap() - approx).abs() < 1e-3);
}

#[test]
fn eu_and_dt_models() {
    let dir = TempDir::new().unwrap();
    let (code, out) = run_to(
        &dir,
        "eu.json",
        &[
            "premium",
            "--model",
            "eu",
            "--utility",
            "power:0.5",
            "--w0",
            "4",
            "--lottery=-1:0.5,1:0.5",
        ],
    );
    assert_eq!(code, 0);
    let v = json(&out);
    assert!((v["exact"].as_f64().unwrap() - (2.0 - 15f64.sqrt() / 2.0)).abs() < 1e-12);
    assert_eq!(v["approx"].as_f64().unwrap(), 0.0625);

    let (code, out) = run_to(
        &dir,
        "dt.json",
        &[
            "premium",
            "--model",
            "dt",
            "--weighting",
            "pow:2",
            "--p0",
            "0.5",
            "--eps1",
            "0.1",
        ],
    );
    assert_eq!(code, 0);
    let v = json(&out);
    assert!((v["exact"].as_f64().unwrap() + 0.1).abs() < 1e-12);
    assert!((v["approx"].as_f64().unwrap() + 0.1).abs() < 1e-12);
}

#[test]
fn index_table() {
    let dir = TempDir::new().unwrap();
    let (code, out) = run_to(
        &dir,
        "index.csv",
        &[
            "--format",
            "csv",
            "index",
            "--weighting",
            "prelec:0.65",
            "--grid",
            "0.01:0.99:99",
        ],
    );
    assert_eq!(code, 0);
    assert!(!out.contains('\r'));
    let rows = csv_rows(&out);
    assert_eq!(rows[0], ["p", "value", "d1", "d2", "local_index"]);
    assert_eq!(rows.len(), 100);
    let idx: Vec<f64> = rows[1..].iter().map(|r| r[4].parse().unwrap()).collect();
    assert!(idx.windows(2).all(|w| w[1] < w[0]));
    assert_eq!(rows[1][0], "1.0000000000000000e-2");
}

#[test]
fn surface_grid_and_ratio() {
    let dir = TempDir::new().unwrap();
    let base = [
        "--format",
        "csv",
        "surface",
        "--utility",
        "power:0.5",
        "--weighting",
        "prelec:0.65",
        "--w0",
        "0.5:10:40",
        "--p0",
        "0.01:0.99:50",
    ];
    let (code, unit) = run_to(
        &dir,
        "unit.csv",
        &[&base[..], &["--m2-over-2pr", "1", "--mbar2-over-2pr", "1"]].concat(),
    );
    assert_eq!(code, 0);
    let unit = csv_rows(&unit);
    assert_eq!(
        unit[0],
        [
            "w0",
            "p0",
            "variance_term",
            "maxiance_term",
            "lambda_approx"
        ]
    );
    assert_eq!(unit.len(), 1 + 40 * 50);

    for (ratio, factor) in [("3", 3.0), ("0.3333333333333333", 1.0 / 3.0)] {
        let (code, out) = run_to(
            &dir,
            "ratio.csv",
            &[&base[..], &["--ratio", ratio]].concat(),
        );
        assert_eq!(code, 0);
        for (a, b) in unit[1..].iter().zip(&csv_rows(&out)[1..]) {
            let v1: f64 = a[2].parse().unwrap();
            let v3: f64 = b[2].parse().unwrap();
            assert!((v3 - factor * v1).abs() <= 1e-15 * v1.abs().max(1.0));
            assert_eq!(a[3], b[3]);
        }
    }
}

#[test]
fn moments_json_round_trips() {
    let dir = TempDir::new().unwrap();
    let (code, first) = run_to(
        &dir,
        "m1.json",
        &["moments", "--lottery", "0.1:0.3,2.7:0.45,-1.3:0.25"],
    );
    assert_eq!(code, 0);
    let v = json(&first);
    let atoms: AtomList =
        serde_json::from_value(serde_json::json!({ "atoms": v["atoms"] })).unwrap();
    let original = Lottery::new([(0.1, 0.3), (2.7, 0.45), (-1.3, 0.25)]).unwrap();
    let reparsed = Lottery::try_from(atoms.clone()).unwrap();
    assert_eq!(reparsed, original);
    for (a, b) in reparsed.to_atom_list().atoms.iter().zip(&atoms.atoms) {
        assert_eq!(a.outcome.to_bits(), b.outcome.to_bits());
        assert_eq!(a.probability.to_bits(), b.probability.to_bits());
    }

    let file = dir.path().join("atoms.json");
    fs::write(&file, serde_json::to_string(&atoms).unwrap()).unwrap();
    let arg = format!("@{}", file.display());
    let (code, second) = run_to(&dir, "m2.json", &["moments", "--lottery", &arg]);
    assert_eq!(code, 0);
    assert_eq!(first, second);
}

#[test]
fn spread_moments() {
    let dir = TempDir::new().unwrap();
    let (code, out) = run_to(
        &dir,
        "s.csv",
        &["--format", "csv", "moments", "--spread=-1:0.1,1:0.1"],
    );
    assert_eq!(code, 0);
    let rows = csv_rows(&out);
    assert_eq!(
        rows[0],
        ["mean", "variance", "maxiance", "miniance", "total_mass"]
    );
    let maxiance: f64 = rows[1][2].parse().unwrap();
    assert!((maxiance - 0.02).abs() < 1e-15);
}

#[test]
fn identical_arguments_give_identical_bytes() {
    let dir = TempDir::new().unwrap();
    let args = [
        "compare",
        "--utility1",
        "power:0.8",
        "--utility2",
        "power:0.5",
        "--weighting2",
        "quad:0.3",
        "--queries",
        "200",
        "--seed",
        "17",
    ];
    let (c1, a) = run_to(&dir, "a.json", &args);
    let (c2, b) = run_to(&dir, "b.json", &args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let v = json(&a);
    assert_eq!(v["agreement"], Value::Bool(true));
    assert_eq!(v["condition_ii"]["holds"], Value::Bool(true));

    let mc = [
        "oracle",
        "mc",
        "--lottery=-1:0.5,1:0.5",
        "--samples",
        "200000",
        "--seed",
        "42",
    ];
    let (_, a) = run_to(&dir, "c.json", &mc);
    let (_, b) = run_to(&dir, "d.json", &mc);
    assert_eq!(a, b);
}

#[test]
fn portfolio_outputs() {
    let dir = TempDir::new().unwrap();
    let (code, out) = run_to(
        &dir,
        "p.json",
        &[
            "portfolio",
            "--utility",
            "power:0.5",
            "--w0",
            "4",
            "--p0",
            "0.4",
            "--r0",
            "1",
            "--r1",
            "1",
        ],
    );
    assert_eq!(code, 0);
    let share = json(&out)["solution"]["share"].as_f64().unwrap();
    assert!((share - 20.0 / 13.0).abs() < 1e-10);

    let (code, out) = run_to(
        &dir,
        "c.json",
        &[
            "portfolio",
            "--utility",
            "exp:0.5",
            "--weighting",
            "pow:2",
            "--w0",
            "10",
            "--r0",
            "1",
            "--r1",
            "3",
            "--eps1",
            "0.1",
        ],
    );
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["solution"]["share"].as_f64().unwrap(), 0.0);
    assert!((v["contraction"]["approx"].as_f64().unwrap() + 0.1154700538).abs() < 1e-9);
}

#[test]
fn gini_and_oracles() {
    let dir = TempDir::new().unwrap();
    let (code, out) = run_to(&dir, "g.json", &["gini", "--lottery", "0:0.5,1:0.5"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["gini"].as_f64().unwrap(), 0.5);

    let (code, out) = run_to(
        &dir,
        "pairs.json",
        &[
            "oracle",
            "pairs",
            "--lottery",
            "1:0.3333333333333333,2:0.3333333333333333,3:0.3333333333333334",
        ],
    );
    assert_eq!(code, 0);
    let v = json(&out);
    assert!((v["pairs"].as_f64().unwrap() - v["analytic"].as_f64().unwrap()).abs() < 1e-12);

    let (code, out) = run_to(
        &dir,
        "fd.json",
        &[
            "oracle",
            "fd",
            "--weighting",
            "prelec:0.65",
            "--x",
            "0.5",
            "--order",
            "3",
        ],
    );
    assert_eq!(code, 0);
    assert!(json(&out)["fd"].as_f64().unwrap() > 0.0);

    let (code, out) = run_to(
        &dir,
        "b.json",
        &[
            "oracle",
            "bisect",
            "--utility",
            "linear",
            "--w0",
            "5",
            "--lhs-weight",
            "2",
            "--rhs-value",
            "3",
            "--lo",
            "-10",
            "--hi",
            "10",
        ],
    );
    assert_eq!(code, 0);
    assert!((json(&out)["lambda"].as_f64().unwrap() - 3.5).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run(["dualrisk", "--help"]), 0);
    assert_eq!(
        run([
            "dualrisk",
            "premium",
            "--utility",
            "bogus",
            "--p0",
            "0.5",
            "--eps1",
            "0.1"
        ]),
        2
    );
    assert_eq!(
        run([
            "dualrisk",
            "index",
            "--weighting",
            "prelec:0.65",
            "--grid",
            "0.5:0.1:3"
        ]),
        2
    );
    assert_eq!(run(["dualrisk", "frobnicate"]), 2);
    let (code, out) = run_to(
        &dir,
        "e.json",
        &[
            "premium",
            "--model",
            "dt",
            "--weighting",
            "pow:2",
            "--p0",
            "0.3",
            "--eps1",
            "0.5",
        ],
    );
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(!Path::new(&dir.path().join("e.json")).exists());
    assert_eq!(run(["dualrisk", "gini", "--lottery", "-1:0.5,1:0.5"]), 1);
    assert_eq!(
        run([
            "dualrisk",
            "oracle",
            "mc",
            "--lottery",
            "0:1",
            "--samples",
            "10"
        ]),
        1
    );
}
