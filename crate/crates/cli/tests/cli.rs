use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn szego(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_szego")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gap_prints_the_arc() {
    let o = szego(&["gap", "--alpha", "0.5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "(-1.047198, 1.047198)\n");
}

#[test]
fn gap_rejects_bad_alpha() {
    let o = szego(&["gap", "--alpha", "1.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn disc_zeros_csv() {
    let o = szego(&["disc-zeros", "--word", "0.6,0.9i"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "index,theta,re,im,multiplicity");
    let thetas: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    // cos(theta) = -Re(conj(a) b) = 0
    assert!((thetas[0] + std::f64::consts::FRAC_PI_2).abs() < 1e-9);
    assert!((thetas[1] - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
}

#[test]
fn disc_zeros_real_word() {
    let o = szego(&["disc-zeros", "--word", "0.6,-0.2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let t: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(t.len(), 2);
    // period two: the trace is z^2 + 2abz + 1, zeros at cos(theta) = -ab
    assert!((t[1] - (0.12f64).acos()).abs() < 1e-9, "{t:?}");
    assert!((t[0] + t[1]).abs() < 1e-9);
}

#[test]
fn missing_couplings_is_a_usage_error() {
    let o = szego(&["ising-zeros", "--couplings", "none", "--tau", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    let o = szego(&["ising-zeros", "--couplings", "/nonexistent/j.txt", "--tau", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unknown_flag_exits_one() {
    assert_eq!(szego(&["gap", "--bogus"]).status.code(), Some(1));
    assert_eq!(szego(&["nope"]).status.code(), Some(1));
    assert_eq!(szego(&["--help"]).status.code(), Some(0));
}

#[test]
fn ising_zeros_on_the_circle() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("j.txt");
    fs::write(&f, "0.5\n0.8\n\n# comment\n0.3\n").unwrap();
    let o = szego(&["ising-zeros", "--couplings", f.to_str().unwrap(), "--tau", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 4);
    for l in text.lines().skip(1) {
        let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((v[2].hypot(v[3]) - 1.0).abs() < 1e-12);
        // alpha_inf = e^{-2 * 0.8}
        assert!(v[1].abs() >= 2.0 * (-1.6f64).exp().asin() - 1e-9);
    }
}

fn read_all(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().into_string().unwrap(), fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = szego(&[
            "random-approx",
            "--measure",
            "uniform:0.3,0.6",
            "--windows",
            "50,200",
            "--seed",
            "7",
            "--out",
            d.path().to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    let (fa, fb) = (read_all(a.path()), read_all(b.path()));
    let names: Vec<&str> = fa.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["config.json", "records.json", "window.svg"]);
    for ((na, ba), (nb, bb)) in fa.iter().zip(&fb) {
        assert_eq!(na, nb);
        if na != "config.json" {
            assert_eq!(ba, bb, "{na}");
        }
    }
    let rec: serde_json::Value = serde_json::from_slice(&fa[1].1).unwrap();
    assert_eq!(rec["records"].as_array().unwrap().len(), 2);
}

#[test]
fn config_is_written_next_to_outputs() {
    let d = tempfile::tempdir().unwrap();
    let o = szego(&["spectrum", "--word", "0.3,0.6", "--out", d.path().to_str().unwrap()]);
    assert!(o.status.success());
    let cfg: serde_json::Value = serde_json::from_slice(&fs::read(d.path().join("config.json")).unwrap()).unwrap();
    assert_eq!(cfg["command"], "spectrum");
    assert_eq!(cfg["word"], "0.3,0.6");
    assert!(cfg["grid"].is_null());
    let spec: serde_json::Value = serde_json::from_slice(&fs::read(d.path().join("spectrum.json")).unwrap()).unwrap();
    assert_eq!(spec["bands"].as_array().unwrap().len(), 2);
    assert!(d.path().join("spectrum.svg").exists());
}

#[test]
fn gap_labels_with_fitted_offset() {
    let o = szego(&["gaplabels", "--word", "0.25,0.55,0.4", "--fit-r"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let labels: Vec<f64> = v["gaps"].as_array().unwrap().iter().map(|g| g["label"].as_f64().unwrap()).collect();
    for (l, w) in labels.iter().zip([0.0, 1.0 / 3.0, 2.0 / 3.0]) {
        assert!((l - w).abs() < 1e-9);
    }
    // R = -(1/p) sum log rho_j for a periodic word
    let want: f64 = -[0.25f64, 0.55, 0.4].iter().map(|a| 0.5 * (1.0 - a * a).ln()).sum::<f64>() / 3.0;
    assert!((v["R"].as_f64().unwrap() - want).abs() < 1e-3);
}

#[test]
fn lyapunov_of_a_constant_in_the_gap() {
    let o = szego(&["lyapunov", "--measure", "constant:0.5", "--theta", "0", "--n", "4000", "--trials", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let v: f64 = text.split_whitespace().nth(2).unwrap().parse().unwrap();
    // at theta = 0 the transfer matrix has eigenvalues sqrt(3) and 1/sqrt(3)
    assert!((v - 0.5 * 3f64.ln()).abs() < 1e-3, "{text}");
    assert_eq!(
        szego(&["lyapunov", "--measure", "constant:0.5", "--z", "2"]).status.code(),
        Some(1)
    );
}
