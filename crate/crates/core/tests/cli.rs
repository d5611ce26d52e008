use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coxlimits"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn roots_row_counts() {
    let f1 = fixture("f1.gram");
    let csv = stdout(&["roots", &f1, "--depth", "2"]);
    assert_eq!(csv.lines().count(), 1 + 6);
    assert!(csv.starts_with("index,depth,word,base,coeff_1,coeff_2,norm_sum,nhat_1,nhat_2,q_normalized\n"));
    let csv = stdout(&["roots", &fixture("f2.cox"), "--depth", "0"]);
    assert_eq!(csv.lines().count(), 1 + 3);
}

#[test]
fn roots_values_round_trip() {
    let csv = stdout(&["roots", &fixture("f1.gram"), "--depth", "2"]);
    let last: Vec<&str> = csv.lines().last().unwrap().split(',').collect();
    // (5.25, 2.5) = r_1 r_2 a_1
    assert_eq!(last[2], "1-2");
    assert_eq!(last[3], "1");
    assert_eq!(last[4].parse::<f64>().unwrap(), 5.25);
    assert_eq!(last[7].parse::<f64>().unwrap(), 5.25 / 7.75);
}

#[test]
fn roots_json_matches_csv() {
    let f2 = fixture("f2.cox");
    let json: Value = serde_json::from_str(&stdout(&["roots", &f2, "--depth", "3", "--format", "json"])).unwrap();
    let csv = stdout(&["roots", &f2, "--depth", "3"]);
    assert_eq!(json["count"].as_u64().unwrap() as usize, csv.lines().count() - 1);
    assert_eq!(json["roots"][0]["coeffs"][2].as_f64(), Some(1.0));
}

#[test]
fn roots_error_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.gram", "2\n1 0.3\n");
    assert_eq!(code(&["roots", &bad]), 2);
    let asym = write(dir.path(), "asym.gram", "2\n1 -1.5\n-1.2 1\n");
    assert_eq!(code(&["roots", &asym]), 2);
    assert_eq!(code(&["roots", "/nonexistent/file.gram"]), 2);
    assert_eq!(code(&["roots", &fixture("f1.gram"), "--depth", "x"]), 3);
    assert_eq!(code(&["roots", &fixture("f1.gram"), "--format", "xml"]), 3);
    assert_eq!(code(&["roots", &fixture("f3.gram"), "--depth", "12", "--max-roots", "100"]), 4);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&[]), 3);
}

#[test]
fn coxeter_input_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cox = write(dir.path(), "inf.cox", "# affine-free pair\n2\n1 0\n0 1\n");
    let ov = write(dir.path(), "ov.txt", "1 2 -1.25\n");
    let with = stdout(&["roots", &cox, "--depth", "2", "--overrides", &ov]);
    let plain = stdout(&["roots", &fixture("f1.gram"), "--depth", "2"]);
    assert_eq!(with, plain);
    let bond = stdout(&["roots", &cox, "--depth", "2", "--infinity-bond", "-1.25"]);
    assert_eq!(bond, plain);
    assert_eq!(code(&["roots", &cox, "--infinity-bond", "-0.5"]), 2);
    assert_eq!(code(&["roots", &fixture("f1.gram"), "--overrides", &ov]), 3);
    // explicit format wins over the extension
    let as_gram = write(dir.path(), "f1.cox", "2\n1 -1.25\n-1.25 1\n");
    assert_eq!(stdout(&["roots", &as_gram, "--depth", "2", "--input", "gram"]), plain);
}

#[test]
fn dihedral_report() {
    let f1 = fixture("f1.gram");
    let json: Value = serde_json::from_str(&stdout(&["dihedral", &f1, "--a", "@1", "--b", "@2", "--iters", "20"])).unwrap();
    assert!((json["theta"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-12);
    assert_eq!(json["kind"], "hyperbolic");
    let conv = json["convergence"].as_array().unwrap();
    assert_eq!(conv.len(), 20);
    assert!(conv[19]["distance_to_a_inf"].as_f64().unwrap() <= 1e-10);
    assert!(conv[0]["distance_to_a_inf"].as_f64().unwrap() > conv[1]["distance_to_a_inf"].as_f64().unwrap());
    let pairings: Vec<f64> = json["pairings"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert!((pairings[1] + 0.5).abs() < 1e-12);

    let json: Value = serde_json::from_str(&stdout(&["dihedral", &f1, "--a", "1,2@1", "--b", "@2"])).unwrap();
    assert_eq!(json["a"][0].as_f64(), Some(5.25));
    assert_eq!(json["kind"], "hyperbolic");
}

#[test]
fn dihedral_error_codes() {
    let f1 = fixture("f1.gram");
    assert_eq!(code(&["dihedral", &fixture("f2.cox"), "--a", "@1", "--b", "@2"]), 5);
    assert_eq!(code(&["dihedral", &f1, "--a", "1", "--b", "@2"]), 3);
    assert_eq!(code(&["dihedral", &f1, "--a", "@3", "--b", "@2"]), 3);
    assert_eq!(code(&["dihedral", &f1, "--a", "@1"]), 3);
}

#[test]
fn dihedral_affine_pair() {
    let dir = tempfile::tempdir().unwrap();
    let aff = write(dir.path(), "aff.gram", "2\n1 -1\n-1 1\n");
    let json: Value = serde_json::from_str(&stdout(&["dihedral", &aff, "--a", "@1", "--b", "@2"])).unwrap();
    assert_eq!(json["kind"], "affine");
    assert!(json["theta"].is_null());
    assert_eq!(json["a_inf"][0].as_f64(), Some(0.5));
}

#[test]
fn limits_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("l.csv");
    let out_s = out.to_string_lossy().into_owned();
    let summary: Value = serde_json::from_str(&stdout(&[
        "limits", &fixture("f1.gram"), "--depth", "20", "--min-depth", "15", "--out", &out_s,
    ]))
    .unwrap();
    assert_eq!(summary["point_count"], 2);
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.lines().nth(1).unwrap().ends_with("\"deep_root(15)\""));

    let summary: Value = serde_json::from_str(&stdout(&[
        "limits", &fixture("a2.cox"), "--depth", "10", "--min-depth", "5", "--out", &out_s,
    ]))
    .unwrap();
    assert_eq!(summary["point_count"], 0);
    assert!(summary["max_residual"].is_null());

    let summary_path = dir.path().join("s.json");
    let e2_path = dir.path().join("e2.csv");
    let csv = stdout(&[
        "limits", &fixture("f2.cox"), "--depth", "15", "--min-depth", "12", "--cluster-tol", "1e-2",
        "--summary", &summary_path.to_string_lossy(), "--e2-out", &e2_path.to_string_lossy(),
    ]);
    let summary: Value = serde_json::from_str(&std::fs::read_to_string(&summary_path).unwrap()).unwrap();
    assert!(summary["max_residual"].as_f64().unwrap() <= 0.05);
    assert_eq!(summary["point_count"].as_u64().unwrap() as usize, csv.lines().count() - 1);
    let e2 = std::fs::read_to_string(&e2_path).unwrap();
    assert_eq!(summary["e2_count"].as_u64().unwrap() as usize, e2.lines().count() - 1);
}

#[test]
fn limits_bad_depths() {
    assert_eq!(code(&["limits", &fixture("f1.gram"), "--depth", "5", "--min-depth", "6"]), 3);
    assert_eq!(code(&["limits", &fixture("f1.gram"), "--cluster-tol", "0"]), 3);
}

#[test]
fn dominance_referee_modes() {
    assert_eq!(code(&["dominance", &fixture("f1.gram"), "--depth", "5", "--oracle-len", "8"]), 0);
    assert_eq!(code(&["dominance", &fixture("f2.cox"), "--depth", "4", "--oracle-len", "8"]), 0);
    assert_eq!(code(&["dominance", &fixture("f2.cox"), "--oracle-len", "0"]), 3);
    assert_eq!(code(&["dominance", &fixture("f2.cox"), "--max-pairs", "0"]), 3);
}

#[test]
fn dominance_sampling_is_seeded() {
    let f3 = fixture("f3.gram");
    let a = stdout(&["dominance", &f3, "--depth", "3", "--max-pairs", "50"]);
    let b = stdout(&["dominance", &f3, "--depth", "3", "--max-pairs", "50"]);
    let c = stdout(&["dominance", &f3, "--depth", "3", "--max-pairs", "50", "--seed", "7"]);
    assert_eq!(a.lines().count(), 51);
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(a.starts_with("x_index,y_index,B_xy,present,direction,method\n"));
}

fn attr(tag: &str, name: &str) -> Option<f64> {
    let key = format!(" {name}=\"");
    let start = tag.find(&key)? + key.len();
    let end = start + tag[start..].find('"')?;
    tag[start..end].parse().ok()
}

fn seg_dist(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    ((p.0 - a.0 - t * dx).powi(2) + (p.1 - a.1 - t * dy).powi(2)).sqrt()
}

#[test]
fn render_limit_markers_sit_on_the_conic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f2.svg");
    let out_s = out.to_string_lossy().into_owned();
    let args = ["render", &fixture("f2.cox"), "--depth", "12", "--layers", "roots,conic,limits", "--out", &out_s];
    assert_eq!(code(&args), 0);
    let svg = std::fs::read_to_string(&out).unwrap();

    let mut polyline = Vec::new();
    let mut markers = Vec::new();
    for line in svg.lines() {
        if line.starts_with("<polyline class=\"conic\"") {
            let start = line.find("points=\"").unwrap() + 8;
            let end = start + line[start..].find('"').unwrap();
            for pair in line[start..end].split(' ') {
                let (x, y) = pair.split_once(',').unwrap();
                polyline.push((x.parse::<f64>().unwrap(), y.parse::<f64>().unwrap()));
            }
        }
        if line.starts_with("<circle class=\"limit\"") {
            markers.push((attr(line, "cx").unwrap(), attr(line, "cy").unwrap()));
        }
    }
    assert_eq!(polyline.len(), 513);
    assert!(markers.len() >= 50);
    for m in &markers {
        let d = polyline
            .windows(2)
            .map(|w| seg_dist(*m, w[0], w[1]))
            .fold(f64::INFINITY, f64::min);
        assert!(d <= 2.0, "marker {m:?} is {d} px from the conic");
    }

    std::fs::rename(&out, dir.path().join("first.svg")).unwrap();
    assert_eq!(code(&args), 0);
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(dir.path().join("first.svg")).unwrap());
}

#[test]
fn render_depth_zero_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.svg").to_string_lossy().into_owned();
    assert_eq!(code(&["render", &fixture("f3.gram"), "--depth", "0", "--out", &out]), 0);
    let svg = std::fs::read_to_string(&out).unwrap();
    assert_eq!(svg.matches("<circle").count(), 3);
    assert!(svg.starts_with("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg "));

    let rank1 = write(dir.path(), "r1.gram", "1\n1\n");
    assert_eq!(code(&["render", &rank1, "--out", &out]), 3);
    assert_eq!(code(&["render", &fixture("f1.gram"), "--layers", "stars", "--out", &out]), 3);
    assert_eq!(code(&["render", &fixture("f1.gram"), "--width", "10", "--out", &out]), 3);
    assert_eq!(code(&["render", &fixture("f1.gram")]), 3);
}

#[test]
fn neighborhood_report() {
    let json: Value = serde_json::from_str(&stdout(&[
        "neighborhood", &fixture("f1.gram"), "--a", "@1", "--b", "@2", "--index", "1",
    ]))
    .unwrap();
    assert_eq!(json["i"], 1);
    assert_eq!(json["a_i"][0].as_f64(), Some(5.25));
    let probes = json["probes"].as_array().unwrap();
    assert!((probes[0]["margin"].as_f64().unwrap() - 0.0625).abs() < 1e-12);
    assert_eq!(probes[0]["certified"], true);
    assert!((probes[1]["margin"].as_f64().unwrap() + 2.0).abs() < 1e-12);
    assert_eq!(probes[1]["certified"], false);
}
