use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};
use srr_core::polyhedra::{enumerate_vertices, HPolytope};
use srr_core::rational;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn srr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srr"))
        .args(args)
        .env_remove("SRR_GUARD_SCALE")
        .output()
        .expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = srr(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

fn strings(v: &Value) -> Vec<Vec<String>> {
    serde_json::from_value(v.clone()).unwrap()
}

fn pts(v: &[&[&str]]) -> Vec<Vec<String>> {
    v.iter().map(|p| p.iter().map(|s| s.to_string()).collect()).collect()
}

#[test]
fn analyze_lists_minimal_sets() {
    let r = json_ok(&["analyze", &path("sys_3x6_f3.txt")]);
    assert_eq!(r["schema"], "srr-report/1");
    assert_eq!(r["command"], "analyze");
    let rec = &r["result"]["recovery"];
    assert_eq!(
        rec,
        &json!([
            {"object": 1, "sets": [[1], [5, 6], [2, 3, 4], [2, 3, 6], [2, 4, 5], [3, 4, 5], [3, 4, 6]]},
            {"object": 2, "sets": [[2], [3, 5], [4, 6], [1, 3, 4], [1, 3, 6], [1, 4, 5]]},
            {"object": 3, "sets": [[3], [2, 5], [1, 2, 4], [1, 2, 6], [1, 4, 5], [1, 4, 6], [4, 5, 6]]},
        ])
    );
    assert_eq!(r["result"]["profile"]["s"], json!([1, 1, 1]));
}

#[test]
fn analyze_reports_parameters() {
    let r = json_ok(&["analyze", &path("mds_2x4_f3.txt"), "--r2"]);
    let p = &r["result"]["params"];
    assert_eq!(p["max_sum"], "3");
    assert_eq!(p["r_max_sums"]["2"], "25/4");
    assert_eq!(p["delta"], "5/2");
    assert_eq!(p["axis_maxima"], json!(["5/2", "5/2"]));
}

#[test]
fn payload_is_deterministic() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing");
        v
    };
    let a = strip(json_ok(&["analyze", &path("sys_3x6_f3.txt"), "--r2"]));
    let b = strip(json_ok(&["analyze", &path("sys_3x6_f3.txt"), "--r2"]));
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert!(a["input_digest"].as_str().unwrap().starts_with("sha256:"));
}

#[test]
fn member_inside_with_certificate() {
    let r = json_ok(&["member", &path("sys_3x6_f3.txt"), "--lambda", "3/2,3/2,1/2"]);
    assert_eq!(r["result"]["inside"], true);
    assert_eq!(r["result"]["certificate"]["rates"], json!(["3/2", "3/2", "1/2"]));
    let r = json_ok(&["member", &path("sys_3x6_f3.txt"), "--lambda", "4,0,0"]);
    assert_eq!(r["result"]["inside"], false);
}

#[test]
fn member_integerizes() {
    let r = json_ok(&["member", &path("mds_2x4_f3.txt"), "--lambda", "4/3,2/3", "--integerize"]);
    let int = &r["result"]["integer"];
    assert_eq!(int["s"], "3");
    assert_eq!(int["feasible"], true);
    for d in int["allocation"]["delta"].as_array().unwrap() {
        assert!(d.as_str().unwrap().parse::<u32>().unwrap() <= 3);
    }
    assert_eq!(int["allocation"]["rate"], json!(["4", "2"]));
}

#[test]
fn member_errors() {
    let out = srr(&["member", &path("sys_3x6_f3.txt"), "--lambda", "1,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("length mismatch"));
    let out = srr(&["member", &path("sys_3x6_f3.txt"), "--lambda", "1,a,1"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn region_box_and_pentagon() {
    let r = json_ok(&["region", &path("rep_2x4_f2.txt")]);
    assert_eq!(
        strings(&r["result"]["vertices"]),
        pts(&[&["0", "0"], &["0", "1"], &["3", "0"], &["3", "1"]])
    );
    let out = srr(&["region", &path("mds_2x4_f3.txt"), "--format", "csv"]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.remove(0), "x1,x2");
    lines.sort();
    assert_eq!(lines, vec!["0,0", "0,5/2", "1,2", "2,1", "5/2,0"]);
}

#[test]
fn region_json_round_trips() {
    let r = json_ok(&["region", &path("sys_3x6_f3.txt")]);
    let h: HPolytope = serde_json::from_value(r["result"]["h"].clone()).unwrap();
    let v = enumerate_vertices(&h).unwrap();
    let listed = strings(&r["result"]["vertices"]);
    let again: Vec<Vec<String>> = v
        .vertices()
        .iter()
        .map(|p| p.iter().map(rational::fmt).collect())
        .collect();
    assert_eq!(again, listed);
}

#[test]
fn region_fm_agrees() {
    let a = json_ok(&["region", &path("mds_2x4_f3.txt")]);
    let b = json_ok(&["region", &path("mds_2x4_f3.txt"), "--method", "fm"]);
    assert_eq!(a["result"]["vertices"], b["result"]["vertices"]);
}

#[test]
fn region_svg() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g1.svg");
    let out = srr(&["region", &path("rep_2x4_f2.txt"), "--format", "svg", "-o", file.to_str().unwrap()]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&file).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("λ1") && svg.contains("λ2"));
    // Three-object regions fall back to vertex and facet lists.
    let r = json_ok(&["region", &path("sys_3x6_f3.txt"), "--format", "svg"]);
    assert!(r["result"]["facet_count"].as_u64().unwrap() > 0);
}

#[test]
fn svg_needs_at_most_three_objects() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("k4.txt");
    std::fs::write(&file, "2 4 5\n1 0 0 0 1\n0 1 0 0 1\n0 0 1 0 1\n0 0 0 1 1\n").unwrap();
    let out = srr(&["region", file.to_str().unwrap(), "--format", "svg"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unsupported dimension 4"));
}

#[test]
fn bounds_dual_and_sysnode_on_replication() {
    let r = json_ok(&["bounds", &path("rep_2x4_f2.txt"), "--set", "dual,sysnode"]);
    let bounds = r["result"]["bounds"].as_array().unwrap();
    assert_eq!(bounds.len(), 2);
    for b in bounds {
        assert_eq!(b["contains_region"], true, "{}", b["name"]);
    }
    let sysnode = strings(&bounds[1]["polygon"]);
    assert!(sysnode.contains(&vec!["3".to_string(), "1".to_string()]));
    assert!(sysnode.contains(&vec!["7/2".to_string(), "0".to_string()]));
}

#[test]
fn bounds_report_non_systematic_per_bound() {
    let r = json_ok(&["bounds", &path("mixed_3x6_f3.txt"), "--set", "dual,hybrid,uniform"]);
    let bounds = r["result"]["bounds"].as_array().unwrap();
    assert!(bounds[0]["error"].as_str().unwrap().contains("not systematic"));
    assert_eq!(bounds[1]["contains_region"], true);
    assert_eq!(bounds[2]["contains_region"], true);
}

#[test]
fn extra_clip_vectors_shrink_the_intersection() {
    let plain = json_ok(&["bounds", &path("rep_2x8_f3.txt"), "--set", "clip"]);
    let extra = json_ok(&["bounds", &path("rep_2x8_f3.txt"), "--set", "clip", "--b", "3,2", "--b", "3,5"]);
    let area = |v: &Value| rational::parse(v["result"]["intersection"]["volume"].as_str().unwrap()).unwrap();
    assert_eq!(area(&plain), rational::frac(89, 4));
    assert!(area(&extra) < area(&plain));
    let v = strings(&extra["result"]["intersection"]["vertices"]);
    assert!(v.contains(&vec!["11/2".to_string(), "3/4".to_string()]));
}

#[test]
fn bounds_svg_layers() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("b.svg");
    let out = srr(&["bounds", &path("rep_2x4_f2.txt"), "--set", "dual,sysnode", "--svg", file.to_str().unwrap()]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&file).unwrap();
    assert_eq!(svg.matches("<polygon").count(), 3);
}

#[test]
fn unknown_bound_lists_names() {
    let out = srr(&["bounds", &path("rep_2x4_f2.txt"), "--set", "dual,bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bogus") && err.contains("dual, sysnode, hybrid, uniform, hyperplane, clip"));
}

#[test]
fn volume_paths() {
    let r = json_ok(&["volume", &path("mds_2x4_f3.txt"), "--verify"]);
    assert_eq!(r["result"]["volume"], "4");
    assert_eq!(r["result"]["verified"], true);
    let r = json_ok(&["volume", &path("rep_2x4_f2.txt")]);
    assert_eq!(r["result"]["volume"], "3");
    assert_eq!(r["result"]["method"], "closed-form");
    let r = json_ok(&["volume", &path("mds_3x6_f11.txt"), "--method", "triangulate"]);
    assert_eq!(r["result"]["volume"], "65/9");
    let out = srr(&["volume", &path("parity_3x4_f2.txt"), "--method", "closed-form"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.txt");
    std::fs::write(&file, "3 2\n1 0\n").unwrap();
    let out = srr(&["analyze", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn guard_errors_name_the_module() {
    let out = Command::new(env!("CARGO_BIN_EXE_srr"))
        .args(["analyze", &path("simplex_3x7_f2.txt")])
        .env("SRR_GUARD_SCALE", "0.0000001")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("guard exceeded"), "{err}");
    assert!(err.contains("recovery") || err.contains("code_analysis"), "{err}");
}
