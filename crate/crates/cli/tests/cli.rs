use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn schemoid(args: &[&str], stdin: Option<&str>) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_schemoid"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).unwrap();
        }
    }
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn ok(args: &[&str], stdin: Option<&str>) -> String {
    let r = schemoid(args, stdin);
    assert_eq!(r.code, 0, "{args:?}: {}", r.stderr);
    r.stdout
}

/// Writes `text` to a fresh file under the test scratch directory.
fn file(name: &str, text: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn hamming_j() -> String {
    let h = ok(&["gen", "hamming", "2", "2"], None);
    ok(&["embed-scheme", "-"], Some(&h))
}

#[test]
fn hamming_pipeline_gives_intersection_numbers() {
    let j = hamming_j();
    let text = ok(&["constants", "-"], Some(&j));
    assert!(text.contains("p^{R2}_{R1,R1} = 2"), "{text}");
    assert!(text.contains("p^{R0}_{R1,R1} = 2"));
    let report = schemoid(&["constants", "-", "--json"], Some(&j)).json();
    assert_eq!(report["schema_version"], 1);
    let rows = report["constants"].as_array().unwrap();
    let p = rows
        .iter()
        .find(|r| r["sigma"] == "R1" && r["tau"] == "R1" && r["mu"] == "R2")
        .unwrap();
    assert_eq!(p["p"], 2);
}

#[test]
fn analyze_reports_unitality_of_the_arrow() {
    let arrow = ok(&["examples", "arrow"], None);
    let r = schemoid(&["analyze", "-", "--json"], Some(&arrow)).json();
    assert_eq!(r["command"], "analyze");
    assert_eq!(r["unital"], true);
    assert_eq!(r["basic"], false);
    assert_eq!(r["algebra"]["unitality"]["unit_is_identity_sum"], true);
    assert_eq!(r["thinness"]["semi_thin"], false);

    let bullet = ok(&["examples", "group_bullet_z2"], None);
    let r = schemoid(&["analyze", "-", "--json"], Some(&bullet)).json();
    assert_eq!(r["unital"], false);
    assert_eq!(r["algebra"]["unitality"]["unit_is_identity_sum"], false);
}

#[test]
fn selftest_verifies_the_whole_corpus() {
    let r = schemoid(&["selftest", "--json"], None);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let entries = r.json()["entries"].as_array().unwrap().clone();
    assert!(entries.len() >= 10);
    assert!(entries.iter().all(|e| e["ok"] == true));
}

#[test]
fn examples_list_and_zigzag_window() {
    let list = schemoid(&["examples", "--json"], None).json();
    assert_eq!(list["entries"].as_array().unwrap().len(), 19);
    let z = ok(&["examples", "zigzag_window", "--window", "2"], None);
    let v = schemoid(&["validate", "-", "--json"], Some(&z)).json();
    assert_eq!(v["kind"], "association_schemoid");
    assert_eq!(v["objects"], 10);
    assert_eq!(
        schemoid(&["examples", "arrow", "--window", "2"], None).code,
        2
    );
}

#[test]
fn groupoid_round_trips() {
    let z3 = ok(&["examples", "group_ring_z3"], None);
    let g = ok(&["to-groupoid", "-"], Some(&z3));
    let r = schemoid(&["roundtrip-check", "-", "--json", "--seed", "5"], Some(&g)).json();
    assert_eq!(r["ok"], true);
    assert_eq!(r["unit_is_isomorphism"], true);
    assert!(r["search_witness"].is_object());

    let st = ok(&["from-groupoid", "-"], Some(&g));
    let back = schemoid(&["roundtrip-check", "-", "--json"], Some(&st)).json();
    assert_eq!(back["direction"], "schemoid");
    assert_eq!(back["psi_after_phi_is_identity"], true);
    assert_eq!(back["phi_after_psi_is_identity"], true);
}

#[test]
fn thinness_boundary_in_the_double_arrows() {
    let two = ok(&["examples", "double_arrow_2"], None);
    assert_eq!(schemoid(&["roundtrip-check", "-"], Some(&two)).code, 0);
    let three = ok(&["examples", "double_arrow_3"], None);
    let r = schemoid(&["roundtrip-check", "-", "--json"], Some(&three));
    assert_eq!(r.code, 1);
    assert_eq!(r.json()["error"]["kind"], "bridge");
}

#[test]
fn cohomology_of_one_object_groups() {
    let system = file("trivial_z2.json", r#"{"modulus": 2, "trivial": 1}"#);
    let bullet = file(
        "bullet_z2.json",
        &ok(&["examples", "group_bullet_z2"], None),
    );
    let z3 = file("ring_z3.json", &ok(&["examples", "group_ring_z3"], None));
    let h = schemoid(&["cohomology", &bullet, &system, "--json"], None).json();
    assert_eq!(h["group"], "Z/2");
    assert_eq!(h["order"], 2);
    let h = schemoid(&["cohomology", &z3, &system, "--json"], None).json();
    assert_eq!(h["group"], "0");
    let h1 = ok(&["cohomology", &bullet, &system, "--degree", "1"], None);
    assert_eq!(h1.trim(), "H^1 = Z/2");
    assert_eq!(
        schemoid(&["cohomology", &bullet, &system, "--degree", "3"], None).code,
        2
    );
}

#[test]
fn extensions_split_and_compare() {
    let system = file("ext_system.json", r#"{"modulus": 2, "trivial": 1}"#);
    let bullet = file(
        "ext_bullet.json",
        &ok(&["examples", "group_bullet_z2"], None),
    );
    let carry = file("carry.json", r#"{"1,1": [1]}"#);
    let zero = file("zero.json", "{}");
    let e1 = file("e1.json", &ok(&["extend", &bullet, &system, &carry], None));
    let e0 = file("e0.json", &ok(&["extend", &bullet, &system, &zero], None));

    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&e1).unwrap()).unwrap();
    assert_eq!(doc["total"]["morphisms"].as_array().unwrap().len(), 4);
    assert!(doc["lifted"]["involution"].is_object());

    assert_eq!(
        schemoid(&["split", &e1, "--json"], None).json()["split"],
        false
    );
    let s = schemoid(&["split", &e0, "--json"], None).json();
    assert_eq!(s["split"], true);
    assert!(s["section"]["morphisms"].is_object());
    assert_eq!(
        schemoid(&["equivalent", &e0, &e1, "--json"], None).json()["equivalent"],
        false
    );
    assert_eq!(
        schemoid(&["equivalent", &e1, &e1, "--json"], None).json()["equivalent"],
        true
    );
    assert_eq!(
        schemoid(&["validate", &e1, "--json"], None).json()["kind"],
        "linear_extension"
    );
}

#[test]
fn thickening_from_schemes_and_matrices() {
    let h = ok(&["gen", "hamming", "2", "2"], None);
    let t2 = ok(&["thicken", "-", "--z", "2"], Some(&h));
    let a = schemoid(&["analyze", "-", "--json"], Some(&t2)).json();
    assert_eq!(
        (a["morphisms"].as_u64(), a["blocks"].as_u64()),
        (Some(36), Some(7))
    );
    assert_eq!(a["association"], true);
    assert_eq!(a["unique_solutions"], true);

    let uneven = ok(&["thicken", "-", "--z", "1,2,1"], Some(&h));
    let v = schemoid(&["validate", "-", "--json"], Some(&uneven)).json();
    assert_eq!(v["kind"], "quasi_schemoid");

    let m = file("z4.json", "[[4]]");
    let q = ok(&["thicken", "--matrix", &m], None);
    let a = schemoid(&["analyze", "-", "--json"], Some(&q)).json();
    assert_eq!(a["unique_solutions"], false);
    assert!(a["unique_solutions_witness"].is_object());

    let bad = file("not_transitive.json", "[[1, 1], [1, 1]]");
    let r = schemoid(&["thicken", "--matrix", &bad], None);
    assert_eq!(r.code, 1, "{}", r.stderr);
}

#[test]
fn collapsing_to_a_point_is_admissible_with_valency_multiplicities() {
    let j = hamming_j();
    let doc: Value = serde_json::from_str(&j).unwrap();
    let one = ok(
        &["embed-scheme", "-"],
        Some(r#"{"size": 1, "relations": [[0]]}"#),
    );
    let objects: serde_json::Map<String, Value> = doc["category"]["objects"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| (o.as_str().unwrap().to_string(), Value::from("0")))
        .collect();
    let morphisms: serde_json::Map<String, Value> = doc["category"]["morphisms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| (m["id"].as_str().unwrap().to_string(), Value::from("(0,0)")))
        .collect();
    let functor = serde_json::json!({"objects": objects, "morphisms": morphisms}).to_string();
    let (src, tgt, fun) = (
        file("jh.json", &j),
        file("jone.json", &one),
        file("collapse.json", &functor),
    );
    let r = schemoid(&["admissible", &src, &tgt, &fun, "--json"], None).json();
    assert_eq!(r["admissible"], true);
    assert_eq!(
        r["multiplicities"],
        serde_json::json!({"R0": 1, "R1": 2, "R2": 1})
    );
    assert_eq!(r["identity_holds"], true);
    assert_eq!(r["induced_map"]["matrix"], serde_json::json!([[1, 2, 1]]));
    let f2 = schemoid(
        &["admissible", &src, &tgt, &fun, "--json", "--ring", "F2"],
        None,
    )
    .json();
    assert_eq!(f2["induced_map"]["matrix"], serde_json::json!([[1, 0, 1]]));
}

#[test]
fn algebras_and_terwilliger() {
    let g2 = ok(&["gen", "group-scheme", "[[0,1],[1,0]]"], None);
    let j = ok(&["embed-scheme", "-"], Some(&g2));
    let a = schemoid(&["algebra", "-", "--json", "--ring", "F2"], Some(&j)).json();
    assert_eq!(a["ring"], "F2");
    assert_eq!(a["basis"].as_array().unwrap().len(), 2);
    assert!(a["unit"].is_array());
    assert!(a["product"].is_object());

    let t = schemoid(
        &["terwilliger", "-", "--object", "00", "--json"],
        Some(&hamming_j()),
    )
    .json();
    assert_eq!(t["dimension"], 10);
    assert_eq!(t["ambient_dimension"], 16);
    assert_eq!(
        schemoid(&["terwilliger", "-", "--object", "zz"], Some(&hamming_j())).code,
        2
    );
}

#[test]
fn scheme_generators_validate() {
    let cyc = ok(&["gen", "orbits", "4", "[[1,2,3,0]]"], None);
    let v = schemoid(&["validate", "-", "--json"], Some(&cyc)).json();
    assert_eq!(
        (v["kind"].as_str(), v["rank"].as_u64()),
        (Some("association_scheme"), Some(4))
    );
    let fixed_point = ok(&["gen", "orbits", "3", "[[1,0,2]]"], None);
    let v = schemoid(&["validate", "-", "--json"], Some(&fixed_point)).json();
    assert_eq!(v["kind"], "coherent_configuration");
    let z5 = ok(&["gen", "group-scheme", "--cyclic", "5"], None);
    assert_eq!(
        schemoid(&["validate", "-", "--json"], Some(&z5)).json()["rank"],
        5
    );
}

#[test]
fn exit_codes_and_diagnostics() {
    assert_eq!(schemoid(&["frobnicate"], None).code, 2);
    assert_eq!(
        schemoid(&["algebra", "-", "--ring", "F4"], Some("{}")).code,
        2
    );

    let broken = file("broken.json", "{\n  \"objects\": [\n");
    let r = schemoid(&["validate", &broken, "--json"], None);
    assert_eq!(r.code, 1);
    let e = &r.json()["error"];
    assert_eq!(e["kind"], "parse");
    assert_eq!(e["line"], 3);

    let cc = r#"{"size": 3, "relations": [[0,1,1],[1,0,1],[1,1,2]]}"#;
    let r = schemoid(&["validate", "-"], Some(cc));
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("error[scheme]"), "{}", r.stderr);

    let r = schemoid(&["admissible", "-", "-", "-"], Some("{}"));
    assert_eq!(r.code, 2);
    assert_eq!(schemoid(&["validate", "/nonexistent/x.json"], None).code, 1);
}
