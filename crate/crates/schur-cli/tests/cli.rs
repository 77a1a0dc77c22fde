use std::path::{Path, PathBuf};
use std::process::Command;

use schur_cli::db::{load_db, RecordStatus};
use schur_cli::files::{BlockFamilyFile, ColoringFile, EnumerationField};
use schur_cli::run;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn schur_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_schur"))
}

#[test]
fn compute_small_values() {
    assert_eq!(run(["schur", "compute", "--r", "1", "--k", "1"]), 0);
    assert_eq!(run(["schur", "compute", "--r", "2", "--k", "1"]), 0);
}

#[test]
fn compute_prints_exact_line() {
    let out = schur_bin()
        .args(["compute", "--r", "1", "--k", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().next().unwrap(), "S(1,1) = 2 (exact)");

    let out = schur_bin()
        .args(["compute", "--r", "2", "--k", "1"])
        .output()
        .unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().next().unwrap(), "S(2,1) = 5 (exact)");
}

#[test]
fn compute_lower_bound_line() {
    let out = schur_bin()
        .args(["compute", "--r", "2", "--k", "1", "--max-n", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().next().unwrap(), "S(2,1) >= 4 (lower bound)");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(["schur", "compute", "--r", "0x"]), 2);
    assert_eq!(run(["schur", "no-such-command"]), 2);
    assert_eq!(run(["schur"]), 2);
    assert_eq!(run(["schur", "--help"]), 0);
}

#[test]
fn compute_appends_verifiable_db_record() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("results.jsonl");
    assert_eq!(
        run([
            "schur",
            "compute",
            "--r",
            "2",
            "--k",
            "1",
            "--db",
            db.to_str().unwrap()
        ]),
        0
    );
    let records = load_db(&db).unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].status, RecordStatus::Exact);
    assert_eq!(records[0].value, 5);
    records[0].verify_certificate().unwrap();
}

#[test]
fn compute_writes_certificate_document() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    assert_eq!(
        run([
            "schur",
            "compute",
            "--r",
            "2",
            "--k",
            "1",
            "--certificate-out",
            cert.to_str().unwrap()
        ]),
        0
    );
    // exact result: the certificate colors the length-4 prefix
    let file = ColoringFile::load(&cert).unwrap();
    assert_eq!(file.n, 4);
    assert_eq!(
        run(["schur", "verify", "--coloring", cert.to_str().unwrap()]),
        0
    );
}

#[test]
fn verify_accepts_split_coloring() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("split.json");
    std::fs::write(
        &path,
        r#"{"n":4,"r":2,"k":1,"enumeration":"natural","colors":[1,2,2,1]}"#,
    )
    .unwrap();
    assert_eq!(
        run(["schur", "verify", "--coloring", path.to_str().unwrap(), "--k", "1"]),
        0
    );
}

#[test]
fn verify_rejects_and_prints_first_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mono.json");
    std::fs::write(
        &path,
        r#"{"n":3,"r":1,"k":1,"enumeration":"natural","colors":[1,1,1]}"#,
    )
    .unwrap();
    let out = schur_bin()
        .args(["verify", "--coloring", path.to_str().unwrap(), "--k", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    // first witness in configuration order: a=1, B={1}, sum 2
    assert!(stdout.contains("a=1 B={1} sums={2}"), "got: {stdout}");
}

#[test]
fn verify_uses_file_k_by_default() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k2.json");
    // {1,2} all one color: has a 1-witness (1,{1}) but no 2-witness
    std::fs::write(
        &path,
        r#"{"n":2,"r":1,"k":2,"enumeration":"natural","colors":[1,1]}"#,
    )
    .unwrap();
    assert_eq!(run(["schur", "verify", "--coloring", path.to_str().unwrap()]), 0);
    assert_eq!(
        run(["schur", "verify", "--coloring", path.to_str().unwrap(), "--k", "1"]),
        1
    );
}

#[test]
fn stored_five_coloring_verifies() {
    let path = data("five_coloring_n60.json");
    assert_eq!(
        run(["schur", "verify", "--coloring", path.to_str().unwrap(), "--k", "1"]),
        0
    );
    let file = ColoringFile::load(&path).unwrap();
    assert_eq!(file.n, 60);
    assert_eq!(file.r, 5);
}

#[test]
fn encode_and_check_model_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("n4.cnf");
    assert_eq!(
        run([
            "schur", "encode", "--r", "2", "--k", "1", "--n", "4", "--out",
            cnf.to_str().unwrap()
        ]),
        0
    );
    let text = std::fs::read_to_string(&cnf).unwrap();
    assert!(text.contains("p cnf 8 12"), "header missing: {text}");

    // decode a model produced by the internal decision procedure
    let instance = schur_core::cnf::encode(2, 1, 4, &schur_core::Enumeration::natural()).unwrap();
    let model = schur_core::cnf::solve_instance(&instance, 1_000_000)
        .unwrap()
        .unwrap();
    let lits: Vec<String> = (1..=instance.num_vars())
        .map(|v| {
            if model.value(v) {
                v.to_string()
            } else {
                format!("-{v}")
            }
        })
        .collect();
    let model_path = dir.path().join("model.txt");
    std::fs::write(&model_path, format!("v {} 0\n", lits.join(" "))).unwrap();
    assert_eq!(
        run([
            "schur",
            "check-model",
            "--r",
            "2",
            "--k",
            "1",
            "--n",
            "4",
            "--model",
            model_path.to_str().unwrap()
        ]),
        0
    );
}

#[test]
fn check_model_rejects_bad_model() {
    let dir = tempfile::tempdir().unwrap();
    let model_path = dir.path().join("bad.txt");
    // all-false: violates the at-least-one-color clauses
    let lits: Vec<String> = (1..=8).map(|v| format!("-{v}")).collect();
    std::fs::write(&model_path, lits.join(" ")).unwrap();
    assert_eq!(
        run([
            "schur",
            "check-model",
            "--r",
            "2",
            "--k",
            "1",
            "--n",
            "4",
            "--model",
            model_path.to_str().unwrap()
        ]),
        1
    );
}

#[test]
fn blocks_depth_two_constructs_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("family.json");
    assert_eq!(
        run([
            "schur",
            "blocks",
            "--depth",
            "2",
            "--verify",
            "--out",
            out.to_str().unwrap()
        ]),
        0
    );
    let family = BlockFamilyFile::load(&out).unwrap();
    assert_eq!(family.blocks.len(), 2);
    assert_eq!(family.blocks[0].elements, vec![1, 2]);
    assert_eq!(family.blocks[1].modulus, 3);
    assert_eq!(family.blocks[1].residue, 0);
    assert!(!family.blocks[1].surrogate);
    assert_eq!(family.blocks[1].elements[0], 6);
}

#[test]
fn blocks_without_a_provider_value_exits_3() {
    // level 5 needs S(5,5) for its class; no surrogate is tabled and the
    // solver's scan limit cannot certify an exact value
    let out = schur_bin().args(["blocks", "--depth", "5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn table_is_monotone_and_populates_db() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("table.jsonl");
    let out = schur_bin()
        .args([
            "table", "--r-max", "2", "--k-max", "2", "--db",
            db.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let records = load_db(&db).unwrap();
    assert_eq!(records.len(), 4);
    let value = |r: u32, k: usize| {
        records
            .iter()
            .find(|rec| rec.r == r && rec.k == k && rec.status == RecordStatus::Exact)
            .map(|rec| rec.value)
            .unwrap()
    };
    assert_eq!(value(1, 1), 2);
    assert_eq!(value(1, 2), 3);
    assert_eq!(value(2, 1), 5);
    assert_eq!(value(2, 2), 9);
}

#[test]
fn enumeration_field_json_shapes() {
    let named: EnumerationField = serde_json::from_str("\"natural\"").unwrap();
    assert_eq!(named, EnumerationField::natural());
    let explicit: EnumerationField = serde_json::from_str("[6,9,12]").unwrap();
    assert!(matches!(explicit, EnumerationField::Explicit(_)));
}
