use std::process::{Command, Output};

fn coprod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coprod"))
        .args(args)
        .env_remove("COPROD_CAP")
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = args.to_vec();
    all.push("--json");
    let o = coprod(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn classify_kleene_ends_with_verdict() {
    let o = coprod(&["classify", "kleene3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("E: no, S: yes"), "{}", stdout(&o));
}

#[test]
fn classify_accepts_files_and_term_defined_reducts() {
    let o = coprod(&["classify", "algebras/demorgan4.alg"]);
    assert!(stdout(&o).trim_end().ends_with("E: yes, S: yes"));
    let o = coprod(&["classify", "algebras/mv3.alg"]);
    assert!(stdout(&o).trim_end().ends_with("E: no, S: yes"));
}

#[test]
fn table1_json_rows_all_match() {
    let v = json(&["table1"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "table1");
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 18);
    assert!(rows.iter().all(|r| r["match"] == true));
}

#[test]
fn coproduct_of_two_de_morgan_squares() {
    let o = coprod(&["coproduct", "demorgan4", "demorgan4"]);
    let text = stdout(&o);
    assert!(text.contains("size 16"), "{text}");
    assert!(text.contains("ε0 (demorgan4): ") && text.contains("ε1 (demorgan4): "));
    let v = json(&["coproduct", "demorgan4", "demorgan4"]);
    assert_eq!(v["result"]["injections"].as_array().unwrap().len(), 2);
}

#[test]
fn coproduct_in_a_named_quasivariety() {
    let v = json(&["coproduct", "kleene3", "kleene3", "--in", "kleene3"]);
    let dm = json(&["coproduct", "kleene3", "kleene3", "--in", "demorgan4"]);
    assert!(v["result"]["size"].as_u64().unwrap() < dm["result"]["size"].as_u64().unwrap());
}

#[test]
fn json_is_byte_deterministic() {
    for args in [
        &["classify", "heyting_chain:3", "--json"][..],
        &["duality", "kleene3", "--json"][..],
        &["reveng-check", "demorgan4", "--json"][..],
    ] {
        let a = coprod(args);
        let b = coprod(args);
        assert_eq!(a.stdout, b.stdout);
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn exit_codes_distinguish_unknown_from_bad_input() {
    assert_eq!(coprod(&["classify", "no_such_thing"]).status.code(), Some(2));
    assert_eq!(coprod(&["classify", "heyting_chain:1"]).status.code(), Some(2));
    assert_eq!(coprod(&["frobnicate"]).status.code(), Some(2));
    let o = coprod(&["free", "2", "demorgan4", "--cap", "1000"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("unknown:"));
}

#[test]
fn cap_can_come_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_coprod"))
        .args(["free", "2", "demorgan4"])
        .env("COPROD_CAP", "1000")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn free_algebra_sizes() {
    let v = json(&["free", "1", "kleene3"]);
    assert_eq!(v["result"]["size"], 6);
    let v = json(&["free", "0", "demorgan4"]);
    assert_eq!(v["result"]["size"], 2);
}

#[test]
fn explicit_omega() {
    let o = coprod(&["classify", "kleene3", "--omega", "a,1;1"]);
    assert!(stdout(&o).trim_end().ends_with("E: no, S: yes"));
    let o = coprod(&["classify", "kleene3", "--omega", "a,1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = coprod(&["classify", "kleene3", "--omega", "0,a"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a prime filter"));
    let o = coprod(&["classify", "pre_moisil_L0:2", "--omega", "{(1,0), (1,1)}"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn catalog_ids_work_across_commands() {
    for id in ["demorgan4", "kleene3", "heyting_chain(4)", "pseudo_b:2", "mv_chain:3", "moisil_M:3"] {
        for cmd in ["classify", "duality", "reveng-check", "export-dot"] {
            let o = coprod(&[cmd, id]);
            assert_eq!(o.status.code(), Some(0), "{cmd} {id}: {}", String::from_utf8_lossy(&o.stderr));
        }
    }
}

#[test]
fn duality_lists_the_goedel_relations() {
    let text = stdout(&coprod(&["duality", "heyting_chain:3"]));
    assert!(text.contains("R(ω0,ω0): {(0,0),(d,d),(1,1)}"), "{text}");
    assert!(text.contains("R(ω0,ω0): {(0,0),(d,1),(1,1)}"), "{text}");
}

#[test]
fn export_dot_variants() {
    let text = stdout(&coprod(&["export-dot", "kleene3"]));
    assert!(text.starts_with("digraph") && text.contains("n0 -> n1;") || text.contains("n1 -> n0;"));
    let text = stdout(&coprod(&["export-dot", "demorgan4", "--what", "lattice"]));
    assert_eq!(text.matches("->").count(), 4);
    let text = stdout(&coprod(&["export-dot", "kleene3", "--what", "reconstructed"]));
    assert_eq!(text.matches("->").count(), 1);
}

#[test]
fn out_flag_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("coprod-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let o = coprod(&["classify", "demorgan4", "--json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["verdict_e"], true);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn parse_errors_name_the_location() {
    let dir = std::env::temp_dir().join(format!("coprod-cli-parse-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.alg");
    std::fs::write(&path, "algebra two size 2\nop meet 2\ntable meet = 0 0 0\n").unwrap();
    let o = coprod(&["classify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3, column 7: table length 3, expected 4"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}
