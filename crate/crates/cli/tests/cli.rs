use std::io::Write;
use std::process::{Command, Output, Stdio};

use adams_core::dsl::parse_input;
use adams_core::recipe::{DescentReport, LiftStatus};
use adams_core::PacketMember;
use serde_json::Value;

const TRIVIAL_SP6: &str = "Sp(6); (a=1,b=7,eta=+,t=0)";
const SP10: &str = "Sp(10); (a=1,b=1,eta=-,t=0) + (a=3,b=1,eta=+,t=0) + (a=1,b=7,eta=-,t=0)";
const LEVEL5: &str = "std@5: [3,3]+[2,2]+[1,1] | l_tau=?,mS1=?";

fn adams(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_adams"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(args: &[&str], stdin: &str) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = adams(&all, stdin);
    let value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (out.status.code().unwrap(), value)
}

fn tower<'a>(v: &'a Value, name: &str) -> &'a Value {
    v["towers"].as_array().unwrap().iter().find(|t| t["tower"] == name).unwrap()
}

#[test]
fn analyze_reports_both_towers() {
    let (code, v) = json(&["analyze"], TRIVIAL_SP6);
    assert_eq!(code, 0);
    assert_eq!(tower(&v, "plus")["d"], 9);
    assert_eq!(tower(&v, "minus")["d"], 1);
    assert_eq!(v["roles"]["up"], "plus");
    let report: DescentReport = serde_json::from_value(tower(&v, "plus")["report"].clone()).unwrap();
    assert_eq!(report.d, Some(9));
}

#[test]
fn analyze_text_agrees_with_json() {
    let text = String::from_utf8(adams(&["analyze"], TRIVIAL_SP6).stdout).unwrap();
    let (_, v) = json(&["analyze"], TRIVIAL_SP6);
    for name in ["plus", "minus"] {
        let d = tower(&v, name)["d"].as_i64().unwrap();
        let set = tower(&v, name)["adams_set"].as_str().unwrap();
        assert!(text.contains(&format!("d = {d}, lifts in the packet for α in {set}")));
    }
}

#[test]
fn unresolved_descent_exits_four_with_a_partial_report() {
    let out = adams(&["analyze", "--tower", "plus"], SP10);
    assert_eq!(out.status.code(), Some(4));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("unresolved"));
    assert!(text.contains("(1,5,+,chi_W)"));
}

#[test]
fn fallback_module_resolves_the_descent() {
    let input = format!("{SP10};\n{LEVEL5}\n");
    let (code, v) = json(&["analyze"], &input);
    assert_eq!(code, 0);
    assert_eq!(tower(&v, "plus")["d"], 5);
    assert_eq!(tower(&v, "minus")["d"], 9);
    assert_eq!(v["roles"]["up"], "minus");
}

#[test]
fn lift_below_d_on_the_down_tower() {
    let (code, v) = json(&["lift", "--alpha", "5", "--tower", "minus"], TRIVIAL_SP6);
    assert_eq!(code, 0);
    let LiftStatus::InPacket(member) = serde_json::from_value(v["lift"].clone()).unwrap() else {
        panic!("level 5 is in the packet");
    };
    let etas: Vec<char> = member.blocks.iter().map(|bd| bd.eta.symbol()).collect();
    assert_eq!(etas, vec!['-', '-']);
}

#[test]
fn mstar_lists_six_terms() {
    let (code, v) = json(&["mstar", "2", "3"], "");
    assert_eq!(code, 0);
    assert_eq!(v["total"], 6);
    let terms: Vec<String> = v["terms"].as_array().unwrap().iter().map(|t| t["tensor"].to_string()).collect();
    assert!(terms.contains(&r#"["ν^2","ν^3"]"#.to_string()));
    assert!(terms.contains(&r#"["ν^-3×ν^2","1"]"#.to_string()));
}

#[test]
fn jac_verdicts_and_unsupported_shapes() {
    let (code, v) = json(&["jac", "2"], &format!("{SP10};\n{LEVEL5}"));
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "Zero");
    let out = adams(&["jac", "1"], "std: [1,1]+[2,3] | l_tau=1, mS1=odd");
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn chains_and_l() {
    let input = "std: [3,3] | l_tau=5, mS1=odd, mSl=odd";
    let (code, v) = json(&["chains", "--alpha", "9"], input);
    assert_eq!(code, 0);
    assert_eq!(v["l"], 7);
    assert_eq!(v["first_up"], 9);
    let up = &v["up"][0]["lift"];
    assert_eq!(up["unknowns"], serde_json::json!(["l_tau", "mSl"]));
    let out = adams(&["l"], input);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "7");
}

#[test]
fn exit_codes_for_bad_input() {
    assert_eq!(adams(&["validate"], "Sp(6); (a=7,b=1,eta=x,t=0)").status.code(), Some(2));
    assert_eq!(adams(&["validate"], "Sp(6); (a=7,b=1,eta=-,t=0)").status.code(), Some(3));
    assert_eq!(adams(&["analyze"], "std: [1,1] | l_tau=1, mS1=odd").status.code(), Some(3));
    assert_eq!(adams(&["lift", "--alpha", "4", "--tower", "plus"], TRIVIAL_SP6).status.code(), Some(3));
}

#[test]
fn validated_json_parses_back() {
    let input = "O(10; disc=+, hasse=-); (a=1,b=3,eta=-,t=0) + (a=1,b=7,eta=+,t=0)";
    let (code, v) = json(&["validate"], input);
    assert_eq!(code, 0);
    let member: PacketMember = serde_json::from_value(v["member"].clone()).unwrap();
    assert_eq!(Some(member), parse_input(input).unwrap().member);
}

#[test]
fn enumerate_runs_selected_checks() {
    let (code, v) = json(&["enumerate", "--family", "sp", "--max-dim", "7", "--checks", "tower-order,sign-product"], "");
    assert_eq!(code, 0);
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
    assert!(v["members"].as_u64().unwrap() > 0);
    assert_eq!(adams(&["enumerate", "--checks", "nope"], "").status.code(), Some(2));
}
