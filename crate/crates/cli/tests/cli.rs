//! End-to-end tests running the `superqsym` binary: golden byte output,
//! exit-code contract, format mirroring, and print/parse roundtrips.

use std::process::{Command, Output};

use superqsym::combinat::{all_dotted_compositions_up_to, all_set_supercompositions_up_to};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_superqsym"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn product_q_golden_bytes() {
    let o = run(&["product", "--basis", "Q", "{0,2}|{0,1,3}", "{0,1,2}|{0}"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "+1 * Q[{0,2}|{0,1,3}|{0,4,5}|{0}]\n\
         -1 * Q[{0,2}|{0,4,5}|{0,1,3}|{0}]\n\
         +1 * Q[{0,2}|{0,4,5}|{0}|{0,1,3}]\n\
         +1 * Q[{0,4,5}|{0,2}|{0,1,3}|{0}]\n\
         -1 * Q[{0,4,5}|{0,2}|{0}|{0,1,3}]\n\
         +1 * Q[{0,4,5}|{0}|{0,2}|{0,1,3}]\n"
    );
}

#[test]
fn product_mnc_golden_has_twelve_signed_lines() {
    let o = run(&["product", "--basis", "Mnc", "{1,2}|{0}", "{0,2}|{1,3}"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 12);
    assert!(lines
        .iter()
        .all(|l| l.starts_with("+1 * Mnc[") || l.starts_with("-1 * Mnc[")));
}

#[test]
fn coproduct_monf_golden_bytes() {
    let o = run(&["coproduct", "--basis", "MonF", "{2}|{1}"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "+1 * MonF[e] # MonF[{2}|{1}]\n\
         +1 * MonF[{1}] # MonF[{1}]\n\
         +1 * MonF[{2}|{1}] # MonF[e]\n"
    );
}

#[test]
fn expand_golden_bytes() {
    let o = run(&["expand", "--basis", "Mnc", "--vars", "3", "{1}"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "+1 * x1\n+1 * x2\n+1 * x3\n");

    let o = run(&["expand", "--basis", "Mc", "--vars", "2", "(.1)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "+1 * t1 x1\n+1 * t2 x2\n");
}

#[test]
fn empty_index_roundtrips() {
    let o = run(&["product", "--basis", "Mnc", "e", "e"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "+1 * Mnc[e]\n");
}

#[test]
fn repeated_element_is_a_position_diagnostic_with_exit_2() {
    let o = run(&["product", "--basis", "Q", "{1,2}|{2,3}", "{1}"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(
        err.contains("position 8") && err.contains("nonzero element 2 repeated"),
        "unexpected diagnostic: {err}"
    );
}

#[test]
fn malformed_index_reports_character_position() {
    let o = run(&["coproduct", "--basis", "Mnc", "{1,2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("position 5"), "got: {}", stderr(&o));
}

#[test]
fn usage_errors_exit_2() {
    // Unknown flag (handled by the argument parser).
    let o = run(&["product", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(2));
    // Unknown basis.
    let o = run(&["product", "--basis", "Z", "e", "e"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Mnc, Q, m, MonF, Mc, L"));
    // Unknown suite.
    let o = run(&["verify", "--suite", "no-such-suite"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("available suites"));
    // Unsupported operations for the basis.
    let o = run(&["coproduct", "--basis", "Mc", "(1)"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["antipode", "--basis", "m", "{0}"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["convert", "--basis", "Mc", "--to", "Q", "(1)"]);
    assert_eq!(o.status.code(), Some(2));
    // dot output outside the poset verb.
    let o = run(&["product", "--basis", "Q", "e", "e", "--format", "dot"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn basis_domain_validation_exits_2() {
    // MonF needs a superpermutation; m needs a set superpartition.
    let o = run(&["coproduct", "--basis", "MonF", "{1,2}"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["coproduct", "--basis", "m", "{2}|{1}"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_and_version_exit_0() {
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["--version"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_paper_examples_passes_byte_exactly() {
    let o = run(&["verify", "--suite", "paper-examples"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().all(|l| l.starts_with("[PASS]") || l.starts_with("suite ")));
    assert!(
        out.ends_with("suite paper-examples: 20 checks, 20 passed, 0 failed\n"),
        "got: {out}"
    );
}

#[test]
fn verify_posets_structured_mirrors_text() {
    let text = run(&["verify", "--suite", "posets"]);
    let json = run(&["verify", "--suite", "posets", "--format", "structured"]);
    assert_eq!(text.status.code(), Some(0));
    assert_eq!(json.status.code(), Some(0));

    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).expect("valid JSON");
    let checks = v["checks"].as_array().expect("checks array");
    let text_out = stdout(&text);
    let names: Vec<&str> = text_out
        .lines()
        .filter_map(|l| l.strip_prefix("[PASS] ").or_else(|| l.strip_prefix("[FAIL] ")))
        .map(|l| l.split(':').next().expect("name").trim())
        .collect();
    assert_eq!(checks.len(), names.len());
    for (check, name) in checks.iter().zip(names) {
        assert_eq!(check["name"].as_str().expect("name"), name);
        assert!(check["passed"].as_bool().expect("passed"));
    }
    assert_eq!(v["failed"].as_u64(), Some(0));
}

#[test]
fn product_structured_mirrors_text_one_to_one() {
    let args = ["product", "--basis", "Q", "{0,2}|{0,1,3}", "{0,1,2}|{0}"];
    let text = run(&args);
    let json = run(&args
        .iter()
        .chain(["--format", "structured"].iter())
        .copied()
        .collect::<Vec<_>>());
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).expect("valid JSON");
    assert_eq!(v["basis"].as_str(), Some("Q"));
    let rebuilt: String = v["terms"]
        .as_array()
        .expect("terms")
        .iter()
        .map(|t| {
            format!(
                "{} * Q[{}]\n",
                t["coefficient"].as_str().expect("coefficient"),
                t["index"].as_str().expect("index")
            )
        })
        .collect();
    assert_eq!(rebuilt, stdout(&text));
}

#[test]
fn coproduct_structured_mirrors_text_one_to_one() {
    let args = ["coproduct", "--basis", "m", "{0,2,4}|{0,3}|{1}"];
    let text = run(&args);
    let json = run(&args
        .iter()
        .chain(["--format", "structured"].iter())
        .copied()
        .collect::<Vec<_>>());
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).expect("valid JSON");
    let rebuilt: String = v["terms"]
        .as_array()
        .expect("terms")
        .iter()
        .map(|t| {
            format!(
                "{} * m[{}] # m[{}]\n",
                t["coefficient"].as_str().expect("coefficient"),
                t["left"].as_str().expect("left"),
                t["right"].as_str().expect("right")
            )
        })
        .collect();
    assert_eq!(rebuilt, stdout(&text));
    assert_eq!(v["terms"].as_array().expect("terms").len(), 8);
}

#[test]
fn expand_structured_mirrors_text_one_to_one() {
    let args = ["expand", "--basis", "L", "--vars", "3", "(1,.1)"];
    let text = run(&args);
    let json = run(&args
        .iter()
        .chain(["--format", "structured"].iter())
        .copied()
        .collect::<Vec<_>>());
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).expect("valid JSON");
    let rebuilt: String = v["terms"]
        .as_array()
        .expect("terms")
        .iter()
        .map(|t| {
            format!(
                "{} * {}\n",
                t["coefficient"].as_str().expect("coefficient"),
                t["monomial"].as_str().expect("monomial")
            )
        })
        .collect();
    assert_eq!(rebuilt, stdout(&text));
}

#[test]
fn poset_dot_is_deterministic_and_golden() {
    let a = run(&["poset", "(2)", "--dot"]);
    let b = run(&["poset", "(2)", "--format", "dot"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(
        stdout(&a),
        "digraph poset {\n  rankdir=BT;\n  \"(1,1)\";\n  \"(2)\";\n  \"(1,1)\" -> \"(2)\";\n}\n"
    );
    // Identical invocations are byte-identical.
    let c = run(&["poset", "(2)", "--dot"]);
    assert_eq!(stdout(&a), stdout(&c));
}

#[test]
fn poset_downset_diamond_has_four_nodes_and_four_edges() {
    let o = run(&["poset", "--downset", "(3)", "--format", "dot"]);
    let out = stdout(&o);
    let nodes = out.lines().filter(|l| l.contains('"') && !l.contains("->")).count();
    let edges = out.lines().filter(|l| l.contains("->")).count();
    assert_eq!((nodes, edges), (4, 4));
}

#[test]
fn poset_upset_matches_the_four_node_figure() {
    let o = run(&["poset", "--upset", "{0}|{1}|{2}|{4}|{0,3}", "--dot"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let nodes = out.lines().filter(|l| l.contains('"') && !l.contains("->")).count();
    assert_eq!(nodes, 4);
}

#[test]
fn poset_fiber_hexagon() {
    let o = run(&["poset", "--fiber", "(1,.1,1)", "--format", "dot"]);
    let out = stdout(&o);
    let nodes = out.lines().filter(|l| l.contains('"') && !l.contains("->")).count();
    let edges = out.lines().filter(|l| l.contains("->")).count();
    assert_eq!((nodes, edges), (6, 6));
    // Fiber bounds demand unit plain parts.
    let o = run(&["poset", "--fiber", "(2,.1)"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn poset_singleton_interval() {
    let o = run(&["poset", "e", "--format", "dot"]);
    let out = stdout(&o);
    let nodes = out.lines().filter(|l| l.contains('"') && !l.contains("->")).count();
    let edges = out.lines().filter(|l| l.contains("->")).count();
    assert_eq!((nodes, edges), (1, 0));
}

/// Identity conversion echoes the canonical serialization, so driving it with
/// every small index exercises the print/parse roundtrip through the binary.
#[test]
fn print_parse_roundtrip_through_binary() {
    for i in all_set_supercompositions_up_to(3) {
        let s = i.to_string();
        let o = run(&["convert", "--basis", "Mnc", "--to", "Mnc", &s]);
        assert_eq!(o.status.code(), Some(0), "index {s}");
        assert_eq!(stdout(&o), format!("+1 * Mnc[{s}]\n"));
    }
    for a in all_dotted_compositions_up_to(4) {
        let s = a.to_string();
        let o = run(&["convert", "--basis", "Mc", "--to", "Mc", &s]);
        assert_eq!(o.status.code(), Some(0), "index {s}");
        assert_eq!(stdout(&o), format!("+1 * Mc[{s}]\n"));
    }
}

#[test]
fn convert_golden_monf_to_q() {
    let o = run(&["convert", "--basis", "MonF", "--to", "Q", "{1}|{0,2}|{3}"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "+1 * Q[{1}|{0,2}|{3}]\n\
         -1 * Q[{1}|{0,3}|{2}]\n\
         -1 * Q[{2}|{0,1}|{3}]\n\
         +1 * Q[{3}|{0,2}|{1}]\n"
    );
}

#[test]
fn antipode_involutive_on_a_fermionic_generator() {
    let o = run(&["antipode", "--basis", "Mnc", "{0}"]);
    assert_eq!(stdout(&o), "-1 * Mnc[{0}]\n");
}
