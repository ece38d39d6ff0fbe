use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;

use equivariantize::scenario::{Analysis, Backend, GroupDecl, GroupKind, Op, CATALOG, FIXTURES};
use equivariantize::{
    emit_report, parse_report, parse_scenario, run_parsed, run_scenario, without_timing, AnalysisResult, Format,
    Overrides, Report, RunError, Scenario, Timing, Verdict,
};
use proptest::prelude::*;
use serde_json::{json, Value};

fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(scenario_path(name)).unwrap()
}

fn run(name: &str) -> Report {
    run_scenario(&read(name), &Overrides::default()).unwrap()
}

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_equivariantize"));
    for k in ["SEED", "TOLERANCE", "BUDGET", "FORMAT"] {
        c.env_remove(format!("EQUIVARIANTIZE_{k}"));
    }
    c
}

#[test]
fn components_example() {
    let r = run("components_trivial.json");
    assert_eq!(r.verdict, Verdict::Pass);
    assert_eq!(r.exit_code(), 0);
    let json = emit_report(&r, Format::Json);
    let v: Value = serde_json::from_str(&json).unwrap();
    let res = &v["results"][0]["result"];
    assert_eq!(res["count_direct"], json!(2));
    assert_eq!(res["count_formula"], json!(2));
    let compact = serde_json::to_string(&v).unwrap();
    assert!(compact.contains(r#""count_direct":2,"count_formula":2"#));
}

#[test]
fn counterexample_scenario() {
    let r = run("counterexample.json");
    assert_eq!(r.verdict, Verdict::Pass);
    let res = &r.results[0].result;
    assert_eq!(res["obstruction"]["nonzero"], json!(true));
    assert_eq!(res["obstruction"]["divisors"], json!([2]));
    assert_eq!(res["obstruction"]["coordinates"], json!([1]));
    assert_eq!(res["equivalence"]["simple_counts_match"], json!(true));
    assert_eq!(res["hypothesis"]["crossed_center_dim"], json!(1));
}

#[test]
fn malformed_theta_is_a_validation_error() {
    match run_scenario(&read("malformed_theta.json"), &Overrides::default()) {
        Err(RunError::Validation(e)) => {
            assert_eq!(e.invariant, "theta_coherent");
            assert!(e.message.contains("(g, h, s) = (1, 1, 0)"), "{}", e.message);
        }
        other => panic!("expected a validation error, got {other:?}"),
    }
    let out = bin().args(["run", scenario_path("malformed_theta.json").to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(g, h, s) = (1, 1, 0)"));
}

#[test]
fn every_catalog_operation_runs_and_passes() {
    let mut seen = BTreeSet::new();
    for f in ["klein_all_ops.json", "quiver_all_ops.json", "counterexample.json", "inflation.json"] {
        let r = run(f);
        for a in &r.results {
            assert_eq!(a.verdict, Verdict::Pass, "{f}: {} {:?}", a.op, a.message);
            seen.insert(a.op.clone());
        }
    }
    let all: BTreeSet<String> = CATALOG.iter().map(|(op, _)| op.to_string()).collect();
    assert_eq!(seen, all);
}

#[test]
fn fixtures_run() {
    for (name, _, text) in FIXTURES {
        let r = run_scenario(text, &Overrides::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{name}");
    }
}

#[test]
fn empty_analyses_give_an_empty_result_list() {
    let r = run_scenario(r#"{"group": {"kind": "cyclic", "n": 3}, "backend": "sscat"}"#, &Overrides::default()).unwrap();
    let v: Value = serde_json::from_str(&emit_report(&r, Format::Json)).unwrap();
    assert_eq!(v["results"], json!([]));
    assert_eq!(r.verdict, Verdict::Pass);
}

#[test]
fn reports_are_deterministic_modulo_timing() {
    for f in ["klein_all_ops.json", "quiver_all_ops.json", "inflation.json"] {
        let a = run(f);
        let b = run(f);
        let ja = serde_json::to_string(&without_timing(&a)).unwrap();
        let jb = serde_json::to_string(&without_timing(&b)).unwrap();
        assert_eq!(ja, jb, "{f}");
    }
    let o = Overrides {
        seed: Some(99),
        ..Overrides::default()
    };
    let text = r#"{"group": {"kind": "dihedral", "n": 4}, "backend": "sscat",
                   "action": {"kind": "random", "max_orbits": 3},
                   "analyses": [{"op": "equivariant_simples"}, {"op": "hochschild"}]}"#;
    let a = run_scenario(text, &o).unwrap();
    let b = run_scenario(text, &o).unwrap();
    assert_eq!(without_timing(&a), without_timing(&b));
}

#[test]
fn text_output_has_every_verdict_line() {
    let r = run("klein_all_ops.json");
    let text = emit_report(&r, Format::Text);
    let lines: Vec<&str> = text.lines().collect();
    for a in &r.results {
        let head = format!("{} {} (", a.verdict.label(), a.op);
        assert!(lines.iter().any(|l| l.starts_with(&head)), "{head}");
    }
    assert!(lines.last().unwrap().starts_with("verdict PASS"));
}

#[test]
fn parse_errors_carry_locations() {
    let e = parse_scenario("{\n  \"backend\": \"sscat\",\n  \"group\": {\"kind\": \"cyclic\", \"n\": }\n}").unwrap_err();
    assert_eq!(e.exit_code(), 2);
    assert!(e.to_string().contains("line 3"), "{e}");
    let e = parse_scenario(r#"{"backend": "sscat", "analyses": [{"op": "quotient", "subgroup": [0], "sub": 1}]}"#).unwrap_err();
    assert!(e.to_string().contains("$.analyses[0].sub"), "{e}");
    let e = parse_scenario(r#"{"backend": "sscat", "analyses": [{"op": "no_such_op"}]}"#).unwrap_err();
    assert_eq!(e.exit_code(), 2);
    let e = parse_scenario(r#"{"backend": "sscat", "action": {"kind": "permutation", "simples": 1,
        "theta": [{"g": 1, "h": 1, "s": 0, "value": "1/0"}]}}"#)
    .unwrap_err();
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn comments_are_stripped() {
    let s = parse_scenario("// leading\n{\"backend\": /* inline */ \"sscat\"}\n").unwrap();
    assert_eq!(s.backend, Backend::Sscat);
}

#[test]
fn validation_errors_name_the_invariant() {
    let cases = [
        (r#"{"backend": "sscat", "group": {"kind": "cyclic", "n": 4}, "analyses": [{"op": "quotient", "subgroup": [0, 1]}]}"#, "normal_subgroup"),
        (r#"{"backend": "sscat", "group": {"kind": "cyclic", "n": 4}, "analyses": [{"op": "quotient", "subgroup": [7]}]}"#, "element_in_range"),
        (r#"{"backend": "sscat", "group": {"kind": "symmetric", "n": 3}, "analyses": [{"op": "quotient", "subgroup": [0, 1]}]}"#, "normal_subgroup"),
        (r#"{"backend": "sscat", "analyses": [{"op": "components"}]}"#, "action_present"),
        (r#"{"backend": "algcat", "action": {"kind": "trivial", "simples": 1}}"#, "backend_matches_action"),
        (r#"{"backend": "sscat", "group": {"kind": "cyclic", "n": 3},
             "action": {"kind": "permutation", "simples": 2, "generators": [{"element": 1, "perm": [1, 0]}]}}"#, "generators_extend"),
        (r#"{"backend": "sscat", "group": {"kind": "cyclic", "n": 2},
             "action": {"kind": "trivial", "simples": 1}, "analyses": [{"op": "center"}]}"#, "backend_matches_analysis"),
        (r#"{"backend": "sscat", "group": {"kind": "cyclic", "n": 2},
             "analyses": [{"op": "alpha_regular_classes", "twist": {"h2_class": 3}}]}"#, "h2_class"),
        (r#"{"backend": "sscat", "group": {"kind": "cyclic", "n": 3, "names": ["e", "x"]}}"#, "element_names"),
        (r#"{"backend": "sscat", "group": {"kind": "symmetric", "n": 3},
             "action": {"kind": "trivial", "simples": 1}, "analyses": [{"op": "reversion"}]}"#, "abelian_group"),
    ];
    for (text, inv) in cases {
        match run_scenario(text, &Overrides::default()) {
            Err(RunError::Validation(e)) => assert_eq!(e.invariant, inv, "{text}: {e}"),
            other => panic!("{text}: expected validation error `{inv}`, got {other:?}"),
        }
    }
}

#[test]
fn exit_codes() {
    let dir = std::env::temp_dir().join(format!("equivariantize-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p
    };
    let pass = scenario_path("components_trivial.json");
    let fail = write(
        "fail.json",
        r#"{"backend": "sscat", "group": {"kind": "cyclic", "n": 2}, "action": {"kind": "trivial", "simples": 1},
            "analyses": [{"op": "components", "expect": {"count_direct": 3}}]}"#,
    );
    let parse = write("parse.json", "{ not json");
    let error = write(
        "error.json",
        r#"{"backend": "sscat", "group": {"kind": "cyclic", "n": 6}, "analyses": [{"op": "cohomology", "degree": 4}]}"#,
    );
    let code = |args: &[&str]| bin().args(args).output().unwrap().status.code();
    assert_eq!(code(&["run", pass.to_str().unwrap()]), Some(0));
    assert_eq!(code(&["run", fail.to_str().unwrap()]), Some(1));
    assert_eq!(code(&["run", parse.to_str().unwrap()]), Some(2));
    assert_eq!(code(&["run", scenario_path("malformed_theta.json").to_str().unwrap()]), Some(3));
    assert_eq!(code(&["run", error.to_str().unwrap(), "--budget", "10"]), Some(4));
    assert_eq!(code(&["run", "trivial_components"]), Some(0));
    assert_eq!(code(&["catalog"]), Some(0));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn flags_override_environment() {
    let p = scenario_path("components_trivial.json");
    let seed_of = |c: &mut Command| -> Value {
        let out = c.output().unwrap();
        assert_eq!(out.status.code(), Some(0));
        serde_json::from_slice::<Value>(&out.stdout).unwrap()["seed"].clone()
    };
    let mut c = bin();
    c.args(["run", p.to_str().unwrap()]).env("EQUIVARIANTIZE_FORMAT", "json").env("EQUIVARIANTIZE_SEED", "5");
    assert_eq!(seed_of(&mut c), json!(5));
    let mut c = bin();
    c.args(["run", p.to_str().unwrap(), "--seed", "7"]).env("EQUIVARIANTIZE_FORMAT", "json").env("EQUIVARIANTIZE_SEED", "5");
    assert_eq!(seed_of(&mut c), json!(7));
    let mut c = bin();
    c.args(["run", p.to_str().unwrap(), "--format", "json", "--tolerance", "1e-9"]).env("EQUIVARIANTIZE_TOLERANCE", "1e-3");
    let out = c.output().unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tolerance"], json!(1e-9));
}

#[test]
fn output_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("equivariantize-out-{}.json", std::process::id()));
    let st = bin()
        .args(["run", "trivial_components", "--format", "json", "-o", path.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(st.success());
    let r = parse_report(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    std::fs::remove_file(path).ok();
}

#[test]
fn analysis_errors_name_the_stage() {
    let text = r#"{"backend": "sscat", "group": {"kind": "cyclic", "n": 6}, "analyses": [{"op": "cohomology", "degree": 4}]}"#;
    let r = run_scenario(
        text,
        &Overrides {
            budget: Some(10),
            ..Overrides::default()
        },
    )
    .unwrap();
    assert_eq!(r.verdict, Verdict::Error);
    assert_eq!(r.results[0].stage.as_deref(), Some("cohomology"));
    assert!(r.results[0].message.as_deref().unwrap().contains("budget"));
    assert_eq!(r.exit_code(), 4);
}

// Generated reports: random scenarios from a small pool, random payloads
// with floats, strings and nesting, random verdicts.

fn group_pool() -> Vec<GroupKind> {
    vec![
        GroupKind::Cyclic { n: 2 },
        GroupKind::Cyclic { n: 5 },
        GroupKind::Dihedral { n: 3 },
        GroupKind::Product {
            factors: vec![GroupKind::Cyclic { n: 2 }, GroupKind::Cyclic { n: 2 }],
        },
    ]
}

fn arb_leaf() -> impl Strategy<Value = Value> {
    prop_oneof![
        Just(Value::Null),
        any::<bool>().prop_map(Value::Bool),
        any::<i64>().prop_map(|x| json!(x)),
        any::<u64>().prop_map(|x| json!(x)),
        (-1e12f64..1e12).prop_map(|x| json!(x)),
        any::<f64>().prop_filter("finite", |x| x.is_finite()).prop_map(|x| json!(x)),
        "[a-z/0-9 ∘ℤ]{0,12}".prop_map(Value::String),
    ]
}

fn arb_value() -> impl Strategy<Value = Value> {
    arb_leaf().prop_recursive(3, 24, 4, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..4).prop_map(Value::Array),
            prop::collection::btree_map("[a-z_]{1,8}", inner, 0..4).prop_map(|m| Value::Object(m.into_iter().collect())),
        ]
    })
}

fn arb_verdict() -> impl Strategy<Value = Verdict> {
    prop_oneof![Just(Verdict::Pass), Just(Verdict::Fail), Just(Verdict::Error)]
}

fn arb_result() -> impl Strategy<Value = AnalysisResult> {
    (
        0usize..CATALOG.len(),
        arb_verdict(),
        arb_value(),
        prop::option::of("[ -~]{0,20}"),
        prop::option::of("[a-z_]{1,10}"),
        0.0f64..1e6,
    )
        .prop_map(|(i, verdict, result, message, stage, elapsed_ms)| AnalysisResult {
            op: CATALOG[i].0.to_string(),
            verdict,
            result,
            message,
            stage,
            elapsed_ms,
        })
}

fn arb_report() -> impl Strategy<Value = Report> {
    (
        0usize..4,
        any::<bool>(),
        prop::option::of(1e-14f64..1e-2),
        any::<u64>(),
        1usize..100_000_000,
        prop::collection::vec(arb_result(), 0..5),
        0.0f64..1e7,
        prop::option::of("[a-z_]{1,10}"),
    )
        .prop_map(|(gi, alg, tolerance, seed, budget, results, total_ms, name)| {
            let scenario = Scenario {
                name,
                group: GroupDecl {
                    spec: group_pool()[gi].clone(),
                    names: None,
                },
                backend: if alg { Backend::Algcat } else { Backend::Sscat },
                action: Default::default(),
                analyses: vec![Analysis {
                    op: Op::GroupInfo,
                    expect: Some(json!({"order": 2}).as_object().unwrap().clone()),
                }],
                tolerance,
                seed: Some(seed),
                budget: Some(budget),
            };
            Report {
                toolkit: "equivariantize".into(),
                version: "0.1.0".into(),
                scenario,
                seed,
                tolerance,
                budget,
                verdict: Report::overall(&results),
                results,
                timing: Timing { total_ms },
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn generated_reports_round_trip(r in arb_report()) {
        let json = emit_report(&r, Format::Json);
        let back = parse_report(&json).unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert_eq!(emit_report(&back, Format::Json), json);
    }

    #[test]
    fn executed_reports_round_trip(gi in 0usize..4, seed in any::<u64>(), orbits in 1usize..4) {
        let mut s = parse_scenario(r#"{"backend": "sscat", "action": {"kind": "random", "max_orbits": 1},
            "analyses": [{"op": "components"}, {"op": "equivariant_simples"}, {"op": "hochschild"}, {"op": "dual_group"}]}"#).unwrap();
        s.group = GroupDecl { spec: group_pool()[gi].clone(), names: None };
        s.action = equivariantize::scenario::ActionSpec::Random { max_orbits: orbits };
        let r = run_parsed(&s, &Overrides { seed: Some(seed), ..Overrides::default() }).unwrap();
        prop_assert_eq!(r.verdict, Verdict::Pass);
        let back = parse_report(&emit_report(&r, Format::Json)).unwrap();
        prop_assert_eq!(back, r);
    }
}
