use std::path::PathBuf;
use std::process::Command;

use fluctuation::cli::{run_with, EXIT_CONFIG, EXIT_DISAGREE, EXIT_OK, FLUID_CONFIG};

fn write_config(name: &str, text: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut full = vec!["fluctuation"];
    full.extend_from_slice(args);
    let code = run_with(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn check_summarizes_the_problem() {
    let path = write_config("check.cfg", FLUID_CONFIG);
    let (code, out, _) = run(&["check", &path]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("E+: e+; E-: e-"));
    assert!(out.contains("breakpoints [2.0, 8.0]"));
}

#[test]
fn passage_reports_the_fluid_value() {
    let path = write_config("passage.cfg", FLUID_CONFIG);
    let (code, out, _) = run(&["--json", "passage", &path]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["value"].as_f64().unwrap() - 0.6501).abs() <= 2e-3);
    assert_eq!(v["method"], "gaver-stehfest");
    assert_eq!(v["M"], 5);
    assert!(v["residual"].as_f64().unwrap() <= 1e-8);
    assert!(v["wall_ms"].is_null());
}

#[test]
fn json_field_order_is_fixed() {
    let path = write_config("order.cfg", FLUID_CONFIG);
    let (_, out, _) = run(&["--json", "compare", &path, "--paths", "2000"]);
    let keys = [
        "command", "inputs_digest", "value", "std_error", "residual", "method", "M", "seed", "wall_ms", "verdict",
    ];
    let mut at = 0;
    for k in keys {
        let pos = out.find(&format!("\"{k}\"")).unwrap_or_else(|| panic!("missing {k}"));
        assert!(pos >= at, "{k} out of order");
        at = pos;
    }
}

#[test]
fn compare_is_byte_reproducible() {
    let path = write_config("repro.cfg", FLUID_CONFIG);
    let a = run(&["--json", "compare", &path, "--paths", "20000", "--seed", "3"]);
    let b = run(&["--json", "compare", &path, "--paths", "20000", "--seed", "3"]);
    assert_eq!(a, b);
    assert_eq!(a.0, EXIT_OK);
    assert!(a.1.contains("\"verdict\":\"AGREE\""));
}

#[test]
fn timings_only_when_asked() {
    let path = write_config("timings.cfg", FLUID_CONFIG);
    let (_, out, _) = run(&["--json", "--timings", "passage", &path]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["wall_ms"].as_f64().unwrap() >= 0.0);
}

#[test]
fn truncated_simulation_disagrees() {
    // paths cut at t = 0.3 rarely get to cross, so the estimate is biased low
    let text = FLUID_CONFIG.replace("[mc]\n", "[mc]\nhorizon = 0.3\n");
    let path = write_config("truncated.cfg", &text);
    let (code, out, _) = run(&["compare", &path]);
    assert_eq!(code, EXIT_DISAGREE, "{out}");
    assert!(out.contains("DISAGREE"));
}

#[test]
fn config_errors_name_the_field() {
    let bad = FLUID_CONFIG.replace("discount = 0.5", "discount = -1.0");
    let (code, _, err) = run(&["check", &write_config("bad1.cfg", &bad)]);
    assert_eq!(code, EXIT_CONFIG);
    assert!(err.contains("discount"), "{err}");

    let bad = FLUID_CONFIG.replace("\"e-\" = -3.0", "\"e-\" = 0.0");
    let (code, _, err) = run(&["check", &write_config("bad2.cfg", &bad)]);
    assert_eq!(code, EXIT_CONFIG);
    assert!(err.contains("e-"), "{err}");

    let bad = format!("{FLUID_CONFIG}\n[extra]\nx = 1\n");
    let (code, _, err) = run(&["check", &write_config("bad3.cfg", &bad)]);
    assert_eq!(code, EXIT_CONFIG);
    assert!(err.contains("extra"), "{err}");

    let (code, _, _) = run(&["check", "/nonexistent/problem.cfg"]);
    assert_eq!(code, EXIT_CONFIG);
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, EXIT_CONFIG);
}

#[test]
fn talbot_needs_a_scalar_problem() {
    let three = r#"
states = ["a", "b", "c"]
breakpoints = [1.0]
discount = 0.5
generators = [
  [[-2.0, 1.0, 1.0], [1.0, -2.0, 1.0], [1.0, 1.0, -2.0]],
  [[-1.0, 0.5, 0.5], [0.5, -1.0, 0.5], [0.5, 0.5, -1.0]],
]

[drift]
a = 1.0
b = 2.0
c = -1.0

[functional]
kind = "pi+"
from = "c"
to = "a"
"#;
    let path = write_config("three.cfg", three);
    assert_eq!(run(&["passage", &path]).0, EXIT_OK);
    let (code, _, err) = run(&["passage", &path, "--method", "talbot"]);
    assert_eq!(code, EXIT_CONFIG, "{err}");
}

#[test]
fn binary_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_fluctuation");
    let path = write_config("bin.cfg", FLUID_CONFIG);
    let ok = Command::new(exe).args(["check", &path]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let bad = Command::new(exe).args(["check", "/nonexistent/problem.cfg"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_CONFIG));
    let fluid = Command::new(exe).args(["example-fluid", "--paths", "20000"]).output().unwrap();
    assert_eq!(fluid.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&fluid.stdout).contains("AGREE (within 3 SE)"));
}
