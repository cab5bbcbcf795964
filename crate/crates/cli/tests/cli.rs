use std::path::PathBuf;

use num_complex::Complex64;
use proptest::prelude::*;
use serde_json::Value;

use fuchsian::curves::{curve_from_degree, Sign};
use fuchsian::golden::{compare, load_table, GoldenTable};
use fuchsian::uniformize::uniformize;
use fuchsian_cli::{run, Outcome};

fn cli(args: &[&str]) -> Outcome {
    run(args.iter().copied())
}

fn json(args: &[&str]) -> Value {
    let out = cli(args);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    serde_json::from_str(&out.stdout).expect("valid json")
}

fn table(name: &str) -> GoldenTable {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../golden");
    load_table(dir.join(format!("{name}.json"))).expect("golden table")
}

fn complex(v: &Value) -> Complex64 {
    Complex64::new(v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

/// Largest entry-wise deviation between the CLI's generator matrices and a golden table.
fn cli_deviation(name: &str) -> f64 {
    let t = table(name);
    let degree = t.degree.to_string();
    let base = t.base.to_string();
    let mut args = vec!["uniformize", "--degree", &degree, "--base", &base, "--precision", "12"];
    if t.convention == fuchsian::uniformize::Convention::Normalized {
        args.push("--normalize");
    }
    let doc = json(&args);
    let gens = doc["generators"].as_array().unwrap();
    let mut worst: f64 = 0.0;
    for g in &t.matrices {
        let entry = gens.iter().find(|e| e["partner"].as_u64() == Some(g.partner as u64)).expect("partner present");
        let m = &entry["matrix"];
        let got = [complex(&m[0][0]), complex(&m[0][1]), complex(&m[1][0]), complex(&m[1][1])];
        for (x, y) in got.iter().zip(g.values().unwrap()) {
            worst = worst.max((x.re - y.re).abs()).max((x.im - y.im).abs());
        }
    }
    worst
}

fn library_deviation(name: &str) -> f64 {
    let t = table(name);
    let c = curve_from_degree(t.degree, Sign::Minus).unwrap();
    compare(&t, &uniformize(&c, false).unwrap()).unwrap().max_abs()
}

// The CLI must report exactly what the library computes, including for the
// tables it does not reproduce.
#[test]
fn cli_matches_library() {
    for name in [
        "situation1_raw",
        "situation2_raw",
        "situation3_raw",
        "situation4_raw",
        "case1_normalized",
        "case2_normalized",
        "case3_normalized",
        "case4_normalized",
    ] {
        let cli = cli_deviation(name);
        let lib = library_deviation(name);
        assert!((cli - lib).abs() < 1e-10, "{name}: cli {cli:e} vs library {lib:e}");
    }
}

macro_rules! golden {
    ($($(#[$attr:meta])* $test:ident => $name:literal;)*) => {$(
        $(#[$attr])*
        #[test]
        fn $test() {
            let dev = cli_deviation($name);
            assert!(dev <= 1e-6, "{}: max deviation {dev:e}", $name);
        }
    )*};
}

// The ignored tables were printed from a shape parameter truncated to about
// seven digits; the exact value moves some entries by more than 1e-6.
golden! {
    #[ignore = "printed table deviates by 1.7e-6 from the exact shape parameter"]
    golden_situation1_raw => "situation1_raw";
    golden_situation2_raw => "situation2_raw";
    golden_situation3_raw => "situation3_raw";
    golden_situation4_raw => "situation4_raw";
    #[ignore = "printed table deviates by 8.7e-6 from the exact shape parameter"]
    golden_case1_normalized => "case1_normalized";
    #[ignore = "printed table deviates by 3.0e-6 from the exact shape parameter"]
    golden_case2_normalized => "case2_normalized";
    golden_case3_normalized => "case3_normalized";
    golden_case4_normalized => "case4_normalized";
}

#[test]
fn genus_range_output() {
    let out = cli(&["genus-range", "2", "8"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "g_min=0 g_max=3\n");
    assert_eq!(cli(&["genus-range", "0", "3"]).code, 2);
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["--help"]).code, 0);
    assert_eq!(cli(&["--version"]).code, 0);
    assert_eq!(cli(&[]).code, 2);
    assert_eq!(cli(&["uniformize"]).code, 2);
    assert_eq!(cli(&["uniformize", "--degree", "4"]).code, 2);
    assert_eq!(cli(&["uniformize", "--degree", "5", "--format", "xml"]).code, 2);
    assert_eq!(cli(&["uniformize", "--degree", "5", "--base", "9"]).code, 2);
    assert_eq!(cli(&["tessellation"]).code, 2);
    assert_eq!(cli(&["tessellation", "--degree", "5", "--pq", "8,8"]).code, 2);
    assert_eq!(cli(&["ode", "classify", "--named", "airy"]).code, 2);
    assert_eq!(cli(&["ode", "build", "--degree", "9"]).code, 2);

    let bad = cli(&["verify", "--degree", "9"]);
    assert_eq!(bad.code, 2);
    assert!(bad.stderr.starts_with("error:"));
    assert!(bad.stdout.is_empty());
}

#[test]
fn verify_passes_for_supported_degrees() {
    for n in ["5", "6", "7", "10"] {
        let out = cli(&["verify", "--degree", n]);
        assert_eq!(out.code, 0, "{}", out.stdout);
        assert!(!out.stdout.contains("FAIL"));
        assert!(!out.stdout.contains("WARNING"));
    }
}

#[test]
fn verify_warns_on_degree_eight() {
    let out = cli(&["verify", "--degree", "8"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.contains("WARNING degenerate generator set"));
    assert!(out.stdout.contains("S1S5 is the identity"));
    for pair in ["S1S2 and S1S6", "S1S3 and S1S7", "S1S4 and S1S8"] {
        assert!(out.stdout.contains(pair), "{pair}");
    }
}

#[test]
fn uniformize_report_contents() {
    let doc = json(&["uniformize", "--degree", "6", "--channel", "2,8"]);
    assert_eq!(doc["schema_version"], "1");
    assert_eq!(doc["curve"]["genus"], 2);
    assert_eq!(doc["parameters"]["alpha"], serde_json::json!([1, 6]));
    assert_eq!(doc["tessellation"], serde_json::json!({"p": 10, "q": 5}));
    assert_eq!(doc["generators"].as_array().unwrap().len(), 5);
    assert_eq!(doc["genus_range"], serde_json::json!({"m": 2, "n": 8, "g_min": 0, "g_max": 3}));

    let normalized = json(&["uniformize", "--degree", "6", "--normalize"]);
    for g in normalized["generators"].as_array().unwrap() {
        let det = complex(&g["determinant"]);
        assert!((det - 1.0).norm() < 1e-6, "{det}");
    }
}

#[test]
fn plus_sign_curve() {
    let doc = json(&["uniformize", "--degree", "5", "--sign", "plus"]);
    assert_eq!(doc["curve"]["equation"], "y^2 = z^5 + 1");
    assert_eq!(doc["curve"]["sign"], "plus");
}

#[test]
fn table_format() {
    let out = cli(&["uniformize", "--degree", "5", "--format", "table", "--precision", "4"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("curve         y^2 = z^5 - 1\n"));
    assert!(out.stdout.contains("tessellation  {8,8}"));
    assert_eq!(out.stdout.matches("hyperbolic").count(), 4);
    assert!(out.stdout.contains("1.3090+0.9511i"));
    assert!(!out.stdout.contains("-0.0000"));
}

#[test]
fn svg_format() {
    let out = cli(&["uniformize", "--degree", "7", "--format", "svg"]);
    assert_eq!(out.code, 0);
    let s = out.stdout;
    assert!(s.starts_with("<svg"));
    assert!(s.trim_end().ends_with("</svg>"));
    assert_eq!(s.matches("<path").count(), 7);
    assert_eq!(s.matches("fill=\"crimson\"").count(), 7);
}

#[test]
fn tessellation_command() {
    let doc = json(&["tessellation", "--degree", "7"]);
    assert_eq!(doc["tessellation"], serde_json::json!({"p": 12, "q": 12}));
    assert_eq!(doc["hyperbolic"], true);
    assert!((doc["area"].as_f64().unwrap() - 8.0 * std::f64::consts::PI).abs() < 1e-6);
    assert_eq!(doc["topology"]["genus"], 3);

    let flat = json(&["tessellation", "--pq", "4,4"]);
    assert_eq!(flat["hyperbolic"], false);
    assert_eq!(flat["euclidean_limit"], true);
}

#[test]
fn ode_commands() {
    let doc = json(&["ode", "classify", "--named", "hypergeometric", "--params", "0.5", "1.5,-0.25", "2"]);
    assert_eq!(doc["fuchsian"], true);
    assert_eq!(doc["singular_points"].as_array().unwrap().len(), 3);
    assert_eq!(doc["params"]["b"], serde_json::json!([1.5, -0.25]));

    let w = json(&["ode", "classify", "--named", "whittaker"]);
    assert_eq!(w["fuchsian"], true);

    let plain = json(&["ode", "build", "--degree", "7"]);
    assert_eq!(plain["fuchsian"], true);
    // a nonzero constant term makes infinity irregular
    let shifted = json(&["ode", "build", "--degree", "7", "--k1", "-1,0.5", "--k2", "2"]);
    assert_eq!(shifted["fuchsian"], false);
    assert_eq!(shifted["params"]["k1"], serde_json::json!([-1.0, 0.5]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn json_reserializes_byte_for_byte(
        degree in prop::sample::select(vec![5u32, 6, 7, 8, 10]),
        precision in 0usize..=12,
        normalize in any::<bool>(),
    ) {
        let d = degree.to_string();
        let p = precision.to_string();
        let mut args = vec!["uniformize", "--degree", d.as_str(), "--precision", p.as_str()];
        if normalize {
            args.push("--normalize");
        }
        let out = cli(&args);
        prop_assert_eq!(out.code, 0);
        let parsed: Value = serde_json::from_str(&out.stdout).unwrap();
        let mut again = serde_json::to_string_pretty(&parsed).unwrap();
        again.push('\n');
        prop_assert_eq!(&again, &out.stdout);
        prop_assert_eq!(&cli(&args).stdout, &out.stdout);
    }
}
