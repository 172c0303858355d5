//! CLI surface tests: flags, formats, exit codes, determinism.

use mfdr::{run, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, EXIT_WINDOW};

fn mfdr_run(args: &[&str]) -> (i32, String, String) {
    let mut argv: Vec<String> = vec!["mfdr".into()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(&argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn expand_u_matches_known_values() {
    let (code, out, _) = mfdr_run(&["expand", "--poly", "u", "--order", "5", "--format", "text"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "valuation=0 trunc=5\n0: 1/12\n1: 20\n2: 180\n3: 560\n4: 1460\n");
}

#[test]
fn expand_output_is_deterministic() {
    let a = mfdr_run(&["expand", "--poly", "j", "--order", "12", "--format", "json"]);
    let b = mfdr_run(&["expand", "--poly", "j", "--order", "12", "--format", "json"]);
    assert_eq!(a, b);
    assert_eq!(a.0, EXIT_OK);
}

#[test]
fn pair_delta_f_minus_one() {
    let (code, out, _) = mfdr_run(&["pair", "--weight", "12", "--f", "delta", "--g", "f_-1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("1\n"), "got {out}");
    assert!(out.contains("convention:"));
}

#[test]
fn pair_strict_rejects_non_cuspidal() {
    let (code, _, err) = mfdr_run(&[
        "pair", "--weight", "12", "--f", "G12", "--g", "f_-1", "--strict",
    ]);
    assert_eq!(code, EXIT_DOMAIN);
    assert!(err.contains("non-cuspidal"), "got {err}");
    // without --strict the naive value is 1
    let (code, out, _) = mfdr_run(&["pair", "--weight", "12", "--f", "G12", "--g", "f_-1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("1\n"));
}

#[test]
fn unknown_command_is_usage_error() {
    let (code, _, err) = mfdr_run(&["frobnicate"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("Usage") || err.contains("usage"), "got {err}");
}

#[test]
fn domain_error_exit_code() {
    let (code, _, err) = mfdr_run(&["basis", "--weight", "13", "--order", "12"]);
    assert_eq!(code, EXIT_DOMAIN);
    assert!(err.contains("domain"), "got {err}");
}

#[test]
fn window_error_exit_code() {
    // a representative window too short for T_3 at weight 12
    let (code, _, err) = mfdr_run(&["hecke", "--p", "3", "--weight", "12", "--form", "f_-1", "--order", "10"]);
    assert_eq!(code, EXIT_WINDOW, "stderr: {err}");
}

#[test]
fn membership_round_trip_via_files() {
    let dir = std::env::temp_dir().join(format!("mfdr-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g12.series");
    let (code, out, _) = mfdr_run(&["expand", "--poly", "G12", "--order", "14", "--format", "text"]);
    assert_eq!(code, EXIT_OK);
    std::fs::write(&path, &out).unwrap();
    let (code, out, _) = mfdr_run(&["membership", "--weight", "12", "--input", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("weight=12 denom_pow=0;"), "got {out}");
    // not-in-ring input
    let bad = dir.join("bad.series");
    std::fs::write(&bad, "valuation=0 trunc=12\n0: 1\n1: 1\n").unwrap();
    let (code, _, err) = mfdr_run(&["membership", "--weight", "4", "--input", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_DOMAIN);
    assert!(err.contains("not in ring"), "got {err}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn basis_json_shape() {
    let (code, out, _) = mfdr_run(&["basis", "--weight", "12", "--order", "12", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["weight"], 12);
    let basis = v["basis"].as_array().unwrap();
    assert_eq!(basis.len(), 3);
    assert_eq!(basis[0]["ell"], 1);
    assert_eq!(basis[0]["coeffs"]["-1"], "1");
    assert_eq!(basis[0]["coeffs"]["2"], "47709536");
    assert!(basis[0]["certificate"].is_object());
}

#[test]
fn reduce_kills_exact_input() {
    // D^11 of u^2 v Delta^-2 expanded, fed back through reduce
    let dir = std::env::temp_dir().join(format!("mfdr-test-r-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("exact.series");
    let f = mfdr_core::ring::AlgForm::monomial(2, 1, 2);
    let image = f.expand(24).unwrap().bol(11);
    std::fs::write(&path, mfdr::formats::series_to_text(&image)).unwrap();
    let (code, out, _) = mfdr_run(&["reduce", "--weight", "12", "--input", path.to_str().unwrap(), "--order", "20"]);
    assert_eq!(code, EXIT_OK);
    // canonical representative of an exact class is the zero series
    let body: Vec<&str> = out.lines().filter(|l| l.contains(':') && !l.contains("certificate")).collect();
    assert!(body.is_empty(), "expected zero representative, got {out}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn phi_outputs_full_section() {
    let (code, out, _) = mfdr_run(&["phi", "--form", "j", "--weight", "0"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("S^0 T^0:"));
    // degree-10 section for a weight -10 input
    let dir = std::env::temp_dir().join(format!("mfdr-test-p-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("m10.alg");
    std::fs::write(&path, mfdr::formats::alg_to_text(&mfdr_core::ring::AlgForm::monomial(2, 1, 2))).unwrap();
    let (code, out, _) = mfdr_run(&["phi", "--form", path.to_str().unwrap(), "--weight", "-10"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 11);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn cocycle_identity_matrix_is_zero() {
    let (code, out, _) = mfdr_run(&[
        "cocycle", "--weight", "12", "--form", "delta", "--gamma", "1,0,0,1", "--prec", "20",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["degree"], 10);
    for c in v["coeffs"].as_array().unwrap() {
        assert!(c["re"].as_str().unwrap().starts_with("0.0"));
        assert!(c["im"].as_str().unwrap().starts_with("0.0"));
    }
}

#[test]
fn env_var_overrides_order() {
    // process-level env: set and clear around the call
    std::env::set_var("MFDR_ORDER", "6");
    let (code, out, _) = mfdr_run(&["expand", "--poly", "u", "--format", "text"]);
    std::env::remove_var("MFDR_ORDER");
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("valuation=0 trunc=6\n"), "got {out}");
}
