use jolt_wasm::{bracket_json, classify_json, factorize_json, zeta_rays_json};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).expect("valid JSON")
}

#[test]
fn classify_counterexample() {
    let v = parse(&classify_json("corpus:counterexample_1_4", 0, 0, 0));
    assert_eq!(v["affine_integrable"], true);
    assert_eq!(v["shear"], false);
    assert_eq!(v["rank"], 4);
    let v = parse(&classify_json("q1^2*p1", 1, 0, 0));
    assert_eq!(v["affine_integrable"], false);
}

#[test]
fn zeta_depends_on_the_ray_only() {
    // p3, p4 plane of the counterexample.
    let v = parse(&zeta_rays_json("corpus:counterexample_1_4", 0, 0, 6, 7, 64));
    assert!(v["max_scale_gap"].as_f64().unwrap() < 1e-9);
    let valid: Vec<&Value> = v["zeta"].as_array().unwrap().iter().filter(|z| !z.is_null()).collect();
    assert!(valid.len() > 32);
    let first = valid[0][0][0].as_f64().unwrap();
    assert!(valid.iter().any(|z| (z[0][0].as_f64().unwrap() - first).abs() > 1e-3));
}

#[test]
fn shear_zeta_is_flat() {
    let v = parse(&zeta_rays_json("p1^3 + p1*p2^2", 2, 0, 2, 3, 32));
    let valid: Vec<&Value> = v["zeta"].as_array().unwrap().iter().filter(|z| !z.is_null()).collect();
    assert!(!valid.is_empty());
    for z in valid {
        for row in z.as_array().unwrap() {
            for e in row.as_array().unwrap() {
                assert!(e.as_f64().unwrap().abs() < 1e-12);
            }
        }
    }
}

#[test]
fn factorize_and_bracket() {
    let v = parse(&factorize_json("corpus:counterexample_1_4", 0, 0, 0));
    assert_eq!(v["factorization"]["h3"], "-p3^3*p4^3");
    assert_eq!(v["factorization"]["residual"], "exact");
    assert_eq!(parse(&bracket_json("q1", "p1", 1, 0))["bracket"], "1");
}

#[test]
fn errors_are_reported_as_json() {
    let v = parse(&classify_json("q1 +", 1, 0, 0));
    assert_eq!(v["error"], "Parse");
    let v = parse(&zeta_rays_json("p1^2", 1, 0, 0, 5, 16));
    assert_eq!(v["error"], "Precondition");
    let v = parse(&factorize_json("p1^2", 1, 0, 0));
    assert_eq!(v["error"], "NotCubic");
}
