//! Log-space evaluations against 50-digit references from `fixtures/gen_reference.py`.

use pgrand_core::analytic::{avg_correctable_fraction, error_probability, hamming_bound_yield, PgrandModelPoint};
use pgrand_core::noise::{binomial_pmf, werner_entropy};
use serde_json::Value;

fn reference() -> Value {
    serde_json::from_str(include_str!("fixtures/reference.json")).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_str().unwrap().parse().unwrap()
}

fn close(got: f64, want: f64, rel: f64, abs: f64) -> bool {
    (got - want).abs() <= rel * want.abs() + abs
}

#[test]
fn correctable_fractions() {
    for e in reference()["fractions"].as_array().unwrap() {
        let (n, k, w) = (
            e["n"].as_u64().unwrap() as usize,
            e["k"].as_u64().unwrap() as usize,
            e["w"].as_u64().unwrap() as usize,
        );
        let pt = PgrandModelPoint::new(n, k, 0.01, n).unwrap();
        let got = avg_correctable_fraction(&pt, w);
        let want = num(&e["value"]);
        // deep-tail values like e^-660 inherit the exponent's absolute rounding
        let rel = if want > 1e-30 { 1e-12 } else { 1e-10 };
        assert!(close(got, want, rel, 0.0), "n={n} k={k} w={w}: {got:e} vs {want:e}");
    }
}

#[test]
fn binomial_weights() {
    for e in reference()["pmf"].as_array().unwrap() {
        let n = e["n"].as_u64().unwrap() as usize;
        let w = e["w"].as_u64().unwrap() as usize;
        let p = num(&e["p"]);
        let got = binomial_pmf(n, p, w).unwrap();
        let want = num(&e["value"]);
        assert!(close(got, want, 1e-11, 0.0), "n={n} p={p} w={w}: {got} vs {want}");
    }
}

#[test]
fn protocol_error_probability() {
    for e in reference()["error_probability"].as_array().unwrap() {
        let n = e["n"].as_u64().unwrap() as usize;
        let k = e["k"].as_u64().unwrap() as usize;
        let t = e["t"].as_u64().unwrap() as usize;
        let p = num(&e["p"]);
        let got = error_probability(&PgrandModelPoint::new(n, k, p, t).unwrap()).unwrap();
        let want = num(&e["value"]);
        assert!(close(got, want, 1e-10, 0.0), "n={n} k={k} p={p} t={t}: {got} vs {want}");
    }
}

#[test]
fn hamming_grid() {
    let grid = reference()["hamming"].as_array().unwrap().clone();
    assert_eq!(grid.len(), 100);
    for e in &grid {
        let p = num(&e["p"]);
        let (got, want) = (hamming_bound_yield(p), num(&e["value"]));
        assert!(close(got, want, 1e-10, 1e-14), "p={p}: {got} vs {want}");
    }
}

#[test]
fn werner_entropy_grid() {
    let grid = reference()["werner_entropy"].as_array().unwrap().clone();
    assert_eq!(grid.len(), 100);
    for e in &grid {
        let f = num(&e["f"]);
        let (got, want) = (werner_entropy(f).unwrap(), num(&e["value"]));
        assert!(close(got, want, 1e-10, 1e-12), "F={f}: {got} vs {want}");
    }
}
