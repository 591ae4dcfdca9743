//! Regression values measured once and pinned here.

use num_rational::Ratio;
use serde_json::Value;
use toeplitz_core::builder::{build_readout, initial_indicator};
use toeplitz_core::complexity::{block_census, find_claim_indices, sparse_pattern_search};
use toeplitz_core::{ScaleSpec, SymbolSequence};

fn fixtures() -> Value {
    serde_json::from_str(include_str!("fixtures/measured.json")).unwrap()
}

fn scale(spec: &Value, window: usize) -> toeplitz_core::Scale {
    spec.as_str()
        .unwrap()
        .parse::<ScaleSpec>()
        .unwrap()
        .materialize(window)
        .unwrap()
}

#[test]
fn claim_indices() {
    for case in fixtures()["claim_indices"].as_array().unwrap() {
        let window = case["window"].as_u64().unwrap() as usize;
        let want: Vec<usize> = serde_json::from_value(case["k"].clone()).unwrap();
        let got = find_claim_indices(&scale(&case["scale"], window), 20, window).unwrap();
        assert_eq!(got.k, want, "{}", case["scale"]);
        assert!(got.diagnostic.is_some());
    }
}

#[test]
fn zero_cap_frontier() {
    let f = &fixtures()["zero_cap_frontier"];
    let window = f["window"].as_u64().unwrap() as usize;
    let n = f["n"].as_u64().unwrap() as usize;
    let filling = build_readout(&SymbolSequence::zeros(window), &scale(&f["scale"], window), window).unwrap();
    let z = initial_indicator(&filling).unwrap();
    assert_eq!(block_census(&z, n, None).unwrap().count, f["uncapped"].as_u64().unwrap());
    for row in f["rows"].as_array().unwrap() {
        let cap = Ratio::new(10 + row["extra_zeros"].as_u64().unwrap(), n as u64);
        let r = block_census(&z, n, Some(cap)).unwrap();
        assert_eq!(r.count, row["count"].as_u64().unwrap());
    }
}

#[test]
fn sparse_patterns() {
    for case in fixtures()["sparse_pattern"].as_array().unwrap() {
        let window = case["window"].as_u64().unwrap() as usize;
        let s = scale(&case["scale"], window);
        let z = initial_indicator(&build_readout(&SymbolSequence::zeros(window), &s, window).unwrap()).unwrap();
        let m = case["m"].as_u64().unwrap() as usize;
        let at = case["position"].as_u64().unwrap() as usize;
        assert_eq!(sparse_pattern_search(&z, m), Some(at));
        // a weaker pattern appears no later
        if m > 1 {
            assert!(sparse_pattern_search(&z, m - 1).unwrap() <= at);
        }
    }
}
