use ambipref::verify::{verify, SeedRange, Suite, VerifyParams};

const GOLDEN: &str = "tests/golden/verify_seeds_0_2.json";

// Regenerate with UPDATE_GOLDEN=1 after an intended schema change.
#[test]
fn verify_report_matches_golden_file() {
    let report = verify(&Suite::ALL, SeedRange::new(0, 2), &VerifyParams::default()).unwrap();
    let text = serde_json::to_string_pretty(&report).unwrap() + "\n";
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join(GOLDEN);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &text).unwrap();
    }
    let golden = std::fs::read_to_string(&path).unwrap();
    assert!(text == golden, "report drifted from {GOLDEN}; rerun with UPDATE_GOLDEN=1 if intended");
    let parsed: serde_json::Value = serde_json::from_str(&golden).unwrap();
    assert_eq!(parsed["schema_version"], 1);
    assert_eq!(parsed["suites"].as_array().unwrap().len(), 11);
}
