//! The JSON files under `fixtures/` must match the in-code fixtures.
//! Run with `INFOCOH_BLESS=1` to regenerate them.

use std::path::PathBuf;

use infocoh::fixtures;
use infocoh::fontene_ward::{AdmissibleSequence, BinomialTable};
use infocoh::structure::{InformationStructure, RawStructure};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn expected() -> Vec<(&'static str, String)> {
    let natural = BinomialTable::generate(&AdmissibleSequence::natural(), 10).unwrap();
    let q2 = BinomialTable::generate(&AdmissibleSequence::gaussian_int(2), 10).unwrap();
    let mixed = serde_json::json!({ "f1": natural.to_json_value(), "f2": q2.to_json_value() });
    vec![
        ("two_variable.json", fixtures::two_variable_example_raw().canonical().to_json()),
        ("two_component.json", fixtures::two_component_example().raw().canonical().to_json()),
        ("full_product_2x2.json", fixtures::full_product_raw(&[2, 2]).canonical().to_json()),
        ("full_product_2x3.json", fixtures::full_product_raw(&[2, 3]).canonical().to_json()),
        ("full_product_2x2x2.json", fixtures::full_product_raw(&[2, 2, 2]).canonical().to_json()),
        ("block_diagonal.json", fixtures::block_diagonal_raw().canonical().to_json()),
        ("binomials_natural.json", natural.to_json() + "\n"),
        ("binomials_mixed.json", serde_json::to_string_pretty(&mixed).unwrap() + "\n"),
    ]
}

#[test]
fn fixture_files_match() {
    let bless = std::env::var("INFOCOH_BLESS").is_ok_and(|v| v == "1");
    for (name, text) in expected() {
        let path = dir().join(name);
        if bless {
            std::fs::write(&path, &text).unwrap();
            continue;
        }
        let on_disk = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(on_disk, text, "{name} is stale; rerun with INFOCOH_BLESS=1");
    }
}

#[test]
fn structure_files_validate_and_round_trip() {
    for (name, _) in expected().iter().filter(|(n, _)| !n.starts_with("binomials")) {
        let text = std::fs::read_to_string(dir().join(name)).unwrap();
        let s = InformationStructure::from_json(&text).unwrap();
        let again = RawStructure::from_json(&s.to_json()).unwrap();
        assert_eq!(again.canonical(), s.raw().canonical(), "{name}");
    }
}
