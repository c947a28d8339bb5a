use std::path::PathBuf;

use qsub::fusionring::{ring_load, ring_save, validate, FusionRing, RingError};

fn ring_file(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("rings").join(name)
}

#[test]
fn shipped_files_match_builtins() {
    for (file, sel) in [("h4.json", "h4"), ("h6.json", "h6"), ("i2_3.json", "i2:3"), ("i2_5.json", "i2:5")] {
        let loaded = ring_load(ring_file(file)).unwrap();
        let builtin = FusionRing::builtin(sel).unwrap();
        assert_eq!(loaded, builtin, "{file}");
        assert!(validate(&loaded).passed());
    }
}

#[test]
fn resolve_accepts_paths() {
    let r = FusionRing::resolve(ring_file("h4.json").to_str().unwrap()).unwrap();
    assert_eq!(r.name(), "h4");
    assert!(matches!(FusionRing::resolve("no-such-ring"), Err(RingError::UnknownRing(_))));
}

#[test]
fn save_load_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for n in [3, 5, 7, 9] {
        let ring = FusionRing::builtin(&format!("i2:{n}")).unwrap();
        let path = dir.path().join(format!("i2_{n}.json"));
        ring_save(&ring, &path).unwrap();
        assert_eq!(ring_load(&path).unwrap(), ring);
    }
}

fn corrupt(edit: impl Fn(&mut serde_json::Value)) -> Result<FusionRing, RingError> {
    let text = std::fs::read_to_string(ring_file("h4.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    edit(&mut v);
    FusionRing::from_json(&v.to_string())
}

fn failed_axiom(r: Result<FusionRing, RingError>) -> String {
    match r {
        Err(RingError::Axiom { axiom, .. }) => axiom.to_string(),
        other => panic!("expected an axiom failure, got {other:?}"),
    }
}

#[test]
fn corrupted_files_are_rejected() {
    // nu * nu loses its eta summand
    let a = failed_axiom(corrupt(|v| v["N"][1][1][2] = 0.into()));
    assert!(a == "associativity" || a == "frobenius-reciprocity" || a == "dimension-homomorphism", "{a}");
    let a = failed_axiom(corrupt(|v| v["N"][0][1][1] = 0.into()));
    assert_eq!(a, "unit");
    let a = failed_axiom(corrupt(|v| v["dims"][3] = "1/2-1/2*sqrt(13)".into()));
    assert!(a == "dimension-positivity" || a == "dimension-homomorphism", "{a}");
    assert!(matches!(corrupt(|v| v["rank"] = 5.into()), Err(_)));
    assert!(matches!(corrupt(|v| v["dims"][1] = "five".into()), Err(_)));
}
