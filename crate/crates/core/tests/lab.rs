use std::sync::Arc;

use ibc_core::lab::*;
use ibc_core::logic::Signature;

fn sig(n: usize) -> Arc<Signature> {
    Arc::new(Signature::standard(n).unwrap())
}

fn assert_passed(r: &LabReport) {
    assert!(r.passed(), "{}", r.to_text());
    assert!(!r.checks.is_empty());
}

#[test]
fn worked_trace() {
    let r = reproduce_table1().unwrap();
    assert_passed(&r);
    let c = r.check("C9PRIME fails for α = a, β = a ∨ b").unwrap();
    assert!(c.detail.contains("{01 00}") && c.detail.contains("{00}"), "{}", c.detail);
}

#[test]
fn base_and_iteration_at_two_atoms() {
    assert_passed(&verify_base(sig(2), 1).unwrap());
    let it = verify_iteration(sig(2), 1).unwrap();
    assert_passed(&it);
    assert!(it.notes.iter().any(|n| n == SCOPE_NOTE));
}

#[test]
fn correspondences() {
    assert_passed(&verify_acceptance(sig(2)).unwrap());
    assert_passed(&verify_contractional_correspondence(sig(2)).unwrap());
    assert_passed(&verify_invariance(sig(2)).unwrap());
}

#[test]
fn alpha_equivalence() {
    assert_passed(&verify_alpha_equivalence(sig(2)).unwrap());
    let cn = verify_cn_formulation(sig(3), 1000, 7).unwrap();
    assert_passed(&cn);
    assert_eq!(cn.checks[0].instances, 1000);
}

#[test]
fn enumeration_counts() {
    let r = verify_enumeration(&[1, 2, 3, 4, 5]).unwrap();
    assert_passed(&r);
    assert_eq!(r.checks.len(), 5);
}

#[test]
fn size_guards() {
    assert!(matches!(verify_contractional_correspondence(sig(3)), Err(LabError::TooLarge(_))));
    assert!(matches!(verify_alpha_equivalence(sig(3)), Err(LabError::TooLarge(_))));
    assert!(matches!(
        verify_theorem1(sig(3), Theorem1Budget::default()),
        Err(LabError::TooLarge(_))
    ));
}

// The full 100-operator run lives in the acceptance target.
#[test]
fn theorem1_small_budget() {
    let budget = Theorem1Budget {
        operators: 4,
        ..Default::default()
    };
    let r = verify_theorem1(sig(2), budget).unwrap();
    assert_passed(&r);
    let forward = &r.checks[0];
    assert!(forward.detail.starts_with("4 operators (4 distinct tables)"), "{}", forward.detail);
    for c in ["CR8", "CR9", "CR10", "CR11"] {
        assert!(r.check(&format!("reverse: dropping {c} yields a violating operator")).is_some());
    }
}

#[test]
fn reports_serialize() {
    let r = reproduce_table1().unwrap();
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(v["checks"].as_array().unwrap().len(), r.checks.len());
    assert!(v["checks"][0]["elapsed_ms"].is_number());
}

#[test]
#[ignore = "long: enumerates all 545835 orders on 8 worlds"]
fn enumeration_eight_worlds() {
    let start = std::time::Instant::now();
    let r = verify_enumeration(&[8]).unwrap();
    assert_passed(&r);
    assert_eq!(r.checks[0].instances, 545_835);
    assert!(start.elapsed().as_secs() < 120);
}
