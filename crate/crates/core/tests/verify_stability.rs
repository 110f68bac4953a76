use gdet_core::{verify_all, verify_lemma, LEMMA_IDS};

#[test]
fn window_64_agrees_with_window_32() {
    let small = verify_all(32).unwrap();
    let large = verify_all(64).unwrap();
    for (a, b) in small.iter().zip(&large) {
        assert_eq!(a.lemma_id, b.lemma_id);
        assert!(a.passed(), "{a}");
        assert!(b.passed(), "{b}");
        assert_eq!(a.modulus, b.modulus);
    }
    assert_eq!(large.len(), LEMMA_IDS.len());
}

#[test]
fn reports_are_deterministic() {
    let a = verify_lemma("3.4", 32).unwrap();
    let b = verify_lemma("3.4", 32).unwrap();
    assert_eq!(a.summary_line(), b.summary_line());
    assert_eq!(a.cases_enumerated, 32u64.pow(4));
}
